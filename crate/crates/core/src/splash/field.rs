//! Velocity fields of the upper phase, live or synthetic.

use std::f64::consts::PI;

use crate::birkhoff_rott::{InterfaceState, SheetQuadrature, VelocityField};
use crate::error::Result;
use crate::geometry::CurveInterpolant;
use crate::spectral::TrigInterpolant;
use crate::vec2::{Mat2, Vec2};

/// A velocity field on the closure of the upper phase Ω⁻.
pub trait MinusField: Sync {
    /// Velocity at a point inside Ω⁻.
    fn velocity(&self, p: Vec2) -> Vec2;

    /// Gradient `[[∂u₁/∂x₁, ∂u₁/∂x₂], [∂u₂/∂x₁, ∂u₂/∂x₂]]` inside Ω⁻.
    fn gradient(&self, p: Vec2) -> Mat2;

    /// Interface limit of the velocity at label `alpha` and its label derivative.
    fn on_curve(&self, curve: &CurveInterpolant, alpha: f64) -> (Vec2, Vec2) {
        let (p, dp) = curve.eval(alpha);
        (self.velocity(p), self.gradient(p).apply(dp))
    }

    /// Distance from the interface near `p` below which interior evaluation
    /// is unreliable. Zero for closed-form fields.
    fn resolution_near(&self, _p: Vec2) -> f64 {
        0.0
    }
}

/// Affine field `u(y) = A y + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub a: Mat2,
    pub b: Vec2,
}

impl MinusField for LinearField {
    fn velocity(&self, p: Vec2) -> Vec2 {
        self.a.apply(p) + self.b
    }

    fn gradient(&self, _p: Vec2) -> Mat2 {
        self.a
    }
}

/// Field of a live sheet: Birkhoff–Rott sums on a Fourier-refined copy of the
/// sheet inside Ω⁻, trigonometric interpolation of nodal `u⁻` on the interface.
pub struct LiveField {
    quad: SheetQuadrature,
    ux: TrigInterpolant,
    uy: TrigInterpolant,
    nodes: Vec<Vec2>,
    spacing: Vec<f64>,
    period: f64,
    refine: usize,
}

/// Refinement used by [`LiveField`].
pub const LIVE_REFINE: usize = 64;

impl LiveField {
    pub fn new(state: &InterfaceState, vel: &VelocityField) -> Result<Self> {
        let quad = SheetQuadrature::off_curve(state, LIVE_REFINE)?;
        let h = 2.0 * PI / state.n_points() as f64;
        Ok(LiveField {
            quad,
            ux: TrigInterpolant::new(&vel.u_minus.iter().map(|u| u.x).collect::<Vec<_>>()),
            uy: TrigInterpolant::new(&vel.u_minus.iter().map(|u| u.y).collect::<Vec<_>>()),
            nodes: state.curve.positions().to_vec(),
            spacing: state.curve.speeds().iter().map(|s| s * h).collect(),
            period: state.curve.period(),
            refine: LIVE_REFINE,
        })
    }
}

impl MinusField for LiveField {
    fn velocity(&self, p: Vec2) -> Vec2 {
        self.quad.velocity(p)
    }

    fn gradient(&self, p: Vec2) -> Mat2 {
        self.quad.velocity_and_gradient(p).1
    }

    fn on_curve(&self, _curve: &CurveInterpolant, alpha: f64) -> (Vec2, Vec2) {
        let (x, dx) = self.ux.eval_with_derivative(alpha);
        let (y, dy) = self.uy.eval_with_derivative(alpha);
        (Vec2::new(x, y), Vec2::new(dx, dy))
    }

    /// The refined trapezoid sum is at round-off beyond `6 Δs / m` from the
    /// sheet, `Δs` the local node spacing and `m` the refinement.
    fn resolution_near(&self, p: Vec2) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for (q, s) in self.nodes.iter().zip(&self.spacing) {
            let mut d = p - *q;
            if self.period > 0.0 {
                d.x -= self.period * (d.x / self.period).round();
            }
            let r = d.norm();
            if r < best.0 {
                best = (r, *s);
            }
        }
        6.0 * best.1 / self.refine as f64
    }
}

/// Field given by closures, e.g. a manufactured time-dependent field frozen at one instant.
pub struct FnField<V, G>
where
    V: Fn(Vec2) -> Vec2 + Sync,
    G: Fn(Vec2) -> Mat2 + Sync,
{
    pub velocity: V,
    pub gradient: G,
}

impl<V, G> MinusField for FnField<V, G>
where
    V: Fn(Vec2) -> Vec2 + Sync,
    G: Fn(Vec2) -> Mat2 + Sync,
{
    fn velocity(&self, p: Vec2) -> Vec2 {
        (self.velocity)(p)
    }

    fn gradient(&self, p: Vec2) -> Mat2 {
        (self.gradient)(p)
    }
}
