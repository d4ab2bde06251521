//! One-sided velocities, the evolution of (η, s), and RK4 time stepping.

use super::config::{SimConfig, RHO_MINUS, RHO_PLUS};
use super::kernel::{br_velocity, velocity_at};
use super::state::{InterfaceState, Side, VelocityField};
use crate::error::{Result, SheetError};
use crate::geometry::{geometry, Curve, GeometrySnapshot};
use crate::spectral;
use crate::vec2::Vec2;

/// `u± = W ± (s/2) τ`.
pub fn one_sided(state: &InterfaceState, average: Vec<Vec2>, geom: &GeometrySnapshot) -> VelocityField {
    let (u_plus, u_minus) = average
        .iter()
        .zip(&state.strength)
        .zip(&geom.tangent)
        .map(|((w, s), t)| (*w + *t * (0.5 * s), *w - *t * (0.5 * s)))
        .unzip();
    VelocityField {
        average,
        u_plus,
        u_minus,
    }
}

/// `∇_T u·τ = G u'·τ` for nodal velocity samples.
pub fn tangential_stretch(u: &[Vec2], geom: &GeometrySnapshot) -> Vec<f64> {
    let ux = spectral::derivative(&u.iter().map(|v| v.x).collect::<Vec<_>>());
    let uy = spectral::derivative(&u.iter().map(|v| v.y).collect::<Vec<_>>());
    (0..u.len())
        .map(|j| geom.metric_inv[j] * Vec2::new(ux[j], uy[j]).dot(geom.tangent[j]))
        .collect()
}

/// `ds/dt = −(∇_T u⁺·τ) s + σ ∇_T H − g (ρ⁺ − ρ⁻) τ₂`.
pub fn strength_rate(state: &InterfaceState, vel: &VelocityField, geom: &GeometrySnapshot, config: &SimConfig) -> Vec<f64> {
    let stretch = tangential_stretch(&vel.u_plus, geom);
    let buoyancy = config.gravity * (RHO_PLUS - RHO_MINUS);
    (0..state.n_points())
        .map(|j| {
            -stretch[j] * state.strength[j] + config.surface_tension * geom.curvature_tangential_derivative[j]
                - buoyancy * geom.tangent[j].y
        })
        .collect()
}

/// The interface moves with the upper-phase velocity: `dη/dt = u⁻`.
pub fn position_rate(vel: &VelocityField) -> Vec<Vec2> {
    vel.u_minus.clone()
}

/// Geometry, velocities and rates for one state.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub geometry: GeometrySnapshot,
    pub velocity: VelocityField,
    pub position_rate: Vec<Vec2>,
    pub strength_rate: Vec<f64>,
}

pub fn evaluate(state: &InterfaceState, config: &SimConfig) -> Result<Evaluation> {
    let geom = geometry(&state.curve)?;
    let w = br_velocity(state)?;
    let vel = one_sided(state, w, &geom);
    let ds = strength_rate(state, &vel, &geom, config);
    Ok(Evaluation {
        position_rate: position_rate(&vel),
        strength_rate: ds,
        geometry: geom,
        velocity: vel,
    })
}

fn axpy_state(base: &InterfaceState, dt: f64, deta: &[Vec2], ds: &[f64]) -> Result<InterfaceState> {
    let pos = base
        .curve
        .positions()
        .iter()
        .zip(deta)
        .map(|(p, d)| *p + *d * dt)
        .collect();
    let s = base.strength.iter().zip(ds).map(|(s, d)| s + d * dt).collect();
    Ok(InterfaceState {
        curve: Curve::new(pos, base.curve.period())?,
        strength: s,
        time: base.time + dt,
    })
}

/// Magnitude used for the blow-up guard: largest periodic displacement or strength.
fn field_scale(state: &InterfaceState) -> f64 {
    let (a, b) = state.curve.periodic_components();
    let sup = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    sup(&a).max(sup(&b)).max(sup(&state.strength))
}

/// RK4 stepper with the round-off filter and a blow-up guard relative to the
/// state it was created from.
#[derive(Debug, Clone)]
pub struct Integrator {
    pub config: SimConfig,
    guard: f64,
}

impl Integrator {
    pub fn new(config: SimConfig, initial: &InterfaceState) -> Result<Self> {
        config.validate()?;
        let scale = field_scale(initial).max(initial.curve.length_scale());
        Ok(Integrator {
            config,
            guard: 1e6 * scale,
        })
    }

    pub fn step(&self, state: &InterfaceState) -> Result<InterfaceState> {
        Ok(self.step_with_tracers(state, &[])?.0)
    }

    /// Advance the state and passive tracers in the upper phase by one step
    /// with the same RK4 stages.
    pub fn step_with_tracers(&self, state: &InterfaceState, tracers: &[Vec2]) -> Result<(InterfaceState, Vec<Vec2>)> {
        let dt = self.config.dt;
        let tracer_rate = |st: &InterfaceState, pts: &[Vec2]| -> Result<Vec<Vec2>> {
            if pts.is_empty() {
                Ok(Vec::new())
            } else {
                velocity_at(st, pts, Side::Minus)
            }
        };
        let shift = |pts: &[Vec2], v: &[Vec2], h: f64| -> Vec<Vec2> {
            pts.iter().zip(v).map(|(p, d)| *p + *d * h).collect()
        };

        let k1 = evaluate(state, &self.config)?;
        let m1 = tracer_rate(state, tracers)?;
        let s2 = axpy_state(state, 0.5 * dt, &k1.position_rate, &k1.strength_rate)?;
        let t2 = shift(tracers, &m1, 0.5 * dt);
        let k2 = evaluate(&s2, &self.config)?;
        let m2 = tracer_rate(&s2, &t2)?;
        let s3 = axpy_state(state, 0.5 * dt, &k2.position_rate, &k2.strength_rate)?;
        let t3 = shift(tracers, &m2, 0.5 * dt);
        let k3 = evaluate(&s3, &self.config)?;
        let m3 = tracer_rate(&s3, &t3)?;
        let s4 = axpy_state(state, dt, &k3.position_rate, &k3.strength_rate)?;
        let t4 = shift(tracers, &m3, dt);
        let k4 = evaluate(&s4, &self.config)?;
        let m4 = tracer_rate(&s4, &t4)?;

        let n = state.n_points();
        let combine = |a: Vec2, b: Vec2, c: Vec2, d: Vec2| (a + (b + c) * 2.0 + d) * (1.0 / 6.0);
        let deta: Vec<Vec2> = (0..n)
            .map(|j| combine(k1.position_rate[j], k2.position_rate[j], k3.position_rate[j], k4.position_rate[j]))
            .collect();
        let ds: Vec<f64> = (0..n)
            .map(|j| (k1.strength_rate[j] + 2.0 * (k2.strength_rate[j] + k3.strength_rate[j]) + k4.strength_rate[j]) / 6.0)
            .collect();
        let next = axpy_state(state, dt, &deta, &ds)?;
        let next = self.filter(next)?;
        let moved = (0..tracers.len())
            .map(|i| tracers[i] + combine(m1[i], m2[i], m3[i], m4[i]) * dt)
            .collect();

        let mag = field_scale(&next);
        if !mag.is_finite() || mag > self.guard {
            return Err(SheetError::UnstableStep {
                time: next.time,
                magnitude: mag,
                limit: self.guard,
            });
        }
        Ok((next, moved))
    }

    fn filter(&self, mut st: InterfaceState) -> Result<InterfaceState> {
        let thr = self.config.filter_threshold;
        if thr <= 0.0 {
            return Ok(st);
        }
        let (mut a, mut b) = st.curve.periodic_components();
        spectral::krasny_filter(&mut a, thr);
        spectral::krasny_filter(&mut b, thr);
        spectral::krasny_filter(&mut st.strength, thr);
        let grid = st.curve.grid();
        let slope = st.curve.period() / (2.0 * std::f64::consts::PI);
        let h = grid.spacing();
        let pos = (0..grid.n_points())
            .map(|j| Vec2::new(a[j] + slope * h * j as f64, b[j]))
            .collect();
        st.curve = Curve::new(pos, st.curve.period())?;
        Ok(st)
    }
}

/// One RK4 step; the blow-up guard is taken relative to `state` itself.
pub fn step(state: &InterfaceState, config: &SimConfig) -> Result<InterfaceState> {
    Integrator::new(config.clone(), state)?.step(state)
}
