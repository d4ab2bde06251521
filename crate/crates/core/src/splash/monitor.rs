//! Run-time monitors: an advected marker region and the metric ratio.

use serde::{Deserialize, Serialize};

use super::phase::{signed_area, PhaseTester};
use crate::birkhoff_rott::{nearest_node, side_of, velocity_gradient_at, InterfaceState, Integrator, Side};
use crate::error::{Result, SheetError};
use crate::geometry::geometry;
use crate::vec2::Vec2;

/// Closed polygon of passive tracers inside Ω⁻.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkerRegion {
    pub vertices: Vec<Vec2>,
}

impl MarkerRegion {
    /// Counterclockwise square with `per_side` vertices on each edge.
    pub fn square(centre: Vec2, side: f64, per_side: usize) -> Self {
        let h = 0.5 * side;
        let corners = [
            Vec2::new(-h, -h),
            Vec2::new(h, -h),
            Vec2::new(h, h),
            Vec2::new(-h, h),
        ];
        let mut vertices = Vec::with_capacity(4 * per_side);
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for i in 0..per_side {
                vertices.push(centre + a + (b - a) * (i as f64 / per_side as f64));
            }
        }
        MarkerRegion { vertices }
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Fails with the first vertex outside Ω⁻ or within two node spacings of the interface.
    pub fn check_inside(&self, state: &InterfaceState) -> Result<()> {
        let phase = PhaseTester::new(&state.curve);
        let speeds = state.curve.speeds();
        let h = state.curve.grid().spacing();
        for (i, &p) in self.vertices.iter().enumerate() {
            let (k, d) = nearest_node(&state.curve, p);
            if !phase.in_minus(p) || d < 2.0 * h * speeds[k] {
                return Err(SheetError::MarkerEscaped(i));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaSeries {
    pub times: Vec<f64>,
    pub areas: Vec<f64>,
}

impl AreaSeries {
    /// Largest `|A(t) − A(0)| / A(0)`.
    pub fn max_relative_drift(&self) -> f64 {
        let a0 = self.areas[0];
        self.areas
            .iter()
            .map(|a| ((a - a0) / a0).abs())
            .fold(0.0, f64::max)
    }
}

/// Advects `region` with the flow for `steps` steps, recording the enclosed
/// area every `every` steps.
pub fn marker_area_monitor(
    initial: &InterfaceState,
    integrator: &Integrator,
    region: &MarkerRegion,
    steps: usize,
    every: usize,
) -> Result<AreaSeries> {
    let mut state = initial.clone();
    let mut reg = region.clone();
    reg.check_inside(&state)?;
    let mut out = AreaSeries {
        times: vec![state.time],
        areas: vec![reg.area()],
    };
    for k in 1..=steps {
        let (next, pts) = integrator.step_with_tracers(&state, &reg.vertices)?;
        state = next;
        reg.vertices = pts;
        reg.check_inside(&state)?;
        if k % every.max(1) == 0 || k == steps {
            out.times.push(state.time);
            out.areas.push(reg.area());
        }
    }
    Ok(out)
}

/// `sup|∇u⁻|` near the interface against `min|η'|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub time: f64,
    pub min_speed: f64,
    pub sup_gradient: f64,
    /// `sup|∇u⁻| · min|η'|`; stays bounded while the parametrisation is healthy.
    pub ratio: f64,
}

/// Probes sit three local spacings from each node along the normal, in Ω⁻;
/// probes that land near another stretch of the interface are skipped.
pub fn metric_sample(state: &InterfaceState) -> Result<MetricSample> {
    let g = geometry(&state.curve)?;
    let h = state.curve.grid().spacing();
    let speeds = state.curve.speeds();
    let probes: Vec<Vec2> = (0..state.n_points())
        .map(|j| state.curve.positions()[j] + g.normal[j] * (3.0 * h * speeds[j]))
        .filter(|&p| {
            let (k, d) = nearest_node(&state.curve, p);
            d >= 2.5 * h * speeds[k] && side_of(&state.curve, p) == Side::Minus
        })
        .collect();
    let min_speed = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup_gradient = velocity_gradient_at(state, &probes, Side::Minus)?
        .iter()
        .map(|(_, m)| m.max_abs())
        .fold(0.0, f64::max);
    Ok(MetricSample {
        time: state.time,
        min_speed,
        sup_gradient,
        ratio: sup_gradient * min_speed,
    })
}
