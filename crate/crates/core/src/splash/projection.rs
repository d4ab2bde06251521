//! Vertical projection of a point onto a graph-like stretch of the interface.

use crate::error::{Result, SheetError};
use crate::geometry::CurveInterpolant;
use crate::vec2::Vec2;

/// Interface point directly below or above a query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub label: f64,
    pub point: Vec2,
}

const SAMPLES_PER_UNIT: f64 = 512.0;

/// Label `α ∈ window` with `η₁(α) = p₁`.
///
/// The window must be a graph over the horizontal axis: if `η₁'` changes sign
/// or `η₁ − p₁` has several roots in it the result is [`SheetError::NonMonotone`].
pub fn vertical_projection(
    curve: &CurveInterpolant,
    p: Vec2,
    window: (f64, f64),
) -> Result<Projection> {
    let (a, b) = window;
    if !(b > a) {
        return Err(SheetError::InvalidInput(format!("empty window [{a}, {b}]")));
    }
    let m = ((b - a) * SAMPLES_PER_UNIT).ceil().max(64.0) as usize;
    let mut crossings = Vec::new();
    let mut turns = 0usize;
    let (q0, d0) = curve.eval(a);
    let (mut f_prev, mut s_prev) = (q0.x - p.x, d0.x);
    let mut x_prev = a;
    for i in 1..=m {
        let x = a + (b - a) * i as f64 / m as f64;
        let (q, d) = curve.eval(x);
        let f = q.x - p.x;
        if f == 0.0 || (f_prev != 0.0 && (f > 0.0) != (f_prev > 0.0)) {
            crossings.push((x_prev, x));
        }
        if (d.x > 0.0) != (s_prev > 0.0) {
            turns += 1;
        }
        f_prev = f;
        s_prev = d.x;
        x_prev = x;
    }
    if crossings.len() > 1 || (turns > 0 && !crossings.is_empty()) {
        return Err(SheetError::NonMonotone {
            crossings: crossings.len(),
        });
    }
    let Some(&(mut lo, mut hi)) = crossings.first() else {
        return Err(SheetError::NoIntersection(p.x));
    };
    let g = |x: f64| curve.position(x).x - p.x;
    let up = g(hi) > g(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (q, d) = curve.eval(x);
        let f = q.x - p.x;
        if f.abs() <= 1e-15 * (1.0 + p.x.abs()) {
            break;
        }
        if (f > 0.0) == up {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo < 1e-15 * (1.0 + x.abs()) {
            break;
        }
        let newton = x - f / d.x;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(Projection {
        label: x,
        point: curve.position(x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curve;

    #[test]
    fn graph_projection_hits_the_abscissa() {
        let c = Curve::from_fn(64, 2.0 * std::f64::consts::PI, |x| {
            Vec2::new(x + 0.1 * x.sin(), 0.3 * (2.0 * x).cos())
        })
        .unwrap()
        .interpolant();
        let pr = vertical_projection(&c, Vec2::new(1.234, 5.0), (0.5, 2.0)).unwrap();
        assert!((pr.point.x - 1.234).abs() < 1e-13);
        assert!(matches!(
            vertical_projection(&c, Vec2::new(4.0, 0.0), (0.5, 2.0)),
            Err(SheetError::NoIntersection(_))
        ));
    }

    #[test]
    fn folded_window_is_rejected() {
        let c = Curve::from_fn(64, 2.0 * std::f64::consts::PI, |x| {
            Vec2::new(x + 1.5 * (2.0 * x).sin(), 0.1 * x.sin())
        })
        .unwrap()
        .interpolant();
        let r = vertical_projection(&c, Vec2::new(1.0, 0.0), (0.0, 3.0));
        assert!(matches!(r, Err(SheetError::NonMonotone { crossings }) if crossings >= 2));
    }
}
