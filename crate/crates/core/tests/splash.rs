use std::f64::consts::PI;

use proptest::prelude::*;
use vortex_sheet::birkhoff_rott::{evaluate, stable_dt, InterfaceState, Integrator, SimConfig};
use vortex_sheet::geometry::Curve;
use vortex_sheet::harness::preset;
use vortex_sheet::splash::{
    bracket_constant, extract_matrices, label_at_arc_offset, lateral_brackets, marker_area_monitor,
    vertical_projection, MarkerRegion,
};
use vortex_sheet::{SheetError, Vec2};

fn graph_curve() -> Curve {
    Curve::from_fn(128, 2.0 * PI, |x| Vec2::new(x + 0.3 * x.sin(), 0.2 * (2.0 * x).cos())).unwrap()
}

/// Root of `x + 0.3 sin x = p` by plain bisection on the exact map.
fn exact_label(p: f64) -> f64 {
    let (mut lo, mut hi) = (p - 1.0, p + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + 0.3 * mid.sin() < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_matches_exact_graph_root(px in 0.5..5.5f64, py in -1.0..1.0f64) {
        let interp = graph_curve().interpolant();
        let want = exact_label(px);
        let got = vertical_projection(&interp, Vec2::new(px, py), (want - 0.4, want + 0.5)).unwrap();
        prop_assert!((got.label - want).abs() < 1e-12, "{} vs {}", got.label, want);
        prop_assert!((got.point.x - px).abs() < 1e-12);
        prop_assert!((got.point.y - 0.2 * (2.0 * want).cos()).abs() < 1e-12);
    }
}

#[test]
fn projection_outside_the_window_has_no_intersection() {
    let interp = graph_curve().interpolant();
    let r = vertical_projection(&interp, Vec2::new(5.0, 0.0), (1.0, 2.0));
    assert!(matches!(r, Err(SheetError::NoIntersection(_))));
}

#[test]
fn circle_brackets_match_chord_geometry() {
    let radius = 0.7;
    let c = Curve::circle(256, radius).unwrap();
    let top = PI / 2.0;
    for eps in [0.05, 0.2, 0.5] {
        let c7 = bracket_constant(&c, top, 0.5, eps).unwrap();
        assert!((c7 - (1.0 + eps) / radius).abs() < 1e-10);
        let r = lateral_brackets(&c, top, eps, c7, 0.0).unwrap();
        let chord = radius * (r.arc / radius).sin();
        assert!((r.left_offset - chord).abs() < 1e-10);
        assert!((r.right_offset - chord).abs() < 1e-10);
        assert!(r.passes, "{r:?}");
    }
}

#[test]
fn arc_offsets_on_a_graph_match_quadrature() {
    let c = graph_curve();
    let speed = |x: f64| {
        let (dx, dy) = (1.0 + 0.3 * x.cos(), -0.4 * (2.0 * x).sin());
        (dx * dx + dy * dy).sqrt()
    };
    let start = 1.2;
    let end = label_at_arc_offset(&c, start, 0.9);
    // Composite Simpson on the exact speed.
    let m = 2000;
    let h = (end - start) / m as f64;
    let arc: f64 = (0..=m)
        .map(|i| {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * speed(start + i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    assert!((arc - 0.9).abs() < 1e-10, "{arc}");
}

#[test]
fn live_decomposition_closes_on_the_near_approach_start() {
    let sc = preset("near-approach").unwrap();
    let mut state = sc.initial_state().unwrap();
    let integ = Integrator::new(sc.config.clone(), &state).unwrap();
    let mut frames = Vec::new();
    for _ in 0..3 {
        let ev = evaluate(&state, &sc.config).unwrap();
        frames.push((state.clone(), ev.velocity));
        for _ in 0..20 {
            state = integ.step(&state).unwrap();
        }
    }
    let [l0, l1] = sc.pairs[0];
    let ms = extract_matrices(&frames, l0, l1, 0.12).unwrap();
    for (d, m) in ms.decompositions.iter().zip(&ms.matrices) {
        let rel = d.residual() / d.direct.norm();
        assert!(rel < 1e-6, "relative residual {rel}");
        assert!(m.0.iter().flatten().all(|v| v.is_finite()));
    }
}

fn wavy_state(n: usize) -> InterfaceState {
    let c = Curve::from_fn(n, 2.0 * PI, |x| Vec2::new(x, 0.05 * (2.0 * x).cos())).unwrap();
    InterfaceState::new(c, vec![0.0; n], 0.0).unwrap()
}

#[test]
fn marker_area_is_conserved_above_a_capillary_wave() {
    let st = wavy_state(64);
    let dt = stable_dt(&st.curve, 1.0);
    let integ = Integrator::new(SimConfig::new(dt, 1.0), &st).unwrap();
    let region = MarkerRegion::square(Vec2::new(PI, 0.6), 0.2, 16);
    let series = marker_area_monitor(&st, &integ, &region, 200, 20).unwrap();
    assert_eq!(series.areas.len(), 11);
    assert!((series.areas[0] - 0.04).abs() < 1e-14);
    assert!(series.max_relative_drift() < 1e-3, "{}", series.max_relative_drift());
}

#[test]
fn marker_below_the_sheet_is_rejected() {
    let st = wavy_state(64);
    let integ = Integrator::new(SimConfig::new(1e-3, 1.0), &st).unwrap();
    let region = MarkerRegion::square(Vec2::new(PI, -0.6), 0.2, 8);
    assert!(matches!(
        marker_area_monitor(&st, &integ, &region, 1, 1),
        Err(SheetError::MarkerEscaped(_))
    ));
}
