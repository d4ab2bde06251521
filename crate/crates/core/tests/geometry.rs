use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vortex_sheet::geometry::{
    chord_arc, curve_length, detect_self_intersection, geometry, tangent_lipschitz_check,
    tangential_derivative, Curve,
};
use vortex_sheet::Vec2;

/// Arc length of a smooth parametrisation from 0 to each node, by composite
/// 16-point Gauss–Legendre on every grid interval of the exact speed.
fn arc_oracle(speed: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    // Nodes/weights on [-1, 1] by Newton on the Legendre polynomial.
    let m = 16;
    let mut nodes = Vec::new();
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    let h = 2.0 * PI / n as f64;
    let mut s = vec![0.0];
    for j in 0..n {
        let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
        let seg: f64 = nodes
            .iter()
            .map(|(x, w)| w * speed(0.5 * (a + b) + 0.5 * (b - a) * x))
            .sum::<f64>()
            * 0.5
            * (b - a);
        s.push(s[j] + seg);
    }
    s
}

fn dumbbell_speed(gap: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        let (s, c) = x.sin_cos();
        let dx = -2.0 * s;
        let dy = c * (0.5 * gap + c * c) - 2.0 * s * s * c;
        dx.hypot(dy)
    }
}

#[test]
fn dumbbell_chord_arc_matches_exhaustive_scan() {
    let (n, gap) = (128, 1e-3);
    let curve = Curve::dumbbell(n, gap, 1.0).unwrap();
    let s = arc_oracle(dumbbell_speed(gap), n);
    let total = s[n];
    let excl = 3.0 * total / n as f64 * (1.0 - 1e-9);
    let p = curve.positions();
    let mut best = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            let d = s[b] - s[a];
            let arc = d.min(total - d);
            if arc >= excl {
                best = best.min((p[a] - p[b]).norm() / arc);
            }
        }
    }
    assert!((curve_length(&curve) - total).abs() < 1e-12);
    assert!((chord_arc(&curve) - best).abs() < 1e-12);
    // The extremal pair spans the neck: chord ≈ gap over half the perimeter.
    let neck = gap / (0.5 * total);
    assert!((best - neck).abs() < 0.2 * neck, "{best} {neck}");
}

#[test]
fn dumbbell_contact_is_exactly_the_neck() {
    let (n, gap) = (128, 1e-3);
    let curve = Curve::dumbbell(n, gap, 1.0).unwrap();
    let s = arc_oracle(dumbbell_speed(gap), n);
    let total = s[n];
    let excl = 5.0 * total / n as f64 * (1.0 + 1e-9);
    let p = curve.positions();
    let mut expected = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let d = s[b] - s[a];
            if (p[a] - p[b]).norm() < 1e-2 && d.min(total - d) > excl {
                expected.push((a, b));
            }
        }
    }
    let mut got: Vec<(usize, usize)> = detect_self_intersection(&curve, 1e-2)
        .pairs
        .iter()
        .map(|c| (c.label_a.min(c.label_b), c.label_a.max(c.label_b)))
        .collect();
    got.sort();
    assert!(!expected.is_empty());
    assert_eq!(got, expected);
    // Only the neck: labels near π/2 and 3π/2.
    for (a, b) in got {
        assert!((a as i64 - 32).abs() <= 2 && (b as i64 - 96).abs() <= 2, "{a} {b}");
    }
}

fn radial_curve(n: usize, coeffs: &[(f64, f64)]) -> Curve {
    Curve::from_fn(n, 0.0, |x| {
        let r = 1.0
            + coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, ph))| a * ((k + 2) as f64 * x + ph).cos())
                .sum::<f64>();
        Vec2::new(r * x.cos(), r * x.sin())
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chord_arc_is_rigid_motion_invariant(
        coeffs in prop::collection::vec((-0.08..0.08f64, 0.0..std::f64::consts::TAU), 4),
        angle in -3.0..3.0f64,
        dx in -5.0..5.0f64,
        dy in -5.0..5.0f64,
    ) {
        let c = radial_curve(64, &coeffs);
        let moved = c.rigid_motion(angle, Vec2::new(dx, dy));
        prop_assert!((chord_arc(&c) - chord_arc(&moved)).abs() < 1e-12);
    }

    #[test]
    fn frame_is_orthonormal_and_position_derivative_is_tangent(
        coeffs in prop::collection::vec((-0.08..0.08f64, 0.0..std::f64::consts::TAU), 4),
    ) {
        let c = radial_curve(64, &coeffs);
        let g = geometry(&c).unwrap();
        let x: Vec<f64> = c.positions().iter().map(|p| p.x).collect();
        let y: Vec<f64> = c.positions().iter().map(|p| p.y).collect();
        let tx = tangential_derivative(&x, &c).unwrap();
        let ty = tangential_derivative(&y, &c).unwrap();
        for j in 0..64 {
            let (t, nn) = (g.tangent[j], g.normal[j]);
            prop_assert!(t.dot(nn).abs() < 1e-12);
            prop_assert!((t.norm() - 1.0).abs() < 1e-12 && (nn.norm() - 1.0).abs() < 1e-12);
            prop_assert!((nn - t.perp()).norm() < 1e-12);
            prop_assert!((g.metric_inv[j] * g.deta[j].norm() - 1.0).abs() < 1e-12);
            prop_assert!((tx[j] - t.x).abs() < 1e-10 && (ty[j] - t.y).abs() < 1e-10);
        }
    }
}

#[test]
fn tangent_lipschitz_on_random_band_limited_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..100 {
        let modes: Vec<(f64, f64)> = (0..5)
            .map(|_| (rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)))
            .collect();
        let c = Curve::from_fn(64, 2.0 * PI, |x| {
            let y = modes
                .iter()
                .enumerate()
                .map(|(k, (a, b))| a * ((k + 1) as f64 * x).cos() + b * ((k + 1) as f64 * x).sin())
                .sum();
            Vec2::new(x, y)
        })
        .unwrap();
        let r = tangent_lipschitz_check(&c).unwrap();
        assert!(r.passes, "{r:?}");
    }
}

/// Ellipse with semi-axes 2 and 1 parametrised by polar angle: analytic but
/// not a trigonometric polynomial, so the spectral error is visible.
fn polar_ellipse(n: usize) -> Curve {
    Curve::from_fn(n, 0.0, |x| {
        let r = 1.0 / (0.25 * x.cos().powi(2) + x.sin().powi(2)).sqrt();
        Vec2::new(r * x.cos(), r * x.sin())
    })
    .unwrap()
}

fn ellipse_curvature_error(n: usize) -> f64 {
    let c = polar_ellipse(n);
    let g = geometry(&c).unwrap();
    c.positions()
        .iter()
        .zip(&g.curvature)
        .map(|(p, h)| {
            let (ct, st) = (p.x / 2.0, p.y);
            let exact = 2.0 / (4.0 * st * st + ct * ct).powf(1.5);
            (h - exact).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn ellipse_geometry_converges_spectrally() {
    let e: Vec<f64> = [16, 32, 64, 128, 256].iter().map(|&n| ellipse_curvature_error(n)).collect();
    // Each doubling gains more than the previous one: faster than any power of 1/N.
    for k in 0..3 {
        assert!(e[k + 1] / e[k + 2] > 2.0 * e[k] / e[k + 1], "{e:?}");
    }
    assert!(e[4] < 1e-10, "{e:?}");
}

#[test]
fn graph_curvature_identity_at_n256() {
    let c = Curve::from_fn(256, 2.0 * PI, |x| {
        Vec2::new(x + 0.1 * x.sin(), 0.2 * (2.0 * x).cos() + 0.05 * (3.0 * x).sin())
    })
    .unwrap();
    let g = geometry(&c).unwrap();
    // G (G η')' = H n componentwise.
    let tx: Vec<f64> = g.tangent.iter().map(|t| t.x).collect();
    let ty: Vec<f64> = g.tangent.iter().map(|t| t.y).collect();
    let dx = tangential_derivative(&tx, &c).unwrap();
    let dy = tangential_derivative(&ty, &c).unwrap();
    for j in 0..256 {
        let hn = g.normal[j] * g.curvature[j];
        assert!((dx[j] - hn.x).abs() < 1e-8 && (dy[j] - hn.y).abs() < 1e-8);
    }
}
