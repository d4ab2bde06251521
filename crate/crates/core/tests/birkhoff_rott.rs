use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vortex_sheet::birkhoff_rott::{
    br_velocity, evaluate, stable_dt, velocity_at, velocity_gradient_at, InterfaceState, Integrator, Side,
    SimConfig,
};
use vortex_sheet::geometry::Curve;
use vortex_sheet::Vec2;

fn wavy(n: usize, a: f64) -> Curve {
    Curve::from_fn(n, 2.0 * PI, |x| Vec2::new(x, a * x.sin())).unwrap()
}

/// Unit circulation density: s = 1/|η'| for η = (x, a sin x).
fn unit_gamma_state(n: usize, a: f64) -> InterfaceState {
    let c = wavy(n, a);
    let s = (0..n)
        .map(|j| 1.0 / (1.0 + (a * (2.0 * PI * j as f64 / n as f64).cos()).powi(2)).sqrt())
        .collect();
    InterfaceState::new(c, s, 0.0).unwrap()
}

/// Alternate-point cotangent sum `u − iv = (1/4πi) Σ 2h γ_k cot((z_j − z_k)/2)` with γ ≡ 1.
fn cot_oracle(n: usize, a: f64, targets: &[usize]) -> Vec<Vec2> {
    let h = 2.0 * PI / n as f64;
    let z: Vec<Complex64> = (0..n)
        .map(|k| {
            let x = k as f64 * h;
            Complex64::new(x, a * x.sin())
        })
        .collect();
    targets
        .iter()
        .map(|&j| {
            let mut w = Complex64::new(0.0, 0.0);
            for k in (0..n).filter(|k| (k + n - j) % 2 == 1) {
                let d = (z[j] - z[k]) * 0.5;
                w += 2.0 * h * d.cos() / d.sin();
            }
            w /= Complex64::new(0.0, 4.0 * PI);
            Vec2::new(w.re, -w.im)
        })
        .collect()
}

#[test]
fn perturbed_sheet_matches_refined_reference() {
    let (n, fine, a) = (256, 4096, 0.01);
    let got = br_velocity(&unit_gamma_state(n, a)).unwrap();
    let targets: Vec<usize> = (0..n).map(|j| j * (fine / n)).collect();
    let want = cot_oracle(fine, a, &targets);
    for (g, w) in got.iter().zip(&want) {
        assert!((*g - *w).norm() < 1e-9, "{g:?} {w:?}");
    }
}

#[test]
fn flat_sheet_with_constant_strength() {
    let c = Curve::flat(64).unwrap();
    let st = InterfaceState::new(c, vec![0.8; 64], 0.0).unwrap();
    let ev = evaluate(&st, &SimConfig::new(1e-3, 1.0)).unwrap();
    for j in 0..64 {
        assert!(ev.velocity.average[j].norm() < 1e-14, "{:?}", ev.velocity.average[j]);
        assert!((ev.velocity.u_plus[j] - Vec2::new(0.4, 0.0)).norm() < 1e-14);
        assert!((ev.velocity.u_minus[j] - Vec2::new(-0.4, 0.0)).norm() < 1e-14);
        assert!(ev.strength_rate[j].abs() < 1e-12, "{}", ev.strength_rate[j]);
        assert!((ev.position_rate[j] - Vec2::new(-0.4, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn jump_conditions_and_normal_speed() {
    let c = Curve::from_fn(128, 2.0 * PI, |x| Vec2::new(x + 0.1 * x.sin(), 0.2 * (2.0 * x).cos())).unwrap();
    let s: Vec<f64> = (0..128).map(|j| 0.5 + 0.3 * (j as f64 * 2.0 * PI / 128.0).sin()).collect();
    let st = InterfaceState::new(c, s.clone(), 0.0).unwrap();
    let ev = evaluate(&st, &SimConfig::new(1e-3, 1.0)).unwrap();
    let v = &ev.velocity;
    for j in 0..128 {
        let (t, n) = (ev.geometry.tangent[j], ev.geometry.normal[j]);
        let du = v.u_plus[j] - v.u_minus[j];
        assert!((du.dot(t) - s[j]).abs() < 1e-12);
        assert!(du.dot(n).abs() < 1e-15);
        assert!(((v.u_plus[j] + v.u_minus[j]) * 0.5 - v.average[j]).norm() < 1e-12);
        assert!((ev.position_rate[j].dot(n) - v.u_plus[j].dot(n)).abs() < 1e-12);
    }
}

#[test]
fn strength_rate_matches_linearization() {
    let (n, a, k) = (128, 1e-3, 2.0);
    let c = Curve::from_fn(n, 2.0 * PI, |x| Vec2::new(x, a * (k * x).sin())).unwrap();
    let st = InterfaceState::new(c, vec![0.0; n], 0.0).unwrap();
    let ev = evaluate(&st, &SimConfig::new(1e-3, 1.0)).unwrap();
    let scale = a * k.powi(3);
    for j in 0..n {
        let x = 2.0 * PI * j as f64 / n as f64;
        let lin = -a * k.powi(3) * (k * x).cos();
        assert!((ev.strength_rate[j] - lin).abs() < 1e-4 * scale, "{j}");
    }
}

#[test]
fn circle_without_strength_is_at_rest() {
    let st = InterfaceState::new(Curve::circle(64, 1.3).unwrap(), vec![0.0; 64], 0.0).unwrap();
    let ev = evaluate(&st, &SimConfig::new(1e-3, 1.0)).unwrap();
    let worst = ev.strength_rate.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    // σ∇_T H on a circle is a spectral third derivative of round-off.
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn translated_sheet_has_the_same_velocity() {
    let st = unit_gamma_state(128, 0.2);
    let moved = InterfaceState::new(
        st.curve.map_positions(|p| p + Vec2::new(0.7, -3.1)),
        st.strength.clone(),
        0.0,
    )
    .unwrap();
    let (a, b) = (br_velocity(&st).unwrap(), br_velocity(&moved).unwrap());
    for (u, v) in a.iter().zip(&b) {
        assert!((*u - *v).norm() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn closed_curve_velocity_rotates_with_the_curve(angle in -3.1..3.1f64, amp in -0.2..0.2f64) {
        let c = Curve::from_fn(64, 0.0, |x| {
            let r = 1.0 + amp * (3.0 * x).cos();
            Vec2::new(r * x.cos(), r * x.sin())
        }).unwrap();
        let s: Vec<f64> = (0..64).map(|j| (j as f64 * 0.3).sin()).collect();
        let st = InterfaceState::new(c.clone(), s.clone(), 0.0).unwrap();
        let rot = InterfaceState::new(c.rigid_motion(angle, Vec2::new(0.3, 0.1)), s, 0.0).unwrap();
        let (a, b) = (br_velocity(&st).unwrap(), br_velocity(&rot).unwrap());
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u.rotate(angle) - *v).norm() < 1e-12);
        }
    }
}

#[test]
fn off_curve_field_is_divergence_and_curl_free() {
    let c = Curve::from_fn(128, 2.0 * PI, |x| Vec2::new(x, 0.2 * x.sin())).unwrap();
    let s: Vec<f64> = (0..128).map(|j| 1.0 + 0.5 * (j as f64 * 2.0 * PI / 128.0).cos()).collect();
    let st = InterfaceState::new(c, s, 0.0).unwrap();
    let h = 1e-4;
    for &p in &[Vec2::new(1.0, 0.6), Vec2::new(4.0, 0.3), Vec2::new(2.5, 1.5)] {
        let pts = [
            p + Vec2::new(h, 0.0),
            p - Vec2::new(h, 0.0),
            p + Vec2::new(0.0, h),
            p - Vec2::new(0.0, h),
        ];
        let u = velocity_at(&st, &pts, Side::Minus).unwrap();
        let dudx = (u[0] - u[1]) * (0.5 / h);
        let dudy = (u[2] - u[3]) * (0.5 / h);
        assert!((dudx.x + dudy.y).abs() < 1e-6, "div");
        assert!((dudx.y - dudy.x).abs() < 1e-6, "curl");
        let (_, g) = velocity_gradient_at(&st, &[p], Side::Minus).unwrap()[0];
        let fd = [[dudx.x, dudy.x], [dudx.y, dudy.y]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((g.0[r][c] - fd[r][c]).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn flat_equilibrium_survives_a_thousand_steps() {
    let c = Curve::flat(32).unwrap();
    let st0 = InterfaceState::new(c.clone(), vec![1.0; 32], 0.0).unwrap();
    let dt = stable_dt(&c, 1.0);
    let integ = Integrator::new(SimConfig::new(dt, 1000.0 * dt), &st0).unwrap();
    let mut st = st0.clone();
    for _ in 0..1000 {
        st = integ.step(&st).unwrap();
    }
    for j in 0..32 {
        let p = st.curve.positions()[j];
        let p0 = st0.curve.positions()[j];
        assert!(p.y.abs() < 1e-12);
        assert!((p.x - (p0.x - 0.5 * st.time)).abs() < 1e-10);
        assert!((st.strength[j] - 1.0).abs() < 1e-12);
    }
}
