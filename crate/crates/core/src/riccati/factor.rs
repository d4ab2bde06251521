//! Closed-form strength along a trajectory by an integrating factor.

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_26,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    (0..8).map(|i| GL_WEIGHTS[i] * f(m + r * GL_NODES[i])).sum::<f64>() * r
}

/// Solution of `s' = −𝔞(t) s − f(t)`, `s(0) = s0`:
/// `s(t) = e^{−I(t)} (s0 − ∫₀ᵗ f(r) e^{I(r)} dr)` with `I(t) = ∫₀ᵗ 𝔞`.
/// Both integrals use composite eight-point Gauss–Legendre on `panels` panels.
pub fn integrating_factor_solution(
    s0: f64,
    frak_a: &dyn Fn(f64) -> f64,
    forcing: &dyn Fn(f64) -> f64,
    t: f64,
    panels: usize,
) -> f64 {
    let panels = panels.max(1);
    let h = t / panels as f64;
    let mut i_start = 0.0;
    let mut conv = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        let b = a + h;
        let (m, r) = (0.5 * (a + b), 0.5 * h);
        for q in 0..8 {
            let node = m + r * GL_NODES[q];
            let i_node = i_start + gauss_legendre(frak_a, a, node);
            conv += GL_WEIGHTS[q] * r * forcing(node) * i_node.exp();
        }
        i_start += gauss_legendre(frak_a, a, b);
    }
    (-i_start).exp() * (s0 - conv)
}
