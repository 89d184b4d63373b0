//! Property suites: entropy symmetry, local-unitary and gauge invariance,
//! gradient accuracy and rank invariance.

use nalgebra::Matrix3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use qutrit_core::extremal::{angle_diff, cycle_invariants, eta_gradient, state_from_params, ParamPoint};
use qutrit_core::measure::{eta, eta_breakdown, reduced_density, schmidt, von_neumann_entropy};
use qutrit_core::slocc::schmidt_rank;
use qutrit_core::state::{apply_local, random_state, CMatrix3, Party, PureState, SupportPattern, C64};

fn gaussian_matrix(rng: &mut ChaCha8Rng) -> CMatrix3 {
    Matrix3::from_fn(|_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn random_unitary(rng: &mut ChaCha8Rng) -> CMatrix3 {
    gaussian_matrix(rng).qr().q()
}

fn random_point(pattern: SupportPattern, rng: &mut ChaCha8Rng) -> ParamPoint {
    let k = pattern.len();
    let mags = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let phases = (0..k).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    ParamPoint::new(pattern, mags, phases).unwrap()
}

/// Patterns on which a generic state is entangled.
fn entangled_pattern(bits: u16) -> Option<SupportPattern> {
    let p = SupportPattern::from_bits(bits).ok()?;
    (!qutrit_core::patterns::forced_separable(p)).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduced_entropies_agree(bits in 1u16..=511, seed in any::<u64>()) {
        let s = random_state(SupportPattern::from_bits(bits).unwrap(), seed);
        let a = von_neumann_entropy(&reduced_density(&s, Party::A), 3.0);
        let b = von_neumann_entropy(&reduced_density(&s, Party::B), 3.0);
        prop_assert!((a - b).abs() < 1e-10, "S_A = {a}, S_B = {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eta_invariant_under_local_unitaries(bits in 1u16..=511, seed in any::<u64>()) {
        let s = random_state(SupportPattern::from_bits(bits).unwrap(), seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (ua, ub) = (random_unitary(&mut rng), random_unitary(&mut rng));
        let t = apply_local(&s, &ua, &ub, false).unwrap();
        prop_assert!((eta(&s) - eta(&t)).abs() < 1e-9);
    }

    #[test]
    fn eta_and_cycles_are_gauge_invariant(bits in 1u16..=511, seed in any::<u64>()) {
        let p = SupportPattern::from_bits(bits).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let point = random_point(p, &mut rng);
        let rows: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        let cols: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        let rotated: Vec<f64> = p
            .cells()
            .iter()
            .zip(&point.phases)
            .map(|(c, ph)| ph + rows[c.row.index()] + cols[c.col.index()])
            .collect();
        let moved = ParamPoint::new(p, point.magnitudes.clone(), rotated).unwrap();
        prop_assert!((eta(&state_from_params(&point)) - eta(&state_from_params(&moved))).abs() < 1e-9);
        for (a, b) in cycle_invariants(&point).iter().zip(cycle_invariants(&moved)) {
            prop_assert!(angle_diff(*a, b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn schmidt_rank_survives_invertible_maps(bits in 1u16..=511, seed in any::<u64>()) {
        let s = random_state(SupportPattern::from_bits(bits).unwrap(), seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
        let (qa, qb) = (gaussian_matrix(&mut rng), gaussian_matrix(&mut rng));
        let t = apply_local(&s, &qa, &qb, true).unwrap();
        prop_assert_eq!(schmidt_rank(&s, 1e-10), schmidt_rank(&t, 1e-10));
    }
}

fn central_differences(p: &ParamPoint, h: f64) -> Vec<f64> {
    let f =
        |m: &[f64], ph: &[f64]| eta(&state_from_params(&ParamPoint::new(p.pattern, m.to_vec(), ph.to_vec()).unwrap()));
    let k = p.magnitudes.len();
    let mut out = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (mut up, mut dn) = (p.magnitudes.clone(), p.magnitudes.clone());
        up[i] += h;
        dn[i] -= h;
        out.push((f(&up, &p.phases) - f(&dn, &p.phases)) / (2.0 * h));
    }
    out.push(0.0);
    for i in 1..k {
        // shift every phase but the pinned one through the gauge fixing
        let (mut up, mut dn) = (p.phases.clone(), p.phases.clone());
        up[i] += h;
        dn[i] -= h;
        out.push((f(&p.magnitudes, &up) - f(&p.magnitudes, &dn)) / (2.0 * h));
    }
    out
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 100 {
        let Some(p) = entangled_pattern(rng.random_range(1..=511)) else { continue };
        if p.len() < 2 {
            continue;
        }
        let point = random_point(p, &mut rng);
        let Ok(g) = eta_gradient(&point) else { continue };
        let analytic: Vec<f64> = g.magnitudes.iter().chain(&g.phases).copied().collect();
        let fd = central_differences(&point, 1e-6);
        let diff = analytic.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale = fd.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(diff <= 1e-4 * scale.max(1e-6), "{p}: |Δ| = {diff:e}, |fd| = {scale:e}");
        checked += 1;
    }
}

#[test]
fn schmidt_reconstructs_coefficients() {
    for seed in 0..200 {
        let s = random_state(SupportPattern::from_bits(0x1ff).unwrap(), seed);
        let sd = schmidt(&s, 1e-10);
        assert!((sd.reconstruct() - s.coeff()).norm() < 1e-12);
        assert!(sd.sigma.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn breakdown_is_average_of_entropies() {
    let s: PureState = random_state(SupportPattern::parse("U1,U2,V2,W3").unwrap(), 9);
    let b = eta_breakdown(&s);
    assert!((b.eta - 0.5 * (b.s_a + b.s_b)).abs() < 1e-14);
}
