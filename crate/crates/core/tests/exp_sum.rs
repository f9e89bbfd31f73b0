mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{random_weights, rng};
use expsum::amp_est::AEConfig;
use expsum::exp_sum::{
    es_classical_oracle_truncated, es_complex, es_imag, es_magnitude_hadamard,
    es_magnitude_inversion, es_real, magnitude_state, plan_real, ExpSumProblem,
    MagnitudeConstruction, SharedOracle,
};
use expsum::state_prep::{ExplicitOracle, UniformOracle};
use expsum::zeta_quantum::PowerWeightOracle;
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn eval_poly(c: &[f64], k: usize) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * k as f64 + a)
}

fn direct_sum(w: &[f64], c: &[f64], root: bool) -> Complex<f64> {
    w.iter()
        .enumerate()
        .map(|(k, &w)| {
            let amp = if root { w.sqrt() } else { w };
            Complex::from_polar(amp, 2.0 * PI * eval_poly(c, k).rem_euclid(1.0))
        })
        .sum()
}

/// Problem plus the weight table computed independently of the oracle.
fn problem(
    n: usize,
    kind: u8,
    sigma: f64,
    coeffs: Vec<f64>,
    seed: u64,
) -> (ExpSumProblem<f64>, Vec<f64>) {
    let dim = 1usize << n;
    let (oracle, w): (SharedOracle<f64>, Vec<f64>) = match kind {
        0 => (
            Arc::new(UniformOracle { n_qubits: n }),
            vec![1.0 / dim as f64; dim],
        ),
        1 => {
            let raw: Vec<f64> = (1..=dim).map(|k| (k as f64).powf(-sigma)).collect();
            let total: f64 = raw.iter().sum();
            (
                Arc::new(PowerWeightOracle::new(n, dim as u64, sigma).unwrap()),
                raw.into_iter().map(|x| x / total).collect(),
            )
        }
        _ => {
            let w = random_weights(dim, &mut rng(seed));
            (Arc::new(ExplicitOracle::new(n, &w).unwrap()), w)
        }
    };
    let c = coeffs.clone();
    (
        ExpSumProblem::with_weights(oracle, move |k| eval_poly(&c, k)).unwrap(),
        w,
    )
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..=4)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn exact_parts_match_the_oracle(n in 1usize..=10, kind in 0u8..3, sigma in 0.0f64..1.5, c in coeffs(), seed in 0u64..1000) {
        let (p, w) = problem(n, kind, sigma, c.clone(), seed);
        let want = direct_sum(&w, &c, false);
        let cfg = AEConfig::exact();
        prop_assert!((es_real(&p, &cfg).unwrap().value.re - want.re).abs() < 1e-10);
        prop_assert!((es_imag(&p, &cfg).unwrap().value.re - want.im).abs() < 1e-10);
        prop_assert!((es_classical_oracle_truncated(&p).unwrap() - want).norm() < 1e-10);
    }

    #[test]
    fn magnitude_routes_match_the_root_weighted_sum(n in 1usize..=8, kind in 0u8..3, sigma in 0.0f64..1.5, c in coeffs(), seed in 0u64..1000) {
        let (p, w) = problem(n, kind, sigma, c.clone(), seed);
        let want = direct_sum(&w, &c, true).norm();
        let cfg = AEConfig::exact();
        prop_assert!((es_magnitude_inversion(&p, &cfg).unwrap().value.re - want).abs() < 1e-10);
        prop_assert!((es_magnitude_hadamard(&p, &cfg).unwrap().value.re - want).abs() < 1e-10);
        let a = magnitude_state(&p, MagnitudeConstruction::InversionAboutMean).unwrap();
        let b = magnitude_state(&p, MagnitudeConstruction::HadamardOr).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn integer_shifts_of_f_change_nothing(n in 1usize..=6, c in coeffs(), shift in -4i32..4) {
        let (p, _) = problem(n, 0, 0.0, c, 0);
        let cfg = AEConfig::exact();
        let a = es_complex(&p, &cfg).unwrap().value;
        let b = es_complex(&p.shifted(shift as f64), &cfg).unwrap().value;
        prop_assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn gauss_sums() {
    for n in [2usize, 3, 4] {
        let big_n = (1usize << n) as f64;
        let p = ExpSumProblem::uniform(n, move |k| (k * k) as f64 / big_n).unwrap();
        let direct: Complex<f64> = (0..1usize << n)
            .map(|k| Complex::from_polar(1.0, 2.0 * PI * (k * k) as f64 / big_n))
            .sum();
        let weighted = direct / big_n;
        assert!((weighted - Complex::new(1.0, 1.0) * big_n.sqrt() / big_n).norm() < 1e-10);
        let cfg = AEConfig::exact();
        assert!((es_complex(&p, &cfg).unwrap().value - weighted).norm() < 1e-10);
        let mag = direct.norm() / big_n.sqrt();
        assert!((es_magnitude_inversion(&p, &cfg).unwrap().value.re - mag).abs() < 1e-10);
        assert!((es_magnitude_hadamard(&p, &cfg).unwrap().value.re - mag).abs() < 1e-10);
    }
}

#[test]
fn flat_phase_magnitude_is_root_n() {
    for n in 1..=6 {
        let p = ExpSumProblem::uniform(n, |_| 0.0).unwrap();
        let m = es_magnitude_inversion(&p, &AEConfig::exact())
            .unwrap()
            .value
            .re;
        assert!((m - ((1u64 << n) as f64).sqrt()).abs() < 1e-10);
    }
}

#[test]
fn sampled_real_parts_respect_their_bounds() {
    let mut r = rng(3);
    let c: Vec<f64> = (0..3).map(|_| r.gen_range(-1.0..1.0)).collect();
    let (p, w) = problem(4, 2, 0.0, c.clone(), 8);
    let want = direct_sum(&w, &c, false).re;
    let run = plan_real(&p, &AEConfig::qft(9, 0)).unwrap();
    let inside = (0..100u64)
        .filter(|&seed| {
            let r = run(seed).unwrap();
            (r.value.re - want).abs() <= r.ae_error_bound
        })
        .count();
    assert!(inside >= 95, "{inside}/100");
}
