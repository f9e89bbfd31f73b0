mod common;

use common::{random_prepared, random_weights, rng};
use expsum::sim::{Circuit, Gate, StateVector};
use expsum::state_prep::{prepare_weighted_state, verify_preparation, ExplicitOracle};
use num_complex::Complex;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn circuits_preserve_norm_and_invert(n in 1usize..7, seed in 0u64..10_000) {
        let prep = random_prepared(n, seed);
        let mut s = prep.state().unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prep.circuit().inverse().apply(&mut s).unwrap();
        prop_assert!(s.max_abs_diff(&StateVector::zero(n).unwrap()) < 1e-12);
    }

    #[test]
    fn preparation_reproduces_weights(n in 1usize..9, seed in 0u64..10_000) {
        let w = random_weights(1 << n, &mut rng(seed));
        let o = ExplicitOracle::new(n, &w).unwrap();
        let prepared = prepare_weighted_state(&o).unwrap();
        prop_assert!(verify_preparation(&prepared.state, &o).unwrap() < 1e-10);
        for (amp, w) in prepared.state.amplitudes().iter().zip(&w) {
            prop_assert!((amp.re - w.sqrt()).abs() < 1e-10 && amp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_about_mean_is_an_involution(n in 1usize..7, seed in 0u64..10_000) {
        let s0 = random_prepared(n, seed).state().unwrap();
        let mean: Complex<f64> = s0.amplitudes().iter().sum::<Complex<f64>>() / s0.dim() as f64;
        let mut s = s0.clone();
        s.inversion_about_mean();
        for (a, b) in s.amplitudes().iter().zip(s0.amplitudes()) {
            prop_assert!((a - (2.0 * mean - b)).norm() < 1e-12);
        }
        s.inversion_about_mean();
        prop_assert!(s.max_abs_diff(&s0) < 1e-12);
    }
}

#[test]
fn controlled_or_flips_on_any_set_control() {
    for idx in 0..8usize {
        let mut s = StateVector::<f64>::new_basis_state(4, idx).unwrap();
        let mut c = Circuit::new(4);
        c.gate(Gate::controlled_or(&[0, 1, 2], 3)).unwrap();
        c.apply(&mut s).unwrap();
        let want = if idx == 0 { idx } else { idx | 8 };
        assert!((s.amplitudes()[want].re - 1.0).abs() < 1e-15, "{idx}");
    }
}
