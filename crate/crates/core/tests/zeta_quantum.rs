use std::f64::consts::PI;

use expsum::amp_est::AEConfig;
use expsum::func_rotation::Polynomial;
use expsum::state_prep::verify_preparation;
use expsum::zeta::{partial_power_sum, riemann_siegel_zeta, zeta_euler_maclaurin};
use expsum::zeta_quantum::{
    prepare_power_weight_state, quantum_block_sum, quantum_partial_sum, quantum_partial_sum_with,
    recombine, zeta_hybrid, BlockWeightOracle, HybridMode, HybridPlan, PartialSumPlan,
    PowerWeightOracle, Recombination,
};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 16,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn direct_partial(n: u64, s: Complex<f64>) -> Complex<f64> {
    (1..=n).map(|k| c(k as f64, 0.0).powc(-s)).sum()
}

fn harmonic(n: u64, sigma: f64) -> f64 {
    (1..=n).map(|k| (k as f64).powf(-sigma)).sum()
}

/// Ten points across the strip.
fn strip_points() -> Vec<Complex<f64>> {
    (0..10)
        .map(|i| c(0.1 * i as f64 + 0.05, 12.0 + 7.5 * i as f64))
        .collect()
}

#[test]
fn power_weight_examples() {
    let o = PowerWeightOracle::<f64>::new(2, 4, 1.0).unwrap();
    let s = prepare_power_weight_state(&o).unwrap();
    let h4 = 25.0 / 12.0;
    for (k, amp) in s.amplitudes().iter().enumerate() {
        assert!((amp.norm_sqr() - 1.0 / ((k + 1) as f64 * h4)).abs() < 1e-12);
    }
    for sigma in [0.0, 0.5, 1.0] {
        let o = PowerWeightOracle::<f64>::new(4, 16, sigma).unwrap();
        assert!(verify_preparation(&prepare_power_weight_state(&o).unwrap(), &o).unwrap() <= 1e-10);
    }
    let flat =
        prepare_power_weight_state(&PowerWeightOracle::<f64>::new(3, 8, 0.0).unwrap()).unwrap();
    assert!(flat
        .amplitudes()
        .iter()
        .all(|a| (a.re - 8f64.sqrt().recip()).abs() < 1e-12));
}

#[test]
fn partial_sum_examples() {
    let one = quantum_partial_sum(1, c(0.5, 7.0), &AEConfig::exact())
        .unwrap()
        .value;
    assert!((one - c(1.0, 0.0)).norm() < 1e-15);
    let flat = quantum_partial_sum(20, c(0.7, 0.0), &AEConfig::exact())
        .unwrap()
        .value;
    assert!((flat.re - harmonic(20, 0.7)).abs() < 1e-12 && flat.im.abs() < 1e-12);
    let s = c(0.5, 25.0);
    let q = quantum_partial_sum(64, s, &AEConfig::exact())
        .unwrap()
        .value;
    assert!((q - direct_partial(64, s)).norm() < 1e-9);
}

#[test]
fn displayed_recombination_gives_the_conjugate() {
    let s = c(0.5, 25.0);
    let want = direct_partial(64, s);
    let shown = quantum_partial_sum_with(64, s, &AEConfig::exact(), Recombination::AsDisplayed)
        .unwrap()
        .value;
    assert!((shown - want.conj()).norm() < 1e-9);
    assert!(want.im.abs() > 0.1);
    assert!(((shown - want).norm() - 2.0 * want.im.abs()).abs() < 1e-9);
}

#[test]
fn substitution_identity_across_the_strip() {
    for s in strip_points() {
        let em = zeta_euler_maclaurin(s, 12).unwrap();
        let rs = riemann_siegel_zeta(s).unwrap();
        let hem = zeta_hybrid(s, 12, HybridMode::EulerMaclaurin, &AEConfig::exact()).unwrap();
        let hrs = zeta_hybrid(s, 12, HybridMode::RiemannSiegel, &AEConfig::exact()).unwrap();
        assert!((hem.value - em).norm() < 1e-9, "{s}");
        assert!((hrs.value - rs).norm() < 1e-9, "{s}");
    }
}

#[test]
fn basel_through_the_hybrid() {
    let h = zeta_hybrid(
        c(2.0, 0.0),
        12,
        HybridMode::EulerMaclaurin,
        &AEConfig::exact(),
    )
    .unwrap();
    assert!((h.value - c(PI * PI / 6.0, 0.0)).norm() < 1e-10 + h.total_error_bound());
}

#[test]
fn sampled_hybrid_respects_its_error_budget() {
    let s = c(0.5, 30.0);
    for (mode, classical) in [
        (
            HybridMode::EulerMaclaurin,
            zeta_euler_maclaurin(s, 12).unwrap(),
        ),
        (HybridMode::RiemannSiegel, riemann_siegel_zeta(s).unwrap()),
    ] {
        let plan =
            HybridPlan::new(s, 12, mode, &AEConfig::qft(12, 0), Recombination::default()).unwrap();
        let inside = (0..100u64)
            .filter(|&seed| {
                let r = plan.sample(seed).unwrap();
                (r.value - classical).norm() <= r.total_error_bound()
            })
            .count();
        assert!(inside >= 95, "{mode:?}: {inside}/100");
    }
}

#[test]
fn sampled_rs_hybrid_within_resolution_bound() {
    let s = c(0.5, 30.0);
    let classical = riemann_siegel_zeta(s).unwrap();
    let plan = HybridPlan::new(
        s,
        12,
        HybridMode::RiemannSiegel,
        &AEConfig::qft(12, 0),
        Recombination::default(),
    )
    .unwrap();
    let r = plan.sample(0).unwrap();
    let tol = harmonic(r.n_terms, 0.5) * 2f64.powi(-10);
    assert!((r.value - classical).norm() <= tol);
    let inside = (0..100u64)
        .filter(|&seed| (plan.sample(seed).unwrap().value - classical).norm() <= tol)
        .count();
    assert!(inside >= 95, "{inside}/100");
}

/// With N = 52 main-sum terms the QFT readout must land on the nearest bin
/// of both parts to meet this tolerance, which happens in about half the
/// seeds.
#[test]
#[ignore = "known shortfall: EM-mode sampled error exceeds H_N·2^-10 in about half the seeds"]
fn sampled_em_hybrid_within_resolution_bound() {
    let s = c(0.5, 30.0);
    let classical = zeta_euler_maclaurin(s, 12).unwrap();
    let r = zeta_hybrid(s, 12, HybridMode::EulerMaclaurin, &AEConfig::qft(12, 0)).unwrap();
    assert!((r.value - classical).norm() <= harmonic(r.n_terms, 0.5) * 2f64.powi(-10));
}

#[test]
fn block_normalization_is_exact() {
    for j in 0..=5u32 {
        for k in [1u64, 2, 3, 7, 16, 100, 255, 256] {
            if j > 0 && k == 1 {
                continue;
            }
            let z: BigInt = (0..k).map(|x| BigInt::from(x).pow(j)).sum();
            let want = BigRational::new(z, BigInt::from(k).pow(j));
            assert_eq!(
                BlockWeightOracle::<f64>::fitted(k, j).unwrap().rescale(),
                want,
                "K {k} j {j}"
            );
        }
    }
}

#[test]
fn block_sum_examples() {
    let cfg = AEConfig::exact();
    let zero = Polynomial::new(vec![0.0]).unwrap();
    assert!((quantum_block_sum(16, 0, &zero, &cfg).unwrap().value - c(16.0, 0.0)).norm() < 1e-10);
    assert!((quantum_block_sum(4, 1, &zero, &cfg).unwrap().value - c(1.5, 0.0)).norm() < 1e-12);
    let quad = Polynomial::new(vec![0.0, 0.0, 1.0 / 8.0]).unwrap();
    let direct: Complex<f64> = (0..8u64)
        .map(|k| Complex::from_polar((k * k) as f64 / 64.0, 2.0 * PI * (k * k) as f64 / 8.0))
        .sum();
    assert!((quantum_block_sum(8, 2, &quad, &cfg).unwrap().value - direct).norm() < 1e-9);
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn recombination_algebra(n in 1u64..200, sigma in 0.0f64..1.0, t in 0.0f64..400.0) {
        let s = c(sigma, t);
        let h = harmonic(n, sigma);
        let (mut sr, mut si) = (0.0, 0.0);
        for k in 1..=n {
            let w = (k as f64).powf(-sigma) / h;
            let theta = 0.5 * t * (k as f64).ln();
            sr += w * theta.cos().powi(2);
            si += w * (PI / 4.0 + theta).cos().powi(2);
        }
        prop_assert!((recombine(h, sr, si) - direct_partial(n, s)).norm() < 1e-12 * (1.0 + h));
        let q = quantum_partial_sum(n, s, &AEConfig::exact()).unwrap().value;
        prop_assert!((q - partial_power_sum(n, s).unwrap()).norm() < 1e-10 * (1.0 + h));
    }

    #[test]
    fn partial_sum_error_budget(n in 2u64..64, sigma in 0.0f64..1.0, t in 1.0f64..100.0, m in 6u32..11) {
        let s = c(sigma, t);
        let want = direct_partial(n, s);
        let plan = PartialSumPlan::new(n, s, &AEConfig::qft(m, 0), Recombination::default()).unwrap();
        let inside = (0..100u64)
            .filter(|&seed| {
                let r = plan.sample(seed).unwrap();
                (r.value - want).norm() <= r.ae_error_bound
            })
            .count();
        prop_assert!(inside >= 95, "{}/100", inside);
    }
}
