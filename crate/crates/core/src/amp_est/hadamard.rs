//! Single-ancilla interference estimators: the Hadamard test, two-angle
//! post-processing and Kitaev's bit-by-bit refinement.

use num_complex::Complex;

use super::qpe::{require_eigenstate, PhaseEstimate};
use crate::error::{domain, Error, Result};
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::sim::{sample_binomial, Circuit, Control, Gate, StateVector};

/// `P(control = 0)` for H – Z(θ) – controlled-`U^M` – H. The control is an
/// extra qubit placed above the input.
pub(crate) fn hadamard_test_p0<T: Real>(
    u: &Circuit<T>,
    input: &StateVector<T>,
    power: u64,
    theta: T,
) -> Result<T> {
    let n = input.n_qubits();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); input.dim() * 2];
    amps[..input.dim()].copy_from_slice(input.amplitudes());
    let mut s = StateVector::from_amplitudes(amps)?;
    s.apply_gate(&Gate::h(n))?;
    s.apply_gate(&Gate::phase(theta, n))?;
    u.apply_power(&mut s, power, &[Control::on(n)])?;
    s.apply_gate(&Gate::h(n))?;
    s.probability_of(n, 0)
}

/// Exact `p0 = (1 + cos(2πMφ + θ))/2` by simulating the test circuit.
pub fn hadamard_test_probability<T: Real>(
    u: &Circuit<T>,
    eigenstate: &StateVector<T>,
    power: u64,
    theta: T,
) -> Result<T> {
    if power == 0 {
        return domain("power M must be at least 1");
    }
    require_eigenstate(u, eigenstate)?;
    hadamard_test_p0(u, eigenstate, power, theta)
}

/// `φ = atan2(s, c) / 2π mod 1` from the two channel probabilities.
pub fn phase_from_probabilities(p0_zero: f64, p0_half_pi: f64) -> f64 {
    let c = 2.0 * p0_zero - 1.0;
    let s = -(2.0 * p0_half_pi - 1.0);
    (s.atan2(c) / std::f64::consts::TAU).rem_euclid(1.0)
}

fn sampled_fraction(p0: f64, shots: u64, seed: u64) -> f64 {
    sample_binomial(shots, p0, seed) as f64 / shots as f64
}

/// Two-angle estimate with `shots` samples per angle at `M = 1`.
pub fn classical_pp_estimate<T: Real>(
    u: &Circuit<T>,
    eigenstate: &StateVector<T>,
    shots: u64,
    seed: u64,
) -> Result<PhaseEstimate> {
    if shots < 100 {
        return domain(format!("{shots} shots, at least 100 required"));
    }
    require_eigenstate(u, eigenstate)?;
    let p_c = hadamard_test_p0(u, eigenstate, 1, T::zero())?.to_f64_lossy();
    let p_s = hadamard_test_p0(u, eigenstate, 1, T::FRAC_PI_2())?.to_f64_lossy();
    let f_c = sampled_fraction(p_c, shots, derive_seed(seed, 0));
    let f_s = sampled_fraction(p_s, shots, derive_seed(seed, 1));
    Ok(PhaseEstimate {
        phi_hat: phase_from_probabilities(f_c, f_s),
        applications: 2 * shots,
    })
}

/// Noiseless two-angle inversion.
pub fn classical_pp_exact<T: Real>(u: &Circuit<T>, eigenstate: &StateVector<T>) -> Result<f64> {
    require_eigenstate(u, eigenstate)?;
    let p_c = hadamard_test_p0(u, eigenstate, 1, T::zero())?.to_f64_lossy();
    let p_s = hadamard_test_p0(u, eigenstate, 1, T::FRAC_PI_2())?.to_f64_lossy();
    Ok(phase_from_probabilities(p_c, p_s))
}

/// Circular distance on `[0, 1)`.
fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Rebuilds `φ` from `ω_j ≈ frac(2^{j−1}φ)`, `omegas[j−1]`, working from the
/// finest level down.
pub fn kitaev_reconstruct(omegas: &[f64]) -> Result<f64> {
    let m = omegas.len();
    if m == 0 {
        return domain("at least one level is required");
    }
    let mut beta = ((2.0 * omegas[m - 1]).round().rem_euclid(2.0)) / 2.0;
    for j in (1..m).rev() {
        let omega = omegas[j - 1];
        let lo = beta / 2.0;
        let hi = lo + 0.5;
        let (pick, dist) = if circ_dist(lo, omega) <= circ_dist(hi, omega) {
            (lo, circ_dist(lo, omega))
        } else {
            (hi, circ_dist(hi, omega))
        };
        if dist > 3.0 / 16.0 {
            return Err(Error::EstimationFailure {
                level: j as u32,
                partial: beta,
                reason: format!("level estimate {omega:.4} is {dist:.4} from both candidates"),
            });
        }
        beta = pick;
    }
    Ok(beta)
}

/// Exact channel probabilities `(p0(θ=0), p0(θ=π/2))` for `M = 2^{j−1}`,
/// `j = 1..=m`.
pub(crate) fn kitaev_level_probabilities<T: Real>(
    u: &Circuit<T>,
    input: &StateVector<T>,
    m: u32,
) -> Result<Vec<(f64, f64)>> {
    (1..=m)
        .map(|j| {
            let power = 1u64 << (j - 1);
            let c = hadamard_test_p0(u, input, power, T::zero())?.to_f64_lossy();
            let s = hadamard_test_p0(u, input, power, T::FRAC_PI_2())?.to_f64_lossy();
            Ok((c, s))
        })
        .collect()
}

/// Samples every level with `shots_per_bit` shots split over the two angles
/// and reconstructs `φ̂`. Applications `Σ_j 2^{j−1} · shots_per_bit`.
pub(crate) fn kitaev_sample(
    levels: &[(f64, f64)],
    shots_per_bit: u64,
    seed: u64,
) -> Result<PhaseEstimate> {
    let shots_c = shots_per_bit - shots_per_bit / 2;
    let shots_s = shots_per_bit / 2;
    let mut applications = 0u64;
    let omegas: Vec<f64> = levels
        .iter()
        .enumerate()
        .map(|(i, &(pc, ps))| {
            applications += (1u64 << i) * shots_per_bit;
            let fc = sampled_fraction(pc, shots_c, derive_seed(seed, 2 * i as u64));
            let fs = sampled_fraction(ps, shots_s, derive_seed(seed, 2 * i as u64 + 1));
            phase_from_probabilities(fc, fs)
        })
        .collect();
    Ok(PhaseEstimate {
        phi_hat: kitaev_reconstruct(&omegas)?,
        applications,
    })
}

pub fn kitaev_estimate<T: Real>(
    u: &Circuit<T>,
    eigenstate: &StateVector<T>,
    m: u32,
    shots_per_bit: u64,
    seed: u64,
) -> Result<PhaseEstimate> {
    if m == 0 || m > 30 {
        return domain(format!("{m} bits, supported range is 1..=30"));
    }
    if shots_per_bit < 100 {
        return domain(format!(
            "{shots_per_bit} shots per bit, at least 100 required"
        ));
    }
    require_eigenstate(u, eigenstate)?;
    let levels = kitaev_level_probabilities(u, eigenstate, m)?;
    kitaev_sample(&levels, shots_per_bit, seed)
}

/// Kitaev reconstruction from exact probabilities.
pub fn kitaev_exact<T: Real>(u: &Circuit<T>, eigenstate: &StateVector<T>, m: u32) -> Result<f64> {
    require_eigenstate(u, eigenstate)?;
    let omegas: Vec<f64> = kitaev_level_probabilities(u, eigenstate, m)?
        .into_iter()
        .map(|(c, s)| phase_from_probabilities(c, s))
        .collect();
    kitaev_reconstruct(&omegas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn phase_gate(phi: f64) -> (Circuit<f64>, StateVector<f64>) {
        let mut c = Circuit::new(1);
        c.gate(Gate::phase(2.0 * PI * phi, 0)).unwrap();
        (c, StateVector::new_basis_state(1, 1).unwrap())
    }

    #[test]
    fn hadamard_test_examples() {
        let (u, e) = phase_gate(0.0);
        assert!((hadamard_test_probability(&u, &e, 1, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let (u, e) = phase_gate(0.25);
        assert!((hadamard_test_probability(&u, &e, 1, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let (u, e) = phase_gate(0.125);
        assert!(
            hadamard_test_probability(&u, &e, 2, PI / 2.0)
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn two_angle_estimates() {
        let (u, e) = phase_gate(0.0);
        let phi = classical_pp_estimate(&u, &e, 10_000, 3).unwrap().phi_hat;
        assert!(!(0.02..=0.98).contains(&phi));
        let (u, e) = phase_gate(0.75);
        assert!((classical_pp_exact(&u, &e).unwrap() - 0.75).abs() < 1e-12);
        let est = classical_pp_estimate(&u, &e, 10_000, 4).unwrap();
        assert!((est.phi_hat - 0.75).abs() < 0.02);
        assert_eq!(est.applications, 20_000);
    }

    #[test]
    fn kitaev_examples() {
        let (u, e) = phase_gate(0.625);
        assert_eq!(kitaev_exact(&u, &e, 3).unwrap(), 0.625);
        let (u, e) = phase_gate(0.5);
        assert_eq!(kitaev_exact(&u, &e, 6).unwrap(), 0.5);
        let (u, e) = phase_gate(1.0 / 3.0);
        let est = kitaev_estimate(&u, &e, 8, 10_000, 5).unwrap();
        assert!((est.phi_hat - 1.0 / 3.0).abs() <= 1.0 / 256.0);
        assert_eq!(est.applications, 255 * 10_000);
    }

    #[test]
    fn kitaev_reports_inconsistency() {
        let err = kitaev_reconstruct(&[0.375, 0.26, 0.5]).unwrap_err();
        assert!(matches!(err, Error::EstimationFailure { .. }));
    }
}
