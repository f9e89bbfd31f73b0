//! QFT phase estimation.

use num_complex::Complex;
use rand::distributions::{Distribution, WeightedIndex};

use crate::error::{domain, Error, Result};
use crate::rng::rng_for;
use crate::scalar::Real;
use crate::sim::{inverse_qft_circuit, Circuit, Control, Gate, StateVector};

/// In-place radix-2 DFT, `X_x = Σ_l x_l e^{−2πi lx/M}`, unnormalized.
pub fn fft<T: Real>(data: &mut [Complex<T>]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = -T::TAU() / T::from_usize_lossy(len);
        let tw: Vec<Complex<T>> = (0..half)
            .map(|k| Complex::from_polar(T::one(), step * T::from_usize_lossy(k)))
            .collect();
        for chunk in data.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * tw[k];
                lo[k] = u + v;
                hi[k] = u - v;
            }
        }
        len <<= 1;
    }
}

/// `‖U|ξ⟩ − λ|ξ⟩‖` with `λ = ⟨ξ|U|ξ⟩`, and `λ`.
pub fn eigen_residual<T: Real>(u: &Circuit<T>, state: &StateVector<T>) -> Result<(T, Complex<T>)> {
    let mut image = state.clone();
    u.apply(&mut image)?;
    let lambda = state.inner(&image);
    let residual = state
        .amplitudes()
        .iter()
        .zip(image.amplitudes())
        .map(|(x, y)| (y - x * lambda).norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt();
    Ok((residual, lambda))
}

pub(crate) fn require_eigenstate<T: Real>(u: &Circuit<T>, state: &StateVector<T>) -> Result<()> {
    let (residual, _) = eigen_residual(u, state)?;
    if residual > T::lit(1e-8) {
        return Err(Error::NotEigenstate {
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(())
}

fn check_bits(m: u32) -> Result<usize> {
    if m == 0 || m > 20 {
        return domain(format!(
            "phase register of {m} bits, supported range is 1..=20"
        ));
    }
    Ok(1usize << m)
}

/// Outcome distribution of the phase register after the inverse QFT.
///
/// Builds `Σ_l |l⟩ U^l|ψ⟩ / √M` from `M − 1` sequential applications of `U`
/// and applies the inverse QFT as a DFT over `l`. Returns the probabilities
/// and the number of `U` applications, `2^m − 1`, the same count the
/// controlled-power circuit uses.
pub fn qft_phase_distribution<T: Real>(
    u: &Circuit<T>,
    input: &StateVector<T>,
    m: u32,
) -> Result<(Vec<T>, u64)> {
    let big_m = check_bits(m)?;
    let dim = input.dim();
    // column-major: powers[l * dim + k] = (U^l ψ)_k
    let mut powers: Vec<Complex<T>> = Vec::with_capacity(big_m * dim);
    let mut v = input.clone();
    powers.extend_from_slice(v.amplitudes());
    for _ in 1..big_m {
        u.apply(&mut v)?;
        powers.extend_from_slice(v.amplitudes());
    }
    let scale = T::one() / T::from_usize_lossy(big_m);
    let mut probs = vec![T::zero(); big_m];
    let mut column = vec![Complex::new(T::zero(), T::zero()); big_m];
    for k in 0..dim {
        for l in 0..big_m {
            column[l] = powers[l * dim + k];
        }
        fft(&mut column);
        for (p, c) in probs.iter_mut().zip(&column) {
            *p += (c * scale).norm_sqr();
        }
    }
    Ok((probs, big_m as u64 - 1))
}

/// Reference route: Hadamards, controlled `U^{2^j}` from phase qubit `j`,
/// inverse QFT circuit. Phase register sits above the input qubits.
pub fn qft_phase_distribution_gates<T: Real>(
    u: &Circuit<T>,
    input: &StateVector<T>,
    m: u32,
) -> Result<(Vec<T>, u64)> {
    check_bits(m)?;
    let n = input.n_qubits();
    let total = n + m as usize;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << total];
    amps[..input.dim()].copy_from_slice(input.amplitudes());
    let mut s = StateVector::from_amplitudes(amps)?;
    let register: Vec<usize> = (n..total).collect();
    let mut applications = 0u64;
    for &q in &register {
        s.apply_gate(&Gate::h(q))?;
    }
    for (j, &q) in register.iter().enumerate() {
        let power = 1u64 << j;
        u.apply_power(&mut s, power, &[Control::on(q)])?;
        applications += power;
    }
    inverse_qft_circuit(total, &register)?.apply(&mut s)?;
    Ok((s.register_distribution(&register)?, applications))
}

pub(crate) fn sample_index<T: Real>(probs: &[T], seed: u64) -> usize {
    let w: Vec<f64> = probs.iter().map(|p| p.to_f64_lossy().max(0.0)).collect();
    let dist = WeightedIndex::new(&w).expect("distribution has positive mass");
    dist.sample(&mut rng_for(seed, 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    pub phi_hat: f64,
    pub applications: u64,
}

/// Samples one phase-register readout; `φ̂ = x / 2^m`.
pub fn qft_phase_estimate<T: Real>(
    u: &Circuit<T>,
    eigenstate: &StateVector<T>,
    m: u32,
    seed: u64,
) -> Result<PhaseEstimate> {
    require_eigenstate(u, eigenstate)?;
    let (probs, applications) = qft_phase_distribution(u, eigenstate, m)?;
    let x = sample_index(&probs, seed);
    Ok(PhaseEstimate {
        phi_hat: x as f64 / (1u64 << m) as f64,
        applications,
    })
}
