//! Amplitude and phase estimation.
//!
//! A prepared amplitude is a circuit `A` with
//! `A|0…0⟩ = cos θ_a |ψ₀⟩|0⟩ + sin θ_a |ψ₁⟩|1⟩` on a marked ancilla, and
//! `a = cos θ_a`. The Grover-type operator `Q = −A S₀ A⁻¹ S_χ` rotates the
//! plane of `|ψ₀⟩|0⟩, |ψ₁⟩|1⟩` by `2θ_a`, so its eigenphases are
//! `±θ_a/π`; every estimator reads `θ̂_a = π·min(φ̂, 1 − φ̂)`.
//!
//! Estimation is split in two: [`plan_amplitude_estimation`] runs the
//! simulation once and keeps exact outcome probabilities, and
//! [`AePlan::sample`] draws a seeded readout from them.

mod hadamard;
mod qpe;

pub use hadamard::{
    classical_pp_estimate, classical_pp_exact, hadamard_test_probability, kitaev_estimate,
    kitaev_exact, kitaev_reconstruct, phase_from_probabilities,
};
pub use qpe::{
    eigen_residual, fft, qft_phase_distribution, qft_phase_distribution_gates, qft_phase_estimate,
    PhaseEstimate,
};

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::sim::{sample_binomial, Circuit, Op, StateVector};

#[derive(Debug, Clone)]
pub struct PreparedAmplitude<T = f64> {
    circuit: Circuit<T>,
    ancilla: usize,
}

impl<T: Real> PreparedAmplitude<T> {
    pub fn new(circuit: Circuit<T>, ancilla: usize) -> Result<Self> {
        if ancilla >= circuit.n_qubits() {
            return domain(format!(
                "ancilla {ancilla} outside a {}-qubit circuit",
                circuit.n_qubits()
            ));
        }
        Ok(Self { circuit, ancilla })
    }

    pub fn circuit(&self) -> &Circuit<T> {
        &self.circuit
    }

    pub fn ancilla(&self) -> usize {
        self.ancilla
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    /// `A|0…0⟩`.
    pub fn state(&self) -> Result<StateVector<T>> {
        let mut s = StateVector::zero(self.n_qubits())?;
        self.circuit.apply(&mut s)?;
        Ok(s)
    }

    /// `a = √P(ancilla = 0)`, read straight from the statevector.
    pub fn exact_amplitude(&self) -> Result<T> {
        Ok(self.state()?.probability_of(self.ancilla, 0)?.sqrt())
    }

    pub fn theta_a(&self) -> Result<T> {
        Ok(self.exact_amplitude()?.min(T::one()).acos())
    }

    /// Eigenvector `(|g⟩ − i|b⟩)/√2` of `Q` with eigenvalue `e^{2iθ_a}`, built
    /// from the normalized ancilla branches of `A|0⟩`. Falls back to the
    /// single branch when the other is empty.
    pub fn q_eigenstate(&self) -> Result<StateVector<T>> {
        let s = self.state()?;
        let bit = 1usize << self.ancilla;
        let p1 = s.probability_of(self.ancilla, 1)?;
        let p0 = s.probability_of(self.ancilla, 0)?;
        let eps = T::lit(1e-24);
        let zero = Complex::new(T::zero(), T::zero());
        let amps: Vec<Complex<T>> = if p1 <= eps {
            s.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| if i & bit == 0 { *a } else { zero })
                .collect()
        } else if p0 <= eps {
            s.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| if i & bit != 0 { *a } else { zero })
                .collect()
        } else {
            let g = T::one() / (p0 * T::lit(2.0)).sqrt();
            let b = T::one() / (p1 * T::lit(2.0)).sqrt();
            s.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if i & bit == 0 {
                        a * g
                    } else {
                        a * Complex::new(T::zero(), -b)
                    }
                })
                .collect()
        };
        let norm = amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
            .sqrt();
        StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }
}

/// `Q = −A S₀ A⁻¹ S_χ`: `S_χ` negates the ancilla-|0⟩ component and
/// `S₀ = 2|0…0⟩⟨0…0| − I`.
pub fn build_q<T: Real>(prep: &PreparedAmplitude<T>) -> Result<Circuit<T>> {
    let n = prep.n_qubits();
    let mut q = Circuit::new(n);
    q.push(Op::Diagonal {
        register: vec![prep.ancilla],
        phases: vec![T::PI(), T::zero()],
    })?;
    q.append(&prep.circuit.inverse())?;
    q.push(Op::ReflectZero {
        register: (0..n).collect(),
    })?;
    q.append(&prep.circuit)?;
    q.push(Op::GlobalPhase(T::PI()))?;
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AeMethod {
    /// Reads `a` from the statevector, no sampling.
    Exact,
    Qft {
        bits: u32,
    },
    ClassicalPp {
        shots: u64,
    },
    Kitaev {
        bits: u32,
        shots_per_bit: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AEConfig {
    pub method: AeMethod,
    pub seed: u64,
    /// Failure probability used for reported error bounds.
    pub delta: f64,
}

pub const DEFAULT_DELTA: f64 = 0.05;

/// `ceil(2/ε² · ln(2/δ))`.
pub fn hoeffding_shots(epsilon: f64, delta: f64) -> u64 {
    (2.0 / (epsilon * epsilon) * (2.0 / delta).ln()).ceil() as u64
}

impl AEConfig {
    pub fn new(method: AeMethod, seed: u64) -> Self {
        Self {
            method,
            seed,
            delta: DEFAULT_DELTA,
        }
    }

    pub fn exact() -> Self {
        Self::new(AeMethod::Exact, 0)
    }

    pub fn qft(bits: u32, seed: u64) -> Self {
        Self::new(AeMethod::Qft { bits }, seed)
    }

    pub fn classical_pp(shots: u64, seed: u64) -> Self {
        Self::new(AeMethod::ClassicalPp { shots }, seed)
    }

    /// Shot count from the target accuracy at the default `δ`.
    pub fn classical_pp_epsilon(epsilon: f64, seed: u64) -> Self {
        Self::classical_pp(hoeffding_shots(epsilon, DEFAULT_DELTA), seed)
    }

    pub fn kitaev(bits: u32, shots_per_bit: u64, seed: u64) -> Self {
        Self::new(
            AeMethod::Kitaev {
                bits,
                shots_per_bit,
            },
            seed,
        )
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.method, AeMethod::Exact)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return domain(format!("delta {} outside (0, 1)", self.delta));
        }
        match self.method {
            AeMethod::Exact => Ok(()),
            AeMethod::Qft { bits } if bits == 0 || bits > 20 => {
                domain(format!("QFT register of {bits} bits, supported range is 1..=20"))
            }
            AeMethod::ClassicalPp { shots: 0 } => domain("shots must be positive"),
            AeMethod::Kitaev { bits, shots_per_bit } if bits == 0 || bits > 30 || shots_per_bit < 100 => domain(
                format!("Kitaev needs 1..=30 bits and at least 100 shots per bit, got {bits} and {shots_per_bit}"),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeEstimate {
    pub a_hat: f64,
    pub theta_hat: f64,
    /// `|θ_a − θ̂_a|` holds with probability at least `1 − δ`.
    pub theta_bound: f64,
    pub q_applications: u64,
}

impl AmplitudeEstimate {
    /// Bound on `|a − â|` implied by `theta_bound`.
    pub fn a_bound(&self) -> f64 {
        let d = self.theta_bound;
        (self.theta_hat.sin().abs() * d + 0.5 * d * d).min(1.0)
    }

    /// Bound on `|(2a² − 1) − (2â² − 1)| = |cos 2θ − cos 2θ̂|`.
    pub fn cos2_bound(&self) -> f64 {
        let d = self.theta_bound;
        (2.0 * (2.0 * self.theta_hat).sin().abs() * d + 2.0 * d * d).min(2.0)
    }

    fn from_theta(theta_hat: f64, theta_bound: f64, q_applications: u64) -> Self {
        Self {
            a_hat: theta_hat.cos().clamp(0.0, 1.0),
            theta_hat,
            theta_bound,
            q_applications,
        }
    }
}

/// `θ̂ = π·min(φ̂, 1 − φ̂)`.
pub fn fold_phase(phi: f64) -> f64 {
    let phi = phi.rem_euclid(1.0);
    std::f64::consts::PI * phi.min(1.0 - phi)
}

/// Bins needed so that the QFT readout lands within `K/2^m` of a true
/// eigenphase with probability `1 − δ`; the Fejér tail beyond `K` bins is at
/// most `1/(2(K − 1))`.
pub fn qft_confidence_bins(delta: f64) -> u64 {
    1 + (1.0 / (2.0 * delta)).ceil() as u64
}

#[derive(Debug, Clone)]
enum PlanKind {
    Exact {
        theta: f64,
    },
    Qft {
        bits: u32,
        probs: Vec<f64>,
        applications: u64,
    },
    ClassicalPp {
        p0: f64,
        shots: u64,
    },
    Kitaev {
        bits: u32,
        levels: Vec<(f64, f64)>,
        shots_per_bit: u64,
    },
}

/// Exact outcome probabilities of one estimation experiment.
#[derive(Debug, Clone)]
pub struct AePlan {
    kind: PlanKind,
    delta: f64,
}

pub fn plan_amplitude_estimation<T: Real>(
    prep: &PreparedAmplitude<T>,
    cfg: &AEConfig,
) -> Result<AePlan> {
    cfg.validate()?;
    let kind = match cfg.method {
        AeMethod::Exact => PlanKind::Exact {
            theta: prep.theta_a()?.to_f64_lossy(),
        },
        AeMethod::Qft { bits } => {
            let q = build_q(prep)?;
            let (probs, applications) = qft_phase_distribution(&q, &prep.state()?, bits)?;
            PlanKind::Qft {
                bits,
                probs: probs.into_iter().map(|p| p.to_f64_lossy()).collect(),
                applications,
            }
        }
        AeMethod::ClassicalPp { shots } => {
            // On A|0⟩ the θ = π/2 channel averages to 1/2 over the two
            // eigenphases, so only the θ = 0 channel carries information:
            // p0 = (1 + cos 2θ_a)/2 = a².
            let q = build_q(prep)?;
            let p0 = hadamard::hadamard_test_p0(&q, &prep.state()?, 1, T::zero())?.to_f64_lossy();
            PlanKind::ClassicalPp { p0, shots }
        }
        AeMethod::Kitaev {
            bits,
            shots_per_bit,
        } => {
            let q = build_q(prep)?;
            let levels = hadamard::kitaev_level_probabilities(&q, &prep.q_eigenstate()?, bits)?;
            PlanKind::Kitaev {
                bits,
                levels,
                shots_per_bit,
            }
        }
    };
    Ok(AePlan {
        kind,
        delta: cfg.delta,
    })
}

impl AePlan {
    /// Q applications of one sampled run.
    pub fn q_applications(&self) -> u64 {
        match &self.kind {
            PlanKind::Exact { .. } => 0,
            PlanKind::Qft { applications, .. } => *applications,
            PlanKind::ClassicalPp { shots, .. } => *shots,
            PlanKind::Kitaev {
                bits,
                shots_per_bit,
                ..
            } => ((1u64 << bits) - 1) * shots_per_bit,
        }
    }

    /// Phase-register distribution, QFT plans only.
    pub fn qft_distribution(&self) -> Option<&[f64]> {
        match &self.kind {
            PlanKind::Qft { probs, .. } => Some(probs),
            _ => None,
        }
    }

    pub fn sample(&self, seed: u64) -> Result<AmplitudeEstimate> {
        use std::f64::consts::PI;
        Ok(match &self.kind {
            PlanKind::Exact { theta } => AmplitudeEstimate::from_theta(*theta, 0.0, 0),
            PlanKind::Qft {
                bits,
                probs,
                applications,
            } => {
                let x = qpe::sample_index(probs, seed);
                let m = (1u64 << bits) as f64;
                let bound = (PI * qft_confidence_bins(self.delta) as f64 / m).min(PI / 2.0);
                AmplitudeEstimate::from_theta(fold_phase(x as f64 / m), bound, *applications)
            }
            PlanKind::ClassicalPp { p0, shots } => {
                let zeros = sample_binomial(*shots, *p0, derive_seed(seed, 0));
                let p_hat = zeros as f64 / *shots as f64;
                let eps_p = ((2.0 / self.delta).ln() / (2.0 * *shots as f64)).sqrt();
                let theta_of = |p: f64| p.clamp(0.0, 1.0).sqrt().acos();
                let theta_hat = theta_of(p_hat);
                let bound =
                    (theta_of(p_hat - eps_p) - theta_hat).max(theta_hat - theta_of(p_hat + eps_p));
                AmplitudeEstimate {
                    a_hat: p_hat.sqrt(),
                    theta_hat,
                    theta_bound: bound,
                    q_applications: *shots,
                }
            }
            PlanKind::Kitaev {
                bits,
                levels,
                shots_per_bit,
            } => {
                let est = hadamard::kitaev_sample(levels, *shots_per_bit, seed)?;
                let bound = PI / (1u64 << bits) as f64;
                AmplitudeEstimate::from_theta(fold_phase(est.phi_hat), bound, est.applications)
            }
        })
    }
}

/// Estimates `a` for a prepared amplitude with the configured method.
pub fn estimate_amplitude<T: Real>(
    prep: &PreparedAmplitude<T>,
    cfg: &AEConfig,
) -> Result<AmplitudeEstimate> {
    plan_amplitude_estimation(prep, cfg)?.sample(cfg.seed)
}
