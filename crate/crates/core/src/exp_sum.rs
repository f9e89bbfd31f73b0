//! Weighted exponential sums `Σ_k w_k e^{2πi f(k)}` on the simulated pipeline.
//!
//! The phase route loads `f` into an ancilla rotation `R(πf(k))`, so the
//! ancilla-|0⟩ probability is `a² = Σ w_k cos²(πf(k))` and
//! `2a² − 1 = Re Σ w_k e^{2πif(k)}`; probabilities carry `w_k`, not `√w_k`.
//! The magnitude routes instead read `|Σ √w_k e^{2πif(k)}|` off the mean of
//! the amplitudes.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::amp_est::{
    estimate_amplitude, plan_amplitude_estimation, AEConfig, AePlan, AmplitudeEstimate,
    PreparedAmplitude,
};
use crate::error::{domain, Error, Result};
use crate::func_rotation::{build_uf, encode_fixed_point, reduce_mod2, FixedPointFormat};
use crate::scalar::Real;
use crate::sim::{Circuit, Gate, Op, StateVector};
use crate::state_prep::{preparation_circuit, UniformOracle, WeightOracle};
use crate::summation::neumaier_sum_complex;

/// Largest register the brute-force oracle accepts.
pub const ORACLE_MAX_QUBITS: usize = 24;

pub type PhaseFn<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;
pub type SharedOracle<T> = Arc<dyn WeightOracle<T> + Send + Sync>;

/// `f` is in cycles and is truncated to `fmt` after reduction mod 2.
#[derive(Clone)]
pub struct ExpSumProblem<T = f64> {
    n_qubits: usize,
    weights: SharedOracle<T>,
    f: PhaseFn<T>,
    fmt: FixedPointFormat,
}

impl<T: Real> fmt::Debug for ExpSumProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpSumProblem")
            .field("n_qubits", &self.n_qubits)
            .field("fmt", &self.fmt)
            .finish_non_exhaustive()
    }
}

/// `[0, 2)` with 48 fraction bits.
pub fn default_format() -> FixedPointFormat {
    FixedPointFormat { m1: 0, m2: 48 }
}

impl<T: Real> ExpSumProblem<T> {
    pub fn new(weights: SharedOracle<T>, f: PhaseFn<T>, fmt: FixedPointFormat) -> Result<Self> {
        let n_qubits = weights.n_qubits();
        if n_qubits == 0 {
            return domain("problem needs at least one index qubit");
        }
        if fmt.m1 > 0 {
            return domain("f is reduced mod 2 before encoding, the format needs m1 = 0");
        }
        Ok(Self {
            n_qubits,
            weights,
            f,
            fmt,
        })
    }

    pub fn uniform(
        n_qubits: usize,
        f: impl Fn(usize) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            Arc::new(UniformOracle { n_qubits }),
            Arc::new(f),
            default_format(),
        )
    }

    pub fn with_weights(
        weights: SharedOracle<T>,
        f: impl Fn(usize) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(weights, Arc::new(f), default_format())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn weights(&self) -> &SharedOracle<T> {
        &self.weights
    }

    pub fn format(&self) -> FixedPointFormat {
        self.fmt
    }

    pub fn f(&self, k: usize) -> T {
        (self.f)(k)
    }

    /// `f − c`, same weights and format.
    pub fn shifted(&self, c: T) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |k| f(k) - c),
            ..self.clone()
        }
    }

    /// `f̃(k)`, the fixed-point truncation of `f(k) mod 2`.
    pub fn truncated(&self) -> Result<Vec<T>> {
        (0..self.dim())
            .map(|k| {
                let v = self.f(k);
                if !v.is_finite() {
                    return domain(format!("f({k}) is not finite"));
                }
                Ok(encode_fixed_point(reduce_mod2(v), self.fmt)?.value)
            })
            .collect()
    }

    fn weight_table(&self) -> Vec<T> {
        (0..self.dim())
            .map(|k| self.weights.weight(k).max(T::zero()))
            .collect()
    }
}

fn phase<T: Real>(f: T) -> Complex<T> {
    let (s, c) = (T::TAU() * reduce_mod2(f)).sin_cos();
    Complex::new(c, s)
}

fn check_oracle_size<T: Real>(p: &ExpSumProblem<T>) -> Result<()> {
    if p.n_qubits > ORACLE_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "brute-force oracle limited to {ORACLE_MAX_QUBITS} qubits, got {}",
            p.n_qubits
        )));
    }
    Ok(())
}

/// `Σ_k w_k e^{2πi f(k)}` by compensated direct summation on the exact `f`.
pub fn es_classical_oracle<T: Real>(p: &ExpSumProblem<T>) -> Result<Complex<T>> {
    check_oracle_size(p)?;
    Ok(neumaier_sum_complex(
        (0..p.dim()).map(|k| phase(p.f(k)) * p.weights.weight(k)),
    ))
}

/// Same sum on `f̃`, which is what the circuits encode.
pub fn es_classical_oracle_truncated<T: Real>(p: &ExpSumProblem<T>) -> Result<Complex<T>> {
    check_oracle_size(p)?;
    let ft = p.truncated()?;
    let w = p.weight_table();
    Ok(neumaier_sum_complex(
        ft.iter().zip(&w).map(|(&f, &w)| phase(f) * w),
    ))
}

/// `|Σ_k √w_k e^{2πi f̃(k)}|`, the target of the magnitude routes.
pub fn es_sqrt_weighted_magnitude<T: Real>(p: &ExpSumProblem<T>) -> Result<T> {
    check_oracle_size(p)?;
    let ft = p.truncated()?;
    let w = p.weight_table();
    Ok(neumaier_sum_complex(ft.iter().zip(&w).map(|(&f, &w)| phase(f) * w.sqrt())).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpSumMethod {
    Oracle,
    Phase,
    Inversion,
    Hadamard,
}

impl ExpSumMethod {
    pub fn name(self) -> &'static str {
        match self {
            ExpSumMethod::Oracle => "oracle",
            ExpSumMethod::Phase => "phase",
            ExpSumMethod::Inversion => "inversion",
            ExpSumMethod::Hadamard => "hadamard",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSumResult {
    pub value: Complex<f64>,
    pub method: ExpSumMethod,
    pub ae_error_bound: f64,
    pub q_applications: u64,
}

/// `A = U_f · (state prep ⊗ I)` with the ancilla at qubit `n`.
pub fn phase_amplitude<T: Real>(p: &ExpSumProblem<T>) -> Result<PreparedAmplitude<T>> {
    let n = p.n_qubits;
    let mut a = Circuit::new(n + 1);
    a.append(&preparation_circuit(p.weights.as_ref())?)?;
    let uf = build_uf(|k| p.f(k), n, p.fmt)?;
    a.append(&uf.circuit)?;
    PreparedAmplitude::new(a, n)
}

fn real_from_estimate(est: &AmplitudeEstimate) -> f64 {
    2.0 * est.a_hat * est.a_hat - 1.0
}

fn real_result(est: AmplitudeEstimate) -> ExpSumResult {
    ExpSumResult {
        value: Complex::new(real_from_estimate(&est), 0.0),
        method: ExpSumMethod::Phase,
        ae_error_bound: est.cos2_bound(),
        q_applications: est.q_applications,
    }
}

/// Estimate of `Re Σ w_k e^{2πi f̃(k)}` as `2â² − 1`.
pub fn es_real<T: Real>(p: &ExpSumProblem<T>, cfg: &AEConfig) -> Result<ExpSumResult> {
    Ok(real_result(estimate_amplitude(&phase_amplitude(p)?, cfg)?))
}

/// `Im S(f) = Re S(f − 1/4)`; the value is returned in the real slot.
pub fn es_imag<T: Real>(p: &ExpSumProblem<T>, cfg: &AEConfig) -> Result<ExpSumResult> {
    es_real(&p.shifted(T::lit(0.25)), cfg)
}

/// Both parts from two independent estimates; the imaginary run uses a
/// derived seed.
pub fn es_complex<T: Real>(p: &ExpSumProblem<T>, cfg: &AEConfig) -> Result<ExpSumResult> {
    ExpSumPlan::new(p, cfg)?.sample(cfg.seed)
}

/// Simulated probabilities for both parts, reusable across seeds.
#[derive(Debug, Clone)]
pub struct ExpSumPlan {
    re: AePlan,
    im: AePlan,
}

impl ExpSumPlan {
    pub fn new<T: Real>(p: &ExpSumProblem<T>, cfg: &AEConfig) -> Result<Self> {
        Ok(Self {
            re: plan_amplitude_estimation(&phase_amplitude(p)?, cfg)?,
            im: plan_amplitude_estimation(&phase_amplitude(&p.shifted(T::lit(0.25)))?, cfg)?,
        })
    }

    pub fn sample(&self, seed: u64) -> Result<ExpSumResult> {
        let re = real_result(self.re.sample(seed)?);
        let im = real_result(self.im.sample(crate::rng::derive_seed(seed, 1))?);
        Ok(ExpSumResult {
            value: Complex::new(re.value.re, im.value.re),
            method: ExpSumMethod::Phase,
            ae_error_bound: re.ae_error_bound.hypot(im.ae_error_bound),
            q_applications: re.q_applications + im.q_applications,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagnitudeConstruction {
    InversionAboutMean,
    HadamardOr,
}

/// Circuit on `n + 1` qubits leaving `a Σ|k⟩|0⟩ + Σ(a − a_k)|k⟩|1⟩`,
/// `a_k = √w_k e^{2πi f̃(k)}`, `a = (1/N)Σ a_k`.
pub fn magnitude_circuit<T: Real>(
    p: &ExpSumProblem<T>,
    how: MagnitudeConstruction,
) -> Result<Circuit<T>> {
    let n = p.n_qubits;
    let register: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n + 1);
    c.append(&preparation_circuit(p.weights.as_ref())?)?;
    c.push(Op::Diagonal {
        register: register.clone(),
        phases: p.truncated()?.into_iter().map(|f| T::TAU() * f).collect(),
    })?;
    match how {
        MagnitudeConstruction::InversionAboutMean => {
            c.gate(Gate::x(n))?;
            c.push(Op::InversionAboutMean {
                register: (0..=n).collect(),
            })?;
        }
        MagnitudeConstruction::HadamardOr => {
            for &q in &register {
                c.gate(Gate::h(q))?;
            }
            c.gate(Gate::controlled_or(&register, n))?;
            for &q in &register {
                c.gate(Gate::h(q))?;
            }
            // The bare construction leaves a_k − a on the |1⟩ branch.
            c.gate(Gate::phase(T::PI(), n))?;
        }
    }
    Ok(c)
}

pub fn magnitude_state<T: Real>(
    p: &ExpSumProblem<T>,
    how: MagnitudeConstruction,
) -> Result<StateVector<T>> {
    let mut s = StateVector::zero(p.n_qubits + 1)?;
    magnitude_circuit(p, how)?.apply(&mut s)?;
    Ok(s)
}

/// The ancilla-|0⟩ branch has norm `√N·|a|`.
pub fn magnitude_amplitude<T: Real>(
    p: &ExpSumProblem<T>,
    how: MagnitudeConstruction,
) -> Result<PreparedAmplitude<T>> {
    PreparedAmplitude::new(magnitude_circuit(p, how)?, p.n_qubits)
}

fn es_magnitude<T: Real>(
    p: &ExpSumProblem<T>,
    cfg: &AEConfig,
    how: MagnitudeConstruction,
) -> Result<ExpSumResult> {
    let est = estimate_amplitude(&magnitude_amplitude(p, how)?, cfg)?;
    Ok(magnitude_result(p.n_qubits, est, how))
}

fn magnitude_result(
    n_qubits: usize,
    est: AmplitudeEstimate,
    how: MagnitudeConstruction,
) -> ExpSumResult {
    let root_n = ((1u64 << n_qubits) as f64).sqrt();
    ExpSumResult {
        value: Complex::new(root_n * est.a_hat, 0.0),
        method: match how {
            MagnitudeConstruction::InversionAboutMean => ExpSumMethod::Inversion,
            MagnitudeConstruction::HadamardOr => ExpSumMethod::Hadamard,
        },
        ae_error_bound: root_n * est.a_bound(),
        q_applications: est.q_applications,
    }
}

/// `|Σ √w_k e^{2πi f̃(k)}|` from the inversion-about-the-mean state.
pub fn es_magnitude_inversion<T: Real>(
    p: &ExpSumProblem<T>,
    cfg: &AEConfig,
) -> Result<ExpSumResult> {
    es_magnitude(p, cfg, MagnitudeConstruction::InversionAboutMean)
}

/// Same target through Hadamard transforms around a controlled-or.
pub fn es_magnitude_hadamard<T: Real>(
    p: &ExpSumProblem<T>,
    cfg: &AEConfig,
) -> Result<ExpSumResult> {
    es_magnitude(p, cfg, MagnitudeConstruction::HadamardOr)
}

/// Plan for a magnitude route, reusable across seeds.
pub fn plan_magnitude<T: Real>(
    p: &ExpSumProblem<T>,
    cfg: &AEConfig,
    how: MagnitudeConstruction,
) -> Result<impl Fn(u64) -> Result<ExpSumResult>> {
    let plan = plan_amplitude_estimation(&magnitude_amplitude(p, how)?, cfg)?;
    let n = p.n_qubits;
    Ok(move |seed| Ok(magnitude_result(n, plan.sample(seed)?, how)))
}

/// Plan for the real part alone.
pub fn plan_real<T: Real>(
    p: &ExpSumProblem<T>,
    cfg: &AEConfig,
) -> Result<impl Fn(u64) -> Result<ExpSumResult>> {
    let plan = plan_amplitude_estimation(&phase_amplitude(p)?, cfg)?;
    Ok(move |seed| Ok(real_result(plan.sample(seed)?)))
}
