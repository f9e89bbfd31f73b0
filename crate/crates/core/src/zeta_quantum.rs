//! Hybrid zeta evaluation: Dirichlet partial sums and polynomial block sums
//! read off simulated amplitude estimation, everything else classical.
//!
//! The partial sum `Σ_{k≤N} k^{−s}` is loaded as the state
//! `Σ √(k^{−σ}/H_N) |k−1⟩` followed by ancilla rotations `R(θ_k)`,
//! `θ_k = (t/2) ln k`, so that `2S_r − 1 = Σ w_k cos(t ln k)`. A second run
//! with `R(π/4 ± θ_k)` yields `∓Σ w_k sin(t ln k)`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::amp_est::{
    plan_amplitude_estimation, AEConfig, AePlan, AmplitudeEstimate, PreparedAmplitude,
};
use crate::error::{domain, Result};
use crate::exp_sum::{ExpSumPlan, ExpSumProblem};
use crate::func_rotation::Polynomial;
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::sim::{Circuit, Op, StateVector};
use crate::state_prep::{preparation_circuit, prepare_weighted_state, WeightOracle};
use crate::zeta::{
    em_tail, faulhaber_sum, harmonic_prefix_sums, rs_components, select_em_params, EMParams,
};

/// Smallest register holding `len` basis states, at least one qubit.
pub fn qubits_for(len: u64) -> usize {
    (64 - len.saturating_sub(1).leading_zeros() as usize).max(1)
}

/// Weights `k^{−σ}/H_N` for `k = 1…N`, with term `k` on basis state `k − 1`
/// so that `S_w(M) = H_{min(M,N)}/H_N`.
#[derive(Debug, Clone)]
pub struct PowerWeightOracle<T = f64> {
    n_qubits: usize,
    sigma: T,
    prefix: Vec<T>,
}

impl<T: Real> PowerWeightOracle<T> {
    pub fn new(n_qubits: usize, n_terms: u64, sigma: T) -> Result<Self> {
        if n_terms == 0 || n_terms > 1 << n_qubits {
            return domain(format!("{n_terms} terms do not fit {n_qubits} qubits"));
        }
        Ok(Self {
            n_qubits,
            sigma,
            prefix: harmonic_prefix_sums(n_terms, sigma)?,
        })
    }

    /// Register sized to `n_terms`.
    pub fn fitted(n_terms: u64, sigma: T) -> Result<Self> {
        Self::new(qubits_for(n_terms), n_terms, sigma)
    }

    pub fn n_terms(&self) -> u64 {
        (self.prefix.len() - 1) as u64
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// `H_M = Σ_{k≤M} k^{−σ}`.
    pub fn harmonic(&self, m: u64) -> T {
        self.prefix[m.min(self.n_terms()) as usize]
    }

    pub fn total(&self) -> T {
        self.harmonic(self.n_terms())
    }
}

impl<T: Real> WeightOracle<T> for PowerWeightOracle<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn prefix_sum(&self, m: usize) -> T {
        self.harmonic(m as u64) / self.total()
    }
}

pub fn prepare_power_weight_state<T: Real>(
    oracle: &PowerWeightOracle<T>,
) -> Result<StateVector<T>> {
    Ok(prepare_weighted_state(oracle)?.state)
}

/// Weights `k^j / Z_j` on `k = 0…K−1` with `Z_j = H_{K−1,j}` (plus one for
/// the `0⁰` term when `j = 0`). Prefix sums are exact Faulhaber values.
#[derive(Debug, Clone)]
pub struct BlockWeightOracle<T = f64> {
    n_qubits: usize,
    k_terms: u64,
    power: u32,
    normalizer: BigInt,
    _scalar: std::marker::PhantomData<T>,
}

pub const MAX_BLOCK_POWER: u32 = 30;

impl<T: Real> BlockWeightOracle<T> {
    pub fn new(n_qubits: usize, k_terms: u64, power: u32) -> Result<Self> {
        if k_terms == 0 || k_terms > 1 << n_qubits {
            return domain(format!("{k_terms} terms do not fit {n_qubits} qubits"));
        }
        if power > MAX_BLOCK_POWER {
            return domain(format!("block power {power} above {MAX_BLOCK_POWER}"));
        }
        if power > 0 && k_terms == 1 {
            return domain("a single k = 0 term has zero weight for j ≥ 1");
        }
        Ok(Self {
            n_qubits,
            k_terms,
            power,
            normalizer: Self::mass_below(k_terms, power)?,
            _scalar: std::marker::PhantomData,
        })
    }

    pub fn fitted(k_terms: u64, power: u32) -> Result<Self> {
        Self::new(qubits_for(k_terms), k_terms, power)
    }

    /// `Σ_{k<M} k^j` including `0⁰ = 1`.
    fn mass_below(m: u64, power: u32) -> Result<BigInt> {
        if m == 0 {
            return Ok(BigInt::zero());
        }
        let h = faulhaber_sum(m - 1, power)?;
        Ok(if power == 0 { h + 1 } else { h })
    }

    /// `Z_j`.
    pub fn normalizer(&self) -> &BigInt {
        &self.normalizer
    }

    /// `Z_j / K^j`, exactly.
    pub fn rescale(&self) -> BigRational {
        BigRational::new(
            self.normalizer.clone(),
            BigInt::from(self.k_terms).pow(self.power),
        )
    }
}

impl<T: Real> WeightOracle<T> for BlockWeightOracle<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn prefix_sum(&self, m: usize) -> T {
        let mass = Self::mass_below((m as u64).min(self.k_terms), self.power)
            .expect("checked on construction");
        T::from_big_rational(&BigRational::new(mass, self.normalizer.clone()))
    }
}

/// How the two estimated parts are combined into `Σ k^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recombination {
    /// `R(π/4 − θ_k)` for the imaginary run; yields `Σ k^{−σ} e^{+it ln k}`.
    AsDisplayed,
    /// `R(π/4 + θ_k)`; yields `Σ k^{−σ} e^{−it ln k}`.
    #[default]
    OracleMatching,
}

fn rotation_amplitude<T: Real>(
    oracle: &PowerWeightOracle<T>,
    angle: impl Fn(u64) -> T,
) -> Result<PreparedAmplitude<T>> {
    let n = oracle.n_qubits;
    let mut a = Circuit::new(n + 1);
    a.append(&preparation_circuit(oracle)?)?;
    let terms = oracle.n_terms();
    a.push(Op::ConditionedRotation {
        register: (0..n).collect(),
        target: n,
        angles: (0..1u64 << n)
            .map(|j| if j < terms { angle(j + 1) } else { T::zero() })
            .collect(),
    })?;
    PreparedAmplitude::new(a, n)
}

/// The two prepared amplitudes, real part first.
pub fn partial_sum_amplitudes<T: Real>(
    oracle: &PowerWeightOracle<T>,
    t: T,
    how: Recombination,
) -> Result<(PreparedAmplitude<T>, PreparedAmplitude<T>)> {
    let theta = |k: u64| T::lit(0.5) * t * T::from_u64(k).expect("u64 representable").ln();
    let re = rotation_amplitude(oracle, theta)?;
    let im = match how {
        Recombination::AsDisplayed => rotation_amplitude(oracle, |k| T::FRAC_PI_4() - theta(k))?,
        Recombination::OracleMatching => rotation_amplitude(oracle, |k| T::FRAC_PI_4() + theta(k))?,
    };
    Ok((re, im))
}

/// `H_N((2S_r − 1) + i(2S_i − 1))`.
pub fn recombine(h_n: f64, s_r: f64, s_i: f64) -> Complex<f64> {
    Complex::new(h_n * (2.0 * s_r - 1.0), h_n * (2.0 * s_i - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSumEstimate {
    pub value: Complex<f64>,
    /// `|value − Σ k^{−s}|` bound, holding with probability `1 − δ`.
    pub ae_error_bound: f64,
    pub q_applications: u64,
    pub n_terms: u64,
    pub h_n: f64,
}

/// Simulated readout distributions of both parts of one partial sum.
#[derive(Debug, Clone)]
pub struct PartialSumPlan {
    re: Option<AePlan>,
    im: Option<AePlan>,
    n_terms: u64,
    h_n: f64,
}

impl PartialSumPlan {
    /// Each of the two estimates runs at `δ/2`.
    pub fn new<T: Real>(
        n_terms: u64,
        s: Complex<T>,
        cfg: &AEConfig,
        how: Recombination,
    ) -> Result<Self> {
        if n_terms == 0 {
            return Ok(Self {
                re: None,
                im: None,
                n_terms,
                h_n: 0.0,
            });
        }
        let oracle = PowerWeightOracle::fitted(n_terms, s.re)?;
        let (re, im) = partial_sum_amplitudes(&oracle, s.im, how)?;
        let part = cfg.with_delta(cfg.delta / 2.0);
        Ok(Self {
            re: Some(plan_amplitude_estimation(&re, &part)?),
            im: Some(plan_amplitude_estimation(&im, &part)?),
            n_terms,
            h_n: oracle.total().to_f64_lossy(),
        })
    }

    pub fn sample(&self, seed: u64) -> Result<PartialSumEstimate> {
        let (Some(re), Some(im)) = (&self.re, &self.im) else {
            return Ok(PartialSumEstimate {
                value: Complex::new(0.0, 0.0),
                ae_error_bound: 0.0,
                q_applications: 0,
                n_terms: 0,
                h_n: 0.0,
            });
        };
        let r = re.sample(derive_seed(seed, 0))?;
        let i = im.sample(derive_seed(seed, 1))?;
        let sq = |e: &AmplitudeEstimate| e.a_hat * e.a_hat;
        Ok(PartialSumEstimate {
            value: recombine(self.h_n, sq(&r), sq(&i)),
            ae_error_bound: self.h_n * r.cos2_bound().hypot(i.cos2_bound()),
            q_applications: r.q_applications + i.q_applications,
            n_terms: self.n_terms,
            h_n: self.h_n,
        })
    }
}

/// Estimate of `Σ_{k≤N} k^{−s}`.
pub fn quantum_partial_sum<T: Real>(
    n_terms: u64,
    s: Complex<T>,
    cfg: &AEConfig,
) -> Result<PartialSumEstimate> {
    quantum_partial_sum_with(n_terms, s, cfg, Recombination::default())
}

pub fn quantum_partial_sum_with<T: Real>(
    n_terms: u64,
    s: Complex<T>,
    cfg: &AEConfig,
    how: Recombination,
) -> Result<PartialSumEstimate> {
    if n_terms == 0 {
        return domain("partial sum needs N ≥ 1");
    }
    PartialSumPlan::new(n_terms, s, cfg, how)?.sample(cfg.seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSumEstimate {
    pub value: Complex<f64>,
    pub ae_error_bound: f64,
    pub q_applications: u64,
    /// `Z_j / K^j`.
    pub rescale: f64,
}

/// Estimate of `(1/K^j) Σ_{k<K} k^j e^{2πi p(k)}`.
pub fn quantum_block_sum<T: Real>(
    k_terms: u64,
    power: u32,
    poly: &Polynomial<T>,
    cfg: &AEConfig,
) -> Result<BlockSumEstimate> {
    if poly.degree() > 4 {
        return domain(format!(
            "block polynomial of degree {} above 4",
            poly.degree()
        ));
    }
    let oracle = BlockWeightOracle::<T>::fitted(k_terms, power)?;
    let rescale = T::from_big_rational(&oracle.rescale()).to_f64_lossy();
    let p = poly.clone();
    let problem = ExpSumProblem::with_weights(std::sync::Arc::new(oracle), move |k| {
        p.eval(T::from_usize_lossy(k))
    })?;
    let est = ExpSumPlan::new(&problem, cfg)?.sample(cfg.seed)?;
    Ok(BlockSumEstimate {
        value: est.value * rescale,
        ae_error_bound: est.ae_error_bound * rescale,
        q_applications: est.q_applications,
        rescale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HybridMode {
    EulerMaclaurin,
    RiemannSiegel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridResult {
    pub value: Complex<f64>,
    /// Propagated amplitude-estimation error, probability `1 − δ`.
    pub ae_error_bound: f64,
    /// Truncation bound of the classical remainder (Euler-Maclaurin only;
    /// zero for Riemann-Siegel, whose remainder is integrated numerically).
    pub classical_error_bound: f64,
    pub q_applications: u64,
    /// Partial-sum length `N`.
    pub n_terms: u64,
    /// `K` for Euler-Maclaurin.
    pub em_order: Option<usize>,
}

impl HybridResult {
    pub fn total_error_bound(&self) -> f64 {
        self.ae_error_bound + self.classical_error_bound
    }
}

#[derive(Debug, Clone)]
enum HybridKind {
    Em {
        params: EMParams,
        tail: Complex<f64>,
        remainder_bound: f64,
        main: PartialSumPlan,
    },
    Rs {
        parts: crate::zeta::RsEvaluation<f64>,
        main: PartialSumPlan,
        dual: PartialSumPlan,
    },
}

/// Classical pieces plus the partial-sum readout distributions, so a seeded
/// ensemble costs one simulation.
#[derive(Debug, Clone)]
pub struct HybridPlan {
    kind: HybridKind,
}

impl HybridPlan {
    pub fn new(
        s: Complex<f64>,
        digits: u32,
        mode: HybridMode,
        cfg: &AEConfig,
        how: Recombination,
    ) -> Result<Self> {
        let kind = match mode {
            HybridMode::EulerMaclaurin => {
                if s.re == 1.0 && s.im == 0.0 {
                    return Err(crate::error::Error::Pole);
                }
                let params = select_em_params(s, digits)?;
                HybridKind::Em {
                    params,
                    tail: em_tail(s, params),
                    remainder_bound: crate::zeta::em_remainder_bound(s, params),
                    main: PartialSumPlan::new(params.n, s, cfg, how)?,
                }
            }
            HybridMode::RiemannSiegel => {
                if s.im < 0.0 {
                    return domain("hybrid Riemann-Siegel takes t ≥ 0");
                }
                let parts = rs_components(s)?;
                let half = cfg.with_delta(cfg.delta / 2.0);
                let dual_s = Complex::new(1.0 - s.re, s.im);
                HybridKind::Rs {
                    main: PartialSumPlan::new(parts.n, s, &half, how)?,
                    dual: PartialSumPlan::new(parts.n, dual_s, &half, how)?,
                    parts,
                }
            }
        };
        Ok(Self { kind })
    }

    pub fn sample(&self, seed: u64) -> Result<HybridResult> {
        match &self.kind {
            HybridKind::Em {
                params,
                tail,
                remainder_bound,
                main,
            } => {
                let m = main.sample(derive_seed(seed, 0))?;
                Ok(HybridResult {
                    value: m.value + tail,
                    ae_error_bound: m.ae_error_bound,
                    classical_error_bound: *remainder_bound,
                    q_applications: m.q_applications,
                    n_terms: params.n,
                    em_order: Some(params.k),
                })
            }
            HybridKind::Rs { parts, main, dual } => {
                let m = main.sample(derive_seed(seed, 0))?;
                let d = dual.sample(derive_seed(seed, 1))?;
                Ok(HybridResult {
                    value: parts.recombine(m.value, d.value),
                    ae_error_bound: m.ae_error_bound + parts.chi.norm() * d.ae_error_bound,
                    classical_error_bound: 0.0,
                    q_applications: m.q_applications + d.q_applications,
                    n_terms: parts.n,
                    em_order: None,
                })
            }
        }
    }
}

/// ζ(s) with the main partial sum(s) estimated by amplitude estimation.
pub fn zeta_hybrid(
    s: Complex<f64>,
    digits: u32,
    mode: HybridMode,
    cfg: &AEConfig,
) -> Result<HybridResult> {
    HybridPlan::new(s, digits, mode, cfg, Recombination::default())?.sample(cfg.seed)
}
