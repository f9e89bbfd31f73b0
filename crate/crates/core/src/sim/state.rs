use num_complex::Complex;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::gate::{control_mask, Gate, GateKind, Mat2};
use crate::error::{domain, Error, Result};
use crate::rng::rng_for;
use crate::scalar::Real;

/// States at least this long are processed in parallel.
const PAR_MIN_LEN: usize = 1 << 15;
const PAR_CHUNK: usize = 1 << 13;

/// Amplitude condition `index & mask == value`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Cond {
    pub mask: usize,
    pub value: usize,
}

impl Cond {
    pub const ALWAYS: Cond = Cond { mask: 0, value: 0 };

    #[inline]
    pub fn holds(self, i: usize) -> bool {
        i & self.mask == self.value
    }

    pub fn and(self, other: Cond) -> Cond {
        Cond {
            mask: self.mask | other.mask,
            value: self.value | other.value,
        }
    }
}

/// Dense state of `n` qubits. Basis index `k = Σ q_i 2^i`, qubit 0 least
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T = f64> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Largest register the simulator will allocate: 2^26 amplitudes.
    pub const MAX_QUBITS: usize = 26;

    pub fn new_basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > Self::MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{n_qubits} qubits requested, supported range is 1..={}",
                Self::MAX_QUBITS
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            ));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new_basis_state(n_qubits, 0)
    }

    /// Wraps a normalized amplitude vector whose length is a power of two.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return domain(format!("amplitude count {len} is not a power of two >= 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > Self::MAX_QUBITS {
            return Err(Error::Capacity(format!("{n_qubits} qubits")));
        }
        let s = Self { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - T::one()).abs() > T::norm_tolerance() {
            return domain(format!("state norm {} differs from 1", norm.to_f64_lossy()));
        }
        Ok(s)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    #[inline]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        det_sum(&self.amps, |a| a.norm_sqr())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.amps.iter().zip(&other.amps) {
            acc += a.conj() * b;
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return domain(format!("qubit {q} outside {} qubits", self.n_qubits));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_gate_cond(gate, Cond::ALWAYS);
        Ok(())
    }

    pub(crate) fn apply_gate_cond(&mut self, gate: &Gate<T>, extra: Cond) {
        let t = gate.target;
        match gate.matrix() {
            Some(m) => {
                let (mask, value) = control_mask(&gate.controls);
                let cond = Cond { mask, value }.and(extra);
                if matches!(gate.kind, GateKind::X) {
                    for_each_pair(&mut self.amps, t, cond, |_, a0, a1| std::mem::swap(a0, a1));
                } else {
                    apply_mat2(&mut self.amps, t, cond, &m);
                }
            }
            None => {
                // controlled-or: fire iff some control is active
                let (mask, value) = control_mask(&gate.controls);
                for_each_pair(&mut self.amps, t, Cond::ALWAYS, |i, a0, a1| {
                    if extra.holds(i) && (i & mask) ^ (value ^ mask) != 0 {
                        std::mem::swap(a0, a1);
                    }
                });
            }
        }
    }

    /// Multiplies amplitude `k` by `e^{i·phase(k)}`.
    pub fn apply_diagonal_oracle<F>(&mut self, phase: F)
    where
        F: Fn(usize) -> T + Sync,
    {
        map_indexed(&mut self.amps, |k, a| {
            *a *= Complex::from_polar(T::one(), phase(k))
        });
    }

    /// As [`apply_diagonal_oracle`](Self::apply_diagonal_oracle), propagating
    /// the first failure of `phase`. The state is untouched on error.
    pub fn try_apply_diagonal_oracle<F>(&mut self, phase: F) -> Result<()>
    where
        F: Fn(usize) -> Result<T> + Sync,
    {
        let phases: Vec<T> = (0..self.dim())
            .into_par_iter()
            .map(&phase)
            .collect::<Result<_>>()?;
        self.apply_diagonal_oracle(|k| phases[k]);
        Ok(())
    }

    /// `a_k ← 2b − a_k` with `b` the mean of all amplitudes.
    pub fn inversion_about_mean(&mut self) {
        let re = det_sum(&self.amps, |a| a.re);
        let im = det_sum(&self.amps, |a| a.im);
        let n = T::from_usize_lossy(self.dim());
        let two_b = Complex::new(re, im) * (T::lit(2.0) / n);
        map_indexed(&mut self.amps, |_, a| *a = two_b - *a);
    }

    /// Exact marginal probability of reading `outcome` on `qubit`.
    pub fn probability_of(&self, qubit: usize, outcome: u8) -> Result<T> {
        self.check_qubit(qubit)?;
        if outcome > 1 {
            return domain(format!("outcome {outcome} is not a bit"));
        }
        let bit = 1usize << qubit;
        let want = if outcome == 1 { bit } else { 0 };
        let p = det_sum_indexed(&self.amps, |i, a| {
            if i & bit == want {
                a.norm_sqr()
            } else {
                T::zero()
            }
        });
        Ok((p / self.norm_sqr()).max(T::zero()).min(T::one()))
    }

    /// Seeded binomial sample of `shots` measurements of one qubit.
    /// Returns `(zeros, ones)`.
    pub fn sample_measurements(&self, qubit: usize, shots: u64, seed: u64) -> Result<(u64, u64)> {
        if shots == 0 {
            return domain("shots must be positive");
        }
        let p0 = self.probability_of(qubit, 0)?.to_f64_lossy();
        let zeros = sample_binomial(shots, p0, seed);
        Ok((zeros, shots - zeros))
    }

    /// Probability of every value of the listed register, index = register value.
    pub fn register_distribution(&self, register: &[usize]) -> Result<Vec<T>> {
        for &q in register {
            self.check_qubit(q)?;
        }
        let mut out = vec![T::zero(); 1 << register.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[gather(i, register)] += a.norm_sqr();
        }
        Ok(out)
    }
}

/// Number of successes in `shots` Bernoulli(p) trials, seeded.
pub fn sample_binomial(shots: u64, p: f64, seed: u64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    let mut rng = rng_for(seed, 0);
    Binomial::new(shots, p)
        .expect("probability clamped to [0, 1]")
        .sample(&mut rng)
}

/// Register value encoded in basis index `i`.
#[inline]
pub(crate) fn gather(i: usize, register: &[usize]) -> usize {
    register
        .iter()
        .enumerate()
        .fold(0, |v, (j, &q)| v | (((i >> q) & 1) << j))
}

/// Basis-index bits for register value `v`.
#[inline]
pub(crate) fn scatter(v: usize, register: &[usize]) -> usize {
    register
        .iter()
        .enumerate()
        .fold(0, |i, (j, &q)| i | (((v >> j) & 1) << q))
}

/// Sum in fixed-size chunks combined left to right, so the result does not
/// depend on the thread count.
pub(crate) fn det_sum<T: Real, F>(amps: &[Complex<T>], f: F) -> T
where
    F: Fn(&Complex<T>) -> T + Sync,
{
    det_sum_indexed(amps, |_, a| f(a))
}

pub(crate) fn det_sum_indexed<T: Real, F>(amps: &[Complex<T>], f: F) -> T
where
    F: Fn(usize, &Complex<T>) -> T + Sync,
{
    let chunk_sum = |(c, chunk): (usize, &[Complex<T>])| {
        chunk
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, a)| acc + f(c * PAR_CHUNK + j, a))
    };
    let partial: Vec<T> = if amps.len() >= PAR_MIN_LEN {
        amps.par_chunks(PAR_CHUNK)
            .enumerate()
            .map(chunk_sum)
            .collect()
    } else {
        amps.chunks(PAR_CHUNK).enumerate().map(chunk_sum).collect()
    };
    partial.into_iter().fold(T::zero(), |a, b| a + b)
}

pub(crate) fn map_indexed<T: Real, F>(amps: &mut [Complex<T>], f: F)
where
    F: Fn(usize, &mut Complex<T>) + Sync,
{
    if amps.len() >= PAR_MIN_LEN {
        amps.par_iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    } else {
        amps.iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    }
}

/// Visits every amplitude pair differing only in `target`, passing the index
/// with the target bit clear. Pairs failing `cond` are skipped.
pub(crate) fn for_each_pair<T: Real, F>(amps: &mut [Complex<T>], target: usize, cond: Cond, f: F)
where
    F: Fn(usize, &mut Complex<T>, &mut Complex<T>) + Sync,
{
    let half = 1usize << target;
    let block = half << 1;
    let visit_block = |base: usize, blk: &mut [Complex<T>]| {
        let (lo, hi) = blk.split_at_mut(half);
        for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            let i = base + j;
            if cond.holds(i) {
                f(i, a0, a1);
            }
        }
    };
    if amps.len() < PAR_MIN_LEN {
        for (b, blk) in amps.chunks_mut(block).enumerate() {
            visit_block(b * block, blk);
        }
    } else if block <= PAR_CHUNK {
        amps.par_chunks_mut(PAR_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                for (b, blk) in chunk.chunks_mut(block).enumerate() {
                    visit_block(c * PAR_CHUNK + b * block, blk);
                }
            });
    } else {
        for (b, blk) in amps.chunks_mut(block).enumerate() {
            let base = b * block;
            let (lo, hi) = blk.split_at_mut(half);
            lo.par_chunks_mut(PAR_CHUNK)
                .zip(hi.par_chunks_mut(PAR_CHUNK))
                .enumerate()
                .for_each(|(c, (l, h))| {
                    for (j, (a0, a1)) in l.iter_mut().zip(h.iter_mut()).enumerate() {
                        let i = base + c * PAR_CHUNK + j;
                        if cond.holds(i) {
                            f(i, a0, a1);
                        }
                    }
                });
        }
    }
}

pub(crate) fn apply_mat2<T: Real>(amps: &mut [Complex<T>], target: usize, cond: Cond, m: &Mat2<T>) {
    let m = *m;
    for_each_pair(amps, target, cond, move |_, a0, a1| {
        let (x, y) = (*a0, *a1);
        *a0 = m[0][0] * x + m[0][1] * y;
        *a1 = m[1][0] * x + m[1][1] * y;
    });
}
