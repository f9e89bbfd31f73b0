//! Weighted superpositions `Σ √w_k |k⟩` from a prefix-sum oracle.
//!
//! The circuit bisects the index range from the most significant qubit down.
//! At level `ℓ` the qubit `n−1−ℓ` is rotated by `R(α)` with
//! `α = arccos √(left mass / block mass)`, uniformly controlled on the `ℓ`
//! qubits above it. Masses come from `S_w` evaluated at block boundaries only.

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::sim::{Circuit, Op, StateVector};

/// Prefix sums `S_w(M) = Σ_{k<M} w_k` of a distribution over `2^n` indices.
pub trait WeightOracle<T: Real = f64>: Sync {
    fn n_qubits(&self) -> usize;

    fn prefix_sum(&self, m: usize) -> T;

    fn weight(&self, k: usize) -> T {
        self.prefix_sum(k + 1) - self.prefix_sum(k)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UniformOracle {
    pub n_qubits: usize,
}

impl<T: Real> WeightOracle<T> for UniformOracle {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn prefix_sum(&self, m: usize) -> T {
        T::from_usize_lossy(m) / T::from_usize_lossy(1 << self.n_qubits)
    }
}

/// Oracle over an explicit weight table, normalized on construction.
#[derive(Debug, Clone)]
pub struct ExplicitOracle<T = f64> {
    n_qubits: usize,
    prefix: Vec<T>,
}

impl<T: Real> ExplicitOracle<T> {
    /// Missing trailing weights are zero. Weights must be nonnegative with a
    /// positive total.
    pub fn new(n_qubits: usize, weights: &[T]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if weights.len() > dim {
            return domain(format!(
                "{} weights for {} basis states",
                weights.len(),
                dim
            ));
        }
        if let Some(w) = weights.iter().find(|w| **w < T::zero() || !w.is_finite()) {
            return Err(Error::OracleViolation(format!(
                "weight {w} is not a finite nonnegative number"
            )));
        }
        let mut prefix = Vec::with_capacity(dim + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for k in 0..dim {
            acc += weights.get(k).copied().unwrap_or_else(T::zero);
            prefix.push(acc);
        }
        if acc <= T::zero() {
            return Err(Error::OracleViolation("total weight is zero".into()));
        }
        prefix.iter_mut().for_each(|p| *p /= acc);
        Ok(Self { n_qubits, prefix })
    }
}

impl<T: Real> WeightOracle<T> for ExplicitOracle<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn prefix_sum(&self, m: usize) -> T {
        self.prefix[m]
    }
}

/// Adapter for a prefix-sum closure.
pub struct FnOracle<F> {
    pub n_qubits: usize,
    pub prefix: F,
}

impl<T: Real, F: Fn(usize) -> T + Sync> WeightOracle<T> for FnOracle<F> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn prefix_sum(&self, m: usize) -> T {
        (self.prefix)(m)
    }
}

#[derive(Debug, Clone)]
pub struct PreparedState<T = f64> {
    pub state: StateVector<T>,
    pub circuit: Circuit<T>,
}

impl<T: Real> PreparedState<T> {
    /// Elementary (multi-)controlled rotations in the circuit, `2^n − 1`.
    pub fn rotation_count(&self) -> usize {
        self.circuit.gate_count()
    }
}

/// Circuit taking `|0…0⟩` on qubits `0..n` to `Σ √w_k |k⟩`.
pub fn preparation_circuit<T: Real, O: WeightOracle<T> + ?Sized>(oracle: &O) -> Result<Circuit<T>> {
    let n = oracle.n_qubits();
    if n == 0 {
        return domain("oracle must cover at least one qubit");
    }
    let dim = 1usize << n;
    let tol = T::lit(1e-12);
    let s0 = oracle.prefix_sum(0);
    let s_end = oracle.prefix_sum(dim);
    if s0.abs() > tol || (s_end - T::one()).abs() > tol {
        return Err(Error::OracleViolation(format!(
            "prefix sums run from {s0} to {s_end}, expected 0 to 1"
        )));
    }
    let mut circuit = Circuit::new(n);
    for level in 0..n {
        let target = n - 1 - level;
        let half = 1usize << target;
        let register: Vec<usize> = (target + 1..n).collect();
        let mut angles = Vec::with_capacity(1 << level);
        for j in 0..1usize << level {
            let lo = oracle.prefix_sum(2 * j * half);
            let mid = oracle.prefix_sum((2 * j + 1) * half);
            let hi = oracle.prefix_sum((2 * j + 2) * half);
            let left = mid - lo;
            let right = hi - mid;
            if left < -tol || right < -tol {
                return Err(Error::OracleViolation(format!(
                    "negative mass in block {j} at level {level}"
                )));
            }
            let left = left.max(T::zero());
            let total = left + right.max(T::zero());
            let alpha = if total <= T::zero() {
                T::zero()
            } else {
                (left / total).min(T::one()).sqrt().acos()
            };
            angles.push(alpha);
        }
        circuit.push(Op::ConditionedRotation {
            register,
            target,
            angles,
        })?;
    }
    Ok(circuit)
}

pub fn prepare_weighted_state<T: Real, O: WeightOracle<T> + ?Sized>(
    oracle: &O,
) -> Result<PreparedState<T>> {
    let circuit = preparation_circuit(oracle)?;
    let mut state = StateVector::zero(oracle.n_qubits())?;
    circuit.apply(&mut state)?;
    Ok(PreparedState { state, circuit })
}

/// `max_k | |a_k|² − w_k |`.
pub fn verify_preparation<T: Real, O: WeightOracle<T> + ?Sized>(
    state: &StateVector<T>,
    oracle: &O,
) -> Result<T> {
    if state.n_qubits() != oracle.n_qubits() {
        return domain(format!(
            "state has {} qubits, oracle {}",
            state.n_qubits(),
            oracle.n_qubits()
        ));
    }
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| (a.norm_sqr() - oracle.weight(k)).abs())
        .fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::sync::Mutex;

    #[test]
    fn uniform_three_qubits() {
        let p = prepare_weighted_state::<f64, _>(&UniformOracle { n_qubits: 3 }).unwrap();
        for a in p.state.amplitudes() {
            assert!((a.re - 1.0 / 8f64.sqrt()).abs() < 1e-15 && a.im == 0.0);
        }
        assert_eq!(p.rotation_count(), 7);
    }

    #[test]
    fn two_point_distribution() {
        let o = ExplicitOracle::<f64>::new(1, &[0.25, 0.75]).unwrap();
        let p = prepare_weighted_state(&o).unwrap();
        assert!((p.state.amplitudes()[0].re - 0.5).abs() < 1e-15);
        assert!((p.state.amplitudes()[1].re - 0.75f64.sqrt()).abs() < 1e-15);
        let uniform = prepare_weighted_state::<f64, _>(&UniformOracle { n_qubits: 1 }).unwrap();
        assert!((verify_preparation(&uniform.state, &o).unwrap() - 0.25).abs() < 1e-15);
        assert!(
            verify_preparation(&uniform.state, &UniformOracle { n_qubits: 1 }).unwrap() < 1e-15
        );
    }

    #[test]
    fn harmonic_weights() {
        // w_k ∝ 1/(k+1) = (12, 6, 4, 3)/25
        let o = ExplicitOracle::<f64>::new(2, &[1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        let p = prepare_weighted_state(&o).unwrap();
        for (k, w) in [12.0, 6.0, 4.0, 3.0].iter().enumerate() {
            assert!((p.state.amplitudes()[k].norm_sqr() - w / 25.0).abs() < 1e-12);
        }
        assert!(verify_preparation(&p.state, &o).unwrap() < 1e-12);
    }

    #[test]
    fn zero_mass_blocks_and_violations() {
        let o = ExplicitOracle::<f64>::new(3, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let p = prepare_weighted_state(&o).unwrap();
        assert!(verify_preparation(&p.state, &o).unwrap() < 1e-12);

        let bad = FnOracle {
            n_qubits: 1,
            prefix: |m: usize| [0.0, 1.2, 1.0][m],
        };
        assert!(matches!(
            prepare_weighted_state::<f64, _>(&bad),
            Err(Error::OracleViolation(_))
        ));
    }

    struct Recording<O> {
        inner: O,
        seen: Mutex<BTreeSet<usize>>,
    }

    impl<O: WeightOracle<f64>> WeightOracle<f64> for Recording<O> {
        fn n_qubits(&self) -> usize {
            self.inner.n_qubits()
        }
        fn prefix_sum(&self, m: usize) -> f64 {
            self.seen.lock().unwrap().insert(m);
            self.inner.prefix_sum(m)
        }
    }

    #[test]
    fn queries_stay_on_block_boundaries() {
        let n = 5;
        let weights: Vec<f64> = (0..32).map(|k| 1.0 + (k as f64).sin().abs()).collect();
        let o = Recording {
            inner: ExplicitOracle::new(n, &weights).unwrap(),
            seen: Mutex::new(BTreeSet::new()),
        };
        preparation_circuit(&o).unwrap();
        let seen = o.seen.lock().unwrap().clone();
        let allowed: BTreeSet<usize> = (0..n)
            .flat_map(|lvl| {
                let h = 1usize << (n - 1 - lvl);
                (0..=(1usize << (lvl + 1))).map(move |j| j * h)
            })
            .collect();
        assert!(seen.is_subset(&allowed));
    }
}
