//! Dirichlet partial sums and generalized harmonic numbers.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::{neumaier_sum_complex, Neumaier};

pub const MAX_PARTIAL_SUM_TERMS: u64 = 1 << 24;

const BLOCK: u64 = 1 << 14;

/// `k^{−s} = k^{−σ} e^{−it ln k}`.
pub fn power_term<T: Real>(k: u64, s: Complex<T>) -> Complex<T> {
    let ln_k = T::from_u64(k).expect("u64 representable").ln();
    let (sin, cos) = (s.im * ln_k).sin_cos();
    Complex::new(cos, -sin) * (-s.re * ln_k).exp()
}

fn block_sum<T: Real>(lo: u64, hi: u64, s: Complex<T>) -> Complex<T> {
    neumaier_sum_complex((lo..hi).map(|k| power_term(k, s)))
}

/// `Σ_{k=1}^{N} k^{−s}` with compensated summation. Blocks are summed in
/// parallel and combined in index order, so the result does not depend on
/// the thread count.
pub fn partial_power_sum<T: Real>(n: u64, s: Complex<T>) -> Result<Complex<T>> {
    if n > MAX_PARTIAL_SUM_TERMS {
        return Err(Error::Capacity(format!(
            "partial sums limited to {MAX_PARTIAL_SUM_TERMS} terms, asked for {n}"
        )));
    }
    if n <= BLOCK {
        return Ok(block_sum(1, n + 1, s));
    }
    let blocks: Vec<Complex<T>> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| block_sum(1 + b * BLOCK, (1 + (b + 1) * BLOCK).min(n + 1), s))
        .collect();
    Ok(neumaier_sum_complex(blocks))
}

/// `H_0 = 0, H_M = Σ_{k=1}^{M} k^{−σ}` for `M ≤ N`.
pub fn harmonic_prefix_sums<T: Real>(n: u64, sigma: T) -> Result<Vec<T>> {
    if n > MAX_PARTIAL_SUM_TERMS {
        return Err(Error::Capacity(format!(
            "harmonic prefix table limited to {MAX_PARTIAL_SUM_TERMS} entries, asked for {n}"
        )));
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Neumaier::new();
    out.push(T::zero());
    for k in 1..=n {
        acc.add((-sigma * T::from_u64(k).expect("u64 representable").ln()).exp());
        out.push(acc.value());
    }
    Ok(out)
}
