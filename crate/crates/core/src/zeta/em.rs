//! Euler-Maclaurin evaluation of ζ(s).

use num_complex::Complex;

use super::bernoulli::{bernoulli_cache, MAX_BERNOULLI_INDEX};
use super::sums::partial_power_sum;
use crate::dd::DoubleDouble;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Digits served in double-double; above this the request is refused.
pub const MAX_DIGITS: u32 = 30;
/// Largest digit count evaluated in plain `f64`.
pub const F64_DIGITS: u32 = 14;
pub const MAX_EM_HEIGHT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EMParams {
    /// Terms summed explicitly.
    pub n: u64,
    /// Correction order, always even.
    pub k: usize,
}

/// Smallest even `K` with `K − 1 > D + ½ log₁₀|s + K − 1|`.
fn order_for_digits(s: Complex<f64>, digits: u32) -> usize {
    let mut k = 2usize;
    while (k as f64 - 1.0) <= digits as f64 + 0.5 * (s + (k as f64 - 1.0)).norm().log10() {
        k += 2;
    }
    k
}

/// Smallest `N` with `|s + j| / (2πN) < 1/10` for `0 ≤ j ≤ K − 2`.
fn cutoff_for_order(s: Complex<f64>, k: usize) -> u64 {
    let worst = (0..=k - 2)
        .map(|j| (s + j as f64).norm())
        .fold(0.0, f64::max);
    (10.0 * worst / std::f64::consts::TAU).floor() as u64 + 1
}

fn zeta_even_upper(k: usize) -> f64 {
    let k = k as f64;
    (1..=64).map(|n| (n as f64).powf(-k)).sum::<f64>() + 64f64.powf(1.0 - k) / (k - 1.0)
}

/// Bound on the dropped remainder integral:
/// `ζ(K)/(πN^σ) · |s+K−1|/(σ+K−1) · Π_{j≤K−2} |s+j|/(2πN)`.
pub fn em_remainder_bound(s: Complex<f64>, p: EMParams) -> f64 {
    let n = p.n as f64;
    let k = p.k as f64;
    let denom = s.re + k - 1.0;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let mut b = zeta_even_upper(p.k) / (std::f64::consts::PI * n.powf(s.re))
        * (s + (k - 1.0)).norm()
        / denom;
    for j in 0..=p.k - 2 {
        b *= (s + j as f64).norm() / (std::f64::consts::TAU * n);
    }
    b
}

/// Rule-based `(N, K)`, with `K` raised in steps of two while the remainder
/// bound still exceeds `10^{−D}` (the rule assumes `σ ≥ 1/2`).
pub fn select_em_params(s: Complex<f64>, digits: u32) -> Result<EMParams> {
    if digits > MAX_DIGITS {
        return domain(format!(
            "at most {MAX_DIGITS} digits supported, asked for {digits}"
        ));
    }
    let target = 10f64.powi(-(digits as i32));
    let mut k = order_for_digits(s, digits);
    loop {
        let p = EMParams {
            n: cutoff_for_order(s, k),
            k,
        };
        if em_remainder_bound(s, p) < target {
            return Ok(p);
        }
        if k + 2 > MAX_BERNOULLI_INDEX {
            return Err(Error::Capacity(format!(
                "no Euler-Maclaurin order up to {MAX_BERNOULLI_INDEX} reaches {digits} digits"
            )));
        }
        k += 2;
    }
}

/// `N^{1−s}/(s−1) + Σ_{k≤K} C(s+k−2, k−1) (B_k/k) N^{−s−k+1}`, the
/// Euler-Maclaurin value of `Σ_{n>N} n^{−s}` without its remainder.
pub fn em_tail<T: Real>(s: Complex<T>, p: EMParams) -> Complex<T> {
    let one = T::one();
    let n = T::from_u64(p.n).expect("u64 representable");
    let n_pow = super::sums::power_term(p.n, s);
    let mut acc = n_pow * n / (s - one);
    let b = bernoulli_cache();
    let inv_n = one / n;
    let mut coeff = Complex::new(one, T::zero());
    let mut scale = one;
    for k in 1..=p.k {
        if k == 1 || k % 2 == 0 {
            let bk: T = b.get_as(k);
            acc += coeff * n_pow * (bk / T::from_usize_lossy(k) * scale);
        }
        coeff = coeff * (s + T::from_usize_lossy(k - 1)) / T::from_usize_lossy(k);
        scale *= inv_n;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmEvaluation<T = f64> {
    pub value: Complex<T>,
    pub params: EMParams,
    pub remainder_bound: f64,
}

fn check_argument(s: Complex<f64>) -> Result<()> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    if !(s.re.is_finite() && s.im.is_finite()) {
        return domain("ζ of a non-finite argument");
    }
    if s.im.abs() > MAX_EM_HEIGHT {
        return domain(format!(
            "|t| = {} above the Euler-Maclaurin limit {MAX_EM_HEIGHT}",
            s.im.abs()
        ));
    }
    Ok(())
}

/// ζ(s) in the scalar type `T` with `(N, K)` chosen for `digits`.
pub fn zeta_euler_maclaurin_in<T: Real>(s: Complex<T>, digits: u32) -> Result<EmEvaluation<T>> {
    let s64 = Complex::new(s.re.to_f64_lossy(), s.im.to_f64_lossy());
    check_argument(s64)?;
    let params = select_em_params(s64, digits)?;
    let value = partial_power_sum(params.n, s)? + em_tail(s, params);
    Ok(EmEvaluation {
        value,
        params,
        remainder_bound: em_remainder_bound(s64, params),
    })
}

/// ζ(s) to `digits` digits; requests above [`F64_DIGITS`] run in
/// double-double.
pub fn zeta_euler_maclaurin_eval(s: Complex<f64>, digits: u32) -> Result<EmEvaluation<f64>> {
    if digits <= F64_DIGITS {
        return zeta_euler_maclaurin_in(s, digits);
    }
    let sd = Complex::new(DoubleDouble::from(s.re), DoubleDouble::from(s.im));
    let e = zeta_euler_maclaurin_in(sd, digits)?;
    Ok(EmEvaluation {
        value: Complex::new(e.value.re.to_f64_lossy(), e.value.im.to_f64_lossy()),
        params: e.params,
        remainder_bound: e.remainder_bound,
    })
}

pub fn zeta_euler_maclaurin(s: Complex<f64>, digits: u32) -> Result<Complex<f64>> {
    Ok(zeta_euler_maclaurin_eval(s, digits)?.value)
}
