//! Bernoulli numbers with `B₁ = −1/2`, Bernoulli polynomials and
//! Faulhaber power sums.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_BERNOULLI_INDEX: usize = 200;

/// Exact `B₀ … B_K`.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    numbers: Vec<BigRational>,
}

impl BernoulliCache {
    /// Builds from `Σ_{j≤K} C(K+1, j) B_j = 0`.
    pub fn new(max_index: usize) -> Result<Self> {
        if max_index > MAX_BERNOULLI_INDEX {
            return Err(Error::Capacity(format!(
                "Bernoulli numbers limited to index {MAX_BERNOULLI_INDEX}, asked for {max_index}"
            )));
        }
        let mut numbers: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        numbers.push(BigRational::one());
        for k in 1..=max_index {
            if k > 1 && k % 2 == 1 {
                numbers.push(BigRational::zero());
                continue;
            }
            let row = binomial_row(k + 1);
            let acc = numbers
                .iter()
                .zip(&row)
                .fold(BigRational::zero(), |acc, (b, c)| acc + b * c);
            numbers.push(-acc / BigInt::from(k + 1));
        }
        Ok(Self { numbers })
    }

    pub fn max_index(&self) -> usize {
        self.numbers.len() - 1
    }

    pub fn get(&self, k: usize) -> &BigRational {
        &self.numbers[k]
    }

    pub fn get_as<T: Real>(&self, k: usize) -> T {
        T::from_big_rational(&self.numbers[k])
    }

    pub fn numbers(&self) -> &[BigRational] {
        &self.numbers
    }
}

/// Shared cache up to [`MAX_BERNOULLI_INDEX`].
pub fn bernoulli_cache() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(|| BernoulliCache::new(MAX_BERNOULLI_INDEX).expect("within limit"))
}

pub fn bernoulli_numbers(max_index: usize) -> Result<BernoulliCache> {
    if max_index > MAX_BERNOULLI_INDEX {
        return BernoulliCache::new(max_index);
    }
    Ok(BernoulliCache {
        numbers: bernoulli_cache().numbers[..=max_index].to_vec(),
    })
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

fn check_index(j: usize) -> Result<()> {
    if j > MAX_BERNOULLI_INDEX {
        return Err(Error::Capacity(format!(
            "Bernoulli polynomial degree {j} above {MAX_BERNOULLI_INDEX}"
        )));
    }
    Ok(())
}

/// `B_j(x) = Σ_m C(j, m) B_{j−m} x^m`.
pub fn bernoulli_polynomial<T: Real>(j: usize, x: T) -> Result<T> {
    check_index(j)?;
    let b = bernoulli_cache();
    let row = binomial_row(j);
    // Horner over m from j down to 0.
    let mut acc = T::zero();
    for m in (0..=j).rev() {
        let coeff = T::from_big_rational(&(b.get(j - m) * &row[m]));
        acc = acc * x + coeff;
    }
    Ok(acc)
}

pub fn bernoulli_polynomial_exact(j: usize, x: &BigRational) -> Result<BigRational> {
    check_index(j)?;
    let b = bernoulli_cache();
    let row = binomial_row(j);
    let mut acc = BigRational::zero();
    for m in (0..=j).rev() {
        acc = acc * x + b.get(j - m) * &row[m];
    }
    Ok(acc)
}

pub const MAX_FAULHABER_POWER: u32 = 60;

/// `H_{k,j} = Σ_{n=1}^{k} n^j = (B_{j+1}(k+1) − B_{j+1}(1)) / (j+1)`, exactly.
/// `B_{j+1}(1) = B_{j+1}` except at `j = 0`, where `B₁(1) = +1/2`.
pub fn faulhaber_sum(k: u64, j: u32) -> Result<BigInt> {
    if j > MAX_FAULHABER_POWER {
        return Err(Error::Capacity(format!(
            "Faulhaber power {j} above {MAX_FAULHABER_POWER}"
        )));
    }
    if k > 1 << 62 {
        return Err(Error::Capacity(format!("Faulhaber range {k} above 2^62")));
    }
    let j = j as usize;
    let x = BigRational::from_integer(BigInt::from(k) + 1);
    let one = BigRational::one();
    let v = (bernoulli_polynomial_exact(j + 1, &x)? - bernoulli_polynomial_exact(j + 1, &one)?)
        / BigInt::from(j + 1);
    debug_assert!(v.is_integer() && !v.is_negative());
    Ok(v.to_integer())
}
