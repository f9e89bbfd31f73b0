//! Block parameters of the `t^{1/D}`-type block decomposition.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HiaryParams {
    /// Degree of the block polynomials, `⌊1/(1/2 − β)⌋ − 1`.
    pub d: u32,
    /// Number of linear sums, `⌈(d + 1)(λ + 3) ln t⌉`.
    pub j: u64,
    /// Block length with `P·t^{β−1/2} < K ≤ P·t^{β−1/2} + 1`.
    pub k: u64,
    /// `⌊½√(t/2π)⌋`.
    pub p: u64,
}

pub fn hiary_block_parameters(t: f64, beta: f64, lambda: f64) -> Result<HiaryParams> {
    if !(beta > 0.0 && beta < 0.5) {
        return domain(format!("β = {beta} outside (0, 1/2)"));
    }
    if !(t >= std::f64::consts::TAU) {
        return domain(format!("t = {t} below 2π"));
    }
    if !(lambda >= 0.0) {
        return domain(format!("λ = {lambda} must be nonnegative"));
    }
    let d = ((1.0 / (0.5 - beta)) + 1e-12).floor() as u32 - 1;
    let j = ((d as f64 + 1.0) * (lambda + 3.0) * t.ln()).ceil() as u64;
    let p = (0.5 * (t / std::f64::consts::TAU).sqrt()).floor() as u64;
    let k = (p as f64 * t.powf(beta - 0.5)).floor() as u64 + 1;
    Ok(HiaryParams { d, j, k, p })
}
