//! Hardy's Z function, `S(t)` and zero scanning on the critical line.

use num_complex::Complex;

use super::em::zeta_euler_maclaurin;
use super::gamma::ln_gamma;
use super::rs::riemann_siegel_zeta;
use crate::error::{domain, Error, Result};

/// Digits used for Euler-Maclaurin evaluations on the critical line.
pub const CRITICAL_LINE_DIGITS: u32 = 14;
pub const BISECTION_TOLERANCE: f64 = 1e-9;
/// `|ζ|` below which `arg ζ` is not reported.
pub const NEAR_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaMethod {
    EulerMaclaurin,
    RiemannSiegel,
}

impl ZetaMethod {
    pub fn name(self) -> &'static str {
        match self {
            ZetaMethod::EulerMaclaurin => "em",
            ZetaMethod::RiemannSiegel => "rs",
        }
    }
}

pub fn zeta_on_line(t: f64, method: ZetaMethod) -> Result<Complex<f64>> {
    let s = Complex::new(0.5, t);
    match method {
        ZetaMethod::EulerMaclaurin => zeta_euler_maclaurin(s, CRITICAL_LINE_DIGITS),
        ZetaMethod::RiemannSiegel => riemann_siegel_zeta(s),
    }
}

/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`.
pub fn hardy_theta(t: f64) -> Result<f64> {
    Ok(ln_gamma(Complex::new(0.25, 0.5 * t))?.im - 0.5 * t * std::f64::consts::PI.ln())
}

/// `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real up to rounding; the real part is
/// returned.
pub fn hardy_z(t: f64, method: ZetaMethod) -> Result<f64> {
    let rot = Complex::from_polar(1.0, hardy_theta(t)?);
    Ok((rot * zeta_on_line(t, method)?).re)
}

/// `S(t) = π⁻¹ arg ζ(1/2 + it)`, principal branch at each point.
pub fn hardy_s(t: f64, method: ZetaMethod) -> Result<f64> {
    let z = zeta_on_line(t, method)?;
    if z.norm() < NEAR_ZERO {
        return Err(Error::NearZero(z.norm()));
    }
    Ok(z.arg() / std::f64::consts::PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    /// Grid bracket with a sign change of Z.
    pub lo: f64,
    pub hi: f64,
    /// Bisected interval, width at most [`BISECTION_TOLERANCE`].
    pub refined_lo: f64,
    pub refined_hi: f64,
}

impl ZeroBracket {
    pub fn root(&self) -> f64 {
        0.5 * (self.refined_lo + self.refined_hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScan {
    pub samples: Vec<(f64, f64)>,
    pub brackets: Vec<ZeroBracket>,
}

/// Bisects a sign change of Z on `[lo, hi]` down to `tol`.
pub fn refine_zero(mut lo: f64, mut hi: f64, tol: f64, method: ZetaMethod) -> Result<(f64, f64)> {
    let mut zlo = hardy_z(lo, method)?;
    let zhi = hardy_z(hi, method)?;
    if zlo.signum() == zhi.signum() && zlo != 0.0 && zhi != 0.0 {
        return domain(format!("no sign change of Z on [{lo}, {hi}]"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let zm = hardy_z(mid, method)?;
        if zm == 0.0 {
            return Ok((mid, mid));
        }
        if zm.signum() == zlo.signum() {
            lo = mid;
            zlo = zm;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Samples Z on `t_min, t_min + step, …, ≤ t_max` and bisects every sign
/// change.
pub fn scan_zeros(t_min: f64, t_max: f64, step: f64, method: ZetaMethod) -> Result<ZeroScan> {
    if !(step > 0.0) || !(t_max >= t_min) || !t_min.is_finite() || !t_max.is_finite() {
        return domain(format!(
            "bad scan range [{t_min}, {t_max}] with step {step}"
        ));
    }
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
    let samples = (0..count)
        .map(|i| {
            let t = t_min + step * i as f64;
            Ok((t, hardy_z(t, method)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut brackets = Vec::new();
    for w in samples.windows(2) {
        let ((a, za), (b, zb)) = (w[0], w[1]);
        if za == 0.0 || za.signum() != zb.signum() {
            let (rl, rh) = refine_zero(a, b, BISECTION_TOLERANCE, method)?;
            brackets.push(ZeroBracket {
                lo: a,
                hi: b,
                refined_lo: rl,
                refined_hi: rh,
            });
        }
    }
    Ok(ZeroScan { samples, brackets })
}
