//! Riemann-Siegel evaluation: `ζ(s) = I₀(s) + χ(s)·conj(I₀(1 − s̄))` with
//! `I₀(s) = Σ_{k≤N} k^{−s} + I_N(s)` and `I_N` integrated numerically
//! through its saddle.

use num_complex::Complex;

use super::gamma::ln_gamma;
use super::sums::partial_power_sum;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// `χ(s) = π^{s−1/2} Γ((1−s)/2) / Γ(s/2)`.
pub fn riemann_siegel_chi<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    let half = T::lit(0.5);
    let one = Complex::new(T::one(), T::zero());
    let a = ln_gamma((one - s) * half)?;
    let b = ln_gamma(s * half)?;
    Ok(((s - half) * T::PI().ln() + a - b).exp())
}

/// `N = ⌊√(t/2π)⌋`.
pub fn rs_cutoff(t: f64) -> u64 {
    (t.abs() / std::f64::consts::TAU).sqrt().floor() as u64
}

const MAX_HALVINGS: u32 = 14;
const MAX_HALF_WIDTH: f64 = 40.0;

/// `g(z) dz/du` along `z = N + 1/2 + uω`, `ω = e^{iπ/4}`:
/// `e^{iπ/4} e^{2πi z₀ uω − πu²} z^{−s} ω / (2i (−1)^N cos(πuω))`.
struct Contour<T> {
    s: Complex<T>,
    z0: T,
    omega: Complex<T>,
    prefactor: Complex<T>,
}

impl<T: Real> Contour<T> {
    fn new(s: Complex<T>, n: u64) -> Self {
        let r = T::FRAC_1_SQRT_2();
        let omega = Complex::new(r, r);
        let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
        // e^{iπ/4}·ω / (2i·(−1)^N) = ω² / (2i·(−1)^N) = 1 / (2·(−1)^N)
        let prefactor = Complex::new(T::lit(0.5) * sign, T::zero());
        Self {
            s,
            z0: T::from_u64(n).expect("u64 representable") + T::lit(0.5),
            omega,
            prefactor,
        }
    }

    fn eval(&self, u: T) -> Complex<T> {
        let pi = T::PI();
        let w = self.omega * u;
        let z = w + self.z0;
        let i = Complex::new(T::zero(), T::one());
        let expo =
            i * w * (T::TAU() * self.z0) - Complex::new(pi * u * u, T::zero()) - self.s * z.ln();
        self.prefactor * expo.exp() / (w * pi).cos()
    }
}

/// `I_N(s)`, oriented from the first quadrant to the third.
pub fn rs_remainder<T: Real>(s: Complex<T>, n: u64) -> Result<Complex<T>> {
    let c = Contour::new(s, n);
    let tiny = T::lit(10.0).powi(-(T::DIGITS as i32 + 3));
    let tol = T::lit(10.0).powi(-(T::DIGITS as i32 - 3));

    let step = T::lit(0.5);
    let mut peak = T::zero();
    let mut u = T::zero();
    while u <= T::lit(4.0) {
        peak = peak.max(c.eval(u).norm()).max(c.eval(-u).norm());
        u += step;
    }
    let mut half_width = T::lit(4.0);
    while c.eval(half_width).norm().max(c.eval(-half_width).norm()) > tiny * peak {
        half_width += step;
        if half_width > T::lit(MAX_HALF_WIDTH) {
            return Err(Error::Quadrature(format!(
                "integrand still above {:.1e} of its peak at |u| = {MAX_HALF_WIDTH}",
                tiny.to_f64_lossy()
            )));
        }
    }

    let mut h = T::lit(0.25);
    let mut points = (T::lit(2.0) * half_width / h)
        .round()
        .to_u64()
        .expect("bounded width");
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut l1 = T::zero();
    for j in 0..=points {
        let f = c.eval(-half_width + h * T::from_u64(j).expect("small"));
        let wgt = if j == 0 || j == points {
            T::lit(0.5)
        } else {
            T::one()
        };
        sum += f * wgt;
        l1 += f.norm() * wgt;
    }
    let mut estimate = sum * h;
    let mut last_change = T::infinity();
    for _ in 0..MAX_HALVINGS {
        let mut mid = Complex::new(T::zero(), T::zero());
        for j in 0..points {
            let f = c.eval(-half_width + h * (T::from_u64(j).expect("small") + T::lit(0.5)));
            mid += f;
            l1 += f.norm();
        }
        sum += mid;
        h *= T::lit(0.5);
        points *= 2;
        let next = sum * h;
        last_change = (next - estimate).norm();
        estimate = next;
        if last_change <= tol * estimate.norm().max(l1 * h) {
            return Ok(-estimate);
        }
    }
    Err(Error::Quadrature(format!(
        "trapezoid sums did not settle: last change {:.3e} at step {:.3e}",
        last_change.to_f64_lossy(),
        h.to_f64_lossy()
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsEvaluation<T = f64> {
    pub value: Complex<T>,
    /// Main-sum length `N`.
    pub n: u64,
    /// `I_N(s)`.
    pub remainder: Complex<T>,
    /// `I_N(1 − s̄)`.
    pub dual_remainder: Complex<T>,
    pub chi: Complex<T>,
}

impl<T: Real> RsEvaluation<T> {
    /// Reassembles ζ from externally supplied main sums
    /// `Σ_{k≤N} k^{−s}` and `Σ_{k≤N} k^{−(1−s̄)}`.
    pub fn recombine(&self, main: Complex<T>, dual_main: Complex<T>) -> Complex<T> {
        main + self.remainder + self.chi * (dual_main + self.dual_remainder).conj()
    }
}

/// Classical pieces of the formula, main sums excluded.
pub fn rs_components<T: Real>(s: Complex<T>) -> Result<RsEvaluation<T>> {
    let sigma = s.re.to_f64_lossy();
    let t = s.im.to_f64_lossy();
    if sigma == 1.0 && t == 0.0 {
        return Err(Error::Pole);
    }
    if !(0.0..=1.0).contains(&sigma) {
        return domain(format!(
            "Riemann-Siegel evaluation needs 0 ≤ σ ≤ 1, got σ = {sigma}"
        ));
    }
    if t < 0.0 {
        return domain("Riemann-Siegel evaluation takes t ≥ 0; use ζ(s̄) = conj ζ(s)");
    }
    let n = rs_cutoff(t);
    let dual = Complex::new(T::one() - s.re, s.im);
    Ok(RsEvaluation {
        value: Complex::new(T::nan(), T::nan()),
        n,
        remainder: rs_remainder(s, n)?,
        dual_remainder: rs_remainder(dual, n)?,
        chi: riemann_siegel_chi(s)?,
    })
}

pub fn riemann_siegel_eval<T: Real>(s: Complex<T>) -> Result<RsEvaluation<T>> {
    let conj = s.im < T::zero();
    let s = if conj { s.conj() } else { s };
    let mut e = rs_components(s)?;
    let dual = Complex::new(T::one() - s.re, s.im);
    e.value = e.recombine(partial_power_sum(e.n, s)?, partial_power_sum(e.n, dual)?);
    if conj {
        e.value = e.value.conj();
    }
    Ok(e)
}

/// ζ(s) for `0 ≤ σ ≤ 1`. Below `t = 2π` the main sum is empty and the
/// formula reduces to the two contour integrals.
pub fn riemann_siegel_zeta<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    Ok(riemann_siegel_eval(s)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::em::zeta_euler_maclaurin;

    #[test]
    fn chi_identities() {
        let c = riemann_siegel_chi(Complex::new(0.5, 0.0)).unwrap();
        assert!((c - Complex::new(1.0, 0.0)).norm() < 1e-14);
        for t in [10.0f64, 100.0, 1000.0] {
            assert!((riemann_siegel_chi(Complex::new(0.5, t)).unwrap().norm() - 1.0).abs() < 1e-10);
        }
        let s = Complex::new(0.2, 17.0);
        let prod = riemann_siegel_chi(s).unwrap()
            * riemann_siegel_chi(Complex::new(1.0, 0.0) - s).unwrap();
        assert!((prod - Complex::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn cutoff() {
        assert_eq!(rs_cutoff(std::f64::consts::TAU * 1e4), 100);
    }

    #[test]
    fn agrees_with_euler_maclaurin() {
        for t in [30.0, 100.0, 500.0] {
            let s = Complex::new(0.5, t);
            let rs = riemann_siegel_zeta(s).unwrap();
            let em = zeta_euler_maclaurin(s, 13).unwrap();
            assert!((rs - em).norm() < 1e-8, "t = {t}: {rs} vs {em}");
        }
        for s in [
            Complex::new(0.1, 40.0),
            Complex::new(0.9, 77.7),
            Complex::new(0.5, 3.0),
            Complex::new(0.3, -50.0),
        ] {
            let rs = riemann_siegel_zeta(s).unwrap();
            let em = zeta_euler_maclaurin(s, 13).unwrap();
            assert!((rs - em).norm() < 1e-9, "s = {s}: {rs} vs {em}");
        }
    }
}
