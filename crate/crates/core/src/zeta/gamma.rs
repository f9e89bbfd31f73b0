//! Complex log-gamma.

use num_complex::Complex;

use super::bernoulli::bernoulli_cache;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Distance to a pole of Γ below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-12;

fn near_pole<T: Real>(z: Complex<T>) -> bool {
    let guard = T::lit(POLE_GUARD);
    z.re <= guard && z.im.abs() < guard && (z.re - z.re.round()).abs() < guard
}

/// `ln Γ(z)` on the branch continuous off the negative real axis and real
/// on the positive one. Shifts `z` until `|z|` is large, then sums the
/// Stirling series with exact Bernoulli coefficients.
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if near_pole(z) {
        return domain(format!("Γ has a pole at {}", z.re.round()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain("ln Γ of a non-finite argument");
    }
    let (radius, terms) = if T::DIGITS > 16 {
        (T::lit(24.0), 24)
    } else {
        (T::lit(12.0), 12)
    };
    let one = Complex::new(T::one(), T::zero());
    let mut w = z;
    let mut shift = Complex::new(T::zero(), T::zero());
    while w.re < T::zero() || w.norm() < radius {
        shift += w.ln();
        w += one;
    }
    let half = T::lit(0.5);
    let ln_w = w.ln();
    let mut acc = (w - half) * ln_w - w + Complex::new(half * T::TAU().ln(), T::zero());
    let inv = one / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    let b = bernoulli_cache();
    for k in 1..=terms {
        let c: T = b.get_as(2 * k);
        let denom = T::from_usize_lossy(2 * k * (2 * k - 1));
        acc += pow * (c / denom);
        pow *= inv2;
    }
    Ok(acc - shift)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos (`g = 7`, nine terms) for `Re z ≥ 1/2`, double precision only.
pub fn ln_gamma_lanczos(z: Complex<f64>) -> Result<Complex<f64>> {
    if z.re < 0.5 {
        return domain("Lanczos form used only for Re z ≥ 1/2");
    }
    let z = z - 1.0;
    let mut x = Complex::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * std::f64::consts::TAU.ln() + (z + 0.5) * t.ln() - t + x.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DoubleDouble;
    use num_traits::Float;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!((ln_gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt().ln()).abs() < 1e-14);
        let mut fact = 1.0f64;
        for n in 1..20 {
            let g = ln_gamma(c(n as f64, 0.0)).unwrap();
            assert!(
                (g.re - fact.ln()).abs() < 1e-13 * fact.ln().max(1.0),
                "n = {n}"
            );
            assert_eq!(g.im, 0.0);
            fact *= n as f64;
        }
        assert!(ln_gamma(c(-3.0, 0.0)).is_err());
        // Γ(−1/2) = −2√π
        let g = ln_gamma(c(-0.5, 0.0)).unwrap().exp();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13, "{g}");
    }

    #[test]
    fn reference_points() {
        // mpmath.loggamma(0.25 + 50j)
        let g = ln_gamma(c(0.25, 50.0)).unwrap();
        assert!((g.re - -78.59888043270184).abs() < 1e-12);
        assert!((g.im - 145.20865952425723).abs() < 1e-12);
        let z = c(0.75, 50.0);
        assert!((ln_gamma(z).unwrap() - ln_gamma_lanczos(z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn stirling_and_lanczos_agree() {
        for i in 0..40 {
            let z = c(0.5 + 0.37 * i as f64, -20.0 + 1.3 * i as f64);
            assert!(
                (ln_gamma(z).unwrap() - ln_gamma_lanczos(z).unwrap()).norm()
                    < 1e-10 * (1.0 + z.norm())
            );
        }
    }

    #[test]
    fn double_double_matches_half_integer() {
        let half = DoubleDouble::from(0.5);
        let g = ln_gamma(Complex::new(half, DoubleDouble::ZERO)).unwrap();
        let want = crate::dd::consts::PI.sqrt().ln();
        assert!(
            (g.re - want).abs().hi() < 1e-30,
            "{:e}",
            (g.re - want).abs().hi()
        );
    }
}
