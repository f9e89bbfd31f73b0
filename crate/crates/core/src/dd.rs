//! Double-double arithmetic.
//!
//! A [`DoubleDouble`] is an unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 31 decimal digits. The basic
//! operations follow the error-free transformations of Dekker and Knuth;
//! transcendental functions are argument reduction plus Taylor series, or a
//! single Newton step from the `f64` result. Exponent range is that of `f64`.
//!
//! Only the zeta routines use this type, for accuracy requests beyond what
//! `f64` can hold.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

pub mod consts {
    use super::DoubleDouble;
    use std::f64::consts as f64c;

    pub const PI: DoubleDouble = DoubleDouble::from_parts(f64c::PI, 1.2246467991473532e-16);
    pub const TAU: DoubleDouble = DoubleDouble::from_parts(f64c::TAU, 2.4492935982947064e-16);
    pub const FRAC_PI_2: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_PI_2, 6.123233995736766e-17);
    pub const FRAC_PI_4: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_PI_4, 3.061616997868383e-17);
    pub const FRAC_PI_8: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_PI_8, 1.5308084989341915e-17);
    pub const FRAC_PI_3: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_PI_3, -1.072081766451091e-16);
    pub const FRAC_PI_6: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_PI_6, -5.360408832255455e-17);
    pub const E: DoubleDouble = DoubleDouble::from_parts(f64c::E, 1.4456468917292502e-16);
    pub const LN_2: DoubleDouble = DoubleDouble::from_parts(f64c::LN_2, 2.3190468138462996e-17);
    pub const LN_10: DoubleDouble = DoubleDouble::from_parts(f64c::LN_10, -2.1707562233822494e-16);
    pub const SQRT_2: DoubleDouble = DoubleDouble::from_parts(f64c::SQRT_2, -9.667293313452913e-17);
    pub const FRAC_1_SQRT_2: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_1_SQRT_2, -4.833646656726457e-17);
    pub const FRAC_1_PI: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_1_PI, -1.9678676675182486e-17);
    pub const FRAC_2_PI: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_2_PI, -3.935735335036497e-17);
    pub const FRAC_2_SQRT_PI: DoubleDouble =
        DoubleDouble::from_parts(f64c::FRAC_2_SQRT_PI, 1.533545961316588e-17);
    pub const LOG2_E: DoubleDouble = DoubleDouble::from_parts(f64c::LOG2_E, 2.0355273740931033e-17);
    pub const LOG10_E: DoubleDouble =
        DoubleDouble::from_parts(f64c::LOG10_E, 1.098319650216765e-17);
    pub const LOG10_2: DoubleDouble =
        DoubleDouble::from_parts(f64c::LOG10_2, -2.8037281277851704e-18);
    pub const LOG2_10: DoubleDouble =
        DoubleDouble::from_parts(f64c::LOG2_10, 1.661617516973592e-16);
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a value from an already normalized pair.
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_hi(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p, mut e) = two_prod(self.hi, b);
        if !p.is_finite() {
            return Self { hi: p, lo: 0.0 };
        }
        e += self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    #[inline]
    fn mul_pow2(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    #[inline]
    fn sqr(self) -> Self {
        self * self
    }

    fn exp_impl(self) -> Self {
        if self.hi.is_nan() {
            return Self::nan();
        }
        if self.hi > 709.78 {
            return Self::infinity();
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / consts::LN_2.hi).round();
        let r = (self - consts::LN_2.mul_f64(k)).mul_pow2(-10);
        // expm1 of the reduced argument, |r| < 3.4e-4
        let mut s = r;
        let mut term = r;
        let mut i = 2.0;
        loop {
            term = term * r / Self::from_hi(i);
            s += term;
            if term.hi.abs() <= 1e-35 * s.hi.abs() || i > 40.0 {
                break;
            }
            i += 1.0;
        }
        for _ in 0..10 {
            s = s.mul_pow2(1) + s.sqr();
        }
        (s + Self::ONE).mul_pow2(k as i32)
    }

    fn ln_impl(self) -> Self {
        if self.hi.is_nan() || self.hi < 0.0 {
            return Self::nan();
        }
        if self.hi == 0.0 {
            return Self::neg_infinity();
        }
        if self.hi.is_infinite() {
            return self;
        }
        if self == Self::ONE {
            return Self::ZERO;
        }
        let a = Self::from_hi(self.hi.ln());
        a + self * (-a).exp_impl() - Self::ONE
    }

    /// Taylor series of sin and cos for |r| <= pi/4.
    fn sin_cos_taylor(r: Self) -> (Self, Self) {
        let r2 = r.sqr();
        let mut sin = r;
        let mut term = r;
        let mut k = 1.0;
        loop {
            term = -(term * r2) / Self::from_hi((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
            if term.hi.abs() <= 1e-34 * sin.hi.abs().max(1e-300) || k > 60.0 {
                break;
            }
        }
        let mut cos = Self::ONE;
        let mut term = Self::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * r2) / Self::from_hi((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
            if term.hi.abs() <= 1e-34 || k > 60.0 {
                break;
            }
        }
        (sin, cos)
    }

    fn sin_cos_impl(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            return (Self::nan(), Self::nan());
        }
        if self.hi == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let z = (self / consts::TAU).round();
        let r = self - consts::TAU * z;
        let j = (r.hi / consts::FRAC_PI_2.hi).round();
        let r = r - consts::FRAC_PI_2.mul_f64(j);
        let (s, c) = Self::sin_cos_taylor(r);
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan2_impl(y: Self, x: Self) -> Self {
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::from_hi(y.hi.atan2(x.hi));
        }
        if !x.hi.is_finite() || !y.hi.is_finite() {
            return Self::from_hi(y.hi.atan2(x.hi));
        }
        let mut theta = Self::from_hi(y.hi.atan2(x.hi));
        for _ in 0..2 {
            let (s, c) = theta.sin_cos_impl();
            let num = y * c - x * s;
            let den = x * c + y * s;
            theta += num / den;
        }
        theta
    }

    /// `2 atanh(u)` series, valid for small |u|.
    fn two_atanh_series(u: Self) -> Self {
        let u2 = u.sqr();
        let mut sum = u;
        let mut pow = u;
        let mut k = 3.0;
        loop {
            pow *= u2;
            let term = pow / Self::from_hi(k);
            sum += term;
            if term.hi.abs() <= 1e-34 * sum.hi.abs().max(1e-300) || k > 400.0 {
                break;
            }
            k += 2.0;
        }
        sum.mul_pow2(1)
    }

    /// Formats with the given number of significant decimal digits.
    pub fn to_scientific(self, digits: usize) -> String {
        if self.hi.is_nan() {
            return "NaN".into();
        }
        if self.hi.is_infinite() {
            return if self.hi > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            };
        }
        if self.hi == 0.0 {
            return "0".into();
        }
        let digits = digits.clamp(1, 34);
        let neg = self.hi < 0.0;
        let mut v = self.abs();
        let mut e = self.hi.abs().log10().floor() as i32;
        v /= Self::from_hi(10.0).powi(e);
        while v.hi >= 10.0 {
            v /= Self::from_hi(10.0);
            e += 1;
        }
        while v.hi < 1.0 {
            v *= Self::from_hi(10.0);
            e -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = v.hi.floor().clamp(0.0, 9.0);
            ds.push(d as u8);
            v = (v - Self::from_hi(d)) * Self::from_hi(10.0);
        }
        // round on the guard digit
        let guard = ds.pop().unwrap_or(0);
        if guard >= 5 {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            out.push('.');
            for d in &ds[1..] {
                out.push((b'0' + d) as char);
            }
        }
        out.push_str(&format!("e{e}"));
        out
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(32);
        f.write_str(&self.to_scientific(digits))
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        if !s1.is_finite() {
            return Self { hi: s1, lo: 0.0 };
        }
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, mut e) = two_prod(self.hi, b.hi);
        if !p.is_finite() {
            return Self { hi: p, lo: 0.0 };
        }
        e += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || b.hi == 0.0 {
            return Self { hi: q1, lo: 0.0 };
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_hi(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDoubleDoubleError;

impl fmt::Display for ParseDoubleDoubleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid double-double literal")
    }
}

impl std::error::Error for ParseDoubleDoubleError {}

/// Parses `[-]digits[.digits][e[-]digits]` exactly into a rational.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

impl FromStr for DoubleDouble {
    type Err = ParseDoubleDoubleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => return Ok(Self::infinity()),
            "-inf" => return Ok(Self::neg_infinity()),
            "nan" | "NaN" => return Ok(Self::nan()),
            _ => {}
        }
        parse_decimal(s)
            .map(|r| Self::from_big_rational(&r))
            .ok_or(ParseDoubleDoubleError)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = ParseDoubleDoubleError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseDoubleDoubleError);
        }
        s.parse()
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        let hi = t.hi.to_i64()?;
        let lo = t.lo.to_i64()?;
        hi.checked_add(lo)
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc();
        let v = t.hi.to_i128()? + t.lo.to_i128()?;
        u64::try_from(v).ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Self::from_hi(x))
    }
}

impl NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        if let Some(i) = n.to_i64() {
            return <Self as FromPrimitive>::from_i64(i);
        }
        if let Some(u) = n.to_u64() {
            return <Self as FromPrimitive>::from_u64(u);
        }
        n.to_f64().map(Self::from_hi)
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        Self::from_hi(f64::NAN)
    }
    fn infinity() -> Self {
        Self::from_hi(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Self::from_hi(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Self::from_hi(-0.0)
    }
    fn min_value() -> Self {
        Self::from_hi(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Self::from_hi(f64::MIN_POSITIVE)
    }
    fn epsilon() -> Self {
        // 2^-104
        Self::from_hi(4.930380657631324e-32)
    }
    fn max_value() -> Self {
        Self::from_hi(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            Self::new(fh, self.lo.floor())
        } else {
            Self::from_hi(fh)
        }
    }
    fn ceil(self) -> Self {
        let ch = self.hi.ceil();
        if ch == self.hi {
            Self::new(ch, self.lo.ceil())
        } else {
            Self::from_hi(ch)
        }
    }
    fn round(self) -> Self {
        let half = Self::from_hi(0.5);
        if self.hi >= 0.0 {
            (self + half).floor()
        } else {
            (self - half).ceil()
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Self::from_hi(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::ONE / self
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }
    fn powf(self, n: Self) -> Self {
        if self.hi == 0.0 {
            return if n.hi > 0.0 {
                Self::ZERO
            } else if n.hi == 0.0 {
                Self::ONE
            } else {
                Self::infinity()
            };
        }
        if self.hi < 0.0 {
            if n.fract().is_zero() {
                if let Some(k) = n.to_i64().and_then(|k| i32::try_from(k).ok()) {
                    return self.powi(k);
                }
            }
            return Self::nan();
        }
        (n * self.ln_impl()).exp_impl()
    }
    fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::ZERO;
        }
        if self.hi < 0.0 {
            return Self::nan();
        }
        if self.hi.is_infinite() {
            return self;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let corr = (self - Self::from_hi(ax).sqr()).hi * (x * 0.5);
        Self::from_sum(ax, corr)
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn exp2(self) -> Self {
        (self * consts::LN_2).exp_impl()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn log(self, base: Self) -> Self {
        self.ln_impl() / base.ln_impl()
    }
    fn log2(self) -> Self {
        self.ln_impl() / consts::LN_2
    }
    fn log10(self) -> Self {
        self.ln_impl() / consts::LN_10
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self <= other {
            Self::ZERO
        } else {
            self - other
        }
    }
    fn cbrt(self) -> Self {
        if self.hi == 0.0 || !self.hi.is_finite() {
            return self;
        }
        let a = self.abs();
        let mut y = Self::from_hi(a.hi.cbrt());
        let three = Self::from_hi(3.0);
        for _ in 0..2 {
            y -= (y.sqr() * y - a) / (three * y.sqr());
        }
        if self.hi < 0.0 {
            -y
        } else {
            y
        }
    }
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let m = a.max(b);
        if m.hi == 0.0 {
            return Self::ZERO;
        }
        if m.hi > 1e150 || m.hi < 1e-150 {
            let (x, y) = (a / m, b / m);
            return m * (x.sqr() + y.sqr()).sqrt();
        }
        (a.sqr() + b.sqr()).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos_impl().0
    }
    fn cos(self) -> Self {
        self.sin_cos_impl().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos_impl();
        s / c
    }
    fn asin(self) -> Self {
        Self::atan2_impl(self, (Self::ONE - self.sqr()).sqrt())
    }
    fn acos(self) -> Self {
        Self::atan2_impl((Self::ONE - self.sqr()).sqrt(), self)
    }
    fn atan(self) -> Self {
        Self::atan2_impl(self, Self::ONE)
    }
    fn atan2(self, other: Self) -> Self {
        Self::atan2_impl(self, other)
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() >= 0.5 {
            return self.exp_impl() - Self::ONE;
        }
        let mut sum = self;
        let mut term = self;
        let mut k = 2.0;
        loop {
            term = term * self / Self::from_hi(k);
            sum += term;
            if term.hi.abs() <= 1e-34 * sum.hi.abs().max(1e-300) || k > 60.0 {
                break;
            }
            k += 1.0;
        }
        sum
    }
    fn ln_1p(self) -> Self {
        if self.hi.abs() >= 0.5 {
            return (Self::ONE + self).ln_impl();
        }
        // ln(1+x) = 2 atanh(x / (2 + x))
        let u = self / (Self::from_hi(2.0) + self);
        Self::two_atanh_series(u)
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let em1 = self.exp_m1();
            return (em1 + em1 / (em1 + Self::ONE)).mul_pow2(-1);
        }
        let e = self.exp_impl();
        (e - e.recip()).mul_pow2(-1)
    }
    fn cosh(self) -> Self {
        let e = self.exp_impl();
        (e + e.recip()).mul_pow2(-1)
    }
    fn tanh(self) -> Self {
        if self.hi > 40.0 {
            return Self::ONE;
        }
        if self.hi < -40.0 {
            return -Self::ONE;
        }
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let r = if a.hi < 0.5 {
            (a + a.sqr() / (Self::ONE + (Self::ONE + a.sqr()).sqrt())).ln_1p()
        } else {
            (a + (a.sqr() + Self::ONE).sqrt()).ln_impl()
        };
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        if self.hi < 1.0 {
            return Self::nan();
        }
        (self + (self.sqr() - Self::ONE).sqrt()).ln_impl()
    }
    fn atanh(self) -> Self {
        if self.hi.abs() < 0.5 {
            return Self::two_atanh_series(self).mul_pow2(-1);
        }
        ((Self::ONE + self) / (Self::ONE - self))
            .ln_impl()
            .mul_pow2(-1)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        consts::E
    }
    fn FRAC_1_PI() -> Self {
        consts::FRAC_1_PI
    }
    fn FRAC_1_SQRT_2() -> Self {
        consts::FRAC_1_SQRT_2
    }
    fn FRAC_2_PI() -> Self {
        consts::FRAC_2_PI
    }
    fn FRAC_2_SQRT_PI() -> Self {
        consts::FRAC_2_SQRT_PI
    }
    fn FRAC_PI_2() -> Self {
        consts::FRAC_PI_2
    }
    fn FRAC_PI_3() -> Self {
        consts::FRAC_PI_3
    }
    fn FRAC_PI_4() -> Self {
        consts::FRAC_PI_4
    }
    fn FRAC_PI_6() -> Self {
        consts::FRAC_PI_6
    }
    fn FRAC_PI_8() -> Self {
        consts::FRAC_PI_8
    }
    fn LN_10() -> Self {
        consts::LN_10
    }
    fn LN_2() -> Self {
        consts::LN_2
    }
    fn LOG10_E() -> Self {
        consts::LOG10_E
    }
    fn LOG2_E() -> Self {
        consts::LOG2_E
    }
    fn PI() -> Self {
        consts::PI
    }
    fn SQRT_2() -> Self {
        consts::SQRT_2
    }
    fn TAU() -> Self {
        consts::TAU
    }
    fn LOG10_2() -> Self {
        consts::LOG10_2
    }
    fn LOG2_10() -> Self {
        consts::LOG2_10
    }
}

impl Real for DoubleDouble {
    const DIGITS: u32 = 31;

    fn from_big_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self::from_hi(hi);
        }
        let rem = match BigRational::from_float(hi) {
            Some(h) => r - h,
            None => return Self::from_hi(hi),
        };
        let lo = rem.to_f64().unwrap_or(0.0);
        Self::new(hi, lo)
    }

    fn from_big_int(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self::from_hi(hi);
        }
        let rem = BigRational::from_integer(n.clone())
            - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
        Self::new(hi, rem.to_f64().unwrap_or(0.0))
    }
}
