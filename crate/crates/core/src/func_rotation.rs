//! Ancilla rotations conditioned on a function of the register.
//!
//! Two constructions: a fixed-point register driving a ladder of controlled
//! `R(2^i·t)` rotations, and a direct network of multi-controlled rotations,
//! one per monomial of a polynomial expanded in the register bits.

use std::collections::BTreeMap;

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::sim::{Circuit, Control, Gate, Op, StateVector};

/// Unsigned fixed point with bits `2^{m1} … 2^{−m2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointFormat {
    pub m1: u32,
    pub m2: u32,
}

impl FixedPointFormat {
    pub fn new(m1: u32, m2: u32) -> Result<Self> {
        if m1 + m2 + 1 > 62 {
            return domain(format!(
                "fixed-point format ({m1}, {m2}) wider than 62 bits"
            ));
        }
        Ok(Self { m1, m2 })
    }

    /// Register width `m1 + m2 + 1`.
    pub fn width(self) -> usize {
        (self.m1 + self.m2 + 1) as usize
    }

    /// Value of register bit `b` (bit 0 carries `2^{−m2}`).
    pub fn bit_weight<T: Real>(self, b: usize) -> T {
        T::lit(2.0).powi(b as i32 - self.m2 as i32)
    }

    pub fn decode<T: Real>(self, raw: u64) -> T {
        T::from_u64(raw).expect("u64 representable") / T::lit(2.0).powi(self.m2 as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint<T = f64> {
    /// Register contents, bit `b` = `q_{b−m2}`.
    pub raw: u64,
    pub value: T,
    /// `x − value`, in `[0, 2^{−m2})`.
    pub error: T,
}

impl<T: Real> FixedPoint<T> {
    /// Bits from `q_{m1}` down to `q_{−m2}`.
    pub fn bits_msb_first(&self, fmt: FixedPointFormat) -> Vec<u8> {
        (0..fmt.width())
            .rev()
            .map(|b| ((self.raw >> b) & 1) as u8)
            .collect()
    }
}

/// Truncating encoding of `x ≥ 0`.
pub fn encode_fixed_point<T: Real>(x: T, fmt: FixedPointFormat) -> Result<FixedPoint<T>> {
    if !(x >= T::zero()) || !x.is_finite() {
        return domain(format!(
            "cannot encode {x}: value must be finite and nonnegative"
        ));
    }
    let limit = T::lit(2.0).powi(fmt.m1 as i32 + 1);
    if x >= limit {
        return Err(Error::Overflow {
            value: x.to_f64_lossy(),
            limit_exp: fmt.m1 + 1,
        });
    }
    let scale = T::lit(2.0).powi(fmt.m2 as i32);
    let scaled = (x * scale).floor();
    let raw = scaled.to_u64().expect("width checked by format");
    let value = fmt.decode(raw);
    Ok(FixedPoint {
        raw,
        value,
        error: x - value,
    })
}

/// Representative of `f` in `[0, 2)`.
pub fn reduce_mod2<T: Real>(f: T) -> T {
    let two = T::lit(2.0);
    let r = f - two * (f / two).floor();
    if r >= two {
        T::zero()
    } else {
        r
    }
}

fn check_disjoint(register: &[usize], ancilla: usize) -> Result<()> {
    let mut seen = 1u64 << ancilla;
    for &q in register {
        if q >= 64 || seen & (1 << q) != 0 {
            return domain(format!("qubit {q} clashes with another register line"));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// One controlled `R(w_b·t)` per register bit, `register[b]` carrying
/// `2^{b−m2}`.
pub fn rotation_ladder_circuit<T: Real>(
    n_qubits: usize,
    register: &[usize],
    fmt: FixedPointFormat,
    ancilla: usize,
    t: T,
) -> Result<Circuit<T>> {
    check_disjoint(register, ancilla)?;
    if register.len() != fmt.width() {
        return domain(format!(
            "register of {} qubits for a {}-bit format",
            register.len(),
            fmt.width()
        ));
    }
    let mut c = Circuit::new(n_qubits);
    for (b, &q) in register.iter().enumerate() {
        c.gate(Gate::rot(fmt.bit_weight::<T>(b) * t, ancilla).with_control(Control::on(q)))?;
    }
    Ok(c)
}

pub fn apply_rotation_ladder<T: Real>(
    state: &mut StateVector<T>,
    register: &[usize],
    fmt: FixedPointFormat,
    ancilla: usize,
    t: T,
) -> Result<()> {
    rotation_ladder_circuit(state.n_qubits(), register, fmt, ancilla, t)?.apply(state)
}

/// `p(x) = Σ_i c_i x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("polynomial needs at least one coefficient");
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Multilinear form in the register bits, merging `q² = q`. Keys are bit
    /// subsets of the register.
    pub fn bit_expansion(&self, fmt: FixedPointFormat) -> BTreeMap<u64, T> {
        let width = fmt.width();
        let weights: Vec<T> = (0..width).map(|b| fmt.bit_weight(b)).collect();
        let mut out: BTreeMap<u64, T> = BTreeMap::new();
        let mut power: BTreeMap<u64, T> = BTreeMap::from([(0, T::one())]);
        for (d, &c) in self.coeffs.iter().enumerate() {
            if d > 0 {
                let mut next = BTreeMap::new();
                for (&mono, &coef) in &power {
                    for (b, &w) in weights.iter().enumerate() {
                        *next.entry(mono | (1 << b)).or_insert_with(T::zero) += coef * w;
                    }
                }
                power = next;
            }
            if c != T::zero() {
                for (&mono, &coef) in &power {
                    *out.entry(mono).or_insert_with(T::zero) += c * coef;
                }
            }
        }
        out.retain(|_, v| *v != T::zero());
        out
    }
}

/// Multi-controlled rotation network for `R(p(x)·t)`, one gate per monomial.
pub fn polynomial_rotation_circuit<T: Real>(
    n_qubits: usize,
    register: &[usize],
    fmt: FixedPointFormat,
    ancilla: usize,
    poly: &Polynomial<T>,
    t: T,
) -> Result<Circuit<T>> {
    check_disjoint(register, ancilla)?;
    if register.len() != fmt.width() {
        return domain(format!(
            "register of {} qubits for a {}-bit format",
            register.len(),
            fmt.width()
        ));
    }
    let mut c = Circuit::new(n_qubits);
    for (mono, coef) in poly.bit_expansion(fmt) {
        let controls = register
            .iter()
            .enumerate()
            .filter(|(b, _)| mono >> b & 1 == 1)
            .map(|(_, &q)| Control::on(q));
        c.gate(Gate::rot(coef * t, ancilla).with_controls(controls))?;
    }
    Ok(c)
}

pub fn apply_polynomial_rotation<T: Real>(
    state: &mut StateVector<T>,
    register: &[usize],
    fmt: FixedPointFormat,
    ancilla: usize,
    poly: &Polynomial<T>,
    t: T,
) -> Result<()> {
    polynomial_rotation_circuit(state.n_qubits(), register, fmt, ancilla, poly, t)?.apply(state)
}

/// `U_f` on `n` index qubits plus the ancilla at qubit `n`.
#[derive(Debug, Clone)]
pub struct UfCircuit<T = f64> {
    pub circuit: Circuit<T>,
    /// `f̃(k)`, the truncated value of `f(k) mod 2`.
    pub truncated: Vec<T>,
    /// Largest `f(k) mod 2 − f̃(k)`.
    pub max_truncation: T,
}

fn truncate_all<T: Real, F>(
    f: F,
    n: usize,
    fmt: FixedPointFormat,
) -> Result<(Vec<FixedPoint<T>>, T)>
where
    F: Fn(usize) -> T,
{
    let mut out = Vec::with_capacity(1 << n);
    let mut worst = T::zero();
    for k in 0..1usize << n {
        let v = f(k);
        if !v.is_finite() {
            return domain(format!("f({k}) is not finite"));
        }
        let fp = encode_fixed_point(reduce_mod2(v), fmt)?;
        worst = worst.max(fp.error);
        out.push(fp);
    }
    Ok((out, worst))
}

/// `|k⟩|0⟩ ↦ |k⟩(cos πf̃(k)|0⟩ + sin πf̃(k)|1⟩)` as one uniformly controlled
/// rotation computed classically per index.
pub fn build_uf<T: Real, F>(f: F, n: usize, fmt: FixedPointFormat) -> Result<UfCircuit<T>>
where
    F: Fn(usize) -> T,
{
    let (fps, worst) = truncate_all(f, n, fmt)?;
    let truncated: Vec<T> = fps.iter().map(|fp| fp.value).collect();
    let mut circuit = Circuit::new(n + 1);
    circuit.push(Op::ConditionedRotation {
        register: (0..n).collect(),
        target: n,
        angles: truncated.iter().map(|&v| T::PI() * v).collect(),
    })?;
    Ok(UfCircuit {
        circuit,
        truncated,
        max_truncation: worst,
    })
}

/// Same map through an explicit helper register at qubits
/// `n+1 .. n+1+width`: compute `|f̃(k)⟩`, run the ladder with `t = π`,
/// uncompute.
pub fn build_uf_with_helper<T: Real, F>(
    f: F,
    n: usize,
    fmt: FixedPointFormat,
) -> Result<UfCircuit<T>>
where
    F: Fn(usize) -> T,
{
    let (fps, worst) = truncate_all(f, n, fmt)?;
    let width = fmt.width();
    let total = n + 1 + width;
    let helper: Vec<usize> = (n + 1..total).collect();
    let mut compute = Circuit::new(total);
    for (b, &h) in helper.iter().enumerate() {
        let angles = fps
            .iter()
            .map(|fp| {
                if fp.raw >> b & 1 == 1 {
                    T::FRAC_PI_2()
                } else {
                    T::zero()
                }
            })
            .collect();
        compute.push(Op::ConditionedRotation {
            register: (0..n).collect(),
            target: h,
            angles,
        })?;
    }
    let mut circuit = compute.clone();
    circuit.append(&rotation_ladder_circuit(total, &helper, fmt, n, T::PI())?)?;
    circuit.append(&compute.inverse())?;
    Ok(UfCircuit {
        circuit,
        truncated: fps.iter().map(|fp| fp.value).collect(),
        max_truncation: worst,
    })
}
