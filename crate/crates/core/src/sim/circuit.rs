use num_complex::Complex;

use super::gate::{control_mask, rot_matrix, Control, Gate};
use super::state::{for_each_pair, gather, map_indexed, scatter, Cond, StateVector};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Circuit element. Register-indexed tables use the register value as index
/// (first listed qubit = least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub enum Op<T> {
    Gate(Gate<T>),
    /// Multiplies each amplitude by `e^{i·phases[reg]}`.
    Diagonal {
        register: Vec<usize>,
        phases: Vec<T>,
    },
    /// Uniformly controlled `R(angles[reg])` on `target`.
    ConditionedRotation {
        register: Vec<usize>,
        target: usize,
        angles: Vec<T>,
    },
    /// Inversion about the mean over the register, for each value of the
    /// remaining qubits.
    InversionAboutMean {
        register: Vec<usize>,
    },
    /// `2|0⟩⟨0| − I` on the register.
    ReflectZero {
        register: Vec<usize>,
    },
    GlobalPhase(T),
}

impl<T: Real> Op<T> {
    fn inverse(&self) -> Self {
        match self {
            Op::Gate(g) => Op::Gate(g.inverse()),
            Op::Diagonal { register, phases } => Op::Diagonal {
                register: register.clone(),
                phases: phases.iter().map(|&p| -p).collect(),
            },
            Op::ConditionedRotation {
                register,
                target,
                angles,
            } => Op::ConditionedRotation {
                register: register.clone(),
                target: *target,
                angles: angles.iter().map(|&a| -a).collect(),
            },
            Op::GlobalPhase(p) => Op::GlobalPhase(-*p),
            other => other.clone(),
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate(g) => {
                let mut q: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
                q.push(g.target);
                q
            }
            Op::Diagonal { register, .. }
            | Op::InversionAboutMean { register }
            | Op::ReflectZero { register } => register.clone(),
            Op::ConditionedRotation {
                register, target, ..
            } => {
                let mut q = register.clone();
                q.push(*target);
                q
            }
            Op::GlobalPhase(_) => Vec::new(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if let Op::Gate(g) = self {
            return g.validate(n);
        }
        let qs = self.qubits();
        let mut seen = 0usize;
        for &q in &qs {
            if q >= n {
                return domain(format!("qubit {q} outside {n} qubits"));
            }
            if seen & (1 << q) != 0 {
                return domain(format!("qubit {q} repeated in one operation"));
            }
            seen |= 1 << q;
        }
        let table = match self {
            Op::Diagonal { register, phases } => Some((register.len(), phases.len())),
            Op::ConditionedRotation {
                register, angles, ..
            } => Some((register.len(), angles.len())),
            _ => None,
        };
        if let Some((r, len)) = table {
            if len != 1 << r {
                return domain(format!("table of {len} entries for a {r}-qubit register"));
            }
        }
        Ok(())
    }

    fn apply(&self, s: &mut StateVector<T>, cond: Cond) {
        match self {
            Op::Gate(g) => s.apply_gate_cond(g, cond),
            Op::Diagonal { register, phases } => {
                let phasors: Vec<Complex<T>> = phases
                    .iter()
                    .map(|&p| Complex::from_polar(T::one(), p))
                    .collect();
                map_indexed(s.amplitudes_mut(), |i, a| {
                    if cond.holds(i) {
                        *a *= phasors[gather(i, register)];
                    }
                });
            }
            Op::ConditionedRotation {
                register,
                target,
                angles,
            } => {
                let cs: Vec<(T, T)> = angles.iter().map(|a| a.sin_cos()).collect();
                for_each_pair(s.amplitudes_mut(), *target, cond, |i, a0, a1| {
                    let (sn, c) = cs[gather(i, register)];
                    let (x, y) = (*a0, *a1);
                    *a0 = x * c - y * sn;
                    *a1 = x * sn + y * c;
                });
            }
            Op::InversionAboutMean { register } => inversion_on_register(s, register, cond),
            Op::ReflectZero { register } => {
                let rmask = register.iter().fold(0usize, |m, &q| m | (1 << q));
                map_indexed(s.amplitudes_mut(), |i, a| {
                    if cond.holds(i) && i & rmask != 0 {
                        *a = -*a;
                    }
                });
            }
            Op::GlobalPhase(p) => {
                let ph = Complex::from_polar(T::one(), *p);
                map_indexed(s.amplitudes_mut(), |i, a| {
                    if cond.holds(i) {
                        *a *= ph;
                    }
                });
            }
        }
    }
}

fn inversion_on_register<T: Real>(s: &mut StateVector<T>, register: &[usize], cond: Cond) {
    let dim = s.dim();
    let r = register.len();
    if r == s.n_qubits() && cond.mask == 0 {
        s.inversion_about_mean();
        return;
    }
    let rmask = scatter((1usize << r) - 1, register);
    let offsets: Vec<usize> = (0..1usize << r).map(|v| scatter(v, register)).collect();
    let scale = T::lit(2.0) / T::from_usize_lossy(1 << r);
    let amps = s.amplitudes_mut();
    for base in 0..dim {
        if base & rmask != 0 || !cond.holds(base) {
            continue;
        }
        let mut sum = Complex::new(T::zero(), T::zero());
        for &o in &offsets {
            sum += amps[base | o];
        }
        let two_b = sum * scale;
        for &o in &offsets {
            amps[base | o] = two_b - amps[base | o];
        }
    }
}

/// Ordered list of operations on the low `n_qubits` qubits of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T = f64> {
    n_qubits: usize,
    ops: Vec<Op<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: Op<T>) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn gate(&mut self, g: Gate<T>) -> Result<&mut Self> {
        self.push(Op::Gate(g))
    }

    pub fn append(&mut self, other: &Circuit<T>) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return domain("appended circuit is wider than the target");
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(Op::inverse).collect(),
        }
    }

    fn check_state(&self, s: &StateVector<T>) -> Result<()> {
        if s.n_qubits() < self.n_qubits {
            return domain(format!(
                "circuit needs {} qubits, state has {}",
                self.n_qubits,
                s.n_qubits()
            ));
        }
        Ok(())
    }

    pub fn apply(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check_state(s)?;
        for op in &self.ops {
            op.apply(s, Cond::ALWAYS);
        }
        Ok(())
    }

    fn control_cond(&self, s: &StateVector<T>, controls: &[Control]) -> Result<Cond> {
        self.check_state(s)?;
        let used = self
            .ops
            .iter()
            .flat_map(Op::qubits)
            .fold(0usize, |m, q| m | (1 << q));
        for c in controls {
            if c.qubit >= s.n_qubits() {
                return domain(format!("control {} outside the state", c.qubit));
            }
            if used & (1 << c.qubit) != 0 {
                return domain(format!("control {} is acted on by the circuit", c.qubit));
            }
        }
        let (mask, value) = control_mask(controls);
        Ok(Cond { mask, value })
    }

    /// Applies the whole circuit conditioned on `controls`, global phases
    /// included.
    pub fn apply_controlled(&self, s: &mut StateVector<T>, controls: &[Control]) -> Result<()> {
        let cond = self.control_cond(s, controls)?;
        for op in &self.ops {
            op.apply(s, cond);
        }
        Ok(())
    }

    /// Applies `U^power`, optionally controlled. Large powers of narrow
    /// circuits go through the dense matrix and repeated squaring.
    pub fn apply_power(
        &self,
        s: &mut StateVector<T>,
        power: u64,
        controls: &[Control],
    ) -> Result<()> {
        let cond = self.control_cond(s, controls)?;
        let dense_ok =
            self.n_qubits <= 10 && controls.iter().all(|c| c.qubit >= self.n_qubits) && power > 64;
        if !dense_ok {
            for _ in 0..power {
                for op in &self.ops {
                    op.apply(s, cond);
                }
            }
            return Ok(());
        }
        let m = self.dense_matrix()?.pow(power);
        let block = 1usize << self.n_qubits;
        let amps = s.amplitudes_mut();
        for (h, chunk) in amps.chunks_mut(block).enumerate() {
            if cond.holds(h * block) {
                let out = m.mul_vec(chunk);
                chunk.copy_from_slice(&out);
            }
        }
        Ok(())
    }

    /// Matrix of the circuit on its own `n_qubits`, column `j` = image of `|j⟩`.
    pub fn dense_matrix(&self) -> Result<DenseMatrix<T>> {
        let dim = 1usize << self.n_qubits;
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for j in 0..dim {
            let mut s = StateVector::new_basis_state(self.n_qubits.max(1), j)?;
            self.apply(&mut s)?;
            for (i, a) in s.amplitudes().iter().take(dim).enumerate() {
                data[i * dim + j] = *a;
            }
        }
        Ok(DenseMatrix { dim, data })
    }

    /// Count of elementary gates after [`expand_gates`](Self::expand_gates).
    pub fn gate_count(&self) -> usize {
        self.expand_gates()
            .ops
            .iter()
            .filter(|o| matches!(o, Op::Gate(_)))
            .count()
    }

    /// Rewrites table-driven and reflection operations as explicit
    /// multi-controlled gates. Global phases are kept as they are.
    pub fn expand_gates(&self) -> Self {
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                Op::Gate(_) | Op::GlobalPhase(_) => out.push(op.clone()),
                Op::ConditionedRotation {
                    register,
                    target,
                    angles,
                } => {
                    for (v, &a) in angles.iter().enumerate() {
                        let g = Gate::rot(a, *target).with_controls(pattern(register, v));
                        out.push(Op::Gate(g));
                    }
                }
                Op::Diagonal { register, phases } => {
                    let (head, rest) = register.split_first().expect("diagonal needs a register");
                    for (v, &p) in phases.iter().enumerate() {
                        let ctrls = pattern(rest, v >> 1);
                        let flip = v & 1 == 0;
                        if flip {
                            out.push(Op::Gate(Gate::x(*head)));
                        }
                        out.push(Op::Gate(Gate::phase(p, *head).with_controls(ctrls)));
                        if flip {
                            out.push(Op::Gate(Gate::x(*head)));
                        }
                    }
                }
                Op::ReflectZero { register } => push_reflect_zero(&mut out, register),
                Op::InversionAboutMean { register } => {
                    for &q in register {
                        out.push(Op::Gate(Gate::h(q)));
                    }
                    push_reflect_zero(&mut out, register);
                    for &q in register {
                        out.push(Op::Gate(Gate::h(q)));
                    }
                }
            }
        }
        Self {
            n_qubits: self.n_qubits,
            ops: out,
        }
    }
}

fn pattern(register: &[usize], v: usize) -> Vec<Control> {
    register
        .iter()
        .enumerate()
        .map(|(j, &q)| Control {
            qubit: q,
            polarity: (v >> j) & 1 == 1,
        })
        .collect()
}

// 2|0⟩⟨0| − I = −(I − 2|0⟩⟨0|)
fn push_reflect_zero<T: Real>(out: &mut Vec<Op<T>>, register: &[usize]) {
    let (head, rest) = register.split_first().expect("reflection needs a register");
    out.push(Op::Gate(Gate::x(*head)));
    out.push(Op::Gate(
        Gate::phase(T::PI(), *head).with_controls(rest.iter().map(|&q| Control::off(q))),
    ));
    out.push(Op::Gate(Gate::x(*head)));
    out.push(Op::GlobalPhase(T::PI()));
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut data = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { dim: n, data }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..n {
                    acc += self.data[i * n + j] * v[j];
                }
                acc
            })
            .collect()
    }
}

/// Applies the inverse QFT to `register` (first qubit least significant),
/// swaps included, so that `|x̃⟩ ↦ |x⟩` for Fourier states.
pub fn inverse_qft_circuit<T: Real>(n_qubits: usize, register: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(n_qubits);
    let m = register.len();
    for j in 0..m / 2 {
        push_swap(&mut c, register[j], register[m - 1 - j])?;
    }
    for j in 0..m {
        for k in 0..j {
            let angle = -T::PI() / T::lit((1u64 << (j - k)) as f64);
            c.gate(Gate::phase(angle, register[j]).with_control(Control::on(register[k])))?;
        }
        c.gate(Gate::h(register[j]))?;
    }
    Ok(c)
}

fn push_swap<T: Real>(c: &mut Circuit<T>, a: usize, b: usize) -> Result<()> {
    c.gate(Gate::x(b).with_control(Control::on(a)))?;
    c.gate(Gate::x(a).with_control(Control::on(b)))?;
    c.gate(Gate::x(b).with_control(Control::on(a)))?;
    Ok(())
}

/// `R(α)` block for external use.
pub fn rotation_block<T: Real>(alpha: T) -> [[Complex<T>; 2]; 2] {
    rot_matrix(alpha)
}

impl<T: Real> From<Gate<T>> for Op<T> {
    fn from(g: Gate<T>) -> Self {
        Op::Gate(g)
    }
}
