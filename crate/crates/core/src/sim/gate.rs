use num_complex::Complex;

use crate::error::{domain, Result};
use crate::scalar::Real;

/// A control line: the gate fires when `qubit` reads `polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: true,
        }
    }

    pub fn off(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind<T> {
    Hadamard,
    /// `RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
    Ry(T),
    /// `R(α)|0⟩ = cos α|0⟩ + sin α|1⟩`, i.e. `RY(2α)`.
    Rot(T),
    /// `diag(1, e^{iθ})`.
    PhaseZ(T),
    X,
    /// Flips the target iff any control line is active. Implemented as `X`
    /// followed by an `X` that fires only when every control is inactive.
    ControlledOr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T> {
    pub kind: GateKind<T>,
    pub controls: Vec<Control>,
    pub target: usize,
}

pub(crate) type Mat2<T> = [[Complex<T>; 2]; 2];

impl<T: Real> Gate<T> {
    pub fn new(kind: GateKind<T>, target: usize) -> Self {
        Self {
            kind,
            controls: Vec::new(),
            target,
        }
    }

    pub fn h(target: usize) -> Self {
        Self::new(GateKind::Hadamard, target)
    }

    pub fn x(target: usize) -> Self {
        Self::new(GateKind::X, target)
    }

    pub fn ry(theta: T, target: usize) -> Self {
        Self::new(GateKind::Ry(theta), target)
    }

    pub fn rot(alpha: T, target: usize) -> Self {
        Self::new(GateKind::Rot(alpha), target)
    }

    pub fn phase(theta: T, target: usize) -> Self {
        Self::new(GateKind::PhaseZ(theta), target)
    }

    pub fn controlled_or(register: &[usize], target: usize) -> Self {
        Self {
            kind: GateKind::ControlledOr,
            controls: register.iter().map(|&q| Control::on(q)).collect(),
            target,
        }
    }

    pub fn with_control(mut self, c: Control) -> Self {
        self.controls.push(c);
        self
    }

    pub fn with_controls(mut self, cs: impl IntoIterator<Item = Control>) -> Self {
        self.controls.extend(cs);
        self
    }

    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rot(a) => GateKind::Rot(-a),
            GateKind::PhaseZ(t) => GateKind::PhaseZ(-t),
            k => k,
        };
        Self {
            kind,
            controls: self.controls.clone(),
            target: self.target,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.target >= n_qubits {
            return domain(format!(
                "target {} outside {} qubits",
                self.target, n_qubits
            ));
        }
        let mut seen = 1usize << self.target;
        for c in &self.controls {
            if c.qubit >= n_qubits {
                return domain(format!("control {} outside {} qubits", c.qubit, n_qubits));
            }
            if seen & (1 << c.qubit) != 0 {
                return domain(format!("qubit {} used twice in one gate", c.qubit));
            }
            seen |= 1 << c.qubit;
        }
        Ok(())
    }

    /// The 2×2 block acting on the target. `None` for `ControlledOr`.
    pub fn matrix(&self) -> Option<Mat2<T>> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let re = |x: T| Complex::new(x, T::zero());
        Some(match self.kind {
            GateKind::Hadamard => {
                let s = re(T::FRAC_1_SQRT_2());
                [[s, s], [s, -s]]
            }
            GateKind::Ry(theta) => rot_matrix(theta / T::lit(2.0)),
            GateKind::Rot(alpha) => rot_matrix(alpha),
            GateKind::PhaseZ(theta) => [[one, z], [z, Complex::from_polar(T::one(), theta)]],
            GateKind::X => [[z, one], [one, z]],
            GateKind::ControlledOr => return None,
        })
    }
}

pub(crate) fn rot_matrix<T: Real>(alpha: T) -> Mat2<T> {
    let (s, c) = alpha.sin_cos();
    let re = |x: T| Complex::new(x, T::zero());
    [[re(c), re(-s)], [re(s), re(c)]]
}

/// Bit mask and required value for a list of controls.
pub(crate) fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(m, v), c| {
        let bit = 1usize << c.qubit;
        (m | bit, if c.polarity { v | bit } else { v })
    })
}
