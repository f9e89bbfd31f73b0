//! Dense statevector simulator.

mod circuit;
mod gate;
mod state;

pub use circuit::{inverse_qft_circuit, rotation_block, Circuit, DenseMatrix, Op};
pub use gate::{Control, Gate, GateKind};
pub use state::{sample_binomial, StateVector};
