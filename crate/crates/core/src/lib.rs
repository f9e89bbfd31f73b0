//! Statevector simulation of amplitude-estimation pipelines for weighted
//! exponential sums, with the classical zeta machinery they feed into.
//!
//! Qubit 0 is the least significant bit of a basis index throughout.

pub mod amp_est;
pub mod dd;
pub mod error;
pub mod exp_sum;
pub mod func_rotation;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod state_prep;
pub mod summation;
pub mod zeta;
pub mod zeta_quantum;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVectorF64 = sim::StateVector<f64>;
pub type StateVectorDD = sim::StateVector<DoubleDouble>;
pub type CircuitF64 = sim::Circuit<f64>;
pub type CircuitDD = sim::Circuit<DoubleDouble>;
pub type PreparedAmplitudeF64 = amp_est::PreparedAmplitude<f64>;
pub type ExpSumProblemF64 = exp_sum::ExpSumProblem<f64>;
pub type ExpSumProblemDD = exp_sum::ExpSumProblem<DoubleDouble>;
pub type PolynomialF64 = func_rotation::Polynomial<f64>;
pub type PowerWeightOracleF64 = zeta_quantum::PowerWeightOracle<f64>;
pub type ComplexF64 = num_complex::Complex<f64>;
pub type ComplexDD = num_complex::Complex<DoubleDouble>;
