#![allow(dead_code)]

use std::f64::consts::PI;

use expsum::amp_est::PreparedAmplitude;
use expsum::sim::{Circuit, Control, Gate, StateVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random entangling circuit on `n` qubits with the ancilla at qubit 0.
pub fn random_prepared(n: usize, seed: u64) -> PreparedAmplitude<f64> {
    let mut r = rng(seed);
    let mut c = Circuit::new(n);
    for _ in 0..3 {
        for q in 0..n {
            c.gate(Gate::ry(r.gen_range(0.0..2.0 * PI), q)).unwrap();
        }
        for q in 1..n {
            c.gate(Gate::ry(r.gen_range(0.0..2.0 * PI), q - 1).with_control(Control::on(q)))
                .unwrap();
        }
        for q in 0..n {
            c.gate(Gate::phase(r.gen_range(0.0..2.0 * PI), q)).unwrap();
        }
    }
    PreparedAmplitude::new(c, 0).unwrap()
}

/// `√(Σ |ψ_i|²)` over basis states with bit `q` clear.
pub fn branch_norm(amps: &[Complex<f64>], q: usize) -> f64 {
    amps.iter()
        .enumerate()
        .filter(|(i, _)| i >> q & 1 == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `diag(1, e^{2πiφ})` with eigenvector `|1⟩`.
pub fn phase_unitary(phi: f64) -> (Circuit<f64>, StateVector<f64>) {
    let mut c = Circuit::new(1);
    c.gate(Gate::phase(2.0 * PI * phi, 0)).unwrap();
    (c, StateVector::new_basis_state(1, 1).unwrap())
}

/// Normalized random nonnegative weights.
pub fn random_weights(dim: usize, r: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..dim).map(|_| r.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}
