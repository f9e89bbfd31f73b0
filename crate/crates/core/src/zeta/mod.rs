//! Classical evaluation of the Riemann zeta function.

pub mod bernoulli;
pub mod em;
pub mod gamma;
pub mod hardy;
pub mod hiary;
pub mod rs;
pub mod sums;

pub use bernoulli::{
    bernoulli_numbers, bernoulli_polynomial, bernoulli_polynomial_exact, faulhaber_sum,
    BernoulliCache,
};
pub use em::{
    em_remainder_bound, em_tail, select_em_params, zeta_euler_maclaurin, zeta_euler_maclaurin_eval,
    zeta_euler_maclaurin_in, EMParams, EmEvaluation,
};
pub use gamma::{ln_gamma, ln_gamma_lanczos};
pub use hardy::{
    hardy_s, hardy_theta, hardy_z, refine_zero, scan_zeros, zeta_on_line, ZeroBracket, ZeroScan,
    ZetaMethod,
};
pub use hiary::{hiary_block_parameters, HiaryParams};
pub use rs::{
    riemann_siegel_chi, riemann_siegel_eval, riemann_siegel_zeta, rs_components, rs_cutoff,
    rs_remainder, RsEvaluation,
};
pub use sums::{harmonic_prefix_sums, partial_power_sum, power_term};
