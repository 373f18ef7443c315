//! Scalar special functions and constants: Γ, ψ, ψ′, Hurwitz ζ, generalized
//! harmonic numbers, G, ζ(3), and the di- and trilogarithm.

mod constants;
mod gamma;
mod kernels;
mod polylog;
mod psi;

pub use constants::{catalan_g, euler_gamma, ln_one_plus_sqrt2, zeta2, zeta3, EULER_GAMMA};
pub use gamma::{cos_pi, gamma, ln_gamma, ln_gamma_ratio, sin_pi};
pub use kernels::{binomial_kernel, Kernel};
pub use num_complex::Complex64 as ComplexValue;
pub use polylog::{dilog, polylog, rogers_l, trilog};
pub use psi::{digamma, harmonic, hurwitz_zeta, trigamma, zeta, HarmonicArg};

/// `B_{2k}` for `k = 1..=10`.
pub(crate) const BERNOULLI_2K: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];
