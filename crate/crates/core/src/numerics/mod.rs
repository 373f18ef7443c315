//! Summation, acceleration and quadrature kernels with tracked error bounds.

mod double;
mod levin;
mod quad;
mod rational;
mod sum;
mod value;
pub mod work;

pub use double::{double_sum, DoubleSumStrategy};
pub use levin::levin_u_accelerate;
pub use quad::{tanh_sinh_integrate, tanh_sinh_integrate_nodes, Endpoints, Node, QuadResult};
pub use rational::{best_rational, fit_rational};
pub use sum::{alternating_limit, compensated_sum, em_power_tail, sum_with_tail, CompensatedSum, TailEstimate};
pub use value::ValueWithError;

/// Unit roundoff for binary64.
pub const EPS: f64 = f64::EPSILON;
