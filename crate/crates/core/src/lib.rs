//! Fourier-Legendre expansion machinery, complete and generalized elliptic
//! integrals, hypergeometric series and harmonic numbers, plus a registry of
//! closed-form identities checked on independent numerical routes.
//!
//! Every evaluator returns a [`ValueWithError`]: a binary64 value together
//! with an absolute error estimate.

pub mod elliptic;
pub mod error;
pub mod hyper;
pub mod identities;
pub mod legendre;
pub mod numerics;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use numerics::ValueWithError;
