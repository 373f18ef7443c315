//! Shifted Legendre polynomials, their moments, and Fourier-Legendre (FL)
//! coefficient streams.

mod catalog;
mod moments;
mod polynomials;

pub use catalog::{
    fl_catalog, fl_integrate_against_k, fl_numeric, fl_numeric_nodes, CatalogId, FLCoefficients, FlDecay, FlSource,
};
pub use moments::{raw_moment, shifted_moment_named, shifted_moment_power, shifted_moment_quadrature, MomentFunction};
pub use polynomials::{legendre_p, legendre_p_binomial, shifted_legendre, shifted_legendre_all, x_pn_pl_overlap};
