//! Complete elliptic integrals and the generalized family `J_m`.

mod agm;
mod frakj;
mod ksq;
mod moments;

pub use agm::{ellip_e, ellip_e_comp, ellip_e_deficit, ellip_k, ellip_k_comp};
pub use frakj::{
    frakj, frakj_comp, frakj_maclaurin, frakj_quadrature, frakj_routes, jm_half, jm_half_3f2, jm_half_rationals,
    EllipticKind, FrakJRoutes, JmHalf, MaclaurinStream, JM_HALF_MAX_M,
};
pub use ksq::{ksq_quadrature, ksq_series, ksq_weighted_integral, KsqFit, KSQ_MAX_DEGREE};
pub use moments::{
    fl_coefficient, k_moment, moment_e, moment_fl, moment_jm, moment_k, moment_quadrature, pi4_ratio, pi_ratio,
    ratio_15pi32, tripleform, MomentRoutes, ROUTE_SLACK,
};
