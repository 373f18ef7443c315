use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::elliptic::{ellip_e_deficit, ellip_k_comp};
use crate::error::{Error, MapEstimate, Result};
use crate::numerics::{tanh_sinh_integrate_nodes, Endpoints, Node, QuadResult, ValueWithError};
use crate::specfun::{catalan_g, gamma, harmonic, HarmonicArg};

const QUAD_TOL: f64 = 1e-14;

/// Integrals with known values, used as independent routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralId {
    /// `∫_0^1 K(√x) ln(1-x) dx`
    KLn1mx,
    /// `∫_0^1 (1 - E(√x)) / (1-x) dx`
    OneMinusEOver1mx,
    /// `∫_0^1 K(√x) ln^2(1-x) dx`
    KLn1mxSq,
    /// `∫_0^1 K(√x) / √x dx`
    KOverSqrtx,
    /// `∫_0^1 K(√x) / √(x(1-x)) dx`
    KOverSqrtX1mx,
    /// `∫_0^1 x^n ln(1-√x) dx`
    XnLn1mSqrtx(u32),
    /// `(1/2π) ∫_0^4 x^n √((4-x)/x) dx`
    CatalanMoment(u32),
    /// `∫_0^1 y^(2n) / (1+y) dy`
    Y2nOver1py(u32),
    /// `∫_0^1 x K(√x) / √(1-x) dx`
    XKOverSqrt1mx,
}

impl IntegralId {
    pub const FIXED: [IntegralId; 6] = [
        IntegralId::KLn1mx,
        IntegralId::OneMinusEOver1mx,
        IntegralId::KLn1mxSq,
        IntegralId::KOverSqrtx,
        IntegralId::KOverSqrtX1mx,
        IntegralId::XKOverSqrt1mx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegralId::KLn1mx => "K_ln_1mx",
            IntegralId::OneMinusEOver1mx => "one_minus_E_over_1mx",
            IntegralId::KLn1mxSq => "K_ln_1mx_sq",
            IntegralId::KOverSqrtx => "K_over_sqrtx",
            IntegralId::KOverSqrtX1mx => "K_over_sqrt_x1mx",
            IntegralId::XnLn1mSqrtx(_) => "xn_ln_1m_sqrtx",
            IntegralId::CatalanMoment(_) => "catalan_moment",
            IntegralId::Y2nOver1py(_) => "y2n_over_1py",
            IntegralId::XKOverSqrt1mx => "xK_over_sqrt_1mx",
        }
    }

    /// Known value of the integral.
    pub fn closed_form(self) -> Result<f64> {
        let g = catalan_g().value;
        Ok(match self {
            IntegralId::KLn1mx => 8.0 * LN_2 - 8.0,
            IntegralId::OneMinusEOver1mx => 2.0 - 4.0 * LN_2,
            IntegralId::KLn1mxSq => 48.0 - 4.0 * PI * PI / 3.0 + 32.0 * (LN_2 - 2.0) * LN_2,
            IntegralId::KOverSqrtx => 4.0 * g,
            IntegralId::KOverSqrtX1mx => gamma(0.25)?.value.powi(4) / (8.0 * PI),
            IntegralId::XnLn1mSqrtx(n) => {
                -harmonic(HarmonicArg::new(2.0 * n as f64 + 2.0, 1))?.value / (n as f64 + 1.0)
            }
            IntegralId::CatalanMoment(n) => {
                let c = (0..n).fold(1.0, |c, k| c * (2 * n - k) as f64 / (k + 1) as f64);
                c / (n as f64 + 1.0)
            }
            IntegralId::Y2nOver1py(n) => {
                let a = harmonic(HarmonicArg::new(n as f64, 1))?.value;
                let b = harmonic(HarmonicArg::new(n as f64 - 0.5, 1))?.value;
                (a - b) / 2.0
            }
            IntegralId::XKOverSqrt1mx => 3.0 * PI * PI / 8.0,
        })
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralId::XnLn1mSqrtx(n) | IntegralId::CatalanMoment(n) | IntegralId::Y2nOver1py(n) => {
                write!(f, "{}:{n}", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for IntegralId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFunction(s.to_string());
        if let Some((name, n)) = s.split_once(':') {
            let n: u32 = n.parse().map_err(|_| unknown())?;
            return match name {
                "xn_ln_1m_sqrtx" => Ok(IntegralId::XnLn1mSqrtx(n)),
                "catalan_moment" => Ok(IntegralId::CatalanMoment(n)),
                "y2n_over_1py" => Ok(IntegralId::Y2nOver1py(n)),
                _ => Err(unknown()),
            };
        }
        IntegralId::FIXED.into_iter().find(|i| i.name() == s).ok_or_else(unknown)
    }
}

fn k_at(node: Node) -> f64 {
    ellip_k_comp(node.to_b).map(|k| k.value).unwrap_or(f64::NAN)
}

/// A stalled quadrature still carries a usable error bar.
pub(crate) fn settle(r: Result<QuadResult>) -> Result<ValueWithError> {
    match r {
        Ok(q) => Ok(q.value),
        Err(Error::QuadratureStall { best }) if best.is_finite() => Ok(best),
        Err(e) => Err(e),
    }
}

/// Evaluates the integral by tanh-sinh quadrature.
pub fn integral_route(id: IntegralId) -> Result<ValueWithError> {
    let unit = |f: &dyn Fn(Node) -> f64, ends: Endpoints| -> Result<ValueWithError> {
        settle(tanh_sinh_integrate_nodes(f, 0.0, 1.0, ends, QUAD_TOL))
    };
    match id {
        IntegralId::KLn1mx => unit(&|n| k_at(n) * n.to_b.ln(), Endpoints::Right),
        IntegralId::OneMinusEOver1mx => {
            unit(&|n| ellip_e_deficit(n.to_b).map(|d| d.value).unwrap_or(f64::NAN) / n.to_b, Endpoints::Right)
        }
        IntegralId::KLn1mxSq => unit(&|n| k_at(n) * n.to_b.ln().powi(2), Endpoints::Right),
        IntegralId::KOverSqrtx => unit(&|n| k_at(n) / n.from_a.sqrt(), Endpoints::Both),
        IntegralId::KOverSqrtX1mx => unit(&|n| k_at(n) / (n.from_a * n.to_b).sqrt(), Endpoints::Both),
        IntegralId::XnLn1mSqrtx(p) => unit(
            // 1 - √x = (1-x) / (1+√x)
            &|n| n.x.powi(p as i32) * (n.to_b / (1.0 + n.x.sqrt())).ln(),
            Endpoints::Right,
        ),
        IntegralId::CatalanMoment(p) => {
            let f = |n: Node| n.x.powi(p as i32) * (n.to_b / n.from_a).sqrt();
            settle(tanh_sinh_integrate_nodes(f, 0.0, 4.0, Endpoints::Both, QUAD_TOL))
                .map_estimate(|v| v.scale(0.5 / PI))
        }
        IntegralId::Y2nOver1py(p) => unit(&|n| n.x.powi(2 * p as i32) / (1.0 + n.x), Endpoints::None),
        IntegralId::XKOverSqrt1mx => unit(&|n| n.x * k_at(n) / n.to_b.sqrt(), Endpoints::Right),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_routes_match_closed_forms() {
        let mut ids = IntegralId::FIXED.to_vec();
        for n in [0, 1, 4] {
            ids.extend([IntegralId::XnLn1mSqrtx(n), IntegralId::CatalanMoment(n), IntegralId::Y2nOver1py(n)]);
        }
        for id in ids {
            let q = integral_route(id).unwrap();
            let c = id.closed_form().unwrap();
            assert!((q.value - c).abs() <= 1e-11 * c.abs().max(1.0), "{id}: {q} vs {c}");
        }
    }

    #[test]
    fn y0_case_is_ln2() {
        let q = integral_route(IntegralId::Y2nOver1py(0)).unwrap();
        assert!((q.value - LN_2).abs() < 1e-15);
        assert!((IntegralId::Y2nOver1py(0).closed_form().unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<f64> = (0..6).map(|n| IntegralId::CatalanMoment(n).closed_form().unwrap()).collect();
        assert_eq!(c, vec![1.0, 1.0, 2.0, 5.0, 14.0, 42.0]);
    }

    #[test]
    fn parse_round_trip() {
        for id in [IntegralId::KLn1mx, IntegralId::XnLn1mSqrtx(3), IntegralId::CatalanMoment(2)] {
            assert_eq!(id.to_string().parse::<IntegralId>().unwrap(), id);
        }
        assert!("K_ln".parse::<IntegralId>().is_err());
    }
}
