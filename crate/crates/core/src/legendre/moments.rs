use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::polynomials::shifted_legendre;
use crate::error::{Error, Result};
use crate::numerics::{tanh_sinh_integrate_nodes, Endpoints, Node, ValueWithError, EPS};
use crate::specfun::{gamma, harmonic, ln_gamma_ratio, sin_pi, HarmonicArg};

/// `∫_0^1 x^η P̃_n(x) dx = (-1)^n (-η)_n / (1+η)_{n+1}` for `η > -1`.
pub fn raw_moment(eta: f64, n: usize) -> f64 {
    let integer = eta >= 0.0 && eta == eta.round();
    if integer && n as f64 > eta {
        return 0.0;
    }
    if integer || n < 16 || (n as f64) < eta + 2.0 {
        let mut r = 1.0 / (1.0 + eta);
        for k in 0..n {
            let kf = k as f64;
            r *= (eta - kf) / (kf + 2.0 + eta);
        }
        return r;
    }
    // (-1)^(n+1) sin(πη) Γ(1+η)^2 / π · Γ(n-η) / Γ(n+2+η)
    let g = gamma(1.0 + eta).map(|g| g.value).unwrap_or(f64::NAN);
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    sign * sin_pi(eta) * g * g / PI * ln_gamma_ratio(n as f64, -eta, 2.0 + eta).exp()
}

/// Checked raw moment `∫_0^1 x^η P̃_n(x) dx`.
pub fn shifted_moment_power(eta: f64, n: usize) -> Result<ValueWithError> {
    if !(eta > -1.0) || !eta.is_finite() {
        return Err(Error::outside(format!("power {eta} must exceed -1")));
    }
    let v = raw_moment(eta, n);
    Ok(ValueWithError::new(v, 64.0 * EPS * (n as f64 + 1.0) * v.abs()))
}

/// Functions with closed-form shifted Legendre moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentFunction {
    /// `ln(1 - x)`
    Ln1mx,
    /// `ln^2(1 - x)`
    Ln1mxSq,
    /// `ln(1 - √x)`
    Ln1mSqrtx,
    /// `ln(1 - x) ln(x)`
    Ln1mxLnx,
    /// `1 / √(x (1 - x))`
    InvSqrtX1mx,
}

impl MomentFunction {
    pub const ALL: [MomentFunction; 5] = [
        MomentFunction::Ln1mx,
        MomentFunction::Ln1mxSq,
        MomentFunction::Ln1mSqrtx,
        MomentFunction::Ln1mxLnx,
        MomentFunction::InvSqrtX1mx,
    ];

    pub fn id(self) -> &'static str {
        match self {
            MomentFunction::Ln1mx => "ln_1mx",
            MomentFunction::Ln1mxSq => "ln_1mx_sq",
            MomentFunction::Ln1mSqrtx => "ln_1m_sqrtx",
            MomentFunction::Ln1mxLnx => "ln_1mx_ln_x",
            MomentFunction::InvSqrtX1mx => "inv_sqrt_x1mx",
        }
    }

    /// Evaluates the function at a quadrature node.
    pub fn eval(self, node: Node) -> f64 {
        let (x, y) = (node.x, node.to_b);
        match self {
            MomentFunction::Ln1mx => y.ln(),
            MomentFunction::Ln1mxSq => y.ln().powi(2),
            // 1 - √x = (1 - x) / (1 + √x)
            MomentFunction::Ln1mSqrtx => (y / (1.0 + x.sqrt())).ln(),
            MomentFunction::Ln1mxLnx => y.ln() * node.from_a.ln(),
            MomentFunction::InvSqrtX1mx => 1.0 / (node.from_a * y).sqrt(),
        }
    }

    fn closed_form(self, n: usize) -> Result<f64> {
        let nf = n as f64;
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(match self {
            MomentFunction::Ln1mx => -1.0 / (nf * (nf + 1.0)),
            MomentFunction::Ln1mxSq => {
                let h = harmonic(HarmonicArg::new(nf - 1.0, 1))?.value;
                (4.0 * nf + 2.0) / (nf * nf * (nf + 1.0) * (nf + 1.0)) + 4.0 * h / (nf * (nf + 1.0))
            }
            MomentFunction::Ln1mSqrtx => (sign - 4.0 * nf - 2.0) / (2.0 * nf * (nf + 1.0) * (2.0 * nf + 1.0)),
            MomentFunction::Ln1mxLnx => -(sign + 1.0) / (nf * nf * (nf + 1.0) * (nf + 1.0)),
            MomentFunction::InvSqrtX1mx => {
                if n % 2 == 1 {
                    return Ok(0.0);
                }
                // π C(n, n/2)^2 / 2^n, built as a product to avoid overflow
                let mut c = PI;
                for k in 0..n / 2 {
                    let kf = k as f64;
                    let r = (nf / 2.0 + kf + 1.0) / (kf + 1.0) / 4.0;
                    c *= r * r;
                }
                c
            }
        })
    }

    fn has_n0_pole(self) -> bool {
        self != MomentFunction::InvSqrtX1mx
    }
}

impl fmt::Display for MomentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MomentFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.id() == s).ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// `∫_0^1 f(x) P̃_n(x) dx` by quadrature.
pub fn shifted_moment_quadrature(f: MomentFunction, n: usize) -> Result<ValueWithError> {
    let g = |node: Node| f.eval(node) * shifted_legendre(n, node.x);
    Ok(tanh_sinh_integrate_nodes(g, 0.0, 1.0, Endpoints::Both, 1e-14)?.value)
}

/// Closed-form shifted Legendre moment; `n = 0` of the logarithmic family
/// falls back to quadrature.
pub fn shifted_moment_named(f: MomentFunction, n: usize) -> Result<ValueWithError> {
    if n == 0 && f.has_n0_pole() {
        return shifted_moment_quadrature(f, 0);
    }
    let v = f.closed_form(n)?;
    Ok(ValueWithError::new(v, 16.0 * EPS * v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_moments() {
        assert!((raw_moment(2.0, 1) - 1.0 / 6.0).abs() < 1e-16);
        for i in 0..6 {
            assert!((raw_moment(i as f64, 0) - 1.0 / (i as f64 + 1.0)).abs() < 1e-16);
        }
        assert_eq!(raw_moment(1.0, 3), 0.0);
        assert!(shifted_moment_power(-1.0, 0).is_err());
    }

    #[test]
    fn real_power_routes_join() {
        for eta in [-0.5, 0.3, 2.7, 7.3] {
            for n in [16usize, 20, 40, 100] {
                let mut r = 1.0 / (1.0 + eta);
                for k in 0..n {
                    let kf = k as f64;
                    r *= (eta - kf) / (kf + 2.0 + eta);
                }
                let g = raw_moment(eta, n);
                assert!((g - r).abs() <= 1e-13 * r.abs(), "eta={eta} n={n}: {g} vs {r}");
            }
        }
    }

    #[test]
    fn real_power_against_quadrature() {
        for eta in [-0.5, 0.5, 2.7] {
            for n in [0usize, 1, 5, 17] {
                let q = tanh_sinh_integrate_nodes(
                    |node: Node| node.x.powf(eta) * shifted_legendre(n, node.x),
                    0.0,
                    1.0,
                    Endpoints::Both,
                    1e-14,
                )
                .unwrap();
                assert!((q.value.value - raw_moment(eta, n)).abs() < 1e-12, "eta={eta} n={n}");
            }
        }
    }

    #[test]
    fn named_examples() {
        let v = |f, n| shifted_moment_named(f, n).unwrap().value;
        assert!((v(MomentFunction::Ln1mx, 1) + 0.5).abs() < 1e-16);
        assert!((v(MomentFunction::Ln1mSqrtx, 2) + 0.15).abs() < 1e-16);
        assert_eq!(v(MomentFunction::InvSqrtX1mx, 1), 0.0);
        assert!((v(MomentFunction::InvSqrtX1mx, 0) - PI).abs() < 1e-15);
        assert!((v(MomentFunction::Ln1mx, 0) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn named_against_quadrature() {
        for f in MomentFunction::ALL {
            for n in 1..=20 {
                let c = shifted_moment_named(f, n).unwrap().value;
                let q = shifted_moment_quadrature(f, n).unwrap().value;
                assert!((c - q).abs() < 1e-10, "{f} n={n}: {c} vs {q}");
            }
        }
    }

    #[test]
    fn ids_round_trip() {
        for f in MomentFunction::ALL {
            assert_eq!(f.id().parse::<MomentFunction>().unwrap(), f);
        }
        assert!(matches!("nope".parse::<MomentFunction>(), Err(Error::UnknownFunction(_))));
    }
}
