//! `∫ E(√x) g(x) dx = ∫ [π/2 - (π/2 - 1)√x] g(x) dx
//!                   + ½ ∫∫ (K(√x) - π/2) √z g(xz) dz dx`, both sides by quadrature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::report::{PlanReport, Status, VerificationReport};
use crate::elliptic::{ellip_e_comp, ellip_k_comp};
use crate::error::{Error, Result};
use crate::numerics::{tanh_sinh_integrate_nodes, work, Endpoints, Node, ValueWithError};
use crate::series::settle;

const OUTER_TOL: f64 = 1e-12;
const INNER_TOL: f64 = 1e-13;
const AGREEMENT: f64 = 1e-9;

/// Weight functions accepted by [`e_transform_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GWeight {
    Constant,
    Sqrt,
    /// `K(√x)`
    KSqrt,
    /// `3F2[1/2, 1/2, 3/2; 1, 5/2; x] = (6/π) ∫_0^1 s^2 K(s √x) ds`
    Hyper3F2,
}

impl GWeight {
    pub const ALL: [GWeight; 4] = [GWeight::Constant, GWeight::Sqrt, GWeight::KSqrt, GWeight::Hyper3F2];

    pub fn name(self) -> &'static str {
        match self {
            GWeight::Constant => "constant",
            GWeight::Sqrt => "sqrt",
            GWeight::KSqrt => "K_sqrt",
            GWeight::Hyper3F2 => "hyper_3f2",
        }
    }

    /// `g(y)` given `y` and `1 - y`.
    fn eval(self, y: f64, one_minus_y: f64) -> f64 {
        match self {
            GWeight::Constant => 1.0,
            GWeight::Sqrt => y.sqrt(),
            GWeight::KSqrt => k_of(one_minus_y),
            GWeight::Hyper3F2 => hyper_weight(y, one_minus_y),
        }
    }

    fn singular_at_one(self) -> bool {
        matches!(self, GWeight::KSqrt | GWeight::Hyper3F2)
    }
}

impl fmt::Display for GWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GWeight::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

fn k_of(kc2: f64) -> f64 {
    ellip_k_comp(kc2).map(|v| v.value).unwrap_or(f64::NAN)
}

fn hyper_weight(y: f64, one_minus_y: f64) -> f64 {
    if y < 0.5 {
        // 3 Σ a_n y^n / (2n+3)
        let (mut a, mut p, mut s) = (1.0, 1.0, 0.0);
        for n in 0..200 {
            let nf = n as f64;
            let t = a * p / (2.0 * nf + 3.0);
            s += t;
            if t < 1e-17 * s {
                break;
            }
            a *= ((2.0 * nf + 1.0) / (2.0 * nf + 2.0)).powi(2);
            p *= y;
        }
        return 3.0 * s;
    }
    // 1 - s^2 y = (1 - s)(1 + s) + s^2 (1 - y)
    let f = |n: Node| n.x * n.x * k_of(n.to_b * (1.0 + n.x) + n.x * n.x * one_minus_y);
    let v = settle(tanh_sinh_integrate_nodes(f, 0.0, 1.0, Endpoints::Right, INNER_TOL)).map(|v| v.value);
    6.0 / PI * v.unwrap_or(f64::NAN)
}

fn integrate(f: impl Fn(Node) -> f64, ends: Endpoints, tol: f64) -> Result<ValueWithError> {
    settle(tanh_sinh_integrate_nodes(f, 0.0, 1.0, ends, tol))
}

/// The three integrals: `∫ E g`, `∫ [π/2 - (π/2 - 1)√x] g` and the double integral.
pub fn e_transform_sides(g: GWeight) -> Result<[ValueWithError; 3]> {
    let ends = if g.singular_at_one() { Endpoints::Right } else { Endpoints::None };
    let lhs = integrate(
        |n| ellip_e_comp(n.to_b).map(|e| e.value).unwrap_or(f64::NAN) * g.eval(n.x, n.to_b),
        ends,
        OUTER_TOL,
    )?;
    let simple = integrate(|n| (FRAC_PI_2 - (FRAC_PI_2 - 1.0) * n.x.sqrt()) * g.eval(n.x, n.to_b), ends, OUTER_TOL)?;
    let inner_error = std::cell::Cell::new(0.0f64);
    let outer = |n: Node| {
        // 1 - x z = (1 - x) + x (1 - z)
        let inner = |m: Node| m.x.sqrt() * g.eval(n.x * m.x, n.to_b + n.x * m.to_b);
        match integrate(inner, ends, INNER_TOL) {
            Ok(v) => {
                inner_error.set(inner_error.get().max(v.abs_error));
                (k_of(n.to_b) - FRAC_PI_2) * v.value
            }
            Err(_) => f64::NAN,
        }
    };
    let double = integrate(outer, Endpoints::Right, OUTER_TOL)?;
    // |K - π/2| integrates to 2 - π/2
    let double = double.widen(inner_error.get() * (2.0 - FRAC_PI_2)).scale(0.5);
    Ok([lhs, simple, double])
}

/// Checks the E transformation for the weight `g`; the transformed side is
/// reported as the right-hand side.
pub fn e_transform_check(g: GWeight) -> Result<VerificationReport> {
    let start = Instant::now();
    let (sides, terms) = work::measure(|| e_transform_sides(g));
    let [lhs, simple, double] = sides?;
    let rhs = simple + double;
    let dev = (lhs.value - rhs.value).abs();
    let err = lhs.abs_error + rhs.abs_error;
    let allowed = AGREEMENT * rhs.value.abs();
    let status = if dev <= allowed + err && err <= allowed {
        Status::Pass
    } else if dev <= allowed + err {
        Status::TolMiss
    } else {
        Status::Fail
    };
    Ok(VerificationReport {
        id: format!("E_TRANSFORM:{g}"),
        plans: vec![PlanReport {
            method: "quadrature".into(),
            value: lhs.value,
            abs_error: lhs.abs_error,
            status,
            reason: None,
        }],
        rhs_value: rhs.value,
        abs_dev: dev,
        rel_dev: dev / rhs.value.abs(),
        status,
        terms_used: terms,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{catalan_g, zeta3};

    #[test]
    fn constant_weight() {
        let r = e_transform_check(GWeight::Constant).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!((r.rhs_value - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn sqrt_weight() {
        let r = e_transform_check(GWeight::Sqrt).unwrap();
        assert!(r.abs_dev < 1e-9, "{r:?}");
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn k_weight_pieces() {
        let [lhs, simple, double] = e_transform_sides(GWeight::KSqrt).unwrap();
        let (g, z3) = (catalan_g().value, zeta3().value);
        assert!((lhs.value - (2.0 + 7.0 * z3) / 4.0).abs() < 1e-10, "{lhs}");
        let piece = (2.0 + 7.0 * z3) / 4.0 - (1.0 + 2.0 * g) / 2.0 - PI * (3.0 - 2.0 * g) / 4.0;
        assert!((double.value - piece).abs() < 1e-9, "{double} vs {piece}");
        assert!((simple.value + double.value - lhs.value).abs() < 1e-9);
    }

    #[test]
    fn hyper_weight_check() {
        let r = e_transform_check(GWeight::Hyper3F2).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!((r.plans[0].value - 1.473_778_068_508_835_247).abs() < 1e-12);
    }

    #[test]
    fn hyper_weight_branches() {
        for y in [0.3f64, 0.49999, 0.50001, 0.9] {
            let (mut a, mut s) = (1.0, 0.0);
            for n in 0..3000 {
                let nf = n as f64;
                s += a * y.powi(n) / (2.0 * nf + 3.0);
                a *= ((2.0 * nf + 1.0) / (2.0 * nf + 2.0)).powi(2);
            }
            assert!((hyper_weight(y, 1.0 - y) - 3.0 * s).abs() < 1e-13, "y={y}");
        }
        assert!("hyper_3f2".parse::<GWeight>().is_ok());
        assert!("x".parse::<GWeight>().is_err());
    }
}
