//! `∫_0^1 x^a (1-x)^b K(√x)^2 dx = p + q ζ(3)`.
//!
//! With `x^a (1-x)^b K(√x) = Σ d_n P̃_n`, the integral is `Σ 2 d_n / (2n+1)^2`.
//! `d_n` is a rational function of `n`, obtained from the FL coefficients
//! `2/(2n+1)` of `K(√x)` by repeated multiplication by `x`:
//! `(x f)_n = f_n / 2 + n f_{n-1} / (2(2n-1)) + (n+1) f_{n+1} / (2(2n+3))`.
//! Each cubic pole of the summand at a half-integer contributes `7 c ζ(3)`,
//! `c` being its `(n - n0)^-3` Laurent coefficient; `p` follows by rational
//! recognition of the remainder.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use super::agm::ellip_k_comp;
use crate::error::{Error, Result};
use crate::numerics::{
    fit_rational, sum_with_tail, tanh_sinh_integrate_nodes, Endpoints, Node, TailEstimate, ValueWithError,
};
use crate::specfun::zeta3;

pub const KSQ_MAX_DEGREE: u32 = 6;
pub const KSQ_MAX_DEN: i64 = 1 << 16;
pub const KSQ_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct KsqFit {
    pub p: Ratio<i64>,
    pub q: Ratio<i64>,
    pub value: ValueWithError,
    pub quadrature: ValueWithError,
    pub series: ValueWithError,
    pub residual: f64,
}

fn weight_coefficients(a: u32, b: u32) -> Vec<(u32, f64)> {
    let mut binom = 1.0;
    (0..=b)
        .map(|j| {
            let c = if j % 2 == 0 { binom } else { -binom };
            binom = binom * (b - j) as f64 / (j + 1) as f64;
            (a + j, c)
        })
        .collect()
}

/// FL coefficient `n` of `x^i K(√x)`, continued to complex `n`.
fn times_x_power(i: u32, n: Complex64) -> Complex64 {
    if i == 0 {
        return 2.0 / (2.0 * n + 1.0);
    }
    let one = Complex64::new(1.0, 0.0);
    0.5 * times_x_power(i - 1, n)
        + n / (2.0 * (2.0 * n - 1.0)) * times_x_power(i - 1, n - one)
        + (n + 1.0) / (2.0 * (2.0 * n + 3.0)) * times_x_power(i - 1, n + one)
}

fn summand(weights: &[(u32, f64)], n: Complex64) -> Complex64 {
    let d: Complex64 = weights.iter().map(|&(i, c)| c * times_x_power(i, n)).sum();
    2.0 * d / ((2.0 * n + 1.0) * (2.0 * n + 1.0))
}

/// Sum of the `(n - n0)^-3` Laurent coefficients over all poles, by the
/// trapezoid rule on circles of radius 1/4.
fn cubic_residue_total(weights: &[(u32, f64)], degree: u32) -> f64 {
    const POINTS: usize = 64;
    let r = 0.25;
    let reach = degree as i64 + 2;
    let mut total = 0.0;
    for j in -reach..=reach {
        let n0 = j as f64 - 0.5;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..POINTS {
            let w = Complex64::from_polar(r, 2.0 * PI * k as f64 / POINTS as f64);
            acc += summand(weights, n0 + w) * w * w * w;
        }
        total += acc.re / POINTS as f64;
    }
    total
}

fn check_degree(a: u32, b: u32) -> Result<()> {
    if a + b > KSQ_MAX_DEGREE {
        return Err(Error::outside(format!("a + b = {} exceeds {KSQ_MAX_DEGREE}", a + b)));
    }
    Ok(())
}

/// `∫_0^1 x^a (1-x)^b K(√x)^2 dx` by quadrature.
pub fn ksq_quadrature(a: u32, b: u32) -> Result<ValueWithError> {
    check_degree(a, b)?;
    let f = |node: Node| match ellip_k_comp(node.to_b) {
        Ok(k) => node.x.powi(a as i32) * node.to_b.powi(b as i32) * k.value * k.value,
        Err(_) => f64::NAN,
    };
    Ok(tanh_sinh_integrate_nodes(f, 0.0, 1.0, Endpoints::Right, 1e-14)?.value)
}

/// `Σ 2 d_n / (2n+1)^2` for the weight `x^a (1-x)^b`.
pub fn ksq_series(a: u32, b: u32) -> Result<ValueWithError> {
    check_degree(a, b)?;
    let weights = weight_coefficients(a, b);
    let term = |n: f64| summand(&weights, Complex64::new(n, 0.0)).re;
    sum_with_tail(term, TailEstimate::PowerLaw { exponent: 3.0 }, 1e-14, 1 << 14)
}

pub fn ksq_weighted_integral(a: u32, b: u32) -> Result<KsqFit> {
    check_degree(a, b)?;
    let quadrature = ksq_quadrature(a, b)?;
    let series = match ksq_series(a, b) {
        Err(Error::ToleranceNotReached { best, .. }) => best,
        other => other?,
    };
    if !quadrature.agrees_with(&series, 1e-12) {
        return Err(Error::RouteDisagreement { a: quadrature, b: series });
    }
    let value = quadrature.reconcile(series);
    let weights = weight_coefficients(a, b);
    let q_raw = 7.0 * cubic_residue_total(&weights, a + b);
    let fail = |what: &str| Error::ReconstructionFailed(format!("({a},{b}): {what}"));
    let q = fit_rational(q_raw, KSQ_MAX_DEN, 1e-12).ok_or_else(|| fail("zeta(3) coefficient"))?;
    let z3 = zeta3().value;
    let qf = *q.numer() as f64 / *q.denom() as f64;
    let p = fit_rational(value.value - qf * z3, KSQ_MAX_DEN, KSQ_RESIDUAL).ok_or_else(|| fail("rational part"))?;
    let pf = *p.numer() as f64 / *p.denom() as f64;
    let residual = (value.value - (pf + qf * z3)).abs();
    if !(residual < KSQ_RESIDUAL) {
        return Err(fail("residual"));
    }
    Ok(KsqFit { p, q, value, quadrature, series, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn known_fits() {
        let cases = [
            ((0, 0), r(0, 1), r(7, 2)),
            ((1, 0), r(1, 2), r(7, 4)),
            ((2, 0), r(17, 32), r(77, 64)),
            ((2, 2), r(-126, 1 << 14), r(1757, 1 << 14)),
        ];
        for ((a, b), p, q) in cases {
            let fit = ksq_weighted_integral(a, b).unwrap();
            assert_eq!((fit.p, fit.q), (p, q), "({a},{b})");
            assert!(fit.residual < 1e-10);
        }
    }

    #[test]
    fn catalog_coefficients_of_x_one_minus_x() {
        let w = weight_coefficients(1, 1);
        for n in 0..12 {
            let nf = n as f64;
            let d: f64 = w.iter().map(|&(i, c)| c * times_x_power(i, Complex64::new(nf, 0.0)).re).sum();
            let s = 4.0 * nf * nf + 4.0 * nf - 15.0;
            let expected = 8.0 * (9.0 - 4.0 * nf - 4.0 * nf * nf) / ((2.0 * nf + 1.0) * s * s);
            assert!((d - expected).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn degree_cap() {
        assert!(ksq_weighted_integral(4, 3).is_err());
    }
}
