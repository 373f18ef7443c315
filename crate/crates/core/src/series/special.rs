use std::f64::consts::{LN_2, PI};

use num_rational::Ratio;

use super::{evaluate_twisted_routes, HarmonicFactor, RationalFactor, TwistedTermSpec, DEFAULT_MAX_TERMS};
use crate::error::{Error, Result};
use crate::numerics::{sum_with_tail, CompensatedSum, TailEstimate, ValueWithError, EPS};
use crate::specfun::{harmonic, HarmonicArg, Kernel};

/// `W(m) = 1/(2m-1) + 2/(2m+1) + 1/(2m+3) + 1/(2m-1)^2 - 1/(2m+3)^2`, exactly.
pub fn w_rational(m: u64) -> Ratio<i128> {
    let m = m as i128;
    let r = |d: i128| Ratio::new(1, d);
    r(2 * m - 1) + r(2 * m + 1) * 2 + r(2 * m + 3) + r((2 * m - 1).pow(2)) - r((2 * m + 3).pow(2))
}

pub fn evaluate_w_sequence(m: u64) -> ValueWithError {
    let w = w_rational(m);
    ValueWithError::rounded(*w.numer() as f64 / *w.denom() as f64)
}

/// `Σ_{m >= 0} W(m) / (2m + 1)`.
pub fn w_series_sum(tol: f64) -> Result<ValueWithError> {
    let term = |m: f64| {
        let w = 1.0 / (2.0 * m - 1.0) + 2.0 / (2.0 * m + 1.0) + 1.0 / (2.0 * m + 3.0) + 1.0 / (2.0 * m - 1.0).powi(2)
            - 1.0 / (2.0 * m + 3.0).powi(2);
        w / (2.0 * m + 1.0)
    };
    sum_with_tail(term, TailEstimate::PowerLaw { exponent: 2.0 }, tol, DEFAULT_MAX_TERMS)
}

pub const PARAM_DERIV_MAX_J: u32 = 20;

#[derive(Debug, Clone, Copy)]
pub struct ParamDeriv {
    pub lhs: ValueWithError,
    pub rhs: ValueWithError,
    pub value: ValueWithError,
}

/// `Σ_i C(2i,i)^2 (2 H_{2i} - H_i) / (16^i (i + j + 1))` as a twisted series.
pub fn param_deriv_spec(j: u32) -> TwistedTermSpec {
    let r = RationalFactor::inverse_of(&[(1.0, j as f64 + 1.0, 1)]);
    TwistedTermSpec::new(Kernel::CentralSq16).part(2.0, r.clone(), &[HarmonicFactor::h(2.0, 0.0)]).part(
        -1.0,
        r,
        &[HarmonicFactor::h(1.0, 0.0)],
    )
}

fn fact(n: u32) -> f64 {
    (1..=n).fold(1.0, |f, k| f * k as f64)
}

/// `(8 (j!)^2 / π) Σ_{i<=j} [(2i+1)(H_{i-1/2} + ln 2) + 1] / ((2i+1)^2 (j-i)! (i+j+1)!)`
pub fn param_deriv_rhs(j: u32) -> Result<ValueWithError> {
    let mut acc = CompensatedSum::new();
    for i in 0..=j {
        let c = fact(j) * fact(j) / (fact(j - i) * fact(i + j + 1));
        let s = 2.0 * i as f64 + 1.0;
        let h = harmonic(HarmonicArg::new(i as f64 - 0.5, 1))?.value;
        acc.add(c * (s * (h + LN_2) + 1.0) / (s * s));
    }
    let v = 8.0 / PI * acc.value();
    Ok(ValueWithError::new(v, 64.0 * EPS * (j as f64 + 1.0) * v.abs()))
}

/// Both sides of the parameter-derivative series identity.
pub fn param_deriv_series(j: u32) -> Result<ParamDeriv> {
    if j > PARAM_DERIV_MAX_J {
        return Err(Error::outside(format!("j = {j} exceeds {PARAM_DERIV_MAX_J}")));
    }
    let lhs = evaluate_twisted_routes(&param_deriv_spec(j), 1e-12, DEFAULT_MAX_TERMS)?.value;
    let rhs = param_deriv_rhs(j)?;
    if !lhs.agrees_with(&rhs, 1e-10) {
        return Err(Error::RouteDisagreement { a: lhs, b: rhs });
    }
    Ok(ParamDeriv { lhs, rhs, value: rhs.reconcile(lhs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_values() {
        assert_eq!(w_rational(0), Ratio::new(20, 9));
        assert_eq!(evaluate_w_sequence(0).value, 20.0 / 9.0);
        // W(m) ~ 2/m
        let m = 1_000_000u64;
        assert!((evaluate_w_sequence(m).value * m as f64 - 2.0).abs() < 1e-5);
    }

    #[test]
    fn w_sum() {
        let s = w_series_sum(1e-13).unwrap();
        assert!((s.value - 3.0 * PI * PI / 8.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn param_deriv_reference() {
        // mpmath: Euler-Maclaurin summation at 30 digits
        let cases = [(0, 0.781_394_288_249_112_625_13), (1, 0.622_736_018_617_679_263_76)];
        for (j, v) in cases {
            let p = param_deriv_series(j).unwrap();
            assert!((p.rhs.value - v).abs() < 1e-15, "j={j}");
            assert!((p.lhs.value - v).abs() < 1e-9, "j={j}: {}", p.lhs);
        }
        let p = param_deriv_series(5).unwrap();
        assert!((p.lhs.value - p.rhs.value).abs() < 1e-8);
        assert!(param_deriv_series(21).is_err());
    }
}
