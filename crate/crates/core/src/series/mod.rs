//! Twisted hypergeometric series: a central-binomial kernel times rational
//! and generalized-harmonic factors, summed with an Euler-Maclaurin tail and
//! cross-checked by Levin acceleration.

mod integrals;
mod special;

pub(crate) use integrals::settle;
pub use integrals::{integral_route, IntegralId};
pub use special::{
    evaluate_w_sequence, param_deriv_rhs, param_deriv_series, param_deriv_spec, w_series_sum, ParamDeriv,
    PARAM_DERIV_MAX_J,
};

use crate::error::{Error, Result};
use crate::numerics::{levin_u_accelerate, sum_with_tail, TailEstimate, ValueWithError};
use crate::specfun::{binomial_kernel, harmonic, HarmonicArg, Kernel};

/// Default cap on summed terms.
pub const DEFAULT_MAX_TERMS: usize = 1 << 18;

const LEVIN_TERMS: usize = 40;

/// Polynomial in `n`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `a n + b`
    pub fn linear(a: f64, b: f64) -> Self {
        Poly(vec![b, a])
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * n + c)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

/// Ratio of two polynomials in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFactor {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFactor {
    pub fn one() -> Self {
        Self { num: Poly::constant(1.0), den: Poly::constant(1.0) }
    }

    pub fn poly(num: Poly) -> Self {
        Self { num, den: Poly::constant(1.0) }
    }

    /// `1 / Π (a_i n + b_i)^(p_i)`
    pub fn inverse_of(factors: &[(f64, f64, u32)]) -> Self {
        let den = factors
            .iter()
            .fold(Poly::constant(1.0), |acc, &(a, b, p)| (0..p).fold(acc, |acc, _| acc.mul(&Poly::linear(a, b))));
        Self { num: Poly::constant(1.0), den }
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.num.eval(n) / self.den.eval(n)
    }

    /// Degree of the denominator minus that of the numerator.
    pub fn deficit(&self) -> i64 {
        self.den.degree() as i64 - self.num.degree() as i64
    }
}

/// `(H^(order)_{scale n + shift})^power`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFactor {
    pub scale: f64,
    pub shift: f64,
    pub order: u32,
    pub power: u32,
}

impl HarmonicFactor {
    /// `H_{scale n + shift}`
    pub fn h(scale: f64, shift: f64) -> Self {
        Self { scale, shift, order: 1, power: 1 }
    }

    pub fn order(mut self, order: u32) -> Self {
        self.order = order;
        self
    }

    pub fn power(mut self, power: u32) -> Self {
        self.power = power;
        self
    }

    fn eval(&self, n: f64) -> Result<f64> {
        let h = harmonic(HarmonicArg::new(self.scale * n + self.shift, self.order))?;
        Ok(h.value.powi(self.power as i32))
    }
}

/// `coeff * rational(n) * Π harmonics(n)`
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedPart {
    pub coeff: f64,
    pub rational: RationalFactor,
    pub harmonics: Vec<HarmonicFactor>,
}

/// `sum_{n >= start} kernel(n) * Σ parts(n)`
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedTermSpec {
    pub kernel: Kernel,
    pub parts: Vec<TwistedPart>,
    pub start: usize,
    /// Overrides the decay exponent derived from the parts, for sums whose
    /// parts cancel asymptotically.
    pub decay: Option<f64>,
}

impl TwistedTermSpec {
    pub fn new(kernel: Kernel) -> Self {
        Self { kernel, parts: Vec::new(), start: 0, decay: None }
    }

    pub fn start(mut self, start: usize) -> Self {
        self.start = start;
        self
    }

    pub fn decay(mut self, exponent: f64) -> Self {
        self.decay = Some(exponent);
        self
    }

    pub fn part(mut self, coeff: f64, rational: RationalFactor, harmonics: &[HarmonicFactor]) -> Self {
        self.parts.push(TwistedPart { coeff, rational, harmonics: harmonics.to_vec() });
        self
    }

    fn kernel_decay(&self) -> f64 {
        match self.kernel {
            Kernel::CentralSq16 | Kernel::Quarter64 => 1.0,
            Kernel::Central4 => 0.5,
            Kernel::CentralCube64 => 1.5,
            Kernel::One => 0.0,
        }
    }

    /// Power-law decay exponent of the terms, ignoring logarithms.
    pub fn exponent(&self) -> f64 {
        if let Some(p) = self.decay {
            return p;
        }
        let deficit = self.parts.iter().map(|p| p.rational.deficit()).min().unwrap_or(i64::MAX);
        self.kernel_decay() + deficit as f64
    }

    /// Term at real index `n`.
    pub fn term(&self, n: f64) -> Result<f64> {
        let mut s = 0.0;
        for part in &self.parts {
            let mut v = part.coeff * part.rational.eval(n);
            if v == 0.0 {
                continue;
            }
            for h in &part.harmonics {
                v *= h.eval(n)?;
            }
            s += v;
        }
        Ok(binomial_kernel(self.kernel, n) * s)
    }
}

/// Both summation routes of a twisted series.
#[derive(Debug, Clone, Copy)]
pub struct TwistedEvaluation {
    pub tail: ValueWithError,
    pub levin: Option<ValueWithError>,
    pub value: ValueWithError,
}

/// Evaluates a twisted series to absolute tolerance `tol`.
pub fn evaluate_twisted(spec: &TwistedTermSpec, tol: f64) -> Result<ValueWithError> {
    Ok(evaluate_twisted_routes(spec, tol, DEFAULT_MAX_TERMS)?.value)
}

/// Euler-Maclaurin summation plus a Levin-u estimate from the leading terms;
/// the error bar covers their disagreement when Levin claims to be sharper.
pub fn evaluate_twisted_routes(spec: &TwistedTermSpec, tol: f64, max_terms: usize) -> Result<TwistedEvaluation> {
    let exponent = spec.exponent();
    if !(exponent > 1.0) {
        return Err(Error::Divergent(format!("terms decay like n^-{exponent}")));
    }
    let start = spec.start as f64;
    let failure = std::cell::Cell::new(None);
    let term = |k: f64| match spec.term(k + start) {
        Ok(t) => t,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let summed = sum_with_tail(term, TailEstimate::PowerLaw { exponent }, tol, max_terms);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let tail = summed?;

    let mut partial = Vec::with_capacity(LEVIN_TERMS);
    let mut s = 0.0;
    for k in 0..LEVIN_TERMS {
        s += spec.term(k as f64 + start)?;
        partial.push(s);
    }
    let levin = levin_u_accelerate(&partial).ok();
    let value = match levin {
        Some(l) if l.abs_error < tail.abs_error => tail.widen((tail.value - l.value).abs()),
        _ => tail,
    };
    Ok(TwistedEvaluation { tail, levin, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn h(shift: f64) -> HarmonicFactor {
        HarmonicFactor::h(1.0, shift)
    }

    #[test]
    fn hn_over_2n_minus_1() {
        let spec = TwistedTermSpec::new(Kernel::CentralSq16).start(1).part(
            1.0,
            RationalFactor::inverse_of(&[(2.0, -1.0, 1)]),
            &[h(0.0)],
        );
        let v = evaluate_twisted(&spec, 1e-12).unwrap();
        assert!((v.value - (8.0 * LN_2 - 4.0) / PI).abs() < 1e-11, "{v}");
    }

    #[test]
    fn h2n_over_2n_minus_1() {
        let spec = TwistedTermSpec::new(Kernel::CentralSq16).part(
            1.0,
            RationalFactor::inverse_of(&[(2.0, -1.0, 1)]),
            &[HarmonicFactor::h(2.0, 0.0)],
        );
        let v = evaluate_twisted(&spec, 1e-12).unwrap();
        assert!((v.value - (6.0 * LN_2 - 2.0) / PI).abs() < 1e-11, "{v}");
    }

    #[test]
    fn gamma_quarter_without_harmonics() {
        // 2π Σ C(2n,n)^2 / (16^n (4n+1)) = Γ(1/4)^4 / (8π)
        let spec =
            TwistedTermSpec::new(Kernel::CentralSq16).part(1.0, RationalFactor::inverse_of(&[(4.0, 1.0, 1)]), &[]);
        let v = evaluate_twisted(&spec, 1e-12).unwrap();
        let g = crate::specfun::gamma(0.25).unwrap().value;
        assert!((2.0 * PI * v.value - g.powi(4) / (8.0 * PI)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn vanishing_harmonic_first_term() {
        let spec = TwistedTermSpec::new(Kernel::CentralSq16).part(1.0, RationalFactor::one(), &[h(0.0)]);
        assert_eq!(spec.term(0.0).unwrap(), 0.0);
        let spec = TwistedTermSpec::new(Kernel::CentralSq16).part(1.0, RationalFactor::one(), &[h(0.0)]);
        assert!(matches!(evaluate_twisted(&spec, 1e-10), Err(Error::Divergent(_))));
    }

    #[test]
    fn poly_helpers() {
        let p = Poly::linear(2.0, -1.0).mul(&Poly::linear(2.0, -1.0));
        assert_eq!(p.eval(3.0), 25.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(RationalFactor::inverse_of(&[(2.0, -1.0, 2), (1.0, 1.0, 1)]).deficit(), 3);
    }

    #[test]
    fn ln_squared_generating_function() {
        // Σ x^(n+1) H_n / (n+1) = ln^2(1-x) / 2
        for x in [0.3f64, 0.7, 0.95] {
            let ratio = x.ln();
            let term = |n: f64| {
                let hn = harmonic(HarmonicArg::new(n, 1)).unwrap().value;
                ((n + 1.0) * ratio).exp() * hn / (n + 1.0)
            };
            let s = sum_with_tail(term, TailEstimate::Geometric { ratio: x }, 1e-13, 1 << 16).unwrap();
            let e = 0.5 * (1.0 - x).ln().powi(2);
            assert!((s.value - e).abs() < 1e-10, "x={x}: {} vs {e}", s.value);
        }
    }
}
