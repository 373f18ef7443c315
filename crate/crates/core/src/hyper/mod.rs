//! Generalized hypergeometric series `pFq` with convergence classification,
//! plus the central-binomial generating functions built on them.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::elliptic::ellip_k_comp;
use crate::error::{Error, MapEstimate, Result};
use crate::numerics::{alternating_limit, em_power_tail, work, CompensatedSum, ValueWithError, EPS};
use crate::specfun::{ln_gamma_ratio, ln_one_plus_sqrt2};

/// Hard cap on summed terms for interior arguments.
pub const MAX_TERMS: usize = 10_000_000;

/// Rising factorial `(x)_n`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// Parameters and argument of `pFq[a; b; x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub x: f64,
}

/// How the series converges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convergence {
    /// Polynomial; `last` is the final nonzero index.
    Terminating { last: usize },
    /// Terms shrink at least geometrically.
    Interior,
    /// `x = 1`, terms decay like `n^-(1 + excess)`.
    UnitPositive { excess: f64 },
    /// `x = -1`, alternating terms of size `n^-(1 + excess)`.
    UnitNegative { excess: f64 },
}

fn nonpositive_integer(v: f64) -> Option<usize> {
    (v <= 0.0 && v == v.round() && v > -1e9).then(|| (-v) as usize)
}

impl HypergeometricSpec {
    pub fn new(upper: &[f64], lower: &[f64], x: f64) -> Self {
        Self { upper: upper.to_vec(), lower: lower.to_vec(), x }
    }

    /// Parses `"a1,a2;b1,b2;x"`; entries may be decimals or fractions `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::outside(format!("expected 'upper;lower;x', got '{text}'")));
        }
        let list = |s: &str| -> Result<Vec<f64>> {
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_number).collect()
        };
        Ok(Self { upper: list(parts[0])?, lower: list(parts[1])?, x: parse_number(parts[2].trim())? })
    }

    /// `sum(lower) - sum(upper)`.
    pub fn excess(&self) -> f64 {
        self.lower.iter().sum::<f64>() - self.upper.iter().sum::<f64>()
    }

    /// Ratio `t_{n+1} / t_n`.
    pub fn term_ratio(&self, n: usize) -> f64 {
        let k = n as f64;
        let num: f64 = self.upper.iter().map(|a| a + k).product();
        let den: f64 = self.lower.iter().map(|b| b + k).product();
        num / den * self.x / (k + 1.0)
    }

    /// Term `n` from Pochhammer products.
    pub fn term_direct(&self, n: usize) -> f64 {
        let num: f64 = self.upper.iter().map(|&a| pochhammer(a, n)).product();
        let den: f64 = self.lower.iter().map(|&b| pochhammer(b, n)).product();
        num / den * self.x.powi(n as i32) / pochhammer(1.0, n)
    }

    pub fn classify(&self) -> Result<Convergence> {
        let stop = self.upper.iter().filter_map(|&a| nonpositive_integer(a)).min();
        let pole = self.lower.iter().filter_map(|&b| nonpositive_integer(b)).min();
        if self.x == 0.0 {
            return Ok(Convergence::Terminating { last: 0 });
        }
        if let Some(last) = stop {
            return match pole {
                Some(k) if k < last => Err(Error::ParameterPole(-(k as f64))),
                _ => Ok(Convergence::Terminating { last }),
            };
        }
        if let Some(k) = pole {
            return Err(Error::ParameterPole(-(k as f64)));
        }
        if !self.x.is_finite() || self.upper.iter().chain(&self.lower).any(|v| !v.is_finite()) {
            return Err(Error::outside("non-finite hypergeometric parameter"));
        }
        let (p, q) = (self.upper.len(), self.lower.len());
        if p <= q {
            return Ok(Convergence::Interior);
        }
        if p > q + 1 {
            return Err(Error::Divergent(format!("{p}F{q} with nonzero argument")));
        }
        let ax = self.x.abs();
        let s = self.excess();
        if ax < 1.0 {
            Ok(Convergence::Interior)
        } else if ax > 1.0 {
            Err(Error::Divergent(format!("|x| = {ax} > 1")))
        } else if self.x > 0.0 {
            if s > 0.0 {
                Ok(Convergence::UnitPositive { excess: s })
            } else {
                Err(Error::Divergent(format!("x = 1 with parameter excess {s} <= 0")))
            }
        } else if s > -1.0 {
            Ok(Convergence::UnitNegative { excess: s })
        } else {
            Err(Error::Divergent(format!("x = -1 with parameter excess {s} <= -1")))
        }
    }

    /// Largest parameter magnitude, used to place the tail past any sign changes.
    fn param_scale(&self) -> f64 {
        self.upper.iter().chain(&self.lower).fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl fmt::Display for HypergeometricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "{}F{}[{}; {}; {}]", self.upper.len(), self.lower.len(), join(&self.upper), join(&self.lower), self.x)
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let bad = || Error::outside(format!("cannot parse number '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Evaluates `pFq` to absolute accuracy `tol`.
pub fn pfq(spec: &HypergeometricSpec, tol: f64) -> Result<ValueWithError> {
    match spec.classify()? {
        Convergence::Terminating { last } => terminating(spec, last),
        Convergence::Interior => interior(spec, tol),
        Convergence::UnitPositive { excess } => unit_positive(spec, excess, tol),
        Convergence::UnitNegative { .. } => unit_negative(spec, tol),
    }
}

/// Term-recurrence summation state.
struct Walker<'a> {
    spec: &'a HypergeometricSpec,
    /// Index of `term`.
    n: usize,
    term: f64,
    sum: CompensatedSum,
    weighted_sq: f64,
    plain_sq: f64,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a HypergeometricSpec) -> Self {
        Self { spec, n: 0, term: 1.0, sum: CompensatedSum::new(), weighted_sq: 0.0, plain_sq: 0.0 }
    }

    /// Adds the current term and moves to the next one.
    fn step(&mut self) -> Result<()> {
        if !self.term.is_finite() {
            return Err(Error::NonFiniteTerm { index: self.n });
        }
        self.sum.add(self.term);
        self.weighted_sq += (self.term * (self.n + 1) as f64).powi(2);
        self.plain_sq += self.term * self.term;
        self.term *= self.spec.term_ratio(self.n);
        self.n += 1;
        Ok(())
    }

    fn advance_to(&mut self, n: usize) -> Result<()> {
        while self.n < n {
            self.step()?;
        }
        Ok(())
    }

    fn ops(&self) -> f64 {
        (self.spec.upper.len() + self.spec.lower.len() + 2) as f64
    }

    /// A relative slip in term `j` shifts all later terms, costing about
    /// `eps * |tail_j|`; `(j+1) |t_j|` bounds the tail for the series here.
    fn rounding(&self) -> f64 {
        EPS * self.ops() * self.weighted_sq.sqrt()
    }

    /// For alternating terms the tail is bounded by the term itself.
    fn rounding_alternating(&self) -> f64 {
        EPS * self.ops() * self.plain_sq.sqrt()
    }

    fn result(&self) -> ValueWithError {
        self.sum.result().widen(self.rounding())
    }
}

fn terminating(spec: &HypergeometricSpec, last: usize) -> Result<ValueWithError> {
    let mut w = Walker::new(spec);
    w.advance_to(last + 1)?;
    work::record(last as u64 + 1);
    Ok(w.result())
}

fn interior(spec: &HypergeometricSpec, tol: f64) -> Result<ValueWithError> {
    let settle = spec.param_scale().ceil() as usize + 2;
    let ax = spec.x.abs();
    let balanced = spec.upper.len() == spec.lower.len() + 1;
    let mut w = Walker::new(spec);
    while w.n < MAX_TERMS {
        let ratio = spec.term_ratio(w.n);
        w.step()?;
        if w.n > settle {
            let r = if balanced { ratio.abs().max(ax) } else { ratio.abs() };
            if r < 1.0 {
                let bound = w.term.abs() / (1.0 - r);
                if bound <= tol.max(EPS * w.sum.value().abs()) * 0.5 {
                    work::record(w.n as u64);
                    return Ok(w.result().widen(bound));
                }
            }
        }
    }
    work::record(MAX_TERMS as u64);
    Err(Error::ToleranceNotReached { target: tol, best: w.result().widen(f64::INFINITY) })
}

/// Head summed by recurrence, tail by Euler-Maclaurin on the Γ-ratio
/// continuation anchored at the first omitted term.
fn unit_positive(spec: &HypergeometricSpec, excess: f64, tol: f64) -> Result<ValueWithError> {
    let mut lower = spec.lower.clone();
    lower.push(1.0);
    let ln_ratio = |n: f64| -> f64 { spec.upper.iter().zip(&lower).map(|(&a, &b)| ln_gamma_ratio(n, a, b)).sum() };
    let exponent = 1.0 + excess;
    let estimate = |w: &Walker| -> Result<ValueWithError> {
        let (n, t) = (w.n as f64, w.term);
        let anchor = ln_ratio(n);
        let tail = em_power_tail(&|k: f64| t * (ln_ratio(k) - anchor).exp(), n, exponent)?;
        // the anchor carries the accumulated relative slip of the recurrence
        let slip = EPS * w.ops() * n.sqrt() * tail.value.abs();
        Ok(w.result() + tail.widen(slip))
    };
    let mut w = Walker::new(spec);
    let mut n = (64.0f64).max(4.0 * spec.param_scale() + 16.0).ceil() as usize;
    w.advance_to(n)?;
    let mut prev = estimate(&w)?;
    loop {
        let n2 = 2 * n;
        w.advance_to(n2)?;
        let cur = estimate(&w)?;
        let est = cur.widen((cur.value - prev.value).abs());
        if est.abs_error <= tol {
            work::record(n2 as u64);
            return Ok(est);
        }
        if n2 >= 1 << 15 || n2 >= MAX_TERMS {
            work::record(n2 as u64);
            return Err(Error::ToleranceNotReached { target: tol, best: est.min_error(prev) });
        }
        prev = est;
        n = n2;
    }
}

const AVERAGING_DEPTH: usize = 28;

fn unit_negative(spec: &HypergeometricSpec, tol: f64) -> Result<ValueWithError> {
    let mut start = (16.0f64).max(2.0 * spec.param_scale() + 8.0).ceil() as usize;
    let mut partial = Vec::new();
    let mut w = Walker::new(spec);
    let mut best: Option<ValueWithError> = None;
    loop {
        let hi = 2 * start + AVERAGING_DEPTH + 1;
        if hi > 1 << 16 {
            let best = best.unwrap_or(ValueWithError::new(w.sum.value(), f64::INFINITY));
            return Err(Error::ToleranceNotReached { target: tol, best });
        }
        while partial.len() < hi {
            w.step()?;
            partial.push(w.sum.value());
        }
        let a = alternating_limit(&partial[start..start + AVERAGING_DEPTH + 1]);
        let b = alternating_limit(&partial[2 * start..2 * start + AVERAGING_DEPTH + 1]);
        let rounding = w.rounding_alternating() + 4.0 * EPS * b.value.abs();
        let est = ValueWithError::new(b.value, (a.value - b.value).abs() + b.abs_error + rounding);
        if est.abs_error <= tol {
            work::record(hi as u64);
            return Ok(est);
        }
        best = Some(match best {
            Some(prev) => est.min_error(prev),
            None => est,
        });
        start *= 2;
    }
}

/// `sum C(4n,2n) x^(2n) / 16^n = (1/sqrt(1+x) + 1/sqrt(1-x)) / 2`.
pub fn gf_c4n2n(x: f64) -> Result<ValueWithError> {
    if !(x.abs() < 1.0) {
        return Err(Error::Divergent(format!("generating function pole at x = {x}")));
    }
    let v = 0.5 * (1.0 / (1.0 + x).sqrt() + 1.0 / (1.0 - x).sqrt());
    Ok(ValueWithError::new(v, 4.0 * EPS * v))
}

/// Both routes for `sum C(4n,2n) C(2n,n) y^n / 64^n`.
#[derive(Debug, Clone, Copy)]
pub struct QuarterGf {
    pub series: ValueWithError,
    pub elliptic: ValueWithError,
    pub value: ValueWithError,
}

/// `sum C(4n,2n) C(2n,n) y^n / 64^n`, by `2F1[1/4, 3/4; 1; y]` and by the
/// closed form `2 K(sqrt(2 sqrt y / (1 + sqrt y))) / (pi sqrt(1 + sqrt y))`.
pub fn gf_c4n2n_c2nn(y: f64) -> Result<QuarterGf> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::outside(format!("y = {y} not in [0, 1)")));
    }
    let series = pfq(&HypergeometricSpec::new(&[0.25, 0.75], &[1.0], y), 1e-15)?;
    let r = y.sqrt();
    let k = ellip_k_comp((1.0 - r) / (1.0 + r))?;
    let elliptic = k.scale(2.0 / (PI * (1.0 + r).sqrt()));
    let slack = 1e-13 * series.value.abs();
    if !series.agrees_with(&elliptic, slack) {
        return Err(Error::RouteDisagreement { a: series, b: elliptic });
    }
    Ok(QuarterGf { series, elliptic, value: series.reconcile(elliptic) })
}

/// `sum C(4n,2n) C(2n,n) / (64^n (2n + m))` for odd `m`, as
/// `3F2[1/4, 3/4, m/2; 1, m/2 + 1; 1] / m`.
pub fn quarter_integer_3f2_family(m: u32) -> Result<ValueWithError> {
    if m.is_multiple_of(2) || m > 9 {
        return Err(Error::outside(format!("m = {m} must be odd and at most 9")));
    }
    let h = m as f64 / 2.0;
    let spec = HypergeometricSpec::new(&[0.25, 0.75, h], &[1.0, h + 1.0], 1.0);
    pfq(&spec, 1e-14).map_estimate(|v| v.scale(1.0 / m as f64))
}

/// Closed forms of the quarter-integer family for `m` in {1, 3, 5}.
pub fn quarter_integer_closed_form(m: u32) -> Option<f64> {
    let l = ln_one_plus_sqrt2();
    match m {
        1 => Some(4.0 / PI * l),
        3 => Some(4.0 * SQRT_2 / (15.0 * PI) + 16.0 / (15.0 * PI) * l),
        5 => Some(68.0 * SQRT_2 / (315.0 * PI) + 64.0 / (105.0 * PI) * l),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::catalan_g;

    fn f(upper: &[f64], lower: &[f64], x: f64) -> ValueWithError {
        pfq(&HypergeometricSpec::new(upper, lower, x), 1e-14).unwrap()
    }

    #[test]
    fn palindromic_3f2() {
        let v = f(&[0.25, 0.5, 0.75], &[1.0, 1.5], 1.0);
        let rhs = 8.0 / PI * (PI / 8.0).tan().atanh();
        assert!((v.value - rhs).abs() < 1e-13, "{v} vs {rhs}");
        assert!((rhs - 1.122_199_704_678_360_254).abs() < 1e-15);
    }

    #[test]
    fn parbelos_3f2() {
        let v = f(&[-0.5, 0.25, 0.75], &[0.5, 1.0], 1.0);
        let rhs = (SQRT_2 + ln_one_plus_sqrt2()) / PI;
        assert!((v.value - rhs).abs() < 1e-13, "{v} vs {rhs}");
    }

    #[test]
    fn zero_upper_parameter_is_one() {
        assert_eq!(f(&[0.0, 0.3], &[2.5], 0.7).value, 1.0);
        assert_eq!(f(&[-0.5, 1.0, 0.0], &[2.5, 2.0], -1.0).value, 1.0);
    }

    #[test]
    fn elliptic_k_from_2f1() {
        let k = 0.6f64;
        let v = f(&[0.5, 0.5], &[1.0], k * k);
        let agm = crate::elliptic::ellip_k(k).unwrap();
        assert!((v.value * PI / 2.0 - agm.value).abs() < 1e-14);
    }

    #[test]
    fn catalan_4f3() {
        let v = f(&[0.5, 0.5, 1.0, 1.0], &[2.0, 2.0, 2.0], 1.0);
        let g = catalan_g().value;
        let rhs = 16.0 * (-2.0 * g + 3.0 + PI * (2f64.ln() - 1.0)) / PI;
        assert!((v.value - rhs).abs() < 1e-13, "{v} vs {rhs}");
    }

    #[test]
    fn alternating_unit_argument() {
        // 2F1[1, 1; 2; -1] = ln 2
        let v = f(&[1.0, 1.0], &[2.0], -1.0);
        assert!((v.value - 2f64.ln()).abs() < 1e-14, "{v}");
    }

    #[test]
    fn classification() {
        let c = |u: &[f64], l: &[f64], x| HypergeometricSpec::new(u, l, x).classify();
        assert_eq!(c(&[-3.0, 0.5], &[1.0], 0.3), Ok(Convergence::Terminating { last: 3 }));
        assert_eq!(c(&[-3.0, 0.5], &[-3.0], 0.3), Ok(Convergence::Terminating { last: 3 }));
        assert_eq!(c(&[-3.0, 0.5], &[-2.0], 0.3), Err(Error::ParameterPole(-2.0)));
        assert_eq!(c(&[0.5, 0.5], &[-1.0], 0.3), Err(Error::ParameterPole(-1.0)));
        assert!(matches!(c(&[0.5, 0.5], &[1.0], 1.0), Err(Error::Divergent(_))));
        assert!(matches!(c(&[0.5, 0.5], &[1.0], 1.5), Err(Error::Divergent(_))));
        assert_eq!(c(&[0.5], &[], 0.5), Ok(Convergence::Interior));
        assert_eq!(c(&[], &[1.5], 40.0), Ok(Convergence::Interior));
    }

    #[test]
    fn exponential_series() {
        let v = f(&[], &[], 3.0);
        assert!((v.value - 3f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn parse_fractions() {
        let s = HypergeometricSpec::parse("1/4, 1/2, 3/4; 1, 3/2; 1").unwrap();
        assert_eq!(s, HypergeometricSpec::new(&[0.25, 0.5, 0.75], &[1.0, 1.5], 1.0));
        assert!(HypergeometricSpec::parse("1,2;3").is_err());
        assert!(HypergeometricSpec::parse("a;1;0.5").is_err());
        let empty = HypergeometricSpec::parse(";;0.5").unwrap();
        assert!(empty.upper.is_empty() && empty.lower.is_empty());
    }

    #[test]
    fn gf42_closed_form_matches_series() {
        assert_eq!(gf_c4n2n(0.0).unwrap().value, 1.0);
        let x = 0.5f64;
        let mut s = 0.0;
        let mut c = 1.0;
        for n in 0..60 {
            s += c * x.powi(2 * n);
            let k = n as f64;
            c *= (4.0 * k + 1.0) * (4.0 * k + 2.0) * (4.0 * k + 3.0) * (4.0 * k + 4.0)
                / ((2.0 * k + 1.0) * (2.0 * k + 2.0) * (2.0 * k + 1.0) * (2.0 * k + 2.0) * 16.0);
        }
        assert!((gf_c4n2n(x).unwrap().value - s).abs() < 1e-14);
        assert!(gf_c4n2n(1.0).is_err() && gf_c4n2n(-1.0).is_err());
    }

    #[test]
    fn quarter_gf_routes() {
        assert_eq!(gf_c4n2n_c2nn(0.0).unwrap().value.value, 1.0);
        let g = gf_c4n2n_c2nn(0.25).unwrap();
        assert!((g.series.value - g.elliptic.value).abs() < 1e-11);
        let g = gf_c4n2n_c2nn(0.81).unwrap();
        assert!((g.series.value - g.elliptic.value).abs() < 1e-9);
    }

    #[test]
    fn quarter_family() {
        for m in [1, 3, 5] {
            let v = quarter_integer_3f2_family(m).unwrap();
            let rhs = quarter_integer_closed_form(m).unwrap();
            assert!((v.value - rhs).abs() < 1e-13, "m={m}: {v} vs {rhs}");
        }
        assert!(quarter_integer_3f2_family(2).is_err());
    }
}
