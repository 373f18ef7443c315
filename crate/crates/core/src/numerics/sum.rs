use super::quad::{tanh_sinh_integrate_nodes, Endpoints};
use super::value::ValueWithError;
use super::EPS;
use crate::error::{Error, Result};

/// Running Neumaier sum with a rounding-error bound.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_total: f64,
    count: usize,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_total += x.abs();
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn error_bound(&self) -> f64 {
        EPS * self.value().abs() + self.count as f64 * EPS * EPS * self.abs_total
    }

    pub fn result(&self) -> ValueWithError {
        ValueWithError::new(self.value(), self.error_bound())
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Neumaier-compensated sum of a finite slice.
pub fn compensated_sum(terms: &[f64]) -> Result<ValueWithError> {
    let mut acc = CompensatedSum::new();
    for (index, &t) in terms.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFiniteTerm { index });
        }
        acc.add(t);
    }
    Ok(acc.result())
}

/// Asymptotic model for the discarded tail of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEstimate {
    /// Terms shrink by roughly `ratio` per step, `0 < |ratio| < 1`.
    Geometric { ratio: f64 },
    /// Terms decay like `n^-exponent` (possibly times powers of `ln n`),
    /// `exponent > 1`; the term function must be smooth in a real index.
    PowerLaw { exponent: f64 },
    /// Terms alternate in sign with smoothly decaying magnitude.
    Alternating,
    /// Finite sum: terms are summed up to `max_terms` with no correction.
    None,
}

impl TailEstimate {
    fn validate(&self) -> Result<()> {
        match *self {
            TailEstimate::Geometric { ratio } if !(ratio.abs() < 1.0 && ratio != 0.0) => {
                Err(Error::outside(format!("geometric ratio {ratio} not in (-1, 1)")))
            }
            TailEstimate::PowerLaw { exponent } if !(exponent > 1.0) => {
                Err(Error::Divergent(format!("power-law exponent {exponent} <= 1")))
            }
            _ => Ok(()),
        }
    }
}

fn checked(term: &impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    super::work::record(1);
    let t = term(n as f64);
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NonFiniteTerm { index: n })
    }
}

/// Sums `term(0) + term(1) + ...` to absolute accuracy `target_tol`.
///
/// The term function receives the index as `f64` so that power-law tails
/// can be integrated over a real variable.
pub fn sum_with_tail(
    term: impl Fn(f64) -> f64,
    tail: TailEstimate,
    target_tol: f64,
    max_terms: usize,
) -> Result<ValueWithError> {
    tail.validate()?;
    match tail {
        TailEstimate::None => {
            let mut acc = CompensatedSum::new();
            for n in 0..max_terms {
                acc.add(checked(&term, n)?);
            }
            Ok(acc.result())
        }
        TailEstimate::Geometric { ratio } => sum_geometric(&term, ratio, target_tol, max_terms),
        TailEstimate::Alternating => sum_alternating(&term, target_tol, max_terms),
        TailEstimate::PowerLaw { exponent } => sum_power_law(&term, exponent, target_tol, max_terms),
    }
}

fn sum_geometric(term: &impl Fn(f64) -> f64, ratio: f64, tol: f64, max_terms: usize) -> Result<ValueWithError> {
    let mut acc = CompensatedSum::new();
    let mut prev = f64::NAN;
    for n in 0..max_terms {
        let t = checked(term, n)?;
        let bound = t.abs() / (1.0 - ratio.abs());
        if n >= 2 && bound <= tol {
            let measured = t / prev;
            let rho = if measured.abs() < 1.0 { measured } else { ratio };
            let correction = t / (1.0 - rho);
            let model = (t / (1.0 - rho) - t / (1.0 - ratio)).abs();
            acc.add(correction);
            return Ok(acc.result().widen(model.min(bound)));
        }
        acc.add(t);
        prev = t;
    }
    Err(Error::ToleranceNotReached { target: tol, best: acc.result() })
}

/// Repeated averaging of consecutive partial sums (Euler transform).
/// Returns the final average and the change made by its last level.
pub fn alternating_limit(partial: &[f64]) -> ValueWithError {
    let mut row = partial.to_vec();
    let mut last_step = f64::INFINITY;
    while row.len() > 1 {
        let next: Vec<f64> = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        last_step = (next[0] - row[0]).abs();
        row = next;
    }
    let v = row[0];
    let err = if last_step.is_finite() { last_step } else { v.abs() };
    ValueWithError::new(v, err + 4.0 * EPS * v.abs())
}

const AVERAGING_DEPTH: usize = 24;

fn sum_alternating(term: &impl Fn(f64) -> f64, tol: f64, max_terms: usize) -> Result<ValueWithError> {
    let mut partial = Vec::new();
    let mut acc = CompensatedSum::new();
    let mut extend_to = |len: usize, partial: &mut Vec<f64>| -> Result<()> {
        while partial.len() < len {
            acc.add(checked(term, partial.len())?);
            partial.push(acc.value());
        }
        Ok(())
    };
    let mut start = 16usize;
    let mut best: Option<ValueWithError> = None;
    loop {
        let hi = 2 * start + AVERAGING_DEPTH + 1;
        if hi > max_terms {
            let best = best.unwrap_or(ValueWithError::new(partial.last().copied().unwrap_or(0.0), f64::INFINITY));
            return Err(Error::ToleranceNotReached { target: tol, best });
        }
        extend_to(hi, &mut partial)?;
        let a = alternating_limit(&partial[start..start + AVERAGING_DEPTH + 1]);
        let b = alternating_limit(&partial[2 * start..2 * start + AVERAGING_DEPTH + 1]);
        let est = ValueWithError::new(b.value, (a.value - b.value).abs() + b.abs_error);
        if est.abs_error <= tol {
            return Ok(est);
        }
        best = Some(est);
        start *= 2;
    }
}

/// Euler-Maclaurin estimate of `sum_{k >= n} term(k)` for a term decaying
/// like `k^-exponent` that is smooth on `[n/2, inf)`.
pub fn em_power_tail(term: &impl Fn(f64) -> f64, n: f64, exponent: f64) -> Result<ValueWithError> {
    let alpha = (1.0 / (exponent - 1.0)).clamp(1.0, 4.0);
    let u_min = (1e-40f64).powf(1.0 / alpha);
    let integrand = |node: super::Node| {
        let u = node.from_a;
        if u < u_min {
            return 0.0;
        }
        let lu = u.ln();
        let x = n * (-alpha * lu).exp();
        term(x) * alpha * n * (-(alpha + 1.0) * lu).exp()
    };
    // a noisy continuation may stall the quadrature; its error bar still holds
    let integral = match tanh_sinh_integrate_nodes(integrand, 0.0, 1.0, Endpoints::Both, 1e-14) {
        Err(Error::QuadratureStall { best }) => best,
        other => other?.value,
    };

    let f = |x: f64| term(x);
    let h1 = n / 128.0;
    let d1 = (-f(n + 2.0 * h1) + 8.0 * f(n + h1) - 8.0 * f(n - h1) + f(n - 2.0 * h1)) / (12.0 * h1);
    let h3 = n / 32.0;
    let d3 = (f(n + 2.0 * h3) - 2.0 * f(n + h3) + 2.0 * f(n - h3) - f(n - 2.0 * h3)) / (2.0 * h3 * h3 * h3);
    let f0 = f(n);
    if !(d1.is_finite() && d3.is_finite() && f0.is_finite()) {
        return Err(Error::NonFiniteTerm { index: n as usize });
    }
    let value = integral.value + 0.5 * f0 - d1 / 12.0 + d3 / 720.0;
    let p = exponent;
    let remainder = (d3 / 720.0).abs() * (p + 3.0) * (p + 4.0) / (42.0 * n * n);
    let fd = (d1 / 12.0).abs() * 1e-9 + (d3 / 720.0).abs() * 1e-4;
    Ok(ValueWithError::new(value, integral.abs_error + remainder + fd + 4.0 * EPS * value.abs()))
}

fn sum_power_law(term: &impl Fn(f64) -> f64, exponent: f64, tol: f64, max_terms: usize) -> Result<ValueWithError> {
    let mut acc = CompensatedSum::new();
    let mut n = 64usize.min(max_terms / 2).max(8);
    let mut next = 0usize;
    let mut advance = |to: usize, acc: &mut CompensatedSum| -> Result<()> {
        while next < to {
            acc.add(checked(term, next)?);
            next += 1;
        }
        Ok(())
    };
    advance(n, &mut acc)?;
    let mut prev = acc.result() + em_power_tail(term, n as f64, exponent)?;
    loop {
        let n2 = 2 * n;
        if n2 > max_terms {
            return Err(Error::ToleranceNotReached { target: tol, best: prev });
        }
        advance(n2, &mut acc)?;
        let cur = acc.result() + em_power_tail(term, n2 as f64, exponent)?;
        let est = cur.widen((cur.value - prev.value).abs());
        if est.abs_error <= tol {
            return Ok(est);
        }
        prev = est;
        n = n2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const CATALAN: f64 = 0.915_965_594_177_219_015_05;

    #[test]
    fn compensated_tiny_addends() {
        let mut v = vec![1.0];
        v.extend(std::iter::repeat_n(1e-16, 10_000));
        let s = compensated_sum(&v).unwrap();
        assert!((s.value - (1.0 + 1e-12)).abs() <= s.abs_error.max(f64::EPSILON));
    }

    #[test]
    fn compensated_empty_and_nonfinite() {
        let s = compensated_sum(&[]).unwrap();
        assert_eq!((s.value, s.abs_error), (0.0, 0.0));
        assert_eq!(compensated_sum(&[1.0, f64::NAN]), Err(Error::NonFiniteTerm { index: 1 }));
    }

    #[test]
    fn compensated_inverse_squares() {
        let terms: Vec<f64> = (1..=1_000_000).map(|k| 1.0 / (k as f64 * k as f64)).collect();
        let s = compensated_sum(&terms).unwrap();
        // zeta(2) minus the Euler-Maclaurin tail beyond 10^6
        let n = 1e6f64;
        let tail = 1.0 / n - 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n);
        assert!((s.value - (PI * PI / 6.0 - tail)).abs() < 1e-12);
    }

    #[test]
    fn power_law_inverse_squares() {
        let s =
            sum_with_tail(|n| 1.0 / ((n + 1.0) * (n + 1.0)), TailEstimate::PowerLaw { exponent: 2.0 }, 1e-12, 1 << 16)
                .unwrap();
        assert!((s.value - PI * PI / 6.0).abs() < 1e-12, "{s}");
        assert!(s.abs_error <= 1e-12);
    }

    #[test]
    fn power_law_log_terms() {
        // sum ln(n+2)/(n+2)^2 = -zeta'(2) - 0
        let s = sum_with_tail(
            |n| (n + 2.0).ln() / ((n + 2.0) * (n + 2.0)),
            TailEstimate::PowerLaw { exponent: 2.0 },
            1e-12,
            1 << 16,
        )
        .unwrap();
        assert!((s.value - 0.937_548_254_315_843_753_7).abs() < 1e-12, "{s}");
    }

    #[test]
    fn alternating_catalan() {
        let s = sum_with_tail(
            |n| {
                let sign = if (n as u64).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign / ((2.0 * n + 1.0) * (2.0 * n + 1.0))
            },
            TailEstimate::Alternating,
            1e-14,
            4096,
        )
        .unwrap();
        assert!((s.value - CATALAN).abs() < 2e-15, "{s}");
    }

    #[test]
    fn geometric_closed_form() {
        let r = 3.0 - 2.0 * 2f64.sqrt();
        let s = sum_with_tail(|n| r.powf(n), TailEstimate::Geometric { ratio: r }, 1e-15, 1000).unwrap();
        assert!((s.value - 1.0 / (1.0 - r)).abs() < 1e-15);
    }

    #[test]
    fn budget_exhaustion_reports_best() {
        let e = sum_with_tail(|n| 1.0 / (n + 1.0).powf(1.1), TailEstimate::Alternating, 1e-14, 40);
        assert!(matches!(e, Err(Error::ToleranceNotReached { .. })));
    }

    #[test]
    fn invalid_tails_rejected() {
        assert!(sum_with_tail(|_| 0.0, TailEstimate::PowerLaw { exponent: 1.0 }, 1e-3, 10).is_err());
        assert!(sum_with_tail(|_| 0.0, TailEstimate::Geometric { ratio: 1.5 }, 1e-3, 10).is_err());
    }
}
