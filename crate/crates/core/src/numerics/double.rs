use rayon::prelude::*;

use super::sum::{sum_with_tail, CompensatedSum, TailEstimate};
use super::value::ValueWithError;
use super::EPS;
use crate::error::{Error, Result};

/// How to evaluate `sum_{m,n >= 0} term(m, n)`.
#[derive(Clone, Copy)]
pub enum DoubleSumStrategy<'a> {
    /// Sum the diagonals `m + n <= max_diagonal` and extrapolate the
    /// remainder from a least-squares fit of the diagonal partial sums.
    Diagonal { max_diagonal: usize },
    /// The inner sum is known in closed form: `reduced(m)` equals
    /// `sum_n term(m, n)`; the outer sum uses `tail`.
    ReduceToSingle { reduced: &'a (dyn Fn(f64) -> f64 + Sync), tail: TailEstimate, max_terms: usize },
}

impl std::fmt::Debug for DoubleSumStrategy<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DoubleSumStrategy::Diagonal { max_diagonal } => {
                write!(f, "Diagonal {{ max_diagonal: {max_diagonal} }}")
            }
            DoubleSumStrategy::ReduceToSingle { tail, .. } => write!(f, "ReduceToSingle {{ {tail:?} }}"),
        }
    }
}

pub fn double_sum(
    term: impl Fn(usize, usize) -> f64 + Sync,
    strategy: DoubleSumStrategy<'_>,
    tol: f64,
) -> Result<ValueWithError> {
    match strategy {
        DoubleSumStrategy::ReduceToSingle { reduced, tail, max_terms } => sum_with_tail(reduced, tail, tol, max_terms),
        DoubleSumStrategy::Diagonal { max_diagonal } => diagonal(&term, max_diagonal, tol),
    }
}

fn diagonal(term: &(impl Fn(usize, usize) -> f64 + Sync), n: usize, tol: f64) -> Result<ValueWithError> {
    if n < 64 {
        return Err(Error::outside("diagonal truncation needs at least 64 diagonals"));
    }
    let diagonals: Vec<Result<ValueWithError>> = (0..=n)
        .into_par_iter()
        .map(|d| {
            let mut acc = CompensatedSum::new();
            for m in 0..=d {
                let t = term(m, d - m);
                if !t.is_finite() {
                    return Err(Error::NonFiniteTerm { index: d });
                }
                acc.add(t);
            }
            Ok(acc.result())
        })
        .collect();
    super::work::record(((n + 1) * (n + 2) / 2) as u64);
    let mut partial = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    let mut round = 0.0;
    for s in diagonals {
        let s = s?;
        acc.add(s.value);
        round += s.abs_error;
        partial.push(acc.value());
    }
    let raw = ValueWithError::new(acc.value(), acc.error_bound() + round);

    let s_hi = partial[n] - partial[n - 1];
    let s_mid = partial[n / 2] - partial[n / 2 - 1];
    if s_hi == 0.0 && s_mid == 0.0 {
        return Ok(raw);
    }
    let slope = -(s_hi.abs() / s_mid.abs()).ln() / 2f64.ln();
    if !(slope > 1.0) {
        return Err(Error::Divergent(format!("diagonal sums decay like d^-{slope:.2}")));
    }
    let q = ((slope - 1.0) * 2.0).round().max(1.0) / 2.0;

    // model error: spread over fit windows and the change from n/2 to n
    let fine = tail_fit(&partial, n, q, 3, n / 16)?;
    let narrow = tail_fit(&partial, n, q, 3, n / 8)?;
    let half = tail_fit(&partial, n / 2, q, 3, n / 32)?;
    let model = (fine - narrow).abs().max((fine - half).abs());
    let value = ValueWithError::new(fine, raw.abs_error + model + 8.0 * EPS * fine.abs());
    if value.abs_error > tol {
        return Err(Error::ToleranceNotReached { target: tol, best: value });
    }
    Ok(value)
}

/// Fits `D(d) = L + sum_{j<2, k<logs} c_jk d^-(q+j) ln^k d` over
/// `d in [lo, n]` and returns `L`.
fn tail_fit(partial: &[f64], n: usize, q: f64, logs: usize, lo: usize) -> Result<f64> {
    let samples = 80usize;
    let ratio = (n as f64 / lo as f64).powf(1.0 / (samples - 1) as f64);
    let mut ds: Vec<usize> = (0..samples).map(|i| (lo as f64 * ratio.powi(i as i32)).round() as usize).collect();
    ds.dedup();
    let cols = 1 + 2 * logs;
    let rows: Vec<Vec<f64>> = ds
        .iter()
        .map(|&d| {
            let x = d as f64;
            let l = x.ln();
            let mut r = vec![1.0];
            for j in 0..2 {
                let base = x.powf(-(q + j as f64));
                for k in 0..logs {
                    r.push(base * l.powi(k as i32));
                }
            }
            r
        })
        .collect();
    let rhs: Vec<f64> = ds.iter().map(|&d| partial[d]).collect();
    let coef = least_squares(rows, rhs, cols)?;
    Ok(coef[0])
}

/// Householder QR least squares with column equilibration.
fn least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, cols: usize) -> Result<Vec<f64>> {
    let m = a.len();
    if m < cols {
        return Err(Error::AccelerationBreakdown("too few samples for tail fit"));
    }
    let scale: Vec<f64> =
        (0..cols).map(|j| a.iter().map(|r| r[j].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)).collect();
    for r in a.iter_mut() {
        for j in 0..cols {
            r[j] /= scale[j];
        }
    }
    for k in 0..cols {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::AccelerationBreakdown("rank-deficient tail fit"));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vnorm2;
            for (row, vi) in a[k..m].iter_mut().zip(&v) {
                row[j] -= f * vi;
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let s: f64 = ((k + 1)..cols).map(|j| a[k][j] * x[j]).sum();
        if a[k][k] == 0.0 {
            return Err(Error::AccelerationBreakdown("singular tail fit"));
        }
        x[k] = (b[k] - s) / a[k][k];
    }
    Ok(x.iter().zip(&scale).map(|(v, s)| v / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_geometric_series() {
        let v = double_sum(
            |m, n| 0.5f64.powi(m as i32) * 0.5f64.powi(n as i32),
            DoubleSumStrategy::Diagonal { max_diagonal: 256 },
            1e-12,
        )
        .unwrap();
        assert!((v.value - 4.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn power_law_diagonals() {
        // sum_{m,n} 1/((m+1)^2 (n+1)^2) = zeta(2)^2
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let v = double_sum(
            |m, n| 1.0 / (((m + 1) * (m + 1)) as f64 * ((n + 1) * (n + 1)) as f64),
            DoubleSumStrategy::Diagonal { max_diagonal: 4000 },
            1e-6,
        )
        .unwrap();
        assert!((v.value - z2 * z2).abs() < 1e-6, "{v}");
    }

    #[test]
    fn reduce_to_single() {
        let reduced = |m: f64| 0.5f64.powf(m) * 2.0;
        let v = double_sum(
            |_, _| 0.0,
            DoubleSumStrategy::ReduceToSingle {
                reduced: &reduced,
                tail: TailEstimate::Geometric { ratio: 0.5 },
                max_terms: 200,
            },
            1e-14,
        )
        .unwrap();
        assert!((v.value - 4.0).abs() < 1e-13);
    }
}
