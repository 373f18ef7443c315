use super::value::ValueWithError;
use super::EPS;
use crate::error::{Error, Result};

/// Levin u-transform of a sequence of partial sums.
///
/// With `a_j = S_j - S_{j-1}` and remainder estimates `w_j = (j+1) a_j`,
/// the order-`k` transform is
///
/// ```text
///         sum_j (-1)^j C(k,j) ((j+1)/(k+1))^(k-1) S_j / w_j
/// T_k =  ---------------------------------------------------
///         sum_j (-1)^j C(k,j) ((j+1)/(k+1))^(k-1) / w_j
/// ```
///
/// The returned order minimizes the changes to its neighbouring orders; the
/// larger of those changes is the error estimate.
pub fn levin_u_accelerate(partial_sums: &[f64]) -> Result<ValueWithError> {
    let n = partial_sums.len();
    if n < 8 {
        return Err(Error::AccelerationBreakdown("need at least 8 partial sums"));
    }
    if partial_sums.iter().any(|s| !s.is_finite()) {
        return Err(Error::AccelerationBreakdown("non-finite partial sum"));
    }
    let terms: Vec<f64> =
        (0..n).map(|j| if j == 0 { partial_sums[0] } else { partial_sums[j] - partial_sums[j - 1] }).collect();
    if terms[1..].iter().all(|&t| t == 0.0) {
        return Ok(ValueWithError::exact(partial_sums[0]));
    }
    if terms.contains(&0.0) {
        return Err(Error::AccelerationBreakdown("zero term in remainder estimate"));
    }

    let transform = |k: usize| -> Option<f64> {
        // shifting by a reference partial sum keeps the weighted average
        // from cancelling large multiples of S_j
        let reference = partial_sums[k];
        let mut num = 0.0;
        let mut den = 0.0;
        let mut binom = 1.0;
        let kp1 = (k + 1) as f64;
        for j in 0..=k {
            let w = (j as f64 + 1.0) * terms[j];
            let c = binom * ((j as f64 + 1.0) / kp1).powi(k as i32 - 1) / w;
            let c = if j % 2 == 0 { c } else { -c };
            num += c * (partial_sums[j] - reference);
            den += c;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let t = reference + num / den;
        (den != 0.0 && t.is_finite()).then_some(t)
    };

    // pick the order whose neighbours on both sides agree best; rounding
    // in the partial sums is amplified at high orders
    let t: Vec<Option<f64>> = (0..n).map(|k| if k == 0 { None } else { transform(k) }).collect();
    let mut best: Option<(f64, ValueWithError)> = None;
    for k in 2..n - 1 {
        if let (Some(a), Some(b), Some(c)) = (t[k - 1], t[k], t[k + 1]) {
            let (d1, d2) = ((b - a).abs(), (c - b).abs());
            let score = d1 + d2;
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, ValueWithError::new(b, d1.max(d2) + 8.0 * EPS * b.abs())));
            }
        }
    }
    let best = best.map(|(_, v)| v);
    best.ok_or(Error::AccelerationBreakdown("all transform orders degenerate"))
}
