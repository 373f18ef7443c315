use num_rational::Ratio;

use crate::numerics::{ValueWithError, EPS};

/// `P_n(x)` by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> ValueWithError {
    let v = legendre_p_value(n, x);
    ValueWithError::new(v, 2.0 * (n as f64 + 1.0) * EPS)
}

pub(crate) fn legendre_p_value(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_n(x) = 2^-n Σ_k C(n,k)^2 (x-1)^(n-k) (x+1)^k`.
pub fn legendre_p_binomial(n: usize, x: f64) -> f64 {
    let mut c = 1.0;
    let mut s = 0.0;
    for k in 0..=n {
        s += c * c * (x - 1.0).powi((n - k) as i32) * (x + 1.0).powi(k as i32);
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    s / 2f64.powi(n as i32)
}

/// Shifted polynomial `P̃_n(x) = P_n(2x - 1)`.
pub fn shifted_legendre(n: usize, x: f64) -> f64 {
    legendre_p_value(n, 2.0 * x - 1.0)
}

/// Shifted polynomials `P̃_0..P̃_{count-1}` at `x`.
pub fn shifted_legendre_all(count: usize, x: f64) -> Vec<f64> {
    let t = 2.0 * x - 1.0;
    let mut out = Vec::with_capacity(count);
    let (mut p0, mut p1) = (1.0, t);
    for k in 0..count {
        out.push(p0);
        let kf = k as f64 + 1.0;
        let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    out
}

/// `∫_0^1 x P̃_N(x) P̃_L(x) dx`, nonzero only for `|N - L| <= 1`.
pub fn x_pn_pl_overlap(big_n: usize, l: usize) -> Ratio<i64> {
    let li = l as i64;
    if big_n == l + 1 {
        Ratio::new(2 * li + 2, 4 * (2 * li + 1) * (2 * li + 3))
    } else if big_n == l {
        Ratio::new(1, 2 * (2 * li + 1))
    } else if l >= 1 && big_n + 1 == l {
        Ratio::new(2 * li, 4 * (2 * li - 1) * (2 * li + 1))
    } else {
        Ratio::from_integer(0)
    }
}
