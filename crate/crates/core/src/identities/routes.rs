//! Integral representations and double-series evaluators used as
//! independent plans by the registry.
//!
//! With `F(x) = Σ a_n r(n) x^n`, harmonic-twisted sums follow from
//! `Σ a_n r(n) H_{αn+β} = ∫_0^1 [F(1) - t^β F(t^α)] / (1-t) dt`.

use std::f64::consts::PI;

use crate::elliptic::{ellip_e_comp, ellip_e_deficit, ellip_k_comp, k_moment};
use crate::error::{MapEstimate, Result};
use crate::numerics::{
    double_sum, tanh_sinh_integrate_nodes, DoubleSumStrategy, Endpoints, Node, TailEstimate, ValueWithError, EPS,
};
use crate::series::integral_route;
use crate::series::IntegralId;
use crate::specfun::{harmonic, HarmonicArg};

pub(crate) const QUAD_TOL: f64 = 1e-14;

/// Below this argument the generating functions are summed directly.
const SMALL: f64 = 0.05;

fn settle(r: Result<crate::numerics::QuadResult>) -> Result<ValueWithError> {
    crate::series::settle(r)
}

pub(crate) fn unit_integral(f: impl Fn(Node) -> f64, ends: Endpoints) -> Result<ValueWithError> {
    settle(tanh_sinh_integrate_nodes(f, 0.0, 1.0, ends, QUAD_TOL))
}

fn k_of(kc2: f64) -> f64 {
    ellip_k_comp(kc2).map(|v| v.value).unwrap_or(f64::NAN)
}

fn e_of(kc2: f64) -> f64 {
    ellip_e_comp(kc2).map(|v| v.value).unwrap_or(f64::NAN)
}

/// `1 - E` at complementary parameter `kc2`.
fn e_deficit(kc2: f64) -> f64 {
    ellip_e_deficit(kc2).map(|v| v.value).unwrap_or(f64::NAN)
}

/// `Σ c_n x^n` with `c_{n+1} = c_n ratio(n)`, `c_0 = 1`, for small `x`.
fn power_series(x: f64, ratio: impl Fn(f64) -> f64, weight: impl Fn(f64) -> f64) -> f64 {
    let mut c = 1.0;
    let mut p = 1.0;
    let mut s = 0.0;
    for n in 0..200 {
        let nf = n as f64;
        let t = c * p * weight(nf);
        s += t;
        if n > 2 && t.abs() < 0.25 * EPS * s.abs() {
            break;
        }
        c *= ratio(nf);
        p *= x;
    }
    s
}

/// `a_{n+1} / a_n` for `a_n = C(2n,n)^2 / 16^n`.
fn a_ratio(n: f64) -> f64 {
    ((2.0 * n + 1.0) / (2.0 * n + 2.0)).powi(2)
}

/// `q_{n+1} / q_n` for `q_n = C(4n,2n) C(2n,n) / 64^n`.
fn q_ratio(n: f64) -> f64 {
    (4.0 * n + 1.0) * (4.0 * n + 3.0) / (16.0 * (n + 1.0) * (n + 1.0))
}

/// `Q(y) = Σ q_n y^n` given `y` and `1 - √y`.
pub(crate) fn quarter_gf(y: f64, one_minus_r: f64) -> f64 {
    if y < SMALL {
        return power_series(y, q_ratio, |_| 1.0);
    }
    let r = y.sqrt();
    2.0 * k_of(one_minus_r / (1.0 + r)) / (PI * (1.0 + r).sqrt())
}

/// `(Q(y) - 1) / y`.
fn quarter_gf_excess(y: f64, one_minus_r: f64) -> f64 {
    if y < SMALL {
        // Σ_{n>=1} q_n y^(n-1)
        return power_series(y, |n| q_ratio(n + 1.0), |_| 1.0) * q_ratio(0.0);
    }
    (quarter_gf(y, one_minus_r) - 1.0) / y
}

/// `G(x) = Σ a_n x^n / (n+1) = 4 (E - (1-x) K) / (π x)` at parameter `x`.
pub(crate) fn g_gf(x: f64, one_minus_x: f64) -> f64 {
    if x < SMALL {
        return power_series(x, a_ratio, |n| 1.0 / (n + 1.0));
    }
    4.0 * (e_of(one_minus_x) - one_minus_x * k_of(one_minus_x)) / (PI * x)
}

/// `4/π - G(x)`, accurate near `x = 1`.
fn g_deficit(x: f64, one_minus_x: f64) -> f64 {
    if x < SMALL {
        return 4.0 / PI - g_gf(x, one_minus_x);
    }
    let k = k_of(one_minus_x);
    4.0 * (e_deficit(one_minus_x) - one_minus_x + one_minus_x * k) / (PI * x)
}

/// `G'(x) = Σ a_n n x^(n-1) / (n+1) = ((2/π) K - G) / x`.
fn g_gf_derivative(x: f64, one_minus_x: f64) -> f64 {
    if x < SMALL {
        return power_series(x, |n| a_ratio(n + 1.0), |n| (n + 1.0) / (n + 2.0)) * a_ratio(0.0);
    }
    (2.0 / PI * k_of(one_minus_x) - g_gf(x, one_minus_x)) / x
}

/// `Σ q_n (H_n - H_{n-1/2}) = ∫ Q(t) / (√t (1+√t)) dt`
pub fn hn_minus_half_integral() -> Result<ValueWithError> {
    unit_integral(
        |n| {
            let r = n.x.sqrt();
            quarter_gf(n.x, n.to_b / (1.0 + r)) / (r * (1.0 + r))
        },
        Endpoints::Both,
    )
}

/// `Σ a_n H_n / (2n-1) = -(2/π) ∫ (1 - E(√t)) / (1-t) dt`
pub fn hn_2nm1_integral() -> Result<ValueWithError> {
    integral_route(IntegralId::OneMinusEOver1mx).map_estimate(|v| v.scale(-2.0 / PI))
}

/// `Σ a_n (H_n - H_{n-1/2}) / (n+1) = ∫ G(t) / (√t (1+√t)) dt`
pub fn hn_half_np1_integral() -> Result<ValueWithError> {
    unit_integral(
        |n| {
            let r = n.x.sqrt();
            g_gf(n.x, n.to_b) / (r * (1.0 + r))
        },
        Endpoints::Both,
    )
}

/// `Σ a_n (H_{n+1/4} - H_{n-1/4}) = (2/π) ∫ K(√t) t^(-1/4) / (1+√t) dt`
pub fn quarter_harm_integral() -> Result<ValueWithError> {
    unit_integral(|n| k_of(n.to_b) / (n.x.powf(0.25) * (1.0 + n.x.sqrt())), Endpoints::Both)
        .map_estimate(|v| v.scale(2.0 / PI))
}

/// `Σ a_n H^(2)_n / (n+1) = -∫ ln t (4/π - G(t)) / (1-t) dt`
pub fn h2_np1_integral() -> Result<ValueWithError> {
    unit_integral(|n| n.x.ln() * g_deficit(n.x, n.to_b) / n.to_b, Endpoints::Both).map_estimate(|v| v.scale(-1.0))
}

/// `Σ a_n (H_n^2 + H^(2)_n) / (n+1) = ∫ G'(x) ln^2(1-x) dx`
pub fn hsq_np1_integral() -> Result<ValueWithError> {
    unit_integral(|n| g_gf_derivative(n.x, n.to_b) * n.to_b.ln().powi(2), Endpoints::Right)
}

/// `Σ_{n>=1} a_n (H_n^2 + H^(2)_n) / (2n-1)^2 = ∫ G(x) ln^2(1-x) / 4 dx`
pub fn hsq_2nm1sq_integral() -> Result<ValueWithError> {
    unit_integral(|n| 0.25 * g_gf(n.x, n.to_b) * n.to_b.ln().powi(2), Endpoints::Right)
}

/// `Σ a_n H_{2n} / (2n-1) = -(2/π) ∫ (1 - E(t)) / (1-t) dt`, modulus `t`.
pub fn h2n_2nm1_integral() -> Result<ValueWithError> {
    let f = |n: Node| e_deficit(n.to_b * (1.0 + n.x)) / n.to_b;
    unit_integral(f, Endpoints::Right).map_estimate(|v| v.scale(-2.0 / PI))
}

/// `Σ a_n H_{2n} / (n+1) = ∫ (4/π - G(t^2)) / (1-t) dt`
pub fn h2n_np1_integral() -> Result<ValueWithError> {
    unit_integral(|n| g_deficit(n.x * n.x, n.to_b * (1.0 + n.x)) / n.to_b, Endpoints::Right)
}

/// `Σ_{n>=1} a_n H_{2n} / (2n-1)^2
///   = (2/π) ∫ [2 (1 - E(t)) / (1-t) + (1+t) K(t)] dt`, modulus `t`.
pub fn h2n_2nm1sq_integral() -> Result<ValueWithError> {
    let f = |n: Node| {
        let kc2 = n.to_b * (1.0 + n.x);
        2.0 * e_deficit(kc2) / n.to_b + (1.0 + n.x) * k_of(kc2)
    };
    unit_integral(f, Endpoints::Right).map_estimate(|v| v.scale(2.0 / PI))
}

/// `Σ q_n / (2n+m) = ∫ t^(m-1) Q(t^2) dt`
pub fn quarter_family_integral(m: u32) -> Result<ValueWithError> {
    unit_integral(|n| n.x.powi(m as i32 - 1) * quarter_gf(n.x * n.x, n.to_b), Endpoints::Right)
}

/// `3F2[-1/2, 1/4, 3/4; 1/2, 1; 1] = 1 - Σ_{n>=1} q_n / (2n-1) = 1 - ∫ (Q(t^2) - 1) / t^2 dt`
pub fn parbelos_integral() -> Result<ValueWithError> {
    let v = unit_integral(|n| quarter_gf_excess(n.x * n.x, n.to_b), Endpoints::Right)?;
    Ok(ValueWithError::new(1.0 - v.value, v.abs_error))
}

/// `Σ_{n>=1} q_n / n = ∫ (Q(y) - 1) / y dy`
pub fn dilog_integral() -> Result<ValueWithError> {
    unit_integral(|n| quarter_gf_excess(n.x, n.to_b / (1.0 + n.x.sqrt())), Endpoints::Right)
}

/// `ψ(n+1) - ψ(n+1/2) = H_n - H_{n-1/2}` without cancellation for large `n`.
fn half_gap(n: f64) -> f64 {
    if n < 16.0 {
        return harmonic_real(n) - harmonic(HarmonicArg::new(n - 0.5, 1)).map(|h| h.value).unwrap_or(f64::NAN);
    }
    // ψ(x) ~ ln x - 1/(2x) - Σ B_2k / (2k x^2k)
    const C: [f64; 5] = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0];
    let (x, y) = (n + 1.0, n + 0.5);
    let mut d = (0.5 / y).ln_1p() - 0.5 / x + 0.5 / y;
    let (x2, y2) = (1.0 / (x * x), 1.0 / (y * y));
    let (mut px, mut py) = (x2, y2);
    for c in C {
        d -= c * (px - py);
        px *= x2;
        py *= y2;
    }
    d
}

/// `Σ q_n (1/2 + n H_{n-1/2} - n H_n)`, summed as `q_n (1/2 - n (H_n - H_{n-1/2}))`.
pub fn half_plus_nh_series(tol: f64, max_terms: usize) -> Result<ValueWithError> {
    let term = |n: f64| {
        let q = crate::specfun::binomial_kernel(crate::specfun::Kernel::Quarter64, n);
        q * (0.5 - n * half_gap(n))
    };
    crate::numerics::sum_with_tail(term, TailEstimate::PowerLaw { exponent: 2.0 }, tol, max_terms)
}

/// Which double series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleSeries {
    /// `Σ a_m H_n / ((n+1)(m+n+2))`
    Hn,
    /// `Σ (n+1)! n! H_n / ((2m+1) (n-m+1)! (m+n+2)!)`, zero for `m > n+1`
    FactHn,
    /// `Σ a_m a_n / ((m+n+1)(2m+3))`
    Zeta3G,
}

pub const DIAGONALS: usize = 4000;

fn harmonic_real(n: f64) -> f64 {
    harmonic(HarmonicArg::new(n, 1)).map(|h| h.value).unwrap_or(f64::NAN)
}

fn kernel_a(n: f64) -> f64 {
    crate::specfun::binomial_kernel(crate::specfun::Kernel::CentralSq16, n)
}

/// Sums the inner index in closed form through `∫ K(√x) x^η dx`.
pub fn double_reduced(which: DoubleSeries, tol: f64, max_terms: usize) -> Result<ValueWithError> {
    let mk = |eta: f64| k_moment(eta).map(|v| v.value).unwrap_or(f64::NAN);
    let (reduced, exponent): (Box<dyn Fn(f64) -> f64 + Sync>, f64) = match which {
        DoubleSeries::Hn => (Box::new(move |n: f64| 2.0 / PI * harmonic_real(n) * mk(n + 1.0) / (n + 1.0)), 2.0),
        DoubleSeries::FactHn => (Box::new(move |n: f64| harmonic_real(n) * mk(n + 1.0) / (2.0 * (n + 1.0))), 2.0),
        DoubleSeries::Zeta3G => (Box::new(move |m: f64| kernel_a(m) / (2.0 * m + 3.0) * 2.0 / PI * mk(m)), 3.0),
    };
    let strategy =
        DoubleSumStrategy::ReduceToSingle { reduced: &*reduced, tail: TailEstimate::PowerLaw { exponent }, max_terms };
    double_sum(|_, _| 0.0, strategy, tol)
}

/// Direct summation over diagonals with a fitted tail.
pub fn double_direct(which: DoubleSeries, max_diagonal: usize, tol: f64) -> Result<ValueWithError> {
    let n = max_diagonal + 2;
    let mut a = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    let (mut av, mut hv) = (1.0, 0.0);
    for k in 0..n {
        a.push(av);
        h.push(hv);
        av *= a_ratio(k as f64);
        hv += 1.0 / (k as f64 + 1.0);
    }
    let strategy = DoubleSumStrategy::Diagonal { max_diagonal };
    match which {
        DoubleSeries::Hn => double_sum(|m, n| a[m] * h[n] / ((n + 1) as f64 * (m + n + 2) as f64), strategy, tol),
        DoubleSeries::Zeta3G => {
            double_sum(|m, n| a[m] * a[n] / ((m + n + 1) as f64 * (2 * m + 3) as f64), strategy, tol)
        }
        DoubleSeries::FactHn => {
            let mut lf = vec![0.0f64; 2 * n + 4];
            for k in 1..lf.len() {
                lf[k] = lf[k - 1] + (k as f64).ln();
            }
            double_sum(
                |m, n| {
                    if m > n + 1 {
                        return 0.0;
                    }
                    let l = lf[n + 1] + lf[n] - lf[n + 1 - m] - lf[m + n + 2];
                    l.exp() * h[n] / (2 * m + 1) as f64
                },
                strategy,
                tol,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn generating_function_branches_meet() {
        for (x, omx) in [(SMALL * 0.999, 1.0 - SMALL * 0.999), (SMALL * 1.001, 1.0 - SMALL * 1.001)] {
            let r = x.sqrt();
            let q = quarter_gf(x, 1.0 - r);
            assert!((q - crate::hyper::gf_c4n2n_c2nn(x).unwrap().value.value).abs() < 1e-15);
            let g = power_series(x, a_ratio, |n| 1.0 / (n + 1.0));
            assert!((g_gf(x, omx) - g).abs() < 1e-14);
            let d = power_series(x, |n| a_ratio(n + 1.0), |n| (n + 1.0) / (n + 2.0)) * 0.25;
            assert!((g_gf_derivative(x, omx) - d).abs() < 1e-12);
        }
        assert!((g_gf(1.0 - 1e-300, 1e-300) - 4.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn half_gap_branches() {
        for n in [15.0, 16.0, 40.5, 1e6] {
            let direct = harmonic_real(n) - harmonic(HarmonicArg::new(n - 0.5, 1)).unwrap().value;
            assert!((half_gap(n) - direct).abs() < 1e-15 * (1.0 + n.ln()), "n={n}");
        }
        // 1/2 - n (ψ(n+1) - ψ(n+1/2)) ~ 1/(8n)
        let n = 1e5;
        assert!(((0.5 - n * half_gap(n)) * 8.0 * n - 1.0).abs() < 1e-4);
    }

    #[test]
    fn reductions_match_closed_forms() {
        let g = crate::specfun::catalan_g().value;
        let z3 = crate::specfun::zeta3().value;
        let v = double_reduced(DoubleSeries::Zeta3G, 1e-12, 1 << 16).unwrap();
        assert!((v.value - (7.0 * z3 - 4.0 * g) / (PI * PI)).abs() < 1e-10, "{v}");
        let fact = 12.0 - PI * PI / 3.0 + 8.0 * LN_2 * LN_2 - 16.0 * LN_2;
        let v = double_reduced(DoubleSeries::FactHn, 1e-12, 1 << 16).unwrap();
        assert!((v.value - fact).abs() < 1e-10, "{v}");
    }
}
