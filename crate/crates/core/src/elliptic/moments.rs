use std::f64::consts::{LN_2, PI};

use super::frakj::frakj_comp;
use crate::error::{Error, MapEstimate, Result};
use crate::hyper::{pfq, HypergeometricSpec};
use crate::legendre::raw_moment;
use crate::numerics::{
    sum_with_tail, tanh_sinh_integrate_nodes, work, CompensatedSum, Endpoints, Node, TailEstimate, ValueWithError, EPS,
};
use crate::specfun::digamma;

const SERIES_TOL: f64 = 1e-14;

/// Relative slack allowed between routes beyond their combined error bars.
pub const ROUTE_SLACK: f64 = 1e-11;

/// Independent evaluations of one quantity and their reconciliation.
#[derive(Debug, Clone)]
pub struct MomentRoutes {
    pub routes: Vec<(&'static str, ValueWithError)>,
    pub value: ValueWithError,
}

impl MomentRoutes {
    pub fn route(&self, name: &str) -> Option<ValueWithError> {
        self.routes.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// Largest pairwise gap between routes.
    pub fn spread(&self) -> f64 {
        let mut gap = 0.0f64;
        for (i, (_, a)) in self.routes.iter().enumerate() {
            for (_, b) in &self.routes[i + 1..] {
                gap = gap.max((a.value - b.value).abs());
            }
        }
        gap
    }
}

fn reconcile(routes: Vec<(&'static str, ValueWithError)>) -> Result<MomentRoutes> {
    let scale = routes.iter().fold(1.0f64, |s, (_, v)| s.max(v.value.abs()));
    for (i, (_, a)) in routes.iter().enumerate() {
        for (_, b) in &routes[i + 1..] {
            if !a.agrees_with(b, ROUTE_SLACK * scale) {
                return Err(Error::RouteDisagreement { a: *a, b: *b });
            }
        }
    }
    let value = routes.iter().skip(1).fold(routes[0].1, |acc, (_, v)| acc.reconcile(*v));
    Ok(MomentRoutes { routes, value })
}

/// Keeps a best-effort estimate when the tolerance was not met; the route
/// comparison then decides whether it is usable.
fn relaxed(r: Result<ValueWithError>) -> Result<ValueWithError> {
    match r {
        Err(Error::ToleranceNotReached { best, .. }) if best.is_finite() => Ok(best),
        other => other,
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > -1.0) || !eta.is_finite() {
        return Err(Error::outside(format!("moment order {eta} must exceed -1")));
    }
    Ok(())
}

/// FL coefficients of `J_m(√·)` composed with `K`-type kernels:
/// `c_n = 2 (2m)! (-1)^m / Π_{j=-m}^{m} (2n + 2j + 1)`.
pub fn fl_coefficient(m: u32, n: f64) -> f64 {
    let mut c = 2.0;
    for j in 1..=2 * m {
        c *= j as f64;
    }
    if m % 2 == 1 {
        c = -c;
    }
    let mi = m as i64;
    for j in -mi..=mi {
        c /= 2.0 * n + 2.0 * j as f64 + 1.0;
    }
    c
}

/// `2 * 4^m / (C(2m,m) (2m+1))`.
fn tripleform_prefactor(m: u32) -> f64 {
    let central4 = (0..m).fold(1.0, |c, j| c * (2.0 * j as f64 + 1.0) / (2.0 * j as f64 + 2.0));
    2.0 / (central4 * (2.0 * m as f64 + 1.0))
}

fn spec_unit(m: u32, eta: f64) -> HypergeometricSpec {
    HypergeometricSpec::new(&[0.5 - m as f64, 0.5, 1.0 + eta], &[1.0, 2.0 + eta], 1.0)
}

fn spec_alternating(m: u32, eta: f64) -> HypergeometricSpec {
    HypergeometricSpec::new(&[0.5 - m as f64, 1.0, -eta], &[1.5 + m as f64, 2.0 + eta], -1.0)
}

/// The three hypergeometric expressions for `∫_0^1 J_m(x) x^η dx`.
pub fn tripleform(m: u32, eta: f64) -> Result<[ValueWithError; 3]> {
    check_eta(eta)?;
    let mf = m as f64;
    let pre = tripleform_prefactor(m);
    let first =
        relaxed(pfq(&HypergeometricSpec::new(&[-eta, 1.0, mf + 1.0], &[1.5, 1.5 + mf], 1.0), SERIES_TOL))?.scale(pre);
    let second = relaxed(pfq(&spec_unit(m, eta), SERIES_TOL))?.scale(PI / (2.0 * (1.0 + eta)));
    let third = relaxed(pfq(&spec_alternating(m, eta), SERIES_TOL))?.scale(pre / (eta + 1.0));
    Ok([first, second, third])
}

/// `sum_n c_n^(m) ∫ x^η P̃_n dx`.
pub fn moment_fl(m: u32, eta: f64) -> Result<ValueWithError> {
    check_eta(eta)?;
    let term = |n: f64| fl_coefficient(m, n) * raw_moment(eta, n as usize);
    if eta == eta.round() {
        return sum_with_tail(term, TailEstimate::None, 0.0, eta as usize + 1);
    }
    relaxed(sum_with_tail(term, TailEstimate::Alternating, SERIES_TOL, 1 << 16))
}

/// `∫_0^1 J_m(x) x^η dx` by direct quadrature.
pub fn moment_quadrature(m: u32, eta: f64) -> Result<ValueWithError> {
    check_eta(eta)?;
    let f = |node: Node| match frakj_comp(m, node.to_b) {
        Ok(j) => j.value * node.x.powf(eta),
        Err(_) => f64::NAN,
    };
    Ok(tanh_sinh_integrate_nodes(f, 0.0, 1.0, Endpoints::Both, 1e-13)?.value)
}

/// `∫_0^1 K(√x) x^η dx` by the FL sum and by
/// `(π / (2η + 2)) 3F2[1/2, 1/2, η+1; 1, η+2; 1]`.
pub fn moment_k(eta: f64) -> Result<MomentRoutes> {
    check_eta(eta)?;
    let fl = moment_fl(0, eta)?;
    let hyper = relaxed(pfq(&spec_unit(0, eta), SERIES_TOL))?.scale(PI / (2.0 * (1.0 + eta)));
    reconcile(vec![("fl", fl), ("3f2", hyper)])
}

/// `∫_0^1 E(√x) x^η dx` by its unit-argument and alternating `3F2` forms.
pub fn moment_e(eta: f64) -> Result<MomentRoutes> {
    let [_, unit, alternating] = tripleform(1, eta)?;
    reconcile(vec![("3f2-unit", unit), ("3f2-alternating", alternating)])
}

/// `∫_0^1 J_m(x) x^η dx` by the three `3F2` forms and the FL sum.
pub fn moment_jm(m: u32, eta: f64) -> Result<MomentRoutes> {
    let [a, b, c] = tripleform(m, eta)?;
    let fl = moment_fl(m, eta)?;
    reconcile(vec![("tripleform-1", a), ("tripleform-2", b), ("tripleform-3", c), ("fl", fl)])
}

/// `∫_0^1 K(√x) x^η dx` on a single fast route: the finite FL sum at
/// integer `η`, an expansion about `x = 1` for large `η`, otherwise the
/// reconciled routes of [`moment_k`].
pub fn k_moment(eta: f64) -> Result<ValueWithError> {
    check_eta(eta)?;
    if eta == eta.round() && eta < 4096.0 {
        // 2 Σ_i (η!)^2 / ((2i+1) (η-i)! (η+i+1)!)
        let mut t = 1.0 / (eta + 1.0);
        let mut acc = CompensatedSum::new();
        for i in 0..=eta as usize {
            let fi = i as f64;
            acc.add(2.0 * t / (2.0 * fi + 1.0));
            t *= (eta - fi) / (eta + fi + 2.0);
        }
        return Ok(acc.result().widen(4.0 * EPS * acc.value()));
    }
    if eta >= K_MOMENT_EXPANSION_MIN {
        return k_moment_near_one(eta);
    }
    Ok(moment_k(eta)?.value)
}

const K_MOMENT_EXPANSION_MIN: f64 = 12.0;

/// With `K(√x) = Σ a_n y^n [ln 4 - 2(H_{2n} - H_n) - ln(y)/2]`, `y = 1-x`,
/// each term integrates against `x^η` to a Beta function.
fn k_moment_near_one(eta: f64) -> Result<ValueWithError> {
    let mut a = 1.0;
    let mut beta = 1.0 / (eta + 1.0);
    let mut d = 0.0;
    let mut psi_lo = digamma(1.0)?;
    let mut psi_hi = digamma(eta + 2.0)?;
    let mut acc = CompensatedSum::new();
    for n in 0..10_000usize {
        let nf = n as f64;
        let t = a * beta * (2.0 * LN_2 - 2.0 * d - 0.5 * (psi_lo - psi_hi));
        acc.add(t);
        if n > 2 && t.abs() < 0.1 * EPS * acc.value().abs() {
            work::record(n as u64 + 1);
            return Ok(acc.result().widen(16.0 * EPS * acc.value().abs()));
        }
        a *= ((2.0 * nf + 1.0) / (2.0 * nf + 2.0)).powi(2);
        beta *= (nf + 1.0) / (nf + eta + 2.0);
        d += 1.0 / (2.0 * nf + 1.0) + 1.0 / (2.0 * nf + 2.0) - 1.0 / (nf + 1.0);
        psi_lo += 1.0 / (nf + 1.0);
        psi_hi += 1.0 / (nf + eta + 2.0);
    }
    Err(Error::ToleranceNotReached { target: EPS, best: acc.result() })
}

fn ratio(num: ValueWithError, den: ValueWithError) -> ValueWithError {
    num / den
}

/// `4^(m+1) / (C(2m,m)(2m+1))` times the ratio of the alternating and
/// unit-argument `3F2` series; equals `π`.
pub fn pi_ratio(m: u32, eta: f64) -> Result<ValueWithError> {
    check_eta(eta)?;
    let num = relaxed(pfq(&spec_alternating(m, eta), SERIES_TOL))?;
    let den = relaxed(pfq(&spec_unit(m, eta), SERIES_TOL))?;
    Ok(ratio(num, den).scale(2.0 * tripleform_prefactor(m)))
}

/// `3F2[-η, 1/2, 1; 3/2, 2+η; -1] / 3F2[1/2, 1/2, 1+η; 1, 2+η; 1]`, equal to `π/4`.
pub fn pi4_ratio(eta: f64) -> Result<ValueWithError> {
    pi_ratio(0, eta).map_estimate(|v| v.scale(0.25))
}

/// `3F2[-3/2, 1, -η; 7/2, 2+η; -1] / 3F2[-3/2, 1/2, 1+η; 1, 2+η; 1]`, equal to `15π/32`.
pub fn ratio_15pi32(eta: f64) -> Result<ValueWithError> {
    pi_ratio(2, eta).map_estimate(|v| v.scale(15.0 / 32.0))
}
