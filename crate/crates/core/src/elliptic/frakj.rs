use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_rational::Ratio;

use super::agm::{ellip_e_comp, ellip_k_comp};
use crate::error::{Error, MapEstimate, Result};
use crate::hyper::{pfq, HypergeometricSpec};
use crate::numerics::{tanh_sinh_integrate, Endpoints, ValueWithError, EPS};

/// Index `m` of `J_m(x) = ∫_0^{π/2} (1 - x sin^2 θ)^(m - 1/2) dθ`.
/// `J_0(x) = K(√x)`, `J_1(x) = E(√x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllipticKind {
    pub m: u32,
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::outside(format!("x = {x} not in [0, 1)")));
    }
    Ok(())
}

/// Maclaurin coefficients of `J_m(x) = (π/2) 2F1[1/2 - m, 1/2; 1; x]`.
#[derive(Debug, Clone)]
pub struct MaclaurinStream {
    m: u32,
    n: usize,
    current: f64,
}

impl MaclaurinStream {
    pub fn new(kind: EllipticKind) -> Self {
        Self { m: kind.m, n: 0, current: PI / 2.0 }
    }

    /// Closed form `(π/2) (2m-1)!! C(2n,n)^2 / (16^n Π_{j<m} (2j+1-2n))`.
    pub fn coefficient(kind: EllipticKind, n: usize) -> f64 {
        let nf = n as f64;
        let mut c = PI / 2.0;
        for k in 0..n {
            let kf = k as f64;
            c *= (kf + 0.5) * (kf + 0.5) / ((kf + 1.0) * (kf + 1.0));
        }
        for j in 0..kind.m {
            let odd = 2.0 * j as f64 + 1.0;
            c *= odd / (odd - 2.0 * nf);
        }
        c
    }
}

impl Iterator for MaclaurinStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.current;
        let k = self.n as f64;
        self.current *= (k + 0.5 - self.m as f64) * (k + 0.5) / ((k + 1.0) * (k + 1.0));
        self.n += 1;
        Some(out)
    }
}

/// `J_m` from `K` and `E` through
/// `(2m+1) J_{m+1} = 2m(1+y) J_m - (2m-1) y J_{m-1}` with `y = 1 - x`.
pub fn frakj_comp(m: u32, y: f64) -> Result<ValueWithError> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::outside(format!("1 - x = {y} not in (0, 1]")));
    }
    let k = ellip_k_comp(y)?;
    if m == 0 {
        return Ok(k);
    }
    let e = ellip_e_comp(y)?;
    let (mut prev, mut cur) = (k.value, e.value);
    for j in 1..m {
        let jf = j as f64;
        let next = (2.0 * jf * (1.0 + y) * cur - (2.0 * jf - 1.0) * y * prev) / (2.0 * jf + 1.0);
        prev = cur;
        cur = next;
    }
    let err = (k.abs_error + e.abs_error) * (1.0 + m as f64) + 4.0 * m as f64 * EPS * cur.abs();
    Ok(ValueWithError::new(cur, err))
}

/// `J_m(x)` by the `K`/`E` recurrence.
pub fn frakj(m: u32, x: f64) -> Result<ValueWithError> {
    check_x(x)?;
    frakj_comp(m, 1.0 - x)
}

/// `J_m(x)` by quadrature of the defining θ-integral.
pub fn frakj_quadrature(m: u32, x: f64) -> Result<ValueWithError> {
    check_x(x)?;
    let y = 1.0 - x;
    let p = m as f64 - 0.5;
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        (c * c + y * s * s).powf(p)
    };
    tanh_sinh_integrate(f, 0.0, PI / 2.0, Endpoints::None, 1e-14)
}

/// `J_m(x)` by summing its Maclaurin series.
pub fn frakj_maclaurin(m: u32, x: f64) -> Result<ValueWithError> {
    check_x(x)?;
    let spec = HypergeometricSpec::new(&[0.5 - m as f64, 0.5], &[1.0], x);
    pfq(&spec, 1e-14).map_estimate(|v| v.scale(PI / 2.0))
}

/// The three evaluations of `J_m(x)` and their reconciliation.
#[derive(Debug, Clone, Copy)]
pub struct FrakJRoutes {
    pub quadrature: ValueWithError,
    pub maclaurin: ValueWithError,
    pub closed: ValueWithError,
    pub value: ValueWithError,
}

pub fn frakj_routes(m: u32, x: f64) -> Result<FrakJRoutes> {
    let quadrature = frakj_quadrature(m, x)?;
    let maclaurin = frakj_maclaurin(m, x)?;
    let closed = frakj(m, x)?;
    let slack = 1e-13 * closed.value.abs();
    for (a, b) in [(quadrature, closed), (maclaurin, closed), (quadrature, maclaurin)] {
        if !a.agrees_with(&b, slack) {
            return Err(Error::RouteDisagreement { a, b });
        }
    }
    let value = closed.reconcile(quadrature).reconcile(maclaurin);
    Ok(FrakJRoutes { quadrature, maclaurin, closed, value })
}

/// `J_m(1/2) = e_m E(1/√2) + k_m K(1/√2)` with exact rational `e_m`, `k_m`.
#[derive(Debug, Clone, Copy)]
pub struct JmHalf {
    pub value: ValueWithError,
    pub e: Ratio<i128>,
    pub k: Ratio<i128>,
    /// Largest gap between the two-term form and the independent routes.
    pub residual: f64,
}

pub const JM_HALF_MAX_M: u32 = 12;
const JM_HALF_RESIDUAL: f64 = 1e-11;

/// Exact `(e_m, k_m)` from the recurrence at `x = 1/2`:
/// `J_{m+1} = (3m J_m - (2m-1)/2 J_{m-1}) / (2m+1)`.
pub fn jm_half_rationals(m: u32) -> (Ratio<i128>, Ratio<i128>) {
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    let (mut prev, mut cur) = ((zero, one), (one, zero));
    if m == 0 {
        return prev;
    }
    for j in 1..m {
        let j = j as i128;
        let a = Ratio::new(3 * j, 2 * j + 1);
        let b = Ratio::new(2 * j - 1, 2 * (2 * j + 1));
        let next = (a * cur.0 - b * prev.0, a * cur.1 - b * prev.1);
        prev = cur;
        cur = next;
    }
    cur
}

fn ratio_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `J_m(1/2)` by `3F2[(1-2m)/4, (3-2m)/4, 1/2; (2m+3)/4, (2m+5)/4; -1]`.
pub fn jm_half_3f2(m: u32) -> Result<ValueWithError> {
    let mf = m as f64;
    let spec = HypergeometricSpec::new(
        &[(1.0 - 2.0 * mf) / 4.0, (3.0 - 2.0 * mf) / 4.0, 0.5],
        &[(2.0 * mf + 3.0) / 4.0, (2.0 * mf + 5.0) / 4.0],
        -1.0,
    );
    let central = (0..m).fold(1.0, |c, j| c * (2.0 * j as f64 + 1.0) * 2.0 / (j as f64 + 1.0));
    let pre = 2.0 * 4f64.powi(m as i32) / (central * (2.0 * mf + 1.0));
    pfq(&spec, 1e-14).map_estimate(|v| v.scale(pre))
}

pub fn jm_half(m: u32) -> Result<JmHalf> {
    if m > JM_HALF_MAX_M {
        return Err(Error::outside(format!("m = {m} exceeds {JM_HALF_MAX_M}")));
    }
    let (e, k) = jm_half_rationals(m);
    let ev = super::agm::ellip_e(FRAC_1_SQRT_2)?;
    let kv = super::agm::ellip_k(FRAC_1_SQRT_2)?;
    let (ef, kf) = (ratio_f64(e), ratio_f64(k));
    let two_term = ValueWithError::new(
        ef * ev.value + kf * kv.value,
        (ef * ev.abs_error).abs()
            + (kf * kv.abs_error).abs()
            + 4.0 * EPS * (ef * ev.value).abs().max((kf * kv.value).abs()),
    );
    let hyper = jm_half_3f2(m)?;
    let quad = frakj_quadrature(m, 0.5)?;
    let residual = (two_term.value - hyper.value).abs().max((two_term.value - quad.value).abs());
    if !(residual < JM_HALF_RESIDUAL) {
        return Err(Error::ReconstructionFailed(format!(
            "J_{m}(1/2): two-term form {} misses routes by {residual:e}",
            two_term.value
        )));
    }
    Ok(JmHalf { value: two_term.reconcile(hyper).reconcile(quad), e, k, residual })
}
