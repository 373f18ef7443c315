//! Tanh-sinh (double-exponential) quadrature on a finite interval.
//!
//! Nodes carry their distances to both endpoints, computed without
//! cancellation, so integrands such as `K(sqrt(x))` near `x = 1` can be
//! evaluated from `1 - x` directly.

use std::f64::consts::FRAC_PI_2;

use super::value::ValueWithError;
use super::EPS;
use crate::error::{Error, Result};

/// A quadrature abscissa with its exact endpoint offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    /// `x - a`, accurate even when `x` rounds to `a`.
    pub from_a: f64,
    /// `b - x`, accurate even when `x` rounds to `b`.
    pub to_b: f64,
}

/// Endpoints at which the integrand may be singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoints {
    None,
    Left,
    Right,
    Both,
}

impl Endpoints {
    fn left(self) -> bool {
        matches!(self, Endpoints::Left | Endpoints::Both)
    }
    fn right(self) -> bool {
        matches!(self, Endpoints::Right | Endpoints::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: ValueWithError,
    pub levels: usize,
    pub evaluations: usize,
}

/// `t` beyond which the endpoint offset underflows below ~1e-300.
const T_SINGULAR: f64 = 6.08;
/// `t` beyond which weights drop below ~1e-20 relative to the centre.
const T_REGULAR: f64 = 3.5;
const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 12;

/// Integrates `f` over `[a, b]` given only the abscissa. Nodes that round
/// onto an endpoint are skipped; use [`tanh_sinh_integrate_nodes`] when the
/// integrand needs the endpoint distance.
pub fn tanh_sinh_integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    singular: Endpoints,
    tol: f64,
) -> Result<ValueWithError> {
    let (lo, hi) = (a.min(b), a.max(b));
    let g = |n: Node| {
        if n.x <= lo || n.x >= hi {
            0.0
        } else {
            f(n.x)
        }
    };
    tanh_sinh_integrate_nodes(g, a, b, singular, tol).map(|r| r.value)
}

/// Integrates `f` over `[a, b]`, passing each [`Node`] to the integrand.
/// `tol` is relative to the L1 norm of the integrand.
pub fn tanh_sinh_integrate_nodes(
    f: impl Fn(Node) -> f64,
    a: f64,
    b: f64,
    singular: Endpoints,
    tol: f64,
) -> Result<QuadResult> {
    integrate(&f, a, b, singular, tol)
}

fn integrate(f: &dyn Fn(Node) -> f64, a: f64, b: f64, singular: Endpoints, tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::outside("quadrature limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: ValueWithError::exact(0.0), levels: 0, evaluations: 0 });
    }
    if a > b {
        let r = integrate(
            &|n| f(Node { x: n.x, from_a: n.to_b, to_b: n.from_a }),
            b,
            a,
            match singular {
                Endpoints::Left => Endpoints::Right,
                Endpoints::Right => Endpoints::Left,
                s => s,
            },
            tol,
        )?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    let len = b - a;
    let t_right = if singular.right() { T_SINGULAR } else { T_REGULAR };
    let t_left = if singular.left() { T_SINGULAR } else { T_REGULAR };

    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let near = len * e / (1.0 + e);
        let far = len / (1.0 + e);
        let w = len * std::f64::consts::PI * t.cosh() * e / ((1.0 + e) * (1.0 + e));
        let node = if t >= 0.0 {
            Node { x: b - near, from_a: far, to_b: near }
        } else {
            Node { x: a + near, from_a: near, to_b: far }
        };
        if near == 0.0 || w == 0.0 {
            return Ok((0.0, 0.0));
        }
        evaluations += 1;
        let v = f(node);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { x: node.x });
        }
        Ok((w * v, (w * v).abs()))
    };

    // centre node
    let (c, c_abs) = eval(0.0)?;
    let mut sum = c;
    let mut sum_abs = c_abs;
    let mut h = 1.0;
    let mut prev: Option<f64> = None;
    let mut cutoff = 0.0;

    for level in 0..=MAX_LEVEL {
        let (start, step) = if level == 0 { (1.0, 1.0) } else { (h, 2.0 * h) };
        for (dir, t_max) in [(1.0, t_right), (-1.0, t_left)] {
            let mut t = start;
            let mut quiet = 0;
            while t <= t_max {
                let (v, va) = eval(dir * t)?;
                sum += v;
                sum_abs += va;
                if va <= cutoff {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                t += step;
            }
        }
        if level == 0 {
            cutoff = 1e-22 * sum_abs;
        }
        let estimate = h * sum;
        let scale = h * sum_abs;
        let floor = 32.0 * EPS * scale;
        if let Some(p) = prev {
            let diff = (estimate - p).abs();
            if level >= MIN_LEVEL && diff <= (tol * scale).max(floor) {
                super::work::record(evaluations as u64);
                return Ok(QuadResult {
                    value: ValueWithError::new(estimate, diff + floor),
                    levels: level,
                    evaluations,
                });
            }
            if level == MAX_LEVEL {
                return Err(Error::QuadratureStall { best: ValueWithError::new(estimate, diff + floor) });
            }
        }
        prev = Some(estimate);
        h *= 0.5;
    }
    unreachable!("loop returns at MAX_LEVEL")
}
