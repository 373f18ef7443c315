use std::f64::consts::PI;

use super::constants::{zeta2, EULER_GAMMA};
use super::gamma::{cos_pi, sin_pi};
use super::BERNOULLI_2K;
use crate::error::{Error, Result};
use crate::numerics::{CompensatedSum, ValueWithError, EPS};

const ASYMPTOTIC_MIN: f64 = 10.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Digamma `ψ(x)`.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::outside("digamma of a non-finite argument"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.0 {
        // ψ(x) = ψ(1-x) - π cot(πx)
        return Ok(digamma(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut acc = CompensatedSum::new();
    let mut y = x;
    while y < ASYMPTOTIC_MIN {
        acc.add(-1.0 / y);
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut p = inv2;
    let mut s = 0.0;
    for (k, b) in BERNOULLI_2K.iter().enumerate().take(8) {
        s += b / (2.0 * (k + 1) as f64) * p;
        p *= inv2;
    }
    acc.add(y.ln());
    acc.add(-0.5 / y);
    acc.add(-s);
    Ok(acc.value())
}

/// Trigamma `ψ′(x)`.
pub fn trigamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::outside("trigamma of a non-finite argument"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.0 {
        // ψ′(x) + ψ′(1-x) = π² / sin²(πx)
        let s = sin_pi(x);
        return Ok(PI * PI / (s * s) - trigamma(1.0 - x)?);
    }
    let mut acc = CompensatedSum::new();
    let mut y = x;
    while y < ASYMPTOTIC_MIN {
        acc.add(1.0 / (y * y));
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut p = inv2 * inv;
    let mut s = 0.0;
    for b in BERNOULLI_2K.iter().take(8) {
        s += b * p;
        p *= inv2;
    }
    acc.add(inv);
    acc.add(0.5 * inv2);
    acc.add(s);
    Ok(acc.value())
}

/// Hurwitz zeta `ζ(s, q) = sum_{k>=0} (k+q)^-s` for `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::outside(format!("hurwitz_zeta needs s > 1, got {s}")));
    }
    if !(q > 0.0) {
        return Err(Error::outside(format!("hurwitz_zeta needs q > 0, got {q}")));
    }
    let n = 12.0f64;
    let mut acc = CompensatedSum::new();
    let mut k = 0.0;
    while k < n {
        acc.add((k + q).powf(-s));
        k += 1.0;
    }
    let w = n + q;
    acc.add(w.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * w.powf(-s));
    // Euler-Maclaurin: B_{2j}/(2j)! (s)_{2j-1} w^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut wp = w.powf(-s - 1.0);
    for (j, b) in BERNOULLI_2K.iter().enumerate() {
        acc.add(b / fact * rising * wp);
        let j2 = 2.0 * (j + 1) as f64;
        rising *= (s + j2 - 1.0) * (s + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        wp /= w * w;
    }
    Ok(acc.value())
}

/// Riemann zeta for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

/// Argument of a generalized harmonic number `H_a^(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicArg {
    pub a: f64,
    pub b: u32,
}

impl HarmonicArg {
    pub fn new(a: f64, b: u32) -> Self {
        Self { a, b }
    }
}

const DIRECT_MAX: f64 = 64.0;

/// `H_a^(b) = ζ(b) - ζ(b, a+1)` for real `a`, with `H_a^(0) = a`.
pub fn harmonic(arg: HarmonicArg) -> Result<ValueWithError> {
    let HarmonicArg { a, b } = arg;
    if !a.is_finite() {
        return Err(Error::outside("harmonic number of a non-finite argument"));
    }
    if b == 0 {
        return Ok(ValueWithError::exact(a));
    }
    if is_nonpositive_integer(a + 1.0) {
        return Err(Error::HarmonicPole(a));
    }
    if a >= 0.0 && a == a.floor() && a <= DIRECT_MAX {
        let mut acc = CompensatedSum::new();
        for k in 1..=(a as u64) {
            acc.add((k as f64).powi(-(b as i32)));
        }
        return Ok(acc.result());
    }
    let v = match b {
        1 => digamma(a + 1.0)? + EULER_GAMMA,
        2 => zeta2() - trigamma(a + 1.0)?,
        _ => {
            // shift up so that the Hurwitz parameter is positive
            let mut acc = CompensatedSum::new();
            let mut q = a + 1.0;
            while q <= 0.0 {
                acc.add(-q.powi(-(b as i32)));
                q += 1.0;
            }
            acc.add(zeta(b as f64)?);
            acc.add(-hurwitz_zeta(b as f64, q)?);
            acc.value()
        }
    };
    let scale = 1.0 + (a.abs() + 1.0).ln();
    Ok(ValueWithError::new(v, 16.0 * EPS * (v.abs() + scale)))
}
