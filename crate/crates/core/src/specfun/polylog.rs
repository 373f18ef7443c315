//! Di- and trilogarithm on the closed unit disk.
//!
//! For `|z| <= 0.75` the defining power series is summed directly. Closer to
//! the unit circle the expansion in `μ = ln z` is used:
//!
//! ```text
//! Li_s(e^μ) = sum_{k != s-1} ζ(s-k) μ^k / k!  +  μ^(s-1)/(s-1)! (H_{s-1} - ln(-μ))
//! ```
//!
//! with `ζ` at non-positive integers taken from `B_{2j}/(2j)! = (-1)^(j+1) 2ζ(2j)/(2π)^(2j)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::constants::zeta2;
use super::psi::zeta;
use crate::error::{Error, Result};
use crate::numerics::{ValueWithError, EPS};

const SERIES_RADIUS: f64 = 0.75;

fn power_series(s: u32, z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut zk = z;
    let r = z.norm();
    for k in 1..10_000u32 {
        let t = zk / (k as f64).powi(s as i32);
        // Kahan on each component
        let y = t - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
        if r.powi(k as i32) / (k as f64).powi(s as i32) < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        zk *= z;
    }
    sum
}

fn log_series(s: u32, z: Complex64) -> Result<Complex64> {
    let mu = z.ln();
    let h = if s == 2 { 1.0 } else { 1.5 };
    let mut sum = Complex64::new(0.0, 0.0);
    // k < s-1 and k = s-1
    let mut mk = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    for k in 0..s {
        if k + 1 == s {
            sum += mk / fact * (h - (-mu).ln());
        } else {
            let zk = if s - k == 2 { zeta2() } else { zeta((s - k) as f64)? };
            sum += mk * (zk / fact);
        }
        mk *= mu;
        fact *= (k + 1) as f64;
    }
    // k = s: ζ(0) = -1/2
    sum += mk * (-0.5 / fact);
    // k = 2j - 1 + s, j >= 1
    let mu2 = mu * mu;
    let mut mk = mk * mu2 / mu; // μ^(s+1)
    let two_pi_sq = 4.0 * PI * PI;
    let mut scale = 1.0;
    for j in 1..200u32 {
        scale /= two_pi_sq;
        let j2 = 2.0 * j as f64;
        let denom: f64 = (0..s).map(|i| j2 + i as f64).product();
        let z2j = if j == 1 { zeta2() } else { zeta(j2)? };
        let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
        let c = sign * 2.0 * z2j * scale / denom;
        let t = mk * c;
        sum += t;
        if t.norm() < 1e-18 * sum.norm().max(1e-300) {
            return Ok(sum);
        }
        mk *= mu2;
    }
    Err(Error::outside("polylog log-series did not converge"))
}

/// `Li_s(z)` for `s in {2, 3}` and `|z| <= 1`.
pub fn polylog(s: u32, z: Complex64) -> Result<Complex64> {
    if !(s == 2 || s == 3) {
        return Err(Error::outside(format!("polylog order {s} not supported")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::outside("polylog of a non-finite argument"));
    }
    let r = z.norm();
    if r > 1.0 + 4.0 * EPS {
        return Err(Error::outside(format!("|z| = {r} > 1")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    if z == Complex64::new(1.0, 0.0) {
        return Ok(Complex64::new(if s == 2 { zeta2() } else { zeta(3.0)? }, 0.0));
    }
    if r <= SERIES_RADIUS {
        Ok(power_series(s, z))
    } else {
        log_series(s, z)
    }
}

pub fn dilog(z: Complex64) -> Result<Complex64> {
    polylog(2, z)
}

pub fn trilog(z: Complex64) -> Result<Complex64> {
    polylog(3, z)
}

/// Rogers dilogarithm `L(x) = Li₂(x) + ½ ln x ln(1-x)` on `(0, 1)`.
pub fn rogers_l(x: f64) -> Result<ValueWithError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::outside(format!("rogers_l needs 0 < x < 1, got {x}")));
    }
    let li = dilog(Complex64::new(x, 0.0))?.re;
    let v = li + 0.5 * x.ln() * (-x).ln_1p();
    Ok(ValueWithError::new(v, 1e-15 * (1.0 + v.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn li2(x: f64) -> f64 {
        dilog(Complex64::new(x, 0.0)).unwrap().re
    }

    #[test]
    fn special_values() {
        assert!((li2(1.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((li2(-1.0) + PI * PI / 12.0).abs() < 1e-15);
        let ln2 = std::f64::consts::LN_2;
        assert!((li2(0.5) - (PI * PI / 12.0 - 0.5 * ln2 * ln2)).abs() < 1e-15);
        let l3 = trilog(Complex64::new(0.5, 0.0)).unwrap().re;
        let z3 = 1.202_056_903_159_594_285_4;
        let expect = 7.0 / 8.0 * z3 - PI * PI / 12.0 * ln2 + ln2.powi(3) / 6.0;
        assert!((l3 - expect).abs() < 1e-15);
    }

    #[test]
    fn complex_reference_values() {
        // mpmath, 25 digits
        let a = dilog(Complex64::new(0.0, SQRT_2 - 1.0)).unwrap();
        assert!((a.im - 0.406_766_154_249_813_513_245_292_2).abs() < 1e-15, "{a}");
        let b = trilog(Complex64::new(0.5, 0.5)).unwrap();
        assert!((b.im - 0.570_077_407_088_768_978_195_609_8).abs() < 1e-15, "{b}");
        let c = dilog(Complex64::new(0.6, 0.7)).unwrap();
        assert!((c.re - 0.460_368_182_863_722_909_572_244_7).abs() < 1e-14, "{c}");
        assert!((c.im - 0.909_937_945_796_688_670_606_266_2).abs() < 1e-14, "{c}");
    }

    #[test]
    fn bisection_identity() {
        let a = SQRT_2 - 1.0;
        let lhs = li2(a) - li2(a * a) / 4.0;
        let l = SQRT_2.ln_1p();
        assert!((lhs - (PI * PI / 16.0 - l * l / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn rogers_values() {
        assert!((rogers_l(0.5).unwrap().value - PI * PI / 12.0).abs() < 1e-14);
        let a = SQRT_2 - 1.0;
        let v = 4.0 * rogers_l(a).unwrap().value - rogers_l(a * a).unwrap().value;
        assert!((v - PI * PI / 4.0).abs() < 1e-12);
        assert!(rogers_l(1e-300).unwrap().value.abs() < 1e-290);
        assert!(rogers_l(1.0).is_err());
    }

    #[test]
    fn outside_unit_disk() {
        assert!(matches!(dilog(Complex64::new(1.1, 0.0)), Err(Error::OutsideDomain(_))));
    }
}
