use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{ValueWithError, EPS};

/// `(K, E)` from the complementary parameter `kc2 = 1 - k^2` in `(0, 1]`.
fn agm_pair(kc2: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = kc2.sqrt();
    let k2 = 1.0 - kc2;
    // sum of 2^(n-1) c_n^2, with c_{n+1} = c_n^2 / (4 a_{n+1})
    let mut c = k2.sqrt();
    let mut weight = 0.5;
    let mut s = weight * k2;
    for _ in 0..64 {
        let a1 = 0.5 * (a + b);
        let b1 = (a * b).sqrt();
        c = c * c / (4.0 * a1);
        weight *= 2.0;
        s += weight * c * c;
        a = a1;
        b = b1;
        if c <= EPS * a * 1e-3 {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - s))
}

fn check_kc2(kc2: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kc2) {
        return Err(Error::outside(format!("complementary parameter {kc2} not in [0, 1]")));
    }
    Ok(())
}

/// `K` as a function of the complementary parameter `1 - k^2`.
pub fn ellip_k_comp(kc2: f64) -> Result<ValueWithError> {
    check_kc2(kc2)?;
    if kc2 == 0.0 {
        return Err(Error::Divergent("K(1)".into()));
    }
    let (k, _) = agm_pair(kc2);
    Ok(ValueWithError::new(k, 8.0 * EPS * k))
}

/// `E` as a function of the complementary parameter `1 - k^2`.
pub fn ellip_e_comp(kc2: f64) -> Result<ValueWithError> {
    check_kc2(kc2)?;
    if kc2 == 0.0 {
        return Ok(ValueWithError::exact(1.0));
    }
    let (k, e) = agm_pair(kc2);
    Ok(ValueWithError::new(e, 8.0 * EPS * k))
}

/// `1 - E` as a function of `1 - k^2`, without cancellation as `k -> 1`.
pub fn ellip_e_deficit(kc2: f64) -> Result<ValueWithError> {
    check_kc2(kc2)?;
    if kc2 >= DEFICIT_SERIES_MAX {
        let e = ellip_e_comp(kc2)?;
        return Ok(ValueWithError::new(1.0 - e.value, e.abs_error + EPS));
    }
    if kc2 == 0.0 {
        return Ok(ValueWithError::exact(0.0));
    }
    // E = 1 + Σ_{n>=1} c_n y^n (L - d_n), L = ln(4/k'),
    // c_n = ((2n-1)!!/(2n)!!)^2 2n/(2n-1), d_n = Σ_{j<n} 2/((2j-1)2j) + 1/((2n-1)2n)
    let l = 2.0 * std::f64::consts::LN_2 - 0.5 * kc2.ln();
    let (mut w, mut p, mut partial) = (1.0f64, 1.0f64, 0.0f64);
    let mut sum = 0.0;
    for n in 1..200 {
        let nf = n as f64;
        w *= ((2.0 * nf - 1.0) / (2.0 * nf)).powi(2);
        p *= kc2;
        let last = 1.0 / ((2.0 * nf - 1.0) * 2.0 * nf);
        let t = w * 2.0 * nf / (2.0 * nf - 1.0) * p * (l - partial - last);
        partial += 2.0 * last;
        sum -= t;
        if t.abs() < 0.25 * EPS * sum.abs() {
            break;
        }
    }
    Ok(ValueWithError::new(sum, 8.0 * EPS * sum.abs()))
}

const DEFICIT_SERIES_MAX: f64 = 0.05;

fn modulus_to_comp(k: f64) -> Result<f64> {
    if !(k.abs() <= 1.0) {
        return Err(Error::outside(format!("modulus {k} outside [-1, 1]")));
    }
    Ok((1.0 - k) * (1.0 + k))
}

/// Complete elliptic integral of the first kind, modulus convention.
pub fn ellip_k(k: f64) -> Result<ValueWithError> {
    ellip_k_comp(modulus_to_comp(k)?)
}

/// Complete elliptic integral of the second kind, modulus convention.
pub fn ellip_e(k: f64) -> Result<ValueWithError> {
    ellip_e_comp(modulus_to_comp(k)?)
}
