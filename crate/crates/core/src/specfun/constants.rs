use std::sync::OnceLock;

use crate::numerics::{alternating_limit, CompensatedSum, ValueWithError, EPS};

/// Euler–Mascheroni constant to 20 digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

pub fn euler_gamma() -> ValueWithError {
    ValueWithError::rounded(EULER_GAMMA)
}

pub fn zeta2() -> f64 {
    std::f64::consts::PI * std::f64::consts::PI / 6.0
}

pub fn ln_one_plus_sqrt2() -> f64 {
    std::f64::consts::SQRT_2.ln_1p()
}

/// Catalan's constant `G = sum (-1)^n / (2n+1)^2`, by repeated averaging of
/// partial sums.
pub fn catalan_g() -> ValueWithError {
    static G: OnceLock<ValueWithError> = OnceLock::new();
    *G.get_or_init(|| {
        let start = 64;
        let depth = 40;
        let mut acc = CompensatedSum::new();
        let mut partial = Vec::with_capacity(start + depth + 1);
        for n in 0..=(start + depth) {
            let d = (2 * n + 1) as f64;
            acc.add(if n % 2 == 0 { 1.0 } else { -1.0 } / (d * d));
            partial.push(acc.value());
        }
        let v = alternating_limit(&partial[start..]);
        ValueWithError::new(v.value, v.abs_error.max(2.0 * EPS * v.value))
    })
}

/// Apéry's constant via `ζ(3) = (5/2) sum_{n>=1} (-1)^(n+1) / (n^3 C(2n,n))`.
pub fn zeta3() -> ValueWithError {
    static Z3: OnceLock<ValueWithError> = OnceLock::new();
    *Z3.get_or_init(|| {
        let mut acc = CompensatedSum::new();
        let mut binom = 1.0;
        for n in 1..=40u32 {
            let nf = n as f64;
            binom *= 2.0 * (2.0 * nf - 1.0) / nf;
            let t = 1.0 / (nf * nf * nf * binom);
            acc.add(if n % 2 == 1 { t } else { -t });
        }
        let v = 2.5 * acc.value();
        ValueWithError::new(v, 4.0 * EPS * v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{tanh_sinh_integrate, Endpoints};

    #[test]
    fn catalan_matches_reference() {
        let g = catalan_g();
        assert!((g.value - 0.915_965_594_177_219_015_054_6).abs() < 1e-15, "{g}");
    }

    #[test]
    fn catalan_matches_integral_definition() {
        // G = (1/2) ∫_0^{π/2} θ / sin θ dθ
        let half_pi = std::f64::consts::FRAC_PI_2;
        let v = tanh_sinh_integrate(|t| if t == 0.0 { 1.0 } else { t / t.sin() }, 0.0, half_pi, Endpoints::None, 1e-15)
            .unwrap();
        assert!((0.5 * v.value - catalan_g().value).abs() < 1e-14);
    }

    #[test]
    fn zeta3_matches_reference() {
        let z = zeta3();
        assert!(((z.value - 1.202_056_903_159_594_285_4) / z.value).abs() < 1e-15);
    }
}
