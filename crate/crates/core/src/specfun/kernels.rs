use std::f64::consts::{PI, SQRT_2};

use super::gamma::ln_gamma_ratio;

/// Central-binomial kernels, continued to real `n` through Γ ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `C(2n,n)^2 / 16^n`
    CentralSq16,
    /// `C(4n,2n) C(2n,n) / 64^n`
    Quarter64,
    /// `C(2n,n) / 4^n`
    Central4,
    /// `C(2n,n)^3 / 64^n`
    CentralCube64,
    /// `1`
    One,
}

/// Evaluates a kernel at real `n >= 0` in log space.
pub fn binomial_kernel(kernel: Kernel, n: f64) -> f64 {
    match kernel {
        // C(2n,n)/4^n = Γ(n+1/2) / (√π Γ(n+1))
        Kernel::Central4 => ln_gamma_ratio(n, 0.5, 1.0).exp() / PI.sqrt(),
        Kernel::CentralSq16 => (2.0 * ln_gamma_ratio(n, 0.5, 1.0)).exp() / PI,
        Kernel::CentralCube64 => (3.0 * ln_gamma_ratio(n, 0.5, 1.0)).exp() / (PI * PI.sqrt()),
        // Γ(n+1/4) Γ(n+3/4) / (Γ(1/4) Γ(3/4) Γ(n+1)^2), Γ(1/4)Γ(3/4) = π√2
        Kernel::Quarter64 => (ln_gamma_ratio(n, 0.25, 1.0) + ln_gamma_ratio(n, 0.75, 1.0)).exp() / (PI * SQRT_2),
        Kernel::One => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn integer_values_match_binomials() {
        for n in 0..40u64 {
            let c = binom(2 * n, n);
            let cases = [
                (Kernel::Central4, c / 4f64.powi(n as i32)),
                (Kernel::CentralSq16, c * c / 16f64.powi(n as i32)),
                (Kernel::CentralCube64, c * c * c / 64f64.powi(n as i32)),
                (Kernel::Quarter64, binom(4 * n, 2 * n) * c / 64f64.powi(n as i32)),
            ];
            for (k, exact) in cases {
                let v = binomial_kernel(k, n as f64);
                assert!(((v - exact) / exact).abs() < 1e-13, "{k:?} n={n}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn large_index_asymptotics() {
        let n = 1e7;
        let v = binomial_kernel(Kernel::CentralSq16, n);
        assert!((v * PI * n - 1.0).abs() < 1e-6);
    }
}
