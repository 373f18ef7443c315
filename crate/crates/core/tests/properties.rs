use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use flk_core::elliptic::{ellip_e, ellip_k, frakj_routes, moment_k, EllipticKind, MaclaurinStream};
use flk_core::hyper::{pfq, pochhammer, HypergeometricSpec};
use flk_core::identities::{verify_all, Overrides};
use flk_core::legendre::{legendre_p, shifted_legendre};
use flk_core::numerics::{
    compensated_sum, levin_u_accelerate, sum_with_tail, tanh_sinh_integrate, tanh_sinh_integrate_nodes, Endpoints,
    Node, TailEstimate,
};
use flk_core::specfun::{dilog, gamma, harmonic, sin_pi, HarmonicArg};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn compensated_sum_is_permutation_invariant(
        (terms, shuffled) in prop::collection::vec(-1e6f64..1e6, 1..200)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let a = compensated_sum(&terms).unwrap();
        let b = compensated_sum(&shuffled).unwrap();
        prop_assert!(a.agrees_with(&b, 0.0), "{a} vs {b}");
    }

    #[test]
    fn quadrature_exact_on_polynomials(coeffs in prop::collection::vec(-1.0f64..1.0, 1..=21)) {
        let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let exact: f64 = coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)).sum();
        let scale: f64 = coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
        let v = tanh_sinh_integrate(p, 0.0, 1.0, Endpoints::None, 1e-15).unwrap();
        prop_assert!((v.value - exact).abs() < 1e-13 * scale, "{} vs {exact}", v.value);
    }

    #[test]
    fn gamma_reflection(x in 0.02f64..0.98) {
        let g = gamma(x).unwrap().value * gamma(1.0 - x).unwrap().value;
        prop_assert!((g * sin_pi(x) / PI - 1.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_recurrence(a in -0.89f64..200.0) {
        let h0 = harmonic(HarmonicArg::new(a, 1)).unwrap();
        let h1 = harmonic(HarmonicArg::new(a + 1.0, 1)).unwrap();
        let gap = h1.value - h0.value - 1.0 / (a + 1.0);
        prop_assert!(gap.abs() <= 1e-13 * (1.0 + h1.value.abs()) + h0.abs_error + h1.abs_error, "a={a}: {gap:e}");
    }

    #[test]
    fn dilog_duplication(x in 0.0f64..0.999) {
        let li = |t: f64| dilog(Complex64::new(t, 0.0)).unwrap().re;
        let gap = li(x) + li(-x) - 0.5 * li(x * x);
        prop_assert!(gap.abs() < 1e-12, "x={x}: {gap:e}");
    }

    #[test]
    fn elliptic_monotone_and_ordered(k1 in 0.001f64..0.999, dk in 1e-6f64..0.5) {
        let k2 = (k1 + dk).min(0.9999);
        prop_assume!(k2 > k1);
        let (ka, kb) = (ellip_k(k1).unwrap().value, ellip_k(k2).unwrap().value);
        let (ea, eb) = (ellip_e(k1).unwrap().value, ellip_e(k2).unwrap().value);
        prop_assert!(ka < kb && ea > eb);
        prop_assert!(ea <= ka && eb <= kb);
    }

    #[test]
    fn maclaurin_matches_agm(k2 in 0.0f64..0.5) {
        let mut acc = 0.0;
        let mut p = 1.0;
        for n in 0..200 {
            acc += MaclaurinStream::coefficient(EllipticKind { m: 0 }, n) * p;
            p *= k2;
        }
        let agm = ellip_k(k2.sqrt()).unwrap().value;
        prop_assert!((acc - agm).abs() < 1e-12 * agm);
    }

    #[test]
    fn frakj_routes_agree(m in 0u32..=6, x in 0.01f64..0.9) {
        let r = frakj_routes(m, x).unwrap();
        prop_assert!(r.quadrature.agrees_with(&r.closed, 1e-13 * r.closed.value.abs()));
        prop_assert!(r.maclaurin.agrees_with(&r.closed, 1e-13 * r.closed.value.abs()));
    }

    #[test]
    fn shifted_legendre_orthogonality(m in 0usize..=20, n in 0usize..=20) {
        let f = |x: f64| shifted_legendre(m, x) * shifted_legendre(n, x);
        let v = tanh_sinh_integrate(f, 0.0, 1.0, Endpoints::None, 1e-15).unwrap().value;
        let want = if m == n { 1.0 / (2.0 * n as f64 + 1.0) } else { 0.0 };
        prop_assert!((v - want).abs() < 1e-12, "m={m} n={n}: {v}");
    }

    #[test]
    fn term_ratio_matches_pochhammer_products(
        upper in prop::collection::vec(0.1f64..5.0, 1..4),
        lower in prop::collection::vec(0.1f64..5.0, 0..3),
        x in -0.95f64..0.95,
    ) {
        let spec = HypergeometricSpec::new(&upper, &lower, x);
        let mut t = 1.0;
        for n in 0..40 {
            let direct = spec.term_direct(n);
            prop_assert!((t - direct).abs() <= 1e-13 * direct.abs().max(1e-300), "n={n}: {t} vs {direct}");
            t *= spec.term_ratio(n);
        }
    }
}

#[test]
fn harmonic_b_zero_is_identity() {
    for a in [-0.5, 0.0, 0.75, 3.0, 41.25] {
        assert_eq!(harmonic(HarmonicArg::new(a, 0)).unwrap().value, a);
    }
}

#[test]
fn tail_summation_and_levin_agree() {
    let partial = |term: &dyn Fn(f64) -> f64, n: usize| -> Vec<f64> {
        let mut s = 0.0;
        (0..n)
            .map(|k| {
                s += term(k as f64);
                s
            })
            .collect()
    };
    let basel = |n: f64| 1.0 / ((n + 1.0) * (n + 1.0));
    let catalan =
        |n: f64| (if (n as u64).is_multiple_of(2) { 1.0 } else { -1.0 }) / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
    let cases: [(&dyn Fn(f64) -> f64, TailEstimate); 2] =
        [(&basel, TailEstimate::PowerLaw { exponent: 2.0 }), (&catalan, TailEstimate::Alternating)];
    for (term, tail) in cases {
        let a = sum_with_tail(term, tail, 1e-13, 1 << 16).unwrap();
        let b = levin_u_accelerate(&partial(term, 24)).unwrap();
        assert!(a.agrees_with(&b, 0.0), "{a} vs {b}");
    }
}

#[test]
fn moment_k_routes_agree() {
    for eta in [0.0, 0.5, 1.0, 2.0, 3.0, 7.3] {
        let r = moment_k(eta).unwrap();
        let fl = r.route("fl").unwrap();
        let hyper = r.route("3f2").unwrap();
        assert!((fl.value - hyper.value).abs() < 1e-10 * hyper.value, "eta={eta}");
    }
}

#[test]
fn brafman_formula() {
    let s = 0.25;
    for x in [0.2, 0.6] {
        for z in [0.1f64, 0.3] {
            let mut partial = Vec::with_capacity(200);
            let (mut c, mut zn, mut acc) = (1.0, 1.0, 0.0);
            for n in 0..200 {
                acc += c * legendre_p(n, x).value * zn;
                partial.push(acc);
                let k = n as f64;
                c *= (s + k) * (1.0 - s + k) / ((k + 1.0) * (k + 1.0));
                zn *= z;
            }
            // accelerate while the increments are still resolved
            let used = (1..40).find(|&n| partial[n] == partial[n - 1]).unwrap_or(40);
            let lhs = levin_u_accelerate(&partial[..used]).unwrap();
            let rho = (1.0 - 2.0 * x * z + z * z).sqrt();
            let f = |y: f64| pfq(&HypergeometricSpec::new(&[s, 1.0 - s], &[1.0], y), 1e-16).unwrap().value;
            let rhs = f((1.0 - z - rho) / 2.0) * f((1.0 + z - rho) / 2.0);
            assert!((partial[199] - rhs).abs() < 1e-9, "x={x} z={z}");
            assert!((lhs.value - rhs).abs() < 1e-9, "x={x} z={z}: {lhs}");
        }
    }
}

#[test]
fn legendre_generating_function() {
    for x in [0.3, 0.7] {
        for z in [0.2f64, 0.5] {
            let (mut acc, mut zn) = (0.0, 1.0);
            for n in 0..120 {
                acc += legendre_p(n, x).value * zn;
                zn *= z;
            }
            let want = 1.0 / (1.0 - 2.0 * x * z + z * z).sqrt();
            assert!((acc - want).abs() < 1e-10, "x={x} z={z}");
        }
    }
}

#[test]
fn wallis_central_binomial() {
    for n in 0..=10i32 {
        let f = |t: f64| (4.0f64).powi(n) * t.sin().powi(2 * n);
        let v = tanh_sinh_integrate(f, 0.0, PI / 2.0, Endpoints::None, 1e-15).unwrap().value * 2.0 / PI;
        let c = pochhammer(0.5, n as usize) * (4.0f64).powi(n) / pochhammer(1.0, n as usize);
        assert!((v - c).abs() < 1e-10 * c, "n={n}: {v} vs {c}");
        assert!((c - c.round()).abs() < 1e-9 * c);
    }
}

#[test]
fn log_squared_moments_are_harmonic() {
    for n in 1..=8 {
        let f = |node: Node| n as f64 * node.x.powi(n - 1) * node.to_b.ln().powi(2);
        let v = tanh_sinh_integrate_nodes(f, 0.0, 1.0, Endpoints::Right, 1e-14).unwrap().value;
        let h1 = harmonic(HarmonicArg::new(n as f64, 1)).unwrap().value;
        let h2 = harmonic(HarmonicArg::new(n as f64, 2)).unwrap().value;
        assert!((v.value - (h1 * h1 + h2)).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn registry_plans_agree_pairwise() {
    for r in verify_all(None, &Overrides::default()) {
        for (i, a) in r.plans.iter().enumerate() {
            for b in &r.plans[i + 1..] {
                let gap = (a.value - b.value).abs();
                assert!(gap <= a.abs_error + b.abs_error, "{}: {} vs {}: {gap:e}", r.id, a.method, b.method);
            }
        }
    }
}
