use std::f64::consts::SQRT_2;

use super::rhs::Constant::{self, *};
use super::routes::{self, DoubleSeries, DIAGONALS};
use super::{Expr, IdentityRecord, Plan, PlanContext, Rhs, TolClass};
use crate::elliptic::{
    ksq_quadrature, ksq_series, ksq_weighted_integral, moment_fl, moment_quadrature, pi4_ratio, pi_ratio, ratio_15pi32,
    tripleform,
};
use crate::error::{Error, MapEstimate, Result};
use crate::hyper::{pfq, quarter_integer_3f2_family, HypergeometricSpec};
use crate::numerics::ValueWithError;
use crate::series::{
    evaluate_twisted_routes, integral_route, param_deriv_rhs, param_deriv_spec, w_series_sum, HarmonicFactor,
    IntegralId, Poly, RationalFactor, TwistedTermSpec,
};
use crate::specfun::{rogers_l, zeta2, Kernel};

const P: Constant = Pi;
const L2: Constant = Ln2;
const LS: Constant = LnOnePlusSqrt2;
const G: Constant = Catalan;

fn h(scale: f64, shift: f64) -> HarmonicFactor {
    HarmonicFactor::h(scale, shift)
}

fn inv(factors: &[(f64, f64, u32)]) -> RationalFactor {
    RationalFactor::inverse_of(factors)
}

fn one() -> RationalFactor {
    RationalFactor::one()
}

fn a_kernel() -> TwistedTermSpec {
    TwistedTermSpec::new(Kernel::CentralSq16)
}

fn q_kernel() -> TwistedTermSpec {
    TwistedTermSpec::new(Kernel::Quarter64)
}

fn series(tol: TolClass, spec: TwistedTermSpec) -> Plan {
    Plan::new("series", tol, move |c: &PlanContext| Ok(evaluate_twisted_routes(&spec, c.target, c.max_terms)?.value))
}

fn hyper(tol: TolClass, upper: &[f64], lower: &[f64], scale: f64) -> Plan {
    let spec = HypergeometricSpec::new(upper, lower, 1.0);
    Plan::new("pfq", tol, move |c: &PlanContext| pfq(&spec, c.target.max(1e-15)).map_estimate(|v| v.scale(scale)))
}

fn integral(tol: TolClass, f: fn() -> Result<ValueWithError>) -> Plan {
    Plan::new("integral", tol, move |_: &PlanContext| f())
}

struct Builder {
    id: &'static str,
    citation: &'static str,
    tags: Vec<&'static str>,
    tol: TolClass,
    parameters: Option<String>,
    plans: Vec<Plan>,
}

fn rec(id: &'static str, citation: &'static str, tags: &[&'static str], tol: TolClass) -> Builder {
    Builder { id, citation, tags: tags.to_vec(), tol, parameters: None, plans: Vec::new() }
}

impl Builder {
    fn plan(mut self, p: Plan) -> Self {
        self.plans.push(p);
        self
    }

    fn series(self, spec: TwistedTermSpec) -> Self {
        let tol = self.tol;
        self.plan(series(tol, spec))
    }

    fn hyper(self, upper: &[f64], lower: &[f64], scale: f64) -> Self {
        let tol = self.tol;
        self.plan(hyper(tol, upper, lower, scale))
    }

    fn integral(self, f: fn() -> Result<ValueWithError>) -> Self {
        let tol = self.tol;
        self.plan(integral(tol, f))
    }

    fn parameters(mut self, text: impl Into<String>) -> Self {
        self.parameters = Some(text.into());
        self
    }

    fn rhs(self, rhs: impl Into<Rhs>) -> IdentityRecord {
        IdentityRecord {
            id: self.id.to_string(),
            citation: self.citation.to_string(),
            tags: self.tags,
            tol_class: self.tol,
            parameters: self.parameters,
            plans: self.plans,
            rhs: rhs.into(),
        }
    }
}

impl From<Expr> for Rhs {
    fn from(e: Expr) -> Self {
        Rhs::Expr(e)
    }
}

fn e() -> Expr {
    Expr::new()
}

fn double_plans(b: Builder, which: DoubleSeries) -> Builder {
    b.plan(Plan::new("reduce-to-single", TolClass::Standard, move |c: &PlanContext| {
        routes::double_reduced(which, c.target, c.max_terms)
    }))
    .plan(Plan::new("diagonal", TolClass::Loose, move |c: &PlanContext| {
        routes::double_direct(which, DIAGONALS, c.allowed)
    }))
}

fn ksq_record(id: &'static str, a: u32, b: u32, p: (i64, i64), q: (i64, i64)) -> IdentityRecord {
    rec(id, "Fourier-Legendre pairing of x^a (1-x)^b K(sqrt x) with K(sqrt x)", &["elliptic", "ksq"], TolClass::Tight)
        .parameters(format!("a={a}, b={b}"))
        .plan(Plan::new("quadrature", TolClass::Tight, move |_: &PlanContext| ksq_quadrature(a, b)))
        .plan(Plan::new("fl-pairing", TolClass::Tight, move |_: &PlanContext| match ksq_series(a, b) {
            Err(Error::ToleranceNotReached { best, .. }) => Ok(best),
            other => other,
        }))
        .plan(Plan::new("rational-fit", TolClass::Tight, move |_: &PlanContext| {
            let fit = ksq_weighted_integral(a, b)?;
            let z3 = crate::specfun::zeta3().value;
            let r = |x: num_rational::Ratio<i64>| *x.numer() as f64 / *x.denom() as f64;
            Ok(ValueWithError::new(r(fit.p) + r(fit.q) * z3, fit.residual))
        }))
        .rhs(e().t(p.0, p.1, &[]).t(q.0, q.1, &[(Zeta3, 1)]))
}

fn param_deriv_record(id: &'static str, j: u32) -> IdentityRecord {
    let spec = param_deriv_spec(j);
    rec(id, "parameter derivative of the FL moment identity for J_m", &["moments", "harmonic"], TolClass::Standard)
        .parameters(format!("j={j}"))
        .series(spec)
        .rhs(Rhs::computed(
            format!("(8 (j!)^2 / pi) sum_(i<=j) [(2i+1)(H_(i-1/2) + ln2) + 1] / ((2i+1)^2 (j-i)! (i+j+1)!), j={j}"),
            move || param_deriv_rhs(j),
        ))
}

fn ln_trio_record(id: &'static str, m: u32, rhs: Expr) -> IdentityRecord {
    rec(id, "quarter-integer 3F2 family at odd m", &["hypergeometric", "quarter"], TolClass::Tight)
        .parameters(format!("m={m}"))
        .series(q_kernel().part(1.0, inv(&[(2.0, m as f64, 1)]), &[]))
        .plan(Plan::new("pfq", TolClass::Tight, move |_: &PlanContext| quarter_integer_3f2_family(m)))
        .plan(Plan::new("integral", TolClass::Tight, move |_: &PlanContext| routes::quarter_family_integral(m)))
        .rhs(rhs)
}

pub(super) fn build() -> Vec<IdentityRecord> {
    use TolClass::*;
    let mut out = vec![
        rec("PARBELOS_DUAL", "palindromic 3F2 at unit argument", &["hypergeometric", "quarter"], Tight)
            .hyper(&[0.25, 0.5, 0.75], &[1.0, 1.5], 1.0)
            .plan(Plan::new("integral", Tight, |_: &PlanContext| routes::quarter_family_integral(1)))
            .rhs(e().t(4, 1, &[(LS, 1), (P, -1)])),
        rec("PARBELOS", "parbelos constant as a 3F2", &["hypergeometric", "quarter"], Tight)
            .hyper(&[-0.5, 0.25, 0.75], &[0.5, 1.0], 1.0)
            .integral(routes::parbelos_integral)
            .rhs(e().t(1, 1, &[(Sqrt2, 1), (P, -1)]).t(1, 1, &[(LS, 1), (P, -1)])),
    ];

    let etas = [-0.5, 0.0, 1.0, 2.7, 10.0];
    let mut b = rec("PI4_RATIO", "ratio of the two 3F2 forms of the K moment", &["moments", "ratio"], Tight)
        .parameters("eta in {-0.5, 0, 1, 2.7, 10}");
    for eta in etas {
        b = b.plan(Plan::new(format!("ratio(eta={eta})"), Tight, move |_: &PlanContext| pi4_ratio(eta)));
    }
    out.push(b.rhs(e().t(1, 4, &[(P, 1)])));

    out.push(
        rec("E_MOMENT_DUAL", "two 3F2 forms of the E moment", &["moments", "elliptic"], Tight)
            .parameters("eta=1")
            .plan(Plan::new("3f2-unit", Tight, |_: &PlanContext| Ok(tripleform(1, 1.0)?[1])))
            .plan(Plan::new("3f2-alternating", Tight, |_: &PlanContext| Ok(tripleform(1, 1.0)?[2])))
            .plan(Plan::new("fl-pairing", Tight, |_: &PlanContext| moment_fl(1, 1.0)))
            .plan(Plan::new("quadrature", Tight, |_: &PlanContext| moment_quadrature(1, 1.0)))
            .rhs(e().t(28, 45, &[])),
    );

    out.extend([
        rec("HN_MINUS_HALF", "FL expansion of an elementary function", &["harmonic", "quarter"], Tight)
            .series(q_kernel().part(1.0, one(), &[h(1.0, 0.0)]).part(-1.0, one(), &[h(1.0, -0.5)]).decay(2.0))
            .integral(routes::hn_minus_half_integral)
            .rhs(e().t(1, 2, &[(P, 1), (Sqrt2, 1)]).t(-2, 1, &[(Sqrt2, 1), (LS, 2), (P, -1)])),
        rec("HALF_PLUS_NH", "shifted FL expansion of sqrt(2-x)", &["harmonic", "quarter"], Tight)
            .plan(Plan::new("series", Tight, |c: &PlanContext| routes::half_plus_nh_series(c.target, c.max_terms)))
            .rhs(e().t(3, 32, &[(P, 1), (Sqrt2, 1)]).t(1, 4, &[(Sqrt2, 1), (P, -1)]).t(1, 2, &[(LS, 1), (P, -1)]).t(
                -3,
                8,
                &[(Sqrt2, 1), (LS, 2), (P, -1)],
            )),
        rec("HN_2NM1", "FL series of E(sqrt x) paired with ln(1-x)", &["harmonic"], Tight)
            .series(a_kernel().start(1).part(1.0, inv(&[(2.0, -1.0, 1)]), &[h(1.0, 0.0)]))
            .integral(routes::hn_2nm1_integral)
            .rhs(e().t(8, 1, &[(L2, 1), (P, -1)]).t(-4, 1, &[(P, -1)])),
        rec("HNP1_REL", "companion of the E(sqrt x) ln(1-x) pairing", &["harmonic", "imported"], Tight)
            .series(a_kernel().part(1.0, inv(&[(1.0, 1.0, 1), (2.0, -1.0, 1)]), &[h(1.0, 1.0)]))
            .rhs(e().t(96, 9, &[(L2, 1), (P, -1)]).t(-88, 9, &[(P, -1)])),
    ]);

    out.push(
        double_plans(
            rec("DOUBLE_HN", "double series from the E transformation", &["double-series"], Standard),
            DoubleSeries::Hn,
        )
        .rhs(e().t(48, 1, &[(P, -1)]).t(32, 1, &[(L2, 2), (P, -1)]).t(-64, 1, &[(L2, 1), (P, -1)]).t(
            -4,
            3,
            &[(P, 1)],
        )),
    );
    out.push(
        double_plans(
            rec("DOUBLE_FACT_HN", "factorial-weighted double series", &["double-series"], Standard),
            DoubleSeries::FactHn,
        )
        .rhs(e().t(12, 1, &[]).t(-1, 3, &[(P, 2)]).t(8, 1, &[(L2, 2)]).t(-16, 1, &[(L2, 1)])),
    );

    let a_h2 = |r: RationalFactor, start: usize| {
        a_kernel().start(start).part(1.0, r.clone(), &[h(1.0, 0.0).power(2)]).part(1.0, r, &[h(1.0, 0.0).order(2)])
    };
    out.extend([
        rec("HSQ_PLUS_H2_NP1", "FL pairing with ln^2(1-x)", &["harmonic"], Tight)
            .series(a_h2(inv(&[(1.0, 1.0, 1)]), 0))
            .integral(routes::hsq_np1_integral)
            .rhs(e().t(64, 1, &[(L2, 2), (P, -1)]).t(-8, 3, &[(P, 1)])),
        rec("H2_NP1", "FL pairing with ln(1-x) ln(x)", &["harmonic"], Tight)
            .series(a_kernel().part(1.0, inv(&[(1.0, 1.0, 1)]), &[h(1.0, 0.0).order(2)]))
            .integral(routes::h2_np1_integral)
            .rhs(e().t(32, 1, &[(G, 1), (P, -1)]).t(2, 3, &[(P, 1)]).t(-16, 1, &[(L2, 1)])),
        rec("HSQ_2NM1SQ", "squared odd denominators with ln^2(1-x)", &["harmonic"], Tight)
            .series(a_h2(inv(&[(2.0, -1.0, 2)]), 1))
            .integral(routes::hsq_2nm1sq_integral)
            .rhs(e().t(64, 1, &[(P, -1)]).t(64, 1, &[(L2, 2), (P, -1)]).t(-96, 1, &[(L2, 1), (P, -1)]).t(
                -8,
                3,
                &[(P, 1)],
            )),
        rec("H2N_2NM1", "even-index harmonic numbers over 2n-1", &["harmonic"], Tight)
            .series(a_kernel().part(1.0, inv(&[(2.0, -1.0, 1)]), &[h(2.0, 0.0)]))
            .integral(routes::h2n_2nm1_integral)
            .rhs(e().t(6, 1, &[(L2, 1), (P, -1)]).t(-2, 1, &[(P, -1)])),
        rec("H2N_NP1", "even-index harmonic numbers over n+1", &["harmonic", "imported"], Tight)
            .series(a_kernel().part(1.0, inv(&[(1.0, 1.0, 1)]), &[h(2.0, 0.0)]))
            .integral(routes::h2n_np1_integral)
            .rhs(e().t(2, 1, &[]).t(4, 1, &[(P, -1)]).t(-12, 1, &[(L2, 1), (P, -1)])),
        rec("QUARTER_HARM", "quarter-shifted harmonic difference", &["harmonic"], Tight)
            .series(a_kernel().part(1.0, one(), &[h(1.0, 0.25)]).part(-1.0, one(), &[h(1.0, -0.25)]).decay(2.0))
            .integral(routes::quarter_harm_integral)
            .rhs(e().t(1, 8, &[(GammaQuarter, 4), (P, -2)]).t(-4, 1, &[(G, 1), (P, -1)])),
        rec("H2N_2NM1SQ", "even-index harmonic numbers over (2n-1)^2", &["harmonic"], Tight)
            .series(a_kernel().start(1).part(1.0, inv(&[(2.0, -1.0, 2)]), &[h(2.0, 0.0)]))
            .integral(routes::h2n_2nm1sq_integral)
            .rhs(e().t(4, 1, &[(G, 1), (P, -1)]).t(6, 1, &[(P, -1)]).t(-12, 1, &[(L2, 1), (P, -1)])),
    ]);

    out.push(
        double_plans(
            rec("DOUBLE_ZETA3_G", "double series integrated against x^m", &["double-series"], Standard),
            DoubleSeries::Zeta3G,
        )
        .rhs(e().t(7, 1, &[(Zeta3, 1), (P, -2)]).t(-4, 1, &[(G, 1), (P, -2)])),
    );

    out.extend([
        rec("DILOG_4F3", "FL expansion reducing a 4F3 to a dilogarithm", &["polylog", "quarter"], Tight)
            .hyper(&[1.0, 1.0, 1.25, 1.75], &[2.0, 2.0, 2.0], 3.0 / 16.0)
            .series(q_kernel().start(1).part(1.0, inv(&[(1.0, 0.0, 1)]), &[]))
            .integral(routes::dilog_integral)
            .rhs(e().t(6, 1, &[(L2, 1)]).t(-2, 1, &[(LS, 1)]).t(-16, 1, &[(ImLi2, 1), (P, -1)])),
        rec("LI3_SERIES", "central binomial series with a trilogarithm", &["polylog"], Tight)
            .series(a_kernel().part(
                1.0,
                RationalFactor { num: Poly::linear(2.0, 1.0), den: inv(&[(1.0, 1.0, 4)]).den },
                &[],
            ))
            .hyper(&[0.5, 1.5, 1.0, 1.0, 1.0], &[2.0, 2.0, 2.0, 2.0], 1.0)
            .rhs(
                e().t(16, 1, &[])
                    .t(-6, 1, &[(P, 2)])
                    .t(-32, 1, &[(L2, 1)])
                    .t(24, 1, &[(L2, 2)])
                    .t(64, 1, &[(G, 1), (P, -1)])
                    .t(-32, 1, &[(P, -1)])
                    .t(256, 1, &[(ImLi3, 1), (P, -1)]),
            ),
    ]);

    let mut b = rec("RATIO_15PI32", "ratio of 3F2 forms for J_2", &["moments", "ratio"], Tight)
        .parameters("eta in {-0.5, 0, 1, 4}");
    for eta in [-0.5, 0.0, 1.0, 4.0] {
        b = b.plan(Plan::new(format!("ratio(eta={eta})"), Tight, move |_: &PlanContext| ratio_15pi32(eta)));
    }
    out.push(b.rhs(e().t(15, 32, &[(P, 1)])));

    let mut b = rec("RATIO_PI_JM", "ratio of 3F2 forms for J_m", &["moments", "ratio"], Standard)
        .parameters("m in {0..5}, eta in {0, 0.5, 2}");
    for m in 0..=5u32 {
        for eta in [0.0, 0.5, 2.0] {
            b = b.plan(Plan::new(format!("ratio(m={m},eta={eta})"), Standard, move |_: &PlanContext| pi_ratio(m, eta)));
        }
    }
    out.push(b.rhs(e().t(1, 1, &[(P, 1)])));

    out.extend([
        param_deriv_record("PARAM_DERIV_J0", 0),
        param_deriv_record("PARAM_DERIV_J1", 1),
        param_deriv_record("PARAM_DERIV_J5", 5),
        ksq_record("KSQ_X", 1, 0, (1, 2), (7, 4)),
        ksq_record("KSQ_X2", 2, 0, (17, 32), (77, 64)),
        ksq_record("KSQ_X2_1MX2", 2, 2, (-126, 1 << 14), (1757, 1 << 14)),
    ]);

    out.extend([
        rec("HN_HALF_NP1", "half-shifted harmonic difference over n+1", &["harmonic"], Tight)
            .series(
                a_kernel()
                    .part(1.0, inv(&[(1.0, 1.0, 1)]), &[h(1.0, 0.0)])
                    .part(-1.0, inv(&[(1.0, 1.0, 1)]), &[h(1.0, -0.5)])
                    .decay(3.0),
            )
            .integral(routes::hn_half_np1_integral)
            .rhs(e().t(4, 1, &[]).t(-8, 1, &[(P, -1)])),
        rec("C2018NEW_HN_NP1SQ", "harmonic numbers over (n+1)^2", &["harmonic", "imported"], Tight)
            .series(a_kernel().part(1.0, inv(&[(1.0, 1.0, 2)]), &[h(1.0, 0.0)]))
            .rhs(e().t(16, 1, &[]).t(32, 1, &[(G, 1), (P, -1)]).t(-64, 1, &[(L2, 1), (P, -1)]).t(-16, 1, &[(L2, 1)])),
        rec("CATALAN_4F3", "4F3 from a standard moment integral", &["hypergeometric", "imported"], Tight)
            .hyper(&[0.5, 0.5, 1.0, 1.0], &[2.0, 2.0, 2.0], 1.0)
            .series(a_kernel().part(1.0, inv(&[(1.0, 1.0, 3)]), &[]))
            .rhs(e().t(-32, 1, &[(G, 1), (P, -1)]).t(48, 1, &[(P, -1)]).t(16, 1, &[(L2, 1)]).t(-16, 1, &[])),
        ln_trio_record("LN_TRIO_M1", 1, e().t(4, 1, &[(LS, 1), (P, -1)])),
        ln_trio_record("LN_TRIO_M3", 3, e().t(4, 15, &[(Sqrt2, 1), (P, -1)]).t(16, 15, &[(LS, 1), (P, -1)])),
        ln_trio_record("LN_TRIO_M5", 5, e().t(68, 315, &[(Sqrt2, 1), (P, -1)]).t(64, 105, &[(LS, 1), (P, -1)])),
        rec("W_3PI2_8", "rational sequence W paired with 1/(2m+1)", &["elliptic"], Tight)
            .plan(Plan::new("series", Tight, |c: &PlanContext| w_series_sum(c.target)))
            .plan(Plan::new("integral", Tight, |_: &PlanContext| integral_route(IntegralId::XKOverSqrt1mx)))
            .rhs(e().t(3, 8, &[(P, 2)])),
    ]);

    let mut b = rec("TRIPLEFORM_M3", "three 3F2 forms of the J_m moment", &["moments", "elliptic"], Tight)
        .parameters("m=3, eta=2");
    for (i, name) in ["tripleform-1", "tripleform-2", "tripleform-3"].into_iter().enumerate() {
        b = b.plan(Plan::new(name, Tight, move |_: &PlanContext| Ok(tripleform(3, 2.0)?[i])));
    }
    out.push(
        b.plan(Plan::new("fl-pairing", Tight, |_: &PlanContext| moment_fl(3, 2.0)))
            .plan(Plan::new("quadrature", Tight, |_: &PlanContext| moment_quadrature(3, 2.0)))
            .rhs(e().t(2336, 10395, &[])),
    );

    out.extend([
        rec("H2N_NP2", "even-index harmonic numbers over n+2", &["harmonic"], Tight)
            .series(a_kernel().start(1).part(1.0, inv(&[(1.0, 2.0, 1)]), &[h(2.0, 0.0)]))
            .rhs(e().t(92, 27, &[(P, -1)]).t(24, 27, &[]).t(-180, 27, &[(L2, 1), (P, -1)])),
        rec("H2_NP1_AUX", "auxiliary trigamma series", &["harmonic"], Tight)
            .series(
                a_kernel()
                    .part(1.0, inv(&[(1.0, 1.0, 3)]), &[])
                    .part(1.0, inv(&[(1.0, 1.0, 2)]), &[h(1.0, 1.0)])
                    .part(-zeta2(), inv(&[(1.0, 1.0, 1)]), &[])
                    .part(1.0, inv(&[(1.0, 1.0, 1)]), &[h(1.0, 0.0).order(2)]),
            )
            .rhs(e().t(96, 1, &[(P, -1)]).t(-64, 1, &[(L2, 1), (P, -1)]).t(-16, 1, &[])),
        rec("ROGERS_L", "Rogers dilogarithm at sqrt2 - 1", &["polylog"], Tight)
            .plan(Plan::new("rogers-l", Tight, |_: &PlanContext| {
                let x = SQRT_2 - 1.0;
                let a = rogers_l(x)?;
                let b = rogers_l(x * x)?;
                Ok(ValueWithError::new(4.0 * a.value - b.value, 4.0 * a.abs_error + b.abs_error))
            }))
            .rhs(e().t(1, 4, &[(P, 2)])),
    ]);
    out
}
