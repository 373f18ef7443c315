use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::moments::raw_moment;
use super::polynomials::{shifted_legendre, shifted_legendre_all};
use crate::elliptic::{ellip_e_comp, ellip_k_comp, fl_coefficient, frakj_comp};
use crate::error::{Error, Result};
use crate::numerics::{sum_with_tail, tanh_sinh_integrate_nodes, Endpoints, Node, TailEstimate, ValueWithError, EPS};
use crate::specfun::digamma;

const RHO: f64 = SQRT_2 - 1.0;

/// Functions with closed-form FL coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogId {
    /// `K(√x)`
    KSqrt,
    /// `E(√x)`
    ESqrt,
    /// `1 / √(2 - x)`
    InvSqrt2mx,
    /// `(2 - x)^(-3/2)`
    Pow2mxM32,
    /// `√(2 - x)`
    Sqrt2mx,
    /// `x^η`, `η > -1`
    Power(f64),
    /// `arcsin(√x) / √x`
    ArcsinSqrtOverSqrt,
    /// `1 / (1 + √(1 - x/2))`
    InvOnePlusSqrt,
    /// `J_2(x) = ∫_0^{π/2} (1 - x sin^2 θ)^(3/2) dθ`
    FrakJ,
    /// `x (1 - x) K(√x)`
    X1mxKSqrt,
}

/// How fast the coefficients decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlDecay {
    /// `|c_n| ~ ratio^n`.
    Geometric { ratio: f64 },
    /// `|c_n| ~ n^-exponent`, same sign eventually.
    PowerLaw { exponent: f64 },
    /// Eventually alternating with decaying size.
    Alternating,
    /// Only the first `count` coefficients are nonzero or known.
    Finite { count: usize },
}

impl CatalogId {
    pub const DEFAULT_POWER: f64 = 0.5;

    pub fn all(eta: f64) -> [CatalogId; 10] {
        [
            CatalogId::KSqrt,
            CatalogId::ESqrt,
            CatalogId::InvSqrt2mx,
            CatalogId::Pow2mxM32,
            CatalogId::Sqrt2mx,
            CatalogId::Power(eta),
            CatalogId::ArcsinSqrtOverSqrt,
            CatalogId::InvOnePlusSqrt,
            CatalogId::FrakJ,
            CatalogId::X1mxKSqrt,
        ]
    }

    pub fn id(self) -> String {
        match self {
            CatalogId::KSqrt => "K_sqrt".into(),
            CatalogId::ESqrt => "E_sqrt".into(),
            CatalogId::InvSqrt2mx => "inv_sqrt_2mx".into(),
            CatalogId::Pow2mxM32 => "pow_2mx_m3_2".into(),
            CatalogId::Sqrt2mx => "sqrt_2mx".into(),
            CatalogId::Power(eta) => format!("x_pow:{eta}"),
            CatalogId::ArcsinSqrtOverSqrt => "arcsin_sqrt_over_sqrt".into(),
            CatalogId::InvOnePlusSqrt => "inv_1p_sqrt_1mx2".into(),
            CatalogId::FrakJ => "frakJ".into(),
            CatalogId::X1mxKSqrt => "x1mx_K_sqrt".into(),
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CatalogId::KSqrt => "K(sqrt x)",
            CatalogId::ESqrt => "E(sqrt x)",
            CatalogId::InvSqrt2mx => "1/sqrt(2-x)",
            CatalogId::Pow2mxM32 => "(2-x)^(-3/2)",
            CatalogId::Sqrt2mx => "sqrt(2-x)",
            CatalogId::Power(_) => "x^eta",
            CatalogId::ArcsinSqrtOverSqrt => "arcsin(sqrt x)/sqrt x",
            CatalogId::InvOnePlusSqrt => "1/(1+sqrt(1-x/2))",
            CatalogId::FrakJ => "J_2(x) = int_0^(pi/2) (1 - x sin^2 t)^(3/2) dt",
            CatalogId::X1mxKSqrt => "x(1-x) K(sqrt x)",
        }
    }

    /// Function value at a quadrature node on `[0, 1]`.
    pub fn eval(self, node: Node) -> f64 {
        let (x, y) = (node.x, node.to_b);
        let ok = |r: Result<ValueWithError>| r.map(|v| v.value).unwrap_or(f64::NAN);
        match self {
            CatalogId::KSqrt => ok(ellip_k_comp(y)),
            CatalogId::ESqrt => ok(ellip_e_comp(y)),
            CatalogId::InvSqrt2mx => 1.0 / (1.0 + y).sqrt(),
            CatalogId::Pow2mxM32 => (1.0 + y).powf(-1.5),
            CatalogId::Sqrt2mx => (1.0 + y).sqrt(),
            CatalogId::Power(eta) => node.from_a.powf(eta),
            CatalogId::ArcsinSqrtOverSqrt => {
                let s = x.sqrt();
                if s < 1e-8 {
                    1.0 + x / 6.0
                } else {
                    s.asin() / s
                }
            }
            CatalogId::InvOnePlusSqrt => 1.0 / (1.0 + (0.5 + 0.5 * y).sqrt()),
            CatalogId::FrakJ => ok(frakj_comp(2, y)),
            CatalogId::X1mxKSqrt => x * y * ok(ellip_k_comp(y)),
        }
    }

    /// Closed-form coefficient, continued to real `n` where the rule allows.
    pub fn coefficient(self, n: f64) -> f64 {
        match self {
            CatalogId::KSqrt => fl_coefficient(0, n),
            CatalogId::ESqrt => fl_coefficient(1, n),
            CatalogId::InvSqrt2mx => 2.0 * RHO.powf(2.0 * n + 1.0),
            CatalogId::Pow2mxM32 => (2.0 * n + 1.0) * SQRT_2 * RHO.powf(2.0 * n + 1.0),
            CatalogId::Sqrt2mx => {
                2.0 * RHO.powf(2.0 * n + 1.0) * (3.0 + SQRT_2 + 2.0 * SQRT_2 * n) / ((1.0 - 2.0 * n) * (2.0 * n + 3.0))
            }
            CatalogId::Power(eta) => (2.0 * n + 1.0) * raw_moment(eta, n as usize),
            CatalogId::ArcsinSqrtOverSqrt => {
                // 2/(2n+1) - 4 ∫_0^1 x^(2n+2)/(1+x^2) dx, the integral as a ψ difference
                let s = 2.0 * n + 3.0;
                let integral = match (digamma((s + 2.0) / 4.0), digamma(s / 4.0)) {
                    (Ok(a), Ok(b)) => 0.25 * (a - b),
                    _ => f64::NAN,
                };
                2.0 / (2.0 * n + 1.0) - 4.0 * integral
            }
            CatalogId::InvOnePlusSqrt => {
                // 8 [ρ^(2n+1) / (2√2) - (2n+1) ∫_0^ρ t^(2n+1)/(1+t^2) dt]
                let r2 = RHO * RHO;
                let mut integral = 0.0;
                let mut p = RHO.powf(2.0 * n + 2.0);
                for k in 0..64 {
                    let term = p / (2.0 * n + 2.0 + 2.0 * k as f64);
                    integral += if k % 2 == 0 { term } else { -term };
                    p *= r2;
                    if term < 1e-18 * integral.abs() {
                        break;
                    }
                }
                8.0 * (RHO.powf(2.0 * n + 1.0) / (2.0 * SQRT_2) - (2.0 * n + 1.0) * integral)
            }
            CatalogId::FrakJ => fl_coefficient(2, n),
            CatalogId::X1mxKSqrt => {
                let s = 4.0 * n * n + 4.0 * n - 15.0;
                8.0 * (9.0 - 4.0 * n - 4.0 * n * n) / ((2.0 * n + 1.0) * s * s)
            }
        }
    }

    pub fn decay(self) -> FlDecay {
        let geometric = FlDecay::Geometric { ratio: RHO * RHO };
        match self {
            CatalogId::KSqrt => FlDecay::PowerLaw { exponent: 1.0 },
            CatalogId::ESqrt => FlDecay::PowerLaw { exponent: 3.0 },
            CatalogId::InvSqrt2mx | CatalogId::Pow2mxM32 | CatalogId::Sqrt2mx | CatalogId::InvOnePlusSqrt => geometric,
            CatalogId::Power(eta) if eta >= 0.0 && eta == eta.round() => FlDecay::Finite { count: eta as usize + 1 },
            CatalogId::Power(_) => FlDecay::Alternating,
            CatalogId::ArcsinSqrtOverSqrt => FlDecay::PowerLaw { exponent: 2.0 },
            CatalogId::FrakJ => FlDecay::PowerLaw { exponent: 5.0 },
            CatalogId::X1mxKSqrt => FlDecay::PowerLaw { exponent: 3.0 },
        }
    }

    pub fn endpoints(self) -> Endpoints {
        match self {
            CatalogId::Power(eta) if eta < 0.0 => Endpoints::Both,
            _ => Endpoints::Right,
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("x_pow:") {
            let eta: f64 = rest.parse().map_err(|_| Error::UnknownFunction(s.to_string()))?;
            if !(eta > -1.0) {
                return Err(Error::outside(format!("x^eta needs eta > -1, got {eta}")));
            }
            return Ok(CatalogId::Power(eta));
        }
        CatalogId::all(CatalogId::DEFAULT_POWER)
            .into_iter()
            .find(|c| !matches!(c, CatalogId::Power(_)) && c.id() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// Where a coefficient stream comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlSource {
    Catalog(CatalogId),
    Numeric,
}

#[derive(Clone)]
enum Generator {
    Closed(CatalogId),
    Table(Arc<Vec<ValueWithError>>),
}

/// Coefficients `c_n` of `f = Σ c_n P̃_n` on `(0, 1)`.
#[derive(Clone)]
pub struct FLCoefficients {
    generator: Generator,
    decay: FlDecay,
}

impl fmt::Debug for FLCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FLCoefficients").field("source", &self.source()).field("decay", &self.decay).finish()
    }
}

impl FLCoefficients {
    pub fn source(&self) -> FlSource {
        match &self.generator {
            Generator::Closed(id) => FlSource::Catalog(*id),
            Generator::Table(_) => FlSource::Numeric,
        }
    }

    pub fn decay(&self) -> FlDecay {
        self.decay
    }

    /// Numeric tables cover only `n < len`; closed forms are unbounded.
    pub fn len(&self) -> Option<usize> {
        match &self.generator {
            Generator::Closed(_) => None,
            Generator::Table(t) => Some(t.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn coefficient(&self, n: usize) -> Result<ValueWithError> {
        match &self.generator {
            Generator::Closed(id) => {
                let v = id.coefficient(n as f64);
                if !v.is_finite() {
                    return Err(Error::NonFiniteTerm { index: n });
                }
                Ok(ValueWithError::new(v, 32.0 * EPS * v.abs() + EPS * 1e-3 * v.abs().max(1e-300)))
            }
            Generator::Table(t) => t
                .get(n)
                .copied()
                .ok_or_else(|| Error::outside(format!("coefficient {n} beyond the numeric table of {}", t.len()))),
        }
    }

    pub fn take(&self, count: usize) -> Result<Vec<ValueWithError>> {
        (0..count).map(|n| self.coefficient(n)).collect()
    }

    /// Truncated series `Σ_{n<terms} c_n P̃_n(x)` with a tail bound when the
    /// decay is geometric (`|P̃_n| <= 1`).
    pub fn partial_sum(&self, x: f64, terms: usize) -> Result<ValueWithError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::outside(format!("x = {x} not in [0, 1]")));
        }
        let p = shifted_legendre_all(terms, x);
        let mut sum = ValueWithError::exact(0.0);
        for (n, pn) in p.iter().enumerate() {
            sum = sum + self.coefficient(n)? * *pn;
        }
        let tail = match self.decay {
            FlDecay::Geometric { ratio } => match self.coefficient(terms) {
                Ok(c) => c.value.abs() * (terms as f64 + 2.0) / (1.0 - ratio),
                Err(_) => f64::INFINITY,
            },
            FlDecay::Finite { count } if terms >= count => 0.0,
            _ => f64::INFINITY,
        };
        Ok(sum.widen(tail))
    }
}

/// Closed-form coefficient stream for a catalog entry.
pub fn fl_catalog(id: CatalogId) -> FLCoefficients {
    FLCoefficients { generator: Generator::Closed(id), decay: id.decay() }
}

/// `c_n = (2n+1) ∫_0^1 P̃_n(x) f(x) dx` for `n < count` by quadrature.
pub fn fl_numeric_nodes(f: impl Fn(Node) -> f64, count: usize, endpoints: Endpoints) -> Result<FLCoefficients> {
    let mut table = Vec::with_capacity(count);
    for n in 0..count {
        let g = |node: Node| f(node) * shifted_legendre(n, node.x);
        let q = tanh_sinh_integrate_nodes(g, 0.0, 1.0, endpoints, 1e-14)?;
        table.push(q.value.scale(2.0 * n as f64 + 1.0));
    }
    Ok(FLCoefficients { generator: Generator::Table(Arc::new(table)), decay: FlDecay::Finite { count } })
}

/// `fl_numeric_nodes` for a plain function of `x`, with both endpoints
/// treated as possibly singular.
pub fn fl_numeric(f: impl Fn(f64) -> f64, count: usize) -> Result<FLCoefficients> {
    fl_numeric_nodes(|node| f(node.x), count, Endpoints::Both)
}

/// `∫_0^1 K(√x) f(x) dx = 2 Σ c_n / (2n+1)^2`.
pub fn fl_integrate_against_k(c: &FLCoefficients) -> Result<ValueWithError> {
    let term = |n: f64| {
        2.0 * c.coefficient(n as usize).map(|v| v.value).unwrap_or(f64::NAN) / ((2.0 * n + 1.0) * (2.0 * n + 1.0))
    };
    match (&c.generator, c.decay) {
        (Generator::Table(t), _) => {
            let mut sum = ValueWithError::exact(0.0);
            for (n, cn) in t.iter().enumerate() {
                sum = sum + cn.scale(2.0 / ((2.0 * n as f64 + 1.0).powi(2)));
            }
            Ok(sum)
        }
        (Generator::Closed(id), decay) => {
            let closed = |n: f64| 2.0 * id.coefficient(n) / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
            match decay {
                FlDecay::Geometric { ratio } => sum_with_tail(term, TailEstimate::Geometric { ratio }, 1e-16, 1 << 12),
                FlDecay::PowerLaw { exponent } => {
                    if exponent + 2.0 <= 1.0 {
                        return Err(Error::Divergent(format!("{id}: coefficients too slow")));
                    }
                    sum_with_tail(closed, TailEstimate::PowerLaw { exponent: exponent + 2.0 }, 1e-14, 1 << 16)
                }
                FlDecay::Alternating => sum_with_tail(term, TailEstimate::Alternating, 1e-14, 1 << 16),
                FlDecay::Finite { count } => sum_with_tail(term, TailEstimate::None, 0.0, count),
            }
        }
    }
}
