use std::f64::consts::{LN_2, PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::Result;
use crate::numerics::{ValueWithError, EPS};
use crate::specfun::{catalan_g, dilog, gamma, ln_one_plus_sqrt2, trilog, zeta3};

/// Constants a closed form may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    Ln2,
    /// `ln(1 + √2)`
    LnOnePlusSqrt2,
    Catalan,
    Zeta3,
    /// `Γ(1/4)`
    GammaQuarter,
    /// `Im Li_2((√2 - 1) i)`
    ImLi2,
    /// `Im Li_3((1 + i) / 2)`
    ImLi3,
    Sqrt2,
}

impl Constant {
    pub fn value(self) -> Result<f64> {
        Ok(match self {
            Constant::Pi => PI,
            Constant::Ln2 => LN_2,
            Constant::LnOnePlusSqrt2 => ln_one_plus_sqrt2(),
            Constant::Catalan => catalan_g().value,
            Constant::Zeta3 => zeta3().value,
            Constant::GammaQuarter => gamma(0.25)?.value,
            Constant::ImLi2 => dilog(Complex64::new(0.0, SQRT_2 - 1.0))?.im,
            Constant::ImLi3 => trilog(Complex64::new(0.5, 0.5))?.im,
            Constant::Sqrt2 => SQRT_2,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::Ln2 => "ln2",
            Constant::LnOnePlusSqrt2 => "ln(1+sqrt2)",
            Constant::Catalan => "G",
            Constant::Zeta3 => "zeta3",
            Constant::GammaQuarter => "Gamma(1/4)",
            Constant::ImLi2 => "ImLi2((sqrt2-1)i)",
            Constant::ImLi3 => "ImLi3((1+i)/2)",
            Constant::Sqrt2 => "sqrt2",
        }
    }
}

/// Rational multiple of a product of constant powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Ratio<i64>,
    pub factors: Vec<(Constant, i32)>,
}

/// Sum of terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expr(pub Vec<Term>);

impl Expr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `(num/den) Π c^p`.
    pub fn t(mut self, num: i64, den: i64, factors: &[(Constant, i32)]) -> Self {
        self.0.push(Term { coeff: Ratio::new(num, den), factors: factors.to_vec() });
        self
    }

    pub fn eval(&self) -> Result<ValueWithError> {
        let mut sum = 0.0;
        let mut mag = 0.0;
        for term in &self.0 {
            let mut v = *term.coeff.numer() as f64 / *term.coeff.denom() as f64;
            for &(c, p) in &term.factors {
                v *= c.value()?.powi(p);
            }
            sum += v;
            mag += v.abs();
        }
        Ok(ValueWithError::new(sum, 32.0 * EPS * mag))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.0.iter().enumerate() {
            let (n, d) = (*term.coeff.numer(), *term.coeff.denom());
            let sign = if n < 0 { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if n < 0 {
                f.write_str("-")?;
            }
            let mut num: Vec<String> = Vec::new();
            let mut den: Vec<String> = Vec::new();
            if n.abs() != 1 || term.factors.iter().all(|&(_, p)| p < 0) {
                num.push(n.abs().to_string());
            }
            if d != 1 {
                den.push(d.to_string());
            }
            for &(c, p) in &term.factors {
                let s = match p.abs() {
                    1 => c.symbol().to_string(),
                    k => format!("{}^{k}", c.symbol()),
                };
                if p > 0 {
                    num.push(s);
                } else {
                    den.push(s);
                }
            }
            f.write_str(&num.join("*"))?;
            if !den.is_empty() {
                write!(f, "/{}", if den.len() == 1 { den[0].clone() } else { format!("({})", den.join("*")) })?;
            }
        }
        Ok(())
    }
}

type Computed = Arc<dyn Fn() -> Result<ValueWithError> + Send + Sync>;

/// Right-hand side of an identity.
#[derive(Clone)]
pub enum Rhs {
    Expr(Expr),
    /// A finite closed form that is not a short constant expression.
    Computed {
        text: String,
        eval: Computed,
    },
}

impl Rhs {
    pub fn computed(
        text: impl Into<String>,
        eval: impl Fn() -> Result<ValueWithError> + Send + Sync + 'static,
    ) -> Self {
        Rhs::Computed { text: text.into(), eval: Arc::new(eval) }
    }

    pub fn eval(&self) -> Result<ValueWithError> {
        match self {
            Rhs::Expr(e) => e.eval(),
            Rhs::Computed { eval, .. } => eval(),
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Expr(e) => e.fmt(f),
            Rhs::Computed { text, .. } => f.write_str(text),
        }
    }
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rhs({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Constant::*;

    #[test]
    fn constants_from_reference() {
        // mpmath
        assert!((ImLi2.value().unwrap() - 0.406_766_154_249_813_513_2).abs() < 1e-15);
        assert!((ImLi3.value().unwrap() - 0.570_077_407_088_768_978_2).abs() < 1e-15);
        assert!((GammaQuarter.value().unwrap() - 3.625_609_908_221_908_311_9).abs() < 1e-14);
    }

    #[test]
    fn expression_value_and_text() {
        let e = Expr::new().t(8, 1, &[(Ln2, 1), (Pi, -1)]).t(-4, 1, &[(Pi, -1)]);
        assert!((e.eval().unwrap().value - 0.491_845_256_486_050_061).abs() < 1e-15);
        assert_eq!(e.to_string(), "8*ln2/pi - 4/pi");
        let e = Expr::new().t(1, 2, &[]).t(7, 4, &[(Zeta3, 1)]);
        assert_eq!(e.to_string(), "1/2 + 7*zeta3/4");
    }
}
