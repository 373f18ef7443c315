use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A binary64 value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueWithError {
    pub value: f64,
    pub abs_error: f64,
}

impl ValueWithError {
    pub const fn new(value: f64, abs_error: f64) -> Self {
        Self { value, abs_error }
    }

    /// A value known up to one rounding.
    pub fn rounded(value: f64) -> Self {
        Self::new(value, value.abs() * f64::EPSILON)
    }

    pub const fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.value * c, self.abs_error * c.abs())
    }

    /// Widens the error bound by `extra`.
    pub fn widen(self, extra: f64) -> Self {
        Self::new(self.value, self.abs_error + extra.abs())
    }

    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.value.abs()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.abs_error.is_finite()
    }

    /// True when `other` lies within the combined error bars plus `slack`.
    pub fn agrees_with(&self, other: &Self, slack: f64) -> bool {
        (self.value - other.value).abs() <= self.abs_error + other.abs_error + slack
    }

    /// The estimate with the smaller error bar.
    pub fn min_error(self, other: Self) -> Self {
        if other.abs_error < self.abs_error {
            other
        } else {
            self
        }
    }

    /// Merges two estimates of the same quantity: keeps the one with the
    /// smaller error and widens it by their disagreement.
    pub fn reconcile(self, other: Self) -> Self {
        let gap = (self.value - other.value).abs();
        let best = if other.abs_error < self.abs_error { other } else { self };
        Self::new(best.value, best.abs_error.max(gap))
    }
}

impl fmt::Display for ValueWithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.2e}", self.value, self.abs_error)
    }
}

impl From<f64> for ValueWithError {
    fn from(v: f64) -> Self {
        Self::exact(v)
    }
}

impl Add for ValueWithError {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let v = self.value + rhs.value;
        Self::new(v, self.abs_error + rhs.abs_error + v.abs() * f64::EPSILON)
    }
}

impl Sub for ValueWithError {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ValueWithError {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_error)
    }
}

impl Mul for ValueWithError {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let v = self.value * rhs.value;
        let e =
            (self.value * rhs.abs_error).abs() + (rhs.value * self.abs_error).abs() + self.abs_error * rhs.abs_error;
        Self::new(v, e + v.abs() * f64::EPSILON)
    }
}

impl Div for ValueWithError {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let v = self.value / rhs.value;
        let e = (self.abs_error + (v * rhs.abs_error).abs()) / rhs.value.abs();
        Self::new(v, e + v.abs() * f64::EPSILON)
    }
}

impl Add<f64> for ValueWithError {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        self + Self::exact(rhs)
    }
}

impl Sub<f64> for ValueWithError {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        self - Self::exact(rhs)
    }
}

impl Mul<f64> for ValueWithError {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Div<f64> for ValueWithError {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}
