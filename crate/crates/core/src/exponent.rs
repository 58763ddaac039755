//! Lebesgue exponents in `[1, ∞]`, stored through their exact reciprocal.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, TfError};

/// An exponent `p ∈ [1, ∞]`.
///
/// The reciprocal `1/p ∈ [0, 1]` is kept as an exact rational so that
/// region predicates have no floating-point ambiguity on boundary faces.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    recip: Rational64,
}

impl Exponent {
    pub const INF: Exponent = Exponent {
        recip: Rational64::new_raw(0, 1),
    };
    pub const ONE: Exponent = Exponent {
        recip: Rational64::new_raw(1, 1),
    };

    /// Build from the reciprocal `1/p`.
    pub fn from_recip(recip: Rational64) -> Result<Self> {
        if recip < Rational64::zero() || recip > Rational64::one() {
            return Err(TfError::InvalidExponent(format!("1/p = {recip} outside [0,1]")));
        }
        Ok(Exponent { recip })
    }

    /// Integer exponent `p ≥ 1`.
    pub fn int(p: i64) -> Result<Self> {
        if p < 1 {
            return Err(TfError::InvalidExponent(format!("p = {p} < 1")));
        }
        Self::from_recip(Rational64::new(1, p))
    }

    /// Rational exponent `num/den`.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(TfError::InvalidExponent(format!("p = {num}/{den}")));
        }
        Self::from_recip(Rational64::new(den, num))
    }

    /// Finite float exponent; the reciprocal is approximated by a rational.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Self::INF);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(TfError::InvalidExponent(format!("p = {p}")));
        }
        let r = Rational64::approximate_float(1.0 / p)
            .ok_or_else(|| TfError::InvalidExponent(format!("p = {p}")))?;
        Self::from_recip(r)
    }

    pub fn recip(&self) -> Rational64 {
        self.recip
    }

    pub fn recip_f64(&self) -> f64 {
        self.recip.to_f64().unwrap_or(0.0)
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// `p` as a float, `f64::INFINITY` for `p = ∞`.
    pub fn value(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            1.0 / self.recip_f64()
        }
    }

    /// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exponent {
        Exponent {
            recip: Rational64::one() - self.recip,
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exponent({self})")
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            return write!(f, "inf");
        }
        let p = self.recip.recip();
        if p.is_integer() {
            write!(f, "{}", p.numer())
        } else {
            write!(f, "{}/{}", p.numer(), p.denom())
        }
    }
}

impl FromStr for Exponent {
    type Err = TfError;

    /// Accepts `inf`, `∞`, an integer, a fraction `a/b`, or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(Self::INF),
            _ => {}
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| TfError::InvalidExponent(s.into()))?;
            let b: i64 = b.trim().parse().map_err(|_| TfError::InvalidExponent(s.into()))?;
            return Self::ratio(a, b);
        }
        if let Ok(p) = s.parse::<i64>() {
            return Self::int(p);
        }
        let p: f64 = s.parse().map_err(|_| TfError::InvalidExponent(s.into()))?;
        Self::from_f64(p)
    }
}

/// Shorthand used throughout tests and the experiment registry.
pub fn exp(p: &str) -> Exponent {
    p.parse().expect("valid exponent literal")
}
