//! Boundedness regions for symbols in `M^{p,q}` acting on `L^r`,
//! `W(L^r, L^s)` and `M^{r,s}`.
//!
//! Everything is evaluated on the exact reciprocals `1/p`, so faces of the
//! polyhedron are decided without rounding.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed};

use crate::exponent::Exponent;

/// Target space family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `L^r`.
    Lebesgue,
    /// `W(L^r, L^s)`.
    Amalgam,
    /// `M^{r,s}`.
    Modulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentTuple {
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    pub s: Option<Exponent>,
}

impl ExponentTuple {
    pub fn new(p: Exponent, q: Exponent, r: Exponent, s: Option<Exponent>) -> Self {
        ExponentTuple { p, q, r, s }
    }

    /// Parses `"p,q,r"` or `"p,q,r,s"`.
    pub fn parse(spec: &str) -> crate::error::Result<Self> {
        let parts: Vec<Exponent> = spec
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<crate::error::Result<_>>()?;
        match parts.as_slice() {
            [p, q, r] => Ok(Self::new(*p, *q, *r, None)),
            [p, q, r, s] => Ok(Self::new(*p, *q, *r, Some(*s))),
            _ => Err(crate::error::TfError::InvalidExponent(format!(
                "expected 3 or 4 exponents, got `{spec}`"
            ))),
        }
    }

    pub fn contains(&self, target: Target) -> bool {
        let s = self.s.unwrap_or(self.r);
        match target {
            Target::Lebesgue => in_region_lr(self.p, self.q, self.r),
            Target::Amalgam => in_region_amalgam(self.p, self.q, self.r, s),
            Target::Modulation => in_region_modulation(self.p, self.q, self.r, s),
        }
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}", self.p, self.q, self.r)?;
        if let Some(s) = self.s {
            write!(f, ", {s}")?;
        }
        write!(f, ")")
    }
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

/// `q ≤ min{t, t'}`, i.e. `1/q ≥ max{1/t, 1 - 1/t}`.
fn q_below(q: Exponent, t: Exponent) -> bool {
    let rt = t.recip();
    q.recip() >= rt.max(Rational64::one() - rt)
}

/// `1/p ≥ |1/r - 1/2| + 1/q'`.
fn lr_face(p: Exponent, q: Exponent, r: Exponent) -> bool {
    p.recip() >= (r.recip() - half()).abs() + q.conjugate().recip()
}

/// Every symbol in `M^{p,q}` is bounded on `L^r`.
pub fn in_region_lr(p: Exponent, q: Exponent, r: Exponent) -> bool {
    lr_face(p, q, r) && q_below(q, r)
}

/// Every symbol in `M^{p,q}` is bounded on `W(L^r, L^s)`.
pub fn in_region_amalgam(p: Exponent, q: Exponent, r: Exponent, s: Exponent) -> bool {
    lr_face(p, q, r) && q_below(q, r) && q_below(q, s)
}

/// Every symbol in `M^{p,q}` is bounded on `M^{r,s}`.
pub fn in_region_modulation(p: Exponent, q: Exponent, r: Exponent, s: Exponent) -> bool {
    p.recip() >= q.conjugate().recip() && q_below(q, r) && q_below(q, s)
}

/// Reference truth table: 64 tuples with hand-checked membership.
pub fn truth_table() -> Vec<(Target, ExponentTuple, bool)> {
    use Target::*;
    const ROWS: &[(Target, &str, bool)] = &[
        (Lebesgue, "2,1,1", true),
        (Lebesgue, "2,1,3/2", true),
        (Lebesgue, "2,1,2", true),
        (Lebesgue, "2,1,4", true),
        (Lebesgue, "2,1,inf", true),
        (Lebesgue, "inf,1,2", true),
        (Lebesgue, "inf,2,2", false),
        (Lebesgue, "2,2,2", true),
        (Lebesgue, "inf,1,1", false),
        (Lebesgue, "1,1,1", true),
        (Lebesgue, "1,2,1", false),
        (Lebesgue, "1,2,2", true),
        (Lebesgue, "1,inf,2", false),
        (Lebesgue, "4,1,4", true),
        (Lebesgue, "4,1,8", false),
        (Lebesgue, "3/2,2,2", true),
        (Lebesgue, "3/2,4/3,4", true),
        (Lebesgue, "2,4/3,4", true),
        (Lebesgue, "3,4/3,4", false),
        (Lebesgue, "2,3/2,2", true),
        (Lebesgue, "2,3/2,3", true),
        (Lebesgue, "2,3/2,4", false),
        (Lebesgue, "inf,1,3", false),
        (Lebesgue, "1,1,inf", true),
        (Lebesgue, "1,2,inf", false),
        (Lebesgue, "6/5,3/2,2", true),
        (Lebesgue, "inf,4/3,2", false),
        (Lebesgue, "4,1,2", true),
        (Amalgam, "2,2,2,2", true),
        (Amalgam, "2,1,4,inf", true),
        (Amalgam, "4,2,2,2", false),
        (Amalgam, "2,1,1,inf", true),
        (Amalgam, "2,2,2,1", false),
        (Amalgam, "2,2,2,inf", false),
        (Amalgam, "inf,1,2,1", true),
        (Amalgam, "inf,1,2,inf", true),
        (Amalgam, "inf,2,2,2", false),
        (Amalgam, "1,2,2,4", false),
        (Amalgam, "1,2,2,2", true),
        (Amalgam, "1,4/3,4,4", true),
        (Amalgam, "2,4/3,4,4/3", true),
        (Amalgam, "2,3/2,2,4", false),
        (Amalgam, "3/2,1,inf,1", true),
        (Amalgam, "3,1,inf,2", false),
        (Amalgam, "2,1,3,5", true),
        (Amalgam, "1,inf,inf,inf", false),
        (Amalgam, "2,2,1,2", false),
        (Amalgam, "1,1,1,1", true),
        (Modulation, "inf,1,1,1", true),
        (Modulation, "inf,1,2,inf", true),
        (Modulation, "inf,1,inf,3", true),
        (Modulation, "2,2,2,2", true),
        (Modulation, "2,inf,2,2", false),
        (Modulation, "4,2,2,2", false),
        (Modulation, "2,2,inf,2", false),
        (Modulation, "2,2,2,inf", false),
        (Modulation, "inf,2,2,2", false),
        (Modulation, "3,3/2,3,3", true),
        (Modulation, "4,3/2,3,3", false),
        (Modulation, "1,4,4,4", false),
        (Modulation, "1,4/3,4,4", true),
        (Modulation, "4/3,4/3,2,2", true),
        (Modulation, "1,1,inf,1", true),
        (Modulation, "5,5/4,5,5", true),
    ];
    ROWS.iter()
        .map(|(t, s, b)| (*t, ExponentTuple::parse(s).expect("table literal"), *b))
        .collect()
}

/// A few tuples strictly inside each region, away from every face.
pub fn interior_samples(target: Target) -> Vec<ExponentTuple> {
    let rows: &[&str] = match target {
        Target::Lebesgue => &["2,1,2", "2,1,4", "1,1,3/2", "4,1,2", "3/2,1,3"],
        Target::Amalgam => &["2,1,4,4", "2,1,2,3", "1,1,3/2,3", "4,1,2,2", "3/2,1,3,3/2"],
        Target::Modulation => &["4,6/5,2,2", "2,1,4,4", "1,1,3/2,3", "3,5/4,3,3", "4,1,4,4"],
    };
    rows.iter().map(|s| ExponentTuple::parse(s).expect("literal")).collect()
}
