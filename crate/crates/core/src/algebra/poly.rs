use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exact::{render_rational, ExactRational};
use crate::{Error, Result};

/// Which ring a polynomial lives in: the operators `e1, e2` or the dual
/// variables `E1, E2` they differentiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Operator,
    Dual,
}

impl Side {
    fn names(self) -> (&'static str, &'static str) {
        match self {
            Side::Operator => ("e1", "e2"),
            Side::Dual => ("E1", "E2"),
        }
    }
}

/// Sparse polynomial in two variables of weights 1 and 2. Keys are exponent
/// pairs `(a, b)`; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    side: Side,
    terms: BTreeMap<(u32, u32), ExactRational>,
}

impl GradedPoly {
    pub fn zero(side: Side) -> Self {
        GradedPoly {
            side,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(side: Side) -> Self {
        Self::monomial(side, 0, 0, BigRational::one())
    }

    pub fn monomial(side: Side, a: u32, b: u32, coeff: ExactRational) -> Self {
        let mut p = Self::zero(side);
        p.add_term(a, b, coeff);
        p
    }

    pub fn from_terms(side: Side, terms: impl IntoIterator<Item = ((u32, u32), ExactRational)>) -> Self {
        let mut p = Self::zero(side);
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    /// `e1` or `E1`.
    pub fn var1(side: Side) -> Self {
        Self::monomial(side, 1, 0, BigRational::one())
    }

    /// `e2` or `E2`.
    pub fn var2(side: Side) -> Self {
        Self::monomial(side, 0, 1, BigRational::one())
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &ExactRational)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> ExactRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, a: u32, b: u32, coeff: ExactRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    /// Weighted degree `a + 2b` when every term shares it; `None` for the
    /// zero polynomial or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|&(a, b)| a + 2 * b);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn scale(&self, factor: &ExactRational) -> Self {
        Self::from_terms(self.side, self.terms.iter().map(|(&k, c)| (k, c * factor)))
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(self.side), |acc, _| &acc * self)
    }

    /// Value at `(var1, var2) = (c1, c2)`.
    pub fn eval(&self, c1: &ExactRational, c2: &ExactRational) -> ExactRational {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * pow_q(c1, a) * pow_q(c2, b))
            .sum()
    }

    /// Contraction `self ∘ dual`: each `e1^a e2^b` acts as
    /// `∂^a/∂E1^a ∂^b/∂E2^b`.
    pub fn contract(&self, dual: &GradedPoly) -> Result<GradedPoly> {
        if self.side != Side::Operator || dual.side != Side::Dual {
            return Err(Error::Domain(
                "contraction needs an operator-side polynomial acting on a dual-side one".into(),
            ));
        }
        let mut out = GradedPoly::zero(Side::Dual);
        for (&(a, b), c) in &self.terms {
            for (&(big_a, big_b), d) in &dual.terms {
                if a > big_a || b > big_b {
                    continue;
                }
                let mult = falling(big_a, a) * falling(big_b, b);
                out.add_term(big_a - a, big_b - b, c * d * BigRational::from_integer(mult));
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.side, other.side, "mixing operator and dual polynomials");
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, if negate { -c.clone() } else { c.clone() });
        }
        out
    }
}

/// `n (n-1) ... (n-k+1)`.
fn falling(n: u32, k: u32) -> BigInt {
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, v| acc * v)
}

fn pow_q(base: &ExactRational, exp: u32) -> ExactRational {
    num_traits::pow(base.clone(), exp as usize)
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.combine(rhs, false)
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.combine(rhs, true)
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        assert_eq!(self.side, rhs.side, "mixing operator and dual polynomials");
        let mut out = GradedPoly::zero(self.side);
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term(a + x, b + y, c * d);
            }
        }
        out
    }
}

impl fmt::Display for GradedPoly {
    /// Terms in decreasing `var1` exponent, e.g. `e1^5 - 5*e1^3*e2 + 5*e1*e2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (n1, n2) = self.side.names();
        for (idx, (&(a, b), c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                factors.push(render_rational(&mag));
            }
            for (name, e) in [(n1, a), (n2, b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord {
    a: u32,
    b: u32,
    coeff: String,
}

impl Serialize for GradedPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRecord> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b), c)| TermRecord {
                a,
                b,
                coeff: render_rational(c),
            })
            .collect();
        let mut s = serializer.serialize_struct("GradedPoly", 3)?;
        s.serialize_field("side", &self.side)?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}
