//! Truncated power series and the Catalan generating function `C(x)`:
//! closed forms for the coefficients of `C(x)^m` and the head of
//! `1/C(x)^m`, and the alternating binomial identity that makes `f_m`
//! annihilate `F_m`.

use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::c_coeff;
use crate::exact::{binomial, int_to_rational, render_rational, ExactInt, ExactRational};
use crate::{half_floor, Error, Result};

/// Power series known through `x^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExactRational>,
}

impl TruncatedSeries {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_ints(coeffs: Vec<ExactInt>) -> Self {
        Self::new(coeffs.into_iter().map(int_to_rational).collect())
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &ExactRational {
        &self.coeffs[n]
    }

    /// Multiplicative inverse through the same order, by the usual
    /// recurrence `b_n = -(1/a_0) sum_{k=1}^{n} a_k b_{n-k}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Domain("series with zero constant term has no reciprocal".into()));
        }
        let inv0 = a0.recip();
        let mut b: Vec<ExactRational> = Vec::with_capacity(self.coeffs.len());
        b.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let s: ExactRational = (1..=n).map(|k| &self.coeffs[k] * &b[n - k]).sum();
            b.push(-s * &inv0);
        }
        Ok(Self::new(b))
    }

    pub fn pow(&self, exp: usize) -> Self {
        (0..exp).fold(Self::one(self.order()), |acc, _| &acc * self)
    }

    pub fn render(&self) -> String {
        self.coeffs.iter().map(render_rational).collect::<Vec<_>>().join(" ")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Product truncated to the smaller of the two orders.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| (0..=n).map(|k| &self.coeffs[k] * &rhs.coeffs[n - k]).sum())
            .collect();
        TruncatedSeries::new(coeffs)
    }
}

/// `C_n = C(2n, n) / (n + 1)`.
pub fn catalan_number(n: i64) -> Result<ExactInt> {
    if n < 0 {
        return Err(Error::Domain(format!("Catalan numbers need n >= 0 (got {n})")));
    }
    Ok(binomial(2 * n, n) / (n + 1))
}

/// `[x^n] C(x)^m = m/(m+2n) * C(m+2n, n)`.
pub fn catalan_power_coeff(m: i64, n: i64) -> ExactInt {
    if n < 0 || m < 0 {
        return BigInt::zero();
    }
    if m == 0 {
        return if n == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let num = binomial(m + 2 * n, n) * m;
    debug_assert!((&num % (m + 2 * n)).is_zero());
    num / (m + 2 * n)
}

/// `C(x)^m` through `x^order`, from the closed form.
pub fn catalan_power(m: usize, order: usize) -> Result<TruncatedSeries> {
    if m == 0 {
        return Err(Error::Domain("catalan_power needs m >= 1".into()));
    }
    Ok(TruncatedSeries::from_ints(
        (0..=order as i64).map(|n| catalan_power_coeff(m as i64, n)).collect(),
    ))
}

/// `1 / C(x)^m` through `x^order`, by series inversion. The coefficients
/// past `floor(m/2)` carry no closed form.
pub fn catalan_power_reciprocal(m: usize, order: usize) -> Result<TruncatedSeries> {
    catalan_power(m, order)?.reciprocal()
}

/// `sum_{k=0}^{i} (-1)^k c_{m,k} [x^{i-k}] C(x)^m`, the coefficient of `x^i`
/// in `C(x)^m / C(x)^m` written through the reciprocal's head.
pub fn identity_sum(m: usize, i: usize) -> Result<ExactInt> {
    if m < 2 {
        return Err(Error::Domain(format!("identity needs m >= 2 (got m={m})")));
    }
    let (m, i) = (m as i64, i as i64);
    let top = half_floor(m);
    if i < 1 || i > top {
        return Err(Error::range("i", i, 1, top));
    }
    Ok((0..=i)
        .map(|k| {
            let t = c_coeff(m, k) * catalan_power_coeff(m, i - k);
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum())
}

/// True iff [`identity_sum`] vanishes.
pub fn check_identity_zero(m: usize, i: usize) -> Result<bool> {
    Ok(identity_sum(m, i)?.is_zero())
}
