//! Arbitrary-precision scalars and exact dense linear algebra.
//!
//! Everything downstream is exact: integers are [`BigInt`], rationals are
//! [`BigRational`] (always reduced, positive denominator, zero is `0/1`).

mod matrix;

pub use matrix::ExactMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type ExactInt = BigInt;
pub type ExactRational = BigRational;

/// `C(n, k)`, with `0` whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> ExactInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) after the multiplication
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `n!`.
pub fn factorial(n: u64) -> ExactInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn rational(numer: i64, denom: i64) -> ExactRational {
    BigRational::new(numer.into(), denom.into())
}

pub fn int_to_rational(v: ExactInt) -> ExactRational {
    BigRational::from_integer(v)
}

/// Renders `p/q`, or just `p` for integers.
pub fn render_rational(q: &ExactRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn sign_of(q: &ExactRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.numer() > &BigInt::zero() {
        1
    } else {
        -1
    }
}

/// Serde helper writing a value through its `Display` form, so exact numbers
/// appear as strings such as `"-125/518400"`.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn sign_of_int(v: &ExactInt) -> i8 {
    match v.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        // 13*12*11*10 / 24
        assert_eq!(binomial(13, 4), BigInt::from(13 * 12 * 11 * 10 / 24));
        assert_eq!(binomial(13, 4), BigInt::from(715));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(-2, 1), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=40 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
        assert_eq!(factorial(20), BigInt::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn rendering() {
        assert_eq!(render_rational(&rational(-125, 518400)), "-5/20736");
        assert_eq!(render_rational(&rational(1, 3)), "1/3");
        assert_eq!(render_rational(&rational(6, 3)), "2");
        assert_eq!(render_rational(&rational(0, 7)), "0");
        assert_eq!(sign_of(&rational(-1, 3)), -1);
        assert_eq!(sign_of(&rational(0, 3)), 0);
    }
}
