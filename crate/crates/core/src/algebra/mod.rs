//! The presentation polynomial `f_m`, the dual generator `F_m`, monomial
//! bases and higher Hessians of `A(m,2)`.
//!
//! `A(m,2)` is never represented by normal forms: its graded pieces are
//! handled through the monomial basis and the pairing `b_p b_q ∘ F_m`.

mod poly;

pub use poly::{GradedPoly, Side};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalan::catalan_power_coeff;
use crate::exact::{binomial, factorial, int_to_rational, ExactInt, ExactMatrix, ExactRational};
use crate::{half_floor, half_floor_clamped, Error, Result};

/// `c_{m,k} = m/(m-k) * C(m-k, k)` for `0 <= k <= floor(m/2)`, else `0`.
pub fn c_coeff(m: i64, k: i64) -> ExactInt {
    if m < 1 || k < 0 || k > half_floor(m) {
        return BigInt::zero();
    }
    let num = binomial(m - k, k) * m;
    debug_assert!((&num % (m - k)).is_zero());
    num / (m - k)
}

/// `f_m = sum_k (-1)^k c_{m,k} e1^{m-2k} e2^k`.
pub fn f_m(m: usize) -> Result<GradedPoly> {
    if m == 0 {
        return Err(Error::Domain("f_m needs m >= 1".into()));
    }
    Ok(f_from_coeffs(m, c_coeff))
}

/// `f_m` built from an arbitrary coefficient source.
pub fn f_from_coeffs(m: usize, coeff: impl Fn(i64, i64) -> ExactInt) -> GradedPoly {
    let mi = m as i64;
    GradedPoly::from_terms(
        Side::Operator,
        (0..=half_floor(mi)).map(|k| {
            let c = coeff(mi, k);
            let c = if k % 2 == 0 { c } else { -c };
            (((mi - 2 * k) as u32, k as u32), int_to_rational(c))
        }),
    )
}

fn require_algebra_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("A(m,2) operations need m >= 2 (got m={m})")));
    }
    Ok(())
}

/// Numerators `g_{m,n} = m/(m+2n) * C(m+2n, n)` of the dual generator,
/// for `n = 0..m-1`.
pub fn dual_generator_numerators(m: usize) -> Result<Vec<ExactInt>> {
    require_algebra_m(m)?;
    Ok((0..m as i64).map(|n| catalan_power_coeff(m as i64, n)).collect())
}

/// `F_m = sum_{n=0}^{m-1} g_{m,n} E1^{m+2n-1} E2^{m-n-1} / ((m+2n-1)! (m-n-1)!)`,
/// homogeneous of weighted degree `3(m-1)`.
pub fn dual_generator(m: usize) -> Result<GradedPoly> {
    let numerators = dual_generator_numerators(m)?;
    let m = m as u32;
    Ok(GradedPoly::from_terms(
        Side::Dual,
        numerators.into_iter().zip(0u32..).map(|(g, n)| {
            let (a, b) = (m + 2 * n - 1, m - n - 1);
            let denom = factorial(a as u64) * factorial(b as u64);
            ((a, b), BigRational::new(g, denom))
        }),
    ))
}

/// Checks `f_m ∘ F_m = 0` and `e2^m ∘ F_m = 0` by full symbolic contraction.
pub fn annihilator_check(m: usize) -> Result<bool> {
    let big_f = dual_generator(m)?;
    let kills_f = f_m(m)?.contract(&big_f)?.is_zero();
    let e2m = GradedPoly::var2(Side::Operator).pow(m as u32);
    let kills_e2 = e2m.contract(&big_f)?.is_zero();
    Ok(kills_f && kills_e2)
}

/// Checks `f_{m+2} = (e1^2 - 2 e2) f_m - e2^2 f_{m-2}` as polynomials and
/// `c_{m+2,k} = c_{m,k} + 2 c_{m,k-1} - c_{m-2,k-2}` for every `k`.
pub fn verify_f_recursion(m: usize) -> Result<bool> {
    verify_f_recursion_with(m, c_coeff)
}

/// [`verify_f_recursion`] with the coefficient symbol supplied by the
/// caller.
pub fn verify_f_recursion_with(m: usize, coeff: impl Fn(i64, i64) -> ExactInt) -> Result<bool> {
    if m < 3 {
        return Err(Error::Domain(format!("the f recursion needs m >= 3 (got m={m})")));
    }
    let e1 = GradedPoly::var1(Side::Operator);
    let e2 = GradedPoly::var2(Side::Operator);
    let two = int_to_rational(2.into());
    let step = &(&e1 * &e1) - &e2.scale(&two);
    let lhs = f_from_coeffs(m + 2, &coeff);
    let rhs = &(&step * &f_from_coeffs(m, &coeff)) - &(&(&e2 * &e2) * &f_from_coeffs(m - 2, &coeff));
    let mi = m as i64;
    let coeffs_ok = (-2..=half_floor(mi + 2) + 2).all(|k| {
        coeff(mi + 2, k) == coeff(mi, k) + coeff(mi, k - 1) * 2 - coeff(mi - 2, k - 2)
    });
    Ok(lhs == rhs && coeffs_ok)
}

/// Checks `f_m(x+y, xy) = x^m + y^m` by bivariate expansion.
pub fn verify_power_sum(m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::Domain("power sums need m >= 1".into()));
    }
    type Bi = BTreeMap<(u32, u32), BigInt>;
    fn mul(p: &Bi, q: &Bi) -> Bi {
        let mut out = Bi::new();
        for (&(a, b), c) in p {
            for (&(x, y), d) in q {
                *out.entry((a + x, b + y)).or_insert_with(BigInt::zero) += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
    let pow = |p: &Bi, e: u32| (0..e).fold(Bi::from([((0, 0), BigInt::one())]), |acc, _| mul(&acc, p));
    let sum: Bi = Bi::from([((1, 0), BigInt::one()), ((0, 1), BigInt::one())]);
    let prod: Bi = Bi::from([((1, 1), BigInt::one())]);

    let f = f_m(m)?;
    let mut total = Bi::new();
    for (a, b, c) in f.terms() {
        let c = c.to_integer();
        for (k, v) in mul(&pow(&sum, a), &pow(&prod, b)) {
            *total.entry(k).or_insert_with(BigInt::zero) += &c * v;
        }
    }
    total.retain(|_, c| !c.is_zero());
    let m = m as u32;
    let expected = Bi::from([((m, 0), BigInt::one()), ((0, m), BigInt::one())]);
    Ok(total == expected)
}

/// Ordered basis `{ e1^{i-2p} e2^p : floor*((i+2-m)/2) <= p <= floor(i/2) }`
/// of the degree-`i` piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub m: usize,
    pub i: usize,
    pub elements: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The `e2`-exponents `p`, in basis order.
    pub fn p_values(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().map(|&(_, p)| p)
    }
}

/// Range of `p` indexing the degree-`i` basis (and the lattice vertex sets).
pub fn basis_p_range(m: usize, i: usize) -> std::ops::RangeInclusive<i64> {
    let (m, i) = (m as i64, i as i64);
    half_floor_clamped(i + 2 - m)..=half_floor(i)
}

pub fn monomial_basis(m: usize, i: usize) -> Result<MonomialBasis> {
    require_algebra_m(m)?;
    if i > 2 * m - 1 {
        return Err(Error::range("degree", i as i64, 0, 2 * m as i64 - 1));
    }
    let elements = basis_p_range(m, i)
        .map(|p| ((i as i64 - 2 * p) as u32, p as u32))
        .collect();
    Ok(MonomialBasis { m, i, elements })
}

/// Largest degree with a Hessian, `floor(3(m-1)/2)`.
pub fn max_hessian_degree(m: usize) -> usize {
    3 * (m - 1) / 2
}

fn require_hessian_degree(m: usize, i: usize) -> Result<()> {
    require_algebra_m(m)?;
    let top = max_hessian_degree(m);
    if i > top {
        return Err(Error::range("degree", i as i64, 0, top as i64));
    }
    Ok(())
}

/// `i`-th Hessian `(b_p b_q ∘ F_m)` evaluated at `(E1, E2) = (c1, c2)`.
///
/// Only `c2 = 0` corresponds to a Lefschetz element (`A_1` is spanned by
/// `e1`); other points are accepted for experimentation.
pub fn hessian(m: usize, i: usize, point: (&ExactRational, &ExactRational)) -> Result<ExactMatrix> {
    require_hessian_degree(m, i)?;
    let basis = monomial_basis(m, i)?;
    let big_f = dual_generator(m)?;
    let h = basis.len();
    let mut cache: BTreeMap<(u32, u32), ExactRational> = BTreeMap::new();
    let mut entry = |r: usize, c: usize| {
        let (a1, b1) = basis.elements[r];
        let (a2, b2) = basis.elements[c];
        let key = (a1 + a2, b1 + b2);
        cache
            .entry(key)
            .or_insert_with(|| {
                let op = GradedPoly::monomial(Side::Operator, key.0, key.1, BigRational::one());
                op.contract(&big_f)
                    .expect("operator acting on dual generator")
                    .eval(point.0, point.1)
            })
            .clone()
    };
    Ok(ExactMatrix::from_fn(h, h, &mut entry))
}

/// Closed form of `hessian(m, i, (1, 0))`:
/// entry `(p, q)` is `m/(3m-2-2p-2q) * C(3m-2-2p-2q, m-1-p-q) / (3m-3-2i)!`.
pub fn hessian_closed_form(m: usize, i: usize) -> Result<ExactMatrix> {
    require_hessian_degree(m, i)?;
    let ps: Vec<i64> = basis_p_range(m, i).collect();
    let mi = m as i64;
    let scale = BigRational::new(BigInt::one(), factorial((3 * mi - 3 - 2 * i as i64) as u64));
    Ok(ExactMatrix::from_fn(ps.len(), ps.len(), |r, c| {
        let s = ps[r] + ps[c];
        let top = 3 * mi - 2 - 2 * s;
        let v = BigRational::new(binomial(top, mi - 1 - s) * mi, top.into());
        v * &scale
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn c_coeff_examples() {
        assert_eq!(c_coeff(5, 1), BigInt::from(5));
        assert_eq!(c_coeff(5, 2), BigInt::from(5));
        assert_eq!(c_coeff(5, 3), BigInt::from(0));
        assert_eq!(c_coeff(5, -1), BigInt::from(0));
        assert_eq!(c_coeff(2, 1), BigInt::from(2));
        assert_eq!(c_coeff(1, 0), BigInt::from(1));
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_m(5).unwrap().to_string(), "e1^5 - 5*e1^3*e2 + 5*e1*e2^2");
        assert_eq!(f_m(1).unwrap().to_string(), "e1");
        assert_eq!(f_m(2).unwrap().to_string(), "e1^2 - 2*e2");
        assert_eq!(f_m(5).unwrap().degree(), Some(5));
        assert!(f_m(0).is_err());
    }

    #[test]
    fn dual_generator_examples() {
        assert_eq!(dual_generator_numerators(5).unwrap(), ints(&[1, 5, 20, 75, 275]));
        assert_eq!(dual_generator_numerators(3).unwrap(), ints(&[1, 3, 9]));
        let f2 = dual_generator(2).unwrap();
        assert_eq!(f2.coeff(1, 1), rational(1, 1));
        assert_eq!(f2.coeff(3, 0), rational(1, 3));
        assert_eq!(f2.len(), 2);
        let f5 = dual_generator(5).unwrap();
        assert_eq!(f5.degree(), Some(12));
        assert_eq!(f5.coeff(4, 4), rational(1, 576));
        assert_eq!(f5.coeff(12, 0), BigRational::new(275.into(), factorial(12)));
        assert!(matches!(dual_generator(1), Err(Error::Domain(_))));
        assert!(matches!(dual_generator(0), Err(Error::Domain(_))));
    }

    #[test]
    fn dual_generator_is_homogeneous() {
        for m in 2..=15 {
            let f = dual_generator(m).unwrap();
            assert_eq!(f.degree(), Some(3 * (m as u32 - 1)));
            assert_eq!(f.len(), m);
        }
    }

    #[test]
    fn contraction_examples() {
        let f2 = dual_generator(2).unwrap();
        assert!(f_m(2).unwrap().contract(&f2).unwrap().is_zero());
        for m in 2..=8 {
            let e2m = GradedPoly::var2(Side::Operator).pow(m as u32);
            assert!(e2m.contract(&dual_generator(m).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn annihilators() {
        for m in 2..=12 {
            assert!(annihilator_check(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn wrong_dual_generator_is_not_annihilated() {
        // bump one numerator of F_5 and f_5 no longer kills it
        let mut f = dual_generator(5).unwrap();
        f.add_term(6, 3, rational(1, 4320));
        assert!(!f_m(5).unwrap().contract(&f).unwrap().is_zero());
    }

    #[test]
    fn recursions() {
        for m in 3..=20 {
            assert!(verify_f_recursion(m).unwrap(), "m={m}");
        }
        assert!(verify_f_recursion(2).is_err());
    }

    #[test]
    fn tampered_recursion_fails() {
        for m in [3usize, 4, 7] {
            let tampered = move |mm: i64, k: i64| {
                let c = c_coeff(mm, k);
                if mm == m as i64 && k == 1 {
                    c + 1
                } else {
                    c
                }
            };
            assert!(!verify_f_recursion_with(m, tampered).unwrap(), "m={m}");
        }
    }

    #[test]
    fn power_sums() {
        for m in 1..=20 {
            assert!(verify_power_sum(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn basis_examples() {
        assert_eq!(monomial_basis(5, 3).unwrap().elements, vec![(3, 0), (1, 1)]);
        assert_eq!(monomial_basis(5, 0).unwrap().elements, vec![(0, 0)]);
        assert_eq!(monomial_basis(5, 6).unwrap().elements, vec![(4, 1), (2, 2), (0, 3)]);
        assert!(monomial_basis(5, 10).is_err());
        assert!(monomial_basis(1, 0).is_err());
    }

    #[test]
    fn basis_sizes_match_hilbert() {
        for m in 2..=20 {
            for i in 0..=max_hessian_degree(m) {
                let b = monomial_basis(m, i).unwrap();
                assert_eq!(b.len() as u64, crate::hilbert::hilbert_m2_closed(m, i).unwrap());
                assert!(b.p_values().zip(b.p_values().skip(1)).all(|(x, y)| x < y));
            }
        }
    }

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn hessian_examples() {
        let (one, zero) = (rational(1, 1), rational(0, 1));
        let h = hessian(5, 3, (&one, &zero)).unwrap();
        assert_eq!(h, int_matrix(&[&[275, 75], &[75, 20]]).scale(&rational(1, 720)));
        assert_eq!(hessian(2, 0, (&one, &zero)).unwrap(), int_matrix(&[&[1]]).scale(&rational(1, 3)));
        let h4 = hessian(5, 4, (&one, &zero)).unwrap();
        assert!(h4.det().unwrap().is_zero());
        assert!(hessian(5, 7, (&one, &zero)).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            hessian_closed_form(5, 3).unwrap(),
            int_matrix(&[&[275, 75], &[75, 20]]).scale(&rational(1, 720))
        );
        assert_eq!(hessian_closed_form(5, 6).unwrap(), int_matrix(&[&[20, 5, 1], &[5, 1, 0], &[1, 0, 0]]));
        assert_eq!(
            hessian_closed_form(4, 2).unwrap(),
            int_matrix(&[&[48, 14], &[14, 4]]).scale(&rational(1, 120))
        );
    }

    #[test]
    fn closed_form_matches_contraction() {
        let (one, zero) = (rational(1, 1), rational(0, 1));
        for m in 2..=12 {
            for i in 0..=max_hessian_degree(m) {
                let h = hessian(m, i, (&one, &zero)).unwrap();
                assert!(h.is_symmetric());
                assert_eq!(h, hessian_closed_form(m, i).unwrap(), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn hessian_scaling_covariance() {
        let zero = rational(0, 1);
        let one = rational(1, 1);
        for m in 2..=7 {
            for i in 0..=max_hessian_degree(m) {
                let base = hessian(m, i, (&one, &zero)).unwrap();
                for c in [2i64, -1] {
                    let cq = rational(c, 1);
                    let factor = num_traits::pow(cq.clone(), 3 * m - 3 - 2 * i);
                    assert_eq!(hessian(m, i, (&cq, &zero)).unwrap(), base.scale(&factor));
                }
            }
        }
    }

    #[test]
    fn hessian_off_lefschetz_point() {
        // F_2 = E1 E2 + E1^3/3; degree-0 Hessian is F_2 itself
        let h = hessian(2, 0, (&rational(1, 1), &rational(2, 1))).unwrap();
        assert_eq!(h.get(0, 0), &(rational(2, 1) + rational(1, 3)));
    }
}
