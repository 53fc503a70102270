use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{render_rational, ExactInt, ExactRational};
use crate::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<ExactRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension {
                expected: "rectangular rows",
                rows: nrows,
                cols: bad.len(),
            });
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn from_int_rows(rows: Vec<Vec<ExactInt>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigRational::from_integer).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactRational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[ExactRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, factor: &ExactRational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Entries as integers, if every entry is integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<ExactInt>>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|e| e.is_integer().then(|| e.to_integer()))
                    .collect()
            })
            .collect()
    }

    /// Rows multiplied by the lcm of their denominators, plus the product
    /// of those multipliers.
    fn cleared_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
                scale *= &l;
                row.iter().map(|e| e.numer() * (&l / e.denom())).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination on the
    /// denominator-cleared integer matrix.
    pub fn det(&self) -> Result<ExactRational> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: "square matrix",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (mut a, scale) = self.cleared_rows();
        let d = bareiss_det(&mut a);
        Ok(BigRational::new(d, scale))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.cleared_rows();
        integer_rank(&mut a, self.cols)
    }

    /// `#positive - #negative` eigenvalues of a symmetric matrix, by
    /// congruence diagonalization. No eigenvalues are computed.
    pub fn signature(&self) -> Result<i64> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(congruence_signature(self.clone()))
    }
}

fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn integer_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (piv, lead) = (a[rank][c].clone(), a[i][c].clone());
            let mut content = BigInt::zero();
            for j in c..cols {
                let v = &piv * &a[i][j] - &lead * &a[rank][j];
                content = content.gcd(&v);
                a[i][j] = v;
            }
            if !content.is_zero() && !content.is_one() {
                for v in a[i][c..].iter_mut() {
                    *v /= &content;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn congruence_signature(mut m: ExactMatrix) -> i64 {
    let mut sig = 0i64;
    let mut active: Vec<usize> = (0..m.rows).collect();
    while let Some(&k) = active.first() {
        if let Some(&p) = active.iter().find(|&&p| !m.get(p, p).is_zero()) {
            let d = m.get(p, p).clone();
            sig += if d.is_positive() { 1 } else { -1 };
            active.retain(|&x| x != p);
            let col: Vec<ExactRational> = active.iter().map(|&r| m.get(r, p).clone()).collect();
            for (ai, &r) in active.iter().enumerate() {
                for (bi, &s) in active.iter().enumerate() {
                    let v = m.get(r, s) - &col[ai] * &col[bi] / &d;
                    m.entries[r * m.cols + s] = v;
                }
            }
            continue;
        }
        // All remaining diagonal entries vanish.
        let Some(&j) = active.iter().find(|&&j| j != k && !m.get(k, j).is_zero()) else {
            // Row k is zero: a null direction.
            active.remove(0);
            continue;
        };
        // Hyperbolic pair [[0, b], [b, 0]] contributes +1 and -1.
        let b = m.get(k, j).clone();
        active.retain(|&x| x != k && x != j);
        let ck: Vec<ExactRational> = active.iter().map(|&r| m.get(r, k).clone()).collect();
        let cj: Vec<ExactRational> = active.iter().map(|&r| m.get(r, j).clone()).collect();
        for (ai, &r) in active.iter().enumerate() {
            for (bi, &s) in active.iter().enumerate() {
                let v = m.get(r, s) - (&cj[ai] * &ck[bi] + &ck[ai] * &cj[bi]) / &b;
                m.entries[r * m.cols + s] = v;
            }
        }
    }
    sig
}

impl fmt::Display for ExactMatrix {
    /// One bracketed row per line, entries rendered as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = self.row(r).iter().map(render_rational).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(render_rational).collect())
            .collect();
        rows.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows).unwrap()
    }

    fn cofactor_det(a: &[Vec<i64>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                    .collect();
                let term = BigInt::from(a[0][c]) * cofactor_det(&minor);
                if c % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(m(&[&[275, 75], &[75, 20]]).det().unwrap(), rational(-125, 1));
        assert_eq!(ExactMatrix::identity(3).det().unwrap(), rational(1, 1));
        assert_eq!(
            m(&[&[20, 5, 1], &[5, 1, 0], &[1, 0, 0]]).det().unwrap(),
            rational(-1, 1)
        );
        assert_eq!(ExactMatrix::zeros(0, 0).det().unwrap(), rational(1, 1));
    }

    #[test]
    fn det_needs_pivot_swap() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), rational(-1, 1));
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).det().unwrap(), rational(-1, 1));
    }

    #[test]
    fn det_of_rational_matrix() {
        let a = m(&[&[275, 75], &[75, 20]]).scale(&rational(1, 720));
        assert_eq!(a.det().unwrap(), rational(-125, 518_400));
        let b = ExactMatrix::from_rows(vec![
            vec![rational(1, 2), rational(1, 3)],
            vec![rational(1, 5), rational(-2, 7)],
        ])
        .unwrap();
        assert_eq!(b.det().unwrap(), rational(-1, 7) - rational(1, 15));
    }

    #[test]
    fn det_rejects_non_square() {
        let err = m(&[&[1, 2, 3], &[4, 5, 6]]).det().unwrap_err();
        assert!(matches!(err, Error::Dimension { rows: 2, cols: 3, .. }));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(ExactMatrix::from_i64_rows(&[&[1, 2], &[3]]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[&[275, 75, 20], &[75, 20, 5], &[20, 5, 1]]).rank(), 2);
        assert_eq!(ExactMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
        assert_eq!(m(&[&[0, 0, 1], &[0, 0, 2], &[1, 0, 0]]).rank(), 2);
    }

    #[test]
    fn signature_examples() {
        assert_eq!(m(&[&[275, 75], &[75, 20]]).signature().unwrap(), 0);
        assert_eq!(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).signature().unwrap(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).signature().unwrap(), 0);
        assert_eq!(m(&[&[20, 5, 1], &[5, 1, 0], &[1, 0, 0]]).signature().unwrap(), 1);
        assert_eq!(ExactMatrix::zeros(3, 3).signature().unwrap(), 0);
        // hyperbolic pair coupled to a third coordinate
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]]).signature().unwrap(), -1);
    }

    #[test]
    fn signature_rejects_asymmetric() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).signature(), Err(Error::NotSymmetric));
    }

    #[test]
    fn display_rows() {
        let a = m(&[&[1, 2], &[3, 4]]).scale(&rational(1, 3));
        assert_eq!(a.to_string(), "[1/3, 2/3]\n[1, 4/3]");
    }

    fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (0..=max).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n))
    }

    fn rect() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        })
    }

    fn symmetric(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        square(max).prop_map(|a| {
            let n = a.len();
            (0..n)
                .map(|r| (0..n).map(|c| if r <= c { a[r][c] } else { a[c][r] }).collect())
                .collect()
        })
    }

    fn to_matrix(a: &[Vec<i64>]) -> ExactMatrix {
        let refs: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
        ExactMatrix::from_i64_rows(&refs).unwrap()
    }

    // Sign changes in a coefficient list, zeros skipped.
    fn sign_changes(coeffs: &[BigRational]) -> i64 {
        let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count() as i64
    }

    // Characteristic polynomial coefficients (leading first) for n <= 3.
    fn char_poly(a: &ExactMatrix) -> Vec<BigRational> {
        let n = a.rows();
        let g = |r, c| a.get(r, c).clone();
        match n {
            1 => vec![BigRational::one(), -g(0, 0)],
            2 => vec![BigRational::one(), -(g(0, 0) + g(1, 1)), a.det().unwrap()],
            3 => {
                let tr = g(0, 0) + g(1, 1) + g(2, 2);
                let minors = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) + g(0, 0) * g(2, 2)
                    - g(0, 2) * g(2, 0)
                    + g(1, 1) * g(2, 2)
                    - g(1, 2) * g(2, 1);
                vec![BigRational::one(), -tr, minors, -a.det().unwrap()]
            }
            _ => unreachable!(),
        }
    }

    proptest! {
        #[test]
        fn det_matches_cofactor_expansion(a in square(5)) {
            let d = to_matrix(&a).det().unwrap();
            prop_assert_eq!(d, BigRational::from_integer(cofactor_det(&a)));
        }

        #[test]
        fn rank_is_transpose_invariant(a in rect()) {
            let mat = to_matrix(&a);
            prop_assert_eq!(mat.rank(), mat.transpose().rank());
        }

        #[test]
        fn full_rank_iff_nonzero_det(a in square(4)) {
            let mat = to_matrix(&a);
            let n = mat.rows();
            prop_assert_eq!(mat.rank() == n, !mat.det().unwrap().is_zero());
        }

        #[test]
        fn signature_matches_descartes(a in symmetric(3)) {
            let mat = to_matrix(&a);
            prop_assume!(mat.rows() > 0);
            prop_assume!(!mat.det().unwrap().is_zero());
            let p = char_poly(&mat);
            // p(-x) flips the sign of odd-degree terms
            let deg = p.len() - 1;
            let q: Vec<BigRational> = p
                .iter()
                .enumerate()
                .map(|(k, c)| if (deg - k) % 2 == 1 { -c.clone() } else { c.clone() })
                .collect();
            let expected = sign_changes(&p) - sign_changes(&q);
            let sig = mat.signature().unwrap();
            prop_assert_eq!(sig, expected);
            prop_assert_eq!((sig - mat.rows() as i64).rem_euclid(2), 0);
        }

        #[test]
        fn signature_is_congruence_invariant(a in symmetric(4), s in -3i64..=3) {
            // P = I + s * E_{01}; P^T A P
            let mat = to_matrix(&a);
            let n = mat.rows();
            prop_assume!(n >= 2);
            let p = ExactMatrix::from_fn(n, n, |r, c| {
                if r == c { BigRational::one() } else if r == 0 && c == 1 { BigRational::from_integer(s.into()) } else { BigRational::zero() }
            });
            let mul = |x: &ExactMatrix, y: &ExactMatrix| ExactMatrix::from_fn(n, n, |r, c| {
                (0..n).map(|k| x.get(r, k) * y.get(k, c)).sum()
            });
            let b = mul(&mul(&p.transpose(), &mat), &p);
            prop_assert_eq!(b.signature().unwrap(), mat.signature().unwrap());
        }
    }
}
