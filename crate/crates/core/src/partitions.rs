//! The partition family `P(m,n)`: parts at most `n`, no part repeated `m`
//! or more times. Its size generating function is the Hilbert series of
//! `A(m,n)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::algebra::hessian_closed_form;
use crate::exact::{binomial, factorial, int_to_rational};
use crate::lattice::path_matrix;
use crate::{Error, Result};

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    /// Builds the partition with `multiplicities[k]` copies of `k + 1`.
    pub fn from_multiplicities(multiplicities: &[u32]) -> Self {
        let parts = multiplicities
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(k, &j)| std::iter::repeat_n(k as u32 + 1, j as usize))
            .collect();
        Partition { parts }
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

const MAX_MEMBERS: u64 = 1 << 27;

fn member_count(m: usize, n: usize) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("P(m,n) needs m, n >= 1 (got m={m}, n={n})")));
    }
    (m as u64)
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_MEMBERS)
        .ok_or_else(|| Error::TooLarge(format!("P({m},{n}) has more than {MAX_MEMBERS} members")))
}

/// Visits every multiplicity vector in `{0..m-1}^n` (odometer order).
fn for_each_multiplicity(m: usize, n: usize, mut f: impl FnMut(&[u32])) {
    let mut digits = vec![0u32; n];
    loop {
        f(&digits);
        let Some(k) = digits.iter().position(|&d| d + 1 < m as u32) else {
            return;
        };
        digits[k] += 1;
        digits[..k].iter_mut().for_each(|d| *d = 0);
    }
}

/// Members of `P(m,n)` ordered by size, then with larger leading parts first.
pub fn enumerate_p(m: usize, n: usize) -> Result<Vec<Partition>> {
    member_count(m, n)?;
    let mut out = Vec::new();
    for_each_multiplicity(m, n, |j| out.push(Partition::from_multiplicities(j)));
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.parts.cmp(&a.parts)));
    Ok(out)
}

/// Number of members of `P(m,n)` of each size `0..=n(n+1)(m-1)/2`.
pub fn partition_gf(m: usize, n: usize) -> Result<Vec<u64>> {
    member_count(m, n)?;
    let top = n * (n + 1) / 2 * (m - 1);
    let mut counts = vec![0u64; top + 1];
    for_each_multiplicity(m, n, |j| {
        let size: usize = j.iter().enumerate().map(|(k, &c)| (k + 1) * c as usize).sum();
        counts[size] += 1;
    });
    Ok(counts)
}

/// `m^C(n,2) (C(n+1,2)(m-1))! 1!2!...(n-1)! / ((m-1)!(2m-1)!...(nm-1)!)`.
pub fn totaro_degree(m: usize, n: usize) -> Result<BigRational> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("totaro_degree needs m, n >= 1 (got m={m}, n={n})")));
    }
    let (mi, ni) = (m as i64, n as i64);
    let mut numer = BigInt::from(m).pow(binomial(ni, 2).try_into().expect("small exponent"));
    numer *= factorial((n * (n + 1) / 2 * (m - 1)) as u64);
    let mut denom = BigInt::one();
    for k in 1..=ni {
        if k < ni {
            numer *= factorial(k as u64);
        }
        denom *= factorial((k * mi - 1) as u64);
    }
    Ok(BigRational::new(numer, denom))
}

/// Whether `totaro_degree(m, 2)`, `(3m-3)! Hess_0` and the path count
/// `(0,0) -> (2m-2, m-1)` coincide.
pub fn totaro_hessian_crosscheck(m: usize) -> Result<bool> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be at least 2, got {m}")));
    }
    let degree = totaro_degree(m, 2)?;
    let hess = hessian_closed_form(m, 0)?.get(0, 0).clone() * int_to_rational(factorial(3 * (m as u64 - 1)));
    let paths = path_matrix(m, 0)?.get(0, 0).clone();
    Ok(degree == hess && hess == paths)
}
