//! Hilbert functions of `A(m,n)`, the closed form for `n = 2`, and
//! unimodality scans.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::{half_floor, half_floor_clamped, Error, Result};

/// Coefficients `h_0, ..., h_d` of `prod_{i=1..n} (1 + t^i + ... + t^{(m-1)i})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    pub m: usize,
    pub n: usize,
    pub coeffs: Vec<BigUint>,
}

impl HilbertFunction {
    /// Top nonzero degree, `n(n+1)(m-1)/2`.
    pub fn socle_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.coeffs)
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }
}

pub fn hilbert_series(m: usize, n: usize) -> Result<HilbertFunction> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("hilbert_series needs m, n >= 1 (got m={m}, n={n})")));
    }
    let mut coeffs = vec![BigUint::one()];
    for i in 1..=n {
        let len = coeffs.len() + (m - 1) * i;
        let mut next = vec![BigUint::zero(); len];
        for (k, c) in coeffs.iter().enumerate() {
            for j in 0..m {
                next[k + j * i] += c;
            }
        }
        coeffs = next;
    }
    Ok(HilbertFunction { m, n, coeffs })
}

/// `H(m,2)_i = floor((i+2)/2) - floor*((i+2-m)/2) - floor*((i+2-2m)/2)`
/// where `floor*` clamps at zero.
pub fn hilbert_m2_closed(m: usize, i: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("hilbert_m2_closed needs m >= 1".into()));
    }
    let (m, i) = (m as i64, i as i64);
    let d = 3 * (m - 1);
    if i > d {
        return Err(Error::range("degree", i, 0, d));
    }
    let h = half_floor(i + 2) - half_floor_clamped(i + 2 - m) - half_floor_clamped(i + 2 - 2 * m);
    Ok(h as u64)
}

/// The `n = 2` Hilbert function as machine integers, from the closed form.
pub fn hilbert_m2(m: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::Domain("hilbert_m2 needs m >= 1".into()));
    }
    (0..=3 * (m - 1)).map(|i| hilbert_m2_closed(m, i)).collect()
}

/// Degrees where the variant with `+ floor*((i+2-2m)/2)` as its last term
/// differs from the Hilbert function of `A(m,2)`.
pub fn plus_variant_mismatches(m: usize) -> Result<Vec<usize>> {
    let h = hilbert_m2(m)?;
    let mi = m as i64;
    Ok((0..h.len())
        .filter(|&i| {
            let i = i as i64;
            let plus = half_floor(i + 2) - half_floor_clamped(i + 2 - mi) + half_floor_clamped(i + 2 - 2 * mi);
            plus != h[i as usize] as i64
        })
        .collect())
}

/// Weak unimodality: nondecreasing up to some peak, nonincreasing after.
pub fn is_unimodal<T: Ord>(seq: &[T]) -> bool {
    first_unimodality_violation(seq).is_none()
}

/// Index of the valley preceding the first rise that follows a strict
/// fall, i.e. the entry that breaks unimodality.
pub fn first_unimodality_violation<T: Ord>(seq: &[T]) -> Option<usize> {
    let mut fallen = false;
    for k in 1..seq.len() {
        if seq[k] < seq[k - 1] {
            fallen = true;
        } else if seq[k] > seq[k - 1] && fallen {
            return Some(k - 1);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodalityRecord {
    pub m: usize,
    pub n: usize,
    pub socle_degree: usize,
    pub unimodal: bool,
    pub first_violation_index: Option<usize>,
}

/// One record per `(m, n)`, ordered by `m` then `n`. Work is spread over
/// the current rayon pool; the output order does not depend on it.
pub fn scan_unimodality(
    m_range: RangeInclusive<usize>,
    n_range: RangeInclusive<usize>,
) -> Result<Vec<UnimodalityRecord>> {
    if m_range.is_empty() || n_range.is_empty() {
        return Err(Error::Domain("scan ranges must be nonempty".into()));
    }
    let pairs: Vec<(usize, usize)> = m_range
        .flat_map(|m| n_range.clone().map(move |n| (m, n)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(m, n)| {
            let h = hilbert_series(m, n)?;
            let violation = first_unimodality_violation(&h.coeffs);
            Ok(UnimodalityRecord {
                m,
                n,
                socle_degree: h.socle_degree(),
                unimodal: violation.is_none(),
                first_violation_index: violation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(h: &HilbertFunction) -> Vec<u64> {
        h.coeffs.iter().map(|c| u64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn series_examples() {
        assert_eq!(
            small(&hilbert_series(5, 2).unwrap()),
            vec![1, 1, 2, 2, 3, 2, 3, 2, 3, 2, 2, 1, 1]
        );
        for n in 1..6 {
            assert_eq!(small(&hilbert_series(1, n).unwrap()), vec![1]);
        }
        // (1 + t + t^2)(1 + t^2 + t^4)
        assert_eq!(small(&hilbert_series(3, 2).unwrap()), vec![1, 1, 2, 1, 2, 1, 1]);
    }

    #[test]
    fn series_domain_errors() {
        assert!(matches!(hilbert_series(0, 2), Err(Error::Domain(_))));
        assert!(matches!(hilbert_series(2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(hilbert_m2_closed(5, 10).unwrap(), 2);
        assert_eq!(hilbert_m2_closed(5, 0).unwrap(), 1);
        assert_eq!(hilbert_m2_closed(5, 4).unwrap(), 3);
        assert!(matches!(hilbert_m2_closed(5, 13), Err(Error::Range { value: 13, max: 12, .. })));
    }

    #[test]
    fn closed_form_matches_series() {
        for m in 1..=50 {
            let h = small(&hilbert_series(m, 2).unwrap());
            assert_eq!(hilbert_m2(m).unwrap(), h, "m={m}");
        }
    }

    #[test]
    fn palindromic_with_total_m_pow_n() {
        for m in 1..=8usize {
            for n in 1..=8usize {
                let h = hilbert_series(m, n).unwrap();
                let d = h.socle_degree();
                assert_eq!(d, n * (n + 1) * (m - 1) / 2);
                assert!(h.coeffs[0].is_one() && h.coeffs[d].is_one());
                for k in 0..=d {
                    assert_eq!(h.coeffs[k], h.coeffs[d - k]);
                }
                assert_eq!(h.total(), BigUint::from(m).pow(n as u32));
            }
        }
    }

    #[test]
    fn plateau_structure() {
        for m in 2..=30usize {
            let h = hilbert_m2(m).unwrap();
            let half = (m as u64 + 1) / 2;
            // rising part 1,1,2,2,...
            for i in 0..m - 1 {
                assert_eq!(h[i], (i as u64 + 2) / 2);
            }
            if m % 2 == 0 {
                let mid = &h[m - 2..2 * m];
                assert_eq!(mid.len(), m + 2);
                assert!(mid.iter().all(|&v| v == m as u64 / 2), "m={m}");
            } else {
                let mid = &h[m - 1..2 * m - 1];
                assert_eq!(mid.len(), m);
                for (k, &v) in mid.iter().enumerate() {
                    assert_eq!(v, if k % 2 == 0 { half } else { half - 1 }, "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn unimodality_examples() {
        assert!(is_unimodal(&[1, 1, 2, 2, 2, 2, 2, 2, 1, 1]));
        assert_eq!(small(&hilbert_series(4, 2).unwrap()), vec![1, 1, 2, 2, 2, 2, 2, 2, 1, 1]);
        assert!(!is_unimodal(&[1, 1, 2, 1, 2, 1, 1]));
        assert!(is_unimodal(&[1]));
        assert_eq!(first_unimodality_violation(&[1, 1, 2, 1, 2, 1, 1]), Some(3));
        assert_eq!(first_unimodality_violation(&[3, 2, 2, 3]), Some(2));
    }

    #[test]
    fn unimodal_iff_even_for_n2() {
        let rows = scan_unimodality(2..=50, 2..=2).unwrap();
        for r in rows {
            assert_eq!(r.unimodal, r.m % 2 == 0, "m={}", r.m);
        }
    }

    #[test]
    fn scan_examples() {
        let rows = scan_unimodality(2..=6, 2..=2).unwrap();
        let unimodal: Vec<usize> = rows.iter().filter(|r| r.unimodal).map(|r| r.m).collect();
        assert_eq!(unimodal, vec![2, 4, 6]);

        let rows = scan_unimodality(2..=2, 1..=10).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.unimodal));
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());

        let rows = scan_unimodality(3..=3, 2..=2).unwrap();
        assert_eq!(rows[0].first_violation_index, Some(3));
        assert_eq!(rows[0].socle_degree, 6);
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn empty_scan_rejected() {
        assert!(scan_unimodality(3..=2, 1..=1).is_err());
    }

    #[test]
    fn plus_variant_breaks_from_degree_2m() {
        assert!(plus_variant_mismatches(2).unwrap().is_empty());
        assert_eq!(plus_variant_mismatches(3).unwrap(), vec![6]);
        assert_eq!(plus_variant_mismatches(5).unwrap(), vec![10, 11, 12]);
    }
}
