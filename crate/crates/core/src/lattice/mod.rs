//! Subdiagonal NE lattice paths between the diagonal `y = x` and the shifted
//! diagonal `y = x - (m-1)`, the path matrices they define, and the
//! vertex-disjoint systems behind their determinants.

mod path;
mod system;

pub use path::{
    count_paths, enumerate_paths, flip, primitive_segments, LatticePath, LatticePoint, PathDecomposition, Segment,
    SegmentKind, Step,
};
pub use system::{
    check_dvd_theorem, check_involution, count_systems, enumerate_systems, flip_classes, involution_phi,
    lgv_signed_sum, visit_systems, DvdMode, DvdVerdict, FlipClass, InvolutionReport, PathSystem, SystemFilter,
};

use serde::Serialize;

use crate::algebra::{basis_p_range, max_hessian_degree};
use crate::exact::{int_to_rational, ExactMatrix};
use crate::{Error, Result};

/// Row vertices `A_p = (p, p)` and column vertices `B_q = (2m-2-q, m-1-q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSets {
    pub a: Vec<LatticePoint>,
    pub b: Vec<LatticePoint>,
}

pub fn vertex_sets(m: usize, i: usize) -> Result<VertexSets> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be at least 2, got {m}")));
    }
    let top = max_hessian_degree(m);
    if i > top {
        return Err(Error::range("degree", i as i64, 0, top as i64));
    }
    let k = m as i64 - 1;
    let ps = basis_p_range(m, i);
    Ok(VertexSets {
        a: ps.clone().map(|p| LatticePoint::new(p, p)).collect(),
        b: ps.map(|q| LatticePoint::new(2 * k - q, k - q)).collect(),
    })
}

/// Integer matrix `W` with `W[p][q]` the number of paths `A_p -> B_q`.
pub fn path_matrix(m: usize, i: usize) -> Result<ExactMatrix> {
    let VertexSets { a, b } = vertex_sets(m, i)?;
    let mut counts = Vec::with_capacity(a.len());
    for &from in &a {
        let row = b
            .iter()
            .map(|&to| count_paths(from, to).map(int_to_rational))
            .collect::<Result<Vec<_>>>()?;
        counts.push(row);
    }
    ExactMatrix::from_rows(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hessian_closed_form;
    use crate::exact::factorial;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use std::ops::ControlFlow;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn all_degrees(m: usize) -> std::ops::RangeInclusive<usize> {
        0..=max_hessian_degree(m)
    }

    #[test]
    fn vertex_set_examples() {
        let v = vertex_sets(5, 3).unwrap();
        assert_eq!(v.a, vec![pt(0, 0), pt(1, 1)]);
        assert_eq!(v.b, vec![pt(8, 4), pt(7, 3)]);
        let v = vertex_sets(5, 4).unwrap();
        assert_eq!(v.a, vec![pt(0, 0), pt(1, 1), pt(2, 2)]);
        assert_eq!(v.b, vec![pt(8, 4), pt(7, 3), pt(6, 2)]);
        let v = vertex_sets(5, 6).unwrap();
        assert_eq!(v.a, vec![pt(1, 1), pt(2, 2), pt(3, 3)]);
        assert_eq!(v.b, vec![pt(7, 3), pt(6, 2), pt(5, 1)]);
        assert!(matches!(vertex_sets(5, 7), Err(Error::Range { .. })));
        assert!(vertex_sets(1, 0).is_err());
    }

    #[test]
    fn vertex_sets_sized_by_hilbert() {
        for m in 2..=12 {
            let h = crate::hilbert::hilbert_m2(m).unwrap();
            for i in all_degrees(m) {
                let v = vertex_sets(m, i).unwrap();
                assert_eq!(v.a.len() as u64, h[i]);
                assert!(v.a.iter().all(|p| p.x == p.y));
                assert!(v.b.iter().all(|p| p.shifted_offset(m) == 0));
            }
        }
    }

    #[test]
    fn path_matrix_examples() {
        let w = path_matrix(5, 3).unwrap();
        assert_eq!(w, ExactMatrix::from_i64_rows(&[&[275, 75], &[75, 20]]).unwrap());
        let w = path_matrix(5, 6).unwrap();
        assert_eq!(w, ExactMatrix::from_i64_rows(&[&[20, 5, 1], &[5, 1, 0], &[1, 0, 0]]).unwrap());
        let w = path_matrix(4, 2).unwrap();
        assert_eq!(w, ExactMatrix::from_i64_rows(&[&[48, 14], &[14, 4]]).unwrap());
    }

    #[test]
    fn path_matrix_is_scaled_hessian() {
        for m in 2..=12 {
            for i in all_degrees(m) {
                let scale = int_to_rational(factorial((3 * m - 3 - 2 * i) as u64));
                let hess = hessian_closed_form(m, i).unwrap().scale(&scale);
                assert_eq!(path_matrix(m, i).unwrap(), hess, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn doubly_disjoint_counts() {
        assert_eq!(enumerate_systems(5, 3, SystemFilter::DoublyVertexDisjoint).unwrap().len(), 125);
        assert!(enumerate_systems(5, 4, SystemFilter::DoublyVertexDisjoint).unwrap().is_empty());
        let only = enumerate_systems(5, 6, SystemFilter::DoublyVertexDisjoint).unwrap();
        assert_eq!(only.len(), 1);
        let s = &only[0];
        assert_eq!(s.permutation(), &[2, 1, 0]);
        assert_eq!(s.sign(), -1);
        for (p, y) in s.paths().iter().zip(1..) {
            assert_eq!(p.start(), pt(y, y));
            assert_eq!(p.step_string(), "EEEE");
        }
    }

    #[test]
    fn lgv_examples() {
        assert_eq!(lgv_signed_sum(5, 3).unwrap(), BigInt::from(-125));
        assert_eq!(lgv_signed_sum(5, 4).unwrap(), BigInt::from(0));
        assert_eq!(lgv_signed_sum(2, 0).unwrap(), BigInt::from(2));
    }

    #[test]
    fn lgv_matches_determinant() {
        for m in 2..=5 {
            for i in all_degrees(m) {
                let det = path_matrix(m, i).unwrap().det().unwrap();
                assert_eq!(int_to_rational(lgv_signed_sum(m, i).unwrap()), det, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn unrestricted_signed_sum_is_leibniz_expansion() {
        for m in 2..=4 {
            for i in all_degrees(m) {
                let w = path_matrix(m, i).unwrap();
                let (count, signed) = count_systems(m, i, SystemFilter::All).unwrap();
                assert_eq!(int_to_rational(BigInt::from(signed)), w.det().unwrap());
                // permanent oracle
                let h = w.rows();
                let mut perm: Vec<usize> = (0..h).collect();
                let mut permanent = 0u64;
                permutations(&mut perm, 0, &mut |p| {
                    permanent += p
                        .iter()
                        .enumerate()
                        .map(|(r, &q)| w.get(r, q).to_integer().to_u64().unwrap())
                        .product::<u64>();
                });
                assert_eq!(count, permanent, "m={m} i={i}");
            }
        }
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for j in k..v.len() {
            v.swap(k, j);
            permutations(v, k + 1, f);
            v.swap(k, j);
        }
    }

    #[test]
    fn dvd_theorem_small_instances() {
        for m in 2..=5 {
            for i in all_degrees(m) {
                let v = check_dvd_theorem(m, i, DvdMode::Enumerate).unwrap();
                assert!(v.holds(), "{v:?}");
                assert_eq!(v.reversal_only, Some(true));
            }
        }
    }

    #[test]
    fn dvd_verdict_examples() {
        let v = check_dvd_theorem(5, 3, DvdMode::Enumerate).unwrap();
        assert_eq!((v.det.clone(), v.predicted_sign, v.count), (BigInt::from(-125), -1, Some(125)));
        assert_eq!((v.equality, v.criterion_agrees), (Some(true), true));
        let v = check_dvd_theorem(5, 4, DvdMode::Enumerate).unwrap();
        assert_eq!((v.det.clone(), v.count, v.criterion_agrees), (BigInt::from(0), Some(0), true));
        let v = check_dvd_theorem(5, 6, DvdMode::Enumerate).unwrap();
        assert_eq!((v.det.clone(), v.count, v.equality), (BigInt::from(-1), Some(1), Some(true)));
        assert!(!v.criterion_agrees);
        let v = check_dvd_theorem(5, 6, DvdMode::DetOnly).unwrap();
        assert_eq!((v.count, v.equality), (None, None));
        assert!(v.sign_consistent);
    }

    #[test]
    fn involution_cancels_non_doubly_systems() {
        for (m, i) in [(4, 2), (5, 4)] {
            let r = check_involution(m, i).unwrap();
            assert!(r.domain_size > 0);
            assert!(r.holds(), "{r:?}");
        }
        for m in 2..=5 {
            for i in all_degrees(m) {
                assert!(check_involution(m, i).unwrap().holds(), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn involution_pairs_distinct_systems() {
        let mut first = None;
        visit_systems(5, 4, SystemFilter::VertexDisjoint, |s| {
            if !s.is_doubly_vertex_disjoint() {
                first = Some(s.clone());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        let s = first.unwrap();
        let t = involution_phi(&s).unwrap();
        assert_ne!(s, t);
        assert_eq!(t.sign(), -s.sign());
        assert_eq!(involution_phi(&t).unwrap(), s);
    }

    #[test]
    fn involution_rejects_outside_domain() {
        let dvd = enumerate_systems(5, 3, SystemFilter::DoublyVertexDisjoint).unwrap();
        assert!(matches!(involution_phi(&dvd[0]), Err(Error::Domain(_))));
        let all = enumerate_systems(3, 2, SystemFilter::All).unwrap();
        let crossing = all.iter().find(|s| !s.is_vertex_disjoint()).unwrap();
        assert!(involution_phi(crossing).is_err());
    }

    #[test]
    fn flip_class_multiplicities() {
        let classes = flip_classes(5, 3).unwrap();
        assert_eq!(classes.iter().map(|c| c.multiplicity).sum::<u64>(), 125);
        for m in 2..=5 {
            for i in all_degrees(m) {
                for c in flip_classes(m, i).unwrap() {
                    assert!(c.upper.paths().iter().all(|p| primitive_segments(p, m).unwrap().is_upper()));
                    assert_eq!(c.multiplicity, 1 << c.primitive_segments, "m={m} i={i}");
                }
            }
        }
        assert!(!classes.is_empty());
    }

    #[test]
    fn system_construction_validates() {
        let p0 = LatticePath::parse(pt(0, 0), "EEEEEEEENNNN").unwrap();
        let p1 = LatticePath::parse(pt(1, 1), "EEEEEENN").unwrap();
        let s = PathSystem::new(5, 3, vec![p0.clone(), p1.clone()]).unwrap();
        assert_eq!(s.permutation(), &[0, 1]);
        assert_eq!(s.sign(), 1);
        assert!(PathSystem::new(5, 3, vec![p1.clone(), p0.clone()]).is_err());
        assert!(PathSystem::new(5, 3, vec![p0]).is_err());
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["paths"][1]["steps"], "EEEEEENN");
        assert_eq!(json["paths"][1]["start"], serde_json::json!([1, 1]));
        assert_eq!(json["sign"], 1);
    }

    #[test]
    fn enumeration_order_is_stable() {
        let a = enumerate_systems(4, 3, SystemFilter::VertexDisjoint).unwrap();
        let b = enumerate_systems(4, 3, SystemFilter::VertexDisjoint).unwrap();
        assert_eq!(a, b);
        assert!(matches!(count_systems(9, 0, SystemFilter::All), Err(Error::TooLarge(_))));
    }
}
