//! Exact-arithmetic workbench for the non-standard graded complete
//! intersections `A(m,2) = Q[e1,e2] / (f_m, e2^m)`.
//!
//! Two independent routes are provided for every higher Hessian
//! determinant: the algebraic one (dual generator `F_m`, contraction,
//! evaluated Hessians) and the combinatorial one (subdiagonal NE lattice
//! paths, Lindström–Gessel–Viennot signed sums, doubly vertex disjoint
//! systems). The [`lefschetz`] module assembles per-degree Lefschetz and
//! Hodge–Riemann verdicts from them.

pub mod algebra;
pub mod catalan;
mod error;
pub mod exact;
pub mod hilbert;
pub mod lattice;
pub mod lefschetz;
pub mod partitions;

pub use error::{Error, Result};

/// `floor(x / 2)`.
pub fn half_floor(x: i64) -> i64 {
    x.div_euclid(2)
}

/// `max(0, floor(x / 2))`.
pub fn half_floor_clamped(x: i64) -> i64 {
    half_floor(x).max(0)
}

/// `(-1)^k` as an `i8`.
pub(crate) fn parity_sign(k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
