//! Per-degree Lefschetz and Hodge–Riemann verdicts for `A(m,2)` with
//! `ℓ = e1`, read off the integer path matrices.
//!
//! The evaluated Hessian in degree `i` is a positive multiple of both the
//! path matrix and the Lefschetz pairing matrix, so determinant signs, ranks
//! and signatures carry over unchanged. Primitive spaces have dimension at
//! most one here, which is what lets determinant signs decide the
//! Hodge–Riemann laws.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::max_hessian_degree;
use crate::exact::sign_of;
use crate::hilbert::{hilbert_m2, plus_variant_mismatches};
use crate::lattice::path_matrix;
use crate::{half_floor, parity_sign, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub i: usize,
    pub h_i: u64,
    pub det_sign: i8,
    pub rank: usize,
    /// `min h_j` over `i <= j <= d - i`.
    pub window_min: u64,
    /// `h_i - h_{i-1}`.
    pub primitive_dim: i64,
    pub signature: i64,
    pub sl_pass: bool,
    pub hlp_pass: bool,
    /// `(-1)^floor(floor((i+2)/2)/2)`.
    pub chrr_expected_sign: i8,
    pub chrr_pass: bool,
    /// `(-1)^floor((i+1)/2)`.
    pub hrr_expected_sign: i8,
    pub hrr_pass: bool,
    /// Complex law weighted by primitive dimensions: each nonzero `P_j`
    /// contributes `(-1)^{j/2}` for even `j` and `+1` for odd `j`.
    pub chrr_primitive_sign: i8,
    pub chrr_primitive_pass: bool,
    /// Real law weighted by primitive dimensions: each nonzero `P_j`
    /// contributes `(-1)^j`.
    pub hrr_primitive_sign: i8,
    pub hrr_primitive_pass: bool,
}

fn require_degree(m: usize, i: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be at least 2, got {m}")));
    }
    let top = max_hessian_degree(m);
    if i > top {
        return Err(Error::range("degree", i as i64, 0, top as i64));
    }
    Ok(())
}

pub fn degree_verdict(m: usize, i: usize) -> Result<DegreeVerdict> {
    require_degree(m, i)?;
    let h = hilbert_m2(m)?;
    verdict_with(m, i, &h)
}

/// `prod_{j <= i} factor(j)^{max(0, h_j - h_{j-1})}`.
fn primitive_sign(h: &[u64], i: usize, factor: impl Fn(usize) -> i8) -> i8 {
    (0..=i)
        .filter(|&j| h[j] > if j == 0 { 0 } else { h[j - 1] })
        .map(|j| factor(j).pow((h[j] - if j == 0 { 0 } else { h[j - 1] }) as u32))
        .product()
}

fn verdict_with(m: usize, i: usize, h: &[u64]) -> Result<DegreeVerdict> {
    let d = 3 * (m - 1);
    let w = path_matrix(m, i)?;
    let det_sign = sign_of(&w.det()?);
    let rank = w.rank();
    let signature = w.signature()?;
    let window_min = *h[i..=d - i].iter().min().expect("window is nonempty");
    let prev = if i == 0 { 0 } else { h[i - 1] };
    let sl_pass = det_sign != 0;
    let ii = i as i64;
    let chrr_expected_sign = parity_sign(half_floor(half_floor(ii + 2)));
    let hrr_expected_sign = parity_sign(half_floor(ii + 1));
    let chrr_primitive_sign = primitive_sign(h, i, |j| if j % 2 == 0 { parity_sign(j as i64 / 2) } else { 1 });
    let hrr_primitive_sign = primitive_sign(h, i, |j| parity_sign(j as i64));
    Ok(DegreeVerdict {
        i,
        h_i: h[i],
        det_sign,
        rank,
        window_min,
        primitive_dim: h[i] as i64 - prev as i64,
        signature,
        sl_pass,
        hlp_pass: rank as u64 == window_min,
        chrr_expected_sign,
        chrr_pass: sl_pass && det_sign == chrr_expected_sign,
        hrr_expected_sign,
        hrr_pass: sl_pass && det_sign == hrr_expected_sign,
        chrr_primitive_sign,
        chrr_primitive_pass: sl_pass && det_sign == chrr_primitive_sign,
        hrr_primitive_sign,
        hrr_primitive_pass: sl_pass && det_sign == hrr_primitive_sign,
    })
}

/// A claim about `A(m,2)` checked against the computed verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimFlag {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub m: usize,
    pub socle_degree: usize,
    pub verdicts: Vec<DegreeVerdict>,
    /// Largest `r` with SL in every degree `<= r`.
    pub max_sl_degree: Option<usize>,
    pub hlp: bool,
    pub max_chrr_degree: Option<usize>,
    pub max_hrr_degree: Option<usize>,
    pub max_chrr_primitive_degree: Option<usize>,
    pub max_hrr_primitive_degree: Option<usize>,
    /// Largest `r` such that the signature matches the alternating sum of
    /// even Hilbert differences in every degree `<= r`.
    pub max_signature_degree: Option<usize>,
    pub claim_flags: Vec<ClaimFlag>,
}

impl PropertyReport {
    pub fn top_degree(&self) -> usize {
        self.verdicts.len() - 1
    }

    pub fn first_sl_failure(&self) -> Option<usize> {
        self.verdicts.iter().find(|v| !v.sl_pass).map(|v| v.i)
    }
}

fn prefix_max(verdicts: &[DegreeVerdict], pass: impl Fn(&DegreeVerdict) -> bool) -> Option<usize> {
    let run = verdicts.iter().take_while(|v| pass(v)).count();
    run.checked_sub(1)
}

/// `sum_{j <= floor(i/2)} (-1)^j (h_{2j} - h_{2j-1})`.
pub fn expected_signature(h: &[u64], i: usize) -> i64 {
    (0..=i / 2)
        .map(|j| {
            let even = h[2 * j] as i64;
            let odd = if j == 0 { 0 } else { h[2 * j - 1] as i64 };
            parity_sign(j as i64) as i64 * (even - odd)
        })
        .sum()
}

fn degrees_where(verdicts: &[DegreeVerdict], pred: impl Fn(&DegreeVerdict) -> bool) -> String {
    let list: Vec<String> = verdicts.iter().filter(|v| pred(v)).map(|v| v.i.to_string()).collect();
    if list.is_empty() {
        "none".into()
    } else {
        list.join(",")
    }
}

pub fn property_report(m: usize) -> Result<PropertyReport> {
    require_degree(m, 0)?;
    let h = hilbert_m2(m)?;
    let verdicts = (0..=max_hessian_degree(m))
        .into_par_iter()
        .map(|i| verdict_with(m, i, &h))
        .collect::<Result<Vec<_>>>()?;
    let top = verdicts.len() - 1;
    let max_sl_degree = prefix_max(&verdicts, |v| v.sl_pass);
    let hlp = verdicts.iter().all(|v| v.hlp_pass);
    let max_chrr_degree = prefix_max(&verdicts, |v| v.chrr_pass);
    let max_hrr_degree = prefix_max(&verdicts, |v| v.hrr_pass);
    let max_chrr_primitive_degree = prefix_max(&verdicts, |v| v.chrr_primitive_pass);
    let max_hrr_primitive_degree = prefix_max(&verdicts, |v| v.hrr_primitive_pass);
    let max_signature_degree = prefix_max(&verdicts, |v| v.signature == expected_signature(&h, v.i));

    let mut claim_flags = Vec::new();
    if m % 2 == 0 {
        claim_flags.push(ClaimFlag {
            claim: "even m: SL in every degree".into(),
            holds: max_sl_degree == Some(top),
            detail: format!("SL fails at degrees {}", degrees_where(&verdicts, |v| !v.sl_pass)),
        });
        claim_flags.push(ClaimFlag {
            claim: "even m: complex HRR determinant sign law in every degree".into(),
            holds: max_chrr_degree == Some(top),
            detail: format!("sign law fails at degrees {}", degrees_where(&verdicts, |v| !v.chrr_pass)),
        });
        claim_flags.push(ClaimFlag {
            claim: "even m: complex HRR weighted by primitive dimensions in every degree".into(),
            holds: max_chrr_primitive_degree == Some(top),
            detail: format!(
                "weighted sign law fails at degrees {}",
                degrees_where(&verdicts, |v| !v.chrr_primitive_pass)
            ),
        });
    } else {
        let holds = max_sl_degree.is_some_and(|r| r + 1 >= m);
        claim_flags.push(ClaimFlag {
            claim: format!("odd m: SL through degree m-1 = {}", m - 1),
            holds,
            detail: format!("max SL degree {}", render_degree(max_sl_degree)),
        });
    }
    claim_flags.push(ClaimFlag {
        claim: "HLP in every degree".into(),
        holds: hlp,
        detail: format!("HLP fails at degrees {}", degrees_where(&verdicts, |v| !v.hlp_pass)),
    });
    let mismatches = degrees_where(&verdicts, |v| v.sl_pass != (2 * v.h_i <= m as u64));
    claim_flags.push(ClaimFlag {
        claim: "det != 0 iff 2h_i <= m".into(),
        holds: mismatches == "none",
        detail: format!("mismatch at degrees {mismatches}"),
    });

    let plus = plus_variant_mismatches(m)?;
    claim_flags.push(ClaimFlag {
        claim: "Hilbert closed form with + floor*((i+2-2m)/2)".into(),
        holds: plus.is_empty(),
        detail: format!("differs at degrees {}", join_degrees(&plus)),
    });

    Ok(PropertyReport {
        m,
        socle_degree: 3 * (m - 1),
        verdicts,
        max_sl_degree,
        hlp,
        max_chrr_degree,
        max_hrr_degree,
        max_chrr_primitive_degree,
        max_hrr_primitive_degree,
        max_signature_degree,
        claim_flags,
    })
}

fn join_degrees(v: &[usize]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn render_degree(r: Option<usize>) -> String {
    r.map_or_else(|| "none".into(), |r| r.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SignatureCheck {
    Applicable { signature: i64, expected: i64 },
    /// SL fails in some degree `<= i`, so the signature law does not apply.
    NotApplicable { sl_failure: usize },
}

impl SignatureCheck {
    pub fn agrees(&self) -> Option<bool> {
        match self {
            SignatureCheck::Applicable { signature, expected } => Some(signature == expected),
            SignatureCheck::NotApplicable { .. } => None,
        }
    }
}

pub fn signature_crosscheck(m: usize, i: usize) -> Result<SignatureCheck> {
    require_degree(m, i)?;
    for j in 0..=i {
        let det = path_matrix(m, j)?.det()?;
        if sign_of(&det) == 0 {
            return Ok(SignatureCheck::NotApplicable { sl_failure: j });
        }
    }
    let h = hilbert_m2(m)?;
    Ok(SignatureCheck::Applicable {
        signature: path_matrix(m, i)?.signature()?,
        expected: expected_signature(&h, i),
    })
}
