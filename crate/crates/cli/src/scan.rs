use std::ops::RangeInclusive;

use anyhow::{bail, Context, Result};
use lefpath::algebra::max_hessian_degree;
use lefpath::catalan::{catalan_power, catalan_power_reciprocal, check_identity_zero};
use lefpath::algebra::c_coeff;
use lefpath::exact::int_to_rational;
use lefpath::hilbert::{first_unimodality_violation, hilbert_m2, hilbert_series};
use lefpath::lattice::{check_dvd_theorem, lgv_signed_sum, DvdMode};
use lefpath::lefschetz::{expected_signature, property_report, PropertyReport};
use lefpath::partitions::{partition_gf, totaro_hessian_crosscheck};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::render_report;
use crate::render::{join, table, to_json, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Hilbert,
    Lefschetz,
    Lattice,
    Catalan,
    Partitions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub struct ScanConfig {
    pub m: RangeInclusive<usize>,
    pub n: RangeInclusive<usize>,
    pub modes: Vec<Mode>,
    pub format: Format,
    pub jobs: usize,
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single `a`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertRow {
    pub m: usize,
    pub n: usize,
    pub socle_degree: usize,
    pub unimodal: bool,
    pub first_violation: Option<usize>,
    pub closed_form_matches: Option<bool>,
    pub coeffs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LefschetzRow {
    pub m: usize,
    pub i: usize,
    pub h_i: u64,
    pub det_sign: i8,
    pub rank: usize,
    pub window_min: u64,
    pub signature: i64,
    pub expected_signature: i64,
    pub sl: bool,
    pub hlp: bool,
    pub chrr_expected_sign: i8,
    pub chrr: bool,
    pub chrr_weighted: bool,
    pub hrr: bool,
    pub hrr_weighted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeRow {
    pub m: usize,
    pub i: usize,
    pub h: usize,
    pub det: String,
    pub predicted_sign: i8,
    pub lgv_signed_sum: Option<String>,
    pub doubly_count: Option<u64>,
    pub equality: Option<bool>,
    pub reversal_only: Option<bool>,
    pub criterion_predicts_nonvanishing: bool,
    pub criterion_agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalanRow {
    pub m: usize,
    pub identity_zero: bool,
    pub reciprocal_head_matches: bool,
    pub closed_form_matches_product: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionRow {
    pub m: usize,
    pub n: usize,
    pub members: u64,
    pub gf_matches_hilbert: bool,
    pub totaro_matches: Option<bool>,
}

/// Instances up to this `m` are checked by exhaustive enumeration in the
/// lattice mode; larger ones report the determinant only.
pub const LATTICE_ENUMERATION_MAX_M: usize = 6;
const CATALAN_ORDER: usize = 20;

pub const CSV_HELP: &str = "\
CSV columns by mode (one header row per mode block, blocks separated by a blank line):
  hilbert:    m,n,socle_degree,unimodal,first_violation,closed_form_matches,coeffs
  lefschetz:  m,i,h_i,det_sign,rank,window_min,signature,expected_signature,sl,hlp,
              chrr_expected_sign,chrr,chrr_weighted,hrr,hrr_weighted
  lattice:    m,i,h,det,predicted_sign,lgv_signed_sum,doubly_count,equality,reversal_only,
              criterion_predicts_nonvanishing,criterion_agrees
  catalan:    m,identity_zero,reciprocal_head_matches,closed_form_matches_product
  partitions: m,n,members,gf_matches_hilbert,totaro_matches
Optional cells are empty when a check does not apply. `weighted` columns use sign laws
weighted by primitive dimensions h_i - h_(i-1).";

fn hilbert_rows(cfg: &ScanConfig) -> Result<Vec<HilbertRow>> {
    let tasks: Vec<(usize, usize)> = cfg.m.clone().flat_map(|m| cfg.n.clone().map(move |n| (m, n))).collect();
    tasks
        .par_iter()
        .map(|&(m, n)| {
            let series = hilbert_series(m, n)?;
            let closed_form_matches = if n == 2 {
                let closed = hilbert_m2(m)?;
                Some(series.coeffs.iter().map(|c| c.to_u64()).eq(closed.iter().map(|&c| Some(c))))
            } else {
                None
            };
            Ok(HilbertRow {
                m,
                n,
                socle_degree: series.socle_degree(),
                unimodal: series.is_unimodal(),
                first_violation: first_unimodality_violation(&series.coeffs),
                closed_form_matches,
                coeffs: join(&series.coeffs, " "),
            })
        })
        .collect()
}

fn lefschetz_reports(cfg: &ScanConfig) -> Result<Vec<PropertyReport>> {
    let ms: Vec<usize> = cfg.m.clone().collect();
    ms.par_iter().map(|&m| Ok(property_report(m)?)).collect()
}

fn lefschetz_rows(reports: &[PropertyReport]) -> Result<Vec<LefschetzRow>> {
    let mut rows = Vec::new();
    for r in reports {
        let h = hilbert_m2(r.m)?;
        rows.extend(r.verdicts.iter().map(|v| LefschetzRow {
            m: r.m,
            i: v.i,
            h_i: v.h_i,
            det_sign: v.det_sign,
            rank: v.rank,
            window_min: v.window_min,
            signature: v.signature,
            expected_signature: expected_signature(&h, v.i),
            sl: v.sl_pass,
            hlp: v.hlp_pass,
            chrr_expected_sign: v.chrr_expected_sign,
            chrr: v.chrr_pass,
            chrr_weighted: v.chrr_primitive_pass,
            hrr: v.hrr_pass,
            hrr_weighted: v.hrr_primitive_pass,
        }));
    }
    Ok(rows)
}

fn lattice_rows(cfg: &ScanConfig) -> Result<Vec<LatticeRow>> {
    let tasks: Vec<(usize, usize)> = cfg.m.clone().flat_map(|m| (0..=max_hessian_degree(m)).map(move |i| (m, i))).collect();
    tasks
        .par_iter()
        .map(|&(m, i)| {
            let enumerate = m <= LATTICE_ENUMERATION_MAX_M;
            let mode = if enumerate { DvdMode::Enumerate } else { DvdMode::DetOnly };
            let v = check_dvd_theorem(m, i, mode)?;
            let lgv = if enumerate { Some(lgv_signed_sum(m, i)?) } else { None };
            let lgv_ok = lgv.as_ref().is_none_or(|s| *s == v.det);
            Ok(LatticeRow {
                m,
                i,
                h: v.h,
                det: v.det.to_string(),
                predicted_sign: v.predicted_sign,
                lgv_signed_sum: lgv.map(|s| s.to_string()),
                doubly_count: v.count,
                equality: v.equality.map(|e| e && lgv_ok && v.sign_consistent),
                reversal_only: v.reversal_only,
                criterion_predicts_nonvanishing: v.criterion_predicts_nonvanishing,
                criterion_agrees: v.criterion_agrees,
            })
        })
        .collect()
}

fn catalan_rows(cfg: &ScanConfig) -> Result<Vec<CatalanRow>> {
    let ms: Vec<usize> = cfg.m.clone().collect();
    ms.par_iter()
        .map(|&m| {
            if m == 0 {
                bail!("catalan mode needs m >= 1");
            }
            let identity_zero = if m >= 2 {
                (1..=m / 2).map(|i| check_identity_zero(m, i)).collect::<lefpath::Result<Vec<_>>>()?.into_iter().all(|b| b)
            } else {
                true
            };
            let recip = catalan_power_reciprocal(m, CATALAN_ORDER)?;
            let reciprocal_head_matches = (0..=(m / 2).min(CATALAN_ORDER)).all(|n| {
                let c = c_coeff(m as i64, n as i64);
                let expected = if n % 2 == 0 { c } else { -c };
                *recip.coeff(n) == int_to_rational(expected)
            });
            let product = catalan_power(1, CATALAN_ORDER)?.pow(m);
            let closed_form_matches_product = product == catalan_power(m, CATALAN_ORDER)?;
            Ok(CatalanRow {
                m,
                identity_zero,
                reciprocal_head_matches,
                closed_form_matches_product,
            })
        })
        .collect()
}

fn partition_rows(cfg: &ScanConfig) -> Result<Vec<PartitionRow>> {
    let tasks: Vec<(usize, usize)> = cfg.m.clone().flat_map(|m| cfg.n.clone().map(move |n| (m, n))).collect();
    tasks
        .par_iter()
        .map(|&(m, n)| {
            let gf = partition_gf(m, n)?;
            let series = hilbert_series(m, n)?;
            let gf_matches_hilbert = gf.iter().map(|&c| Some(c)).eq(series.coeffs.iter().map(|c| c.to_u64()));
            let totaro_matches = if n == 2 && m >= 2 { Some(totaro_hessian_crosscheck(m)?) } else { None };
            Ok(PartitionRow {
                m,
                n,
                members: gf.iter().sum(),
                gf_matches_hilbert,
                totaro_matches,
            })
        })
        .collect()
}

enum Block {
    Hilbert(Vec<HilbertRow>),
    Lefschetz(Vec<PropertyReport>, Vec<LefschetzRow>),
    Lattice(Vec<LatticeRow>),
    Catalan(Vec<CatalanRow>),
    Partitions(Vec<PartitionRow>),
}

impl Block {
    fn ok(&self) -> bool {
        match self {
            Block::Hilbert(rows) => rows.iter().all(|r| r.closed_form_matches != Some(false)),
            // reported findings only
            Block::Lefschetz(..) => true,
            Block::Lattice(rows) => rows.iter().all(|r| r.equality != Some(false) && r.reversal_only != Some(false)),
            Block::Catalan(rows) => rows
                .iter()
                .all(|r| r.identity_zero && r.reciprocal_head_matches && r.closed_form_matches_product),
            Block::Partitions(rows) => rows
                .iter()
                .all(|r| r.gf_matches_hilbert && r.totaro_matches != Some(false)),
        }
    }

    fn json(&self) -> Value {
        match self {
            Block::Hilbert(rows) => to_json(rows),
            Block::Lefschetz(reports, _) => to_json(reports),
            Block::Lattice(rows) => to_json(rows),
            Block::Catalan(rows) => to_json(rows),
            Block::Partitions(rows) => to_json(rows),
        }
    }

    fn csv(&self) -> Result<String> {
        fn write<T: Serialize>(rows: &[T]) -> Result<String> {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            Ok(String::from_utf8(w.into_inner().context("flushing csv")?)?)
        }
        match self {
            Block::Hilbert(rows) => write(rows),
            Block::Lefschetz(_, rows) => write(rows),
            Block::Lattice(rows) => write(rows),
            Block::Catalan(rows) => write(rows),
            Block::Partitions(rows) => write(rows),
        }
    }

    fn table(&self) -> Result<String> {
        let opt = |o: Option<bool>| o.map_or("-".to_string(), |b| b.to_string());
        Ok(match self {
            Block::Hilbert(rows) => table(
                &["m", "n", "d", "unimodal", "first_violation", "closed_form", "coeffs"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.m.to_string(),
                            r.n.to_string(),
                            r.socle_degree.to_string(),
                            r.unimodal.to_string(),
                            r.first_violation.map_or("-".into(), |v| v.to_string()),
                            opt(r.closed_form_matches),
                            r.coeffs.clone(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
            Block::Lefschetz(reports, _) => {
                let blocks = reports.iter().map(render_report).collect::<Result<Vec<_>>>()?;
                blocks.join("\n\n") + "\n"
            }
            Block::Lattice(rows) => table(
                &["m", "i", "h", "det", "sign", "lgv", "N", "equality", "reversal", "2h<=m", "criterion"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.m.to_string(),
                            r.i.to_string(),
                            r.h.to_string(),
                            r.det.clone(),
                            r.predicted_sign.to_string(),
                            r.lgv_signed_sum.clone().unwrap_or_else(|| "-".into()),
                            r.doubly_count.map_or("-".into(), |c| c.to_string()),
                            opt(r.equality),
                            opt(r.reversal_only),
                            r.criterion_predicts_nonvanishing.to_string(),
                            if r.criterion_agrees { "agrees" } else { "FLAG" }.to_string(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
            Block::Catalan(rows) => table(
                &["m", "identity", "reciprocal_head", "product"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.m.to_string(),
                            r.identity_zero.to_string(),
                            r.reciprocal_head_matches.to_string(),
                            r.closed_form_matches_product.to_string(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
            Block::Partitions(rows) => table(
                &["m", "n", "members", "gf=hilbert", "totaro"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.m.to_string(),
                            r.n.to_string(),
                            r.members.to_string(),
                            r.gf_matches_hilbert.to_string(),
                            opt(r.totaro_matches),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
        })
    }
}

fn run_mode(mode: Mode, cfg: &ScanConfig) -> Result<Block> {
    Ok(match mode {
        Mode::Hilbert => Block::Hilbert(hilbert_rows(cfg)?),
        Mode::Lefschetz => {
            let reports = lefschetz_reports(cfg)?;
            let rows = lefschetz_rows(&reports)?;
            Block::Lefschetz(reports, rows)
        }
        Mode::Lattice => Block::Lattice(lattice_rows(cfg)?),
        Mode::Catalan => Block::Catalan(catalan_rows(cfg)?),
        Mode::Partitions => Block::Partitions(partition_rows(cfg)?),
    })
}

pub fn scan(cfg: &ScanConfig) -> Result<Outcome> {
    if cfg.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let mut modes = cfg.modes.clone();
    modes.sort();
    modes.dedup();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let blocks = pool.install(|| modes.iter().map(|&mode| run_mode(mode, cfg)).collect::<Result<Vec<_>>>())?;

    let ok = blocks.iter().all(Block::ok);
    let mut results = serde_json::Map::new();
    for (mode, block) in modes.iter().zip(&blocks) {
        results.insert(to_json(mode).as_str().expect("mode name").to_string(), block.json());
    }
    let text = match cfg.format {
        Format::Json => String::new(),
        Format::Csv => blocks.iter().map(Block::csv).collect::<Result<Vec<_>>>()?.join("\n"),
        Format::Table => {
            let parts = modes
                .iter()
                .zip(&blocks)
                .map(|(mode, b)| Ok(format!("== {} ==\n{}", to_json(mode).as_str().unwrap_or(""), b.table()?)))
                .collect::<Result<Vec<_>>>()?;
            parts.join("\n")
        }
    };
    Ok(Outcome {
        text: text.trim_end().to_string(),
        inputs: json!({
            "m": format!("{}..{}", cfg.m.start(), cfg.m.end()),
            "n": format!("{}..{}", cfg.n.start(), cfg.n.end()),
            "modes": to_json(&modes),
        }),
        results: Value::Object(results),
        ok,
    })
}
