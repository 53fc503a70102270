use std::fmt::Write as _;

use anyhow::{bail, Result};
use lefpath::algebra::{self, annihilator_check, dual_generator, f_m, verify_f_recursion, verify_power_sum};
use lefpath::catalan::{catalan_power, catalan_power_reciprocal, check_identity_zero};
use lefpath::exact::{render_rational, ExactMatrix, ExactRational};
use lefpath::hilbert::{hilbert_m2, hilbert_series};
use lefpath::lattice::{
    check_dvd_theorem, check_involution, enumerate_systems, flip_classes, lgv_signed_sum, path_matrix,
    vertex_sets, DvdMode, DvdVerdict, PathSystem, SystemFilter,
};
use lefpath::lefschetz::{expected_signature, property_report, render_degree, PropertyReport};
use lefpath::partitions::{enumerate_p, partition_gf, totaro_degree};
use lefpath::exact::int_to_rational;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::render::{join, pass, signed, table, to_json, verdict_word, Outcome};

pub fn hilbert(m: usize, n: usize, closed_form: bool) -> Result<Outcome> {
    let series = hilbert_series(m, n)?;
    let coeffs: Vec<String> = series.coeffs.iter().map(|c| c.to_string()).collect();
    let mut ok = true;
    let mut text = join(&coeffs, " ");
    if closed_form {
        if n != 2 {
            bail!("--closed-form is only available for n = 2");
        }
        let closed: Vec<String> = hilbert_m2(m)?.iter().map(u64::to_string).collect();
        ok = closed == coeffs;
        text = join(&closed, " ");
        if !ok {
            let _ = write!(text, "\nMISMATCH: series gives {}", join(&coeffs, " "));
        }
    }
    Ok(Outcome {
        text,
        inputs: json!({"m": m, "n": n, "closed_form": closed_form}),
        results: json!({
            "coeffs": coeffs,
            "socle_degree": series.socle_degree(),
            "unimodal": series.is_unimodal(),
        }),
        ok,
    })
}

pub struct HessianArgs {
    pub m: usize,
    pub i: usize,
    pub det: bool,
    pub rank: bool,
    pub paths: bool,
    pub c1: Option<ExactRational>,
    pub c2: Option<ExactRational>,
}

pub fn hessian(a: HessianArgs) -> Result<Outcome> {
    let w: ExactMatrix = if a.paths {
        if a.c1.is_some() || a.c2.is_some() {
            bail!("--paths is the integer matrix at (1,0); --c1/--c2 do not apply");
        }
        path_matrix(a.m, a.i)?
    } else {
        let c1 = a.c1.clone().unwrap_or_else(|| int_to_rational(1.into()));
        let c2 = a.c2.clone().unwrap_or_else(|| int_to_rational(0.into()));
        algebra::hessian(a.m, a.i, (&c1, &c2))?
    };
    let mut lines = Vec::new();
    let mut results = json!({ "matrix": to_json(&w) });
    if !a.det && !a.rank {
        lines.push(w.to_string());
    }
    if a.det {
        let det = render_rational(&w.det()?);
        lines.push(det.clone());
        results["det"] = json!(det);
    }
    if a.rank {
        let rank = w.rank();
        lines.push(rank.to_string());
        results["rank"] = json!(rank);
    }
    let point = |c: &Option<ExactRational>, d: &str| c.as_ref().map_or(d.to_string(), render_rational);
    Ok(Outcome {
        text: lines.join("\n"),
        inputs: json!({
            "m": a.m, "i": a.i, "paths": a.paths,
            "c1": point(&a.c1, "1"), "c2": point(&a.c2, "0"),
        }),
        results,
        ok: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LatticeCheck {
    Count,
    LgvCheck,
    DvdCount,
    InvolutionCheck,
}

pub fn dvd_flag(v: &DvdVerdict) -> String {
    format!(
        "FLAG: det != 0 iff 2h_i <= m fails at m={} i={}: det={}, 2h_i={}",
        v.m,
        v.i,
        v.det,
        2 * v.h
    )
}

pub fn lattice(m: usize, i: usize, check: LatticeCheck) -> Result<Outcome> {
    let inputs = json!({"m": m, "i": i, "check": format!("{check:?}")});
    let outcome = match check {
        LatticeCheck::Count => {
            let sets = vertex_sets(m, i)?;
            let w = path_matrix(m, i)?;
            let text = format!(
                "A={}\nB={}\n{}",
                join(&sets.a, " "),
                join(&sets.b, " "),
                w
            );
            Outcome {
                text,
                inputs,
                results: json!({"vertex_sets": to_json(&sets), "matrix": to_json(&w)}),
                ok: true,
            }
        }
        LatticeCheck::LgvCheck => {
            let signed_sum = lgv_signed_sum(m, i)?;
            let det = path_matrix(m, i)?.det()?;
            let ok = int_to_rational(signed_sum.clone()) == det;
            Outcome {
                text: format!("signed_sum={signed_sum} det={} {}", render_rational(&det), verdict_word(ok)),
                inputs,
                results: json!({"signed_sum": signed_sum.to_string(), "det": render_rational(&det), "equal": ok}),
                ok,
            }
        }
        LatticeCheck::DvdCount => {
            let v = check_dvd_theorem(m, i, DvdMode::Enumerate)?;
            let ok = v.holds();
            let mut text = format!(
                "N={} sign={} det={} {}",
                v.count.expect("enumerated"),
                v.predicted_sign,
                v.det,
                verdict_word(ok)
            );
            if v.reversal_only == Some(false) {
                text.push_str(" (non-reversal permutation found)");
            }
            if !v.criterion_agrees {
                text.push_str(" (2h<=m criterion mismatch flagged)\n");
                text.push_str(&dvd_flag(&v));
            }
            Outcome {
                text,
                inputs,
                results: to_json(&v),
                ok,
            }
        }
        LatticeCheck::InvolutionCheck => {
            let r = check_involution(m, i)?;
            let ok = r.holds();
            Outcome {
                text: format!(
                    "domain={} fixed_points={} involutive={} sign_reversing={} closed={} signed_sum={} {}",
                    r.domain_size,
                    r.fixed_points,
                    r.involutive,
                    r.sign_reversing,
                    r.closed,
                    r.signed_sum,
                    verdict_word(ok)
                ),
                inputs,
                results: to_json(&r),
                ok,
            }
        }
    };
    Ok(outcome)
}

pub const REPORT_COLUMNS: [&str; 13] = [
    "i", "h", "det", "rank", "min", "sig", "sig*", "SL", "HLP", "cHRR", "cHRR*", "HRR", "HRR*",
];

pub fn report_rows(r: &PropertyReport) -> Result<Vec<Vec<String>>> {
    let h = hilbert_m2(r.m)?;
    Ok(r.verdicts
        .iter()
        .map(|v| {
            vec![
                v.i.to_string(),
                v.h_i.to_string(),
                signed(v.det_sign),
                v.rank.to_string(),
                v.window_min.to_string(),
                v.signature.to_string(),
                expected_signature(&h, v.i).to_string(),
                pass(v.sl_pass),
                pass(v.hlp_pass),
                pass(v.chrr_pass),
                pass(v.chrr_primitive_pass),
                pass(v.hrr_pass),
                pass(v.hrr_primitive_pass),
            ]
        })
        .collect())
}

pub fn render_report(r: &PropertyReport) -> Result<String> {
    let mut out = format!("m={} socle_degree={}\n", r.m, r.socle_degree);
    out.push_str(&table(&REPORT_COLUMNS, &report_rows(r)?));
    let top = r.top_degree();
    let _ = writeln!(out, "max SL degree: {} of {top}", render_degree(r.max_sl_degree));
    let _ = writeln!(out, "HLP: {}", pass(r.hlp));
    let _ = writeln!(out, "max complex HRR degree: {}", render_degree(r.max_chrr_degree));
    let _ = writeln!(
        out,
        "max complex HRR degree (primitive-weighted): {}",
        render_degree(r.max_chrr_primitive_degree)
    );
    let _ = writeln!(out, "max HRR degree: {}", render_degree(r.max_hrr_degree));
    let _ = writeln!(
        out,
        "max HRR degree (primitive-weighted): {}",
        render_degree(r.max_hrr_primitive_degree)
    );
    let _ = writeln!(out, "max signature-law degree: {}", render_degree(r.max_signature_degree));
    for f in &r.claim_flags {
        if f.holds {
            let _ = writeln!(out, "ok: {}", f.claim);
        } else {
            let _ = writeln!(out, "FLAG: {} ({})", f.claim, f.detail);
        }
    }
    Ok(out.trim_end().to_string())
}

pub fn report(m: usize) -> Result<Outcome> {
    let r = property_report(m)?;
    Ok(Outcome {
        text: render_report(&r)?,
        inputs: json!({"m": m}),
        results: to_json(&r),
        ok: true,
    })
}

pub fn presentation(m: usize) -> Result<Outcome> {
    let f = f_m(m)?;
    let big_f = dual_generator(m)?;
    let annihilated = annihilator_check(m)?;
    let recursion = if m >= 3 { Some(verify_f_recursion(m)?) } else { None };
    let power_sum = verify_power_sum(m)?;
    let ok = annihilated && recursion != Some(false) && power_sum;
    let mut text = format!("f_{m} = {f}\nF_{m} = {big_f}\n");
    let _ = writeln!(text, "f_{m} o F_{m} = 0: {}", verdict_word(annihilated));
    if let Some(rec) = recursion {
        let _ = writeln!(text, "recursions: {}", verdict_word(rec));
    }
    let _ = write!(text, "f_{m}(x+y, xy) = x^{m} + y^{m}: {}", verdict_word(power_sum));
    Ok(Outcome {
        text,
        inputs: json!({"m": m}),
        results: json!({
            "f": to_json(&f),
            "dual_generator": to_json(&big_f),
            "annihilated": annihilated,
            "recursion": recursion,
            "power_sum": power_sum,
        }),
        ok,
    })
}

fn system_line(s: &PathSystem) -> String {
    format!(
        "sign={} perm=[{}] {}",
        signed(s.sign()),
        join(s.permutation(), ","),
        join(s.paths(), " ")
    )
}

pub fn systems(m: usize, i: usize, filter: SystemFilter, limit: Option<usize>, classes: bool) -> Result<Outcome> {
    let inputs = json!({"m": m, "i": i, "filter": to_json(&filter), "limit": limit, "classes": classes});
    if classes {
        if filter != SystemFilter::DoublyVertexDisjoint {
            bail!("--classes groups doubly vertex-disjoint systems; use --filter doubly-vertex-disjoint");
        }
        let mut all = flip_classes(m, i)?;
        let total: u64 = all.iter().map(|c| c.multiplicity).sum();
        if let Some(n) = limit {
            all.truncate(n);
        }
        let mut text = format!("classes={} total={total}", all.len());
        for c in &all {
            let _ = write!(
                text,
                "\nx{} segments={} {}",
                c.multiplicity,
                c.primitive_segments,
                system_line(&c.upper)
            );
        }
        return Ok(Outcome {
            text,
            inputs,
            results: json!({"total": total, "classes": to_json(&all)}),
            ok: true,
        });
    }
    let mut all = enumerate_systems(m, i, filter)?;
    let total = all.len();
    if let Some(n) = limit {
        all.truncate(n);
    }
    let mut text = format!("systems={total}");
    for s in &all {
        let _ = write!(text, "\n{}", system_line(s));
    }
    Ok(Outcome {
        text,
        inputs,
        results: json!({"total": total, "systems": to_json(&all)}),
        ok: true,
    })
}

pub fn partitions(m: usize, n: usize, list: bool) -> Result<Outcome> {
    let gf = partition_gf(m, n)?;
    let series: Vec<u64> = hilbert_series(m, n)?
        .coeffs
        .iter()
        .map(|c| c.to_u64().expect("bounded by m^n"))
        .collect();
    let ok = gf == series;
    let members: u64 = gf.iter().sum();
    let degree = totaro_degree(m, n)?;
    let mut text = format!(
        "members={members}\ngf: {}\nhilbert series: {}\ntotaro_degree={}",
        join(&gf, " "),
        verdict_word(ok),
        render_rational(&degree)
    );
    let mut results = json!({
        "members": members,
        "gf": gf,
        "gf_matches_hilbert": ok,
        "totaro_degree": render_rational(&degree),
    });
    if list {
        let all = enumerate_p(m, n)?;
        for p in &all {
            let _ = write!(text, "\n{p}");
        }
        results["partitions"] = json!(all.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
    Ok(Outcome {
        text,
        inputs: json!({"m": m, "n": n, "list": list}),
        results,
        ok,
    })
}

pub fn catalan(m: usize, order: usize, reciprocal: bool) -> Result<Outcome> {
    let series = if reciprocal {
        catalan_power_reciprocal(m, order)?
    } else {
        catalan_power(m, order)?
    };
    let mut text = series.render();
    let mut identity = None;
    if m >= 2 {
        let holds = (1..=m / 2).map(|i| check_identity_zero(m, i)).collect::<lefpath::Result<Vec<_>>>()?;
        let all = holds.iter().all(|&b| b);
        let _ = write!(text, "\nidentity through x^{}: {}", m / 2, verdict_word(all));
        identity = Some(all);
    }
    Ok(Outcome {
        text,
        inputs: json!({"m": m, "order": order, "reciprocal": reciprocal}),
        results: json!({
            "coeffs": series.coeffs().iter().map(render_rational).collect::<Vec<_>>(),
            "identity_zero": identity,
        }),
        ok: identity != Some(false),
    })
}
