use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::path::{enumerate_paths, flip, primitive_segments, LatticePath, LatticePoint};
use super::{path_matrix, vertex_sets, VertexSets};
use crate::{half_floor, parity_sign, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemFilter {
    All,
    VertexDisjoint,
    DoublyVertexDisjoint,
}

/// Paths from every row vertex `A_r` to the column vertex
/// `B_{permutation[r]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSystem {
    m: usize,
    i: usize,
    paths: Vec<LatticePath>,
    permutation: Vec<usize>,
    sign: i8,
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let inversions = (0..perm.len())
        .flat_map(|a| (a + 1..perm.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| perm[a] > perm[b])
        .count();
    parity_sign(inversions as i64)
}

fn vertices_disjoint(paths: &[LatticePath]) -> bool {
    let mut seen = std::collections::HashSet::new();
    paths.iter().all(|p| p.vertices().into_iter().all(|v| seen.insert(v)))
}

impl PathSystem {
    /// Validates that path `r` starts at `A_r` and ends at some distinct `B_q`.
    pub fn new(m: usize, i: usize, paths: Vec<LatticePath>) -> Result<Self> {
        let sets = vertex_sets(m, i)?;
        if paths.len() != sets.a.len() {
            return Err(Error::Domain(format!(
                "expected {} paths, got {}",
                sets.a.len(),
                paths.len()
            )));
        }
        let mut permutation = Vec::with_capacity(paths.len());
        for (r, p) in paths.iter().enumerate() {
            if p.start() != sets.a[r] {
                return Err(Error::Domain(format!("path {r} starts at {}, not {}", p.start(), sets.a[r])));
            }
            let q = sets
                .b
                .iter()
                .position(|&b| b == p.end())
                .ok_or_else(|| Error::Domain(format!("path {r} ends at {}, not a column vertex", p.end())))?;
            if permutation.contains(&q) {
                return Err(Error::Domain(format!("column vertex {} is used twice", sets.b[q])));
            }
            permutation.push(q);
        }
        let sign = permutation_sign(&permutation);
        Ok(PathSystem {
            m,
            i,
            paths,
            permutation,
            sign,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.i
    }

    pub fn paths(&self) -> &[LatticePath] {
        &self.paths
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_vertex_disjoint(&self) -> bool {
        vertices_disjoint(&self.paths)
    }

    /// The system with every path replaced by its flip.
    pub fn flipped(&self) -> PathSystem {
        let paths = self
            .paths
            .iter()
            .map(|p| flip(p, self.m).expect("column vertices lie on the shifted diagonal"))
            .collect();
        PathSystem {
            paths,
            ..self.clone()
        }
    }

    pub fn is_doubly_vertex_disjoint(&self) -> bool {
        self.is_vertex_disjoint() && self.flipped().is_vertex_disjoint()
    }
}

// Vertices used by the enumerated systems fit in x <= 2m-2, y <= m-1.
const MAX_ENUMERATION_M: usize = 8;

fn cell(p: LatticePoint, m: usize) -> u32 {
    (p.x as u32) * m as u32 + p.y as u32
}

fn occupancy(path: &LatticePath, m: usize) -> u128 {
    path.vertices().into_iter().fold(0u128, |acc, v| acc | 1u128 << cell(v, m))
}

struct Entry {
    path: LatticePath,
    mask: u128,
    flip_mask: u128,
}

struct SystemTable {
    m: usize,
    i: usize,
    // entries[r][q]: all paths A_r -> B_q
    entries: Vec<Vec<Vec<Entry>>>,
}

impl SystemTable {
    fn build(m: usize, i: usize) -> Result<Self> {
        let VertexSets { a, b } = vertex_sets(m, i)?;
        if m > MAX_ENUMERATION_M {
            return Err(Error::TooLarge(format!(
                "system enumeration supports m <= {MAX_ENUMERATION_M}, got {m}"
            )));
        }
        let mut entries = Vec::with_capacity(a.len());
        for &start in &a {
            let mut row = Vec::with_capacity(b.len());
            for &end in &b {
                let cell_paths = enumerate_paths(start, end)?
                    .into_iter()
                    .map(|path| {
                        let flipped = flip(&path, m).expect("column vertices lie on the shifted diagonal");
                        Entry {
                            mask: occupancy(&path, m),
                            flip_mask: occupancy(&flipped, m),
                            path,
                        }
                    })
                    .collect();
                row.push(cell_paths);
            }
            entries.push(row);
        }
        Ok(SystemTable { m, i, entries })
    }

    fn h(&self) -> usize {
        self.entries.len()
    }

    /// Depth-first over row vertices; `visit` receives the permutation and
    /// the chosen path index per row.
    fn search<F>(&self, filter: SystemFilter, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[usize]) -> ControlFlow<()>,
    {
        let h = self.h();
        let mut perm = Vec::with_capacity(h);
        let mut chosen = Vec::with_capacity(h);
        self.descend(filter, 0, 0, 0, &mut perm, &mut chosen, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F>(
        &self,
        filter: SystemFilter,
        used: u64,
        mask: u128,
        flip_mask: u128,
        perm: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &[usize]) -> ControlFlow<()>,
    {
        let r = perm.len();
        if r == self.h() {
            return visit(perm, chosen);
        }
        for q in 0..self.h() {
            if used & (1 << q) != 0 {
                continue;
            }
            for (k, e) in self.entries[r][q].iter().enumerate() {
                let keep = match filter {
                    SystemFilter::All => true,
                    SystemFilter::VertexDisjoint => mask & e.mask == 0,
                    SystemFilter::DoublyVertexDisjoint => mask & e.mask == 0 && flip_mask & e.flip_mask == 0,
                };
                if !keep {
                    continue;
                }
                perm.push(q);
                chosen.push(k);
                let flow = self.descend(
                    filter,
                    used | 1 << q,
                    mask | e.mask,
                    flip_mask | e.flip_mask,
                    perm,
                    chosen,
                    visit,
                );
                perm.pop();
                chosen.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    fn materialize(&self, perm: &[usize], chosen: &[usize]) -> PathSystem {
        let paths = perm
            .iter()
            .zip(chosen)
            .enumerate()
            .map(|(r, (&q, &k))| self.entries[r][q][k].path.clone())
            .collect();
        PathSystem {
            m: self.m,
            i: self.i,
            paths,
            permutation: perm.to_vec(),
            sign: permutation_sign(perm),
        }
    }

    fn is_doubly(&self, perm: &[usize], chosen: &[usize]) -> bool {
        let mut acc = 0u128;
        for (r, (&q, &k)) in perm.iter().zip(chosen).enumerate() {
            let f = self.entries[r][q][k].flip_mask;
            if acc & f != 0 {
                return false;
            }
            acc |= f;
        }
        true
    }
}

/// Streams systems in a fixed order (rows in order, columns ascending, paths
/// lexicographic) until `visit` breaks.
pub fn visit_systems<F>(m: usize, i: usize, filter: SystemFilter, mut visit: F) -> Result<()>
where
    F: FnMut(&PathSystem) -> ControlFlow<()>,
{
    let table = SystemTable::build(m, i)?;
    let _ = table.search(filter, &mut |perm, chosen| visit(&table.materialize(perm, chosen)));
    Ok(())
}

pub fn enumerate_systems(m: usize, i: usize, filter: SystemFilter) -> Result<Vec<PathSystem>> {
    let mut out = Vec::new();
    visit_systems(m, i, filter, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Number of systems passing `filter` and the sum of their signs.
pub fn count_systems(m: usize, i: usize, filter: SystemFilter) -> Result<(u64, i64)> {
    let table = SystemTable::build(m, i)?;
    let (mut count, mut signed) = (0u64, 0i64);
    let _ = table.search(filter, &mut |perm, _| {
        count += 1;
        signed += permutation_sign(perm) as i64;
        ControlFlow::Continue(())
    });
    Ok((count, signed))
}

/// Signed count of vertex-disjoint systems (all path weights are 1).
pub fn lgv_signed_sum(m: usize, i: usize) -> Result<BigInt> {
    count_systems(m, i, SystemFilter::VertexDisjoint).map(|(_, s)| BigInt::from(s))
}

fn first_shifted_touch(vertices: &[LatticePoint], after: usize, m: usize) -> usize {
    (after + 1..vertices.len())
        .find(|&k| vertices[k].shifted_offset(m) == 0)
        .expect("paths end on the shifted diagonal")
}

/// Sign-reversing involution on vertex-disjoint systems whose flip is not
/// vertex disjoint: swaps the flipped tails at the northern-most, then
/// eastern-most, crossing of the flipped system.
pub fn involution_phi(system: &PathSystem) -> Result<PathSystem> {
    let m = system.m;
    if !system.is_vertex_disjoint() {
        return Err(Error::Domain("system is not vertex disjoint".into()));
    }
    let flipped = system.flipped();
    let mut owners: HashMap<LatticePoint, Vec<usize>> = HashMap::new();
    for (t, p) in flipped.paths.iter().enumerate() {
        for v in p.vertices() {
            owners.entry(v).or_default().push(t);
        }
    }
    let (c, sharing) = owners
        .into_iter()
        .filter(|(_, ts)| ts.len() > 1)
        .max_by_key(|(v, _)| (v.y, v.x))
        .ok_or_else(|| Error::Domain("system is doubly vertex disjoint".into()))?;
    if sharing.len() != 2 || c.shifted_offset(m) == 0 {
        return Err(Error::Domain(format!("crossing at {c} is not a simple crossing off the shifted diagonal")));
    }

    // P_r reaches c through a reflected segment, P_s through an unreflected one
    let c_reflected = c.reflect(m);
    let originals: Vec<Vec<LatticePoint>> = system.paths.iter().map(LatticePath::vertices).collect();
    let (r, s) = if originals[sharing[0]].contains(&c_reflected) {
        (sharing[0], sharing[1])
    } else {
        (sharing[1], sharing[0])
    };
    let vr = &originals[r];
    let ws = &originals[s];
    let d = vr.iter().position(|&v| v == c_reflected).expect("reflected crossing lies on P_r");
    let e = ws.iter().position(|&v| v == c).expect("crossing lies on P_s");
    let j = first_shifted_touch(vr, d, m);
    let k = first_shifted_touch(ws, e, m);

    let mut new_r: Vec<LatticePoint> = vr[..=d].to_vec();
    new_r.extend(ws[e + 1..=k].iter().map(|v| v.reflect(m)));
    new_r.extend_from_slice(&ws[k + 1..]);

    let mut new_s: Vec<LatticePoint> = ws[..=e].to_vec();
    new_s.extend(vr[d + 1..=j].iter().map(|v| v.reflect(m)));
    new_s.extend_from_slice(&vr[j + 1..]);

    let mut paths = system.paths.clone();
    paths[r] = LatticePath::from_vertices(&new_r)?;
    paths[s] = LatticePath::from_vertices(&new_s)?;
    PathSystem::new(m, system.i, paths)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub m: usize,
    pub i: usize,
    /// Vertex-disjoint systems whose flip is not vertex disjoint.
    pub domain_size: u64,
    pub closed: bool,
    pub involutive: bool,
    pub sign_reversing: bool,
    pub fixed_points: u64,
    pub signed_sum: i64,
}

impl InvolutionReport {
    pub fn holds(&self) -> bool {
        self.closed && self.involutive && self.sign_reversing && self.fixed_points == 0 && self.signed_sum == 0
    }
}

/// Applies the involution to every non-doubly vertex-disjoint system.
pub fn check_involution(m: usize, i: usize) -> Result<InvolutionReport> {
    let table = SystemTable::build(m, i)?;
    let mut report = InvolutionReport {
        m,
        i,
        domain_size: 0,
        closed: true,
        involutive: true,
        sign_reversing: true,
        fixed_points: 0,
        signed_sum: 0,
    };
    let mut failure = None;
    let _ = table.search(SystemFilter::VertexDisjoint, &mut |perm, chosen| {
        if table.is_doubly(perm, chosen) {
            return ControlFlow::Continue(());
        }
        let s = table.materialize(perm, chosen);
        report.domain_size += 1;
        report.signed_sum += s.sign as i64;
        let image = match involution_phi(&s) {
            Ok(t) => t,
            Err(err) => {
                failure = Some(err);
                return ControlFlow::Break(());
            }
        };
        if image == s {
            report.fixed_points += 1;
        }
        if image.sign != -s.sign {
            report.sign_reversing = false;
        }
        if !image.is_vertex_disjoint() || image.is_doubly_vertex_disjoint() {
            report.closed = false;
            return ControlFlow::Continue(());
        }
        match involution_phi(&image) {
            Ok(back) if back == s => {}
            _ => report.involutive = false,
        }
        ControlFlow::Continue(())
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DvdMode {
    Enumerate,
    DetOnly,
}

/// Determinant of the path matrix against the signed count of doubly
/// vertex-disjoint systems, plus the `2h <= m` nonvanishing criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DvdVerdict {
    pub m: usize,
    pub i: usize,
    pub h: usize,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub det: BigInt,
    /// `(-1)^floor(h/2)`, the sign of the order-reversing permutation.
    pub predicted_sign: i8,
    /// `det == 0` or `sign(det) == predicted_sign`.
    pub sign_consistent: bool,
    pub count: Option<u64>,
    pub equality: Option<bool>,
    /// Every doubly vertex-disjoint system uses the order reversal.
    pub reversal_only: Option<bool>,
    pub nonvanishing: bool,
    pub criterion_predicts_nonvanishing: bool,
    pub criterion_agrees: bool,
}

impl DvdVerdict {
    /// Equalities that must hold; the `2h <= m` comparison is reported only.
    pub fn holds(&self) -> bool {
        self.sign_consistent && self.equality.unwrap_or(true) && self.reversal_only.unwrap_or(true)
    }
}

pub fn check_dvd_theorem(m: usize, i: usize, mode: DvdMode) -> Result<DvdVerdict> {
    let det = path_matrix(m, i)?.det()?;
    let det = det.to_integer();
    let h = vertex_sets(m, i)?.a.len();
    let predicted_sign = parity_sign(half_floor(h as i64));
    let det_sign = if det.is_zero() { 0 } else if det.is_positive() { 1 } else { -1 };
    let (count, equality, reversal_only) = match mode {
        DvdMode::DetOnly => (None, None, None),
        DvdMode::Enumerate => {
            let table = SystemTable::build(m, i)?;
            let mut count = 0u64;
            let mut reversal = true;
            let _ = table.search(SystemFilter::DoublyVertexDisjoint, &mut |perm, _| {
                count += 1;
                reversal &= perm.iter().enumerate().all(|(r, &q)| q == h - 1 - r);
                ControlFlow::Continue(())
            });
            let expected = BigInt::from(predicted_sign) * BigInt::from(count);
            (Some(count), Some(expected == det), Some(reversal))
        }
    };
    let nonvanishing = !det.is_zero();
    let criterion_predicts_nonvanishing = 2 * h <= m;
    Ok(DvdVerdict {
        m,
        i,
        h,
        predicted_sign,
        sign_consistent: det_sign == 0 || det_sign == predicted_sign,
        det,
        count,
        equality,
        reversal_only,
        nonvanishing,
        criterion_predicts_nonvanishing,
        criterion_agrees: nonvanishing == criterion_predicts_nonvanishing,
    })
}

/// Doubly vertex-disjoint systems grouped by their (upper) flipped system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipClass {
    pub upper: PathSystem,
    pub multiplicity: u64,
    /// Primitive segments across all paths of the upper system.
    pub primitive_segments: usize,
}

pub fn flip_classes(m: usize, i: usize) -> Result<Vec<FlipClass>> {
    let table = SystemTable::build(m, i)?;
    let mut classes: BTreeMap<Vec<LatticePath>, (PathSystem, u64)> = BTreeMap::new();
    let _ = table.search(SystemFilter::DoublyVertexDisjoint, &mut |perm, chosen| {
        let upper = table.materialize(perm, chosen).flipped();
        classes.entry(upper.paths.clone()).or_insert((upper, 0)).1 += 1;
        ControlFlow::Continue(())
    });
    classes
        .into_values()
        .map(|(upper, multiplicity)| {
            let primitive_segments = upper
                .paths
                .iter()
                .map(|p| primitive_segments(p, m).map(|d| d.segments.len()))
                .sum::<Result<usize>>()?;
            Ok(FlipClass {
                upper,
                multiplicity,
                primitive_segments,
            })
        })
        .collect()
}
