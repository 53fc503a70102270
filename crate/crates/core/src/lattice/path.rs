use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exact::binomial;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn is_subdiagonal(self) -> bool {
        self.y <= self.x
    }

    /// Signed offset from the shifted diagonal `y = x - (m-1)`; positive
    /// above it, negative below.
    pub fn shifted_offset(self, m: usize) -> i64 {
        self.y - (self.x - (m as i64 - 1))
    }

    /// Reflection across `y = x - (m-1)`: `(x, y) -> (y + m - 1, x - m + 1)`.
    pub fn reflect(self, m: usize) -> Self {
        let k = m as i64 - 1;
        LatticePoint::new(self.y + k, self.x - k)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    // E sorts first so enumeration is lexicographic in "E" < "N"
    E,
    N,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
        }
    }

    fn apply(self, p: LatticePoint) -> LatticePoint {
        match self {
            Step::E => LatticePoint::new(p.x + 1, p.y),
            Step::N => LatticePoint::new(p.x, p.y + 1),
        }
    }
}

/// NE lattice path weakly below the main diagonal `y = x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    start: LatticePoint,
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(start: LatticePoint, steps: Vec<Step>) -> Result<Self> {
        let path = LatticePath { start, steps };
        if let Some(bad) = path.vertices().into_iter().find(|v| !v.is_subdiagonal()) {
            return Err(Error::Domain(format!("path leaves the subdiagonal region at {bad}")));
        }
        Ok(path)
    }

    pub(crate) fn new_unchecked(start: LatticePoint, steps: Vec<Step>) -> Self {
        LatticePath { start, steps }
    }

    /// Parses a start point and a step string, e.g. `(0,0)` and `"EEN"`.
    pub fn parse(start: LatticePoint, steps: &str) -> Result<Self> {
        let steps = steps
            .chars()
            .map(|c| match c {
                'E' | 'e' => Ok(Step::E),
                'N' | 'n' => Ok(Step::N),
                other => Err(Error::Domain(format!("invalid step {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(start, steps)
    }

    /// Rebuilds a path from consecutive unit-step vertices.
    pub fn from_vertices(vertices: &[LatticePoint]) -> Result<Self> {
        let (&start, rest) = vertices
            .split_first()
            .ok_or_else(|| Error::Domain("a path needs at least one vertex".into()))?;
        let mut steps = Vec::with_capacity(rest.len());
        let mut at = start;
        for &v in rest {
            let step = match (v.x - at.x, v.y - at.y) {
                (1, 0) => Step::E,
                (0, 1) => Step::N,
                _ => return Err(Error::Domain(format!("{at} -> {v} is not a unit N/E step"))),
            };
            steps.push(step);
            at = v;
        }
        Self::new(start, steps)
    }

    pub fn start(&self) -> LatticePoint {
        self.start
    }

    pub fn end(&self) -> LatticePoint {
        self.steps.iter().fold(self.start, |p, s| s.apply(p))
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step_string(&self) -> String {
        self.steps.iter().map(|s| s.as_char()).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn vertices(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut p = self.start;
        out.push(p);
        for s in &self.steps {
            p = s.apply(p);
            out.push(p);
        }
        out
    }
}

impl fmt::Display for LatticePath {
    /// `(x,y):STEPS`, e.g. `(0,0):EEN`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.step_string())
    }
}

impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LatticePath", 2)?;
        s.serialize_field("start", &[self.start.x, self.start.y])?;
        s.serialize_field("steps", &self.step_string())?;
        s.end()
    }
}

fn check_endpoints(a: LatticePoint, b: LatticePoint) -> Result<()> {
    if a.x != a.y {
        return Err(Error::Domain(format!("start {a} is not on the diagonal y = x")));
    }
    if !b.is_subdiagonal() {
        return Err(Error::Domain(format!("end {b} lies above the diagonal y = x")));
    }
    Ok(())
}

/// Number of subdiagonal NE paths from `A = (a,a)` to `B = (b,c)`:
/// `(b-c+1)/(b+c-2a+1) * C(b+c-2a+1, c-a)`.
pub fn count_paths(a: LatticePoint, b: LatticePoint) -> Result<BigInt> {
    check_endpoints(a, b)?;
    let (a, bx, c) = (a.x, b.x, b.y);
    if c < a || bx < a {
        return Ok(BigInt::zero());
    }
    let n = bx + c - 2 * a + 1;
    let num = binomial(n, c - a) * (bx - c + 1);
    debug_assert!((&num % n).is_zero());
    Ok(num / n)
}

const MAX_ENUMERATED_LENGTH: i64 = 32;

/// All subdiagonal NE paths from `A` to `B`, in lexicographic step order
/// (`E` before `N`).
pub fn enumerate_paths(a: LatticePoint, b: LatticePoint) -> Result<Vec<LatticePath>> {
    check_endpoints(a, b)?;
    let mut out = Vec::new();
    if b.x < a.x || b.y < a.y {
        return Ok(out);
    }
    let len = (b.x - a.x) + (b.y - a.y);
    if len > MAX_ENUMERATED_LENGTH {
        return Err(Error::TooLarge(format!("path length {len} exceeds {MAX_ENUMERATED_LENGTH}")));
    }
    let mut steps = Vec::with_capacity(len as usize);
    walk(a, b, &mut steps, &mut |s| out.push(LatticePath::new_unchecked(a, s.to_vec())));
    Ok(out)
}

fn walk(at: LatticePoint, to: LatticePoint, steps: &mut Vec<Step>, emit: &mut impl FnMut(&[Step])) {
    if at == to {
        emit(steps);
        return;
    }
    if at.x < to.x {
        steps.push(Step::E);
        walk(Step::E.apply(at), to, steps, emit);
        steps.pop();
    }
    if at.y < to.y && at.y < at.x {
        steps.push(Step::N);
        walk(Step::N.apply(at), to, steps, emit);
        steps.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Upper,
    Lower,
}

/// A stretch of a path between consecutive touches of the shifted diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub path: LatticePath,
    pub kind: SegmentKind,
}

/// Initial segment (up to the first shifted-diagonal touch) followed by
/// the primitive segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathDecomposition {
    pub initial: LatticePath,
    pub segments: Vec<Segment>,
}

impl PathDecomposition {
    pub fn is_upper(&self) -> bool {
        self.segments.iter().all(|s| s.kind == SegmentKind::Upper)
    }

    pub fn lower_count(&self) -> usize {
        self.segments.iter().filter(|s| s.kind == SegmentKind::Lower).count()
    }

    /// Concatenation of all pieces.
    pub fn reassemble(&self) -> LatticePath {
        let mut steps = self.initial.steps.clone();
        for s in &self.segments {
            steps.extend_from_slice(&s.path.steps);
        }
        LatticePath::new_unchecked(self.initial.start, steps)
    }
}

fn touch_indices(vertices: &[LatticePoint], m: usize) -> Result<Vec<usize>> {
    let end = *vertices.last().expect("paths have at least one vertex");
    if end.shifted_offset(m) != 0 {
        return Err(Error::Domain(format!(
            "path ends at {end}, not on the shifted diagonal y = x - {}",
            m as i64 - 1
        )));
    }
    Ok(vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.shifted_offset(m) == 0)
        .map(|(k, _)| k)
        .collect())
}

pub fn primitive_segments(path: &LatticePath, m: usize) -> Result<PathDecomposition> {
    let vertices = path.vertices();
    let touches = touch_indices(&vertices, m)?;
    let sub = |from: usize, to: usize| LatticePath::new_unchecked(vertices[from], path.steps[from..to].to_vec());
    let initial = sub(0, touches[0]);
    let segments = touches
        .windows(2)
        .map(|w| {
            // consecutive touches are at least two steps apart
            let kind = if vertices[w[0] + 1].shifted_offset(m) < 0 {
                SegmentKind::Lower
            } else {
                SegmentKind::Upper
            };
            Segment {
                path: sub(w[0], w[1]),
                kind,
            }
        })
        .collect();
    Ok(PathDecomposition { initial, segments })
}

/// Reflects every lower primitive segment across the shifted diagonal.
pub fn flip(path: &LatticePath, m: usize) -> Result<LatticePath> {
    let decomposition = primitive_segments(path, m)?;
    let mut steps = decomposition.initial.steps.clone();
    for s in &decomposition.segments {
        match s.kind {
            SegmentKind::Upper => steps.extend_from_slice(&s.path.steps),
            // reflection swaps N and E and keeps the traversal order
            SegmentKind::Lower => steps.extend(s.path.steps.iter().map(|st| match st {
                Step::E => Step::N,
                Step::N => Step::E,
            })),
        }
    }
    Ok(LatticePath::new_unchecked(path.start, steps))
}
