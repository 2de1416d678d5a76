//! Covers by axis-aligned boxes: LCL validation, nerves, boundary traces and merges.
//!
//! A cell is a closed box `[lo, hi]` with rational corners; its dimension is the
//! number of axes with positive extent. A domain is Euclidean space or a flat torus
//! obtained by making some axes periodic. On a periodic axis an interval is lifted
//! to every translate by the period before intersecting, so a pairwise intersection
//! can come out in two pieces; such intersections are not cells and are reported.
//!
//! The locally-centered clause is read as the Helly condition: every pairwise
//! intersecting subfamily has a common point.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Q;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxCell {
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
}

impl fmt::Debug for BoxCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                if a == b {
                    format!("{{{a}}}")
                } else {
                    format!("[{a},{b}]")
                }
            })
            .collect();
        write!(f, "{}", axes.join("×"))
    }
}

impl BoxCell {
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Result<BoxCell> {
        if lo.len() != hi.len() {
            return Err(Error::MixedDimensions(lo.len(), hi.len()));
        }
        if let Some(a) = (0..lo.len()).find(|&a| lo[a] > hi[a]) {
            return Err(Error::InvalidCell(format!(
                "axis {a}: lo {} exceeds hi {}",
                lo[a], hi[a]
            )));
        }
        Ok(BoxCell { lo, hi })
    }

    /// Box from integer corners.
    pub fn int(lo: &[i64], hi: &[i64]) -> Result<BoxCell> {
        BoxCell::new(
            lo.iter().map(|&x| Q::int(x)).collect(),
            hi.iter().map(|&x| Q::int(x)).collect(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.lo.len()
    }

    pub fn dimension(&self) -> usize {
        self.lo.iter().zip(&self.hi).filter(|(a, b)| a < b).count()
    }

    /// Product of the positive extents.
    pub fn measure(&self) -> Q {
        self.lo
            .iter()
            .zip(&self.hi)
            .filter(|(a, b)| a < b)
            .fold(Q::int(1), |m, (&a, &b)| m * (b - a))
    }

    fn shifted(&self, axis: usize, by: Q) -> BoxCell {
        let mut c = self.clone();
        c.lo[axis] = c.lo[axis] + by;
        c.hi[axis] = c.hi[axis] + by;
        c
    }

    /// Whether the box `e` lies in the relative boundary of `self`: on some axis
    /// where `self` has positive extent, `e` is pinned to one of its end values.
    fn boundary_contains(&self, e: &BoxCell) -> bool {
        (0..self.ambient()).any(|a| {
            self.lo[a] < self.hi[a]
                && e.lo[a] == e.hi[a]
                && (e.lo[a] == self.lo[a] || e.lo[a] == self.hi[a])
        })
    }
}

/// Euclidean space, or a flat torus with the given period on each periodic axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub periodic: Vec<Option<Q>>,
}

impl Domain {
    pub fn euclidean(ambient: usize) -> Domain {
        Domain {
            periodic: vec![None; ambient],
        }
    }

    pub fn torus(periods: &[i64]) -> Domain {
        Domain {
            periodic: periods.iter().map(|&p| Some(Q::int(p))).collect(),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        self.periodic.iter().all(Option::is_none)
    }

    /// Overlaps of `[a.0, a.1]` with all translates of `[b.0, b.1]`, in `a`'s frame.
    fn overlaps(&self, axis: usize, a: (Q, Q), b: (Q, Q)) -> Vec<(Q, Q)> {
        let piece = |shift: Q| {
            let lo = a.0.max(b.0 + shift);
            let hi = a.1.min(b.1 + shift);
            (lo <= hi).then_some((lo, hi))
        };
        match self.periodic[axis] {
            None => piece(Q::zero()).into_iter().collect(),
            Some(p) => {
                let first = ((a.0 - b.1) / p).ceil();
                let last = ((a.1 - b.0) / p).floor();
                (first..=last)
                    .filter_map(|k| piece(Q::int(k) * p))
                    .collect()
            }
        }
    }

    /// Moves each periodic coordinate so that `lo` lies in `[0, period)`.
    fn normalize(&self, mut c: BoxCell) -> BoxCell {
        for (axis, p) in self.periodic.iter().enumerate() {
            if let Some(p) = *p {
                let k = (c.lo[axis] / p).floor();
                c = c.shifted(axis, -(Q::int(k) * p));
            }
        }
        c
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Meet {
    Empty,
    Cell(BoxCell),
    /// Nonempty but disconnected on the given axis.
    Split(usize),
}

/// Intersection of `a` with `b`, expressed in `a`'s frame.
fn meet(domain: &Domain, a: &BoxCell, b: &BoxCell) -> Meet {
    let mut out = a.clone();
    let mut split = None;
    for axis in 0..a.ambient() {
        let pieces = domain.overlaps(axis, (a.lo[axis], a.hi[axis]), (b.lo[axis], b.hi[axis]));
        match pieces.as_slice() {
            [] => return Meet::Empty,
            [(lo, hi)] => {
                out.lo[axis] = *lo;
                out.hi[axis] = *hi;
            }
            _ => split = split.or(Some(axis)),
        }
    }
    match split {
        Some(axis) => Meet::Split(axis),
        None => Meet::Cell(out),
    }
}

fn check_ambient(domain: &Domain, cells: &[&BoxCell]) -> Result<()> {
    let p = domain.periodic.len();
    for c in cells {
        if c.ambient() != p {
            return Err(Error::MixedDimensions(p, c.ambient()));
        }
    }
    Ok(())
}

/// Common intersection of a nonempty family, `None` when empty. A result in more
/// than one piece is an error.
pub fn intersect_cells(cells: &[&BoxCell], domain: &Domain) -> Result<Option<BoxCell>> {
    let Some((first, rest)) = cells.split_first() else {
        return Err(Error::InvalidCell(
            "cannot intersect an empty family".into(),
        ));
    };
    check_ambient(domain, cells)?;
    let mut cur = (*first).clone();
    for c in rest {
        match meet(domain, &cur, c) {
            Meet::Empty => return Ok(None),
            Meet::Cell(e) => cur = e,
            Meet::Split(axis) => {
                return Err(Error::NonBoxIntersection(format!(
                    "the overlap on periodic axis {axis} has two pieces"
                )))
            }
        }
    }
    Ok(Some(domain.normalize(cur)))
}

/// A finite family of n-dimensional box cells over a domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCover {
    pub ambient: usize,
    pub n: usize,
    pub domain: Domain,
    pub cells: Vec<BoxCell>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    ambient: usize,
    n: usize,
    #[serde(default)]
    domain: Option<serde_json::Value>,
    cells: Vec<BoxCell>,
}

impl BoxCover {
    /// Checks that every cell has the declared ambient and cell dimension and that
    /// periodic extents stay below the period.
    pub fn new(ambient: usize, n: usize, domain: Domain, cells: Vec<BoxCell>) -> Result<BoxCover> {
        if n > ambient {
            return Err(Error::InvalidCell(format!(
                "cell dimension {n} exceeds ambient dimension {ambient}"
            )));
        }
        if domain.periodic.len() != ambient {
            return Err(Error::MixedDimensions(ambient, domain.periodic.len()));
        }
        if let Some(p) = domain.periodic.iter().flatten().find(|p| !p.is_positive()) {
            return Err(Error::InvalidCell(format!("period {p} is not positive")));
        }
        for (i, c) in cells.iter().enumerate() {
            if c.lo.len() != c.hi.len() || c.ambient() != ambient {
                return Err(Error::MixedDimensions(ambient, c.ambient().max(c.hi.len())));
            }
            if let Some(a) = (0..ambient).find(|&a| c.lo[a] > c.hi[a]) {
                return Err(Error::InvalidCell(format!(
                    "cell {i}: axis {a} has lo > hi"
                )));
            }
            if c.dimension() != n {
                return Err(Error::InvalidCell(format!(
                    "cell {i} has dimension {}, expected {n}",
                    c.dimension()
                )));
            }
            for (a, p) in domain.periodic.iter().enumerate() {
                if let Some(p) = p {
                    if c.hi[a] - c.lo[a] >= *p {
                        return Err(Error::InvalidCell(format!(
                            "cell {i}: extent on periodic axis {a} is not below the period {p}"
                        )));
                    }
                }
            }
        }
        Ok(BoxCover {
            ambient,
            n,
            domain,
            cells,
        })
    }

    /// Parses the cover JSON format. Domains other than flat periodic ones are refused.
    pub fn from_json(text: &str) -> Result<BoxCover> {
        let raw: CoverJson = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        let domain = match raw.domain {
            None | Some(serde_json::Value::Null) => Domain::euclidean(raw.ambient),
            Some(serde_json::Value::Object(map)) => {
                if let Some(k) = map.keys().find(|k| k.as_str() != "periodic") {
                    return Err(Error::parse(
                        format!("domain.{k}"),
                        "only flat periodic identifications are supported; the Klein bottle, Moebius band \
                         and projective plane are available as catalog entries (klein16, moebius12, rp11)",
                    ));
                }
                let periodic = map
                    .get("periodic")
                    .cloned()
                    .unwrap_or(serde_json::Value::Null);
                let periodic: Vec<Option<Q>> = if periodic.is_null() {
                    vec![None; raw.ambient]
                } else {
                    serde_json::from_value(periodic)
                        .map_err(|e| Error::parse("domain.periodic", e.to_string()))?
                };
                Domain { periodic }
            }
            Some(_) => return Err(Error::parse("domain", "expected an object")),
        };
        BoxCover::new(raw.ambient, raw.n, domain, raw.cells).map_err(|e| match e {
            Error::InvalidCell(m) | Error::NonBoxIntersection(m) => Error::parse("cells", m),
            Error::MixedDimensions(a, b) => {
                Error::parse("cells", format!("ambient dimension {a} vs {b}"))
            }
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cover serializes")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn meets(&self, i: usize, j: usize) -> bool {
        meet(&self.domain, &self.cells[i], &self.cells[j]) != Meet::Empty
    }

    #[allow(clippy::needless_range_loop)]
    fn meet_matrix(&self) -> Vec<Vec<bool>> {
        let m = self.cells.len();
        let mut out = vec![vec![false; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let b = self.meets(i, j);
                out[i][j] = b;
                out[j][i] = b;
            }
        }
        out
    }
}

impl<'de> Deserialize<'de> for BoxCover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        BoxCover::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Clause {
    #[serde(rename = "LC")]
    Lc,
    #[serde(rename = "LL-dimension")]
    LlDimension,
    #[serde(rename = "LL-boundary")]
    LlBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub cells: Vec<usize>,
    pub clause: Clause,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LclReport {
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

impl LclReport {
    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

/// Checks the locally-centered and locally-lump clauses.
///
/// Subfamilies are the cliques of the pairwise-intersection graph, up to size
/// `n + 2`: a nonempty intersection of `n + 2` cells would have to be a cell of
/// dimension −1, and any larger pairwise-intersecting family contains such a subfamily.
pub fn validate_lcl(w: &BoxCover) -> LclReport {
    let meets = w.meet_matrix();
    let mut violations = Vec::new();
    let mut family = Vec::new();
    for i in 0..w.cells.len() {
        family.push(i);
        extend(w, &meets, &mut family, w.cells[i].clone(), &mut violations);
        family.pop();
    }
    LclReport {
        verdict: violations.is_empty(),
        violations,
    }
}

fn extend(
    w: &BoxCover,
    meets: &[Vec<bool>],
    family: &mut Vec<usize>,
    cur: BoxCell,
    out: &mut Vec<Violation>,
) {
    let last = *family.last().expect("family is nonempty");
    for j in last + 1..w.cells.len() {
        if !family.iter().all(|&i| meets[i][j]) {
            continue;
        }
        family.push(j);
        let k = family.len();
        match meet(&w.domain, &cur, &w.cells[j]) {
            Meet::Empty => out.push(Violation {
                cells: family.clone(),
                clause: Clause::Lc,
                detail: "cells intersect pairwise but have no common point".into(),
            }),
            Meet::Split(axis) => out.push(Violation {
                cells: family.clone(),
                clause: Clause::LlDimension,
                detail: format!("intersection falls apart on periodic axis {axis}"),
            }),
            Meet::Cell(e) => {
                let expected = w.n as i64 + 1 - k as i64;
                if e.dimension() as i64 != expected {
                    out.push(Violation {
                        cells: family.clone(),
                        clause: Clause::LlDimension,
                        detail: format!(
                            "{k}-fold intersection {:?} has dimension {}, expected {expected}",
                            w.domain.normalize(e.clone()),
                            e.dimension()
                        ),
                    });
                }
                for &i in family.iter() {
                    let within = match meet(&w.domain, &w.cells[i], &e) {
                        Meet::Cell(local) => w.cells[i].boundary_contains(&local),
                        _ => false,
                    };
                    if !within {
                        out.push(Violation {
                            cells: family.clone(),
                            clause: Clause::LlBoundary,
                            detail: format!(
                                "intersection {:?} is not contained in the boundary of cell {i}",
                                w.domain.normalize(e.clone())
                            ),
                        });
                    }
                }
                if k < w.n + 2 {
                    extend(w, meets, family, e, out);
                }
            }
        }
        family.pop();
    }
}

/// One vertex `d<i>` per cell, an edge whenever two cells intersect.
pub fn nerve(w: &BoxCover) -> Graph {
    let meets = &w.meet_matrix();
    let m = w.cells.len();
    let labels: Vec<String> = (0..m).map(|i| format!("d{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| {
            (i + 1..m)
                .filter(move |&j| meets[i][j])
                .map(move |j| (i, j))
        })
        .collect();
    Graph::from_index_edges(labels, &edges)
}

/// The collection `C_j = D_i ∩ D_j` over the neighbours `j` of cell `i`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceCover {
    pub cell: usize,
    pub neighbours: Vec<usize>,
    pub cover: BoxCover,
    /// Whether `C_j ↦ D_j` is an isomorphism between the nerve of the trace cover
    /// and the rim of cell `i` in the nerve of the whole cover.
    pub isomorphic: bool,
}

pub fn boundary_trace_cover(w: &BoxCover, i: usize) -> Result<TraceCover> {
    if i >= w.cells.len() {
        return Err(Error::InvalidCell(format!("no cell with index {i}")));
    }
    let neighbours: Vec<usize> = (0..w.cells.len())
        .filter(|&j| j != i && w.meets(i, j))
        .collect();
    if neighbours.is_empty() {
        return Err(Error::IsolatedCell(i));
    }
    let mut traces = Vec::with_capacity(neighbours.len());
    for &j in &neighbours {
        match meet(&w.domain, &w.cells[i], &w.cells[j]) {
            Meet::Cell(c) => traces.push(w.domain.normalize(c)),
            _ => {
                return Err(Error::NonBoxIntersection(format!(
                    "cells {i} and {j} meet in more than one piece"
                )))
            }
        }
    }
    let dims: HashSet<usize> = traces.iter().map(BoxCell::dimension).collect();
    let n = match (dims.len(), dims.iter().next()) {
        (1, Some(&d)) => d,
        _ => {
            return Err(Error::InvalidCell(format!(
                "traces on cell {i} have mixed dimensions {dims:?}"
            )))
        }
    };
    let cover = BoxCover {
        ambient: w.ambient,
        n,
        domain: w.domain.clone(),
        cells: traces,
    };
    let isomorphic = (0..neighbours.len()).all(|a| {
        (a + 1..neighbours.len())
            .all(|b| cover.meets(a, b) == w.meets(neighbours[a], neighbours[b]))
    });
    Ok(TraceCover {
        cell: i,
        neighbours,
        cover,
        isomorphic,
    })
}

/// Result of a successful merge together with the re-validation report.
#[derive(Clone, Debug, Serialize)]
pub struct Merged {
    pub cover: BoxCover,
    pub report: LclReport,
}

/// Replaces the cells in `subset` by their union, which must be a single box; the
/// merged cell takes the place of the smallest index.
pub fn merge_cells(w: &BoxCover, subset: &[usize]) -> Result<Merged> {
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&i| i >= w.cells.len()) {
        return Err(Error::InvalidCell(format!("no cell with index {bad}")));
    }
    let reject = |detail: String| Error::MergeRejected {
        clause: "box".into(),
        detail,
    };
    let Some(&first) = idx.first() else {
        return Err(reject("empty subset".into()));
    };
    // Lift every member next to the running bounding box on periodic axes.
    let mut lifted = vec![w.cells[first].clone()];
    let mut bbox = w.cells[first].clone();
    for &i in &idx[1..] {
        let mut c = w.cells[i].clone();
        for axis in 0..w.ambient {
            if let Some(p) = w.domain.periodic[axis] {
                let k = ((bbox.lo[axis] - c.lo[axis]) / p + Q::new(1, 2)).floor();
                c = c.shifted(axis, Q::int(k) * p);
            }
            bbox.lo[axis] = bbox.lo[axis].min(c.lo[axis]);
            bbox.hi[axis] = bbox.hi[axis].max(c.hi[axis]);
        }
        lifted.push(c);
    }
    if bbox.dimension() != w.n {
        return Err(reject(format!(
            "bounding box {bbox:?} is not an {}-cell",
            w.n
        )));
    }
    let total = lifted.iter().fold(Q::zero(), |s, c| s + c.measure());
    let overlapping = (0..lifted.len()).any(|a| {
        (a + 1..lifted.len()).any(|b| {
            match meet(&Domain::euclidean(w.ambient), &lifted[a], &lifted[b]) {
                Meet::Cell(e) => e.dimension() == w.n,
                _ => false,
            }
        })
    });
    if total != bbox.measure() || overlapping {
        return Err(reject(format!("union of cells {idx:?} is not a box")));
    }
    let mut cells = Vec::with_capacity(w.cells.len() + 1 - idx.len());
    for (i, c) in w.cells.iter().enumerate() {
        if i == first {
            cells.push(w.domain.normalize(bbox.clone()));
        } else if idx.binary_search(&i).is_err() {
            cells.push(c.clone());
        }
    }
    let cover = BoxCover::new(w.ambient, w.n, w.domain.clone(), cells).map_err(|e| {
        Error::MergeRejected {
            clause: "cover".into(),
            detail: e.to_string(),
        }
    })?;
    let report = validate_lcl(&cover);
    if let Some(v) = report.violations.first() {
        let clause = serde_json::to_value(v.clause).expect("clause serializes");
        return Err(Error::MergeRejected {
            clause: clause.as_str().unwrap_or_default().to_owned(),
            detail: format!("cells {:?}: {}", v.cells, v.detail),
        });
    }
    Ok(Merged { cover, report })
}

/// `k` unit segments `[i, i+1]` on a circle of length `k`.
pub fn circle_segments(k: usize) -> BoxCover {
    let cells = (0..k as i64)
        .map(|i| BoxCell::int(&[i], &[i + 1]).unwrap())
        .collect();
    BoxCover::new(1, 1, Domain::torus(&[k as i64]), cells).expect("valid segment cover")
}

/// The six faces of the unit cube, covering its boundary sphere.
pub fn cube_faces() -> BoxCover {
    let mut cells = Vec::new();
    for axis in 0..3 {
        for side in [0, 1] {
            let mut lo = [0i64; 3];
            let mut hi = [1i64; 3];
            lo[axis] = side;
            hi[axis] = side;
            cells.push(BoxCell::int(&lo, &hi).unwrap());
        }
    }
    BoxCover::new(3, 2, Domain::euclidean(3), cells).expect("valid face cover")
}

/// Unit bricks on the flat `cols × rows` torus, each row shifted by one half
/// against the row below. Brick `(i, r)` is `[i + r/2, i + 1 + r/2] × [r, r + 1]`.
pub fn brick_wall_torus(cols: usize, rows: usize) -> BoxCover {
    let mut cells = Vec::with_capacity(cols * rows);
    for r in 0..rows as i64 {
        for i in 0..cols as i64 {
            let x = Q::int(i) + Q::new(r, 2);
            cells.push(
                BoxCell::new(vec![x, Q::int(r)], vec![x + Q::int(1), Q::int(r + 1)]).unwrap(),
            );
        }
    }
    BoxCover::new(2, 2, Domain::torus(&[cols as i64, rows as i64]), cells)
        .expect("valid brick cover")
}

/// Aligned unit squares on the flat `k × k` torus.
pub fn square_grid_torus(k: usize) -> BoxCover {
    let mut cells = Vec::with_capacity(k * k);
    for y in 0..k as i64 {
        for x in 0..k as i64 {
            cells.push(BoxCell::int(&[x, y], &[x + 1, y + 1]).unwrap());
        }
    }
    BoxCover::new(2, 2, Domain::torus(&[k as i64, k as i64]), cells).expect("valid grid cover")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn seg(a: i64, b: i64) -> BoxCell {
        BoxCell::int(&[a], &[b]).unwrap()
    }

    #[test]
    fn intersections() {
        let e = Domain::euclidean(2);
        let a = BoxCell::int(&[0, 0], &[1, 1]).unwrap();
        let b = BoxCell::int(&[1, 0], &[2, 1]).unwrap();
        let i = intersect_cells(&[&a, &b], &e).unwrap().unwrap();
        assert_eq!(i, BoxCell::int(&[1, 0], &[1, 1]).unwrap());
        assert_eq!(i.dimension(), 1);
        let line = Domain::euclidean(1);
        assert_eq!(
            intersect_cells(&[&seg(0, 1), &seg(2, 3)], &line).unwrap(),
            None
        );
        let circle = Domain::torus(&[4]);
        let p = intersect_cells(&[&seg(3, 4), &seg(0, 1)], &circle)
            .unwrap()
            .unwrap();
        assert_eq!(p, seg(0, 0));
        assert!(matches!(
            intersect_cells(&[&seg(0, 3), &seg(2, 5)], &circle),
            Err(Error::NonBoxIntersection(_))
        ));
        assert_eq!(
            intersect_cells(&[&a, &seg(0, 1)], &e),
            Err(Error::MixedDimensions(2, 1))
        );
    }

    #[test]
    fn segments_on_a_line() {
        let w = BoxCover::new(
            1,
            1,
            Domain::euclidean(1),
            vec![seg(0, 1), seg(1, 2), seg(2, 3)],
        )
        .unwrap();
        assert!(validate_lcl(&w).verdict);
        assert!(nerve(&w).is_isomorphic(&path(3)));
        let t = boundary_trace_cover(&w, 1).unwrap();
        assert_eq!(t.cover.len(), 2);
        assert!(t.isomorphic);
        assert!(nerve(&t.cover).is_isomorphic(&s0()));
    }

    #[test]
    fn overlapping_squares() {
        let a = BoxCell::new(vec![Q::int(0), Q::int(0)], vec![Q::int(1), Q::int(1)]).unwrap();
        let b = BoxCell::new(vec![Q::new(1, 2), Q::int(0)], vec![Q::new(3, 2), Q::int(1)]).unwrap();
        let r = validate_lcl(&BoxCover::new(2, 2, Domain::euclidean(2), vec![a, b]).unwrap());
        assert!(!r.verdict);
        assert!(r.has(Clause::LlDimension) && r.has(Clause::LlBoundary));
    }

    #[test]
    fn torus_covers() {
        let bricks = brick_wall_torus(4, 4);
        let r = validate_lcl(&bricks);
        assert!(r.verdict, "{:?}", r.violations.first());
        let g = nerve(&bricks);
        assert_eq!((g.order(), g.size()), (16, 48));
        let t = boundary_trace_cover(&bricks, 5).unwrap();
        assert!(t.isomorphic);
        assert!(nerve(&t.cover).is_isomorphic(&cycle(6)));

        let grid = validate_lcl(&square_grid_torus(4));
        assert!(grid
            .violations
            .iter()
            .any(|v| v.cells.len() == 4 && v.clause == Clause::LlDimension));
        assert!(nerve(&circle_segments(6)).is_isomorphic(&cycle(6)));
    }

    #[test]
    fn cube() {
        let w = cube_faces();
        assert!(validate_lcl(&w).verdict);
        assert!(nerve(&w).is_isomorphic(&octahedron()));
        let t = boundary_trace_cover(&w, 0).unwrap();
        assert_eq!(t.cover.n, 1);
        assert!(nerve(&t.cover).is_isomorphic(&cycle(4)));
    }

    #[test]
    fn merging() {
        let w = BoxCover::new(
            1,
            1,
            Domain::euclidean(1),
            vec![seg(0, 1), seg(1, 2), seg(2, 3)],
        )
        .unwrap();
        let m = merge_cells(&w, &[0, 1]).unwrap();
        assert_eq!(m.cover.cells[0], seg(0, 2));
        assert_eq!(m.cover.len(), 2);

        let sq = |x, y| BoxCell::int(&[x, y], &[x + 1, y + 1]).unwrap();
        let stacked = BoxCover::new(
            2,
            2,
            Domain::euclidean(2),
            vec![sq(0, 0), sq(0, 1), sq(1, 0)],
        )
        .unwrap();
        // Stacking leaves a T-junction: still a valid cover.
        let m = merge_cells(&stacked, &[0, 1]).unwrap();
        assert_eq!(m.cover.cells[0], BoxCell::int(&[0, 0], &[1, 2]).unwrap());
        assert!(m.report.verdict);

        let corner = BoxCover::new(2, 2, Domain::euclidean(2), vec![sq(0, 0), sq(1, 1)]).unwrap();
        assert!(
            matches!(merge_cells(&corner, &[0, 1]), Err(Error::MergeRejected { clause, .. }) if clause == "box")
        );

        let ring = circle_segments(6);
        let m = merge_cells(&ring, &[5, 0]).unwrap();
        assert_eq!(m.cover.cells[0], ring.domain.normalize(seg(5, 7)));
        assert!(nerve(&m.cover).is_isomorphic(&cycle(5)));
    }

    #[test]
    fn json_format() {
        let text = r#"{"ambient":1,"n":1,"domain":{"periodic":[6]},"cells":[{"lo":[0],"hi":[1]},{"lo":["1/2"],"hi":[1.5]}]}"#;
        let w = BoxCover::from_json(text).unwrap();
        assert_eq!(w.cells[1].lo[0], Q::new(1, 2));
        let back = BoxCover::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        let twisted = r#"{"ambient":2,"n":2,"domain":{"periodic":[4,4],"flip":[1]},"cells":[]}"#;
        assert!(
            matches!(BoxCover::from_json(twisted), Err(Error::Parse { message, .. }) if message.contains("catalog"))
        );
        let wrong_dim = r#"{"ambient":2,"n":2,"cells":[{"lo":[0,0],"hi":[1,0]}]}"#;
        assert!(matches!(
            BoxCover::from_json(wrong_dim),
            Err(Error::Parse { .. })
        ));
    }
}
