//! Named digital manifolds with their expected invariants.
//!
//! Every entry is validated the first time it is requested: the recognizer for its
//! kind is run and the Euler characteristic and homology are recomputed and compared
//! with the expected record. The report is cached alongside the entry.
//!
//! The tori, the Klein bottle and the Moebius band are quotients of the triangular
//! lattice `Z²` with neighbour offsets `(±1, 0)`, `(0, ±1)`, `(-1, 1)`, `(1, -1)`.
//! The projective plane is a frozen adjacency list found by the `derive_rp11`
//! example (random flag-preserving edge contractions of the barycentric subdivision
//! of the six-vertex projective plane).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::classify::{is_n_disk, is_n_manifold, is_n_sphere, minimal_sphere};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{euler_characteristic, homology};

/// Which recognizer an entry must pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Sphere,
    Manifold,
    /// n-disk with the entry's boundary set.
    Disk,
    /// Surface with boundary: rims are cycles or paths, and the path-rimmed
    /// vertices induce the listed number of boundary cycles.
    BoundedSurface {
        boundary_cycles: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub shape: Shape,
    pub dimension: usize,
    pub vertices: usize,
    pub euler: i64,
    pub betti_q: Vec<usize>,
    pub betti_z2: Vec<usize>,
    /// Torsion invariant factors per dimension; trailing empty dimensions may be omitted.
    pub torsion: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(serialize_with = "graph_doc")]
    pub graph: Graph,
    /// Boundary vertex set, for disks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<String>>,
    pub expected: Expected,
    pub construction: String,
}

fn graph_doc<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::GraphDoc::from(g).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// An entry together with its (cached) validation report.
#[derive(Clone, Debug, Serialize)]
pub struct Validated {
    pub entry: CatalogEntry,
    pub report: ValidationReport,
}

pub const NAMES: [&str; 13] = [
    "sphere_min0",
    "sphere_min1",
    "sphere_min2",
    "sphere_min3",
    "sphere_min4",
    "icosahedron",
    "torus16",
    "torus16_untwisted",
    "klein16",
    "rp11",
    "moebius12",
    "disk1",
    "disk2",
];

/// All entry names, in catalog order.
pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Looks up an entry, validating it on first access. `sphere_min(n)` is accepted as
/// an alias of `sphere_min<n>`.
pub fn get(name: &str) -> Result<Validated> {
    static CACHE: OnceLock<Mutex<HashMap<String, Validated>>> = OnceLock::new();
    let name = canonical_name(name);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&name) {
        return Ok(v.clone());
    }
    let entry = build(&name)?;
    let report = validate(&entry);
    let v = Validated { entry, report };
    cache.lock().unwrap().insert(name, v.clone());
    Ok(v)
}

fn canonical_name(name: &str) -> String {
    let name = name.trim();
    if let Some(n) = name
        .strip_prefix("sphere_min(")
        .and_then(|r| r.strip_suffix(')'))
    {
        return format!("sphere_min{}", n.trim());
    }
    name.to_owned()
}

/// Builds an entry without validating it.
pub fn build(name: &str) -> Result<CatalogEntry> {
    let name = canonical_name(name);
    let entry = |graph: Graph, boundary, expected, construction: &str| CatalogEntry {
        name: name.clone(),
        graph,
        boundary,
        expected,
        construction: construction.to_owned(),
    };
    let surface = |shape,
                   vertices,
                   euler,
                   betti_q: [usize; 3],
                   betti_z2: [usize; 3],
                   torsion: Vec<Vec<u64>>| Expected {
        shape,
        dimension: 2,
        vertices,
        euler,
        betti_q: betti_q.to_vec(),
        betti_z2: betti_z2.to_vec(),
        torsion,
    };
    if let Some(n) = name
        .strip_prefix("sphere_min")
        .and_then(|n| n.parse::<usize>().ok())
    {
        if n > 4 {
            return Err(Error::UnknownEntry(name));
        }
        let mut betti = vec![0; n + 1];
        betti[0] += 1;
        betti[n] += 1;
        let expected = Expected {
            shape: Shape::Sphere,
            dimension: n,
            vertices: 2 * n + 2,
            euler: 1 + if n % 2 == 0 { 1 } else { -1 },
            betti_q: betti.clone(),
            betti_z2: betti,
            torsion: vec![],
        };
        return Ok(entry(
            minimal_sphere(n),
            None,
            expected,
            "join of n + 1 copies of the two-point graph",
        ));
    }
    Ok(match name.as_str() {
        "icosahedron" => entry(
            icosahedron(),
            None,
            surface(Shape::Sphere, 12, 2, [1, 0, 1], [1, 0, 1], vec![]),
            "apex, a 5-cycle, a second 5-cycle joined as an antiprism, and an antipodal apex",
        ),
        "torus16" => entry(
            torus16(),
            None,
            surface(Shape::Manifold, 16, 0, [1, 2, 1], [1, 2, 1], vec![]),
            "triangular lattice on Z4 x Z4 with the rows glued after a shift by two: (i, r + 4) ~ (i + 2, r); \
             this is the nerve of the unit brick-wall cover of the flat 4 x 4 torus",
        ),
        "torus16_untwisted" => entry(
            torus16_untwisted(),
            None,
            surface(Shape::Manifold, 16, 0, [1, 2, 1], [1, 2, 1], vec![]),
            "triangular lattice on Z4 x Z4 with both coordinates taken mod 4",
        ),
        "klein16" => entry(
            klein16(),
            None,
            surface(Shape::Manifold, 16, 0, [1, 1, 0], [1, 2, 1], vec![vec![], vec![2]]),
            "triangular lattice modulo (i, r) ~ (i + 4, r) and the glide reflection (i, r) ~ (-i - r, r + 4)",
        ),
        "rp11" => entry(
            rp11(),
            None,
            surface(Shape::Manifold, 11, 1, [1, 0, 0], [1, 1, 1], vec![vec![], vec![2]]),
            "frozen output of the derive_rp11 example (seed 7): edge contractions of the barycentric subdivision \
             of the six-vertex projective plane that keep every rim a chordless cycle, down to 11 vertices",
        ),
        "moebius12" => entry(
            moebius12(),
            None,
            surface(Shape::BoundedSurface { boundary_cycles: 1 }, 12, 0, [1, 1, 0], [1, 1, 0], vec![]),
            "three rows of the triangular lattice modulo the glide reflection that swaps the outer rows \
             and advances four units along them",
        ),
        "disk1" => {
            let g = minimal_sphere(1).remove_vertex("a0")?;
            let boundary = vec!["a1".to_owned(), "b1".to_owned()];
            let expected = Expected {
                shape: Shape::Disk,
                dimension: 1,
                vertices: 3,
                euler: 1,
                betti_q: vec![1, 0],
                betti_z2: vec![1, 0],
                torsion: vec![],
            };
            entry(g, Some(boundary), expected, "minimal 1-sphere minus a point; boundary is the point's rim")
        }
        "disk2" => {
            let s = minimal_sphere(2);
            let boundary: Vec<String> = s.rim("a0")?.labels().to_vec();
            let expected = Expected {
                shape: Shape::Disk,
                dimension: 2,
                vertices: 5,
                euler: 1,
                betti_q: vec![1, 0, 0],
                betti_z2: vec![1, 0, 0],
                torsion: vec![],
            };
            entry(
                s.remove_vertex("a0")?,
                Some(boundary),
                expected,
                "minimal 2-sphere minus a point; boundary is the point's rim",
            )
        }
        _ => return Err(Error::UnknownEntry(name)),
    })
}

/// Recomputes everything the entry claims.
pub fn validate(entry: &CatalogEntry) -> ValidationReport {
    let g = &entry.graph;
    let e = &entry.expected;
    let mut checks = Vec::new();
    let mut check = |name: &str, expected: String, actual: String| {
        let ok = expected == actual;
        checks.push(Check {
            name: name.to_owned(),
            expected,
            actual,
            ok,
        });
    };
    check("vertices", e.vertices.to_string(), g.order().to_string());
    let n = e.dimension;
    match e.shape {
        Shape::Sphere => {
            let v = is_n_sphere(g, n);
            check(
                "sphere",
                format!("{n}"),
                verdict_text(v.holds(), v.witness.as_deref(), n),
            );
        }
        Shape::Manifold => {
            let v = is_n_manifold(g, n);
            check(
                "manifold",
                format!("{n}"),
                verdict_text(v.holds(), v.witness.as_deref(), n),
            );
        }
        Shape::Disk => {
            let boundary = entry.boundary.clone().unwrap_or_default();
            let ok = is_n_disk(g, &boundary, n).unwrap_or(false);
            check("disk", "true".into(), ok.to_string());
        }
        Shape::BoundedSurface { boundary_cycles } => {
            let s = bounded_surface(g);
            check(
                "rims are cycles or paths",
                "true".into(),
                s.rims_ok.to_string(),
            );
            check(
                "boundary cycles",
                boundary_cycles.to_string(),
                s.boundary_cycles.to_string(),
            );
        }
    }
    match euler_characteristic(g) {
        Ok(x) => check("euler", e.euler.to_string(), x.to_string()),
        Err(err) => check("euler", e.euler.to_string(), err.to_string()),
    }
    match homology(g) {
        Ok(h) => {
            check(
                "betti_q",
                format!("{:?}", e.betti_q),
                format!("{:?}", h.betti_rational),
            );
            check(
                "betti_z2",
                format!("{:?}", e.betti_z2),
                format!("{:?}", h.betti_mod2),
            );
            check(
                "torsion",
                format!("{:?}", trim(&e.torsion)),
                format!("{:?}", trim(&h.torsion)),
            );
        }
        Err(err) => check("homology", "computed".into(), err.to_string()),
    }
    ValidationReport {
        name: entry.name.clone(),
        passed: checks.iter().all(|c| c.ok),
        checks,
    }
}

fn verdict_text(holds: bool, witness: Option<&str>, n: usize) -> String {
    if holds {
        n.to_string()
    } else {
        format!("fails at {}", witness.unwrap_or("?"))
    }
}

fn trim(t: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut t = t.to_vec();
    while t.last().is_some_and(Vec::is_empty) {
        t.pop();
    }
    t
}

/// Rim shapes of a surface with boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSurfaceReport {
    /// Every rim is a chordless cycle of length at least four or a path on at least two vertices.
    pub rims_ok: bool,
    /// Vertices whose rim is a path.
    pub boundary: Vec<String>,
    /// Number of components of the boundary, counted only when each is a cycle.
    pub boundary_cycles: usize,
}

pub fn bounded_surface(g: &Graph) -> BoundedSurfaceReport {
    let mut rims_ok = g.is_connected();
    let mut boundary = Vec::new();
    for v in 0..g.order() {
        let rim = g.induced_by_indices(&g.rim_indices(v));
        let degrees: Vec<usize> = (0..rim.order()).map(|i| rim.degree(i)).collect();
        let connected = rim.order() > 0 && rim.is_connected();
        let cycle = connected && rim.order() >= 4 && degrees.iter().all(|&d| d == 2);
        let path = connected
            && rim.order() >= 2
            && rim.size() + 1 == rim.order()
            && degrees.iter().all(|&d| d <= 2);
        if path {
            boundary.push(g.label(v).to_owned());
        }
        rims_ok &= cycle || path;
    }
    let b = g
        .induced_subgraph(&boundary)
        .expect("boundary vertices belong to the graph");
    let all_cycles = (0..b.order()).all(|i| b.degree(i) == 2);
    let boundary_cycles = if all_cycles { b.components().len() } else { 0 };
    BoundedSurfaceReport {
        rims_ok,
        boundary,
        boundary_cycles,
    }
}

const OFFSETS: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)];

/// Quotient of the triangular lattice. `norm` maps a lattice point to its
/// representative, or `None` when it lies outside the strip being used.
fn lattice_quotient(
    prefix: &str,
    domain: &[(i64, i64)],
    label: impl Fn((i64, i64)) -> String,
    norm: impl Fn((i64, i64)) -> Option<(i64, i64)>,
) -> Graph {
    let labels: Vec<String> = domain
        .iter()
        .map(|&p| format!("{prefix}{}", label(p)))
        .collect();
    let index: HashMap<(i64, i64), usize> =
        domain.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut edges = Vec::new();
    for (k, &(i, r)) in domain.iter().enumerate() {
        for (di, dr) in OFFSETS {
            if let Some(q) = norm((i + di, r + dr)) {
                let m = index[&q];
                assert_ne!(k, m, "quotient creates a loop");
                edges.push((k, m));
            }
        }
    }
    Graph::from_index_edges(labels, &edges)
}

fn square_domain() -> Vec<(i64, i64)> {
    (0..4).flat_map(|r| (0..4).map(move |i| (i, r))).collect()
}

fn torus16() -> Graph {
    lattice_quotient(
        "t",
        &square_domain(),
        |(i, r)| format!("{i}_{r}"),
        |(mut i, mut r)| {
            while r >= 4 {
                (i, r) = (i + 2, r - 4);
            }
            while r < 0 {
                (i, r) = (i - 2, r + 4);
            }
            Some((i.rem_euclid(4), r))
        },
    )
}

fn torus16_untwisted() -> Graph {
    lattice_quotient(
        "u",
        &square_domain(),
        |(i, r)| format!("{i}_{r}"),
        |(i, r)| Some((i.rem_euclid(4), r.rem_euclid(4))),
    )
}

fn klein16() -> Graph {
    lattice_quotient(
        "k",
        &square_domain(),
        |(i, r)| format!("{i}_{r}"),
        |(mut i, mut r)| {
            while r >= 4 {
                (i, r) = (-i - r + 4, r - 4);
            }
            while r < 0 {
                (i, r) = (-i - r, r + 4);
            }
            Some((i.rem_euclid(4), r))
        },
    )
}

/// Rows 0..3 of the lattice; the glide `(i, r) ↦ (i + r + 3, 2 - r)` shifts the
/// horizontal position `i + r/2` by exactly 4, so representatives have `2i + r` in `0..8`.
fn moebius12() -> Graph {
    let domain: Vec<(i64, i64)> = (0..3)
        .flat_map(|r| {
            (0..8)
                .filter(move |x| (x - r) % 2 == 0)
                .map(move |x| ((x - r) / 2, r))
        })
        .collect();
    lattice_quotient(
        "m",
        &domain,
        |(i, r)| format!("{}_{r}", 2 * i + r),
        |(mut i, mut r)| {
            if !(0..3).contains(&r) {
                return None;
            }
            while 2 * i + r >= 8 {
                (i, r) = (i - (2 - r) - 3, 2 - r);
            }
            while 2 * i + r < 0 {
                (i, r) = (i + r + 3, 2 - r);
            }
            Some((i, r))
        },
    )
}

fn icosahedron() -> Graph {
    let labels: Vec<String> = (0..12).map(|i| format!("i{i}")).collect();
    let mut edges = Vec::new();
    for k in 0..5 {
        let (u, u2) = (1 + k, 1 + (k + 1) % 5);
        let (l, l2) = (6 + k, 6 + (k + 1) % 5);
        edges.extend([(0, u), (u, u2), (l, l2), (11, l), (u, l), (u, l2)]);
    }
    Graph::from_index_edges(labels, &edges)
}

/// Output of `cargo run --release --example derive_rp11` with the default seed 7.
const RP11_EDGES: [(usize, usize); 30] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 9),
    (1, 10),
    (2, 5),
    (2, 6),
    (2, 7),
    (2, 9),
    (3, 4),
    (3, 5),
    (3, 6),
    (3, 8),
    (4, 6),
    (4, 7),
    (4, 10),
    (5, 7),
    (5, 8),
    (5, 10),
    (6, 7),
    (6, 8),
    (6, 9),
    (7, 10),
    (8, 9),
    (8, 10),
    (9, 10),
];

fn rp11() -> Graph {
    Graph::from_index_edges((0..11).map(|i| format!("r{i}")).collect(), &RP11_EDGES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates() {
        for name in NAMES {
            let v = get(name).unwrap();
            let failed: Vec<&Check> = v.report.checks.iter().filter(|c| !c.ok).collect();
            assert!(v.report.passed, "{name}: {failed:?}");
        }
    }

    #[test]
    fn aliases_and_unknowns() {
        assert_eq!(get("sphere_min(2)").unwrap().entry.name, "sphere_min2");
        assert_eq!(
            build("sphere_min9").unwrap_err(),
            Error::UnknownEntry("sphere_min9".into())
        );
        assert!(matches!(get("torus15"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn twisted_and_untwisted_tori_differ() {
        assert!(!torus16().is_isomorphic(&torus16_untwisted()));
    }

    #[test]
    fn moebius_signature() {
        let s = bounded_surface(&moebius12());
        assert!(s.rims_ok);
        assert_eq!(s.boundary.len(), 8);
        assert_eq!(s.boundary_cycles, 1);
    }
}
