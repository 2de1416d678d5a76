//! Recognizers for digital n-surfaces, n-spheres, n-manifolds and n-disks.
//!
//! All recognizers recurse through rims and memoize on canonical keys, so a rim
//! shape that recurs across vertices or levels is decided once.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_key;
use crate::error::{Error, Result};
use crate::graph::{components_adj, induced_adj, is_connected_adj, Graph};
use crate::homotopy::contractible_adj;
use crate::memo::Memo;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Surface,
    Sphere,
    Manifold,
    Disk,
    None,
}

/// Serialized as `{"kind", "dimension", "witness"}`; absent fields are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dimension: Option<usize>,
    /// A vertex whose rim (or whose deletion) breaks the recursion. Present for
    /// every negative verdict except on the empty graph, which has no vertices.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl ClassificationVerdict {
    fn positive(kind: Kind, n: usize) -> Self {
        ClassificationVerdict {
            kind,
            dimension: Some(n),
            witness: None,
        }
    }

    fn failed(g: &Graph, at: Option<usize>) -> Self {
        ClassificationVerdict {
            kind: Kind::None,
            dimension: None,
            witness: at.map(|i| g.label(i).to_owned()),
        }
    }

    pub fn holds(&self) -> bool {
        self.kind != Kind::None
    }
}

/// How much of the sphere definition's contractibility clause to check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SphereCheck {
    /// `G - v` is contractible for every vertex `v`, as the definition requires.
    #[default]
    AllVertices,
    /// Heuristic: only the first vertex in label order is deleted at each level.
    /// Rims are still checked everywhere. Never memoized.
    FirstVertexOnly,
}

/// Dimension `n` for which `g` is a digital n-surface, if any.
pub fn surface_dimension(g: &Graph) -> Option<usize> {
    surface_adj(g.adj(), Memo::global())
}

pub fn is_n_sphere(g: &Graph, n: usize) -> ClassificationVerdict {
    is_n_sphere_with(g, n, SphereCheck::AllVertices)
}

pub fn is_n_sphere_with(g: &Graph, n: usize, check: SphereCheck) -> ClassificationVerdict {
    let order = label_order(g);
    match sphere_failure(g.adj(), n, &order, check, Memo::global()) {
        Ok(()) => ClassificationVerdict::positive(Kind::Sphere, n),
        Err(at) => ClassificationVerdict::failed(g, at),
    }
}

/// Checks that `g` is connected and every rim is an `(n-1)`-sphere. `n = 0` never holds.
pub fn is_n_manifold(g: &Graph, n: usize) -> ClassificationVerdict {
    let order = label_order(g);
    match manifold_failure(g.adj(), n, &order, Memo::global()) {
        Ok(()) => ClassificationVerdict::positive(Kind::Manifold, n),
        Err(at) => ClassificationVerdict::failed(g, at),
    }
}

/// Whether closing `g` with one apex over `boundary` yields an n-sphere.
pub fn is_n_disk<S: AsRef<str>>(g: &Graph, boundary: &[S], n: usize) -> Result<bool> {
    let mut idx = boundary
        .iter()
        .map(|b| {
            g.index_of(b.as_ref())
                .ok_or_else(|| Error::MissingVertex(b.as_ref().to_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    let closed = g.with_vertex(fresh_label(g, "apex"), &idx);
    Ok(sphere_failure(
        closed.adj(),
        n,
        &label_order(&closed),
        SphereCheck::AllVertices,
        Memo::global(),
    )
    .is_ok())
}

/// Disk verdict for the CLI: `Disk` at dimension `n`, or `None` with no witness.
pub fn disk_verdict<S: AsRef<str>>(
    g: &Graph,
    boundary: &[S],
    n: usize,
) -> Result<ClassificationVerdict> {
    Ok(if is_n_disk(g, boundary, n)? {
        ClassificationVerdict::positive(Kind::Disk, n)
    } else {
        ClassificationVerdict::failed(g, None)
    })
}

/// Join of `n + 1` copies of S⁰: parts `{a<i>, b<i>}` for `i` in `0..=n`.
pub fn minimal_sphere(n: usize) -> Graph {
    let labels: Vec<String> = (0..=n)
        .flat_map(|i| [format!("a{i}"), format!("b{i}")])
        .collect();
    let m = labels.len();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if i / 2 != j / 2 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_index_edges(labels, &edges)
}

/// Most specific verdict at the graph's surface dimension: Sphere, then Manifold,
/// then Surface.
pub fn classify(g: &Graph) -> ClassificationVerdict {
    let Some(n) = surface_dimension(g) else {
        return ClassificationVerdict::failed(g, surface_witness(g));
    };
    classify_at(g, n)
}

/// Verdict at a requested dimension.
pub fn classify_at(g: &Graph, n: usize) -> ClassificationVerdict {
    let sphere = is_n_sphere(g, n);
    if sphere.holds() || n == 0 {
        return sphere;
    }
    let manifold = is_n_manifold(g, n);
    if manifold.holds() {
        return manifold;
    }
    if surface_dimension(g) == Some(n) {
        return ClassificationVerdict::positive(Kind::Surface, n);
    }
    manifold
}

fn fresh_label(g: &Graph, base: &str) -> String {
    let mut l = base.to_owned();
    while g.contains(&l) {
        l.push('\'');
    }
    l
}

/// Vertex indices sorted by label; defines "first failing vertex".
fn label_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    order
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn rim_adj(adj: &[FixedBitSet], v: usize) -> Vec<FixedBitSet> {
    let rim: Vec<usize> = adj[v].ones().collect();
    induced_adj(adj, &rim)
}

fn is_s0(adj: &[FixedBitSet]) -> bool {
    adj.len() == 2 && !adj[0].contains(1)
}

/// First vertex outside the component of the first vertex in `order`.
fn disconnection_witness(adj: &[FixedBitSet], order: &[usize]) -> Option<usize> {
    let first = *order.first()?;
    let comps = components_adj(adj);
    let home = comps.iter().find(|c| c.contains(&first))?;
    order.iter().copied().find(|v| !home.contains(v))
}

fn surface_adj(adj: &[FixedBitSet], memo: &Memo) -> Option<usize> {
    if is_s0(adj) {
        return Some(0);
    }
    if adj.len() < 2 || !is_connected_adj(adj) {
        return None;
    }
    let key = canonical_key(adj);
    if let Some(d) = memo.surface(&key) {
        return d;
    }
    let first = surface_adj(&rim_adj(adj, 0), memo);
    let uniform =
        first.is_some() && (1..adj.len()).all(|v| surface_adj(&rim_adj(adj, v), memo) == first);
    let result = if uniform { first.map(|d| d + 1) } else { None };
    memo.set_surface(key, result);
    result
}

fn surface_witness(g: &Graph) -> Option<usize> {
    let adj = g.adj();
    let order = label_order(g);
    if let Some(w) = disconnection_witness(adj, &order) {
        return Some(w);
    }
    let memo = Memo::global();
    let first = *order.first()?;
    let expected = surface_adj(&rim_adj(adj, first), memo);
    if expected.is_none() {
        return Some(first);
    }
    order
        .into_iter()
        .find(|&v| surface_adj(&rim_adj(adj, v), memo) != expected)
        .or(Some(first))
}

/// `Ok` if the graph is an n-sphere, otherwise the index of a failing vertex
/// (`None` only when there is no vertex to blame).
fn sphere_failure(
    adj: &[FixedBitSet],
    n: usize,
    order: &[usize],
    check: SphereCheck,
    memo: &Memo,
) -> std::result::Result<(), Option<usize>> {
    if n == 0 {
        return if is_s0(adj) {
            Ok(())
        } else {
            Err(order.first().copied())
        };
    }
    // An n-sphere has at least 2n + 2 vertices.
    if adj.len() < 2 * n + 2 {
        return Err(order.first().copied());
    }
    if !is_connected_adj(adj) {
        return Err(disconnection_witness(adj, order));
    }
    if check == SphereCheck::AllVertices {
        let key = canonical_key(adj);
        match memo.sphere(&key, n) {
            Some(true) => return Ok(()),
            Some(false) => {}
            None => {
                let ok = sphere_scan(adj, n, &identity(adj.len()), check, memo).is_ok();
                memo.set_sphere(key, n, ok);
                if ok {
                    return Ok(());
                }
            }
        }
    }
    sphere_scan(adj, n, order, check, memo)
}

fn sphere_scan(
    adj: &[FixedBitSet],
    n: usize,
    order: &[usize],
    check: SphereCheck,
    memo: &Memo,
) -> std::result::Result<(), Option<usize>> {
    for &v in order {
        let rim = rim_adj(adj, v);
        let rim_order = identity(rim.len());
        if sphere_failure(&rim, n - 1, &rim_order, check, memo).is_err() {
            return Err(Some(v));
        }
    }
    let deleted: &[usize] = match check {
        SphereCheck::AllVertices => order,
        SphereCheck::FirstVertexOnly => &order[..order.len().min(1)],
    };
    for &v in deleted {
        let keep: Vec<usize> = (0..adj.len()).filter(|&k| k != v).collect();
        if !contractible_adj(&induced_adj(adj, &keep)) {
            return Err(Some(v));
        }
    }
    Ok(())
}

fn manifold_failure(
    adj: &[FixedBitSet],
    n: usize,
    order: &[usize],
    memo: &Memo,
) -> std::result::Result<(), Option<usize>> {
    if n == 0 || adj.is_empty() {
        return Err(order.first().copied());
    }
    if !is_connected_adj(adj) {
        return Err(disconnection_witness(adj, order));
    }
    for &v in order {
        let rim = rim_adj(adj, v);
        if sphere_failure(
            &rim,
            n - 1,
            &identity(rim.len()),
            SphereCheck::AllVertices,
            memo,
        )
        .is_err()
        {
            return Err(Some(v));
        }
    }
    Ok(())
}
