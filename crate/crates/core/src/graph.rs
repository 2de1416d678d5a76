//! Finite simple undirected graphs with opaque string labels.
//!
//! A [`Graph`] is an immutable value: every construction below returns a new graph.
//! Algorithms work on dense vertex indices `0..order()`; labels only matter at the
//! API boundary and for deterministic tie-breaking.

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::canon::{self, CanonicalKey};
use crate::error::{Error, Result};

/// Rows of a symmetric irreflexive adjacency matrix.
pub(crate) type Adj = Vec<FixedBitSet>;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Adj,
}

/// Result of [`Graph::join`]: the joined graph and any labels of the right operand
/// that had to be renamed to keep the vertex sets disjoint.
#[derive(Clone, Debug)]
pub struct Joined {
    pub graph: Graph,
    pub relabeled: Vec<(String, String)>,
}

impl Graph {
    /// Builds a graph from vertex labels and label pairs. Duplicate edges collapse.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = vertices
            .into_iter()
            .map(|s| s.as_ref().to_owned())
            .collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) else {
                return Err(Error::UnknownEndpoint(a.to_owned(), b.to_owned()));
            };
            if i == j {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Ok(Graph { labels, adj })
    }

    pub fn empty() -> Graph {
        Graph {
            labels: Vec::new(),
            adj: Vec::new(),
        }
    }

    /// Graph with the given labels and no edges.
    pub fn edgeless<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Graph> {
        Graph::new(labels, std::iter::empty::<(S, S)>())
    }

    /// Builds a graph from labels and index pairs. Panics on out-of-range indices.
    pub(crate) fn from_index_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Graph {
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(i, j) in edges {
            assert!(i != j, "self-loop at index {i}");
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Graph { labels, adj }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    pub(crate) fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::MissingVertex(label.to_owned()))
    }

    pub(crate) fn adj(&self) -> &Adj {
        &self.adj
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].ones()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones(..)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn adjacent(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.has_edge(self.require(a)?, self.require(b)?))
    }

    /// Index pairs `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, row) in self.adj.iter().enumerate() {
            out.extend(row.ones().filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    pub fn edge_labels(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
            .collect()
    }

    /// Induced subgraph on the given indices, in the given order.
    pub fn induced_by_indices(&self, verts: &[usize]) -> Graph {
        Graph {
            labels: verts.iter().map(|&v| self.labels[v].clone()).collect(),
            adj: induced_adj(&self.adj, verts),
        }
    }

    pub fn induced_subgraph<S: AsRef<str>>(&self, verts: &[S]) -> Result<Graph> {
        let mut idx = Vec::with_capacity(verts.len());
        let mut seen = HashSet::new();
        for v in verts {
            let i = self.require(v.as_ref())?;
            if seen.insert(i) {
                idx.push(i);
            }
        }
        idx.sort_unstable();
        Ok(self.induced_by_indices(&idx))
    }

    /// Neighbour indices of `i`, ascending.
    pub fn rim_indices(&self, i: usize) -> Vec<usize> {
        self.adj[i].ones().collect()
    }

    /// The rim O(v): induced subgraph on the neighbours of `v`.
    pub fn rim(&self, v: &str) -> Result<Graph> {
        let i = self.require(v)?;
        Ok(self.induced_by_indices(&self.rim_indices(i)))
    }

    /// The ball U(v): `v` together with its rim.
    pub fn ball(&self, v: &str) -> Result<Graph> {
        let i = self.require(v)?;
        let mut verts = self.rim_indices(i);
        verts.push(i);
        verts.sort_unstable();
        Ok(self.induced_by_indices(&verts))
    }

    pub fn edge_rim_indices(&self, i: usize, j: usize) -> Vec<usize> {
        self.adj[i].intersection(&self.adj[j]).collect()
    }

    /// The rim O(uv) of an edge: induced subgraph on the common neighbours.
    pub fn edge_rim(&self, u: &str, v: &str) -> Result<Graph> {
        let (i, j) = (self.require(u)?, self.require(v)?);
        if !self.has_edge(i, j) {
            return Err(Error::NotAnEdge(u.to_owned(), v.to_owned()));
        }
        Ok(self.induced_by_indices(&self.edge_rim_indices(i, j)))
    }

    /// Graph without vertex `i`.
    pub fn remove_index(&self, i: usize) -> Graph {
        let keep: Vec<usize> = (0..self.order()).filter(|&k| k != i).collect();
        self.induced_by_indices(&keep)
    }

    pub fn remove_vertex(&self, v: &str) -> Result<Graph> {
        Ok(self.remove_index(self.require(v)?))
    }

    /// Graph without the vertices in `set`.
    pub fn remove_vertices<S: AsRef<str>>(&self, set: &[S]) -> Result<Graph> {
        let mut drop = FixedBitSet::with_capacity(self.order());
        for v in set {
            drop.insert(self.require(v.as_ref())?);
        }
        let keep: Vec<usize> = (0..self.order()).filter(|&k| !drop.contains(k)).collect();
        Ok(self.induced_by_indices(&keep))
    }

    /// Adds a vertex adjacent to exactly the indices in `nbrs`.
    pub(crate) fn with_vertex(&self, label: String, nbrs: &[usize]) -> Graph {
        let n = self.order();
        let mut adj: Adj = self
            .adj
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.grow(n + 1);
                r
            })
            .collect();
        let mut row = FixedBitSet::with_capacity(n + 1);
        for &k in nbrs {
            row.insert(k);
            adj[k].insert(n);
        }
        adj.push(row);
        let mut labels = self.labels.clone();
        labels.push(label);
        Graph { labels, adj }
    }

    pub(crate) fn with_edge_toggled(&self, i: usize, j: usize, present: bool) -> Graph {
        let mut g = self.clone();
        g.adj[i].set(j, present);
        g.adj[j].set(i, present);
        g
    }

    /// Adds a vertex `label` adjacent to the listed vertices.
    pub fn attach_vertex<S: AsRef<str>>(&self, label: &str, nbrs: &[S]) -> Result<Graph> {
        if self.contains(label) {
            return Err(Error::LabelInUse(label.to_owned()));
        }
        let mut idx = nbrs
            .iter()
            .map(|s| self.require(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(self.with_vertex(label.to_owned(), &idx))
    }

    /// Join `self ⊕ other`: disjoint union plus every cross edge.
    ///
    /// Labels of `other` that collide with labels of `self` are primed until unique;
    /// the renames are reported in [`Joined::relabeled`].
    pub fn join(&self, other: &Graph) -> Joined {
        let mut taken: HashSet<String> = self.labels.iter().cloned().collect();
        let mut relabeled = Vec::new();
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut fresh = l.clone();
            if taken.contains(&fresh) {
                while taken.contains(&fresh) || other.labels.contains(&fresh) {
                    fresh.push('\'');
                }
                relabeled.push((l.clone(), fresh.clone()));
            }
            taken.insert(fresh.clone());
            labels.push(fresh);
        }
        let (n, m) = (self.order(), other.order());
        let mut adj = vec![FixedBitSet::with_capacity(n + m); n + m];
        for (row, own) in adj.iter_mut().zip(&self.adj) {
            row.union_with(own);
            row.insert_range(n..n + m);
        }
        for i in 0..m {
            for j in other.adj[i].ones() {
                adj[n + i].insert(n + j);
            }
            adj[n + i].insert_range(0..n);
        }
        Joined {
            graph: Graph { labels, adj },
            relabeled,
        }
    }

    /// Disjoint union; colliding labels of `other` are primed as in [`Graph::join`].
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let joined = self.join(other);
        let (n, m) = (self.order(), other.order());
        let mut g = joined.graph;
        for i in 0..n {
            g.adj[i].remove_range(n..n + m);
        }
        for i in n..n + m {
            g.adj[i].remove_range(0..n);
        }
        g
    }

    /// Relabels vertices; the map must be injective on this graph's labels.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Graph> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        Ok(Graph {
            labels,
            adj: self.adj.clone(),
        })
    }

    pub fn is_connected(&self) -> bool {
        is_connected_adj(&self.adj)
    }

    /// Connected components as ascending index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_adj(&self.adj)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canon::canonical_key(&self.adj)
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.order() == other.order()
            && self.size() == other.size()
            && self.canonical_key() == other.canonical_key()
    }

    /// Index permutation sorting vertices by label.
    pub(crate) fn label_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut rank = vec![0; self.order()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        rank
    }

    /// Same vertex labels and same edges, irrespective of vertex order.
    pub fn same_labeled(&self, other: &Graph) -> bool {
        if self.order() != other.order() || self.size() != other.size() {
            return false;
        }
        let map: Option<Vec<usize>> = self.labels.iter().map(|l| other.index_of(l)).collect();
        let Some(map) = map else { return false };
        self.edges()
            .into_iter()
            .all(|(i, j)| other.has_edge(map[i], map[j]))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.labels)
            .field("edges", &self.edge_labels())
            .finish()
    }
}

pub(crate) fn induced_adj(adj: &[FixedBitSet], verts: &[usize]) -> Adj {
    let m = verts.len();
    let mut out = vec![FixedBitSet::with_capacity(m); m];
    for a in 0..m {
        let row = &adj[verts[a]];
        for b in (a + 1)..m {
            if row.contains(verts[b]) {
                out[a].insert(b);
                out[b].insert(a);
            }
        }
    }
    out
}

pub(crate) fn is_connected_adj(adj: &[FixedBitSet]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let mut seen = FixedBitSet::with_capacity(n);
    let mut stack = vec![0];
    seen.insert(0);
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for w in adj[v].ones() {
            if !seen.put(w) {
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

pub(crate) fn components_adj(adj: &[FixedBitSet]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut out = Vec::new();
    for s in 0..n {
        if seen.put(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in adj[v].ones() {
                if !seen.put(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Index of a vertex adjacent to every other vertex, if one exists.
pub(crate) fn dominating_vertex(adj: &[FixedBitSet]) -> Option<usize> {
    let n = adj.len();
    (0..n).find(|&v| adj[v].count_ones(..) + 1 == n)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn c4() -> Graph {
        Graph::new(
            ["a", "b", "c", "d"],
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap()
    }

    #[test]
    fn build_collapses_duplicates_and_symmetrizes() {
        let g = Graph::new(["a", "b"], [("a", "b"), ("b", "a"), ("a", "b")]).unwrap();
        assert_eq!(g.size(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        let c = c4();
        assert_eq!((c.order(), c.size()), (4, 4));
        assert_eq!(point().order(), 1);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::new(["a", "b"], [("a", "a")]).unwrap_err(),
            Error::SelfLoop("a".into())
        );
        assert!(matches!(
            Graph::new(["a"], [("a", "z")]),
            Err(Error::UnknownEndpoint(..))
        ));
        assert!(matches!(
            Graph::edgeless(["a", "a"]),
            Err(Error::DuplicateVertex(_))
        ));
    }

    #[test]
    fn rims() {
        let oct = octahedron();
        for v in oct.labels().to_vec() {
            let r = oct.rim(&v).unwrap();
            assert!(r.is_isomorphic(&cycle(4)));
            assert!(!r.contains(&v));
        }
        let r = c4().rim("a").unwrap();
        assert_eq!((r.order(), r.size()), (2, 0));
        assert!(point().rim("a").unwrap().is_empty());
        assert!(matches!(c4().rim("z"), Err(Error::MissingVertex(_))));
    }

    #[test]
    fn balls() {
        let b = c4().ball("a").unwrap();
        assert_eq!((b.order(), b.size()), (3, 2));
        assert!(b.adjacent("a", "b").unwrap() && b.adjacent("a", "d").unwrap());
        let k4 = complete(4);
        assert!(k4.ball("k0").unwrap().is_isomorphic(&k4));
        let g = Graph::new(["a", "b", "c"], [("a", "b")]).unwrap();
        assert_eq!(g.ball("c").unwrap().order(), 1);
    }

    #[test]
    fn edge_rims() {
        assert!(c4().edge_rim("a", "b").unwrap().is_empty());
        let oct = octahedron();
        for (u, v) in oct.edge_labels() {
            let r = oct.edge_rim(&u, &v).unwrap();
            assert_eq!((r.order(), r.size()), (2, 0));
        }
        assert_eq!(complete(3).edge_rim("k0", "k1").unwrap().order(), 1);
        assert!(matches!(c4().edge_rim("a", "c"), Err(Error::NotAnEdge(..))));
    }

    #[test]
    fn joins() {
        let j = s0().join(&s0());
        assert!(j.graph.is_isomorphic(&c4()));
        assert_eq!(j.relabeled.len(), 2);
        let cone = point().join(&c4()).graph;
        assert_eq!(cone.degree(0), 4);
        let oct = octahedron();
        assert_eq!((oct.order(), oct.size()), (6, 12));
    }

    #[test]
    fn induced() {
        let p = c4().induced_subgraph(&["a", "b", "c"]).unwrap();
        assert!(p.is_isomorphic(&path(3)));
        assert!(c4().induced_subgraph::<&str>(&[]).unwrap().is_empty());
        let all = c4().induced_subgraph(&["a", "b", "c", "d"]).unwrap();
        assert!(all.same_labeled(&c4()));
        assert!(c4().induced_subgraph(&["a", "q"]).is_err());
    }

    #[test]
    fn keys() {
        let relabeled = Graph::new(
            ["w", "x", "y", "z"],
            [("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")],
        )
        .unwrap();
        assert_eq!(c4().canonical_key(), relabeled.canonical_key());
        assert_ne!(c4().canonical_key(), path(4).canonical_key());
        assert_eq!(Graph::empty().canonical_key(), CanonicalKey::empty());
    }

    #[test]
    fn rim_invariants_hold_on_wheel() {
        let w = wheel(5);
        let ball = w.ball("h").unwrap();
        let rim = w.rim("h").unwrap();
        assert_eq!(ball.order(), rim.order() + 1);
        assert_eq!(ball.size(), rim.size() + rim.order());
        for (u, v) in w.edge_labels() {
            let er = w.edge_rim(&u, &v).unwrap();
            let ru: HashSet<String> = w.rim(&u).unwrap().labels().iter().cloned().collect();
            let rv: HashSet<String> = w.rim(&v).unwrap().labels().iter().cloned().collect();
            let common: HashSet<String> = ru.intersection(&rv).cloned().collect();
            let got: HashSet<String> = er.labels().iter().cloned().collect();
            assert_eq!(got, common);
        }
    }
}
