//! Exact canonical labeling by colour refinement and individualization.
//!
//! Disconnected graphs are handled per component; within a component the search
//! tree is pruned by twin vertices and by automorphisms discovered at equal leaves.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{components_adj, induced_adj};

/// Canonical form of a graph: vertex count followed by the upper triangle of the
/// adjacency matrix in canonical vertex order. Two graphs have equal keys iff they
/// are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn empty() -> Self {
        CanonicalKey(0u32.to_le_bytes().to_vec())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        u32::from_le_bytes(self.0[..4].try_into().unwrap()) as usize
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

pub(crate) fn canonical_key(adj: &[FixedBitSet]) -> CanonicalKey {
    let order = canonical_order(adj);
    encode_key(adj, &order)
}

/// `order[p]` is the vertex placed at canonical position `p`.
pub(crate) fn canonical_order(adj: &[FixedBitSet]) -> Vec<usize> {
    let comps = components_adj(adj);
    if comps.len() <= 1 {
        return connected_order(adj);
    }
    let mut parts: Vec<(usize, Vec<u64>, Vec<usize>)> = comps
        .into_iter()
        .map(|comp| {
            let sub = induced_adj(adj, &comp);
            let local = connected_order(&sub);
            let code = leaf_code(&sub, &local);
            (
                comp.len(),
                code,
                local.into_iter().map(|i| comp[i]).collect(),
            )
        })
        .collect();
    parts.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    parts.into_iter().flat_map(|p| p.2).collect()
}

fn encode_key(adj: &[FixedBitSet], order: &[usize]) -> CanonicalKey {
    let n = order.len();
    let mut bytes = (n as u32).to_le_bytes().to_vec();
    let mut cur = 0u8;
    let mut nbits = 0;
    for p in 0..n {
        let row = &adj[order[p]];
        for &q in &order[p + 1..] {
            cur = (cur << 1) | row.contains(q) as u8;
            nbits += 1;
            if nbits == 8 {
                bytes.push(cur);
                cur = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        bytes.push(cur << (8 - nbits));
    }
    CanonicalKey(bytes)
}

fn leaf_code(adj: &[FixedBitSet], order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let mut words = vec![0u64; (n * n.saturating_sub(1) / 2).div_ceil(64)];
    let mut bit = 0;
    for p in 0..n {
        let row = &adj[order[p]];
        for &q in &order[p + 1..] {
            if row.contains(q) {
                words[bit / 64] |= 1 << (63 - bit % 64);
            }
            bit += 1;
        }
    }
    words
}

type Partition = Vec<Vec<usize>>;

fn connected_order(adj: &[FixedBitSet]) -> Vec<usize> {
    let n = adj.len();
    if n <= 1 {
        return (0..n).collect();
    }
    let mut search = Search {
        adj,
        best: None,
        automorphisms: Vec::new(),
    };
    let mut root = vec![(0..n).collect::<Vec<_>>()];
    search.refine(&mut root);
    search.descend(root, &mut Vec::new());
    search.best.expect("search visits at least one leaf").1
}

struct Search<'a> {
    adj: &'a [FixedBitSet],
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Splits cells by neighbour counts into every cell until the partition is equitable.
    fn refine(&self, cells: &mut Partition) {
        let n = self.adj.len();
        loop {
            let mut changed = false;
            let mut s = 0;
            while s < cells.len() {
                let mut splitter = FixedBitSet::with_capacity(n);
                for &v in &cells[s] {
                    splitter.insert(v);
                }
                let mut c = 0;
                while c < cells.len() {
                    if cells[c].len() == 1 {
                        c += 1;
                        continue;
                    }
                    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                    for &v in &cells[c] {
                        groups
                            .entry(self.adj[v].intersection_count(&splitter))
                            .or_default()
                            .push(v);
                    }
                    if groups.len() == 1 {
                        c += 1;
                        continue;
                    }
                    let k = groups.len();
                    cells.splice(c..=c, groups.into_values());
                    changed = true;
                    c += k;
                }
                s += 1;
            }
            if !changed {
                break;
            }
        }
    }

    fn descend(&mut self, cells: Partition, prefix: &mut Vec<usize>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(order);
            return;
        };
        let candidates = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &candidates {
            if tried.iter().any(|&w| self.twins(v, w)) || self.same_orbit(prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut next = cells.clone();
            next[target].retain(|&x| x != v);
            next.insert(target, vec![v]);
            self.refine(&mut next);
            prefix.push(v);
            self.descend(next, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let code = leaf_code(self.adj, &order);
        match &self.best {
            Some((best, best_order)) if *best == code => {
                let mut perm = vec![0; order.len()];
                for (p, &v) in best_order.iter().enumerate() {
                    perm[v] = order[p];
                }
                if perm.iter().enumerate().any(|(i, &j)| i != j) {
                    self.automorphisms.push(perm);
                }
            }
            Some((best, _)) if *best < code => {}
            _ => self.best = Some((code, order)),
        }
    }

    fn twins(&self, v: usize, w: usize) -> bool {
        let mut a = self.adj[v].clone();
        let mut b = self.adj[w].clone();
        a.set(w, false);
        b.set(v, false);
        a == b
    }

    /// Whether `v` lies in the orbit of a tried vertex under the known automorphisms
    /// that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], tried: &[usize], v: usize) -> bool {
        if tried.is_empty() || self.automorphisms.is_empty() {
            return false;
        }
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.automorphisms {
            if prefix.iter().any(|&x| g[x] != x) {
                continue;
            }
            for (i, &j) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&w| find(&mut parent, w) == root)
    }
}
