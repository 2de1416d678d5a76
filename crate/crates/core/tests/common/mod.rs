//! Generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dmf_core::covers::{validate_lcl, BoxCell, BoxCover, Domain};
use dmf_core::homotopy::{apply_transformation, is_contractible, Step};
use dmf_core::invariants::HomologyProfile;
use dmf_core::Graph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn graph_from_mask(n: usize, mask: &[bool]) -> Graph {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask[k] {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
            k += 1;
        }
    }
    Graph::new(labels, edges).unwrap()
}

/// Graphs with up to `max_n` vertices labelled `v0`, `v1`, ...
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |mask| graph_from_mask(n, &mask))
    })
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mask: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(p)).collect();
    graph_from_mask(n, &mask)
}

/// Homology with trailing empty dimensions removed, so that profiles of graphs
/// with different clique numbers compare equal when the groups agree.
pub fn trimmed(h: &HomologyProfile) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    fn trim<T: PartialEq>(mut v: Vec<T>, zero: impl Fn(&T) -> bool) -> Vec<T> {
        while v.last().is_some_and(&zero) {
            v.pop();
        }
        v
    }
    (
        trim(h.betti_rational.clone(), |&b| b == 0),
        trim(h.betti_mod2.clone(), |&b| b == 0),
        trim(h.torsion.clone(), |t| t.is_empty()),
    )
}

fn fresh(g: &Graph) -> String {
    (0..)
        .map(|k| format!("w{k}"))
        .find(|l| !g.contains(l))
        .unwrap()
}

/// Proposes one random contractible transformation of `g`, or `None` when the
/// randomly chosen candidate is not admissible.
pub fn random_step<R: Rng>(rng: &mut R, g: &Graph) -> Option<(Step, Graph)> {
    let labels = g.labels().to_vec();
    let step = match rng.gen_range(0..4) {
        0 if g.order() > 1 => Step::DeletePoint {
            vertex: labels.choose(rng)?.clone(),
        },
        1 => {
            let k = rng.gen_range(1..=labels.len().min(5));
            let seed = labels.choose(rng)?;
            let idx = g.index_of(seed).unwrap();
            let mut pool: Vec<String> = g.neighbors(idx).map(|j| g.label(j).to_owned()).collect();
            pool.shuffle(rng);
            let mut rim: Vec<String> = std::iter::once(seed.clone()).chain(pool).take(k).collect();
            rim.sort();
            if !is_contractible(&g.induced_subgraph(&rim).unwrap()) {
                return None;
            }
            Step::AttachPoint {
                vertex: fresh(g),
                rim,
            }
        }
        2 => {
            let edges = g.edge_labels();
            Step::DeleteEdge {
                edge: edges.choose(rng)?.clone(),
            }
        }
        _ => {
            let a = labels.choose(rng)?.clone();
            let b = labels.choose(rng)?.clone();
            if a == b || g.adjacent(&a, &b).unwrap() {
                return None;
            }
            Step::AttachEdge { edge: (a, b) }
        }
    };
    apply_transformation(g, &step)
        .ok()
        .map(|applied| (step, applied.graph))
}

/// Random guillotine subdivision of the box `[0, 1000]^dim` into `pieces` cells,
/// each cut at a coordinate not used by any other cut on the same axis.
pub fn guillotine_cover<R: Rng>(rng: &mut R, dim: usize, pieces: usize) -> BoxCover {
    let mut used: Vec<BTreeSet<i64>> = (0..dim).map(|_| [0, 1000].into_iter().collect()).collect();
    let mut cells: Vec<(Vec<i64>, Vec<i64>)> = vec![(vec![0; dim], vec![1000; dim])];
    let mut attempts = 0;
    while cells.len() < pieces && attempts < 1000 {
        attempts += 1;
        let c = rng.gen_range(0..cells.len());
        let axis = rng.gen_range(0..dim);
        let (lo, hi) = (cells[c].0[axis], cells[c].1[axis]);
        if hi - lo < 4 {
            continue;
        }
        let cut = rng.gen_range(lo + 1..hi);
        if !used[axis].insert(cut) {
            continue;
        }
        let (clo, chi) = cells.swap_remove(c);
        let mut left_hi = chi.clone();
        left_hi[axis] = cut;
        let mut right_lo = clo.clone();
        right_lo[axis] = cut;
        cells.push((clo, left_hi));
        cells.push((right_lo, chi));
    }
    cells.sort();
    let cells = cells
        .iter()
        .map(|(lo, hi)| BoxCell::int(lo, hi).unwrap())
        .collect();
    BoxCover::new(dim, dim, Domain::euclidean(dim), cells).unwrap()
}

/// At least `want` guillotine covers (2 and 3 dimensional, 2 to 9 cells) that pass
/// the LCL check.
pub fn valid_generated_covers<R: Rng>(rng: &mut R, want: usize) -> (Vec<BoxCover>, usize) {
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < want {
        let dim = rng.gen_range(2..=3);
        let pieces = rng.gen_range(2..=9);
        let w = guillotine_cover(rng, dim, pieces);
        if validate_lcl(&w).verdict {
            out.push(w);
        } else {
            rejected += 1;
        }
    }
    (out, rejected)
}
