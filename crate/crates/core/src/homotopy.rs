//! Simple points and edges, contractibility, and contractible transformations.
//!
//! A graph is contractible when some sequence of simple-point deletions takes it
//! to a single point; a point is simple when its rim is contractible. The decision
//! is exact: a greedy pass runs first, and if it gets stuck the search backtracks
//! over every simple-point deletion, memoized on canonical keys. The empty graph
//! is not contractible.
//!
//! Two necessary conditions prune the search before backtracking: a contractible
//! graph has Euler characteristic 1 and the homology of a point, because simple-point
//! deletions preserve both.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::{dominating_vertex, induced_adj, is_connected_adj, Graph};
use crate::invariants::{clique_counts, homology_adj};
use crate::memo::Memo;

/// One contractible transformation, or an R-transformation macro step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Step {
    DeletePoint {
        vertex: String,
    },
    AttachPoint {
        vertex: String,
        rim: Vec<String>,
    },
    DeleteEdge {
        edge: (String, String),
    },
    AttachEdge {
        edge: (String, String),
    },
    /// Attach `point` with rim `u ⊕ v ⊕ O(uv)`, then delete the edge `(u, v)`.
    RTransform {
        edge: (String, String),
        point: String,
    },
}

/// A replayable sequence of transformations. Serializes as a JSON array of steps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomotopyTrace {
    pub steps: Vec<Step>,
}

/// Outcome of one transformation together with the steps that undo it.
#[derive(Clone, Debug)]
pub struct Applied {
    pub graph: Graph,
    pub inverse: Vec<Step>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub residue: Graph,
    pub trace: HomotopyTrace,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status")]
pub enum EquivalenceVerdict {
    /// Replaying `left` on the first graph and `right` on the second yields isomorphic graphs.
    Equivalent {
        left: HomotopyTrace,
        right: HomotopyTrace,
    },
    /// A homotopy invariant differs.
    Distinguished {
        invariant: String,
        left: String,
        right: String,
    },
    Unknown {
        explored: usize,
    },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent { .. })
    }

    pub fn is_distinguished(&self) -> bool {
        matches!(self, EquivalenceVerdict::Distinguished { .. })
    }
}

impl HomotopyTrace {
    pub fn new(steps: Vec<Step>) -> Self {
        HomotopyTrace { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step, checking each precondition.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        Ok(self.replay_with_inverse(g)?.0)
    }

    /// Replays and also returns the trace that takes the result back to `g`.
    pub fn replay_with_inverse(&self, g: &Graph) -> Result<(Graph, HomotopyTrace)> {
        let mut cur = g.clone();
        let mut undo: Vec<Vec<Step>> = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let applied = apply_transformation(&cur, step).map_err(|e| match e {
                Error::Rejected(msg) => Error::Rejected(format!("step {i}: {msg}")),
                other => other,
            })?;
            cur = applied.graph;
            undo.push(applied.inverse);
        }
        let steps = undo.into_iter().rev().flatten().collect();
        Ok((cur, HomotopyTrace { steps }))
    }

    pub fn extend(&mut self, other: HomotopyTrace) {
        self.steps.extend(other.steps);
    }
}

pub fn is_contractible(g: &Graph) -> bool {
    decide(g.adj(), Memo::global())
}

/// Deletion trace reducing `g` to a single point, if `g` is contractible.
pub fn contraction_trace(g: &Graph) -> Option<HomotopyTrace> {
    let order = witness(g.adj(), &g.label_ranks(), Memo::global())?;
    Some(HomotopyTrace {
        steps: order
            .into_iter()
            .map(|i| Step::DeletePoint {
                vertex: g.label(i).to_owned(),
            })
            .collect(),
    })
}

pub fn is_simple_point(g: &Graph, v: &str) -> Result<bool> {
    let i = g.require(v)?;
    Ok(simple_point_adj(g.adj(), i, Memo::global()))
}

pub fn is_simple_edge(g: &Graph, u: &str, v: &str) -> Result<bool> {
    let (i, j) = (g.require(u)?, g.require(v)?);
    if !g.has_edge(i, j) {
        return Err(Error::NotAnEdge(u.to_owned(), v.to_owned()));
    }
    Ok(common_rim_contractible(g, i, j))
}

pub(crate) fn contractible_adj(adj: &[FixedBitSet]) -> bool {
    decide(adj, Memo::global())
}

fn common_rim_contractible(g: &Graph, i: usize, j: usize) -> bool {
    let common = g.edge_rim_indices(i, j);
    decide(&induced_adj(g.adj(), &common), Memo::global())
}

fn simple_point_adj(adj: &[FixedBitSet], v: usize, memo: &Memo) -> bool {
    let rim: Vec<usize> = adj[v].ones().collect();
    decide(&induced_adj(adj, &rim), memo)
}

fn trivial(adj: &[FixedBitSet]) -> Option<bool> {
    match adj.len() {
        0 => Some(false),
        1 => Some(true),
        _ if !is_connected_adj(adj) => Some(false),
        _ if dominating_vertex(adj).is_some() => Some(true),
        _ => None,
    }
}

fn decide(adj: &[FixedBitSet], memo: &Memo) -> bool {
    if let Some(b) = trivial(adj) {
        return b;
    }
    let key = canonical_key(adj);
    if let Some(b) = memo.contractible(&key) {
        return b;
    }
    let result = search(adj, memo);
    memo.set_contractible(key, result);
    result
}

fn search(adj: &[FixedBitSet], memo: &Memo) -> bool {
    if let Ok(cv) = clique_counts(adj) {
        if cv.euler() != 1 {
            return false;
        }
    }
    let identity: Vec<usize> = (0..adj.len()).collect();
    let (_, alive) = greedy(adj, &identity, memo);
    if alive.count_ones(..) == 1 {
        return true;
    }
    let residue: Vec<usize> = alive.ones().collect();
    if let Ok(h) = homology_adj(&induced_adj(adj, &residue)) {
        if !h.is_point_like() {
            return false;
        }
    }
    let mut seen = HashSet::new();
    for v in 0..adj.len() {
        if !simple_point_adj(adj, v, memo) {
            continue;
        }
        let child = without(adj, v);
        if seen.insert(canonical_key(&child)) && decide(&child, memo) {
            return true;
        }
    }
    false
}

fn without(adj: &[FixedBitSet], v: usize) -> Vec<FixedBitSet> {
    let keep: Vec<usize> = (0..adj.len()).filter(|&k| k != v).collect();
    induced_adj(adj, &keep)
}

/// Deletes simple points, smallest current degree first, ties by `rank`, until none
/// is left. Returns the deletion order and the surviving vertices.
fn greedy(adj: &[FixedBitSet], rank: &[usize], memo: &Memo) -> (Vec<usize>, FixedBitSet) {
    let n = adj.len();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut degree: Vec<usize> = adj.iter().map(|r| r.count_ones(..)).collect();
    let mut simple: Vec<Option<bool>> = vec![None; n];
    let mut order = Vec::new();
    let mut remaining = n;
    while remaining > 1 {
        let mut cands: Vec<usize> = alive.ones().collect();
        cands.sort_unstable_by_key(|&v| (degree[v], rank[v]));
        let mut chosen = None;
        for v in cands {
            let s = *simple[v].get_or_insert_with(|| {
                let rim: Vec<usize> = adj[v].intersection(&alive).collect();
                decide(&induced_adj(adj, &rim), memo)
            });
            if s {
                chosen = Some(v);
                break;
            }
        }
        let Some(v) = chosen else { break };
        alive.remove(v);
        remaining -= 1;
        order.push(v);
        for w in adj[v].ones() {
            if alive.contains(w) {
                degree[w] -= 1;
                simple[w] = None;
            }
        }
    }
    (order, alive)
}

fn witness(adj: &[FixedBitSet], rank: &[usize], memo: &Memo) -> Option<Vec<usize>> {
    if !decide(adj, memo) {
        return None;
    }
    let n = adj.len();
    if let Some(apex) = dominating_vertex(adj) {
        let mut rest: Vec<usize> = (0..n).filter(|&v| v != apex).collect();
        rest.sort_by_key(|&v| rank[v]);
        return Some(rest);
    }
    let (order, alive) = greedy(adj, rank, memo);
    if alive.count_ones(..) == 1 {
        return Some(order);
    }
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by_key(|&v| rank[v]);
    for v in by_rank {
        if !simple_point_adj(adj, v, memo) {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&k| k != v).collect();
        let child = induced_adj(adj, &keep);
        if !decide(&child, memo) {
            continue;
        }
        let child_rank: Vec<usize> = keep.iter().map(|&k| rank[k]).collect();
        let sub = witness(&child, &child_rank, memo)?;
        let mut out = vec![v];
        out.extend(sub.into_iter().map(|i| keep[i]));
        return Some(out);
    }
    None
}

/// Applies one step after checking its precondition.
pub fn apply_transformation(g: &Graph, step: &Step) -> Result<Applied> {
    match step {
        Step::DeletePoint { vertex } => {
            let i = g.require(vertex)?;
            if !simple_point_adj(g.adj(), i, Memo::global()) {
                return Err(Error::Rejected(format!(
                    "delete-point {vertex}: rim of {vertex} is not contractible"
                )));
            }
            let rim = g
                .rim_indices(i)
                .into_iter()
                .map(|k| g.label(k).to_owned())
                .collect();
            Ok(Applied {
                graph: g.remove_index(i),
                inverse: vec![Step::AttachPoint {
                    vertex: vertex.clone(),
                    rim,
                }],
            })
        }
        Step::AttachPoint { vertex, rim } => {
            if g.contains(vertex) {
                return Err(Error::LabelInUse(vertex.clone()));
            }
            let rim_graph = g.induced_subgraph(rim)?;
            if !is_contractible(&rim_graph) {
                return Err(Error::Rejected(format!(
                    "attach-point {vertex}: rim set {rim:?} does not induce a contractible graph"
                )));
            }
            Ok(Applied {
                graph: g.attach_vertex(vertex, rim)?,
                inverse: vec![Step::DeletePoint {
                    vertex: vertex.clone(),
                }],
            })
        }
        Step::DeleteEdge { edge: (u, v) } => {
            let (i, j) = (g.require(u)?, g.require(v)?);
            if !g.has_edge(i, j) {
                return Err(Error::NotAnEdge(u.clone(), v.clone()));
            }
            if !common_rim_contractible(g, i, j) {
                return Err(Error::Rejected(format!(
                    "delete-edge ({u}, {v}): edge rim is not contractible"
                )));
            }
            Ok(Applied {
                graph: g.with_edge_toggled(i, j, false),
                inverse: vec![Step::AttachEdge {
                    edge: (u.clone(), v.clone()),
                }],
            })
        }
        Step::AttachEdge { edge: (u, v) } => {
            let (i, j) = (g.require(u)?, g.require(v)?);
            if i == j {
                return Err(Error::SelfLoop(u.clone()));
            }
            if g.has_edge(i, j) {
                return Err(Error::AlreadyAdjacent(u.clone(), v.clone()));
            }
            if !common_rim_contractible(g, i, j) {
                return Err(Error::Rejected(format!(
                    "attach-edge ({u}, {v}): common neighbours do not induce a contractible graph"
                )));
            }
            Ok(Applied {
                graph: g.with_edge_toggled(i, j, true),
                inverse: vec![Step::DeleteEdge {
                    edge: (u.clone(), v.clone()),
                }],
            })
        }
        Step::RTransform {
            edge: (u, v),
            point,
        } => {
            let (i, j) = (g.require(u)?, g.require(v)?);
            if !g.has_edge(i, j) {
                return Err(Error::NotAnEdge(u.clone(), v.clone()));
            }
            let mut rim = vec![u.clone(), v.clone()];
            rim.extend(
                g.edge_rim_indices(i, j)
                    .into_iter()
                    .map(|k| g.label(k).to_owned()),
            );
            let attached = apply_transformation(
                g,
                &Step::AttachPoint {
                    vertex: point.clone(),
                    rim,
                },
            )?;
            let cut = apply_transformation(
                &attached.graph,
                &Step::DeleteEdge {
                    edge: (u.clone(), v.clone()),
                },
            )?;
            let mut inverse = cut.inverse;
            inverse.extend(attached.inverse);
            Ok(Applied {
                graph: cut.graph,
                inverse,
            })
        }
    }
}

/// Greedy reduction: deletes simple points, smallest degree first and ties by label,
/// until none remains.
pub fn reduce(g: &Graph) -> Reduction {
    let (order, alive) = greedy(g.adj(), &g.label_ranks(), Memo::global());
    let keep: Vec<usize> = alive.ones().collect();
    Reduction {
        residue: g.induced_by_indices(&keep),
        trace: HomotopyTrace {
            steps: order
                .into_iter()
                .map(|i| Step::DeletePoint {
                    vertex: g.label(i).to_owned(),
                })
                .collect(),
        },
    }
}

pub const DEFAULT_BUDGET: usize = 2000;

/// Semi-decision for homotopy equivalence.
///
/// Both graphs are reduced first. Isomorphic residues give `Equivalent`. Otherwise the
/// Euler characteristic and homology of the residues are compared, and a difference
/// gives `Distinguished`. Failing both, a bidirectional search alternates between the
/// two sides, each move attaching one simple edge and reducing again, until the sides
/// meet or `budget` states have been generated.
pub fn homotopy_equivalent(g: &Graph, h: &Graph, budget: usize) -> EquivalenceVerdict {
    let (rg, rh) = (reduce(g), reduce(h));
    let (kg, kh) = (rg.residue.canonical_key(), rh.residue.canonical_key());
    if kg == kh {
        return EquivalenceVerdict::Equivalent {
            left: rg.trace,
            right: rh.trace,
        };
    }
    if let Some(v) = distinguish(&rg.residue, &rh.residue) {
        return v;
    }
    bidirectional(rg, rh, budget)
}

fn distinguish(a: &Graph, b: &Graph) -> Option<EquivalenceVerdict> {
    let differs = |name: &str, x: String, y: String| {
        (x != y).then(|| EquivalenceVerdict::Distinguished {
            invariant: name.to_owned(),
            left: x,
            right: y,
        })
    };
    let (ca, cb) = (clique_counts(a.adj()).ok()?, clique_counts(b.adj()).ok()?);
    if let Some(v) = differs("euler", ca.euler().to_string(), cb.euler().to_string()) {
        return Some(v);
    }
    let (ha, hb) = (homology_adj(a.adj()).ok()?, homology_adj(b.adj()).ok()?);
    let trimmed = |v: &[usize]| {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        format!("{v:?}")
    };
    differs(
        "betti_q",
        trimmed(&ha.betti_rational),
        trimmed(&hb.betti_rational),
    )
    .or_else(|| differs("betti_z2", trimmed(&ha.betti_mod2), trimmed(&hb.betti_mod2)))
    .or_else(|| {
        let t = |p: &crate::invariants::HomologyProfile| {
            let mut t = p.torsion.clone();
            while t.last().is_some_and(Vec::is_empty) {
                t.pop();
            }
            format!("{t:?}")
        };
        differs("torsion", t(&ha), t(&hb))
    })
}

struct Node {
    graph: Graph,
    trace: HomotopyTrace,
}

/// Min-heap keyed by (order, size, insertion sequence, canonical key).
type Frontier = BinaryHeap<Reverse<(usize, usize, usize, CanonicalKey)>>;

fn bidirectional(rg: Reduction, rh: Reduction, budget: usize) -> EquivalenceVerdict {
    let mut seen: [HashMap<CanonicalKey, Node>; 2] = [HashMap::new(), HashMap::new()];
    let mut queue: [Frontier; 2] = [BinaryHeap::new(), BinaryHeap::new()];
    let mut seq = 0usize;
    for (side, r) in [rg, rh].into_iter().enumerate() {
        let key = r.residue.canonical_key();
        queue[side].push(Reverse((
            r.residue.order(),
            r.residue.size(),
            seq,
            key.clone(),
        )));
        seq += 1;
        seen[side].insert(
            key,
            Node {
                graph: r.residue,
                trace: r.trace,
            },
        );
    }
    let mut generated = 0;
    let mut side = 0;
    while generated < budget && !(queue[0].is_empty() && queue[1].is_empty()) {
        if queue[side].is_empty() {
            side = 1 - side;
        }
        let Reverse((.., key)) = queue[side].pop().expect("non-empty queue");
        let (graph, trace) = {
            let node = &seen[side][&key];
            (node.graph.clone(), node.trace.clone())
        };
        let rank = graph.label_ranks();
        let mut by_rank: Vec<usize> = (0..graph.order()).collect();
        by_rank.sort_by_key(|&v| rank[v]);
        'pairs: for (a, &i) in by_rank.iter().enumerate() {
            for &j in &by_rank[a + 1..] {
                if graph.has_edge(i, j) || !common_rim_contractible(&graph, i, j) {
                    continue;
                }
                let grown = graph.with_edge_toggled(i, j, true);
                let red = reduce(&grown);
                let new_key = red.residue.canonical_key();
                let mut new_trace = trace.clone();
                new_trace.steps.push(Step::AttachEdge {
                    edge: (graph.label(i).to_owned(), graph.label(j).to_owned()),
                });
                new_trace.extend(red.trace);
                generated += 1;
                if let Some(other) = seen[1 - side].get(&new_key) {
                    let (left, right) = if side == 0 {
                        (new_trace, other.trace.clone())
                    } else {
                        (other.trace.clone(), new_trace)
                    };
                    return EquivalenceVerdict::Equivalent { left, right };
                }
                if !seen[side].contains_key(&new_key) {
                    queue[side].push(Reverse((
                        red.residue.order(),
                        red.residue.size(),
                        seq,
                        new_key.clone(),
                    )));
                    seq += 1;
                    seen[side].insert(
                        new_key,
                        Node {
                            graph: red.residue,
                            trace: new_trace,
                        },
                    );
                }
                if generated >= budget {
                    break 'pairs;
                }
            }
        }
        side = 1 - side;
    }
    EquivalenceVerdict::Unknown {
        explored: generated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn tree() -> Graph {
        Graph::new(
            ["r", "a", "b", "c", "d", "e"],
            [("r", "a"), ("r", "b"), ("a", "c"), ("a", "d"), ("b", "e")],
        )
        .unwrap()
    }

    #[test]
    fn simple_points() {
        assert!(is_simple_point(&path(3), "p0").unwrap());
        assert!(!is_simple_point(&path(3), "p1").unwrap());
        for v in cycle(4).labels() {
            assert!(!is_simple_point(&cycle(4), v).unwrap());
        }
        for v in complete(4).labels() {
            assert!(is_simple_point(&complete(4), v).unwrap());
        }
        assert!(is_simple_point(&cycle(4), "zz").is_err());
    }

    #[test]
    fn simple_edges() {
        assert!(is_simple_edge(&complete(3), "k0", "k1").unwrap());
        assert!(!is_simple_edge(&cycle(4), "c0", "c1").unwrap());
        let oct = octahedron();
        for (u, v) in oct.edge_labels() {
            assert!(!is_simple_edge(&oct, &u, &v).unwrap());
        }
        assert!(matches!(
            is_simple_edge(&cycle(4), "c0", "c2"),
            Err(Error::NotAnEdge(..))
        ));
    }

    #[test]
    fn contractibility() {
        assert!(is_contractible(&point()));
        assert!(!is_contractible(&Graph::empty()));
        assert!(!is_contractible(&cycle(4)));
        assert!(!is_contractible(&s0()));
        assert!(is_contractible(&wheel(4)));
        assert!(is_contractible(&tree()));
        assert!(!is_contractible(&octahedron()));
        let t = contraction_trace(&wheel(4)).unwrap();
        assert_eq!(t.replay(&wheel(4)).unwrap().order(), 1);
        assert!(contraction_trace(&cycle(5)).is_none());
    }

    #[test]
    fn transformations() {
        let c4 = cycle(4);
        let pendant = apply_transformation(
            &c4,
            &Step::AttachPoint {
                vertex: "x".into(),
                rim: vec!["c0".into()],
            },
        )
        .unwrap();
        assert_eq!((pendant.graph.order(), pendant.graph.size()), (5, 5));
        assert_eq!(
            pendant.inverse,
            vec![Step::DeletePoint { vertex: "x".into() }]
        );

        let hub = apply_transformation(&wheel(4), &Step::DeletePoint { vertex: "h".into() });
        assert!(matches!(hub, Err(Error::Rejected(_))));
        let rim_vertex = apply_transformation(
            &wheel(4),
            &Step::DeletePoint {
                vertex: "c0".into(),
            },
        )
        .unwrap();
        assert_eq!(rim_vertex.graph.order(), 4);

        let tri = apply_transformation(
            &path(3),
            &Step::AttachEdge {
                edge: ("p0".into(), "p2".into()),
            },
        )
        .unwrap();
        assert!(tri.graph.is_isomorphic(&complete(3)));
        assert!(apply_transformation(
            &cycle(4),
            &Step::AttachEdge {
                edge: ("c0".into(), "c2".into())
            }
        )
        .is_err());
    }

    #[test]
    fn reductions() {
        let r = reduce(&tree());
        assert_eq!(r.residue.order(), 1);
        assert_eq!(
            r.trace.replay(&tree()).unwrap().canonical_key(),
            r.residue.canonical_key()
        );
        assert!(reduce(&cycle(4)).residue.same_labeled(&cycle(4)));
        assert!(reduce(&octahedron()).trace.is_empty());
    }

    #[test]
    fn reduction_is_deterministic_by_label() {
        let g = path(4);
        let r = reduce(&g);
        // Both endpoints have degree 1; p0 sorts first.
        assert_eq!(
            r.trace.steps[0],
            Step::DeletePoint {
                vertex: "p0".into()
            }
        );
    }

    #[test]
    fn equivalence() {
        let relabeled = cycle(4).relabel(|l| format!("z{l}")).unwrap();
        assert!(homotopy_equivalent(&cycle(4), &relabeled, 10).is_equivalent());
        match homotopy_equivalent(&cycle(4), &point(), 10) {
            EquivalenceVerdict::Distinguished {
                invariant,
                left,
                right,
            } => {
                assert_eq!(
                    (invariant.as_str(), left.as_str(), right.as_str()),
                    ("euler", "0", "1")
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        match homotopy_equivalent(&cycle(9), &cycle(4), 100) {
            EquivalenceVerdict::Equivalent { left, right } => {
                let a = left.replay(&cycle(9)).unwrap();
                let b = right.replay(&cycle(4)).unwrap();
                assert!(a.is_isomorphic(&b));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_json_shape() {
        let s = Step::AttachPoint {
            vertex: "x".into(),
            rim: vec!["a".into()],
        };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"op":"attach-point","vertex":"x","rim":["a"]}"#);
        let e: Step = serde_json::from_str(r#"{"op":"delete-edge","edge":["u","v"]}"#).unwrap();
        assert_eq!(
            e,
            Step::DeleteEdge {
                edge: ("u".into(), "v".into())
            }
        );
    }
}
