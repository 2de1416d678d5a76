//! R-transformations: replacing an edge of a manifold by a new point.
//!
//! The new point `x` gets the rim `u ⊕ v ⊕ O(uv)`, after which the edge `(u, v)`
//! is deleted. Both halves are contractible transformations, so the step can be
//! written into a [`HomotopyTrace`](crate::homotopy::HomotopyTrace) as a single
//! `r-transform` macro step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homotopy::Step;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RStep {
    pub edge: (String, String),
    pub new_point: String,
}

impl RStep {
    pub fn to_step(&self) -> Step {
        Step::RTransform {
            edge: self.edge.clone(),
            point: self.new_point.clone(),
        }
    }
}

/// Replaces the edge `(u, v)` of `m` by the fresh point `x`.
pub fn r_transform(m: &Graph, u: &str, v: &str, x: &str) -> Result<(Graph, RStep)> {
    let (i, j) = (m.index_of(u), m.index_of(v));
    let (Some(i), Some(j)) = (i, j) else {
        return Err(Error::NotAnEdge(u.to_owned(), v.to_owned()));
    };
    if !m.has_edge(i, j) {
        return Err(Error::NotAnEdge(u.to_owned(), v.to_owned()));
    }
    if m.contains(x) {
        return Err(Error::LabelInUse(x.to_owned()));
    }
    let mut rim = m.edge_rim_indices(i, j);
    rim.push(i);
    rim.push(j);
    rim.sort_unstable();
    let grown = m.with_vertex(x.to_owned(), &rim);
    Ok((
        grown.with_edge_toggled(i, j, false),
        RStep {
            edge: (u.to_owned(), v.to_owned()),
            new_point: x.to_owned(),
        },
    ))
}

/// First label of the form `x1`, `x2`, ... not used by `g`.
pub fn fresh_point_label(g: &Graph) -> String {
    (1..)
        .map(|k| format!("x{k}"))
        .find(|l| !g.contains(l))
        .expect("unbounded label supply")
}
