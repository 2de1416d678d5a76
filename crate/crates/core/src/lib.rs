//! Digital models of n-dimensional manifolds as simple undirected graphs.
//!
//! The crate covers the whole chain from continuous objects to graphs and back to
//! topological verdicts:
//!
//! - [`graph`] and [`canon`]: immutable labelled graphs, rims, balls, joins and exact
//!   canonical keys.
//! - [`homotopy`]: simple points and edges, contractibility, contractible
//!   transformations, greedy reduction and a semi-decision for homotopy equivalence.
//! - [`classify`]: recognizers for digital n-surfaces, n-spheres, n-manifolds and n-disks.
//! - [`transform`]: R-transformations (replacing an edge with a point).
//! - [`invariants`]: clique counts, Euler characteristic and clique-complex homology.
//! - [`covers`]: locally centred lump collections of axis-aligned boxes and their nerves.
//! - [`digitizer`]: cubical models of implicit and parametric shapes.
//! - [`catalog`]: named digital spheres, tori, a projective plane, a Klein bottle and a
//!   Moebius band, each re-validated on first access.

pub mod canon;
pub mod catalog;
pub mod classify;
pub mod covers;
pub mod digitizer;
mod error;
pub mod graph;
pub mod homotopy;
pub mod invariants;
pub mod io;
pub mod memo;
pub mod rational;
pub mod transform;

pub use canon::CanonicalKey;
pub use error::{Error, Result};
pub use graph::Graph;
