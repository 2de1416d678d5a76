//! Clique counts, Euler characteristic and homology of the clique complex.
//!
//! Simplices are the cliques of the graph, stored as ascending index tuples and
//! oriented lexicographically. Integer homology is computed exactly: a sparse
//! elimination on unit pivots followed by a dense Smith reduction over big integers
//! for whatever is left. Mod-2 ranks are computed separately by column reduction
//! over GF(2).

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest clique (in vertices) the enumeration accepts: simplices up to dimension 8.
pub const MAX_CLIQUE: usize = 9;

/// `counts[k - 1]` is the number of k-vertex cliques, up to the clique number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueVector {
    pub counts: Vec<u64>,
}

impl CliqueVector {
    /// Number of cliques with `k` vertices (`k >= 1`).
    pub fn get(&self, k: usize) -> u64 {
        k.checked_sub(1)
            .and_then(|i| self.counts.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn clique_number(&self) -> usize {
        self.counts.len()
    }

    pub fn euler(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub betti_rational: Vec<usize>,
    pub betti_mod2: Vec<usize>,
    /// Invariant factors greater than one of the torsion subgroup, per dimension.
    pub torsion: Vec<Vec<u64>>,
}

impl HomologyProfile {
    pub fn euler(&self) -> i64 {
        self.betti_rational
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_point_like(&self) -> bool {
        self.betti_rational.first() == Some(&1)
            && self.betti_rational[1..].iter().all(|&b| b == 0)
            && self.torsion.iter().all(Vec::is_empty)
    }

    pub fn torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

/// JSON report: `{"euler", "betti_q", "betti_z2", "torsion"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub euler: i64,
    pub betti_q: Vec<usize>,
    pub betti_z2: Vec<usize>,
    pub torsion: Vec<Vec<u64>>,
}

pub fn clique_vector(g: &Graph) -> Result<CliqueVector> {
    clique_counts(g.adj())
}

pub fn euler_characteristic(g: &Graph) -> Result<i64> {
    Ok(clique_vector(g)?.euler())
}

pub fn homology(g: &Graph) -> Result<HomologyProfile> {
    homology_adj(g.adj())
}

pub fn report(g: &Graph) -> Result<InvariantReport> {
    let h = homology(g)?;
    Ok(InvariantReport {
        euler: euler_characteristic(g)?,
        betti_q: h.betti_rational,
        betti_z2: h.betti_mod2,
        torsion: h.torsion,
    })
}

pub(crate) fn clique_counts(adj: &[FixedBitSet]) -> Result<CliqueVector> {
    let mut counts = Vec::new();
    let n = adj.len();
    for v in 0..n {
        let mut cand = adj[v].clone();
        cand.remove_range(..v + 1);
        count_rec(adj, &cand, 1, &mut counts)?;
    }
    Ok(CliqueVector { counts })
}

fn count_rec(
    adj: &[FixedBitSet],
    cand: &FixedBitSet,
    size: usize,
    counts: &mut Vec<u64>,
) -> Result<()> {
    if size > MAX_CLIQUE {
        return Err(Error::CliqueCap(MAX_CLIQUE));
    }
    if counts.len() < size {
        counts.push(0);
    }
    counts[size - 1] += 1;
    for w in cand.ones() {
        let mut next = cand.clone();
        next.intersect_with(&adj[w]);
        next.remove_range(..w + 1);
        count_rec(adj, &next, size + 1, counts)?;
    }
    Ok(())
}

/// All cliques grouped by dimension, each list in lexicographic order.
pub(crate) fn simplices(adj: &[FixedBitSet]) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut stack = Vec::new();
    for v in 0..adj.len() {
        let mut cand = adj[v].clone();
        cand.remove_range(..v + 1);
        stack.push(v as u32);
        collect_rec(adj, &cand, &mut stack, &mut out)?;
        stack.pop();
    }
    for dim in &mut out {
        dim.sort_unstable();
    }
    Ok(out)
}

fn collect_rec(
    adj: &[FixedBitSet],
    cand: &FixedBitSet,
    stack: &mut Vec<u32>,
    out: &mut Vec<Vec<Vec<u32>>>,
) -> Result<()> {
    let d = stack.len() - 1;
    if d >= MAX_CLIQUE {
        return Err(Error::CliqueCap(MAX_CLIQUE));
    }
    if out.len() <= d {
        out.push(Vec::new());
    }
    out[d].push(stack.clone());
    for w in cand.ones() {
        let mut next = cand.clone();
        next.intersect_with(&adj[w]);
        next.remove_range(..w + 1);
        stack.push(w as u32);
        collect_rec(adj, &next, stack, out)?;
        stack.pop();
    }
    Ok(())
}

/// Boundary of dimension `k` (k >= 1) as columns of `(row, ±1)` entries.
fn boundary_columns(lower: &[Vec<u32>], upper: &[Vec<u32>]) -> Vec<Vec<(usize, i64)>> {
    upper
        .iter()
        .map(|s| {
            let mut col: Vec<(usize, i64)> = (0..s.len())
                .map(|i| {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = lower
                        .binary_search(&face)
                        .expect("faces of a clique are cliques");
                    (row, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect()
}

pub(crate) fn homology_adj(adj: &[FixedBitSet]) -> Result<HomologyProfile> {
    let cx = simplices(adj)?;
    let top = cx.len();
    if top == 0 {
        return Ok(HomologyProfile {
            betti_rational: vec![],
            betti_mod2: vec![],
            torsion: vec![],
        });
    }
    // rank_q[k], rank_2[k], factors[k] describe the boundary C_k -> C_{k-1}; index 0 unused.
    let mut rank_q = vec![0usize; top + 1];
    let mut rank_2 = vec![0usize; top + 1];
    let mut factors: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    for k in 1..top {
        let cols = boundary_columns(&cx[k - 1], &cx[k]);
        rank_2[k] = rank_mod2(&cols);
        let (r, f) = integer_reduction(cx[k - 1].len(), &cols);
        rank_q[k] = r;
        factors[k] = f;
    }
    let mut betti_rational = Vec::with_capacity(top);
    let mut betti_mod2 = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for k in 0..top {
        let ck = cx[k].len();
        betti_rational.push(ck - rank_q[k] - rank_q[k + 1]);
        betti_mod2.push(ck - rank_2[k] - rank_2[k + 1]);
        torsion.push(factors[k + 1].clone());
    }
    Ok(HomologyProfile {
        betti_rational,
        betti_mod2,
        torsion,
    })
}

/// Rank over GF(2) by the standard column reduction on lowest nonzero rows.
fn rank_mod2(cols: &[Vec<(usize, i64)>]) -> usize {
    let mut pivot_of_low: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut rank = 0;
    for col in cols {
        let mut c: Vec<usize> = col.iter().map(|&(r, _)| r).collect();
        while let Some(&low) = c.last() {
            match pivot_of_low.get(&low) {
                Some(p) => c = sym_diff(&c, p),
                None => {
                    pivot_of_low.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank and the invariant factors greater than one of an integer matrix given by
/// sparse columns over `nrows` rows.
pub(crate) fn integer_reduction(nrows: usize, cols: &[Vec<(usize, i64)>]) -> (usize, Vec<u64>) {
    let mut m = SparseMatrix::from_columns(nrows, cols);
    let units = m.eliminate_units();
    let dense = m.remaining_dense();
    let diag = invariant_factors(dense);
    let rank = units + diag.len();
    let torsion = diag
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("torsion coefficient fits in u64"))
        .collect();
    (rank, torsion)
}

struct SparseMatrix {
    rows: Vec<BTreeMap<usize, i64>>,
    cols: Vec<BTreeSet<usize>>,
}

impl SparseMatrix {
    fn from_columns(nrows: usize, cols: &[Vec<(usize, i64)>]) -> Self {
        let mut rows = vec![BTreeMap::new(); nrows];
        let mut colsets = vec![BTreeSet::new(); cols.len()];
        for (c, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                if v != 0 {
                    rows[r].insert(c, v);
                    colsets[c].insert(r);
                }
            }
        }
        SparseMatrix {
            rows,
            cols: colsets,
        }
    }

    /// Pivots on ±1 entries until none remain; returns the number of pivots.
    fn eliminate_units(&mut self) -> usize {
        let mut pivots = 0;
        loop {
            let mut progress = false;
            for c in 0..self.cols.len() {
                let Some(r) = self.cols[c]
                    .iter()
                    .copied()
                    .filter(|&r| self.rows[r][&c].abs() == 1)
                    .min_by_key(|&r| (self.rows[r].len(), r))
                else {
                    continue;
                };
                if !self.pivot(r, c) {
                    return pivots;
                }
                pivots += 1;
                progress = true;
            }
            if !progress {
                return pivots;
            }
        }
    }

    /// Clears column `c` using the unit entry in row `r`, then drops row `r`.
    /// Returns false, leaving the matrix untouched, if an entry would overflow.
    fn pivot(&mut self, r: usize, c: usize) -> bool {
        let unit = self.rows[r][&c];
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&x| x != r).collect();
        let mut updates = Vec::with_capacity(others.len());
        for &o in &others {
            let factor = self.rows[o][&c] * unit;
            let mut row = self.rows[o].clone();
            for (&c2, &v) in &self.rows[r] {
                let Some(delta) = factor.checked_mul(v) else {
                    return false;
                };
                let cur = row.get(&c2).copied().unwrap_or(0);
                let Some(new) = cur.checked_sub(delta) else {
                    return false;
                };
                if new == 0 {
                    row.remove(&c2);
                } else {
                    row.insert(c2, new);
                }
            }
            updates.push((o, row));
        }
        let pivot_cols: Vec<usize> = self.rows[r].keys().copied().collect();
        for (o, row) in updates {
            for &c2 in &pivot_cols {
                if row.contains_key(&c2) {
                    self.cols[c2].insert(o);
                } else {
                    self.cols[c2].remove(&o);
                }
            }
            self.rows[o] = row;
        }
        for &c2 in &pivot_cols {
            self.cols[c2].remove(&r);
        }
        self.rows[r].clear();
        true
    }

    fn remaining_dense(&self) -> Vec<Vec<BigInt>> {
        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        let live_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| !self.cols[c].is_empty())
            .collect();
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        live_rows
            .iter()
            .map(|&r| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for (&c, &v) in &self.rows[r] {
                    dense[col_pos[&c]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// Nonzero invariant factors of a dense integer matrix, ascending in divisibility order.
#[allow(clippy::needless_range_loop)]
pub(crate) fn invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in (t + 1)..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let d = &q * &a[i][t];
                        a[i][j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // A smaller remainder sits in row or column t: move it to the pivot.
            let (pi, pj) = min_abs_entry(&a, t, t..rows, t..t + 1)
                .into_iter()
                .chain(min_abs_entry(&a, t, t..t + 1, t..cols))
                .min_by(|x, y| a[x.0][x.1].abs().cmp(&a[y.0][y.1].abs()))
                .expect("pivot row or column is nonzero");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // Normalize the diagonal into a divisibility chain.
    for i in 0..diag.len() {
        for j in (i + 1)..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn dense(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn clique_vectors() {
        assert_eq!(clique_vector(&cycle(4)).unwrap().counts, vec![4, 4]);
        assert_eq!(clique_vector(&octahedron()).unwrap().counts, vec![6, 12, 8]);
        assert_eq!(
            clique_vector(&complete(4)).unwrap().counts,
            vec![4, 6, 4, 1]
        );
        assert_eq!(clique_vector(&complete(4)).unwrap().get(7), 0);
        assert!(matches!(
            clique_vector(&complete(MAX_CLIQUE + 1)),
            Err(Error::CliqueCap(_))
        ));
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_characteristic(&point()).unwrap(), 1);
        assert_eq!(euler_characteristic(&octahedron()).unwrap(), 2);
        assert_eq!(euler_characteristic(&cycle(4)).unwrap(), 0);
        assert_eq!(euler_characteristic(&Graph::empty()).unwrap(), 0);
    }

    #[test]
    fn homology_of_small_graphs() {
        let c4 = homology(&cycle(4)).unwrap();
        assert_eq!(c4.betti_rational, vec![1, 1]);
        assert_eq!(c4.betti_mod2, vec![1, 1]);
        let oct = homology(&octahedron()).unwrap();
        assert_eq!(oct.betti_rational, vec![1, 0, 1]);
        assert!(homology(&complete(5)).unwrap().is_point_like());
        let two = homology(&s0()).unwrap();
        assert_eq!(two.betti_rational, vec![2]);
    }

    #[test]
    fn smith_reduction_finds_torsion() {
        assert_eq!(
            invariant_factors(dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        assert_eq!(
            invariant_factors(dense(&[&[2, 0], &[0, 3]])),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert!(invariant_factors(dense(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn integer_reduction_matches_dense() {
        // Columns of [[2, 1], [0, 3]] with a unit pivot: Z/6 cokernel.
        let cols = vec![vec![(0, 2)], vec![(0, 1), (1, 3)]];
        assert_eq!(integer_reduction(2, &cols), (2, vec![6]));
    }
}
