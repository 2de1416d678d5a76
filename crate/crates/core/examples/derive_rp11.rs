//! Offline search that produced the `rp11` catalog fixture.
//!
//! Starts from the barycentric subdivision of the six-vertex projective plane (a
//! flag triangulation with 31 vertices) and contracts random edges as long as the
//! result is still a digital 2-manifold with Euler characteristic 1. Restarts until
//! a run gets down to 11 vertices, then prints the edge list with vertices numbered
//! in label order.
//!
//! Run with `cargo run --release -p dmf-core --example derive_rp11 [seed]`.

use std::collections::BTreeSet;

use dmf_core::classify::is_n_manifold;
use dmf_core::invariants::{euler_characteristic, homology};
use dmf_core::Graph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RP2_6: [[u8; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 5, 1],
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 1],
    [4, 5, 2],
    [5, 1, 3],
];

fn barycentric() -> Graph {
    let mut faces: BTreeSet<Vec<u8>> = BTreeSet::new();
    for t in RP2_6 {
        let mut t = t.to_vec();
        t.sort_unstable();
        for mask in 1u8..8 {
            faces.insert(
                (0..3)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| t[b])
                    .collect(),
            );
        }
    }
    let name = |f: &Vec<u8>| f.iter().map(u8::to_string).collect::<String>();
    let mut edges = Vec::new();
    for a in &faces {
        for b in &faces {
            if a.len() < b.len() && a.iter().all(|x| b.contains(x)) {
                edges.push((name(a), name(b)));
            }
        }
    }
    Graph::new(faces.iter().map(name), edges).expect("subdivision is a simple graph")
}

/// Merges `u` into `v`.
fn contract(g: &Graph, u: &str, v: &str) -> Graph {
    let keep: Vec<String> = g.labels().iter().filter(|l| *l != u).cloned().collect();
    let edges: Vec<(String, String)> = g
        .edge_labels()
        .into_iter()
        .map(|(a, b)| {
            (
                if a == u { v.to_owned() } else { a },
                if b == u { v.to_owned() } else { b },
            )
        })
        .filter(|(a, b)| a != b)
        .collect();
    Graph::new(keep, edges).expect("contraction keeps labels consistent")
}

fn acceptable(g: &Graph) -> bool {
    is_n_manifold(g, 2).holds() && euler_characteristic(g) == Ok(1)
}

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = barycentric();
    assert!(acceptable(&start));
    for attempt in 0.. {
        let mut g = start.clone();
        'shrink: loop {
            let mut edges = g.edge_labels();
            edges.shuffle(&mut rng);
            for (a, b) in edges {
                let h = contract(&g, &a, &b);
                if acceptable(&h) {
                    g = h;
                    continue 'shrink;
                }
            }
            break;
        }
        eprintln!("attempt {attempt}: {} vertices", g.order());
        if g.order() == 11 {
            let h = homology(&g).expect("small clique complex");
            eprintln!(
                "betti_q {:?}, betti_z2 {:?}, torsion {:?}",
                h.betti_rational, h.betti_mod2, h.torsion
            );
            let mut labels = g.labels().to_vec();
            labels.sort();
            let idx = |l: &str| labels.iter().position(|x| x == l).unwrap();
            let mut pairs: Vec<(usize, usize)> = g
                .edge_labels()
                .iter()
                .map(|(a, b)| {
                    let (i, j) = (idx(a), idx(b));
                    (i.min(j), i.max(j))
                })
                .collect();
            pairs.sort_unstable();
            println!("{pairs:?}");
            return;
        }
    }
}
