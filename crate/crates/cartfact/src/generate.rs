//! Deterministic and seeded graph constructions used by the tools and the
//! test corpus.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::{cartesian_product, Graph, ProductGraph};

pub fn path(n: usize) -> Graph {
    assert!(n >= 1);
    Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Star with the given number of leaves; vertex 0 is the center.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|j| (0, j))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    Graph::from_edges(n, pairs).unwrap()
}

/// d-dimensional hypercube as a product of d copies of K2.
pub fn hypercube(d: usize) -> ProductGraph {
    let k2 = path(2);
    cartesian_product(&vec![k2; d]).unwrap()
}

/// Uniform random tree: vertex i attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    assert!(n >= 1);
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    Graph::from_edges(n, pairs).unwrap()
}

/// Connected G(n, p): edges drawn independently, then resampled until the
/// result is connected. p must leave connectivity reachable for the caller's
/// n (no cap on attempts for tiny test sizes, but a hard stop guards against
/// hopeless parameters).
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    assert!(n >= 1);
    for _ in 0..10_000 {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, pairs).unwrap();
        if g.is_connected() {
            return g;
        }
    }
    panic!("could not draw a connected graph with n={n}, p={p}");
}

/// Seeded generator with a version-stable stream, so pinned fixtures stay
/// valid across dependency updates.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
