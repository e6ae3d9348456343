//! Factor extraction from a finished coordinate assignment.
//!
//! Each coordinate position yields a candidate factor: its vertices are the
//! values occurring in that slot, its edges the value pairs bridged by some
//! surviving edge. The vertex vectors then embed the surviving subgraph into
//! the product of the factors, and the embedding is checkable on its own.

use std::collections::HashSet;

use thiserror::Error;

use crate::coordinatizer::CoordinateAssignment;
use crate::graph::{CoordinateVector, Graph, VertexId};

/// Exhaustive isomorphism is only attempted up to this many vertices.
pub const MAX_ISO_VERTICES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizeError {
    #[error("coordinate assignment is inconsistent: {0}")]
    InvalidAssignment(String),
    #[error("{0} vertices exceed the exhaustive isomorphism limit of {MAX_ISO_VERTICES}")]
    TooLarge(usize),
}

/// One factor, read off a single coordinate position.
#[derive(Clone, Debug)]
pub struct Factor {
    /// Coordinate position this factor was read from.
    pub position: usize,
    /// Occurring values, ascending; graph vertex j stands for values[j].
    pub values: Vec<usize>,
    pub graph: Graph,
}

impl Factor {
    /// Graph vertex standing for a raw coordinate value.
    pub fn value_index(&self, value: usize) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }
}

/// Factors plus the embedding map they came with.
#[derive(Clone, Debug)]
pub struct FactorSet {
    /// Kept factors, ascending by position.
    pub factors: Vec<Factor>,
    /// Host vertex to its vector; None outside the surviving subgraph.
    pub embedding: Vec<Option<CoordinateVector>>,
    /// Surviving host vertices, ascending.
    pub h_vertices: Vec<VertexId>,
    /// Surviving edges as endpoint pairs, ascending by host edge id.
    pub h_edges: Vec<(VertexId, VertexId)>,
    /// Positions whose value set collapsed to a single label.
    pub dropped_positions: Vec<usize>,
    /// Whether the embedding checked out at extraction time.
    pub embedding_verified: bool,
}

/// Reads the factors off a coordinate assignment.
pub fn extract_factors(ca: &CoordinateAssignment) -> Result<FactorSet, FactorizeError> {
    ca.validate().map_err(FactorizeError::InvalidAssignment)?;
    let h_vertices = ca.surviving_vertices();
    let h_edges: Vec<(VertexId, VertexId)> =
        ca.surviving_edges().iter().map(|&e| ca.edge(e)).collect();
    let mut factors = Vec::new();
    let mut dropped_positions = Vec::new();
    for i in 0..ca.class_count() {
        let mut values: Vec<usize> = h_vertices
            .iter()
            .map(|&v| ca.coord_of(v).expect("survivor is coordinatized")[i])
            .collect();
        values.sort_unstable();
        values.dedup();
        if values.len() <= 1 {
            dropped_positions.push(i);
            continue;
        }
        let mut edges = Vec::new();
        for &(x, y) in &h_edges {
            let cx = ca.coord_of(x).unwrap()[i];
            let cy = ca.coord_of(y).unwrap()[i];
            if cx != cy {
                let a = values.binary_search(&cx).expect("value occurs");
                let b = values.binary_search(&cy).expect("value occurs");
                edges.push((a, b));
            }
        }
        let graph = Graph::from_edges(values.len(), edges).expect("factor edges are simple");
        factors.push(Factor {
            position: i,
            values,
            graph,
        });
    }
    let mut fs = FactorSet {
        factors,
        embedding: ca.coords().to_vec(),
        h_vertices,
        h_edges,
        dropped_positions,
        embedding_verified: false,
    };
    fs.embedding_verified = verify_embedding(&fs, &fs.h_vertices, &fs.h_edges);
    debug_assert!(fs.embedding_verified);
    Ok(fs)
}

/// True iff the embedding is injective over `vertices` and maps every edge
/// to a product edge: endpoints differing in exactly one position whose
/// factor joins the two values.
pub fn verify_embedding(
    fs: &FactorSet,
    vertices: &[VertexId],
    edges: &[(VertexId, VertexId)],
) -> bool {
    let vector_of = |v: VertexId| fs.embedding.get(v).and_then(|c| c.as_ref());
    let mut seen: HashSet<&CoordinateVector> = HashSet::new();
    for &v in vertices {
        let Some(c) = vector_of(v) else {
            return false;
        };
        if !seen.insert(c) {
            return false;
        }
    }
    edges.iter().all(|&(x, y)| {
        let (Some(cx), Some(cy)) = (vector_of(x), vector_of(y)) else {
            return false;
        };
        if cx.len() != cy.len() {
            return false;
        }
        let mut diff = (0..cx.len()).filter(|&i| cx[i] != cy[i]);
        let (Some(i), None) = (diff.next(), diff.next()) else {
            return false;
        };
        let Some(f) = fs.factors.iter().find(|f| f.position == i) else {
            return false;
        };
        match (f.value_index(cx[i]), f.value_index(cy[i])) {
            (Some(a), Some(b)) => f.graph.has_edge(a, b),
            _ => false,
        }
    })
}

/// True iff the embedding is onto the whole factor product, making it an
/// isomorphism witness: injective homomorphism plus matching vertex and
/// edge counts.
pub fn reconstructs_exactly(fs: &FactorSet) -> bool {
    if !verify_embedding(fs, &fs.h_vertices, &fs.h_edges) {
        return false;
    }
    let product_vertices: usize = fs.factors.iter().map(|f| f.values.len()).product();
    let product_edges: usize = fs
        .factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let layers: usize = fs
                .factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.values.len())
                .product();
            f.graph.edge_count() * layers
        })
        .sum();
    fs.h_vertices.len() == product_vertices && fs.h_edges.len() == product_edges
}

/// Exact isomorphism decision by degree-pruned backtracking.
pub fn isomorphism_check_small(a: &Graph, b: &Graph) -> Result<bool, FactorizeError> {
    let n = a.vertex_count().max(b.vertex_count());
    if n > MAX_ISO_VERTICES {
        return Err(FactorizeError::TooLarge(n));
    }
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let degrees = |g: &Graph| {
        let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    };
    if degrees(a) != degrees(b) {
        return Ok(false);
    }
    let mut order: Vec<VertexId> = a.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(a.degree(v)), v));
    let mut map = vec![usize::MAX; a.vertex_count()];
    let mut used = vec![false; b.vertex_count()];
    Ok(place(0, &order, a, b, &mut map, &mut used))
}

fn place(
    pos: usize,
    order: &[VertexId],
    a: &Graph,
    b: &Graph,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    for w in b.vertices() {
        if used[w] || b.degree(w) != a.degree(v) {
            continue;
        }
        if order[..pos]
            .iter()
            .any(|&u| a.has_edge(v, u) != b.has_edge(w, map[u]))
        {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if place(pos + 1, order, a, b, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}
