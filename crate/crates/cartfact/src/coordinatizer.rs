//! Coordinate assignment over a covered region.
//!
//! The covering leaves a partial edge partition on the union graph U. This
//! module first merges classes until, through any vertex, components of two
//! different classes meet in that vertex alone. It then walks U breadth-first
//! from a root, giving each vertex a vector whose entries change exactly
//! along edges of the matching class. Vertices and edges that cannot be made
//! consistent are deleted and logged; what survives is a subgraph H of U
//! whose vectors embed it into a product of its coordinate layers.

use std::collections::HashMap;

use thiserror::Error;

use crate::covering::CoveringResult;
use crate::graph::{Components, CoordinateVector, EdgeId, Graph, VertexId, INFINITY};
use crate::partition::EdgePartition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordError {
    #[error("root vertex {0} is outside the covered subset")]
    RootNotInSubset(VertexId),
}

/// Why a vertex was dropped from the working graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRemovalReason {
    /// No path from the root inside the union graph.
    UnreachableFromRoot,
    /// No neighbor carried coordinates when the vertex came up.
    NoCoordinatizedNeighbor,
    /// Its vector collided with an earlier vertex.
    DuplicateCoordinates,
}

/// Why an edge was dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRemovalReason {
    /// The named endpoint was removed.
    EndpointRemoved(VertexId),
    /// Endpoint vectors do not differ in exactly the edge's class position.
    InconsistentEdge,
}

/// Everything deleted on the way to a consistent assignment, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeletionLog {
    pub vertices: Vec<(VertexId, VertexRemovalReason)>,
    pub edges: Vec<(EdgeId, EdgeRemovalReason)>,
}

impl DeletionLog {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    /// Edges removed for their own inconsistency, not as removal fallout.
    pub fn inconsistent_edges(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, r)| *r == EdgeRemovalReason::InconsistentEdge)
            .map(|&(e, _)| e)
            .collect()
    }
}

/// Per-class vertex components of the union graph.
///
/// `component(i, x)` is the component of x in the spanning subgraph on
/// class-i edges; for a fixed class these partition the vertices, singletons
/// included.
#[derive(Clone, Debug)]
pub struct ClassComponentIndex {
    comp: Vec<Components>,
}

impl ClassComponentIndex {
    fn build(g: &Graph, part: &EdgePartition) -> Self {
        let comp = (0..part.class_count())
            .map(|i| g.connected_components(Some(part.members(i))))
            .collect();
        Self { comp }
    }

    pub fn class_count(&self) -> usize {
        self.comp.len()
    }

    pub fn component(&self, class: usize, v: VertexId) -> usize {
        self.comp[class].label[v]
    }

    pub fn same_component(&self, class: usize, x: VertexId, y: VertexId) -> bool {
        self.component(class, x) == self.component(class, y)
    }

    /// Smallest class pair (i, j) whose components through some vertex share
    /// a second vertex.
    fn first_violation(&self, cov: &CoveringResult) -> Option<(usize, usize)> {
        let k = self.comp.len();
        for i in 0..k {
            for j in i + 1..k {
                let mut seen: HashMap<(usize, usize), VertexId> = HashMap::new();
                for v in cov.union_vertices.iter() {
                    let key = (self.comp[i].label[v], self.comp[j].label[v]);
                    if seen.insert(key, v).is_some() {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }
}

/// Merges covering classes until no two classes run side by side through a
/// shared vertex pair. One merge per round, smallest class pair first; the
/// returned index belongs to the final partition.
pub fn merge_until_consistent(
    g: &Graph,
    cov: &CoveringResult,
) -> (EdgePartition, ClassComponentIndex) {
    let mut part = cov.partition.clone();
    loop {
        let idx = ClassComponentIndex::build(g, &part);
        match idx.first_violation(cov) {
            Some((i, j)) => part = part.merge_classes(i, j),
            None => return (part, idx),
        }
    }
}

/// Root used when the caller does not pick one: a covered vertex whose
/// product has the most classes, ties to the smallest id.
pub fn default_root(cov: &CoveringResult) -> Option<VertexId> {
    let mut best: Option<(VertexId, usize)> = None;
    for (&v, psp) in &cov.psps {
        let c = psp.class_count();
        if best.map_or(true, |(_, bc)| c > bc) {
            best = Some((v, c));
        }
    }
    best.map(|(v, _)| v)
}

/// What one consistency pass removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub removed_vertex: Option<VertexId>,
    pub removed_edges: Vec<EdgeId>,
}

impl ConsistencyReport {
    pub fn is_clean(&self) -> bool {
        self.removed_vertex.is_none() && self.removed_edges.is_empty()
    }
}

/// Working state and final result of the coordinate walk.
///
/// Vertex and edge ids are the host graph's. A vertex is alive iff it
/// survived into H; alive vertices always hold a vector.
#[derive(Clone, Debug)]
pub struct CoordinateAssignment {
    root: VertexId,
    class_count: usize,
    /// Union-edge adjacency, sorted by neighbor.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edge_ends: Vec<(VertexId, VertexId)>,
    /// Merged class per union edge.
    class_by_edge: Vec<Option<usize>>,
    partition: EdgePartition,
    alive_vertex: Vec<bool>,
    alive_edge: Vec<bool>,
    coords: Vec<Option<CoordinateVector>>,
    /// Distance levels from the root, frozen before any assignment.
    levels: Vec<Vec<VertexId>>,
    vector_index: HashMap<CoordinateVector, VertexId>,
    fresh_counter: Vec<usize>,
    log: DeletionLog,
    fresh_events: Vec<(VertexId, usize)>,
}

/// Coordinatizes the union graph of `cov` from `root`.
pub fn assign_coordinates(
    g: &Graph,
    cov: &CoveringResult,
    root: VertexId,
) -> Result<CoordinateAssignment, CoordError> {
    if !cov.subset.contains(root) {
        return Err(CoordError::RootNotInSubset(root));
    }
    let (partition, _) = merge_until_consistent(g, cov);
    let mut ca = CoordinateAssignment::init(g, cov, partition, root);
    ca.label_root_components();
    ca.scan_levels();
    if cfg!(debug_assertions) {
        ca.check_invariants();
    }
    Ok(ca)
}

impl CoordinateAssignment {
    fn init(g: &Graph, cov: &CoveringResult, partition: EdgePartition, root: VertexId) -> Self {
        let n = g.vertex_count();
        let mut alive_edge = vec![false; g.edge_count()];
        let mut adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
        for &e in &cov.union_edges {
            alive_edge[e] = true;
            let (u, v) = g.edge(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0].0 < w[1].0)));
        let class_by_edge: Vec<Option<usize>> =
            (0..g.edge_count()).map(|e| partition.label_of(e)).collect();
        debug_assert!(cov.union_edges.iter().all(|&e| class_by_edge[e].is_some()));
        let class_count = partition.class_count();
        let mut ca = Self {
            root,
            class_count,
            adj,
            edge_ends: g.edges().to_vec(),
            class_by_edge,
            partition,
            alive_vertex: (0..n).map(|v| cov.union_vertices.contains(v)).collect(),
            alive_edge,
            coords: vec![None; n],
            levels: Vec::new(),
            vector_index: HashMap::new(),
            fresh_counter: vec![0; class_count],
            log: DeletionLog::default(),
            fresh_events: Vec::new(),
        };
        let dist = g.bfs_distances_filtered(root, Some(&ca.alive_edge));
        let reach_max = cov
            .union_vertices
            .iter()
            .map(|v| dist[v])
            .filter(|&d| d != INFINITY)
            .max()
            .unwrap_or(0);
        ca.levels = vec![Vec::new(); reach_max + 1];
        for v in cov.union_vertices.iter() {
            if dist[v] == INFINITY {
                ca.remove_vertex(v, VertexRemovalReason::UnreachableFromRoot);
            } else {
                ca.levels[dist[v]].push(v);
            }
        }
        ca
    }

    /// Zero vector at the root; along each class, BFS labels 1.. for the
    /// root's component. Distinct classes share no vertex besides the root
    /// once merging is done, so no vertex is labelled twice.
    fn label_root_components(&mut self) {
        let zeros = vec![0; self.class_count];
        self.coords[self.root] = Some(zeros.clone());
        self.vector_index.insert(zeros, self.root);
        for class in 0..self.class_count {
            let mut order = Vec::new();
            let mut seen = vec![false; self.coords.len()];
            seen[self.root] = true;
            let mut queue = std::collections::VecDeque::from([self.root]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &self.adj[x] {
                    if !self.alive_edge[e] || seen[y] || self.class_by_edge[e] != Some(class) {
                        continue;
                    }
                    seen[y] = true;
                    order.push(y);
                    queue.push_back(y);
                }
            }
            for (pos, &x) in order.iter().enumerate() {
                let mut vec = vec![0; self.class_count];
                vec[class] = pos + 1;
                debug_assert!(self.coords[x].is_none(), "root components overlap");
                self.coords[x] = Some(vec.clone());
                self.vector_index.insert(vec, x);
            }
            // fresh labels start past the component size, root included
            self.fresh_counter[class] = order.len() + 2;
        }
    }

    fn scan_levels(&mut self) {
        if self.levels.len() > 1 {
            debug_assert!(self.levels[1]
                .iter()
                .all(|&x| !self.alive_vertex[x] || self.coords[x].is_some()));
        }
        for depth in 2..self.levels.len() {
            let level = self.levels[depth].clone();
            for x in level {
                if !self.alive_vertex[x] || self.coords[x].is_some() {
                    continue;
                }
                self.assign_one(x);
            }
        }
    }

    fn assign_one(&mut self, x: VertexId) {
        let mut nbrs: Vec<(VertexId, usize)> = Vec::new();
        for &(y, e) in &self.adj[x] {
            if !self.alive_edge[e] || !self.alive_vertex[y] || self.coords[y].is_none() {
                continue;
            }
            nbrs.push((y, self.class_by_edge[e].expect("union edges are classed")));
        }
        let Some(&(u, r)) = nbrs.first() else {
            self.remove_vertex(x, VertexRemovalReason::NoCoordinatizedNeighbor);
            return;
        };
        let vec = if nbrs.iter().all(|&(_, c)| c == r) {
            // every informed neighbor sits in the same layer: open a new
            // r-value and keep the rest of u's position
            let label = self.fresh_counter[r];
            self.fresh_counter[r] += 1;
            self.fresh_events.push((x, r));
            let mut vec = self.coords[u].clone().expect("u is coordinatized");
            vec[r] = label;
            vec
        } else {
            let (w, _) = nbrs
                .iter()
                .copied()
                .find(|&(_, c)| c != r)
                .expect("a second class exists");
            // x differs from u in r and from w in its class, so the r-entry
            // comes from w and everything else from u
            let cw = self.coords[w].clone().expect("w is coordinatized");
            let mut vec = self.coords[u].clone().expect("u is coordinatized");
            vec[r] = cw[r];
            vec
        };
        self.coords[x] = Some(vec);
        self.consistency_check(x);
    }

    /// Checks the fresh vector at `x` against everything assigned earlier. A
    /// duplicate vector removes `x` with its edges; otherwise every incident
    /// edge whose endpoints do not differ in exactly the edge's class
    /// position is removed.
    pub fn consistency_check(&mut self, x: VertexId) -> ConsistencyReport {
        let vec = self.coords[x].clone().expect("x holds a fresh vector");
        let dup = self.vector_index.get(&vec).copied();
        #[cfg(debug_assertions)]
        {
            debug_assert_eq!(
                dup,
                self.duplicate_by_scan(x, &vec),
                "vector index drifted from the linear scan"
            );
        }
        if let Some(y) = dup {
            debug_assert_ne!(y, x, "x checked twice");
            let removed_edges = self.remove_vertex(x, VertexRemovalReason::DuplicateCoordinates);
            return ConsistencyReport {
                removed_vertex: Some(x),
                removed_edges,
            };
        }
        let mut removed_edges = Vec::new();
        let incident = self.adj[x].clone();
        for (y, e) in incident {
            if !self.alive_edge[e] || !self.alive_vertex[y] {
                continue;
            }
            let Some(cy) = self.coords[y].clone() else {
                continue;
            };
            let r = self.class_by_edge[e].expect("union edges are classed");
            let fits = vec[r] != cy[r]
                && vec
                    .iter()
                    .zip(&cy)
                    .enumerate()
                    .all(|(i, (a, b))| i == r || a == b);
            if !fits {
                self.remove_edge(e, EdgeRemovalReason::InconsistentEdge);
                removed_edges.push(e);
            }
        }
        self.vector_index.insert(vec, x);
        ConsistencyReport {
            removed_vertex: None,
            removed_edges,
        }
    }

    #[cfg(debug_assertions)]
    fn duplicate_by_scan(&self, x: VertexId, vec: &CoordinateVector) -> Option<VertexId> {
        (0..self.coords.len()).find(|&y| {
            y != x && self.alive_vertex[y] && self.coords[y].as_deref() == Some(vec.as_slice())
        })
    }

    fn remove_vertex(&mut self, x: VertexId, reason: VertexRemovalReason) -> Vec<EdgeId> {
        debug_assert!(self.alive_vertex[x]);
        self.alive_vertex[x] = false;
        self.coords[x] = None;
        self.log.vertices.push((x, reason));
        let incident: Vec<EdgeId> = self.adj[x]
            .iter()
            .map(|&(_, e)| e)
            .filter(|&e| self.alive_edge[e])
            .collect();
        for &e in &incident {
            self.remove_edge(e, EdgeRemovalReason::EndpointRemoved(x));
        }
        incident
    }

    fn remove_edge(&mut self, e: EdgeId, reason: EdgeRemovalReason) {
        debug_assert!(self.alive_edge[e]);
        self.alive_edge[e] = false;
        self.log.edges.push((e, reason));
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Host universe size, not the survivor count.
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Option<CoordinateVector>] {
        &self.coords
    }

    pub fn coord_of(&self, v: VertexId) -> Option<&CoordinateVector> {
        self.coords[v].as_ref()
    }

    pub fn vertex_alive(&self, v: VertexId) -> bool {
        self.alive_vertex[v]
    }

    pub fn edge_alive(&self, e: EdgeId) -> bool {
        self.alive_edge[e]
    }

    pub fn surviving_vertices(&self) -> Vec<VertexId> {
        (0..self.alive_vertex.len())
            .filter(|&v| self.alive_vertex[v])
            .collect()
    }

    pub fn surviving_edges(&self) -> Vec<EdgeId> {
        (0..self.alive_edge.len())
            .filter(|&e| self.alive_edge[e])
            .collect()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edge_ends[e]
    }

    /// Merged class of a union edge, deleted ones included.
    pub fn class_of(&self, e: EdgeId) -> Option<usize> {
        self.class_by_edge[e]
    }

    /// The merged partition over all union edges, before deletions.
    pub fn merged_partition(&self) -> &EdgePartition {
        &self.partition
    }

    pub fn deletion_log(&self) -> &DeletionLog {
        &self.log
    }

    /// Vertices that took a fresh label, with the class it was opened in.
    pub fn fresh_label_events(&self) -> &[(VertexId, usize)] {
        &self.fresh_events
    }

    /// Both exit guarantees: alive vertices carry pairwise distinct
    /// full-length vectors, and every surviving edge joins vectors differing
    /// in exactly its class position.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen: HashMap<&CoordinateVector, VertexId> = HashMap::new();
        for v in 0..self.coords.len() {
            if !self.alive_vertex[v] {
                if self.coords[v].is_some() {
                    return Err(format!("dead vertex {v} keeps a vector"));
                }
                continue;
            }
            let Some(vec) = self.coords[v].as_ref() else {
                return Err(format!("alive vertex {v} has no vector"));
            };
            if vec.len() != self.class_count {
                return Err(format!("short vector at {v}"));
            }
            if let Some(prev) = seen.insert(vec, v) {
                return Err(format!("vertices {prev} and {v} share {vec:?}"));
            }
        }
        for e in 0..self.alive_edge.len() {
            if !self.alive_edge[e] {
                continue;
            }
            let (u, v) = self.edge_ends[e];
            if !self.alive_vertex[u] || !self.alive_vertex[v] {
                return Err(format!("edge {e} outlived an endpoint"));
            }
            let r = self.class_by_edge[e].expect("union edges are classed");
            let (cu, cv) = (
                self.coords[u].as_ref().unwrap(),
                self.coords[v].as_ref().unwrap(),
            );
            if cu[r] == cv[r] {
                return Err(format!("edge {e} flat in its own class {r}"));
            }
            for i in 0..self.class_count {
                if i != r && cu[i] != cv[i] {
                    return Err(format!("edge {e} crosses class {i} besides {r}"));
                }
            }
        }
        Ok(())
    }

    /// `validate`, but panicking; for test suites.
    pub fn check_invariants(&self) {
        if let Err(msg) = self.validate() {
            panic!("{msg}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::cover;
    use crate::generate;
    use crate::graph::{cartesian_product, ProductGraph, VertexSubset};

    fn cover_full(g: &Graph) -> CoveringResult {
        cover(g, &VertexSubset::full(g.vertex_count())).unwrap()
    }

    /// Checks the assignment against ground-truth product coordinates via a
    /// position matching and per-position value bijections.
    fn assert_matches_product(product: &ProductGraph, ca: &CoordinateAssignment) {
        let g = &product.graph;
        assert!(ca.deletion_log().is_empty());
        assert!((0..g.vertex_count()).all(|v| ca.vertex_alive(v)));
        assert!((0..g.edge_count()).all(|e| ca.edge_alive(e)));
        let k = product.coords[0].len();
        assert_eq!(ca.class_count(), k);
        let diff_edges = |at: &dyn Fn(VertexId, usize) -> usize, pos: usize| -> Vec<EdgeId> {
            (0..g.edge_count())
                .filter(|&e| {
                    let (u, v) = g.edge(e);
                    at(u, pos) != at(v, pos)
                })
                .collect()
        };
        let truth_at = |v: VertexId, i: usize| product.coords[v][i];
        let got_at = |v: VertexId, j: usize| ca.coord_of(v).unwrap()[j];
        let mut matched = vec![usize::MAX; k];
        for j in 0..k {
            let diff_j = diff_edges(&got_at, j);
            let hit = (0..k).find(|&i| diff_edges(&truth_at, i) == diff_j);
            matched[j] = hit.unwrap_or_else(|| panic!("position {j} matches no factor"));
        }
        let mut sorted = matched.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), k, "positions do not biject onto factors");
        for (j, &i) in matched.iter().enumerate() {
            let mut forward: HashMap<usize, usize> = HashMap::new();
            let mut backward: HashMap<usize, usize> = HashMap::new();
            for v in g.vertices() {
                let truth = product.coords[v][i];
                let got = ca.coord_of(v).unwrap()[j];
                assert_eq!(*forward.entry(truth).or_insert(got), got);
                assert_eq!(*backward.entry(got).or_insert(truth), truth);
            }
        }
    }

    #[test]
    fn square_gets_forced_vectors() {
        let g = generate::cycle(4);
        let cov = cover_full(&g);
        let ca = assign_coordinates(&g, &cov, 0).unwrap();
        ca.check_invariants();
        let got: Vec<_> = (0..4).map(|v| ca.coord_of(v).unwrap().clone()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert!(ca.deletion_log().is_empty());
        assert!(ca.fresh_label_events().is_empty());
    }

    #[test]
    fn grid_matches_ground_truth() {
        let product = cartesian_product(&[generate::path(2), generate::path(3)]).unwrap();
        let cov = cover_full(&product.graph);
        let ca = assign_coordinates(&product.graph, &cov, 0).unwrap();
        ca.check_invariants();
        assert_matches_product(&product, &ca);
    }

    #[test]
    fn cube_recovery_is_lossless() {
        let product = generate::hypercube(3);
        let cov = cover_full(&product.graph);
        let root = default_root(&cov).unwrap();
        assert_eq!(root, 0);
        let ca = assign_coordinates(&product.graph, &cov, root).unwrap();
        ca.check_invariants();
        assert_matches_product(&product, &ca);
    }

    #[test]
    fn tree_products_skip_merging() {
        for seed in [3, 11] {
            let mut rng = generate::seeded_rng(seed);
            let a = generate::random_tree(6, &mut rng);
            let b = generate::random_tree(7, &mut rng);
            let product = cartesian_product(&[a, b]).unwrap();
            let cov = cover_full(&product.graph);
            let (merged, _) = merge_until_consistent(&product.graph, &cov);
            assert_eq!(merged, cov.partition);
            assert_eq!(merged.class_count(), 2);
        }
    }

    #[test]
    fn single_class_is_vacuously_merged() {
        let g = generate::cycle(6);
        let cov = cover_full(&g);
        assert_eq!(cov.partition.class_count(), 1);
        let (merged, idx) = merge_until_consistent(&g, &cov);
        assert_eq!(merged, cov.partition);
        assert_eq!(idx.class_count(), 1);
        assert!(idx.same_component(0, 0, 5));
    }

    /// Independent re-check of the merge exit condition by exhaustive pair
    /// scan over freshly computed components.
    fn assert_merge_postcondition(g: &Graph, cov: &CoveringResult, part: &EdgePartition) {
        let comps: Vec<Components> = (0..part.class_count())
            .map(|i| g.connected_components(Some(part.members(i))))
            .collect();
        let verts: Vec<VertexId> = cov.union_vertices.iter().collect();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                for (a, &x) in verts.iter().enumerate() {
                    for &y in &verts[a + 1..] {
                        let together = comps[i].label[x] == comps[i].label[y]
                            && comps[j].label[x] == comps[j].label[y];
                        assert!(!together, "classes {i},{j} overlap at {x},{y}");
                    }
                }
            }
        }
    }

    #[test]
    fn dented_cube_still_merges_to_fixed_point() {
        let cube = generate::hypercube(3).graph;
        let edges: Vec<_> = cube.edges().iter().copied().filter(|&e| e != (6, 7)).collect();
        let dented = Graph::from_edges(8, edges).unwrap();
        let w = VertexSubset::from_iter(8, (0..8).filter(|&v| dented.degree(v) == 3));
        let cov = cover(&dented, &w).unwrap();
        let (merged, _) = merge_until_consistent(&dented, &cov);
        assert!(merged.class_count() >= 1);
        assert_merge_postcondition(&dented, &cov, &merged);
    }

    #[test]
    fn root_outside_subset_is_rejected() {
        let g = generate::path(4);
        let w = VertexSubset::from_iter(4, [1, 2]);
        let cov = cover(&g, &w).unwrap();
        let err = assign_coordinates(&g, &cov, 3).unwrap_err();
        assert_eq!(err, CoordError::RootNotInSubset(3));
    }

    #[test]
    fn unreachable_union_component_is_dropped() {
        let mut edges = generate::cycle(4).edges().to_vec();
        edges.extend([(4, 5), (5, 6), (6, 7), (4, 7)]);
        let g = Graph::from_edges(8, edges).unwrap();
        let cov = cover_full(&g);
        assert!(!cov.subset_connected);
        let ca = assign_coordinates(&g, &cov, 0).unwrap();
        ca.check_invariants();
        assert_eq!(ca.surviving_vertices(), vec![0, 1, 2, 3]);
        let dropped: Vec<_> = ca
            .deletion_log()
            .vertices
            .iter()
            .filter(|(_, r)| *r == VertexRemovalReason::UnreachableFromRoot)
            .map(|&(v, _)| v)
            .collect();
        assert_eq!(dropped, vec![4, 5, 6, 7]);
        assert_eq!(ca.deletion_log().edges.len(), 4);
    }

    #[test]
    fn lone_vertex_coordinatizes_trivially() {
        let g = Graph::empty(1);
        let cov = cover_full(&g);
        let ca = assign_coordinates(&g, &cov, 0).unwrap();
        ca.check_invariants();
        assert_eq!(ca.class_count(), 0);
        assert_eq!(ca.coord_of(0), Some(&Vec::new()));
    }

    #[test]
    fn repeated_runs_agree() {
        let product = cartesian_product(&[generate::star(3), generate::path(4)]).unwrap();
        let cov = cover_full(&product.graph);
        let a = assign_coordinates(&product.graph, &cov, 2).unwrap();
        let b = assign_coordinates(&product.graph, &cov, 2).unwrap();
        assert_eq!(a.coords(), b.coords());
        assert_eq!(a.deletion_log(), b.deletion_log());
        assert_eq!(a.fresh_label_events(), b.fresh_label_events());
    }

    /// Hand-built two-class state: vertices 0,1 joined by a class-0 edge.
    fn scratch_pair(c0: CoordinateVector, c1: CoordinateVector) -> CoordinateAssignment {
        let mut vector_index = HashMap::new();
        vector_index.insert(c0.clone(), 0);
        CoordinateAssignment {
            root: 0,
            class_count: 2,
            adj: vec![vec![(1, 0)], vec![(0, 0)]],
            edge_ends: vec![(0, 1)],
            class_by_edge: vec![Some(0)],
            partition: EdgePartition::from_class_lists(1, vec![vec![0]]),
            alive_vertex: vec![true, true],
            alive_edge: vec![true],
            coords: vec![Some(c0), Some(c1)],
            levels: vec![vec![0], vec![1]],
            vector_index,
            fresh_counter: vec![2, 1],
            log: DeletionLog::default(),
            fresh_events: Vec::new(),
        }
    }

    #[test]
    fn duplicate_vector_removes_the_newcomer() {
        let mut ca = scratch_pair(vec![0, 0], vec![0, 0]);
        let report = ca.consistency_check(1);
        assert_eq!(report.removed_vertex, Some(1));
        assert_eq!(report.removed_edges, vec![0]);
        assert!(!ca.vertex_alive(1));
        assert_eq!(
            ca.deletion_log().vertices,
            vec![(1, VertexRemovalReason::DuplicateCoordinates)]
        );
        ca.check_invariants();
    }

    #[test]
    fn double_difference_drops_the_edge() {
        let mut ca = scratch_pair(vec![0, 0], vec![1, 1]);
        let report = ca.consistency_check(1);
        assert_eq!(report.removed_vertex, None);
        assert_eq!(report.removed_edges, vec![0]);
        assert_eq!(ca.deletion_log().inconsistent_edges(), vec![0]);
        ca.check_invariants();
    }

    #[test]
    fn consistent_vector_reports_clean() {
        let mut ca = scratch_pair(vec![0, 0], vec![1, 0]);
        let report = ca.consistency_check(1);
        assert!(report.is_clean());
        assert!(ca.deletion_log().is_empty());
        ca.check_invariants();
    }

    #[test]
    fn unrepaired_state_cannot_be_factorized() {
        let ca = scratch_pair(vec![0, 0], vec![1, 1]);
        assert!(ca.validate().is_err());
        let err = crate::factorizer::extract_factors(&ca).unwrap_err();
        assert!(matches!(
            err,
            crate::factorizer::FactorizeError::InvalidAssignment(_)
        ));
    }
}
