//! Simple undirected graphs with dense, stable edge identifiers.
//!
//! Vertices are `0..n`. Edges are stored as ordered pairs `(u, v)` with
//! `u < v`, sorted lexicographically, and an edge's position in that list is
//! its `EdgeId`. Adjacency lists are sorted by neighbor id, so neighbor
//! iteration order is deterministic everywhere.
//!
//! Primitives here stay total on disconnected inputs; connectivity is
//! enforced by the pipeline entry points that need it.

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Integer coordinate vector attached to a vertex; one entry per color class.
pub type CoordinateVector = Vec<usize>;

/// Distance marker for unreachable vertices.
pub const INFINITY: usize = usize::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("product factor {0} has no vertices")]
    EmptyFactor(usize),
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Pairs are normalized to `u < v`,
    /// duplicates collapse, self loops and out-of-range endpoints are errors.
    pub fn from_edges(
        n: usize,
        pairs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let v = a.max(b);
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.adj.len()
    }

    /// Endpoints of an edge, smaller first.
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Neighbors of `v` as (neighbor, edge id), sorted by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u == v || u >= self.adj.len() || v >= self.adj.len() {
            return None;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// The endpoint of `e` other than `v`. Panics if `v` is not an endpoint.
    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if v == a {
            b
        } else {
            assert_eq!(v, b, "vertex {v} not an endpoint of edge {e}");
            a
        }
    }

    /// Edge ids incident to `v`, in neighbor order.
    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.adj[v].iter().map(|&(_, e)| e)
    }

    /// BFS distances from `source`; unreachable vertices get [`INFINITY`].
    pub fn bfs_distances(&self, source: VertexId) -> Vec<usize> {
        self.bfs_distances_filtered(source, None)
    }

    /// BFS distances using only the given edges (None = all edges).
    pub fn bfs_distances_filtered(
        &self,
        source: VertexId,
        edge_mask: Option<&[bool]>,
    ) -> Vec<usize> {
        let mut dist = vec![INFINITY; self.adj.len()];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &self.adj[x] {
                if let Some(mask) = edge_mask {
                    if !mask[e] {
                        continue;
                    }
                }
                if dist[y] == INFINITY {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return false;
        }
        self.bfs_distances(0).iter().all(|&d| d != INFINITY)
    }

    /// Connected components, optionally of the spanning subgraph on a given
    /// edge subset. Isolated vertices form singleton components. Component
    /// labels are dense and ordered by smallest member vertex.
    pub fn connected_components(&self, edge_filter: Option<&[EdgeId]>) -> Components {
        let mask = edge_filter.map(|keep| {
            let mut mask = vec![false; self.edges.len()];
            for &e in keep {
                mask[e] = true;
            }
            mask
        });
        let n = self.adj.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = count;
            count += 1;
            label[start] = id;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &self.adj[x] {
                    if let Some(mask) = &mask {
                        if !mask[e] {
                            continue;
                        }
                    }
                    if label[y] == usize::MAX {
                        label[y] = id;
                        queue.push_back(y);
                    }
                }
            }
        }
        Components { label, count }
    }

    /// Closed k-neighborhood of `v` as a vertex subset.
    pub fn neighborhood(&self, v: VertexId, k: usize) -> VertexSubset {
        let dist = self.bfs_distances(v);
        VertexSubset::from_iter(
            self.adj.len(),
            self.vertices().filter(|&x| dist[x] <= k),
        )
    }

    /// Subgraph induced by a vertex subset, with maps back to host ids.
    pub fn induced_subgraph(&self, keep: &VertexSubset) -> Result<Subgraph, GraphError> {
        if keep.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        let edges: Vec<EdgeId> = (0..self.edges.len())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                keep.contains(u) && keep.contains(v)
            })
            .collect();
        Ok(self.subgraph(keep, &edges))
    }

    /// Subgraph spanned by an edge subset; vertices are the edges' endpoints.
    pub fn edge_subgraph(&self, edge_ids: &[EdgeId]) -> Subgraph {
        let mut keep = VertexSubset::empty(self.adj.len());
        for &e in edge_ids {
            let (u, v) = self.edges[e];
            keep.insert(u);
            keep.insert(v);
        }
        self.subgraph(&keep, edge_ids)
    }

    /// Subgraph on explicit vertices and edges. Every edge endpoint must lie
    /// in the vertex set; vertices without edges stay as isolated vertices.
    pub fn subgraph(&self, vertices: &VertexSubset, edge_ids: &[EdgeId]) -> Subgraph {
        let vertex_map: Vec<VertexId> = vertices.iter().collect();
        let mut back = vec![usize::MAX; self.adj.len()];
        for (new, &old) in vertex_map.iter().enumerate() {
            back[old] = new;
        }
        let mut edge_map: Vec<EdgeId> = edge_ids.to_vec();
        edge_map.sort_unstable();
        edge_map.dedup();
        let pairs: Vec<(VertexId, VertexId)> = edge_map
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                assert!(
                    back[u] != usize::MAX && back[v] != usize::MAX,
                    "edge {e} leaves the vertex set"
                );
                (back[u], back[v])
            })
            .collect();
        // host edges are distinct pairs, so ids stay aligned after sorting
        let graph = Graph::from_edges(vertex_map.len(), pairs).expect("valid subgraph edges");
        debug_assert_eq!(graph.edge_count(), edge_map.len());
        let mut sorted: Vec<(usize, EdgeId)> = edge_map
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (graph.edge_id(back[u], back[v]).unwrap(), e)
            })
            .collect();
        sorted.sort_unstable();
        let edge_map = sorted.into_iter().map(|(_, e)| e).collect();
        Subgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }
}

/// Subgraph together with maps from its dense ids back to the host graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    /// new vertex id -> host vertex id
    pub vertex_map: Vec<VertexId>,
    /// new edge id -> host edge id
    pub edge_map: Vec<EdgeId>,
}

impl Subgraph {
    /// Host vertex id -> new vertex id, if present.
    pub fn to_local_vertex(&self, host: VertexId) -> Option<VertexId> {
        self.vertex_map.binary_search(&host).ok()
    }
}

/// Vertex component labels; labels are dense, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn members(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.label.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Set of vertices of a fixed universe `0..n`, iterated in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSubset {
    mask: Vec<bool>,
    count: usize,
}

impl VertexSubset {
    pub fn empty(n: usize) -> Self {
        VertexSubset {
            mask: vec![false; n],
            count: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSubset {
            mask: vec![true; n],
            count: n,
        }
    }

    pub fn from_iter(n: usize, iter: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::empty(n);
        for v in iter {
            s.insert(v);
        }
        s
    }

    /// Size of the universe, not of the subset.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.mask.len() && self.mask[v]
    }

    /// Returns true if the vertex was newly inserted.
    pub fn insert(&mut self, v: VertexId) -> bool {
        assert!(v < self.mask.len(), "vertex {v} outside universe");
        if self.mask[v] {
            false
        } else {
            self.mask[v] = true;
            self.count += 1;
            true
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| v)
    }
}

/// Cartesian product with its ground truth: per-vertex coordinate vectors and
/// the edge coloring by differing position.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub graph: Graph,
    /// coords[vertex][i] = position of the vertex in factor i
    pub coords: Vec<CoordinateVector>,
    /// Edge classes; class = factor position, relabelled canonically.
    pub colors: crate::partition::EdgePartition,
}

/// Cartesian product of the given factors. Vertex ids are row-major
/// mixed-radix encodings of the coordinate tuples (last factor varies
/// fastest); an edge changes exactly one coordinate along a factor edge.
pub fn cartesian_product(factors: &[Graph]) -> Result<ProductGraph, GraphError> {
    if factors.is_empty() {
        return Err(GraphError::EmptyFactor(0));
    }
    for (i, f) in factors.iter().enumerate() {
        if f.vertex_count() == 0 {
            return Err(GraphError::EmptyFactor(i));
        }
    }
    let k = factors.len();
    let sizes: Vec<usize> = factors.iter().map(|f| f.vertex_count()).collect();
    let mut stride = vec![1usize; k];
    for i in (0..k - 1).rev() {
        stride[i] = stride[i + 1] * sizes[i + 1];
    }
    let n: usize = sizes.iter().product();

    let mut coords = Vec::with_capacity(n);
    let mut tuple = vec![0usize; k];
    for _ in 0..n {
        coords.push(tuple.clone());
        // odometer increment, last position fastest
        for i in (0..k).rev() {
            tuple[i] += 1;
            if tuple[i] < sizes[i] {
                break;
            }
            tuple[i] = 0;
        }
    }

    let mut pairs = Vec::new();
    for x in 0..n {
        for i in 0..k {
            let ci = coords[x][i];
            for &(w, _) in factors[i].neighbors(ci) {
                if w > ci {
                    pairs.push((x, x + (w - ci) * stride[i]));
                }
            }
        }
    }
    let graph = Graph::from_edges(n, pairs)?;

    let labels: Vec<Option<usize>> = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let diff: Vec<usize> = (0..k).filter(|&i| coords[u][i] != coords[v][i]).collect();
            debug_assert_eq!(diff.len(), 1, "product edge must change one coordinate");
            Some(diff[0])
        })
        .collect();
    let colors = crate::partition::EdgePartition::from_labels(&labels);

    Ok(ProductGraph {
        graph,
        coords,
        colors,
    })
}
