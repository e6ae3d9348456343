//! The edge relation driving product recognition, its vertex-local variant,
//! and partial star products.
//!
//! Two distinct edges are related when they are adjacent and do NOT span a
//! unique chordless square with a unique top vertex, or when they are
//! opposite sides of some chordless square. The relation is reflexive and
//! symmetric; color classes are the components of its transitive closure.
//!
//! The local relation at a vertex v keeps only pairs touching an edge at v.
//! Its closure splits the edges at v into classes; every pair of v-edges in
//! different classes spans exactly one chordless square, and the far sides
//! of those squares (the non-primal edges) together with the edges at v form
//! the partial star product S_v.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::graph::{cartesian_product, EdgeId, Graph, VertexId, INFINITY};
use crate::partition::EdgePartition;
use crate::squares::{split_incident, SquareIndex};
use crate::union_find::UnionFind;

#[derive(Debug, Error)]
pub enum PspError {
    #[error("embedding map construction failed at center {center}: {msg}")]
    MapConstructionFailed { center: VertexId, msg: String },
}

/// Direct-definition edge relation over the whole graph: every unordered
/// pair of distinct related edges, built by scanning all pairs without any
/// index. Quadratic; this is the reference the fast path is tested against.
/// Reflexive pairs are implied and not listed.
pub fn delta_oracle(g: &Graph) -> Vec<(EdgeId, EdgeId)> {
    let m = g.edge_count();
    let mut pairs = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            if oracle_related(g, e, f) {
                pairs.push((e, f));
            }
        }
    }
    pairs
}

fn oracle_related(g: &Graph, e: EdgeId, f: EdgeId) -> bool {
    if let Ok((shared, u, w)) = split_incident(g, e, f) {
        // adjacent: related unless they span exactly one square and that
        // square is chordless with a unique top vertex
        return !oracle_unique_chordless_unique_top(g, shared, u, w);
    }
    // disjoint: related when opposite sides of some chordless 4-cycle
    let (a, b) = g.edge(e);
    let (c, d) = g.edge(f);
    for (x, y) in [(c, d), (d, c)] {
        // cycle a-b-x-y with diagonals (a,x) and (b,y)
        if g.has_edge(b, x) && g.has_edge(y, a) && !g.has_edge(a, x) && !g.has_edge(b, y) {
            return true;
        }
    }
    false
}

fn oracle_unique_chordless_unique_top(g: &Graph, v: VertexId, u: VertexId, w: VertexId) -> bool {
    let tops: Vec<VertexId> = g
        .vertices()
        .filter(|&x| x != v && g.has_edge(x, u) && g.has_edge(x, w))
        .collect();
    if tops.len() != 1 {
        return false;
    }
    let x = tops[0];
    if g.has_edge(v, x) || g.has_edge(u, w) {
        return false;
    }
    let closed = |z: VertexId| -> HashSet<VertexId> {
        let mut s: HashSet<VertexId> = g.neighbors(z).iter().map(|&(y, _)| y).collect();
        s.insert(z);
        s
    };
    closed(x).intersection(&closed(v)).count() == 2
}

/// Transitive closure of a pair relation over `edge_count` edges as an edge
/// partition; untouched edges become singleton classes.
pub fn transitive_closure(
    edge_count: usize,
    pairs: impl IntoIterator<Item = (EdgeId, EdgeId)>,
) -> EdgePartition {
    let mut uf = UnionFind::new(edge_count);
    for (e, f) in pairs {
        uf.union(e, f);
    }
    EdgePartition::from_union_find(edge_count, &mut uf, 0..edge_count)
}

/// The relation restricted to pairs touching an edge at `center`, with its
/// closure over the whole edge set.
#[derive(Clone, Debug)]
pub struct LocalRelation {
    pub center: VertexId,
    /// Unordered related pairs (smaller id first), sorted, deduplicated.
    pub pairs: Vec<(EdgeId, EdgeId)>,
    /// Closure over all edges of the host graph; untouched edges singleton.
    pub closure: EdgePartition,
}

pub fn local_relation(idx: &SquareIndex, center: VertexId) -> LocalRelation {
    let pairs = local_relation_pairs(idx, center);
    let closure = transitive_closure(idx.graph().edge_count(), pairs.iter().copied());
    LocalRelation {
        center,
        pairs,
        closure,
    }
}

/// Related pairs with at least one member incident to `center`. Every
/// partner of an edge at the center lies in the center's 2-ball, so host
/// square data decides membership exactly.
fn local_relation_pairs(idx: &SquareIndex, center: VertexId) -> Vec<(EdgeId, EdgeId)> {
    let g = idx.graph();
    let ev: Vec<EdgeId> = g.incident_edges(center).collect();
    let mut pairs: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut push = |a: EdgeId, b: EdgeId| pairs.push((a.min(b), a.max(b)));

    // pairs of center edges, adjacent at the center
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            if !idx
                .spans_unique_chordless_square(ev[i], ev[j])
                .expect("center edges share the center")
            {
                push(ev[i], ev[j]);
            }
        }
    }
    // pairs adjacent at the far endpoint of a center edge
    for &e in &ev {
        let u = g.other_endpoint(e, center);
        for &(z, f) in g.neighbors(u) {
            if z == center {
                continue;
            }
            if !idx
                .spans_unique_chordless_square(e, f)
                .expect("edges share the far endpoint")
            {
                push(e, f);
            }
        }
    }
    // opposite sides of chordless squares through a center edge
    for &e in &ev {
        for &sid in idx.squares_with_side(e) {
            let s = &idx.squares()[sid];
            if s.chordless {
                push(e, s.opposite_side(e));
            }
        }
    }

    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Partial star product at a center vertex: the center's edges (primal),
/// the far sides of the squares spanned by unrelated primal pairs
/// (non-primal), and the classes of the local closure restricted to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStarProduct {
    pub center: VertexId,
    /// Edges incident to the center, ascending.
    pub primal_edges: Vec<EdgeId>,
    /// Opposite sides contributed by unrelated primal pairs, ascending.
    pub non_primal_edges: Vec<EdgeId>,
    /// Endpoints of all edges above, plus the center itself, ascending.
    pub vertices: Vec<VertexId>,
    /// Local classes over primal + non-primal edges, ordered by smallest
    /// member edge; members ascending.
    pub classes: Vec<Vec<EdgeId>>,
}

impl PartialStarProduct {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing `e`, if `e` belongs to the product.
    pub fn class_of(&self, e: EdgeId) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.binary_search(&e).is_ok())
    }

    /// All edges of the product (primal and non-primal), ascending.
    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut all = self.primal_edges.clone();
        all.extend_from_slice(&self.non_primal_edges);
        all.sort_unstable();
        all
    }

    pub fn is_primal_vertex(&self, v: VertexId, g: &Graph) -> bool {
        v != self.center && g.has_edge(self.center, v)
    }

    /// Vertices that are not the center and not neighbors of the center.
    pub fn non_primal_vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.vertices
            .iter()
            .copied()
            .filter(|&x| x != self.center && !g.has_edge(self.center, x))
            .collect()
    }
}

/// Builds the partial star product at `center`.
pub fn build_psp(idx: &SquareIndex, center: VertexId) -> PartialStarProduct {
    let g = idx.graph();
    let pairs = local_relation_pairs(idx, center);
    let primal: Vec<EdgeId> = g.incident_edges(center).collect();

    // sparse closure over the touched edges only
    let mut ids: Vec<EdgeId> = primal.clone();
    for &(a, b) in &pairs {
        ids.push(a);
        ids.push(b);
    }
    ids.sort_unstable();
    ids.dedup();
    let slot: HashMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for &(a, b) in &pairs {
        uf.union(slot[&a], slot[&b]);
    }

    // far sides of squares spanned by unrelated primal pairs
    let mut non_primal: Vec<EdgeId> = Vec::new();
    for i in 0..primal.len() {
        for j in i + 1..primal.len() {
            if uf.same(slot[&primal[i]], slot[&primal[j]]) {
                continue;
            }
            let summary = idx
                .pair_summary(primal[i], primal[j])
                .expect("primal edges share the center");
            let unique = summary
                .unique
                .expect("unrelated primal pair spans exactly one square");
            debug_assert!(unique.chordless && unique.unique_top);
            non_primal.push(unique.opposite.0);
            non_primal.push(unique.opposite.1);
        }
    }
    non_primal.sort_unstable();
    non_primal.dedup();
    // an edge at the center is never the far side of one of its own squares
    debug_assert!(non_primal.iter().all(|e| !primal.contains(e)));

    // classes of the closure restricted to the product's edges
    let mut edge_set: Vec<EdgeId> = primal.iter().chain(non_primal.iter()).copied().collect();
    edge_set.sort_unstable();
    let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for &e in &edge_set {
        groups.entry(uf.find(slot[&e])).or_default().push(e);
    }
    let mut classes: Vec<Vec<EdgeId>> = groups.into_values().collect();
    classes.sort_unstable_by_key(|c| c[0]);

    let mut vertices: Vec<VertexId> = edge_set
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.edge(e);
            [u, v]
        })
        .chain(std::iter::once(center))
        .collect();
    vertices.sort_unstable();
    vertices.dedup();

    PartialStarProduct {
        center,
        primal_edges: primal,
        non_primal_edges: non_primal,
        vertices,
        classes,
    }
}

/// One color class of a partial star product restricted to the center's
/// edges: a star around the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarFactor {
    /// Index of the class in the product's class list.
    pub class: usize,
    pub center: VertexId,
    /// Far endpoints of the class's primal edges, ascending.
    pub leaves: Vec<VertexId>,
    /// The class's primal edges, ascending.
    pub edges: Vec<EdgeId>,
}

impl StarFactor {
    /// The star as a graph: vertex 0 is the center, vertex j is leaves[j-1].
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.leaves.len() + 1, (1..=self.leaves.len()).map(|j| (0, j)))
            .expect("star edges are valid")
    }

    /// 1-based coordinate label of a leaf.
    pub fn leaf_label(&self, v: VertexId) -> Option<usize> {
        self.leaves.binary_search(&v).ok().map(|i| i + 1)
    }
}

/// Splits the product's primal edges into one star per class. Every class
/// contains a primal edge, so the result is index-aligned with the classes.
pub fn star_factors(g: &Graph, psp: &PartialStarProduct) -> Vec<StarFactor> {
    let mut out = Vec::new();
    for (i, class) in psp.classes.iter().enumerate() {
        let edges: Vec<EdgeId> = class
            .iter()
            .copied()
            .filter(|e| psp.primal_edges.contains(e))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let leaves: Vec<VertexId> = edges
            .iter()
            .map(|&e| g.other_endpoint(e, psp.center))
            .collect();
        // primal edges at one vertex have distinct far endpoints; class
        // members are ascending and so are the leaves
        debug_assert!(leaves.windows(2).all(|w| w[0] < w[1]));
        out.push(StarFactor {
            class: i,
            center: psp.center,
            leaves,
            edges,
        });
    }
    debug_assert!(
        out.iter().enumerate().all(|(i, f)| f.class == i),
        "every local class contains a primal edge"
    );
    out
}

/// Verification result for the explicit embedding of a partial star product
/// into the product of its star factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PspEmbeddingReport {
    /// The map is a bijective isomorphism onto the closed 2-ball of the
    /// product around the image of the center.
    pub isomorphic_to_2_ball: bool,
    /// Distances inside the partial star product equal distances between
    /// the images in the product.
    pub isometric: bool,
    pub psp_vertex_count: usize,
    pub ball_vertex_count: usize,
    pub product_vertex_count: usize,
}

/// Builds the explicit map (center to the all-centers tuple, each primal
/// vertex to a unit tuple, each non-primal vertex to the two-label tuple of
/// its square's primal corners) and checks it is an isomorphism onto the
/// product's closed 2-ball and distance preserving.
pub fn verify_psp_isometric(
    g: &Graph,
    psp: &PartialStarProduct,
    stars: &[StarFactor],
) -> Result<PspEmbeddingReport, PspError> {
    let fail = |msg: String| PspError::MapConstructionFailed {
        center: psp.center,
        msg,
    };
    if stars.is_empty() {
        // isolated center: the product of zero stars is a single vertex
        return Ok(PspEmbeddingReport {
            isomorphic_to_2_ball: psp.vertices == vec![psp.center],
            isometric: true,
            psp_vertex_count: psp.vertices.len(),
            ball_vertex_count: 1,
            product_vertex_count: 1,
        });
    }
    let k = stars.len();
    let factors: Vec<Graph> = stars.iter().map(|s| s.to_graph()).collect();
    let product = cartesian_product(&factors).expect("stars are nonempty");
    let coord_to_id: HashMap<&[usize], VertexId> = product
        .coords
        .iter()
        .enumerate()
        .map(|(id, c)| (c.as_slice(), id))
        .collect();

    // class index -> star position (classes and stars are index-aligned)
    let class_of_edge = |e: EdgeId| -> Result<usize, PspError> {
        psp.class_of(e)
            .ok_or_else(|| fail(format!("edge {e} has no local class")))
    };

    let mut gamma: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    gamma.insert(psp.center, coord_to_id[vec![0; k].as_slice()]);
    for x in psp.vertices.iter().copied() {
        if x == psp.center {
            continue;
        }
        let mut coords = vec![0usize; k];
        if psp.is_primal_vertex(x, g) {
            let e = g.edge_id(psp.center, x).unwrap();
            let r = class_of_edge(e)?;
            let label = stars[r]
                .leaf_label(x)
                .ok_or_else(|| fail(format!("primal vertex {x} missing from star {r}")))?;
            coords[r] = label;
        } else {
            let incident: Vec<EdgeId> = psp
                .non_primal_edges
                .iter()
                .copied()
                .filter(|&e| {
                    let (a, b) = g.edge(e);
                    a == x || b == x
                })
                .collect();
            if incident.len() != 2 {
                return Err(fail(format!(
                    "non-primal vertex {x} has {} product edges, expected 2",
                    incident.len()
                )));
            }
            for e in incident {
                let p = g.other_endpoint(e, x);
                if !psp.is_primal_vertex(p, g) {
                    return Err(fail(format!(
                        "non-primal edge {e} does not join {x} to a primal vertex"
                    )));
                }
                let r = class_of_edge(g.edge_id(psp.center, p).unwrap())?;
                let label = stars[r]
                    .leaf_label(p)
                    .ok_or_else(|| fail(format!("corner {p} missing from star {r}")))?;
                if coords[r] != 0 {
                    return Err(fail(format!(
                        "non-primal vertex {x} has two corners in class {r}"
                    )));
                }
                coords[r] = label;
            }
        }
        let id = coord_to_id
            .get(coords.as_slice())
            .ok_or_else(|| fail(format!("tuple {coords:?} outside the product")))?;
        gamma.insert(x, *id);
    }

    // closed 2-ball around the image of the center
    let root = gamma[&psp.center];
    let dist_h = product.graph.bfs_distances(root);
    let ball: HashSet<VertexId> = product
        .graph
        .vertices()
        .filter(|&x| dist_h[x] <= 2)
        .collect();

    let image: HashSet<VertexId> = gamma.values().copied().collect();
    let injective = image.len() == gamma.len();
    let onto_ball = injective && image == ball;

    // edge-preserving in both directions over all vertex pairs
    let edge_set: Vec<EdgeId> = psp.edge_set();
    let mut adjacency: HashSet<(VertexId, VertexId)> = HashSet::new();
    for &e in &edge_set {
        let (u, v) = g.edge(e);
        adjacency.insert((u.min(v), u.max(v)));
    }
    let mut iso = onto_ball;
    if iso {
        'outer: for (i, &a) in psp.vertices.iter().enumerate() {
            for &b in &psp.vertices[i + 1..] {
                let in_psp = adjacency.contains(&(a, b));
                let in_product = product.graph.has_edge(gamma[&a], gamma[&b]);
                if in_psp != in_product {
                    iso = false;
                    break 'outer;
                }
            }
        }
    }

    // distance preservation inside the partial star product
    let sub = g.edge_subgraph(&edge_set);
    let mut isometric = injective;
    if isometric {
        'pairs: for (i, &a) in sub.vertex_map.iter().enumerate() {
            let d_sub = sub.graph.bfs_distances(i);
            let d_prod = product.graph.bfs_distances(gamma[&a]);
            for (j, &b) in sub.vertex_map.iter().enumerate() {
                let ds = d_sub[j];
                let dp = d_prod[gamma[&b]];
                if ds == INFINITY || ds != dp {
                    isometric = false;
                    break 'pairs;
                }
            }
        }
    }

    Ok(PspEmbeddingReport {
        isomorphic_to_2_ball: iso,
        isometric,
        psp_vertex_count: psp.vertices.len(),
        ball_vertex_count: ball.len(),
        product_vertex_count: product.graph.vertex_count(),
    })
}
