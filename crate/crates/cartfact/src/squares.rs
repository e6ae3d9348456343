//! Indexing of 4-cycles ("squares") and the pair queries used by the edge
//! relation: how many squares a pair of incident edges spans, whether that
//! square is unique, chordless, and has a unique top vertex.
//!
//! The index keys every vertex pair at distance <= 2 to its sorted list of
//! common neighbors (built in one pass over each vertex's neighbor pairs,
//! sum of deg^2 work overall), and stores every 4-cycle once, rooted at its
//! smallest vertex.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Debug, Error)]
pub enum SquareError {
    #[error("edges {e} and {f} do not share exactly one endpoint")]
    NotIncident { e: EdgeId, f: EdgeId },
}

/// One 4-cycle `base - left - top - right`, rooted so that `base` is the
/// smallest vertex and `left < right`. The cycle's diagonals are
/// (base, top) and (left, right); it is chordless when neither is an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareRecord {
    pub base: VertexId,
    pub left: VertexId,
    pub top: VertexId,
    pub right: VertexId,
    pub chordless: bool,
    /// (base,left) and (base,right): the pair spanning the square at `base`.
    pub spanning: (EdgeId, EdgeId),
    /// (left,top) and (right,top): opposite to `spanning.1` resp `spanning.0`.
    pub opposite: (EdgeId, EdgeId),
}

impl SquareRecord {
    pub fn side_edges(&self) -> [EdgeId; 4] {
        [
            self.spanning.0,
            self.spanning.1,
            self.opposite.0,
            self.opposite.1,
        ]
    }

    /// The side opposite to `e`. Panics if `e` is not a side.
    pub fn opposite_side(&self, e: EdgeId) -> EdgeId {
        // sides around the cycle: (base,left), (left,top), (top,right),
        // (right,base); opposition pairs the non-adjacent ones
        match e {
            _ if e == self.spanning.0 => self.opposite.1,
            _ if e == self.spanning.1 => self.opposite.0,
            _ if e == self.opposite.0 => self.spanning.1,
            _ if e == self.opposite.1 => self.spanning.0,
            _ => panic!("edge {e} is not a side of this square"),
        }
    }
}

/// Summary of the squares spanned by one incident edge pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSquareSummary {
    pub count: usize,
    /// Present exactly when `count == 1`.
    pub unique: Option<UniqueSquare>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueSquare {
    pub top: VertexId,
    pub chordless: bool,
    /// Top vertex uniqueness: |N[top] ∩ N[shared]| == 2.
    pub unique_top: bool,
    /// Edge ids of the two opposite sides, aligned with the query pair:
    /// `.0` joins e's far endpoint to the top, `.1` joins f's.
    pub opposite: (EdgeId, EdgeId),
}

pub struct SquareIndex<'g> {
    g: &'g Graph,
    common: HashMap<(VertexId, VertexId), Vec<VertexId>>,
    squares: Vec<SquareRecord>,
    by_edge: Vec<Vec<usize>>,
}

impl<'g> SquareIndex<'g> {
    pub fn build(g: &'g Graph) -> Self {
        let mut common: HashMap<(VertexId, VertexId), Vec<VertexId>> = HashMap::new();
        for v in g.vertices() {
            let nbrs = g.neighbors(v);
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    // neighbor lists are sorted, so the key is normalized
                    common
                        .entry((nbrs[i].0, nbrs[j].0))
                        .or_default()
                        .push(v);
                }
            }
        }

        let mut squares = Vec::new();
        let mut by_edge = vec![Vec::new(); g.edge_count()];
        for base in g.vertices() {
            let nbrs = g.neighbors(base);
            for i in 0..nbrs.len() {
                let (left, e_left) = nbrs[i];
                if left < base {
                    continue;
                }
                for j in i + 1..nbrs.len() {
                    let (right, e_right) = nbrs[j];
                    let Some(tops) = common.get(&(left, right)) else {
                        continue;
                    };
                    for &top in tops {
                        // rooted at the smallest vertex: base < everything
                        if top <= base {
                            continue;
                        }
                        let chordless = !g.has_edge(base, top) && !g.has_edge(left, right);
                        let e_lt = g.edge_id(left, top).unwrap();
                        let e_rt = g.edge_id(right, top).unwrap();
                        let id = squares.len();
                        squares.push(SquareRecord {
                            base,
                            left,
                            top,
                            right,
                            chordless,
                            spanning: (e_left, e_right),
                            opposite: (e_lt, e_rt),
                        });
                        for e in [e_left, e_right, e_lt, e_rt] {
                            by_edge[e].push(id);
                        }
                    }
                }
            }
        }

        SquareIndex {
            g,
            common,
            squares,
            by_edge,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    /// All 4-cycles, each listed once.
    pub fn squares(&self) -> &[SquareRecord] {
        &self.squares
    }

    /// Ids (into [`squares`]) of the 4-cycles having `e` as a side.
    pub fn squares_with_side(&self, e: EdgeId) -> &[usize] {
        &self.by_edge[e]
    }

    /// Number of common neighbors of two distinct vertices.
    pub fn common_neighbor_count(&self, a: VertexId, b: VertexId) -> usize {
        self.common
            .get(&(a.min(b), a.max(b)))
            .map_or(0, |v| v.len())
    }

    /// |N[a] ∩ N[b]| for distinct a, b: shared neighbors, plus both
    /// endpoints when they are adjacent.
    pub fn closed_common_count(&self, a: VertexId, b: VertexId) -> usize {
        debug_assert_ne!(a, b);
        self.common_neighbor_count(a, b) + if self.g.has_edge(a, b) { 2 } else { 0 }
    }

    /// Squares spanned by two edges at their shared endpoint. Errors unless
    /// the edges are distinct and share exactly one vertex.
    pub fn pair_summary(&self, e: EdgeId, f: EdgeId) -> Result<PairSquareSummary, SquareError> {
        let (shared, u, w) = split_incident(self.g, e, f)?;
        // the shared vertex is itself a common neighbor of u and w, so the
        // bucket always exists and spanned squares are the other entries
        let tops = self
            .common
            .get(&(u.min(w), u.max(w)))
            .expect("shared endpoint is a common neighbor");
        let count = tops.len() - 1;
        let unique = if count == 1 {
            let top = if tops[0] == shared { tops[1] } else { tops[0] };
            debug_assert_ne!(top, shared);
            let chordless = !self.g.has_edge(shared, top) && !self.g.has_edge(u, w);
            let unique_top = self.closed_common_count(top, shared) == 2;
            let opposite = (
                self.g.edge_id(u, top).unwrap(),
                self.g.edge_id(w, top).unwrap(),
            );
            Some(UniqueSquare {
                top,
                chordless,
                unique_top,
                opposite,
            })
        } else {
            None
        };
        Ok(PairSquareSummary { count, unique })
    }

    /// True when the pair spans exactly one square and that square is
    /// chordless with a unique top vertex.
    pub fn spans_unique_chordless_square(
        &self,
        e: EdgeId,
        f: EdgeId,
    ) -> Result<bool, SquareError> {
        Ok(self
            .pair_summary(e, f)?
            .unique
            .is_some_and(|u| u.chordless && u.unique_top))
    }
}

/// Splits an incident pair into (shared endpoint, e's other, f's other).
pub(crate) fn split_incident(
    g: &Graph,
    e: EdgeId,
    f: EdgeId,
) -> Result<(VertexId, VertexId, VertexId), SquareError> {
    if e == f {
        return Err(SquareError::NotIncident { e, f });
    }
    let (a, b) = g.edge(e);
    let (c, d) = g.edge(f);
    if a == c {
        Ok((a, b, d))
    } else if a == d {
        Ok((a, b, c))
    } else if b == c {
        Ok((b, a, d))
    } else if b == d {
        Ok((b, a, c))
    } else {
        Err(SquareError::NotIncident { e, f })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cartesian_product;

    fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::from_edges(n, pairs).unwrap()
    }

    fn cube() -> Graph {
        let k2 = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        cartesian_product(&[k2.clone(), k2.clone(), k2]).unwrap().graph
    }

    /// Oracle: test every 4-subset against each of its three pairings.
    fn brute_force_squares(g: &Graph) -> Vec<(Vec<VertexId>, bool)> {
        let n = g.vertex_count();
        let mut found = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        // cycles on {a,b,c,d} rooted at a: opposite is b, c, or d
                        for (l, t, r) in [(b, c, d), (b, d, c), (c, b, d)] {
                            let (l, r) = (l.min(r), l.max(r));
                            if g.has_edge(a, l)
                                && g.has_edge(a, r)
                                && g.has_edge(l, t)
                                && g.has_edge(r, t)
                            {
                                let chordless = !g.has_edge(a, t) && !g.has_edge(l, r);
                                found.push((vec![a, l, t, r], chordless));
                            }
                        }
                    }
                }
            }
        }
        found
    }

    fn as_tuples(idx: &SquareIndex) -> Vec<(Vec<VertexId>, bool)> {
        idx.squares()
            .iter()
            .map(|s| (vec![s.base, s.left, s.top, s.right], s.chordless))
            .collect()
    }

    #[test]
    fn cube_has_six_chordless_squares() {
        let g = cube();
        let idx = SquareIndex::build(&g);
        assert_eq!(idx.squares().len(), 6);
        assert!(idx.squares().iter().all(|s| s.chordless));
    }

    #[test]
    fn k4_has_three_chorded_cycles() {
        let g = complete(4);
        let idx = SquareIndex::build(&g);
        assert_eq!(idx.squares().len(), 3);
        assert!(idx.squares().iter().all(|s| !s.chordless));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let graphs = vec![
            cube(),
            complete(5),
            complete(6),
            Graph::from_edges(6, vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 3)])
                .unwrap(),
            Graph::from_edges(5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]).unwrap(),
        ];
        for g in &graphs {
            let idx = SquareIndex::build(g);
            let mut got = as_tuples(&idx);
            let mut want = brute_force_squares(g);
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn c4_pair_queries() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let idx = SquareIndex::build(&g);
        let e01 = g.edge_id(0, 1).unwrap();
        let e03 = g.edge_id(0, 3).unwrap();
        let e12 = g.edge_id(1, 2).unwrap();
        let s = idx.pair_summary(e01, e03).unwrap();
        assert_eq!(s.count, 1);
        let u = s.unique.unwrap();
        assert_eq!(u.top, 2);
        assert!(u.chordless && u.unique_top);
        assert_eq!(u.opposite, (e12, g.edge_id(2, 3).unwrap()));
        assert!(idx.spans_unique_chordless_square(e01, e03).unwrap());
        // opposite edges are not incident
        assert!(matches!(
            idx.pair_summary(e01, g.edge_id(2, 3).unwrap()),
            Err(SquareError::NotIncident { .. })
        ));
    }

    #[test]
    fn k4_pairs_span_chorded_squares_only() {
        let g = complete(4);
        let idx = SquareIndex::build(&g);
        let e01 = g.edge_id(0, 1).unwrap();
        let e02 = g.edge_id(0, 2).unwrap();
        let s = idx.pair_summary(e01, e02).unwrap();
        assert_eq!(s.count, 1);
        assert!(!s.unique.unwrap().chordless);
        assert!(!idx.spans_unique_chordless_square(e01, e02).unwrap());
    }

    #[test]
    fn k23_pair_spans_multiple_squares() {
        // parts {0,1} and {2,3,4}: edges (0,x),(1,x) span two squares
        let g = Graph::from_edges(5, vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
            .unwrap();
        let idx = SquareIndex::build(&g);
        let e = g.edge_id(2, 0).unwrap();
        let f = g.edge_id(2, 1).unwrap();
        let s = idx.pair_summary(e, f).unwrap();
        assert_eq!(s.count, 2);
        assert!(s.unique.is_none());
        assert!(!idx.spans_unique_chordless_square(e, f).unwrap());
    }

    #[test]
    fn non_unique_top_is_detected() {
        // squares 0-1-3-2 and 0-1-3-4 share top 3, so the pair (0,1),(0,2)
        // spans one square but its top is not unique: |N[3] ∩ N[0]| = 3
        let g = Graph::from_edges(
            5,
            vec![(0, 1), (0, 2), (0, 4), (1, 3), (2, 3), (3, 4)],
        )
        .unwrap();
        let idx = SquareIndex::build(&g);
        let e01 = g.edge_id(0, 1).unwrap();
        let e02 = g.edge_id(0, 2).unwrap();
        let s = idx.pair_summary(e01, e02).unwrap();
        assert_eq!(s.count, 1);
        let u = s.unique.unwrap();
        assert_eq!(u.top, 3);
        assert!(u.chordless);
        assert!(!u.unique_top);
        assert_eq!(idx.closed_common_count(3, 0), 3);
        assert!(!idx.spans_unique_chordless_square(e01, e02).unwrap());
        // adjacency contributes both endpoints to the closed intersection
        assert_eq!(idx.closed_common_count(1, 0), 2);
    }

    #[test]
    fn squares_with_side_lists_every_face() {
        let g = cube();
        let idx = SquareIndex::build(&g);
        // every cube edge lies on exactly two faces
        for e in 0..g.edge_count() {
            assert_eq!(idx.squares_with_side(e).len(), 2);
        }
        for (id, s) in idx.squares().iter().enumerate() {
            for side in s.side_edges() {
                assert!(idx.squares_with_side(side).contains(&id));
            }
            assert_eq!(s.opposite_side(s.spanning.0), s.opposite.1);
            assert_eq!(s.opposite_side(s.spanning.1), s.opposite.0);
            assert_eq!(s.opposite_side(s.opposite.0), s.spanning.1);
            assert_eq!(s.opposite_side(s.opposite.1), s.spanning.0);
        }
    }
}
