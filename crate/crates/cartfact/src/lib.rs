//! Recognition of exact and approximate Cartesian product structure in
//! graphs.
//!
//! The pipeline:
//!
//! 1. [`covering`] builds a partial star product around every vertex of a
//!    subset and merges their local edge classes into global color classes.
//! 2. [`coordinatizer`] merges classes until layers intersect trivially,
//!    then walks the graph in breadth-first levels assigning an integer
//!    coordinate vector to every vertex, deleting whatever cannot be made
//!    consistent.
//! 3. [`factorizer`] reads one factor graph per coordinate position off the
//!    surviving edges and verifies the embedding.
//!
//! On an exact product the pipeline loses nothing and returns the prime
//! factors; on a perturbed product it returns factors of a large consistent
//! substructure. [`approx`] adds the region-growing heuristic and the
//! perturbation/evaluation tooling around that use case.

#![forbid(unsafe_code)]

pub mod approx;
pub mod coordinatizer;
pub mod covering;
pub mod dot;
pub mod edgelist;
pub mod factorizer;
pub mod generate;
pub mod graph;
pub mod partition;
pub mod pipeline;
pub mod psp;
pub mod squares;
pub mod union_find;

pub use graph::{
    cartesian_product, CoordinateVector, EdgeId, Graph, GraphError, ProductGraph, Subgraph,
    VertexId, VertexSubset, INFINITY,
};
pub use partition::EdgePartition;
