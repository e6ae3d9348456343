//! One-call pipeline: cover, coordinatize, factorize.

use thiserror::Error;

use crate::coordinatizer::{assign_coordinates, default_root, CoordError, CoordinateAssignment};
use crate::covering::{cover, CoveringError, CoveringResult};
use crate::factorizer::{extract_factors, FactorizeError, FactorSet};
use crate::graph::{Graph, VertexId, VertexSubset};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Coordinates(#[from] CoordError),
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub covering: CoveringResult,
    pub root: VertexId,
    pub assignment: CoordinateAssignment,
    pub factors: FactorSet,
}

/// Covers `w`, coordinatizes from `root` (default: the vertex whose product
/// has the most classes), and extracts factors.
pub fn run_pipeline(
    g: &Graph,
    w: &VertexSubset,
    root: Option<VertexId>,
) -> Result<PipelineOutput, PipelineError> {
    let covering = cover(g, w)?;
    let root = root
        .or_else(|| default_root(&covering))
        .expect("cover rejects empty subsets");
    let assignment = assign_coordinates(g, &covering, root)?;
    let factors = extract_factors(&assignment)?;
    Ok(PipelineOutput {
        covering,
        root,
        assignment,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizer::reconstructs_exactly;
    use crate::generate;
    use crate::graph::cartesian_product;

    #[test]
    fn grid_runs_end_to_end() {
        let product = cartesian_product(&[generate::path(3), generate::star(2)]).unwrap();
        let g = &product.graph;
        let out = run_pipeline(g, &VertexSubset::full(g.vertex_count()), None).unwrap();
        assert!(out.covering.subset_connected);
        assert!(out.assignment.deletion_log().is_empty());
        assert_eq!(out.factors.factors.len(), 2);
        assert!(reconstructs_exactly(&out.factors));
    }

    #[test]
    fn explicit_root_is_kept() {
        let g = generate::cycle(4);
        let out = run_pipeline(&g, &VertexSubset::full(4), Some(2)).unwrap();
        assert_eq!(out.root, 2);
        assert_eq!(out.assignment.coord_of(2), Some(&vec![0, 0]));
    }
}
