//! Approximate recognition: grow a covered region on a graph that is only
//! close to a product, perturb graphs for experiments, and score how much of
//! a known factorization a pipeline run recovers.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::covering::cover;
use crate::factorizer::{isomorphism_check_small, Factor, MAX_ISO_VERTICES};
use crate::generate::seeded_rng;
use crate::graph::{EdgeId, Graph, ProductGraph, VertexId, VertexSubset};
use crate::pipeline::PipelineOutput;
use crate::psp::{build_psp, PartialStarProduct};
use crate::squares::SquareIndex;
use crate::union_find::UnionFind;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApproxError {
    #[error("no vertex reaches {0} local classes")]
    NoSeed(usize),
    #[error("could not find a connectivity-preserving deletion in {0} attempts")]
    CannotPreserveConnectivity(usize),
    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedStrategy {
    /// Highest degree first, smallest id on ties.
    MaxDegree,
    /// Most local classes first, smallest id on ties.
    MaxPspClasses,
    Explicit(VertexId),
}

#[derive(Clone, Debug)]
pub struct HeuristicConfig {
    /// Minimum class count the combined local relation must keep. Growth is
    /// only meaningful from 2 up; 1 accepts everything reachable.
    pub threshold: usize,
    pub seed: SeedStrategy,
    /// Stop accepting once the region has this many vertices.
    pub max_region: Option<usize>,
}

impl HeuristicConfig {
    pub fn new(threshold: usize) -> Self {
        HeuristicConfig {
            threshold,
            seed: SeedStrategy::MaxDegree,
            max_region: None,
        }
    }
}

/// Incremental mirror of the class merge in `cover`: one disjoint-set key
/// per (accepted vertex, local class), keys sharing an edge unioned, class
/// count maintained as keys minus successful unions.
#[derive(Clone)]
struct GrowthState {
    uf: UnionFind,
    first_key: HashMap<EdgeId, usize>,
    classes: usize,
}

impl GrowthState {
    fn new() -> Self {
        GrowthState {
            uf: UnionFind::new(0),
            first_key: HashMap::new(),
            classes: 0,
        }
    }

    fn admit(&mut self, psp: &PartialStarProduct) {
        for class in &psp.classes {
            let key = self.uf.push();
            self.classes += 1;
            for &e in class {
                match self.first_key.get(&e) {
                    Some(&k0) => {
                        if self.uf.union(k0, key) {
                            self.classes -= 1;
                        }
                    }
                    None => {
                        self.first_key.insert(e, key);
                    }
                }
            }
        }
    }
}

/// Grows a connected vertex set whose covering keeps at least
/// `cfg.threshold` classes: pick a seed whose product already qualifies,
/// then BFS outward, admitting a neighbor only if the combined relation
/// stays above the threshold. Rejected candidates are not retried.
pub fn grow_region(g: &Graph, cfg: &HeuristicConfig) -> Result<VertexSubset, ApproxError> {
    assert!(cfg.threshold >= 1, "threshold must be at least 1");
    let n = g.vertex_count();
    let idx = SquareIndex::build(g);
    let mut psps: Vec<Option<PartialStarProduct>> = (0..n).map(|_| None).collect();
    let psp_at = |v: VertexId, store: &mut Vec<Option<PartialStarProduct>>| {
        if store[v].is_none() {
            store[v] = Some(build_psp(&idx, v));
        }
        store[v].clone().unwrap()
    };

    let seed = match cfg.seed {
        SeedStrategy::Explicit(v) => {
            assert!(v < n, "seed vertex out of range");
            if psp_at(v, &mut psps).class_count() >= cfg.threshold {
                Some(v)
            } else {
                None
            }
        }
        SeedStrategy::MaxDegree => {
            let mut order: Vec<VertexId> = (0..n).collect();
            order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            order
                .into_iter()
                .find(|&v| psp_at(v, &mut psps).class_count() >= cfg.threshold)
        }
        SeedStrategy::MaxPspClasses => {
            let mut order: Vec<VertexId> = (0..n).collect();
            order.sort_by_key(|&v| (std::cmp::Reverse(psp_at(v, &mut psps).class_count()), v));
            order
                .into_iter()
                .find(|&v| psps[v].as_ref().unwrap().class_count() >= cfg.threshold)
        }
    };
    let seed = seed.ok_or(ApproxError::NoSeed(cfg.threshold))?;

    let cap = cfg.max_region.unwrap_or(n);
    let mut region = VertexSubset::empty(n);
    let mut state = GrowthState::new();
    region.insert(seed);
    state.admit(&psp_at(seed, &mut psps));

    let mut considered = vec![false; n];
    considered[seed] = true;
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for &(y, _) in g.neighbors(seed) {
        considered[y] = true;
        queue.push_back(y);
    }
    while let Some(x) = queue.pop_front() {
        if region.len() >= cap {
            break;
        }
        let mut trial = state.clone();
        trial.admit(&psp_at(x, &mut psps));
        if trial.classes < cfg.threshold {
            continue;
        }
        state = trial;
        region.insert(x);
        for &(y, _) in g.neighbors(x) {
            if !considered[y] {
                considered[y] = true;
                queue.push_back(y);
            }
        }
    }

    debug_assert_eq!(
        state.classes,
        cover(g, &region).unwrap().partition.class_count(),
        "incremental class count drifted from the from-scratch covering"
    );
    Ok(region)
}

/// One applied edge change, in application order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edit {
    Delete(VertexId, VertexId),
    Add(VertexId, VertexId),
}

#[derive(Clone, Copy, Debug)]
pub struct PerturbationSpec {
    pub delete: usize,
    pub add: usize,
    pub seed: u64,
}

const PICK_ATTEMPTS: usize = 100;

/// Deletes `spec.delete` edges (keeping the graph connected) and then adds
/// `spec.add` fresh non-edges, never re-adding a deleted pair. Returns the
/// perturbed graph and the edit log in application order.
pub fn perturb(g: &Graph, spec: &PerturbationSpec) -> Result<(Graph, Vec<Edit>), ApproxError> {
    let n = g.vertex_count();
    if spec.delete > 0 && spec.delete >= g.edge_count() {
        return Err(ApproxError::InvalidPerturbation(format!(
            "cannot delete {} of {} edges",
            spec.delete,
            g.edge_count()
        )));
    }
    let mut rng = seeded_rng(spec.seed);
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().to_vec();
    let mut present: HashSet<(VertexId, VertexId)> = edges.iter().copied().collect();
    let mut deleted: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut log = Vec::new();

    for _ in 0..spec.delete {
        let mut applied = false;
        for _ in 0..PICK_ATTEMPTS {
            let i = rng.random_range(0..edges.len());
            let (u, v) = edges[i];
            let remaining = edges
                .iter()
                .copied()
                .filter(|&e| e != (u, v))
                .collect::<Vec<_>>();
            let still_connected = Graph::from_edges(n, remaining)
                .expect("remaining edges are a subset of a valid graph")
                .is_connected();
            if !still_connected {
                continue;
            }
            edges.swap_remove(i);
            present.remove(&(u, v));
            deleted.insert((u, v));
            log.push(Edit::Delete(u, v));
            applied = true;
            break;
        }
        if !applied {
            return Err(ApproxError::CannotPreserveConnectivity(PICK_ATTEMPTS));
        }
    }

    for _ in 0..spec.add {
        let mut applied = false;
        for _ in 0..PICK_ATTEMPTS {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if present.contains(&pair) || deleted.contains(&pair) {
                continue;
            }
            edges.push(pair);
            present.insert(pair);
            log.push(Edit::Add(pair.0, pair.1));
            applied = true;
            break;
        }
        if !applied {
            return Err(ApproxError::InvalidPerturbation(
                "no insertable vertex pair found".into(),
            ));
        }
    }

    let perturbed = Graph::from_edges(n, edges).expect("perturbation keeps edges simple");
    Ok((perturbed, log))
}

/// Replays an edit log backwards, restoring the graph `perturb` started from.
pub fn undo(perturbed: &Graph, log: &[Edit]) -> Graph {
    let mut present: HashSet<(VertexId, VertexId)> = perturbed.edges().iter().copied().collect();
    for edit in log.iter().rev() {
        match *edit {
            Edit::Delete(u, v) => present.insert((u, v)),
            Edit::Add(u, v) => present.remove(&(u, v)),
        };
    }
    let mut edges: Vec<(VertexId, VertexId)> = present.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges(perturbed.vertex_count(), edges).expect("undo restores a simple graph")
}

/// How a recovered factor lines up with a ground-truth factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorVerdict {
    Isomorphic { truth_index: usize },
    /// Vertex count, edge count and degree sequence agree, but at least one
    /// side is too large for the exact check.
    ProfileMatch { truth_index: usize },
    Unmatched,
}

#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub region_size: usize,
    pub class_count: usize,
    /// Fraction of scored edges whose recovered class maps to their true
    /// class under the best class bijection. 1.0 when nothing is scorable.
    pub color_accuracy: f64,
    /// Surviving covered edges that exist in the ground truth; inserted
    /// edges carry no true class and are left out.
    pub scored_edges: usize,
    pub vertices_retained: usize,
    /// One verdict per recovered factor, in position order.
    pub factor_verdicts: Vec<FactorVerdict>,
}

/// Scores a pipeline run on a perturbed graph against the product it was
/// derived from. `truth_factors` are the graphs the product was built from,
/// in position order.
pub fn evaluate_recovery(
    truth: &ProductGraph,
    truth_factors: &[Graph],
    perturbed: &Graph,
    out: &PipelineOutput,
) -> RecoveryReport {
    assert_eq!(
        truth.graph.vertex_count(),
        perturbed.vertex_count(),
        "perturbation never changes the vertex set"
    );
    let ca = &out.assignment;
    let k_rec = ca.class_count();
    let k_truth = truth.colors.class_count();
    let mut counts = vec![vec![0usize; k_truth]; k_rec];
    let mut scored = 0usize;
    for e in ca.surviving_edges() {
        let (u, v) = ca.edge(e);
        let Some(te) = truth.graph.edge_id(u, v) else {
            continue;
        };
        let r = ca.class_of(e).expect("surviving edges are covered");
        let t = truth
            .colors
            .label_of(te)
            .expect("product colorings cover every edge");
        counts[r][t] += 1;
        scored += 1;
    }
    let matched = best_bijection_matches(&counts);
    let color_accuracy = if scored == 0 {
        1.0
    } else {
        matched as f64 / scored as f64
    };
    RecoveryReport {
        region_size: out.covering.subset.len(),
        class_count: k_rec,
        color_accuracy,
        scored_edges: scored,
        vertices_retained: out.factors.h_vertices.len(),
        factor_verdicts: match_factors(&out.factors.factors, truth_factors),
    }
}

/// Maximum total count achievable by an injective map from rows (recovered
/// classes) to columns (true classes). Exact subset dynamic program over the
/// columns; capped at 20 columns.
fn best_bijection_matches(counts: &[Vec<usize>]) -> usize {
    let k_truth = counts.first().map_or(0, |row| row.len());
    assert!(k_truth <= 20, "class matching is capped at 20 true classes");
    let full = 1usize << k_truth;
    let mut dp = vec![0usize; full];
    for row in counts {
        let mut next = dp.clone();
        for (mask, &base) in dp.iter().enumerate() {
            for (b, &gain) in row.iter().enumerate() {
                if mask & (1 << b) == 0 {
                    let to = mask | (1 << b);
                    next[to] = next[to].max(base + gain);
                }
            }
        }
        dp = next;
    }
    dp.into_iter().max().unwrap_or(0)
}

fn match_factors(recovered: &[Factor], truth_factors: &[Graph]) -> Vec<FactorVerdict> {
    let mut used = vec![false; truth_factors.len()];
    recovered
        .iter()
        .map(|f| {
            for (i, t) in truth_factors.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let exact = f.graph.vertex_count() <= MAX_ISO_VERTICES
                    && t.vertex_count() <= MAX_ISO_VERTICES;
                if exact {
                    if isomorphism_check_small(&f.graph, t).expect("both sides fit the cap") {
                        used[i] = true;
                        return FactorVerdict::Isomorphic { truth_index: i };
                    }
                } else if degree_profile(&f.graph) == degree_profile(t) {
                    used[i] = true;
                    return FactorVerdict::ProfileMatch { truth_index: i };
                }
            }
            FactorVerdict::Unmatched
        })
        .collect()
}

fn degree_profile(g: &Graph) -> (usize, usize, Vec<usize>) {
    let mut degrees: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    (g.vertex_count(), g.edge_count(), degrees)
}
