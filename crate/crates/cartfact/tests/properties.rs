//! Randomized properties tying the independent implementations together.

use proptest::prelude::*;

use cartfact::approx::{grow_region, perturb, undo, HeuristicConfig, PerturbationSpec};
use cartfact::covering::{compute_delta_star, cover, cover_via_color_graph};
use cartfact::edgelist::{load_edge_list, write_edge_list};
use cartfact::generate;
use cartfact::partition::EdgePartition;
use cartfact::{Graph, VertexSubset};

fn connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = generate::seeded_rng(seed);
    generate::random_connected(n, p, &mut rng)
}

proptest! {
    #[test]
    fn edge_lists_round_trip(n in 4usize..=12, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = load_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn perturbations_replay_backwards(
        n in 5usize..=10,
        p in 0.35f64..0.8,
        graph_seed in any::<u64>(),
        edit_seed in any::<u64>(),
        del in 0usize..=2,
        add in 0usize..=2,
    ) {
        let g = connected(n, p, graph_seed);
        let spec = PerturbationSpec { delete: del, add, seed: edit_seed };
        // sparse graphs may refuse deletions, dense ones additions; the
        // property only binds successful perturbations
        if let Ok((h, log)) = perturb(&g, &spec) {
            prop_assert_eq!(log.len(), del + add);
            prop_assert_eq!(undo(&h, &log), g);
        }
    }

    #[test]
    fn class_labels_are_arbitrary(n in 4usize..=12, p in 0.2f64..0.9, seed in any::<u64>(), shift in 1usize..=5) {
        let g = connected(n, p, seed);
        let part = compute_delta_star(&g).unwrap();
        let k = part.class_count();
        let relabeled: Vec<Option<usize>> = (0..g.edge_count())
            .map(|e| part.label_of(e).map(|c| (c + shift) % k))
            .collect();
        prop_assert_eq!(EdgePartition::from_labels(&relabeled), part);
    }

    #[test]
    fn full_covering_equals_the_global_relation(n in 4usize..=12, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = connected(n, p, seed);
        let cov = cover(&g, &VertexSubset::full(n)).unwrap();
        prop_assert_eq!(cov.partition, compute_delta_star(&g).unwrap());
    }

    #[test]
    fn both_covering_implementations_agree(
        n in 4usize..=12,
        p in 0.2f64..0.9,
        seed in any::<u64>(),
        center in 0usize..12,
        radius in 1usize..=2,
    ) {
        let g = connected(n, p, seed);
        let w = g.neighborhood(center % n, radius);
        let direct = cover(&g, &w).unwrap();
        let differential = cover_via_color_graph(&g, &w).unwrap();
        prop_assert_eq!(direct.partition, differential.partition);
        prop_assert_eq!(direct.union_edges, differential.union_edges);
    }

    #[test]
    fn grown_regions_honor_their_threshold(n in 6usize..=12, p in 0.3f64..0.8, seed in any::<u64>(), t in 2usize..=3) {
        let g = connected(n, p, seed);
        if let Ok(w) = grow_region(&g, &HeuristicConfig::new(t)) {
            prop_assert!(!w.is_empty());
            prop_assert!(g.induced_subgraph(&w).unwrap().graph.is_connected());
            let cov = cover(&g, &w).unwrap();
            prop_assert!(cov.partition.class_count() >= t);
        }
    }
}
