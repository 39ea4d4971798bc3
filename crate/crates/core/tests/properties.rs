use std::collections::BTreeSet;

use delay_robust::fes::{enumerate_candidate_routes, prune_degree_one, PathDecomposition};
use delay_robust::oracle::{
    brute_force_robust, brute_force_solve, brute_force_worst_case, earliest_delayed_arrival, enumerated_arrival,
    minimal_breaking_set, simple_paths,
};
use delay_robust::pareto::{self, ParetoOptions};
use delay_robust::random::{random_drp, random_route_instance, random_sparse_graph, rng};
use delay_robust::tfvs::{self, check_route, compute_tfvs, remove_appearances, TimedFvs, VertexAppearance};
use delay_robust::verifier::worst_case_table_from;
use delay_robust::{
    fes, is_delay_robust, is_delayed_walk, worst_case_table, ArrivalVector, DelayKind, DelaySet, DrpInstance,
    Route, TemporalGraph, Time,
};
use itertools::Itertools;
use proptest::prelude::*;

fn route_case() -> impl Strategy<Value = (TemporalGraph, Route, usize, u64)> {
    (any::<u64>(), 2usize..=6, 1usize..=10, 0usize..=3, 0u64..=3).prop_map(|(seed, len, relevant, x, delta)| {
        let mut r = rng(seed);
        let (g, route) = random_route_instance(&mut r, 7, len, relevant, 4, 12, 2);
        (g, route, x, delta)
    })
}

fn drp_case() -> impl Strategy<Value = DrpInstance> {
    any::<u64>().prop_map(|seed| random_drp(&mut rng(seed), 6, 10, 2, 3))
}

/// Smallest timed feedback vertex set by trying subsets of the appearances
/// that touch some arc, in order of size.
fn exhaustive_tfvs_size(g: &TemporalGraph) -> usize {
    let apps: BTreeSet<VertexAppearance> = g
        .arcs()
        .iter()
        .flat_map(|a| [VertexAppearance::new(a.src, a.t), VertexAppearance::new(a.dst, a.t)])
        .collect();
    for k in 0..=apps.len() {
        for subset in apps.iter().copied().combinations(k) {
            if remove_appearances(g, &TimedFvs::new(subset)).underlying_graph().is_forest() {
                return k;
            }
        }
    }
    unreachable!("removing every appearance leaves no arcs")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_matches_oracle_vectors((g, route, x, delta) in route_case()) {
        let table = worst_case_table(&g, &route, x, delta);
        let oracle = brute_force_worst_case(&g, &route, x, delta, DelayKind::Traversal).unwrap();
        prop_assert_eq!(table.last(), &oracle);
        prop_assert_eq!(is_delay_robust(&g, &route, x, delta).unwrap(), oracle.is_robust());
    }

    #[test]
    fn delay_kinds_agree_on_robustness((g, route, x, delta) in route_case()) {
        let t = brute_force_robust(&g, &route, x, delta, DelayKind::Traversal).unwrap();
        let s = brute_force_robust(&g, &route, x, delta, DelayKind::Starting).unwrap();
        prop_assert_eq!(t, s);
    }

    #[test]
    fn greedy_starting_arrival_matches_enumeration((g, route, x, delta) in route_case(), pick in any::<u64>()) {
        let relevant = route.relevant_arcs(&g);
        let mut r = rng(pick);
        let chosen: Vec<_> = relevant.into_iter().filter(|_| rand::Rng::gen_bool(&mut r, 0.4)).take(x + 1).collect();
        for kind in [DelayKind::Starting, DelayKind::Traversal] {
            let d = DelaySet::new(chosen.iter().copied(), kind, delta);
            prop_assert_eq!(earliest_delayed_arrival(&g, &route, &d), enumerated_arrival(&g, &route, &d));
        }
    }

    #[test]
    fn traversal_walks_are_starting_walks((g, route, _x, delta) in route_case(), pick in any::<u64>()) {
        // one arbitrary arc per hop, delays on a random subset
        let mut r = rng(pick);
        let mut walk = Vec::new();
        for (v, w) in route.hops() {
            let arcs = g.pair_arcs(v, w);
            walk.push(arcs[rand::Rng::gen_range(&mut r, 0..arcs.len())]);
        }
        let delayed: Vec<_> = walk.iter().copied().filter(|_| rand::Rng::gen_bool(&mut r, 0.5)).collect();
        let td = DelaySet::new(delayed.iter().copied(), DelayKind::Traversal, delta);
        let sd = DelaySet::new(delayed, DelayKind::Starting, delta);
        if is_delayed_walk(&g, &walk, &td).unwrap() {
            prop_assert!(is_delayed_walk(&g, &walk, &sd).unwrap());
        }
    }

    #[test]
    fn minimal_traversal_breakers_break_starting((g, route, x, delta) in route_case(), pick in any::<u64>()) {
        let relevant = route.relevant_arcs(&g);
        let mut r = rng(pick);
        let chosen: Vec<_> = relevant.into_iter().filter(|_| rand::Rng::gen_bool(&mut r, 0.5)).take(x + 2).collect();
        let d = DelaySet::new(chosen, DelayKind::Traversal, delta);
        if let Some(min) = minimal_breaking_set(&g, &route, &d) {
            let starting = DelaySet { kind: DelayKind::Starting, ..min };
            prop_assert_eq!(earliest_delayed_arrival(&g, &route, &starting), Time::Infinite);
        }
    }

    #[test]
    fn robustness_is_monotone((g, route, x, delta) in route_case()) {
        let table = worst_case_table(&g, &route, x, delta);
        for row in &table.rows {
            prop_assert!(row.is_nondecreasing());
        }
        for pair in table.rows.windows(2) {
            prop_assert!(pair[0].dominates(&pair[1]).unwrap());
        }
        if is_delay_robust(&g, &route, x + 1, delta).unwrap() {
            prop_assert!(is_delay_robust(&g, &route, x, delta).unwrap());
        }
        if is_delay_robust(&g, &route, x, delta + 1).unwrap() {
            prop_assert!(is_delay_robust(&g, &route, x, delta).unwrap());
        }
    }

    #[test]
    fn shifted_start_is_maximum_of_constant_starts((g, route, x, delta) in route_case(), starts in prop::collection::vec(0u64..12, 4)) {
        let mut start: Vec<Time> = starts[..=x].iter().map(|&t| Time::Finite(t)).collect();
        start.sort();
        let start = ArrivalVector::new(start);
        let composed = worst_case_table_from(&g, &route, start.clone(), delta).last().clone();
        for y in 0..=x {
            let best = (0..=y)
                .map(|i| worst_case_table_from(&g, &route, ArrivalVector::constant(start.get(i), y - i), delta).last().get(y - i))
                .max()
                .unwrap();
            prop_assert_eq!(composed.get(y), best);
        }
        prop_assert!(check_route(&g, &route, &start, &composed, delta, None).unwrap());
    }

    #[test]
    fn pareto_pruning_is_safe(inst in drp_case()) {
        let pruned = pareto::solve_with(&inst, ParetoOptions::default()).unwrap();
        let full = pareto::solve_with(&inst, ParetoOptions { prune: false, label_limit: Some(2_000_000) }).unwrap();
        prop_assert_eq!(pruned.route.is_some(), full.route.is_some());
        if let Some(route) = &pruned.route {
            prop_assert!(is_delay_robust(&inst.graph, route, inst.x, inst.delta).unwrap());
        }
    }

    #[test]
    fn pareto_fronts_stay_small(inst in drp_case()) {
        let out = pareto::solve_with(&inst, ParetoOptions::default()).unwrap();
        for (v, &size) in out.max_front.iter().enumerate() {
            let bound = inst.graph.departures(v).len().max(1).pow(inst.x as u32);
            if v != inst.z {
                prop_assert!(size <= bound.max(1), "vertex {} front {} bound {}", v, size, bound);
            }
        }
    }

    #[test]
    fn fes_candidates_are_all_simple_paths(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_sparse_graph(&mut r, 8, 14, 1, 5, 0).underlying_graph();
        let (s, z) = (rand::Rng::gen_range(&mut r, 0..8), rand::Rng::gen_range(&mut r, 0..8));
        prop_assume!(s != z);
        let dec = PathDecomposition::new(&prune_degree_one(&g, s, z), s, z);
        let got: BTreeSet<Vec<usize>> = enumerate_candidate_routes(&dec, 8, s, z)
            .into_iter()
            .map(|r| r.vertices().to_vec())
            .collect();
        let count = enumerate_candidate_routes(&dec, 8, s, z).len();
        let want: BTreeSet<Vec<usize>> = simple_paths(&g, s, z, 100_000).unwrap().into_iter().collect();
        prop_assert_eq!(count, got.len());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn fes_and_pareto_match_brute_force(inst in drp_case()) {
        let brute = brute_force_solve(&inst).unwrap().is_some();
        prop_assert_eq!(fes::solve(&inst).unwrap().is_some(), brute);
        prop_assert_eq!(pareto::solve(&inst).unwrap().is_some(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn computed_tfvs_is_minimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_sparse_graph(&mut r, 6, 8, 1, 3, 0);
        let x = compute_tfvs(&g).unwrap();
        prop_assert!(x.is_feedback_set_of(&g));
        prop_assert_eq!(x.len(), exhaustive_tfvs_size(&g));
    }

    #[test]
    fn tfvs_solver_matches_brute_force(inst in drp_case()) {
        let Some(x) = tfvs::compute_tfvs_at_most(&inst.graph, 2).unwrap() else {
            return Ok(());
        };
        let out = tfvs::solve_with(&inst, &x).unwrap();
        prop_assert_eq!(out.robust, brute_force_solve(&inst).unwrap().is_some());
        if let Some(w) = out.witness {
            prop_assert!(is_delay_robust(&inst.graph, &w, inst.x, inst.delta).unwrap());
            prop_assert_eq!((w.source(), w.target()), (inst.s, inst.z));
        }
    }
}
