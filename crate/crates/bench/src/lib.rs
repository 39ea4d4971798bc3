//! Seeded workloads shared by the solver benchmarks.

use delay_robust::random::{long_route_instance, random_drp, rng};
use delay_robust::reductions::{mcpsat_to_drp, threesat_to_mcpsat, GadgetInstance};
use delay_robust::{DrpInstance, Route, TemporalGraph};

/// A path of `len` vertices carrying `arcs` arcs.
pub fn long_route(len: usize, arcs: usize) -> (TemporalGraph, Route) {
    long_route_instance(&mut rng(len as u64 ^ arcs as u64), len, arcs)
}

/// `count` small random queries with budgets up to `max_x`.
pub fn random_queries(count: usize, max_x: usize, seed: u64) -> Vec<DrpInstance> {
    let mut r = rng(seed);
    (0..count).map(|_| random_drp(&mut r, 7, 14, max_x, 3)).collect()
}

/// Gadget instance for a CNF where every clause chains two neighbouring
/// variables, so the instance is always satisfiable.
pub fn chain_gadget(variables: usize) -> GadgetInstance {
    let clauses = (1..variables as i64).map(|v| vec![-v, v + 1]).chain([vec![1]]).collect();
    let cnf = delay_robust::reductions::CnfInstance::new(variables, clauses).expect("literals in range");
    mcpsat_to_drp(&threesat_to_mcpsat(&cnf))
}
