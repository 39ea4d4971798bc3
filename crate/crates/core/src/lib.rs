//! Delay-robust routing in temporal graphs.
//!
//! A route (a vertex sequence) is `x`-delay-robust when, for every choice of
//! at most `x` arcs delayed by `delta`, some temporal walk still visits exactly
//! those vertices in order. This crate verifies robustness of a given route,
//! searches for robust routes with several exact algorithms, provides brute
//! force references for all of them, and generates hard instances from
//! satisfiability and clique problems.

pub mod error;
pub mod fes;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pareto;
pub mod random;
pub mod reductions;
pub mod solver;
pub mod tfvs;
pub mod time;
pub mod verifier;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graph::{
    is_delayed_walk, ArcId, DelayKind, DelaySet, DrpInstance, Route, StaticGraph, TemporalGraph,
    TimeArc, VertexId,
};
pub use solver::{Algorithm, DrpSolver};
pub use time::Time;
pub use verifier::{is_delay_robust, worst_case_table, ArrivalVector, WorstCaseTable};
