//! Common front end for the exact solvers.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::graph::{DrpInstance, Route};
use crate::{fes, oracle, pareto, tfvs};

pub trait DrpSolver {
    fn name(&self) -> &'static str;

    /// A robust `(s, z)`-route if one exists.
    fn solve(&self, inst: &DrpInstance) -> Result<Option<Route>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pareto,
    Fes,
    Tfvs,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Pareto, Algorithm::Fes, Algorithm::Tfvs, Algorithm::Brute];
}

impl DrpSolver for Algorithm {
    fn name(&self) -> &'static str {
        match self {
            Algorithm::Pareto => "pareto",
            Algorithm::Fes => "fes",
            Algorithm::Tfvs => "tfvs",
            Algorithm::Brute => "brute",
        }
    }

    fn solve(&self, inst: &DrpInstance) -> Result<Option<Route>> {
        match self {
            Algorithm::Pareto => pareto::solve(inst),
            Algorithm::Fes => fes::solve(inst),
            Algorithm::Tfvs => Ok(tfvs::solve(inst)?.witness),
            Algorithm::Brute => oracle::brute_force_solve(inst),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected pareto, fes, tfvs or brute)"))
    }
}
