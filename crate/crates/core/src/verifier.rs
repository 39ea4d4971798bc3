//! Worst-case arrival tables for routes under up to `x` traversal delays.
//!
//! For a route `v_1 .. v_k` the table row for prefix `v_1 .. v_j` holds, per
//! delay budget `y`, the latest earliest-arrival time an adversary can force
//! by delaying at most `y` arcs. Rows are built hop by hop: a budget `y` is
//! split between the prefix (`y'`) and the current hop (`y - y'`), and the
//! hop's contribution is the arrival when the first `y - y'` available arcs
//! are delayed.
//!
//! The answer holds for starting delays as well; the oracle tests check the
//! two delay kinds against each other.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{ArcId, Route, TemporalGraph, VertexId};
use crate::time::Time;

/// Worst-case arrival time per delay budget `0..=x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrivalVector(Vec<Time>);

impl ArrivalVector {
    pub fn new(times: Vec<Time>) -> Self {
        ArrivalVector(times)
    }

    pub fn zeros(x: usize) -> Self {
        ArrivalVector(vec![Time::ZERO; x + 1])
    }

    pub fn constant(t: Time, x: usize) -> Self {
        ArrivalVector(vec![t; x + 1])
    }

    pub fn times(&self) -> &[Time] {
        &self.0
    }

    /// Largest budget, `x`.
    pub fn budget(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, y: usize) -> Time {
        self.0[y]
    }

    /// Finite at the full budget.
    pub fn is_robust(&self) -> bool {
        self.0.last().is_some_and(|t| t.is_finite())
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Componentwise `<=`.
    pub fn dominates(&self, other: &ArrivalVector) -> Result<bool> {
        if self.0.len() != other.0.len() {
            return Err(Error::LengthMismatch(self.0.len(), other.0.len()));
        }
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    pub fn map(&self, f: impl FnMut(&Time) -> Time) -> ArrivalVector {
        ArrivalVector(self.0.iter().map(f).collect())
    }
}

impl fmt::Display for ArrivalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// One [`ArrivalVector`] per route prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCaseTable {
    pub rows: Vec<ArrivalVector>,
    pub x: usize,
    pub delta: u64,
}

impl WorstCaseTable {
    pub fn last(&self) -> &ArrivalVector {
        self.rows.last().expect("table has at least one row")
    }

    pub fn is_robust(&self) -> bool {
        self.last().is_robust()
    }

    /// First prefix (as a 1-based vertex count) that breaks, with the
    /// smallest budget at which it does.
    pub fn first_break(&self) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(j, row)| {
            row.times()
                .iter()
                .position(|t| !t.is_finite())
                .map(|y| (j + 1, y))
        })
    }
}

/// Arcs `v -> w` departing at `t` or later, in arrival order.
pub fn available_arcs(g: &TemporalGraph, v: VertexId, w: VertexId, t: u64) -> Vec<ArcId> {
    g.pair_arcs(v, w)
        .iter()
        .copied()
        .filter(|&id| g.arc(id).t >= t)
        .collect()
}

/// Latest arrival at `w` when leaving `v` no earlier than `t` and up to `y`
/// of the available arcs are delayed by `delta`.
///
/// With fewer than `y + 1` available arcs only the delayed first arc can
/// be relied upon.
pub fn worst_case_step(
    g: &TemporalGraph,
    v: VertexId,
    w: VertexId,
    t: Time,
    y: usize,
    delta: u64,
) -> Time {
    hop_arrival(g, g.pair_arcs(v, w), t, y, delta)
}

/// [`worst_case_step`] over a pre-extracted, arrival-sorted arc list.
fn hop_arrival(g: &TemporalGraph, arcs: &[ArcId], t: Time, y: usize, delta: u64) -> Time {
    let Time::Finite(t) = t else {
        return Time::Infinite;
    };
    let mut available = arcs.iter().map(|&id| g.arc(id)).filter(|a| a.t >= t);
    let Some(first) = available.next() else {
        return Time::Infinite;
    };
    if y == 0 {
        return Time::Finite(first.arrival());
    }
    let delayed_first = Time::Finite(first.arrival()).plus(delta);
    match available.nth(y - 1) {
        Some(a) => delayed_first.min(Time::Finite(a.arrival())),
        None => delayed_first,
    }
}

/// One DP step: the arrival vector at `w` given the vector at `v`.
pub fn extend_vector(
    g: &TemporalGraph,
    v: VertexId,
    w: VertexId,
    prev: &ArrivalVector,
    delta: u64,
) -> ArrivalVector {
    step_row(g, g.pair_arcs(v, w), prev, delta)
}

fn step_row(g: &TemporalGraph, arcs: &[ArcId], prev: &ArrivalVector, delta: u64) -> ArrivalVector {
    let times = (0..=prev.budget())
        .map(|y| {
            (0..=y)
                .map(|prefix| hop_arrival(g, arcs, prev.get(prefix), y - prefix, delta))
                .max()
                .expect("non-empty range")
        })
        .collect();
    ArrivalVector(times)
}

/// Worst-case table of `r` starting at `s` at time 0.
pub fn worst_case_table(g: &TemporalGraph, r: &Route, x: usize, delta: u64) -> WorstCaseTable {
    worst_case_table_from(g, r, ArrivalVector::zeros(x), delta)
}

/// Worst-case table of `r` where the first row is `start` instead of zeros.
///
/// `start[y]` is read as the worst-case time at which the route's first
/// vertex is reached with `y` delays already spent.
pub fn worst_case_table_from(
    g: &TemporalGraph,
    r: &Route,
    start: ArrivalVector,
    delta: u64,
) -> WorstCaseTable {
    let x = start.budget();
    let mut rows = Vec::with_capacity(r.len());
    rows.push(start);
    for (v, w) in r.hops() {
        let prev = rows.last().expect("non-empty");
        let next = step_row(g, g.pair_arcs(v, w), prev, delta);
        rows.push(next);
    }
    WorstCaseTable { rows, x, delta }
}

/// Whether `r` survives every set of at most `x` delays of size `delta`.
pub fn is_delay_robust(g: &TemporalGraph, r: &Route, x: usize, delta: u64) -> Result<bool> {
    r.check_in(g)?;
    Ok(worst_case_table(g, r, x, delta).is_robust())
}
