//! Exhaustive reference implementations.
//!
//! Nothing here uses the worst-case table; robustness is decided by
//! enumerating every delay set over the arcs a route can use and running a
//! plain earliest-arrival pass under each one. Instance sizes are guarded
//! by explicit budgets.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{ArcId, DelayKind, DelaySet, DrpInstance, Route, StaticGraph, TemporalGraph, VertexId};
use crate::time::Time;
use crate::verifier::ArrivalVector;

/// Maximum number of delay sets the oracle will enumerate for one route.
pub const DELAY_SET_BUDGET: u64 = 10_000_000;

/// Maximum number of simple paths [`brute_force_solve`] will try.
pub const PATH_BUDGET: usize = 200_000;

/// Routes with at most this many hops have their starting-delay greedy
/// answer cross-checked against full arc-sequence enumeration.
const CROSS_CHECK_HOPS: usize = 5;
const CROSS_CHECK_SEQUENCES: u64 = 100_000;

/// Earliest arrival at the end of `r` under the delays in `d`, by taking
/// the earliest-arriving usable arc on every hop.
fn greedy_arrival(g: &TemporalGraph, r: &Route, d: &DelaySet) -> Time {
    let mut now = 0u64;
    for (v, w) in r.hops() {
        let next = g
            .pair_arcs(v, w)
            .iter()
            .map(|&id| d.delayed_times(g.arc(id), id))
            .filter(|&(depart, _)| depart >= now)
            .map(|(_, arrive)| arrive)
            .min();
        match next {
            Some(t) => now = t,
            None => return Time::Infinite,
        }
    }
    Time::Finite(now)
}

/// Earliest arrival over every arc sequence following `r`.
pub fn enumerated_arrival(g: &TemporalGraph, r: &Route, d: &DelaySet) -> Time {
    fn go(g: &TemporalGraph, hops: &[(VertexId, VertexId)], now: u64, d: &DelaySet) -> Time {
        let Some((&(v, w), rest)) = hops.split_first() else {
            return Time::Finite(now);
        };
        g.pair_arcs(v, w)
            .iter()
            .map(|&id| d.delayed_times(g.arc(id), id))
            .filter(|&(depart, _)| depart >= now)
            .map(|(_, arrive)| go(g, rest, arrive, d))
            .min()
            .unwrap_or(Time::Infinite)
    }
    let hops: Vec<_> = r.hops().collect();
    go(g, &hops, 0, d)
}

fn sequence_count(g: &TemporalGraph, r: &Route) -> u64 {
    r.hops()
        .map(|(v, w)| g.pair_arcs(v, w).len() as u64)
        .fold(1u64, |acc, k| acc.saturating_mul(k.max(1)))
}

/// Earliest delayed arrival time of `r` under `d`; `Infinite` if no delayed
/// temporal walk follows `r`.
///
/// For starting delays on short routes the greedy pass is compared with
/// exhaustive enumeration and the enumerated value wins on disagreement.
pub fn earliest_delayed_arrival(g: &TemporalGraph, r: &Route, d: &DelaySet) -> Time {
    let greedy = greedy_arrival(g, r, d);
    if d.kind == DelayKind::Starting
        && r.len() <= CROSS_CHECK_HOPS + 1
        && sequence_count(g, r) <= CROSS_CHECK_SEQUENCES
    {
        let exact = enumerated_arrival(g, r, d);
        debug_assert_eq!(greedy, exact, "greedy starting-delay arrival disagrees with enumeration");
        return exact;
    }
    greedy
}

/// Number of subsets of size at most `x` of an `m`-element set, saturating.
pub fn delay_set_count(m: usize, x: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for k in 0..=x.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((m - k) as u64) / (k as u64 + 1);
    }
    total
}

/// Worst-case arrival per budget `0..=x`: entry `y` is the maximum earliest
/// delayed arrival over all delay sets of size at most `y` drawn from the
/// arcs between consecutive route vertices.
pub fn brute_force_worst_case(
    g: &TemporalGraph,
    r: &Route,
    x: usize,
    delta: u64,
    kind: DelayKind,
) -> Result<ArrivalVector> {
    r.check_in(g)?;
    let relevant = r.relevant_arcs(g);
    let count = delay_set_count(relevant.len(), x);
    if count > DELAY_SET_BUDGET {
        return Err(Error::TooLarge(format!(
            "{count} delay sets over {} relevant arcs",
            relevant.len()
        )));
    }
    let mut worst = vec![Time::ZERO; x + 1];
    for size in 0..=x.min(relevant.len()) {
        for subset in relevant.iter().copied().combinations(size) {
            let arrival = earliest_delayed_arrival(g, r, &DelaySet::new(subset, kind, delta));
            for entry in worst.iter_mut().skip(size) {
                *entry = (*entry).max(arrival);
            }
        }
    }
    Ok(ArrivalVector::new(worst))
}

/// Robustness by exhaustive enumeration of delay sets.
pub fn brute_force_robust(
    g: &TemporalGraph,
    r: &Route,
    x: usize,
    delta: u64,
    kind: DelayKind,
) -> Result<bool> {
    r.check_in(g)?;
    let relevant = r.relevant_arcs(g);
    let count = delay_set_count(relevant.len(), x);
    if count > DELAY_SET_BUDGET {
        return Err(Error::TooLarge(format!(
            "{count} delay sets over {} relevant arcs",
            relevant.len()
        )));
    }
    // stops at the first breaking set
    for size in 0..=x.min(relevant.len()) {
        for subset in relevant.iter().copied().combinations(size) {
            if !earliest_delayed_arrival(g, r, &DelaySet::new(subset, kind, delta)).is_finite() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Shrinks a breaking traversal-delay set to an inclusion-minimal one.
///
/// Returns `None` if `d` does not break `r` in the first place.
pub fn minimal_breaking_set(g: &TemporalGraph, r: &Route, d: &DelaySet) -> Option<DelaySet> {
    if earliest_delayed_arrival(g, r, d).is_finite() {
        return None;
    }
    let mut current = d.clone();
    loop {
        let removable = current.arcs.iter().copied().find(|&arc| {
            let mut smaller = current.clone();
            smaller.arcs.remove(&arc);
            !earliest_delayed_arrival(g, r, &smaller).is_finite()
        });
        match removable {
            Some(arc) => {
                current.arcs.remove(&arc);
            }
            None => return Some(current),
        }
    }
}

/// All simple `(s, z)`-paths of `g` by plain depth-first search, neighbours
/// in ascending order. Errors once more than `limit` paths are found.
pub fn simple_paths(g: &StaticGraph, s: VertexId, z: VertexId, limit: usize) -> Result<Vec<Vec<VertexId>>> {
    fn go(
        g: &StaticGraph,
        z: VertexId,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
        limit: usize,
    ) -> Result<()> {
        let v = *path.last().expect("non-empty");
        if v == z {
            if out.len() >= limit {
                return Err(Error::TooLarge(format!("more than {limit} simple paths")));
            }
            out.push(path.clone());
            return Ok(());
        }
        for w in g.neighbors(v) {
            if !on_path[w] {
                on_path[w] = true;
                path.push(w);
                go(g, z, path, on_path, out, limit)?;
                path.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }
    let mut on_path = vec![false; g.vertex_count()];
    on_path[s] = true;
    let mut out = Vec::new();
    go(g, z, &mut vec![s], &mut on_path, &mut out, limit)?;
    Ok(out)
}

/// First robust simple `(s, z)`-path in depth-first order, checked with
/// [`brute_force_robust`] under traversal delays.
pub fn brute_force_solve(inst: &DrpInstance) -> Result<Option<Route>> {
    let paths = simple_paths(&inst.graph.underlying_graph(), inst.s, inst.z, PATH_BUDGET)?;
    for path in paths {
        let route = Route::new(path)?;
        if brute_force_robust(&inst.graph, &route, inst.x, inst.delta, DelayKind::Traversal)? {
            return Ok(Some(route));
        }
    }
    Ok(None)
}

/// Relevant arcs of `r`, exposed for tests that build their own delay sets.
pub fn relevant_arcs(g: &TemporalGraph, r: &Route) -> Vec<ArcId> {
    r.relevant_arcs(g)
}
