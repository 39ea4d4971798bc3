//! Exact search parameterized by a timed feedback vertex set.
//!
//! Removing a small set `X` of vertex appearances `(v, t)` turns the
//! underlying graph into a forest `F`. A route then consists of forest
//! paths glued together at anchors: vertices of `X` where the route enters
//! or leaves through an edge missing from `F`. The search guesses which
//! vertices are anchors, how each one is entered and left, and their order.
//! Between consecutive anchors the forest leaves only a handful of segment
//! choices, and the worst-case arrival profile at each anchor summarizes
//! the prefix.
//!
//! Profiles are rounded up to the next relevant time at the anchor. The
//! relevant set always contains the anchor's own departure times, so the
//! rounding never changes what a later segment can do.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DrpInstance, Route, StaticGraph, TemporalGraph, VertexId};
use crate::pareto::round_up;
use crate::time::Time;
use crate::verifier::{worst_case_table_from, ArrivalVector};

/// Upper bound on `|X|` tried by [`compute_tfvs`].
pub const MAX_TFVS_SIZE: usize = 6;
/// Upper bound on branching nodes explored by [`compute_tfvs`].
pub const TFVS_NODE_BUDGET: usize = 50_000;
/// Upper bound on segment extensions tried by [`solve_with`].
pub const TFVS_SEARCH_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexAppearance {
    pub vertex: VertexId,
    pub t: u64,
}

impl VertexAppearance {
    pub fn new(vertex: VertexId, t: u64) -> Self {
        VertexAppearance { vertex, t }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedFvs {
    pub appearances: BTreeSet<VertexAppearance>,
}

impl TimedFvs {
    pub fn new(appearances: impl IntoIterator<Item = VertexAppearance>) -> Self {
        TimedFvs {
            appearances: appearances.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.appearances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.appearances.is_empty()
    }

    pub fn contains(&self, v: VertexId, t: u64) -> bool {
        self.appearances.contains(&VertexAppearance::new(v, t))
    }

    /// Vertices with at least one appearance in the set.
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.appearances.iter().map(|a| a.vertex).collect()
    }

    /// Whether removing the set leaves an acyclic underlying graph.
    pub fn is_feedback_set_of(&self, g: &TemporalGraph) -> bool {
        remove_appearances(g, self).underlying_graph().is_forest()
    }
}

/// Drops every arc with an endpoint appearance in `x`.
pub fn remove_appearances(g: &TemporalGraph, x: &TimedFvs) -> TemporalGraph {
    g.filter_arcs(|a| !x.contains(a.src, a.t) && !x.contains(a.dst, a.t))
}

/// The vertices of a cycle in the underlying graph, if there is one.
fn find_cycle(u: &StaticGraph) -> Option<Vec<VertexId>> {
    let mut forest = StaticGraph::empty(u.vertex_count());
    let mut parent: Vec<usize> = (0..u.vertex_count()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (a, b) in u.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return forest.path(a, b);
        }
        parent[ra] = rb;
        forest.add_edge(a, b);
    }
    None
}

/// A minimum timed feedback vertex set, by iterative deepening over the
/// appearances that can break some arc of a remaining cycle.
pub fn compute_tfvs(g: &TemporalGraph) -> Result<TimedFvs> {
    compute_tfvs_at_most(g, MAX_TFVS_SIZE)?.ok_or(Error::TfvsBudgetExceeded)
}

/// Like [`compute_tfvs`], but gives up with `None` once every set of at
/// most `max_size` appearances has been ruled out.
pub fn compute_tfvs_at_most(g: &TemporalGraph, max_size: usize) -> Result<Option<TimedFvs>> {
    fn branch(g: &TemporalGraph, x: &mut TimedFvs, k: usize, nodes: &mut usize) -> Result<bool> {
        *nodes += 1;
        if *nodes > TFVS_NODE_BUDGET {
            return Err(Error::TfvsBudgetExceeded);
        }
        let rest = remove_appearances(g, x);
        let Some(cycle) = find_cycle(&rest.underlying_graph()) else {
            return Ok(true);
        };
        if x.len() == k {
            return Ok(false);
        }
        let mut options = BTreeSet::new();
        for i in 0..cycle.len() {
            let (p, q) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            for &id in rest.pair_arcs(p, q).iter().chain(rest.pair_arcs(q, p)) {
                let arc = rest.arc(id);
                options.insert(VertexAppearance::new(arc.src, arc.t));
                options.insert(VertexAppearance::new(arc.dst, arc.t));
            }
        }
        for app in options {
            x.appearances.insert(app);
            if branch(g, x, k, nodes)? {
                return Ok(true);
            }
            x.appearances.remove(&app);
        }
        Ok(false)
    }
    let mut nodes = 0;
    for k in 0..=max_size {
        let mut x = TimedFvs::default();
        if branch(g, &mut x, k, &mut nodes)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// How a route enters or leaves an anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Forest,
    Feedback,
    Any,
}

impl EdgeKind {
    fn allows_forest(self) -> bool {
        self != EdgeKind::Feedback
    }
    fn allows_feedback(self) -> bool {
        self != EdgeKind::Forest
    }
}

/// Anchor classes. `Free` vertices may still appear inside forest segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnchorClass {
    Free,
    ForestInFeedbackOut,
    FeedbackInForestOut,
    FeedbackBoth,
}

impl AnchorClass {
    const ALL: [AnchorClass; 4] = [
        AnchorClass::Free,
        AnchorClass::ForestInFeedbackOut,
        AnchorClass::FeedbackInForestOut,
        AnchorClass::FeedbackBoth,
    ];

    fn kinds(self) -> (EdgeKind, EdgeKind) {
        match self {
            AnchorClass::Free => (EdgeKind::Any, EdgeKind::Any),
            AnchorClass::ForestInFeedbackOut => (EdgeKind::Forest, EdgeKind::Feedback),
            AnchorClass::FeedbackInForestOut => (EdgeKind::Feedback, EdgeKind::Forest),
            AnchorClass::FeedbackBoth => (EdgeKind::Feedback, EdgeKind::Feedback),
        }
    }
}

/// Rounded worst-case arrival vector at an anchor, budgets `0..=x`.
pub type DelayProfile = ArrivalVector;

/// Smallest relevant time at or above each entry; exact when `relevant` is `None`.
fn round_profile(v: &ArrivalVector, relevant: Option<&[u64]>) -> ArrivalVector {
    match relevant {
        Some(times) => round_up(v, times),
        None => v.clone(),
    }
}

/// Whether `prof_z` is exactly the rounded worst-case profile at the end
/// of `r` when its start is reached according to `prof_s`.
///
/// Entry `j` of the bound is the maximum over `i <= j` of the worst-case
/// arrival when starting at `prof_s[i]` with `j - i` delays left, each
/// computed with its own table.
pub fn check_route(
    g: &TemporalGraph,
    r: &Route,
    prof_s: &DelayProfile,
    prof_z: &DelayProfile,
    delta: u64,
    relevant: Option<&[u64]>,
) -> Result<bool> {
    if prof_s.budget() != prof_z.budget() {
        return Err(Error::LengthMismatch(prof_s.times().len(), prof_z.times().len()));
    }
    let x = prof_s.budget();
    let bound: Vec<Time> = (0..=x)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let start = ArrivalVector::constant(prof_s.get(i), j - i);
                    worst_case_table_from(g, r, start, delta).last().get(j - i)
                })
                .max()
                .expect("non-empty")
        })
        .collect();
    Ok(round_profile(&ArrivalVector::new(bound), relevant) == *prof_z)
}

/// Precomputed forest and feedback neighbourhoods of `G - X`.
struct Context<'a> {
    g: &'a TemporalGraph,
    forest: StaticGraph,
    fb_out: Vec<Vec<VertexId>>,
    fb_in: Vec<Vec<VertexId>>,
    hat_times: Vec<u64>,
}

impl<'a> Context<'a> {
    fn new(g: &'a TemporalGraph, x: &TimedFvs, delta: u64) -> Self {
        let forest = remove_appearances(g, x).underlying_graph();
        debug_assert!(forest.is_forest(), "segments need unique forest paths");
        let n = g.vertex_count();
        let mut fb_out = vec![Vec::new(); n];
        let mut fb_in = vec![Vec::new(); n];
        for (v, out) in fb_out.iter_mut().enumerate() {
            for &w in g.successors(v) {
                if v != w && !forest.has_edge(v, w) {
                    out.push(w);
                    fb_in[w].push(v);
                }
            }
        }
        for list in fb_in.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let mut hat_times: Vec<u64> = x
            .appearances
            .iter()
            .flat_map(|a| [a.t, a.t.saturating_add(delta)])
            .collect();
        hat_times.sort_unstable();
        hat_times.dedup();
        Context {
            g,
            forest,
            fb_out,
            fb_in,
            hat_times,
        }
    }

    /// Relevant rounding times at an anchor: the guessed times plus its departures.
    fn relevant(&self, v: VertexId) -> Vec<u64> {
        let mut times: Vec<u64> = self.hat_times.iter().chain(self.g.departures(v)).copied().collect();
        times.sort_unstable();
        times.dedup();
        times
    }

    fn has_hop(&self, v: VertexId, w: VertexId) -> bool {
        !self.g.pair_arcs(v, w).is_empty()
    }

    /// Vertex sequences from `a` to `b` leaving `a` as `out` and entering
    /// `b` as `into`, with all interior hops inside the forest.
    fn segments(&self, a: VertexId, out: EdgeKind, b: VertexId, into: EdgeKind) -> Vec<Vec<VertexId>> {
        let mut starts: Vec<(Vec<VertexId>, VertexId)> = Vec::new();
        if out.allows_forest() {
            starts.push((vec![], a));
        }
        if out.allows_feedback() {
            starts.extend(self.fb_out[a].iter().map(|&u| (vec![a], u)));
        }
        let mut ends: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
        if into.allows_forest() {
            ends.push((b, vec![]));
        }
        if into.allows_feedback() {
            ends.extend(self.fb_in[b].iter().map(|&u| (u, vec![b])));
        }
        let mut out_set = BTreeSet::new();
        if out.allows_feedback() && into.allows_feedback() && self.fb_out[a].contains(&b) {
            out_set.insert(vec![a, b]);
        }
        for (prefix, from) in &starts {
            for (to, suffix) in &ends {
                let Some(middle) = self.forest.path(*from, *to) else {
                    continue;
                };
                let seq: Vec<VertexId> = prefix.iter().chain(&middle).chain(suffix).copied().collect();
                if seq.len() < 2 || !seq.iter().all_unique() {
                    continue;
                }
                if seq.windows(2).all(|h| self.has_hop(h[0], h[1])) {
                    out_set.insert(seq);
                }
            }
        }
        out_set.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfvsOutcome {
    pub robust: bool,
    /// Present exactly when `robust` holds.
    pub witness: Option<Route>,
    /// The feedback set the search ran with.
    pub tfvs: TimedFvs,
}

/// Decides the instance, computing a minimum timed feedback vertex set.
pub fn solve(inst: &DrpInstance) -> Result<TfvsOutcome> {
    let x = compute_tfvs(&inst.graph)?;
    solve_with(inst, &x)
}

/// Decides the instance using the caller's timed feedback vertex set.
pub fn solve_with(inst: &DrpInstance, x_set: &TimedFvs) -> Result<TfvsOutcome> {
    let g = &inst.graph;
    if !x_set.is_feedback_set_of(g) {
        return Err(Error::NotATimedFeedbackVertexSet);
    }
    let (s, z, budget, delta) = (inst.s, inst.z, inst.x, inst.delta);
    let done = |witness: Option<Route>| TfvsOutcome {
        robust: witness.is_some(),
        witness,
        tfvs: x_set.clone(),
    };
    if s == z {
        return Ok(done(Some(Route::single(s))));
    }
    let ctx = Context::new(g, x_set, delta);
    let mut steps = 0usize;
    let candidates: Vec<VertexId> = x_set.vertices().into_iter().filter(|&v| v != s && v != z).collect();

    for code in 0..4usize.pow(candidates.len() as u32) {
        let anchored: Vec<(VertexId, AnchorClass)> = candidates
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, AnchorClass::ALL[code / 4usize.pow(i as u32) % 4]))
            .filter(|&(_, c)| c != AnchorClass::Free)
            .collect();
        let k = anchored.len();
        for order in anchored.into_iter().permutations(k) {
            let mut anchors = vec![(s, EdgeKind::Any, EdgeKind::Any)];
            anchors.extend(order.iter().map(|&(v, c)| {
                let (i, o) = c.kinds();
                (v, i, o)
            }));
            anchors.push((z, EdgeKind::Any, EdgeKind::Any));
            if let Some(route) = search_order(&ctx, &anchors, budget, delta, &mut steps)? {
                debug_assert!(crate::verifier::is_delay_robust(g, &route, budget, delta).unwrap());
                return Ok(done(Some(route)));
            }
        }
    }
    Ok(done(None))
}

/// Stitches segments along a fixed anchor order, carrying rounded profiles.
fn search_order(
    ctx: &Context<'_>,
    anchors: &[(VertexId, EdgeKind, EdgeKind)],
    x: usize,
    delta: u64,
    steps: &mut usize,
) -> Result<Option<Route>> {
    let relevant: Vec<Option<Vec<u64>>> = anchors
        .iter()
        .enumerate()
        .map(|(i, &(v, _, _))| (i + 1 < anchors.len()).then(|| ctx.relevant(v)))
        .collect();
    let start = round_profile(&ArrivalVector::zeros(x), relevant[0].as_deref());
    let mut seen = HashSet::new();
    let mut route = vec![anchors[0].0];
    let anchor_set: BTreeSet<VertexId> = anchors.iter().map(|a| a.0).collect();
    if extend(ctx, anchors, &relevant, &anchor_set, 0, start, &mut route, &mut seen, delta, steps)? {
        Ok(Some(Route::new(route).expect("segments are vertex-disjoint")))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    ctx: &Context<'_>,
    anchors: &[(VertexId, EdgeKind, EdgeKind)],
    relevant: &[Option<Vec<u64>>],
    anchor_set: &BTreeSet<VertexId>,
    i: usize,
    profile: DelayProfile,
    route: &mut Vec<VertexId>,
    seen: &mut HashSet<(usize, DelayProfile, Vec<VertexId>)>,
    delta: u64,
    steps: &mut usize,
) -> Result<bool> {
    if i + 1 == anchors.len() {
        return Ok(true);
    }
    *steps += 1;
    if *steps > TFVS_SEARCH_BUDGET {
        return Err(Error::TooLarge(format!("anchor search exceeded {TFVS_SEARCH_BUDGET} steps")));
    }
    let mut used = route.clone();
    used.sort_unstable();
    if !seen.insert((i, profile.clone(), used)) {
        return Ok(false);
    }
    let (a, _, out) = anchors[i];
    let (b, into, _) = anchors[i + 1];
    for seg in ctx.segments(a, out, b, into) {
        let interior = &seg[1..seg.len() - 1];
        if interior.iter().any(|v| route.contains(v) || anchor_set.contains(v)) {
            continue;
        }
        let seg_route = Route::new(seg.clone()).expect("segments are simple");
        let raw = worst_case_table_from(ctx.g, &seg_route, profile.clone(), delta).last().clone();
        let next = round_profile(&raw, relevant[i + 1].as_deref());
        if !next.is_robust() {
            continue;
        }
        debug_assert!(check_route(ctx.g, &seg_route, &profile, &next, delta, relevant[i + 1].as_deref()).unwrap());
        let mark = route.len();
        route.extend_from_slice(&seg[1..]);
        if extend(ctx, anchors, relevant, anchor_set, i + 1, next, route, seen, delta, steps)? {
            return Ok(true);
        }
        route.truncate(mark);
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TimeArc;
    use crate::testutil::five_stop_line;

    fn fin(v: &[u64]) -> ArrivalVector {
        ArrivalVector::new(v.iter().map(|&t| Time::Finite(t)).collect())
    }

    fn triangle() -> TemporalGraph {
        TemporalGraph::new(
            3,
            vec![TimeArc::new(0, 1, 1, 1), TimeArc::new(1, 2, 3, 1), TimeArc::new(2, 0, 5, 1)],
        )
        .unwrap()
    }

    #[test]
    fn removal_examples() {
        let g = five_stop_line();
        assert_eq!(remove_appearances(&g, &TimedFvs::default()), g);
        let all_b = TimedFvs::new([5, 9, 4, 8].map(|t| VertexAppearance::new(2, t)));
        let h = remove_appearances(&g, &all_b);
        assert_eq!(h.underlying_graph().degree(2), 0);
        let t = triangle();
        assert!(!t.underlying_graph().is_forest());
        let x = TimedFvs::new([VertexAppearance::new(1, 3)]);
        assert!(remove_appearances(&t, &x).underlying_graph().is_forest());
    }

    #[test]
    fn minimum_sets() {
        assert!(compute_tfvs(&five_stop_line()).unwrap().is_empty());
        assert_eq!(compute_tfvs(&triangle()).unwrap().len(), 1);
        // two triangles sharing vertex 0, with arcs at matching times
        let g = TemporalGraph::new(
            5,
            vec![
                TimeArc::new(0, 1, 1, 0),
                TimeArc::new(1, 2, 2, 0),
                TimeArc::new(2, 0, 3, 0),
                TimeArc::new(0, 3, 1, 0),
                TimeArc::new(3, 4, 2, 0),
                TimeArc::new(4, 0, 3, 0),
            ],
        )
        .unwrap();
        let x = compute_tfvs(&g).unwrap();
        assert_eq!(x.len(), 1);
        assert!(x.is_feedback_set_of(&g));
    }

    #[test]
    fn check_route_single_hop() {
        let g = TemporalGraph::new(2, vec![TimeArc::new(0, 1, 2, 1)]).unwrap();
        let r = Route::new(vec![0, 1]).unwrap();
        let ps = fin(&[0, 0]);
        assert!(check_route(&g, &r, &ps, &fin(&[3, 5]), 2, None).unwrap());
        assert!(!check_route(&g, &r, &ps, &fin(&[2, 5]), 2, None).unwrap());
        // rounded to relevant times {4, 9}
        assert!(check_route(&g, &r, &ps, &fin(&[4, 9]), 2, Some(&[4, 9])).unwrap());
        // starting too late
        let late = ArrivalVector::new(vec![Time::Finite(0), Time::Finite(3)]);
        let inf = ArrivalVector::new(vec![Time::Finite(3), Time::Infinite]);
        assert!(check_route(&g, &r, &late, &inf, 2, None).unwrap());
    }

    #[test]
    fn check_route_zero_budget_is_earliest_arrival() {
        let g = five_stop_line();
        let r = Route::new(vec![0, 1, 2, 3, 4]).unwrap();
        assert!(check_route(&g, &r, &fin(&[0]), &fin(&[12]), 9, None).unwrap());
        assert!(check_route(&g, &r, &fin(&[4]), &ArrivalVector::new(vec![Time::Infinite]), 9, None).unwrap());
    }

    #[test]
    fn five_stop_line_answers() {
        let g = five_stop_line();
        let yes = solve(&DrpInstance::new(g.clone(), 0, 4, 1, 3).unwrap()).unwrap();
        assert!(yes.robust);
        assert_eq!(yes.witness.unwrap().vertices(), &[0, 1, 2, 3, 4]);
        assert!(yes.tfvs.is_empty());
        let no = solve(&DrpInstance::new(g, 0, 4, 1, 5).unwrap()).unwrap();
        assert!(!no.robust && no.witness.is_none());
    }

    #[test]
    fn rejects_non_feedback_set() {
        let inst = DrpInstance::new(triangle(), 0, 2, 0, 1).unwrap();
        assert_eq!(solve_with(&inst, &TimedFvs::default()), Err(Error::NotATimedFeedbackVertexSet));
    }

    #[test]
    fn uses_feedback_hop() {
        // direct hop 0 -> 2 is removed by X but still usable by the route
        let g = TemporalGraph::new(
            3,
            vec![
                TimeArc::new(0, 1, 1, 1),
                TimeArc::new(1, 2, 0, 1),
                TimeArc::new(2, 0, 5, 1),
                TimeArc::new(0, 2, 0, 1),
            ],
        )
        .unwrap();
        let x = TimedFvs::new([VertexAppearance::new(2, 0), VertexAppearance::new(0, 5)]);
        assert!(x.is_feedback_set_of(&g));
        let out = solve_with(&DrpInstance::new(g, 0, 2, 0, 1).unwrap(), &x).unwrap();
        assert_eq!(out.witness.unwrap().vertices(), &[0, 2]);
    }
}
