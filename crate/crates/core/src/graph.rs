//! Temporal graphs, routes, delay sets and the underlying static graph.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::MAX_TIME;

pub type VertexId = usize;

/// Index of an arc in [`TemporalGraph::arcs`].
pub type ArcId = usize;

/// A scheduled connection from `src` to `dst`, departing at `t` and taking
/// `lambda` time units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeArc {
    pub src: VertexId,
    pub dst: VertexId,
    pub t: u64,
    pub lambda: u64,
}

impl TimeArc {
    pub fn new(src: VertexId, dst: VertexId, t: u64, lambda: u64) -> Self {
        TimeArc { src, dst, t, lambda }
    }

    pub fn arrival(&self) -> u64 {
        self.t + self.lambda
    }
}

/// Immutable temporal graph with per-pair and per-vertex indices.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    vertex_count: usize,
    arcs: Vec<TimeArc>,
    /// Arcs per ordered pair, sorted by arrival, then time label, then input order.
    pair_index: HashMap<(VertexId, VertexId), Vec<ArcId>>,
    /// Sorted, deduplicated departure times per vertex.
    departures: Vec<Vec<u64>>,
    /// Sorted, deduplicated heads of outgoing arcs per vertex.
    successors: Vec<Vec<VertexId>>,
    max_time: u64,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.arcs == other.arcs
    }
}

impl Eq for TemporalGraph {}

impl TemporalGraph {
    pub fn new(vertex_count: usize, arcs: Vec<TimeArc>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::NoVertices);
        }
        for (index, arc) in arcs.iter().enumerate() {
            for vertex in [arc.src, arc.dst] {
                if vertex >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        index,
                        vertex,
                        vertex_count,
                    });
                }
            }
            if arc.t > MAX_TIME || arc.lambda > MAX_TIME {
                return Err(Error::TimeOutOfRange { index });
            }
        }

        let mut pair_index: HashMap<(VertexId, VertexId), Vec<ArcId>> = HashMap::new();
        let mut departures = vec![Vec::new(); vertex_count];
        let mut successors = vec![Vec::new(); vertex_count];
        for (id, arc) in arcs.iter().enumerate() {
            pair_index.entry((arc.src, arc.dst)).or_default().push(id);
            departures[arc.src].push(arc.t);
            successors[arc.src].push(arc.dst);
        }
        for ids in pair_index.values_mut() {
            ids.sort_by_key(|&id| (arcs[id].arrival(), arcs[id].t, id));
        }
        for list in departures.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        for list in successors.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let max_time = arcs.iter().map(|a| a.t).max().unwrap_or(0);

        Ok(TemporalGraph {
            vertex_count,
            arcs,
            pair_index,
            departures,
            successors,
            max_time,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[TimeArc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &TimeArc {
        &self.arcs[id]
    }

    /// Maximum time label `T` (0 without arcs).
    pub fn max_time(&self) -> u64 {
        self.max_time
    }

    /// Arcs from `v` to `w` in arrival order.
    pub fn pair_arcs(&self, v: VertexId, w: VertexId) -> &[ArcId] {
        self.pair_index
            .get(&(v, w))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Departure times `τ_v^+` of `v`, sorted ascending.
    pub fn departures(&self, v: VertexId) -> &[u64] {
        &self.departures[v]
    }

    /// Vertices reachable from `v` by a single arc.
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.successors[v]
    }

    pub fn check_vertex(&self, vertex: VertexId) -> Result<()> {
        if vertex < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// Static undirected graph on the same vertex set; self-loops dropped.
    pub fn underlying_graph(&self) -> StaticGraph {
        let mut g = StaticGraph::empty(self.vertex_count);
        for arc in &self.arcs {
            g.add_edge(arc.src, arc.dst);
        }
        g
    }

    /// Subgraph keeping only the arcs for which `keep` holds. Arc order is preserved.
    pub fn filter_arcs(&self, mut keep: impl FnMut(&TimeArc) -> bool) -> TemporalGraph {
        let arcs = self.arcs.iter().copied().filter(|a| keep(a)).collect();
        TemporalGraph::new(self.vertex_count, arcs).expect("subgraph of a valid graph")
    }
}

/// A duplicate-free vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Route(Vec<VertexId>);

impl Route {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyRoute);
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::RepeatedVertex(v));
            }
        }
        Ok(Route(vertices))
    }

    pub fn single(v: VertexId) -> Self {
        Route(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> VertexId {
        self.0[0]
    }

    pub fn target(&self) -> VertexId {
        self.0[self.0.len() - 1]
    }

    /// Consecutive vertex pairs.
    pub fn hops(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    /// Arcs connecting consecutive route vertices in route direction.
    pub fn relevant_arcs(&self, g: &TemporalGraph) -> Vec<ArcId> {
        self.hops()
            .flat_map(|(v, w)| g.pair_arcs(v, w).iter().copied())
            .collect()
    }

    pub fn check_in(&self, g: &TemporalGraph) -> Result<()> {
        self.0.iter().try_for_each(|&v| g.check_vertex(v))
    }
}

impl TryFrom<Vec<VertexId>> for Route {
    type Error = Error;
    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Route::new(v)
    }
}

impl From<Route> for Vec<VertexId> {
    fn from(r: Route) -> Self {
        r.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayKind {
    /// Delay shifts the departure of an arc.
    Starting,
    /// Delay lengthens the traversal of an arc.
    Traversal,
}

/// A set of delayed arcs, all delayed by the same amount.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaySet {
    pub arcs: BTreeSet<ArcId>,
    pub kind: DelayKind,
    pub delta: u64,
}

impl DelaySet {
    pub fn new(arcs: impl IntoIterator<Item = ArcId>, kind: DelayKind, delta: u64) -> Self {
        DelaySet {
            arcs: arcs.into_iter().collect(),
            kind,
            delta,
        }
    }

    pub fn none(kind: DelayKind) -> Self {
        DelaySet::new([], kind, 0)
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.arcs.contains(&arc)
    }

    /// `(departure, arrival)` of an arc after applying this delay set.
    pub fn delayed_times(&self, arc: &TimeArc, id: ArcId) -> (u64, u64) {
        let d = if self.contains(id) { self.delta } else { 0 };
        match self.kind {
            DelayKind::Starting => (arc.t + d, arc.t + d + arc.lambda),
            DelayKind::Traversal => (arc.t, arc.t + arc.lambda + d),
        }
    }
}

/// Whether the arc sequence `walk` is a temporal walk once `d` is applied.
///
/// An empty walk is a single-vertex walk and always valid.
pub fn is_delayed_walk(g: &TemporalGraph, walk: &[ArcId], d: &DelaySet) -> Result<bool> {
    if let Some(&bad) = walk.iter().find(|&&id| id >= g.arc_count()) {
        return Err(Error::UnknownArc(bad));
    }
    for (position, pair) in walk.windows(2).enumerate() {
        if g.arc(pair[0]).dst != g.arc(pair[1]).src {
            return Err(Error::NonContiguousWalk {
                position: position + 1,
            });
        }
    }
    Ok(walk.windows(2).all(|pair| {
        let (_, arrive) = d.delayed_times(g.arc(pair[0]), pair[0]);
        let (depart, _) = d.delayed_times(g.arc(pair[1]), pair[1]);
        arrive <= depart
    }))
}

/// Simple undirected graph. Vertices removed by pruning keep their id and
/// simply have no incident edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticGraph {
    adjacency: Vec<BTreeSet<VertexId>>,
}

impl StaticGraph {
    pub fn empty(vertex_count: usize) -> Self {
        StaticGraph {
            adjacency: vec![BTreeSet::new(); vertex_count],
        }
    }

    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        let mut g = StaticGraph::empty(vertex_count);
        for (u, w) in edges {
            g.add_edge(u, w);
        }
        g
    }

    /// Adds `{u, w}`; self-loops and duplicates are ignored.
    pub fn add_edge(&mut self, u: VertexId, w: VertexId) {
        if u != w {
            self.adjacency[u].insert(w);
            self.adjacency[w].insert(u);
        }
    }

    pub fn remove_edge(&mut self, u: VertexId, w: VertexId) {
        self.adjacency[u].remove(&w);
        self.adjacency[w].remove(&u);
    }

    pub fn isolate(&mut self, v: VertexId) {
        let neighbors = std::mem::take(&mut self.adjacency[v]);
        for w in neighbors {
            self.adjacency[w].remove(&v);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, u: VertexId, w: VertexId) -> bool {
        self.adjacency[u].contains(&w)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Edges as `(u, w)` with `u < w`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&w| (u, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Connected component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_forest(&self) -> bool {
        let (_, c) = self.components();
        self.edge_count() + c == self.vertex_count()
    }

    /// The unique path from `from` to `to` if the graph is a forest, or
    /// some BFS path otherwise. `None` when disconnected.
    pub fn path(&self, from: VertexId, to: VertexId) -> Option<Vec<VertexId>> {
        let mut parent = vec![usize::MAX; self.vertex_count()];
        parent[from] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(v) {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// A Delay-Robust Path query: is there an `x`-delay-robust route from `s` to `z`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrpInstance {
    pub graph: TemporalGraph,
    pub s: VertexId,
    pub z: VertexId,
    pub x: usize,
    pub delta: u64,
}

impl DrpInstance {
    pub fn new(graph: TemporalGraph, s: VertexId, z: VertexId, x: usize, delta: u64) -> Result<Self> {
        graph.check_vertex(s)?;
        graph.check_vertex(z)?;
        if delta > crate::time::MAX_TIME {
            return Err(Error::TimeOutOfRange { index: 0 });
        }
        Ok(DrpInstance {
            graph,
            s,
            z,
            x,
            delta,
        })
    }
}
