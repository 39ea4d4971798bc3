//! Exact search parameterized by the feedback edge number.
//!
//! After stripping degree-one vertices, every simple `(s, z)`-path is a
//! sequence of feedback edges and maximal degree-two paths between branch
//! vertices. There are few of those when the graph is nearly a tree, so all
//! candidates are enumerated and each one is checked with the verifier.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{DrpInstance, Route, StaticGraph, VertexId};
use crate::verifier::is_delay_robust;

/// Repeatedly isolates vertices of degree one, except `s` and `z`.
pub fn prune_degree_one(g: &StaticGraph, s: VertexId, z: VertexId) -> StaticGraph {
    let mut g = g.clone();
    let mut stack: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).collect();
    while let Some(v) = stack.pop() {
        if v == s || v == z || g.degree(v) != 1 {
            continue;
        }
        let w = g.neighbors(v).next().expect("degree one");
        g.isolate(v);
        if g.degree(w) == 1 {
            stack.push(w);
        }
    }
    g
}

/// Edges outside a spanning forest chosen greedily in edge order.
pub fn minimum_feedback_edge_set(g: &StaticGraph) -> BTreeSet<(VertexId, VertexId)> {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut feedback = BTreeSet::new();
    for (u, w) in g.edges() {
        let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
        if ru == rw {
            feedback.insert((u, w));
        } else {
            parent[ru] = rw;
        }
    }
    feedback
}

/// `|E| - |V| + c` of a static graph.
pub fn feedback_edge_number(g: &StaticGraph) -> usize {
    let (_, c) = g.components();
    g.edge_count() + c - g.vertex_count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub branch_vertices: BTreeSet<VertexId>,
    /// Paths of the forest `G - F` between branch vertices whose interior
    /// vertices all have degree two.
    pub maximal_paths: Vec<Vec<VertexId>>,
    pub feedback_edges: BTreeSet<(VertexId, VertexId)>,
}

impl PathDecomposition {
    /// Decomposes an already pruned graph.
    pub fn new(g: &StaticGraph, s: VertexId, z: VertexId) -> Self {
        let feedback_edges = minimum_feedback_edge_set(g);
        let mut branch_vertices: BTreeSet<VertexId> =
            (0..g.vertex_count()).filter(|&v| g.degree(v) >= 3).collect();
        branch_vertices.extend(feedback_edges.iter().flat_map(|&(u, w)| [u, w]));
        branch_vertices.extend([s, z]);

        let mut forest = g.clone();
        for &(u, w) in &feedback_edges {
            forest.remove_edge(u, w);
        }
        let mut maximal_paths = Vec::new();
        for &b in &branch_vertices {
            for first in forest.neighbors(b) {
                let mut path = vec![b, first];
                while !branch_vertices.contains(path.last().unwrap()) {
                    let cur = *path.last().unwrap();
                    let prev = path[path.len() - 2];
                    let next = forest
                        .neighbors(cur)
                        .find(|&n| n != prev)
                        .expect("non-branch vertices of a pruned forest have degree two");
                    path.push(next);
                }
                // keep one orientation of each path
                let rev_key = (*path.last().unwrap(), path[path.len() - 2]);
                if (b, first) <= rev_key {
                    maximal_paths.push(path);
                }
            }
        }
        PathDecomposition {
            branch_vertices,
            maximal_paths,
            feedback_edges,
        }
    }

    /// Multigraph on branch vertices: `(other end, interior + end)` per
    /// incident maximal path or feedback edge, in both directions.
    fn condensed(&self, n: usize) -> Vec<Vec<Vec<VertexId>>> {
        let mut adj = vec![Vec::new(); n];
        let mut add = |path: &[VertexId]| {
            adj[path[0]].push(path[1..].to_vec());
            let mut rev: Vec<_> = path.iter().rev().copied().collect();
            let start = rev.remove(0);
            adj[start].push(rev);
        };
        for p in &self.maximal_paths {
            add(p);
        }
        for &(u, w) in &self.feedback_edges {
            add(&[u, w]);
        }
        for list in adj.iter_mut() {
            list.sort();
        }
        adj
    }
}

/// Visits every simple `(s, z)`-path of the decomposed graph once. The
/// visitor returns `true` to stop early; the return value says whether it did.
pub fn for_each_candidate_route(
    dec: &PathDecomposition,
    n: usize,
    s: VertexId,
    z: VertexId,
    mut visit: impl FnMut(&[VertexId]) -> Result<bool>,
) -> Result<bool> {
    fn go(
        adj: &[Vec<Vec<VertexId>>],
        z: VertexId,
        route: &mut Vec<VertexId>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[VertexId]) -> Result<bool>,
    ) -> Result<bool> {
        let v = *route.last().unwrap();
        if v == z {
            return visit(route);
        }
        for piece in &adj[v] {
            if piece.iter().any(|&u| used[u]) {
                continue;
            }
            for &u in piece {
                used[u] = true;
                route.push(u);
            }
            let stop = go(adj, z, route, used, visit)?;
            for &u in piece {
                used[u] = false;
                route.pop();
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let adj = dec.condensed(n);
    let mut used = vec![false; n];
    used[s] = true;
    go(&adj, z, &mut vec![s], &mut used, &mut visit)
}

/// All candidate routes, collected.
pub fn enumerate_candidate_routes(dec: &PathDecomposition, n: usize, s: VertexId, z: VertexId) -> Vec<Route> {
    let mut out = Vec::new();
    for_each_candidate_route(dec, n, s, z, |r| {
        out.push(Route::new(r.to_vec()).expect("simple by construction"));
        Ok(false)
    })
    .expect("collector never fails");
    out
}

pub fn solve(inst: &DrpInstance) -> Result<Option<Route>> {
    let (g, s, z) = (&inst.graph, inst.s, inst.z);
    if s == z {
        return Ok(Some(Route::single(s)));
    }
    let pruned = prune_degree_one(&g.underlying_graph(), s, z);
    let dec = PathDecomposition::new(&pruned, s, z);
    let mut found = None;
    for_each_candidate_route(&dec, g.vertex_count(), s, z, |vs| {
        let route = Route::new(vs.to_vec())?;
        if is_delay_robust(g, &route, inst.x, inst.delta)? {
            found = Some(route);
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}
