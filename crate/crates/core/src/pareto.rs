//! Label-setting search over worst-case arrival vectors.
//!
//! Each label is a partial route from `s` together with its arrival vector.
//! Labels are expanded in lexicographic order of their vectors; a label that
//! is componentwise no better than another label at the same vertex is
//! discarded. Vectors are rounded up to the next departure at their vertex,
//! which keeps fronts small without changing any later step.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{DrpInstance, Route, VertexId};
use crate::time::Time;
use crate::verifier::{extend_vector, ArrivalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParetoOptions {
    /// Discard dominated labels. Turning this off enumerates every simple
    /// route and exists for testing.
    pub prune: bool,
    /// Abort with [`Error::TooLarge`] after creating this many labels.
    pub label_limit: Option<usize>,
}

impl Default for ParetoOptions {
    fn default() -> Self {
        ParetoOptions {
            prune: true,
            label_limit: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParetoOutcome {
    pub route: Option<Route>,
    /// Arrival vector of `route` at `z` (unrounded).
    pub vector: Option<ArrivalVector>,
    pub labels_created: usize,
    /// Largest number of simultaneously alive labels seen per vertex.
    pub max_front: Vec<usize>,
}

struct Label {
    vertex: VertexId,
    vector: ArrivalVector,
    parent: Option<usize>,
    alive: bool,
}

/// Rounds every entry up to the next time in `departures`, or to infinity.
pub fn round_up(v: &ArrivalVector, departures: &[u64]) -> ArrivalVector {
    v.map(|t| match *t {
        Time::Finite(t) => match departures.partition_point(|&d| d < t) {
            i if i < departures.len() => Time::Finite(departures[i]),
            _ => Time::Infinite,
        },
        Time::Infinite => Time::Infinite,
    })
}

fn on_path(labels: &[Label], mut id: usize, v: VertexId) -> bool {
    loop {
        if labels[id].vertex == v {
            return true;
        }
        match labels[id].parent {
            Some(p) => id = p,
            None => return false,
        }
    }
}

fn route_of(labels: &[Label], mut id: usize) -> Route {
    let mut vs = vec![labels[id].vertex];
    while let Some(p) = labels[id].parent {
        vs.push(labels[p].vertex);
        id = p;
    }
    vs.reverse();
    Route::new(vs).expect("labels only extend to unvisited vertices")
}

pub fn solve(inst: &DrpInstance) -> Result<Option<Route>> {
    Ok(solve_with(inst, ParetoOptions::default())?.route)
}

pub fn solve_with(inst: &DrpInstance, opts: ParetoOptions) -> Result<ParetoOutcome> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let (s, z, x, delta) = (inst.s, inst.z, inst.x, inst.delta);
    let mut max_front = vec![0; n];
    if s == z {
        return Ok(ParetoOutcome {
            route: Some(Route::single(s)),
            vector: Some(ArrivalVector::zeros(x)),
            labels_created: 0,
            max_front,
        });
    }

    let mut labels: Vec<Label> = Vec::new();
    let mut fronts: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();

    labels.push(Label {
        vertex: s,
        vector: round_up(&ArrivalVector::zeros(x), g.departures(s)),
        parent: None,
        alive: true,
    });
    fronts[s].push(0);
    max_front[s] = 1;
    heap.push(Reverse((labels[0].vector.clone(), s, 0usize)));

    while let Some(Reverse((_, v, id))) = heap.pop() {
        if !labels[id].alive {
            continue;
        }
        if v == z {
            // unrounded vector for reporting
            let route = route_of(&labels, id);
            let vector = crate::verifier::worst_case_table(g, &route, x, delta).last().clone();
            return Ok(ParetoOutcome {
                route: Some(route),
                vector: Some(vector),
                labels_created: labels.len(),
                max_front,
            });
        }
        for &w in g.successors(v) {
            if w == v || on_path(&labels, id, w) {
                continue;
            }
            let raw = extend_vector(g, v, w, &labels[id].vector, delta);
            let vector = if w == z { raw } else { round_up(&raw, g.departures(w)) };
            if !vector.get(x).is_finite() {
                continue;
            }
            if opts.prune {
                let mut dominated = false;
                for &other in &fronts[w] {
                    if labels[other].vector.dominates(&vector)? {
                        dominated = true;
                        break;
                    }
                }
                if dominated {
                    continue;
                }
                let (dead, keep): (Vec<usize>, Vec<usize>) = fronts[w]
                    .iter()
                    .partition(|&&other| vector.dominates(&labels[other].vector).unwrap_or(false));
                for other in dead {
                    labels[other].alive = false;
                }
                fronts[w] = keep;
            }
            if opts.label_limit.is_some_and(|limit| labels.len() >= limit) {
                return Err(Error::TooLarge(format!(
                    "label search exceeded {} labels",
                    labels.len()
                )));
            }
            let new_id = labels.len();
            heap.push(Reverse((vector.clone(), w, new_id)));
            labels.push(Label {
                vertex: w,
                vector,
                parent: Some(id),
                alive: true,
            });
            fronts[w].push(new_id);
            max_front[w] = max_front[w].max(fronts[w].len());
        }
    }

    Ok(ParetoOutcome {
        route: None,
        vector: None,
        labels_created: labels.len(),
        max_front,
    })
}
