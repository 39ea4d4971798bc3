//! Seeded random instances. All generators are deterministic for a given
//! [`ChaCha8Rng`] state.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DrpInstance, Route, TemporalGraph, TimeArc, VertexId};
use crate::reductions::{CnfInstance, Formula, McpSatInstance, MulticoloredGraph};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters for [`random_graph`], parsed from `key=value` pairs such as
/// `n=20 arcs=60 seed=7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub arcs: usize,
    pub seed: u64,
    pub max_time: u64,
    pub max_lambda: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            n: 10,
            arcs: 30,
            seed: 0,
            max_time: 20,
            max_lambda: 3,
        }
    }
}

impl std::str::FromStr for RandomSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = RandomSpec::default();
        for pair in s.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()) {
            let bad = || Error::Parse {
                line: 1,
                message: format!("bad random spec entry `{pair}`"),
            };
            let (key, value) = pair.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.parse().map_err(|_| bad())?;
            match key {
                "n" => spec.n = value as usize,
                "arcs" | "m" => spec.arcs = value as usize,
                "seed" => spec.seed = value,
                "tmax" => spec.max_time = value,
                "lambda" => spec.max_lambda = value,
                _ => return Err(bad()),
            }
        }
        if spec.n == 0 {
            return Err(Error::NoVertices);
        }
        Ok(spec)
    }
}

/// Uniform arcs without self-loops (a single vertex gets no arcs).
pub fn random_graph(rng: &mut impl Rng, n: usize, arcs: usize, max_time: u64, max_lambda: u64) -> TemporalGraph {
    let arcs = if n < 2 {
        Vec::new()
    } else {
        (0..arcs)
            .map(|_| {
                let src = rng.gen_range(0..n);
                let dst = (src + rng.gen_range(1..n)) % n;
                TimeArc::new(src, dst, rng.gen_range(0..=max_time), rng.gen_range(0..=max_lambda))
            })
            .collect()
    };
    TemporalGraph::new(n.max(1), arcs).expect("endpoints in range")
}

pub fn graph_from_spec(spec: &RandomSpec) -> TemporalGraph {
    random_graph(&mut rng(spec.seed), spec.n, spec.arcs, spec.max_time, spec.max_lambda)
}

/// Random graph whose underlying graph has at most `max_edges` edges.
pub fn random_sparse_graph(
    rng: &mut impl Rng,
    n: usize,
    max_edges: usize,
    arcs_per_edge: usize,
    max_time: u64,
    max_lambda: u64,
) -> TemporalGraph {
    let mut pairs: Vec<(VertexId, VertexId)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    pairs.shuffle(rng);
    let edges = rng.gen_range(0..=max_edges.min(pairs.len()));
    let mut arcs = Vec::new();
    for &(u, w) in &pairs[..edges] {
        for _ in 0..rng.gen_range(1..=arcs_per_edge.max(1)) {
            let (src, dst) = if rng.gen_bool(0.5) { (u, w) } else { (w, u) };
            arcs.push(TimeArc::new(src, dst, rng.gen_range(0..=max_time), rng.gen_range(0..=max_lambda)));
        }
    }
    TemporalGraph::new(n.max(1), arcs).expect("endpoints in range")
}

/// A small DRP query on a sparse random graph.
pub fn random_drp(rng: &mut impl Rng, max_n: usize, max_edges: usize, max_x: usize, max_delta: u64) -> DrpInstance {
    let n = rng.gen_range(2..=max_n.max(2));
    let g = random_sparse_graph(rng, n, max_edges, 3, 12, 2);
    let s = rng.gen_range(0..n);
    let z = rng.gen_range(0..n);
    DrpInstance::new(g, s, z, rng.gen_range(0..=max_x), rng.gen_range(0..=max_delta)).expect("valid endpoints")
}

/// A route of `len` distinct vertices in an `n`-vertex graph, with
/// `relevant` arcs spread over its hops and `noise` arcs elsewhere.
pub fn random_route_instance(
    rng: &mut impl Rng,
    n: usize,
    len: usize,
    relevant: usize,
    noise: usize,
    max_time: u64,
    max_lambda: u64,
) -> (TemporalGraph, Route) {
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    order.truncate(len.clamp(1, n));
    let mut arcs = Vec::new();
    let hops = order.len() - 1;
    for k in 0..relevant.max(hops) {
        if hops == 0 {
            break;
        }
        let h = if k < hops { k } else { rng.gen_range(0..hops) };
        arcs.push(TimeArc::new(order[h], order[h + 1], rng.gen_range(0..=max_time), rng.gen_range(0..=max_lambda)));
    }
    if n >= 2 {
        for _ in 0..noise {
            let src = rng.gen_range(0..n);
            let dst = (src + rng.gen_range(1..n)) % n;
            let on_route = order.windows(2).any(|w| w[0] == src && w[1] == dst);
            if !on_route {
                arcs.push(TimeArc::new(src, dst, rng.gen_range(0..=max_time), rng.gen_range(0..=max_lambda)));
            }
        }
    }
    arcs.shuffle(rng);
    let g = TemporalGraph::new(n, arcs).expect("endpoints in range");
    (g, Route::new(order).expect("distinct vertices"))
}

/// A `len`-vertex path `0, 1, .., len - 1` carrying `arcs` arcs spread
/// evenly over its hops, with departures spaced so that the route stays
/// robust for small budgets.
pub fn long_route_instance(rng: &mut impl Rng, len: usize, arcs: usize) -> (TemporalGraph, Route) {
    let hops = len.saturating_sub(1).max(1);
    let mut out = Vec::with_capacity(arcs);
    let mut base = 0u64;
    for h in 0..len.saturating_sub(1) {
        let per_hop = (arcs / hops + usize::from(h < arcs % hops)).max(1);
        base += 4 * per_hop as u64;
        for k in 0..per_hop {
            let t = base + (k * 4) as u64 + rng.gen_range(0..2);
            out.push(TimeArc::new(h, h + 1, t, rng.gen_range(0..=1)));
        }
    }
    let g = TemporalGraph::new(len.max(1), out).expect("endpoints in range");
    (g, Route::new((0..len.max(1)).collect()).expect("distinct vertices"))
}

fn random_formula(rng: &mut impl Rng, sizes: &[usize], budget: &mut usize, depth: usize) -> Formula {
    let leaf = depth >= 3 || *budget <= 1 || rng.gen_bool(0.35);
    if leaf {
        *budget = budget.saturating_sub(1);
        let i = rng.gen_range(0..sizes.len());
        return Formula::Lit(i, rng.gen_range(0..sizes[i]));
    }
    let k = rng.gen_range(1..=3).min(*budget);
    let mut children = Vec::with_capacity(k);
    for _ in 0..k {
        if *budget == 0 {
            break;
        }
        children.push(random_formula(rng, sizes, budget, depth + 1));
    }
    if rng.gen_bool(0.5) {
        Formula::And(children)
    } else {
        Formula::Or(children)
    }
}

/// Random instance with `1..=max_n` classes of size `1..=max_m` and at
/// most `max_literals` literals.
pub fn random_mcpsat(rng: &mut impl Rng, max_n: usize, max_m: usize, max_literals: usize) -> McpSatInstance {
    let n = rng.gen_range(1..=max_n.max(1));
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_m.max(1))).collect();
    let mut budget = rng.gen_range(1..=max_literals.max(1));
    let formula = random_formula(rng, &sizes, &mut budget, 0);
    McpSatInstance::new(sizes, formula).expect("literals drawn from existing variables")
}

/// Random CNF with `1..=3` literals per clause over distinct variables.
pub fn random_cnf(rng: &mut impl Rng, variables: usize, clauses: usize) -> CnfInstance {
    let vars: Vec<i64> = (1..=variables as i64).collect();
    let clauses = (0..clauses)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(variables));
            vars.choose_multiple(rng, k)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfInstance::new(variables, clauses).expect("literals in range")
}

pub fn random_mcc(rng: &mut impl Rng, k: usize, max_size: usize, p: f64) -> MulticoloredGraph {
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_size.max(1))).collect();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for a in 0..sizes[i] {
                for b in 0..sizes[j] {
                    if rng.gen_bool(p) {
                        edges.push(((i, a), (j, b)));
                    }
                }
            }
        }
    }
    MulticoloredGraph::new(sizes, edges).expect("vertices in range")
}
