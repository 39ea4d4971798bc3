//! Instance generators from satisfiability and clique problems.
//!
//! A monotone formula over variable classes (exactly one variable per class
//! is true) is turned into a temporal graph in which a robust route exists
//! exactly when the formula is satisfiable. Delays are fixed to `delta = 1`
//! and `x = 2n - 1` for `n` classes; every traversal time is zero.
//!
//! Classes and variables are 0-based in this API. Inside the construction
//! the variable `a` is shifted to `a + 1` so that time labels match the
//! usual 1-based offsets.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DrpInstance, TemporalGraph, TimeArc, VertexId};

/// Monotone formula; `Lit(i, a)` is true iff class `i` chose variable `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Lit(usize, usize),
}

impl Formula {
    pub fn eval(&self, choice: &[usize]) -> bool {
        match self {
            Formula::And(fs) => fs.iter().all(|f| f.eval(choice)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(choice)),
            Formula::Lit(i, a) => choice[*i] == *a,
        }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::literal_count).sum(),
            Formula::Lit(..) => 1,
        }
    }

    fn literals(&self, out: &mut Vec<(usize, usize)>) {
        match self {
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.literals(out)),
            Formula::Lit(i, a) => out.push((*i, *a)),
        }
    }
}

/// Result of constant folding: empty conjunctions are true and empty
/// disjunctions false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplified {
    True,
    False,
    Formula(Formula),
}

pub fn simplify(f: &Formula) -> Simplified {
    match f {
        Formula::Lit(..) => Simplified::Formula(f.clone()),
        Formula::And(fs) => {
            let mut kept = Vec::new();
            for sub in fs {
                match simplify(sub) {
                    Simplified::True => {}
                    Simplified::False => return Simplified::False,
                    Simplified::Formula(g) => kept.push(g),
                }
            }
            match kept.len() {
                0 => Simplified::True,
                1 => Simplified::Formula(kept.pop().unwrap()),
                _ => Simplified::Formula(Formula::And(kept)),
            }
        }
        Formula::Or(fs) => {
            let mut kept = Vec::new();
            for sub in fs {
                match simplify(sub) {
                    Simplified::True => return Simplified::True,
                    Simplified::False => {}
                    Simplified::Formula(g) => kept.push(g),
                }
            }
            match kept.len() {
                0 => Simplified::False,
                1 => Simplified::Formula(kept.pop().unwrap()),
                _ => Simplified::Formula(Formula::Or(kept)),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McpSatInstance {
    /// `|X_i|` per class.
    pub class_sizes: Vec<usize>,
    pub formula: Formula,
}

impl McpSatInstance {
    pub fn new(class_sizes: Vec<usize>, formula: Formula) -> Result<Self> {
        let mut lits = Vec::new();
        formula.literals(&mut lits);
        for (class, var) in lits {
            if class_sizes.get(class).is_none_or(|&size| var >= size) {
                return Err(Error::UnknownVariable { class, var });
            }
        }
        Ok(McpSatInstance { class_sizes, formula })
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    /// Largest class size `m`.
    pub fn max_class_size(&self) -> usize {
        self.class_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Evaluates the formula when class `i` sets variable `choice[i]` to true.
pub fn eval_mcpsat(inst: &McpSatInstance, choice: &[usize]) -> Result<bool> {
    if choice.len() != inst.class_count() {
        return Err(Error::ChoiceArity {
            expected: inst.class_count(),
            got: choice.len(),
        });
    }
    for (class, (&var, &size)) in choice.iter().zip(&inst.class_sizes).enumerate() {
        if var >= size {
            return Err(Error::UnknownVariable { class, var });
        }
    }
    Ok(inst.formula.eval(choice))
}

/// A satisfying choice found by trying all of them.
pub fn brute_force_mcpsat(inst: &McpSatInstance) -> Option<Vec<usize>> {
    inst.class_sizes
        .iter()
        .map(|&k| 0..k)
        .multi_cartesian_product()
        .find(|choice| inst.formula.eval(choice))
        .or_else(|| (inst.class_count() == 0 && inst.formula.eval(&[])).then(Vec::new))
}

/// CNF with signed 1-based literals, DIMACS style.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfInstance {
    pub variables: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfInstance {
    pub fn new(variables: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (line, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Parse {
                    line: line + 1,
                    message: "empty clause".into(),
                });
            }
            if let Some(&lit) = clause.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > variables) {
                return Err(Error::Parse {
                    line: line + 1,
                    message: format!("literal {lit} out of range for {variables} variables"),
                });
            }
        }
        Ok(CnfInstance { variables, clauses })
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

pub fn brute_force_sat(cnf: &CnfInstance) -> Option<Vec<bool>> {
    (0..cnf.variables)
        .map(|_| [false, true])
        .multi_cartesian_product()
        .find(|a| cnf.eval(a))
        .or_else(|| (cnf.variables == 0 && cnf.eval(&[])).then(Vec::new))
}

/// Class `i` holds `x_i` (variable 0) and its negation (variable 1).
pub fn threesat_to_mcpsat(cnf: &CnfInstance) -> McpSatInstance {
    let lit = |l: i64| Formula::Lit(l.unsigned_abs() as usize - 1, usize::from(l < 0));
    let clauses = cnf
        .clauses
        .iter()
        .map(|c| Formula::Or(c.iter().map(|&l| lit(l)).collect()))
        .collect();
    McpSatInstance::new(vec![2; cnf.variables], Formula::And(clauses)).expect("literals in range")
}

/// Graph whose vertices are `(class, index)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticoloredGraph {
    pub partition_sizes: Vec<usize>,
    /// Edges between vertices of different classes, stored with the smaller class first.
    pub edges: BTreeSet<((usize, usize), (usize, usize))>,
}

impl MulticoloredGraph {
    pub fn new(
        partition_sizes: Vec<usize>,
        edges: impl IntoIterator<Item = ((usize, usize), (usize, usize))>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, w) in edges {
            for (class, var) in [u, w] {
                if partition_sizes.get(class).is_none_or(|&k| var >= k) {
                    return Err(Error::UnknownVariable { class, var });
                }
            }
            if u.0 != w.0 {
                set.insert(if u.0 < w.0 { (u, w) } else { (w, u) });
            }
        }
        Ok(MulticoloredGraph {
            partition_sizes,
            edges: set,
        })
    }

    pub fn has_edge(&self, u: (usize, usize), w: (usize, usize)) -> bool {
        let key = if u.0 < w.0 { (u, w) } else { (w, u) };
        self.edges.contains(&key)
    }
}

/// A multicolored clique by exhaustive search.
pub fn brute_force_clique(g: &MulticoloredGraph) -> Option<Vec<usize>> {
    let k = g.partition_sizes.len();
    g.partition_sizes
        .iter()
        .map(|&s| 0..s)
        .multi_cartesian_product()
        .find(|pick| {
            (0..k)
                .tuple_combinations()
                .all(|(i, j)| g.has_edge((i, pick[i]), (j, pick[j])))
        })
}

/// One conjunct per class pair, satisfied by any edge between the chosen vertices.
pub fn mcc_to_mcpsat(g: &MulticoloredGraph) -> McpSatInstance {
    let k = g.partition_sizes.len();
    let conjuncts = (0..k)
        .tuple_combinations()
        .map(|(i, j)| {
            Formula::Or(
                g.edges
                    .iter()
                    .filter(|((ci, _), (cj, _))| *ci == i && *cj == j)
                    .map(|&((_, a), (_, b))| Formula::And(vec![Formula::Lit(i, a), Formula::Lit(j, b)]))
                    .collect(),
            )
        })
        .collect();
    McpSatInstance::new(g.partition_sizes.clone(), Formula::And(conjuncts)).expect("edges in range")
}

/// Generated robust-routing instance plus construction by-products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    pub drp: DrpInstance,
    /// Vertex order along the gadget chain.
    pub layout: Vec<VertexId>,
    /// Role of each vertex, e.g. `x[1,2]^(1)`.
    pub provenance: Vec<String>,
}

impl GadgetInstance {
    pub fn vertex(&self, role: &str) -> Option<VertexId> {
        self.provenance.iter().position(|r| r == role)
    }
}

struct Builder {
    roles: Vec<String>,
    arcs: Vec<TimeArc>,
    /// Largest dummy time, `o_{n+1} - 1`.
    horizon: u64,
    stride: u64,
}

impl Builder {
    fn vertex(&mut self, role: String) -> VertexId {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn offset(&self, class: usize) -> u64 {
        self.stride * class as u64
    }

    /// Arc chain `path` with the given labels on each hop, plus dummy arcs
    /// at every time in `1..=horizon` outside `[lo, hi]`.
    fn chain(&mut self, path: &[VertexId], labels: &[&[u64]], dummy_until: u64, skip: Option<(u64, u64)>) {
        for (hop, pair) in path.windows(2).enumerate() {
            for &t in labels[hop] {
                self.arcs.push(TimeArc::new(pair[0], pair[1], t, 0));
            }
            for t in 1..=dummy_until {
                if skip.is_some_and(|(lo, hi)| (lo..=hi).contains(&t)) {
                    continue;
                }
                self.arcs.push(TimeArc::new(pair[0], pair[1], t, 0));
            }
        }
    }

    /// Two-step gadget for class `i` (0-based) and variable `a` (0-based)
    /// as used by literals and finalization.
    fn window_chain(&mut self, from: VertexId, mid: [VertexId; 2], to: VertexId, i: usize, a: usize) {
        let a = a as u64 + 1;
        let (lo, hi) = (self.offset(i), self.offset(i + 1));
        let times: &[u64] = &[lo + a, hi - a];
        self.chain(&[from, mid[0], mid[1], to], &[times; 3], self.horizon, Some((lo, hi - 1)));
    }

    /// Builds the validation gadget between `v` and `w`; returns its layout columns.
    fn formula(&mut self, f: &Formula, v: VertexId, w: VertexId, counter: &mut usize) -> Vec<Vec<VertexId>> {
        match f {
            Formula::Lit(i, a) => {
                *counter += 1;
                let l1 = self.vertex(format!("l[{},{}]^(1)#{}", i + 1, a + 1, counter));
                let l2 = self.vertex(format!("l[{},{}]^(2)#{}", i + 1, a + 1, counter));
                self.window_chain(v, [l1, l2], w, *i, *a);
                vec![vec![l1], vec![l2]]
            }
            Formula::And(fs) => {
                let connectors: Vec<VertexId> = (1..fs.len())
                    .map(|k| {
                        *counter += 1;
                        self.vertex(format!("c{k}#{counter}"))
                    })
                    .collect();
                let mut cols = Vec::new();
                for (k, sub) in fs.iter().enumerate() {
                    let start = if k == 0 { v } else { connectors[k - 1] };
                    let end = if k + 1 == fs.len() { w } else { connectors[k] };
                    if k > 0 {
                        cols.push(vec![start]);
                    }
                    cols.extend(self.formula(sub, start, end, counter));
                }
                cols
            }
            Formula::Or(fs) => {
                let mut cols: Vec<Vec<VertexId>> = Vec::new();
                for sub in fs {
                    for (k, col) in self.formula(sub, v, w, counter).into_iter().enumerate() {
                        if k == cols.len() {
                            cols.push(Vec::new());
                        }
                        cols[k].extend(col);
                    }
                }
                cols
            }
        }
    }
}

/// Builds the gadget graph for `inst`.
pub fn mcpsat_to_drp(inst: &McpSatInstance) -> GadgetInstance {
    let n = inst.class_count();
    let m = inst.max_class_size() as u64;
    let stride = 2 * m + 1;
    let mut b = Builder {
        roles: Vec::new(),
        arcs: Vec::new(),
        horizon: (stride * n as u64).saturating_sub(1),
        stride,
    };
    let mut layout: Vec<VertexId> = Vec::new();

    // selection
    let s: Vec<VertexId> = (1..=n + 1).map(|i| b.vertex(format!("s{i}"))).collect();
    for (i, &size) in inst.class_sizes.iter().enumerate() {
        let (lo, hi) = (b.offset(i), b.offset(i + 1));
        let mut firsts = Vec::new();
        let mut seconds = Vec::new();
        for a in 0..size {
            let x1 = b.vertex(format!("x[{},{}]^(1)", i + 1, a + 1));
            let x2 = b.vertex(format!("x[{},{}]^(2)", i + 1, a + 1));
            let t = lo + a as u64 + 1;
            b.chain(
                &[s[i], x1, x2, s[i + 1]],
                &[&[t], &[t, hi + lo - t], &[t, hi + lo - t, hi]],
                lo.saturating_sub(1),
                None,
            );
            firsts.push(x1);
            seconds.push(x2);
        }
        layout.push(s[i]);
        layout.extend(firsts);
        layout.extend(seconds);
    }
    layout.push(s[n]);

    // validation
    let mut counter = 0;
    let f1 = match simplify(&inst.formula) {
        Simplified::True => s[n],
        Simplified::False => {
            let f1 = b.vertex("f1".into());
            layout.push(f1);
            f1
        }
        Simplified::Formula(f) => {
            let f1 = b.vertex("f1".into());
            for col in b.formula(&f, s[n], f1, &mut counter) {
                layout.extend(col);
            }
            layout.push(f1);
            f1
        }
    };

    // finalization
    let mut prev = f1;
    for (i, &size) in inst.class_sizes.iter().enumerate().skip(1) {
        let fi = b.vertex(format!("f{}", i + 1));
        let mut firsts = Vec::new();
        let mut seconds = Vec::new();
        for a in 0..size {
            let f_1 = b.vertex(format!("f[{},{}]^(1)", i + 1, a + 1));
            let f_2 = b.vertex(format!("f[{},{}]^(2)", i + 1, a + 1));
            b.window_chain(prev, [f_1, f_2], fi, i, a);
            firsts.push(f_1);
            seconds.push(f_2);
        }
        layout.extend(firsts);
        layout.extend(seconds);
        layout.push(fi);
        prev = fi;
    }

    let vertex_count = b.roles.len();
    let graph = TemporalGraph::new(vertex_count, b.arcs).expect("gadget arcs are in range");
    let x = (2 * n).saturating_sub(1);
    let drp = DrpInstance::new(graph, s[0], prev, x, 1).expect("endpoints exist");
    debug_assert_eq!(layout.len(), vertex_count);
    GadgetInstance {
        drp,
        layout,
        provenance: b.roles,
    }
}

/// Largest position difference between the ends of any underlying edge,
/// or an error if `layout` is not a permutation of the vertices.
pub fn layout_stretch(g: &TemporalGraph, layout: &[VertexId]) -> Result<usize> {
    let n = g.vertex_count();
    let mut pos = vec![usize::MAX; n];
    if layout.len() != n {
        return Err(Error::InvalidLayout);
    }
    for (p, &v) in layout.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidLayout);
        }
        pos[v] = p;
    }
    Ok(g.underlying_graph()
        .edges()
        .map(|(u, w)| pos[u].abs_diff(pos[w]))
        .max()
        .unwrap_or(0))
}

/// Whether every underlying edge spans at most `bound` layout positions.
pub fn verify_layout(inst: &GadgetInstance, bound: usize) -> Result<bool> {
    Ok(layout_stretch(&inst.drp.graph, &inst.layout)? <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Route;
    use crate::verifier::worst_case_table;
    use crate::Time;

    fn lit(i: usize, a: usize) -> Formula {
        Formula::Lit(i, a)
    }

    #[test]
    fn eval_examples() {
        let single = McpSatInstance::new(vec![1], lit(0, 0)).unwrap();
        assert!(eval_mcpsat(&single, &[0]).unwrap());
        let empty = McpSatInstance::new(vec![3, 3], Formula::And(vec![])).unwrap();
        assert!(eval_mcpsat(&empty, &[2, 1]).unwrap());
        // (x11 | (x12 & x21)) & (x22 | x31)
        let phi = Formula::And(vec![
            Formula::Or(vec![lit(0, 0), Formula::And(vec![lit(0, 1), lit(1, 0)])]),
            Formula::Or(vec![lit(1, 1), lit(2, 0)]),
        ]);
        let inst = McpSatInstance::new(vec![2, 2, 2], phi).unwrap();
        for third in 0..2 {
            assert!(eval_mcpsat(&inst, &[0, 1, third]).unwrap());
        }
        assert!(!eval_mcpsat(&inst, &[1, 1, 0]).unwrap());
        assert_eq!(
            eval_mcpsat(&inst, &[0, 1]).unwrap_err(),
            Error::ChoiceArity { expected: 3, got: 2 }
        );
        assert!(McpSatInstance::new(vec![2], lit(0, 2)).is_err());
    }

    #[test]
    fn threesat_translation() {
        let cnf = CnfInstance::new(3, vec![vec![1, -2, 3]]).unwrap();
        let inst = threesat_to_mcpsat(&cnf);
        assert_eq!(inst.class_sizes, vec![2, 2, 2]);
        assert_eq!(
            inst.formula,
            Formula::And(vec![Formula::Or(vec![lit(0, 0), lit(1, 1), lit(2, 0)])])
        );
        let none = threesat_to_mcpsat(&CnfInstance::new(2, vec![]).unwrap());
        assert!(brute_force_mcpsat(&none).is_some());
        assert!(CnfInstance::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn clique_translation() {
        let k11 = MulticoloredGraph::new(vec![1, 1], [((0, 0), (1, 0))]).unwrap();
        assert!(brute_force_mcpsat(&mcc_to_mcpsat(&k11)).is_some());
        let empty = MulticoloredGraph::new(vec![1, 1], []).unwrap();
        let inst = mcc_to_mcpsat(&empty);
        assert_eq!(inst.formula, Formula::And(vec![Formula::Or(vec![])]));
        assert!(brute_force_mcpsat(&inst).is_none());
    }

    #[test]
    fn simplification() {
        assert_eq!(simplify(&Formula::And(vec![])), Simplified::True);
        assert_eq!(simplify(&Formula::Or(vec![])), Simplified::False);
        assert_eq!(
            simplify(&Formula::And(vec![Formula::Or(vec![lit(0, 0)]), Formula::And(vec![])])),
            Simplified::Formula(lit(0, 0))
        );
        assert_eq!(
            simplify(&Formula::Or(vec![lit(0, 0), Formula::And(vec![])])),
            Simplified::True
        );
    }

    #[test]
    fn first_selection_gadget_labels() {
        // three variables in the first class, so the stride is 7
        let inst = McpSatInstance::new(vec![3, 1], lit(0, 0)).unwrap();
        let gi = mcpsat_to_drp(&inst);
        let g = &gi.drp.graph;
        let labels = |u: &str, w: &str| {
            let (u, w) = (gi.vertex(u).unwrap(), gi.vertex(w).unwrap());
            let mut ts: Vec<u64> = g.pair_arcs(u, w).iter().map(|&id| g.arc(id).t).collect();
            ts.sort();
            ts
        };
        assert_eq!(labels("s1", "x[1,1]^(1)"), vec![1]);
        assert_eq!(labels("x[1,1]^(1)", "x[1,1]^(2)"), vec![1, 6]);
        assert_eq!(labels("x[1,1]^(2)", "s2"), vec![1, 6, 7]);
        assert!(g.arcs().iter().all(|a| a.lambda == 0));
        assert_eq!((gi.drp.x, gi.drp.delta), (3, 1));
    }

    #[test]
    fn selection_arrival_law() {
        for (a1, a2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let inst = McpSatInstance::new(vec![2, 2], Formula::And(vec![])).unwrap();
            let gi = mcpsat_to_drp(&inst);
            let route: Vec<VertexId> = [
                "s1".to_string(),
                format!("x[1,{}]^(1)", a1 + 1),
                format!("x[1,{}]^(2)", a1 + 1),
                "s2".to_string(),
                format!("x[2,{}]^(1)", a2 + 1),
                format!("x[2,{}]^(2)", a2 + 1),
                "s3".to_string(),
            ]
            .iter()
            .map(|r| gi.vertex(r).unwrap())
            .collect();
            let table = worst_case_table(&gi.drp.graph, &Route::new(route).unwrap(), 3, 1);
            let (a1, a2) = (a1 as u64 + 1, a2 as u64 + 1);
            let want = [a1, 5 - a1, 5 + a2, 10 - a2].map(Time::Finite);
            assert_eq!(table.last().times(), &want);
        }
    }

    #[test]
    fn single_class_single_literal() {
        let inst = McpSatInstance::new(vec![1], lit(0, 0)).unwrap();
        let gi = mcpsat_to_drp(&inst);
        assert_eq!((gi.drp.x, gi.drp.delta), (1, 1));
        assert!(crate::pareto::solve(&gi.drp).unwrap().is_some());
        assert!(crate::oracle::brute_force_solve(&gi.drp).unwrap().is_some());
    }

    #[test]
    fn layouts() {
        let path = TemporalGraph::new(4, vec![TimeArc::new(0, 1, 0, 0), TimeArc::new(1, 2, 0, 0), TimeArc::new(2, 3, 0, 0)]).unwrap();
        assert_eq!(layout_stretch(&path, &[0, 1, 2, 3]).unwrap(), 1);
        let star = TemporalGraph::new(4, (1..4).map(|v| TimeArc::new(0, v, 0, 0)).collect()).unwrap();
        for perm in (0..4).permutations(4) {
            assert!(layout_stretch(&star, &perm).unwrap() > 1);
        }
        assert_eq!(layout_stretch(&star, &[0, 1, 2]), Err(Error::InvalidLayout));
        assert_eq!(layout_stretch(&star, &[0, 1, 2, 2]), Err(Error::InvalidLayout));
        let cnf = CnfInstance::new(3, vec![vec![1, -2, 3], vec![-1, 2], vec![2, 3, -3]]).unwrap();
        let gi = mcpsat_to_drp(&threesat_to_mcpsat(&cnf));
        assert!(verify_layout(&gi, 3).unwrap());
    }
}
