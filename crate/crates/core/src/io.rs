//! Text formats.
//!
//! Graph files:
//!
//! ```text
//! # comment
//! temporal <n> <m>
//! arc <src> <dst> <t> <lambda>     (m times)
//! name <id> <label>                (optional)
//! ```
//!
//! Clique files list `mcc <k>`, then `sizes <s_1> .. <s_k>`, then any
//! number of `edge <i> <a> <j> <b>` lines (0-based class and index).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeArc, VertexId};
use crate::reductions::{CnfInstance, MulticoloredGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: TemporalGraph,
    pub names: BTreeMap<VertexId, String>,
}

impl GraphFile {
    pub fn new(graph: TemporalGraph) -> Self {
        GraphFile {
            graph,
            names: BTreeMap::new(),
        }
    }

    /// Looks a vertex up by numeric id or by name.
    pub fn resolve(&self, token: &str) -> Result<VertexId> {
        if let Some((&id, _)) = self.names.iter().find(|(_, name)| name.as_str() == token) {
            return Ok(id);
        }
        let id: VertexId = token.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("unknown vertex `{token}`"),
        })?;
        self.graph.check_vertex(id)?;
        Ok(id)
    }

    pub fn label(&self, v: VertexId) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = (usize, &'a str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut names = BTreeMap::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text, "#") {
        last_line = line;
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        match (keyword, header) {
            ("temporal", None) => {
                let n = field(toks.next(), line, "vertex count")?;
                let m = field(toks.next(), line, "arc count")?;
                if n == 0 {
                    return Err(parse_err(line, "vertex count must be positive"));
                }
                header = Some((n, m));
            }
            ("temporal", Some(_)) => return Err(parse_err(line, "duplicate header")),
            (_, None) => return Err(parse_err(line, "expected `temporal <n> <m>` header")),
            ("arc", Some((n, _))) => {
                let src: VertexId = field(toks.next(), line, "source")?;
                let dst: VertexId = field(toks.next(), line, "target")?;
                let t = field(toks.next(), line, "time label")?;
                let lambda = field(toks.next(), line, "traversal time")?;
                if src >= n || dst >= n {
                    return Err(parse_err(line, format!("vertex out of range (n = {n})")));
                }
                arcs.push(TimeArc::new(src, dst, t, lambda));
            }
            ("name", Some((n, _))) => {
                let id: VertexId = field(toks.next(), line, "vertex id")?;
                if id >= n {
                    return Err(parse_err(line, format!("vertex out of range (n = {n})")));
                }
                let rest = content["name".len()..].trim_start();
                let label = rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..].trim();
                if label.is_empty() {
                    return Err(parse_err(line, "missing name"));
                }
                names.insert(id, label.to_string());
                continue;
            }
            (other, Some(_)) => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing header"))?;
    if arcs.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!("header announces {m} arcs, found {}", arcs.len()),
        ));
    }
    let graph = TemporalGraph::new(n, arcs).map_err(|e| parse_err(0, e.to_string()))?;
    Ok(GraphFile { graph, names })
}

/// Serializes arcs in stored order, then names.
pub fn write_graph(file: &GraphFile) -> String {
    let g = &file.graph;
    let mut out = format!("temporal {} {}\n", g.vertex_count(), g.arc_count());
    for a in g.arcs() {
        writeln!(out, "arc {} {} {} {}", a.src, a.dst, a.t, a.lambda).unwrap();
    }
    for (id, name) in &file.names {
        writeln!(out, "name {id} {name}").unwrap();
    }
    out
}

/// DIMACS CNF: `p cnf <vars> <clauses>` then zero-terminated clauses.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text, "c") {
        last_line = line;
        if content.starts_with('%') {
            break;
        }
        if content.starts_with('p') {
            let mut toks = content.split_whitespace().skip(1);
            if toks.next() != Some("cnf") || header.is_some() {
                return Err(parse_err(line, "expected a single `p cnf <vars> <clauses>` line"));
            }
            header = Some((field(toks.next(), line, "variable count")?, field(toks.next(), line, "clause count")?));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(parse_err(line, "clause before `p cnf` header"));
        };
        for tok in content.split_whitespace() {
            let lit: i64 = field(Some(tok), line, "literal")?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(parse_err(line, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(parse_err(line, format!("literal {lit} exceeds {vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(parse_err(
            last_line.max(1),
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfInstance::new(vars, clauses)
}

pub fn write_dimacs(cnf: &CnfInstance) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.variables, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_mcc(text: &str) -> Result<MulticoloredGraph> {
    let mut k: Option<usize> = None;
    let mut sizes: Option<Vec<usize>> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text, "#") {
        last_line = line;
        let mut toks = content.split_whitespace();
        match toks.next().unwrap_or_default() {
            "mcc" if k.is_none() => k = Some(field(toks.next(), line, "class count")?),
            "sizes" => {
                let expected = k.ok_or_else(|| parse_err(line, "`sizes` before `mcc <k>`"))?;
                let list = toks
                    .by_ref()
                    .map(|t| field(Some(t), line, "class size"))
                    .collect::<Result<Vec<usize>>>()?;
                if list.len() != expected {
                    return Err(parse_err(line, format!("expected {expected} sizes, found {}", list.len())));
                }
                sizes = Some(list);
            }
            "edge" => {
                let sz = sizes.as_ref().ok_or_else(|| parse_err(line, "`edge` before `sizes`"))?;
                let i: usize = field(toks.next(), line, "class")?;
                let a: usize = field(toks.next(), line, "index")?;
                let j: usize = field(toks.next(), line, "class")?;
                let b: usize = field(toks.next(), line, "index")?;
                for (c, v) in [(i, a), (j, b)] {
                    if sz.get(c).is_none_or(|&s| v >= s) {
                        return Err(parse_err(line, format!("vertex ({c}, {v}) does not exist")));
                    }
                }
                if i == j {
                    return Err(parse_err(line, "edge inside one class"));
                }
                edges.push(((i, a), (j, b)));
            }
            other => return Err(parse_err(line, format!("unexpected `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let sizes = sizes.ok_or_else(|| parse_err(last_line.max(1), "missing `sizes` line"))?;
    MulticoloredGraph::new(sizes, edges)
}

/// Metadata written next to a generated graph file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub s: VertexId,
    pub z: VertexId,
    pub x: usize,
    pub delta: u64,
    /// Known answer, when the source instance was solved exhaustively.
    pub expected: Option<bool>,
    pub layout: Vec<VertexId>,
    pub provenance: Vec<String>,
    /// Where the instance came from, e.g. `cnf:path` or `random:n=20 ...`.
    pub source: String,
}
