//! Wire formats: DIMACS-style graph text, ordering JSON, deletion-set JSON.
//!
//! Graph text: `c` comment lines, one `p edge <n> <m>` header, then exactly
//! `m` lines `e <u> <v>` with 1-indexed endpoints and `u < v`. Duplicates
//! and loops are rejected.
//!
//! Ordering JSON is an array of n integers; entry i is the 1-indexed
//! position of 0-indexed vertex i.

use crate::cluster::ClusterDeletionSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Ordering};
use serde::{Deserialize, Serialize};

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Parse(format!("line {}: second p line", lineno + 1)));
                }
                if parts.next() != Some("edge") {
                    return Err(Error::Parse(format!(
                        "line {}: expected 'p edge <n> <m>'",
                        lineno + 1
                    )));
                }
                let n = parse_num(parts.next(), lineno)?;
                let m = parse_num(parts.next(), lineno)?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!(
                        "line {}: trailing tokens after p line",
                        lineno + 1
                    )));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| {
                    Error::Parse(format!("line {}: e line before p line", lineno + 1))
                })?;
                let u = parse_num(parts.next(), lineno)?;
                let v = parse_num(parts.next(), lineno)?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!(
                        "line {}: trailing tokens after edge",
                        lineno + 1
                    )));
                }
                if u < 1 || v < 1 || u > n || v > n {
                    return Err(Error::Parse(format!(
                        "line {}: endpoint out of range 1..={}",
                        lineno + 1,
                        n
                    )));
                }
                if u >= v {
                    return Err(Error::Parse(format!(
                        "line {}: edges must satisfy u < v",
                        lineno + 1
                    )));
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) => {
                return Err(Error::Parse(format!(
                    "line {}: unknown line kind '{tok}'",
                    lineno + 1
                )));
            }
            None => unreachable!("empty lines are skipped"),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse("missing p line".into()))?;
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header promises {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Parse(msg),
        other => other,
    })
}

fn parse_num(tok: Option<&str>, lineno: usize) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("line {}: missing number", lineno + 1)))?
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("line {}: bad number", lineno + 1)))
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p edge {} {}\n", g.n(), g.edge_count()));
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn ordering_to_json(pi: &Ordering) -> String {
    serde_json::to_string(pi.positions()).expect("a vector of usize always serializes")
}

pub fn ordering_from_json(text: &str) -> Result<Ordering> {
    let pos: Vec<usize> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ordering JSON: {e}")))?;
    Ordering::new(pos)
}

#[derive(Serialize, Deserialize)]
struct DeletionSetJson {
    members: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

pub fn deletion_set_to_json(set: &ClusterDeletionSet) -> String {
    let doc = DeletionSetJson {
        members: set.members().to_vec(),
        clusters: set.clusters().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("deletion set always serializes")
}

/// Parse and re-validate against `g`: members plus clusters must partition
/// the vertex set and every cluster must induce a clique.
pub fn deletion_set_from_json(g: &Graph, text: &str) -> Result<ClusterDeletionSet> {
    let doc: DeletionSetJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("deletion set JSON: {e}")))?;
    ClusterDeletionSet::from_members(g, &doc.members)
}
