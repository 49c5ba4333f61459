//! Plain-text graph and label files.
//!
//! Edge list: a header line `n m` followed by `m` lines `u v` (0-based ids). The
//! writer emits edges with `u < v` in lexicographic order; the reader accepts either
//! endpoint order. Labels: one cluster index per line, line `i` labelling vertex `i`.
//! Blank lines and lines starting with `#` are ignored by both readers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::GroundTruth;

/// Largest vertex count the readers accept by default (dense adjacency is `n^2 / 8` bytes).
pub const DEFAULT_MAX_VERTICES: usize = 1 << 16;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let err = |msg: &str| Error::Parse {
        line: line_no,
        msg: msg.to_string(),
    };
    let a = it.next().ok_or_else(|| err("expected two integers"))?;
    let b = it.next().ok_or_else(|| err("expected two integers"))?;
    if it.next().is_some() {
        return Err(err("trailing tokens"));
    }
    let a = a.parse().map_err(|_| err("not a non-negative integer"))?;
    let b = b.parse().map_err(|_| err("not a non-negative integer"))?;
    Ok((a, b))
}

pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.n(), graph.edge_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_edge_list_with_limit(text, DEFAULT_MAX_VERTICES)
}

/// Parses an edge list, rejecting headers that declare more than `max_vertices`.
pub fn parse_edge_list_with_limit(text: &str, max_vertices: usize) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (n, m) = parse_pair(hline, header)?;
    if n > max_vertices {
        return Err(Error::Parse {
            line: hline,
            msg: format!("n = {n} exceeds limit {max_vertices}"),
        });
    }
    let max_edges = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max_edges {
        return Err(Error::Parse {
            line: hline,
            msg: format!("m = {m} exceeds n(n-1)/2 = {max_edges}"),
        });
    }
    let mut g = Graph::empty(n);
    let mut seen = 0;
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line_no, line)?;
        let bad = |msg: String| Error::Parse { line: line_no, msg };
        if u >= n || v >= n {
            return Err(bad(format!("endpoint out of range for n = {n}")));
        }
        if u == v {
            return Err(bad(format!("self-loop at {u}")));
        }
        if g.has_edge(u, v) {
            return Err(bad(format!("duplicate edge {u} {v}")));
        }
        seen += 1;
        if seen > m {
            return Err(bad(format!("more than the declared {m} edges")));
        }
        g.set_edge(u, v);
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

pub fn write_labels(truth: &GroundTruth) -> String {
    let mut out = String::new();
    for &l in truth.labels() {
        let _ = writeln!(out, "{l}");
    }
    out
}

/// Parses a labels file. Every index in `0..k` must occur.
pub fn parse_labels(text: &str) -> Result<GroundTruth> {
    parse_labels_with_limit(text, DEFAULT_MAX_VERTICES)
}

pub fn parse_labels_with_limit(text: &str, max_vertices: usize) -> Result<GroundTruth> {
    let mut labels = Vec::new();
    for (line_no, line) in content_lines(text) {
        let l: usize = line.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: "not a non-negative integer".into(),
        })?;
        if labels.len() == max_vertices || l >= max_vertices {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("more than {max_vertices} vertices or labels"),
            });
        }
        labels.push(l);
    }
    GroundTruth::from_labels(labels)
}

/// Parses a list of clusters, one per line as whitespace-separated vertex ids.
pub fn parse_clusters(text: &str, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut c = Vec::new();
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad vertex id {tok:?}"),
            })?;
            if v >= n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("vertex {v} out of range for n = {n}"),
                });
            }
            c.push(v);
        }
        out.push(c);
    }
    Ok(out)
}

pub fn write_clusters(clusters: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for c in clusters {
        let line: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
