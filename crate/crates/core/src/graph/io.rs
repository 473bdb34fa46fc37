//! SNAP-style edge lists and node/cluster CSV files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{ClusterLabels, SparseGraph};
use crate::error::{Error, Result};

/// Header line of label files.
pub const LABELS_HEADER: &str = "node,cluster";

/// A parsed edge list.
#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: SparseGraph,
    /// Original id of each dense node index.
    pub node_ids: Vec<u64>,
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Parses `u v` lines. Blank lines and lines starting with `#` are skipped.
/// Ids are renumbered densely in order of first appearance. Self-loop lines
/// are dropped before their ids are registered; repeated edges (either
/// orientation) are dropped. Both are counted.
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut node_ids = Vec::new();
    let mut edges = Vec::new();
    let mut self_loops = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: lineno + 1, message };
        let mut tokens = line.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(parse_err(format!("expected two node ids, got {line:?}"))),
        };
        let a: u64 = a.parse().map_err(|_| parse_err(format!("bad node id {a:?}")))?;
        let b: u64 = b.parse().map_err(|_| parse_err(format!("bad node id {b:?}")))?;
        if a == b {
            self_loops += 1;
            continue;
        }
        let mut id = |raw: u64| {
            *index.entry(raw).or_insert_with(|| {
                node_ids.push(raw);
                node_ids.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        edges.push((u, v));
    }
    let (graph, stats) = SparseGraph::from_edges(node_ids.len(), edges)?;
    Ok(EdgeList { graph, node_ids, duplicates: stats.duplicates, self_loops })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Writes one `u v` line per edge (`u < v`), using `node_ids` when given.
pub fn write_edge_list(path: impl AsRef<Path>, graph: &SparseGraph, node_ids: Option<&[u64]>) -> Result<()> {
    check_ids(node_ids, graph.n())?;
    let id = |v: usize| node_ids.map_or(v as u64, |ids| ids[v]);
    let mut out = format!("# nodes: {} edges: {}\n", graph.n(), graph.edge_count());
    for (u, v) in graph.edges() {
        writeln!(out, "{}\t{}", id(u), id(v)).expect("writing to a string");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes `node,cluster` rows, using `node_ids` when given.
pub fn write_labels(path: impl AsRef<Path>, labels: &ClusterLabels, node_ids: Option<&[u64]>) -> Result<()> {
    check_ids(node_ids, labels.len())?;
    let mut out = String::with_capacity(16 * labels.len());
    out.push_str(LABELS_HEADER);
    out.push('\n');
    for (v, &l) in labels.as_slice().iter().enumerate() {
        let id = node_ids.map_or(v as u64, |ids| ids[v]);
        writeln!(out, "{id},{l}").expect("writing to a string");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a label file written by [`write_labels`]. Returns node ids in file
/// order and their labels.
pub fn read_labels(path: impl AsRef<Path>) -> Result<(Vec<u64>, ClusterLabels)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == LABELS_HEADER => {}
        _ => return Err(Error::Parse { line: 1, message: format!("expected header {LABELS_HEADER:?}") }),
    }
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = || Error::Parse { line: lineno + 1, message: format!("bad row {line:?}") };
        let (id, label) = line.split_once(',').ok_or_else(parse_err)?;
        ids.push(id.trim().parse().map_err(|_| parse_err())?);
        labels.push(label.trim().parse().map_err(|_| parse_err())?);
    }
    Ok((ids, ClusterLabels::from_labels(labels)))
}

fn check_ids(node_ids: Option<&[u64]>, n: usize) -> Result<()> {
    match node_ids {
        Some(ids) if ids.len() != n => Err(Error::invalid(format!("{} node ids for {n} nodes", ids.len()))),
        _ => Ok(()),
    }
}
