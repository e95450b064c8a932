//! Graph and coloring file formats.
//!
//! Graphs are stored either as JSON `{"n": N, "edges": [[u, v], ...]}` over ids
//! `1..=N`, or as an edge list with one `u v` pair per line. Graphs whose ids
//! are not exactly `1..=N` carry an explicit `"vertices"` list in JSON and
//! single-id lines in the edge list.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorAssignment, Graph, VertexId};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    n: u64,
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
}

fn is_contiguous(g: &Graph) -> bool {
    g.vertices().eq(1..=g.n() as u64)
}

pub fn graph_to_json(g: &Graph) -> String {
    let file = GraphFile {
        n: g.n() as u64,
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        vertices: (!is_contiguous(g)).then(|| g.vertices().collect()),
    };
    serde_json::to_string(&file).expect("graph serialization cannot fail")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let mut g = match &file.vertices {
        Some(ids) => {
            let g = Graph::with_vertices(ids.iter().copied());
            if g.n() as u64 != file.n || ids.len() != g.n() {
                return Err(Error::Input("\"vertices\" must list n distinct ids".into()));
            }
            g
        }
        None => Graph::with_vertices(1..=file.n),
    };
    for [u, v] in file.edges {
        if !g.contains(u) || !g.contains(v) {
            return Err(Error::Input(format!("edge [{u},{v}] names an unknown vertex")));
        }
        g.add_edge(u, v)?;
    }
    Ok(g)
}

pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if is_contiguous(g) {
        out.push_str(&format!("# n {}\n", g.n()));
    } else {
        for v in g.vertices().filter(|&v| g.degree(v) == 0) {
            out.push_str(&format!("{v}\n"));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn graph_from_edge_list(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("n") {
                let n: u64 = parse_id(parts.next().unwrap_or(""), lineno)?;
                for v in 1..=n {
                    g.add_vertex(v);
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|t| parse_id(t, lineno))
            .collect::<Result<Vec<_>>>()?;
        match ids.as_slice() {
            [v] => g.add_vertex(*v),
            [u, v] => g.add_edge(*u, *v)?,
            _ => return Err(Error::Input(format!("line {}: expected \"u v\"", lineno + 1))),
        }
    }
    Ok(g)
}

fn parse_id(token: &str, lineno: usize) -> Result<u64> {
    token
        .parse()
        .map_err(|_| Error::Input(format!("line {}: bad vertex id {token:?}", lineno + 1)))
}

/// Reads JSON or edge-list text, chosen by the first non-blank character.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        graph_from_json(text)
    } else {
        graph_from_edge_list(text)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Writes JSON for `.json` paths and an edge list otherwise.
pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e == "json") {
        graph_to_json(g)
    } else {
        graph_to_edge_list(g)
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn read_colors(path: &Path) -> Result<ColorAssignment> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_colors(path: &Path, c: &ColorAssignment) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(c)?)?;
    Ok(())
}
