//! Plain-text graph format.
//!
//! ```text
//! # erode-graph v1 n=5 radius=1.5 source=exact
//! 2:0.9433981132056604 1:1
//! ...
//! ```
//!
//! The header is followed by exactly `n` lines, one per sample in id order.
//! Each line holds space-separated `id:dist` pairs in ascending distance;
//! an isolated sample has an empty line. Distances are written in Rust's
//! shortest round-trip form, so reading a written graph reproduces it
//! exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{GraphSource, Neighbor, RnnGraph};
use crate::error::{Error, Result};

pub const GRAPH_FORMAT_HEADER: &str = "# erode-graph v1";

pub fn write_graph_to<W: Write>(g: &RnnGraph, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "{GRAPH_FORMAT_HEADER} n={} radius={} source={}",
        g.len(),
        g.radius(),
        g.source().name()
    )?;
    for list in g.lists() {
        let mut first = true;
        for e in list {
            if !first {
                out.write_all(b" ")?;
            }
            first = false;
            write!(out, "{}:{}", e.id, e.dist)?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_graph(g: &RnnGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_graph_to(g, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<RnnGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header".into()))?
        .map_err(|e| Error::io(path, e))?;
    let fields = header
        .strip_prefix(GRAPH_FORMAT_HEADER)
        .ok_or_else(|| parse_err(1, format!("expected header '{GRAPH_FORMAT_HEADER} ...'")))?;

    let (mut n, mut radius, mut source) = (None, None, None);
    for field in fields.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("malformed header field '{field}'")))?;
        match key {
            "n" => n = value.parse::<usize>().ok(),
            "radius" => radius = value.parse::<f64>().ok(),
            "source" => source = value.parse::<GraphSource>().ok(),
            _ => {}
        }
    }
    let (n, radius, source) = match (n, radius, source) {
        (Some(n), Some(r), Some(s)) => (n, r, s),
        _ => return Err(parse_err(1, "header needs n=, radius= and source=".into())),
    };

    let mut lists = Vec::with_capacity(n);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if lists.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(parse_err(
                lineno,
                format!("more than n = {n} adjacency lines"),
            ));
        }
        let list = line
            .split_whitespace()
            .map(|tok| {
                let (id, dist) = tok
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, format!("expected id:dist, got '{tok}'")))?;
                let id = id
                    .parse::<usize>()
                    .map_err(|e| parse_err(lineno, format!("bad id '{id}': {e}")))?;
                let dist = dist
                    .parse::<f64>()
                    .map_err(|e| parse_err(lineno, format!("bad distance '{dist}': {e}")))?;
                Ok(Neighbor::new(id, dist))
            })
            .collect::<Result<Vec<_>>>()?;
        lists.push(list);
    }
    if lists.len() != n {
        return Err(parse_err(
            lists.len() + 2,
            format!("expected {n} adjacency lines, found {}", lists.len()),
        ));
    }
    RnnGraph::from_lists(lists, radius, source)
}
