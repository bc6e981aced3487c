//! Plain-text edge list and coordinate files.
//!
//! Graph files start with a header line `n <count>` followed by one
//! `i j w` line per edge, 1-based. Weights use the shortest decimal form
//! that round-trips, so save/load is lossless.

use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph, mut out: impl Write) -> Result<()> {
    writeln!(out, "n {}", g.n())?;
    for e in g.edges() {
        writeln!(out, "{} {} {:e}", e.i + 1, e.j + 1, e.weight)?;
    }
    Ok(())
}

fn content_lines(input: impl BufRead) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    input.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| match l {
        Ok(s) => {
            let t = s.trim();
            !t.is_empty() && !t.starts_with('#')
        }
        Err(_) => true,
    })
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what}")))
}

pub fn read_graph(input: impl BufRead) -> Result<Graph> {
    let mut lines = content_lines(input);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n <count>` header"))?;
    let header = header?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("n") {
        return Err(Error::parse(hline, "expected header `n <count>`"));
    }
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let mut edges = Vec::new();
    for (line, text) in lines {
        let text = text?;
        let mut toks = text.split_whitespace();
        let i: usize = field(toks.next(), line, "vertex i")?;
        let j: usize = field(toks.next(), line, "vertex j")?;
        let w: f64 = field(toks.next(), line, "weight")?;
        if toks.next().is_some() {
            return Err(Error::parse(line, "trailing fields"));
        }
        if i == 0 || j == 0 {
            return Err(Error::parse(line, "vertex indices are 1-based"));
        }
        edges.push((i - 1, j - 1, w));
    }
    Graph::new(n, edges)
}

/// Writes `i x y` lines, 1-based.
pub fn write_coords(coords: &[[f64; 2]], mut out: impl Write) -> Result<()> {
    for (i, [x, y]) in coords.iter().enumerate() {
        writeln!(out, "{} {:e} {:e}", i + 1, x, y)?;
    }
    Ok(())
}

pub fn read_coords(input: impl BufRead) -> Result<Vec<[f64; 2]>> {
    let mut coords = Vec::new();
    for (line, text) in content_lines(input) {
        let text = text?;
        let mut toks = text.split_whitespace();
        let i: usize = field(toks.next(), line, "index")?;
        if i != coords.len() + 1 {
            return Err(Error::parse(line, "coordinates must be listed in index order"));
        }
        coords.push([field(toks.next(), line, "x")?, field(toks.next(), line, "y")?]);
    }
    Ok(coords)
}
