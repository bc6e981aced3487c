//! Unweighted shortest-path (hop) distances.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;

use super::Graph;
use crate::error::{Error, Result};

/// Hop count between two vertices, or `Unreachable` across components.
///
/// Orders every finite distance below `Unreachable`, so `min` over a set
/// treats unreachable pairs as +inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopDistance {
    Finite(usize),
    Unreachable,
}

impl HopDistance {
    pub fn is_finite(self) -> bool {
        matches!(self, HopDistance::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            HopDistance::Finite(d) => Some(d),
            HopDistance::Unreachable => None,
        }
    }

    /// True when the distance is strictly greater than `hops`.
    pub fn exceeds(self, hops: usize) -> bool {
        match self {
            HopDistance::Finite(d) => d > hops,
            HopDistance::Unreachable => true,
        }
    }
}

impl fmt::Display for HopDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopDistance::Finite(d) => write!(f, "{d}"),
            HopDistance::Unreachable => f.write_str("unreachable"),
        }
    }
}

const UNSEEN: usize = usize::MAX;

fn multi_source_bfs(g: &Graph, sources: &[usize], limit: Option<usize>) -> Vec<usize> {
    let mut dist = vec![UNSEEN; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == UNSEEN {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        if limit.is_some_and(|l| next > l) {
            continue;
        }
        for &(u, _) in g.neighbors(v) {
            if dist[u] == UNSEEN {
                dist[u] = next;
                queue.push_back(u);
            }
        }
    }
    dist
}

fn wrap(d: usize) -> HopDistance {
    if d == UNSEEN {
        HopDistance::Unreachable
    } else {
        HopDistance::Finite(d)
    }
}

/// Hop distances from `source` to every vertex.
pub fn bfs_hops(g: &Graph, source: usize) -> Vec<HopDistance> {
    multi_source_bfs(g, &[source], None).into_iter().map(wrap).collect()
}

pub fn hop_distance(g: &Graph, i: usize, j: usize) -> Result<HopDistance> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    Ok(wrap(multi_source_bfs(g, &[i], None)[j]))
}

/// `min_{u in set} d(u, i)`.
pub fn set_distance(g: &Graph, set: &[usize], i: usize) -> Result<HopDistance> {
    if set.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    for &u in set {
        g.check_vertex(u)?;
    }
    g.check_vertex(i)?;
    Ok(wrap(multi_source_bfs(g, set, None)[i]))
}

/// Vertices within `radius` hops of `center` (the closed local set), in BFS
/// order starting with `center`.
pub fn ball(g: &Graph, center: usize, radius: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut out = vec![center];
    seen[center] = true;
    let mut frontier = vec![center];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out
}

/// All-pairs hop distances, one BFS per source.
#[derive(Debug, Clone)]
pub struct HopDistanceOracle {
    n: usize,
    table: Vec<usize>,
}

impl HopDistanceOracle {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let rows: Vec<Vec<usize>> = (0..n).into_par_iter().map(|s| multi_source_bfs(g, &[s], None)).collect();
        Self { n, table: rows.concat() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> HopDistance {
        wrap(self.table[i * self.n + j])
    }
}
