//! Weighted undirected simple graphs, their Laplacians and hop distances.

mod distance;
mod generate;
mod io;

pub use distance::{ball, bfs_hops, hop_distance, set_distance, HopDistance, HopDistanceOracle};
pub use generate::{gen_grid_knn, gen_random_geometric, SpatialGraph, DEFAULT_WEIGHT_FLOOR};
pub use io::{read_coords, read_graph, write_coords, write_graph};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::LinearOperator;

/// An undirected edge stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Weighted undirected simple graph on vertices `0..n`.
///
/// No self-loops, no parallel edges, all weights finite and strictly
/// positive. Edges are kept sorted by `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { index: a.max(b), n });
            }
            if a == b {
                return Err(Error::InvalidEdge { i: a, j: b, reason: "self-loop" });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidEdge { i: a, j: b, reason: "weight must be finite and positive" });
            }
            list.push(Edge { i: a.min(b), j: a.max(b), weight: w });
        }
        list.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = list.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::InvalidEdge { i: w[0].i, j: w[0].j, reason: "duplicate edge" });
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &list {
            adjacency[e.i].push((e.j, e.weight));
            adjacency[e.j].push((e.i, e.weight));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_by_key(|&(v, _)| v);
        }
        Ok(Self { n, edges: list, adjacency })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new(), adjacency: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `v` with edge weights, sorted by vertex.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// Weighted degree `d_v = sum_j w_vj`.
    pub fn degree(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> f64 {
        (0..self.n).map(|v| self.degree(v)).fold(0.0, f64::max)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        bfs_hops(self, 0).iter().all(|d| d.is_finite())
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { index: v, n: self.n })
        }
    }

    /// Sparse Laplacian for matrix-vector products.
    pub fn sparse_laplacian(&self) -> SparseLaplacian {
        SparseLaplacian::new(self)
    }
}

/// Dense combinatorial Laplacian `L = D - W`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    matrix: DMatrix<f64>,
}

pub fn build_laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.n();
    let mut matrix = DMatrix::zeros(n, n);
    for e in g.edges() {
        matrix[(e.i, e.j)] = -e.weight;
        matrix[(e.j, e.i)] = -e.weight;
    }
    for v in 0..n {
        // summing the row as stored keeps row sums at exact zero
        let off: f64 = g.neighbors(v).iter().map(|&(_, w)| w).sum();
        matrix[(v, v)] = off;
    }
    LaplacianMatrix { matrix }
}

impl LaplacianMatrix {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max_i 2 d_i`, an upper bound on the largest eigenvalue.
    pub fn spectral_bound(&self) -> f64 {
        self.matrix.diagonal().iter().fold(0.0f64, |acc, &d| acc.max(2.0 * d))
    }
}

impl LinearOperator for LaplacianMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.matrix.apply(x, out);
    }
}

/// Laplacian in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct SparseLaplacian {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
    degree: Vec<f64>,
}

impl SparseLaplacian {
    fn new(g: &Graph) -> Self {
        let mut row_ptr = Vec::with_capacity(g.n() + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut degree = Vec::with_capacity(g.n());
        row_ptr.push(0);
        for v in 0..g.n() {
            for &(u, w) in g.neighbors(v) {
                cols.push(u);
                values.push(w);
            }
            row_ptr.push(cols.len());
            degree.push(g.degree(v));
        }
        Self { row_ptr, cols, values, degree }
    }

    pub fn spectral_bound(&self) -> f64 {
        self.degree.iter().fold(0.0f64, |acc, &d| acc.max(2.0 * d))
    }
}

impl LinearOperator for SparseLaplacian {
    fn dim(&self) -> usize {
        self.degree.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (v, o) in out.iter_mut().enumerate() {
            let mut acc = self.degree[v] * x[v];
            for idx in self.row_ptr[v]..self.row_ptr[v + 1] {
                acc -= self.values[idx] * x[self.cols[idx]];
            }
            *o = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_single_edge() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let l = build_laplacian(&g);
        assert_eq!(l.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn laplacian_of_triangle() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let l = build_laplacian(&g);
        let expected = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
        assert_eq!(l.matrix(), &expected);
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(matches!(Graph::new(3, [(1, 1, 1.0)]), Err(Error::InvalidEdge { .. })));
        assert!(matches!(Graph::new(3, [(0, 1, 0.0)]), Err(Error::InvalidEdge { .. })));
        assert!(matches!(Graph::new(3, [(0, 1, -2.0)]), Err(Error::InvalidEdge { .. })));
        assert!(matches!(Graph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]), Err(Error::InvalidEdge { .. })));
        assert!(matches!(Graph::new(3, [(0, 3, 1.0)]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let g = Graph::new(4, [(0, 1, 0.5), (1, 2, 2.0), (2, 3, 1.5), (0, 3, 0.25)]).unwrap();
        let dense = build_laplacian(&g);
        let sparse = g.sparse_laplacian();
        let x = [1.0, -2.0, 0.5, 3.0];
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        dense.apply(&x, &mut a);
        sparse.apply(&x, &mut b);
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-14);
        }
        assert_eq!(dense.spectral_bound(), sparse.spectral_bound());
    }
}
