#![allow(dead_code)]

use locsamp::graph::{build_laplacian, gen_random_geometric, Graph, LaplacianMatrix};
use locsamp::spectral::{eigendecompose, SpectralBasis};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub graph: Graph,
    pub laplacian: LaplacianMatrix,
    pub basis: SpectralBasis,
}

pub fn instance(graph: Graph) -> Instance {
    let laplacian = build_laplacian(&graph);
    let basis = eigendecompose(&laplacian).unwrap();
    Instance { graph, laplacian, basis }
}

pub fn rgg(n: usize, radius: f64, seed: u64) -> Graph {
    gen_random_geometric(n, radius, radius / 2.0, 1e-6, seed).unwrap().graph
}

/// Random weighted graph: a spanning path plus random chords.
pub fn random_weighted(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|i| (i, i + 1, rng.random_range(0.1..2.0))).collect();
    while edges.len() < n - 1 + extra {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        let (i, j) = (i.min(j), i.max(j));
        if i != j && !edges.iter().any(|e| e.0 == i && e.1 == j) {
            edges.push((i, j, rng.random_range(0.1..2.0)));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random sparse graph that may be disconnected.
pub fn random_sparse(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, rng.random_range(0.1..2.0)));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// `clusters` dense random-geometric blobs of `size` vertices joined in a
/// chain by single weak edges, which opens a wide gap above eigenvalue
/// number `clusters`.
pub fn clustered(clusters: usize, size: usize, seed: u64) -> Graph {
    let mut edges = Vec::new();
    for c in 0..clusters {
        let blob = gen_random_geometric(size, 0.6, 0.5, 1e-6, seed + c as u64).unwrap().graph;
        let off = c * size;
        edges.extend(blob.edges().iter().map(|e| (e.i + off, e.j + off, e.weight)));
        if c > 0 {
            edges.push((off - 1, off, 0.05));
        }
    }
    Graph::new(clusters * size, edges).unwrap()
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// 64x64 test image: smooth shading, two flat shapes and a striped patch.
pub fn test_image() -> DMatrix<f64> {
    use std::f64::consts::PI;
    DMatrix::from_fn(64, 64, |r, c| {
        let (x, y) = (c as f64, r as f64);
        let mut v = 120.0 + 40.0 * (2.0 * PI * x / 80.0).sin() * (2.0 * PI * y / 100.0).cos();
        if (x - 22.0).powi(2) + (y - 20.0).powi(2) < 100.0 {
            v += 60.0;
        }
        if (36.0..58.0).contains(&x) && (40.0..56.0).contains(&y) {
            v -= 70.0;
        }
        if (x - 45.0).powi(2) + (y - 18.0).powi(2) < 120.0 {
            v += 25.0 * (2.0 * PI * (x + y) / 7.0).sin();
        }
        v.round().clamp(0.0, 255.0)
    })
}
