//! Graph generators: random geometric graphs and pixel-grid k-NN graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Gaussian-kernel weights below this are dropped unless overridden.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-6;

/// A graph together with planar vertex coordinates.
#[derive(Debug, Clone)]
pub struct SpatialGraph {
    pub graph: Graph,
    pub coords: Vec<[f64; 2]>,
}

/// Points uniform on the unit square; an edge joins every pair closer than
/// `radius`, weighted by `exp(-d^2 / (2 sigma^2))` and dropped when the
/// weight falls below `weight_floor`.
pub fn gen_random_geometric(
    n: usize,
    radius: f64,
    kernel_sigma: f64,
    weight_floor: f64,
    seed: u64,
) -> Result<SpatialGraph> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::param("radius", format!("must be positive, got {radius}")));
    }
    if !(kernel_sigma > 0.0 && kernel_sigma.is_finite()) {
        return Err(Error::param("sigma", format!("must be positive, got {kernel_sigma}")));
    }
    if !(weight_floor >= 0.0) {
        return Err(Error::param("weight_floor", format!("must be non-negative, got {weight_floor}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
    let two_sigma_sq = 2.0 * kernel_sigma * kernel_sigma;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            let d2 = dx * dx + dy * dy;
            if d2.sqrt() < radius {
                let w = (-d2 / two_sigma_sq).exp();
                if w >= weight_floor && w > 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
    }
    Ok(SpatialGraph { graph: Graph::new(n, edges)?, coords })
}

/// The `k_nn` nearest pixels of pixel `v` (excluding itself), ties broken by
/// ascending vertex index. Pixels are numbered row-major.
fn pixel_neighbors(width: usize, height: usize, v: usize, k_nn: usize) -> Vec<usize> {
    let (r0, c0) = ((v / width) as i64, (v % width) as i64);
    let mut half = 1i64;
    loop {
        let mut cand: Vec<(i64, usize)> = Vec::new();
        let (rlo, rhi) = ((r0 - half).max(0), (r0 + half).min(height as i64 - 1));
        let (clo, chi) = ((c0 - half).max(0), (c0 + half).min(width as i64 - 1));
        for r in rlo..=rhi {
            for c in clo..=chi {
                if r == r0 && c == c0 {
                    continue;
                }
                let d2 = (r - r0).pow(2) + (c - c0).pow(2);
                cand.push((d2, r as usize * width + c as usize));
            }
        }
        cand.sort_unstable();
        // pixels outside the window are more than `half` away, so the
        // window is conclusive once the k-th candidate lies within it
        let covers_all = rlo == 0 && clo == 0 && rhi == height as i64 - 1 && chi == width as i64 - 1;
        if cand.len() >= k_nn && (cand[k_nn - 1].0 <= half * half || covers_all) {
            return cand.into_iter().take(k_nn).map(|(_, u)| u).collect();
        }
        half *= 2;
    }
}

/// Pixel grid where each pixel links to its `k_nn` nearest pixels by
/// coordinate distance, symmetrized by union, unit weights.
pub fn gen_grid_knn(width: usize, height: usize, k_nn: usize) -> Result<SpatialGraph> {
    let n = width.checked_mul(height).unwrap_or(0);
    if width == 0 || height == 0 || k_nn == 0 || n < k_nn + 1 {
        return Err(Error::DegenerateGrid { width, height, k_nn });
    }
    let mut edges = Vec::with_capacity(n * k_nn);
    for v in 0..n {
        for u in pixel_neighbors(width, height, v, k_nn) {
            edges.push((v.min(u), v.max(u)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let coords = (0..n).map(|v| [(v % width) as f64, (v / width) as f64]).collect();
    let graph = Graph::new(n, edges.into_iter().map(|(a, b)| (a, b, 1.0)))?;
    Ok(SpatialGraph { graph, coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_has_no_edges() {
        let g = gen_random_geometric(1, 0.5, 0.1, DEFAULT_WEIGHT_FLOOR, 3).unwrap();
        assert_eq!(g.graph.n(), 1);
        assert!(g.graph.edges().is_empty());
    }

    #[test]
    fn six_hundred_vertices() {
        let g = gen_random_geometric(600, 0.08, 0.05, DEFAULT_WEIGHT_FLOOR, 11).unwrap();
        assert_eq!(g.graph.n(), 600);
        assert_eq!(g.coords.len(), 600);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = gen_random_geometric(80, 0.2, 0.1, DEFAULT_WEIGHT_FLOOR, 42).unwrap();
        let b = gen_random_geometric(80, 0.2, 0.1, DEFAULT_WEIGHT_FLOOR, 42).unwrap();
        let c = gen_random_geometric(80, 0.2, 0.1, DEFAULT_WEIGHT_FLOOR, 43).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_ne!(a.graph.edges(), c.graph.edges());
    }

    #[test]
    fn weight_floor_drops_light_edges() {
        let dense = gen_random_geometric(60, 0.5, 0.05, 0.0, 5).unwrap();
        let floored = gen_random_geometric(60, 0.5, 0.05, 0.5, 5).unwrap();
        assert!(floored.graph.edges().len() < dense.graph.edges().len());
        assert!(floored.graph.edges().iter().all(|e| e.weight >= 0.5));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_random_geometric(0, 0.1, 0.1, 0.0, 0).is_err());
        assert!(gen_random_geometric(5, 0.0, 0.1, 0.0, 0).is_err());
        assert!(gen_random_geometric(5, 0.1, -1.0, 0.0, 0).is_err());
    }

    #[test]
    fn two_pixels_one_edge() {
        let g = gen_grid_knn(1, 2, 1).unwrap();
        assert_eq!(g.graph.edges().len(), 1);
    }

    #[test]
    fn full_size_pixel_grid() {
        let g = gen_grid_knn(256, 256, 10).unwrap();
        assert_eq!(g.graph.n(), 65536);
    }

    #[test]
    fn degenerate_grid() {
        assert!(matches!(gen_grid_knn(2, 2, 4), Err(Error::DegenerateGrid { .. })));
        assert!(matches!(gen_grid_knn(0, 5, 1), Err(Error::DegenerateGrid { .. })));
    }
}
