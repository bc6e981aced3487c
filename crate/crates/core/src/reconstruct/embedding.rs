//! How far a drawn plan is from an isometric embedding of the band.

use nalgebra::{DMatrix, SymmetricEigen};

use super::least_squares::weighted_band_matrix;
use crate::error::{Error, Result};
use crate::sampling::SamplePlan;
use crate::spectral::SpectralBasis;

/// How the extreme singular values enter `delta_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaScaling {
    /// `s = sigma^2 / m`, the eigenvalues of `(1/m) A^T A`, comparable with
    /// the squared norms of the frame inequality.
    #[default]
    Squared,
    /// `s = sigma / m` with unsquared singular values.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingDiagnostic {
    /// `max(lower_deviation, upper_deviation)`.
    pub delta: f64,
    /// `1 - s_min / c1`.
    pub lower_deviation: f64,
    /// `s_max / c2 - 1`.
    pub upper_deviation: f64,
    /// Extreme singular values of `A = P^{-1/2} Psi U_k`.
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub m: usize,
    pub c1: f64,
    pub c2: f64,
}

pub fn delta_lower_bound(
    plan: &SamplePlan,
    basis: &SpectralBasis,
    k: usize,
    c1: f64,
    c2: f64,
) -> Result<EmbeddingDiagnostic> {
    delta_lower_bound_with(plan, basis, k, c1, c2, DeltaScaling::Squared)
}

pub fn delta_lower_bound_with(
    plan: &SamplePlan,
    basis: &SpectralBasis,
    k: usize,
    c1: f64,
    c2: f64,
    scaling: DeltaScaling,
) -> Result<EmbeddingDiagnostic> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::param("c1/c2", "band constants must be positive"));
    }
    let a = weighted_band_matrix(plan, basis, k)?;
    Ok(diagnostic_from_matrix(&a, c1, c2, scaling))
}

/// Diagnostic for an explicit `m x k` matrix `A = P^{-1/2} Psi U_k`;
/// `c1`, `c2` must be positive.
pub(crate) fn diagnostic_from_matrix(a: &DMatrix<f64>, c1: f64, c2: f64, scaling: DeltaScaling) -> EmbeddingDiagnostic {
    let gram = a.tr_mul(a);
    let eig = SymmetricEigen::new(gram).eigenvalues;
    let lo = eig.min().max(0.0);
    let hi = eig.max().max(0.0);
    let (sigma_min, sigma_max) = (lo.sqrt(), hi.sqrt());
    let m = a.nrows() as f64;
    let (s_min, s_max) = match scaling {
        DeltaScaling::Squared => (lo / m, hi / m),
        DeltaScaling::Literal => (sigma_min / m, sigma_max / m),
    };
    let lower_deviation = 1.0 - s_min / c1;
    let upper_deviation = s_max / c2 - 1.0;
    EmbeddingDiagnostic {
        delta: lower_deviation.max(upper_deviation),
        lower_deviation,
        upper_deviation,
        sigma_min,
        sigma_max,
        m: a.nrows(),
        c1,
        c2,
    }
}

impl EmbeddingDiagnostic {
    /// Whether `(1-delta) c1 ||x||^2 <= (1/m) ||P^{-1/2} Psi x||^2 <= (1+delta) c2 ||x||^2`
    /// holds on the whole band, under the squared scaling.
    pub fn satisfies_frame(&self, delta: f64) -> bool {
        let m = self.m as f64;
        let (lo, hi) = (self.sigma_min.powi(2) / m, self.sigma_max.powi(2) / m);
        lo >= (1.0 - delta) * self.c1 && hi <= (1.0 + delta) * self.c2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, Graph};
    use crate::sampling::{assemble_plan, kernel_matrix, uniform_distribution, KernelPoly};
    use crate::spectral::eigendecompose;

    #[test]
    fn every_vertex_once_is_isometric() {
        let g = Graph::new(6, [(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (3, 4, 1.0), (4, 5, 0.7), (0, 5, 1.2)]).unwrap();
        let l = build_laplacian(&g);
        let basis = eigendecompose(&l).unwrap();
        let op = kernel_matrix(&l, &KernelPoly::identity());
        let p = uniform_distribution(6).unwrap();
        let omega: Vec<usize> = (0..6).collect();
        let plan = assemble_plan(&op, &p, &omega, &[0.0; 6]).unwrap();
        for k in 1..=6 {
            let d = delta_lower_bound(&plan, &basis, k, 1.0, 1.0).unwrap();
            assert!(d.delta.abs() < 1e-12, "k={k}: {}", d.delta);
            assert!(d.satisfies_frame(1e-9));
            let lit = delta_lower_bound_with(&plan, &basis, k, 1.0, 1.0, DeltaScaling::Literal).unwrap();
            // sigma = sqrt(6), so 1 - sqrt(6)/6
            assert!((lit.lower_deviation - (1.0 - 6f64.sqrt() / 6.0)).abs() < 1e-12);
        }
    }
}
