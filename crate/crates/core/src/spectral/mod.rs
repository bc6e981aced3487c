//! Laplacian eigenbasis, bandlimited signals and low-pass filtering.

mod filter;
mod signal;

pub use filter::{cheby_lowpass_apply, ideal_lowpass_apply, ChebyshevLowPass, LowPassSpec};
pub use signal::{synth_bandlimited, GraphSignal};

use nalgebra::{DMatrix, DMatrixView};

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::linalg::symmetric_eigen;

/// Eigenpairs of a graph Laplacian: eigenvalues ascending, orthonormal
/// eigenvectors as the columns of `U`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    vectors: DMatrix<f64>,
}

pub fn eigendecompose(l: &LaplacianMatrix) -> Result<SpectralBasis> {
    let (mut eigenvalues, vectors) = symmetric_eigen(l.matrix())?;
    // L is PSD; clamp round-off below zero
    for v in &mut eigenvalues {
        if *v < 0.0 && *v > -1e-9 * l.spectral_bound().max(1.0) {
            *v = 0.0;
        }
    }
    Ok(SpectralBasis { eigenvalues, vectors })
}

impl SpectralBasis {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// `U_k`, the first `k` eigenvectors.
    pub fn band(&self, k: usize) -> DMatrixView<'_, f64> {
        self.vectors.columns(0, k)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub(crate) fn check_bandwidth(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n() {
            return Err(Error::param("k", format!("bandwidth must lie in 1..={}, got {k}", self.n())));
        }
        Ok(())
    }

    /// Rejects `k` when `lambda_k == lambda_{k+1}` (numerically), since the
    /// band `span(U_k)` is then not determined by the spectrum.
    pub fn check_band_edge(&self, k: usize) -> Result<()> {
        self.check_bandwidth(k)?;
        if k < self.n() {
            let (a, b) = (self.eigenvalues[k - 1], self.eigenvalues[k]);
            if (b - a).abs() <= 1e-10 * self.lambda_max().max(1.0) {
                return Err(Error::DegenerateBandEdge { k, value: a });
            }
        }
        Ok(())
    }

    /// Cutoff placed halfway between `lambda_k` and `lambda_{k+1}` (or at
    /// `lambda_n` when `k == n`). The ideal filter at this cutoff passes
    /// exactly the first `k` modes, and a smoothed step centred here keeps
    /// the transition away from both eigenvalues.
    pub fn band_cutoff(&self, k: usize) -> Result<f64> {
        self.check_band_edge(k)?;
        Ok(if k < self.n() { 0.5 * (self.eigenvalues[k - 1] + self.eigenvalues[k]) } else { self.eigenvalues[k - 1] })
    }

    /// Writes one CSV row per eigenpair: `lambda` then the eigenvector.
    pub fn write_csv(&self, mut out: impl std::io::Write) -> Result<()> {
        let n = self.n();
        write!(out, "lambda")?;
        for i in 1..=n {
            write!(out, ",u{i}")?;
        }
        writeln!(out)?;
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            write!(out, "{lambda:e}")?;
            for i in 0..n {
                write!(out, ",{:e}", self.vectors[(i, j)])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, Graph};

    #[test]
    fn p2_spectrum() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let b = eigendecompose(&build_laplacian(&g)).unwrap();
        assert!((b.eigenvalues()[0]).abs() < 1e-14);
        assert!((b.eigenvalues()[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn k3_spectrum_and_degenerate_edge() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let b = eigendecompose(&build_laplacian(&g)).unwrap();
        let ev = b.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12 && (ev[2] - 3.0).abs() < 1e-12);
        assert!(b.check_band_edge(1).is_ok());
        assert!(matches!(b.check_band_edge(2), Err(Error::DegenerateBandEdge { k: 2, .. })));
        assert!(b.check_band_edge(3).is_ok());
    }

    #[test]
    fn band_cutoff_sits_in_gap() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let b = eigendecompose(&build_laplacian(&g)).unwrap();
        // path P3: 0, 1, 3
        assert!((b.band_cutoff(2).unwrap() - 2.0).abs() < 1e-12);
        assert!((b.band_cutoff(3).unwrap() - 3.0).abs() < 1e-12);
        assert!(b.band_cutoff(0).is_err());
        assert!(b.band_cutoff(4).is_err());
    }

    #[test]
    fn basis_csv_shape() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let b = eigendecompose(&build_laplacian(&g)).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,u1,u2");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').count(), 3);
    }
}
