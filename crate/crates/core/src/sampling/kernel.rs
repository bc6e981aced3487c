//! Measurement operators `Phi = g(L)` for polynomial kernels `g`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::linalg::LinearOperator;
use crate::spectral::SpectralBasis;

/// Polynomial `g(t) = sum_i alpha_i t^i`, constant term first.
///
/// The degree bounds the geodesic width of `g(L)`: row `i` of `g(L)` is
/// supported on vertices within `degree` hops of `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPoly {
    coeffs: Vec<f64>,
}

impl KernelPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("kernel", "at least one coefficient is required"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("kernel", "coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    /// `g = 1`, so `Phi = I`: plain vertex sampling.
    pub fn identity() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// `g(t) = 1 + t`, so `Phi = I + L`.
    pub fn one_plus_laplacian() -> Self {
        Self { coeffs: vec![1.0, 1.0] }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a)
    }

    /// Fails if `|g(lambda_i)| < 1e-12` for some eigenvalue.
    pub fn check_nonvanishing(&self, basis: &SpectralBasis) -> Result<()> {
        for (index, &lambda) in basis.eigenvalues().iter().enumerate() {
            let value = self.eval(lambda);
            if value.abs() < 1e-12 {
                return Err(Error::KernelVanishes { index: index + 1, lambda, value });
            }
        }
        Ok(())
    }

    /// `(c1, c2) = (min, max)` of `g(lambda_j)^2` over the first `k` eigenvalues.
    pub fn band_constants(&self, basis: &SpectralBasis, k: usize) -> Result<(f64, f64)> {
        basis.check_bandwidth(k)?;
        let sq = basis.eigenvalues()[..k].iter().map(|&l| self.eval(l).powi(2));
        Ok(sq.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// `sum_{j <= k} g(lambda_j)^2`.
    pub fn band_energy(&self, basis: &SpectralBasis, k: usize) -> Result<f64> {
        basis.check_bandwidth(k)?;
        Ok(basis.eigenvalues()[..k].iter().map(|&l| self.eval(l).powi(2)).sum())
    }

    /// `g(L) v` by Horner's rule using only products with `L`.
    pub fn apply(&self, op: &dyn LinearOperator, v: &[f64]) -> Vec<f64> {
        let mut acc: Vec<f64> = v.iter().map(|x| self.coeffs[self.degree()] * x).collect();
        let mut scratch = vec![0.0; v.len()];
        for &a in self.coeffs.iter().rev().skip(1) {
            op.apply(&acc, &mut scratch);
            for ((s, x), o) in scratch.iter().zip(v).zip(acc.iter_mut()) {
                *o = s + a * x;
            }
        }
        acc
    }
}

impl FromStr for KernelPoly {
    type Err = Error;

    /// Comma-separated coefficients, constant term first: `"1,1"` is `I + L`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim().parse::<f64>().map_err(|_| Error::param("kernel", format!("bad coefficient `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for KernelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Dense `Phi = g(L)`; row `i` is the measurement vector `phi_i`.
#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    phi: DMatrix<f64>,
    poly: KernelPoly,
}

/// `Phi = sum_i alpha_i L^i` by Horner iteration on matrices.
pub fn kernel_matrix(l: &LaplacianMatrix, poly: &KernelPoly) -> MeasurementOperator {
    let n = l.n();
    let lm = l.matrix();
    let c = poly.coefficients();
    let deg = poly.degree();
    let mut phi = if deg == 0 {
        DMatrix::identity(n, n) * c[0]
    } else {
        // first Horner step without a product: alpha_L L + alpha_{L-1} I
        let mut p = lm * c[deg];
        for i in 0..n {
            p[(i, i)] += c[deg - 1];
        }
        p
    };
    for &a in c.iter().rev().skip(2) {
        phi = &phi * lm;
        for i in 0..n {
            phi[(i, i)] += a;
        }
    }
    // g(L) is symmetric; remove product round-off asymmetry
    if deg >= 2 {
        phi = (&phi + phi.transpose()) * 0.5;
    }
    MeasurementOperator { phi, poly: poly.clone() }
}

/// [`kernel_matrix`] after checking `g(lambda_i) != 0` on the spectrum.
pub fn kernel_matrix_checked(
    l: &LaplacianMatrix,
    poly: &KernelPoly,
    basis: &SpectralBasis,
) -> Result<MeasurementOperator> {
    poly.check_nonvanishing(basis)?;
    Ok(kernel_matrix(l, poly))
}

impl MeasurementOperator {
    pub fn n(&self) -> usize {
        self.phi.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn poly(&self) -> &KernelPoly {
        &self.poly
    }

    /// `phi_i` as a dense vector (`Phi` is symmetric, so column `i`).
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.phi.as_slice()[i * n..(i + 1) * n]
    }

    /// Nonzero positions and values of `phi_i`.
    pub fn row_support(&self, i: usize) -> Vec<(usize, f64)> {
        self.row(i).iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (j, v)).collect()
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.phi * x
    }
}

/// `y = <phi_node, x>`.
pub fn local_measure(op: &MeasurementOperator, x: &[f64], node: usize) -> Result<f64> {
    if node >= op.n() {
        return Err(Error::VertexOutOfRange { index: node, n: op.n() });
    }
    if x.len() != op.n() {
        return Err(Error::DimensionMismatch { expected: op.n(), found: x.len() });
    }
    Ok(op.row(node).iter().zip(x).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, Graph};

    fn p3() -> LaplacianMatrix {
        build_laplacian(&Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap())
    }

    #[test]
    fn parses_and_formats() {
        let k: KernelPoly = "1, 1".parse().unwrap();
        assert_eq!(k, KernelPoly::one_plus_laplacian());
        assert_eq!(k.to_string(), "1,1");
        assert_eq!("0.5,-2,1".parse::<KernelPoly>().unwrap().degree(), 2);
        assert!("".parse::<KernelPoly>().is_err());
        assert!("1,x".parse::<KernelPoly>().is_err());
    }

    #[test]
    fn horner_eval() {
        let k = KernelPoly::new(vec![0.5, -2.0, 1.0]).unwrap();
        assert_eq!(k.eval(3.0), 0.5 - 6.0 + 9.0);
    }

    #[test]
    fn identity_kernel_is_identity() {
        let op = kernel_matrix(&p3(), &KernelPoly::identity());
        assert_eq!(op.matrix(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn one_plus_l() {
        let l = p3();
        let op = kernel_matrix(&l, &KernelPoly::one_plus_laplacian());
        assert_eq!(op.matrix(), &(DMatrix::identity(3, 3) + l.matrix()));
    }

    #[test]
    fn local_measure_p3() {
        let op = kernel_matrix(&p3(), &KernelPoly::one_plus_laplacian());
        // x_2 + (Lx)_2 = 2 + (2*2 - 1 - 3)
        assert_eq!(local_measure(&op, &[1.0, 2.0, 3.0], 1).unwrap(), 2.0);
        assert_eq!(local_measure(&op, &[0.0; 3], 2).unwrap(), 0.0);
        let id = kernel_matrix(&p3(), &KernelPoly::identity());
        assert_eq!(local_measure(&id, &[1.0, 2.0, 3.0], 2).unwrap(), 3.0);
        assert!(local_measure(&op, &[0.0; 3], 3).is_err());
    }

    #[test]
    fn vanishing_kernel_rejected() {
        let l = p3();
        let basis = crate::spectral::eigendecompose(&l).unwrap();
        // g(t) = 1 - t vanishes at lambda = 1 of P3
        let g = KernelPoly::new(vec![1.0, -1.0]).unwrap();
        assert!(matches!(kernel_matrix_checked(&l, &g, &basis), Err(Error::KernelVanishes { index: 2, .. })));
    }

    #[test]
    fn operator_apply_matches_matrix() {
        let l = p3();
        let g = KernelPoly::new(vec![0.5, -2.0, 1.0]).unwrap();
        let op = kernel_matrix(&l, &g);
        let v = [1.0, -0.5, 2.0];
        let via_poly = g.apply(&l, &v);
        let via_matrix = op.apply(&DVector::from_row_slice(&v));
        for (a, b) in via_poly.iter().zip(via_matrix.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
