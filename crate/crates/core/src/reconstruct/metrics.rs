use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

/// Reported in place of +inf for an exact reconstruction.
pub const SNR_CAP_DB: f64 = 300.0;

/// `||x* - x||_2 / ||x||_2`.
pub fn relative_error(x_star: &[f64], x: &[f64]) -> Result<f64> {
    if x_star.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: x_star.len() });
    }
    let reference = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    let diff = x_star.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok(diff / reference)
}

/// `-10 log10(||X* - X||_F / ||X||_F)` in decibels, capped at
/// [`SNR_CAP_DB`].
pub fn snr(x_star: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<f64> {
    if x_star.shape() != x.shape() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: x_star.len() });
    }
    let ratio = relative_error(x_star.as_slice(), x.as_slice())?;
    Ok(if ratio == 0.0 { SNR_CAP_DB } else { (-10.0 * ratio.log10()).min(SNR_CAP_DB) })
}

/// `||U_k U_k^T X||_F / ||X||_F` for `X` with one graph signal per column.
pub fn energy_ratio(basis: &SpectralBasis, k: usize, x: &DMatrix<f64>) -> Result<f64> {
    basis.check_bandwidth(k)?;
    Ok(energy_ratio_profile(basis, x)?[k - 1])
}

/// Energy ratios for every bandwidth `k = 1..=n`, non-decreasing in `k`.
pub fn energy_ratio_profile(basis: &SpectralBasis, x: &DMatrix<f64>) -> Result<Vec<f64>> {
    if x.nrows() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: x.nrows() });
    }
    let total = x.norm_squared();
    if total == 0.0 {
        return Err(Error::ZeroReference);
    }
    // U orthonormal: ||U_k U_k^T X||_F = ||U_k^T X||_F
    let coeffs = basis.vectors().tr_mul(x);
    let mut acc = 0.0;
    Ok(coeffs
        .row_iter()
        .map(|r| {
            acc += r.norm_squared();
            (acc / total).sqrt().min(1.0)
        })
        .collect())
}
