use nalgebra::{DMatrix, DVector, SVD};

use super::{Decoder, ReconstructionResult};
use crate::error::{Error, Result};
use crate::sampling::SamplePlan;
use crate::spectral::SpectralBasis;

/// `P^{-1/2} Psi U_k`, the sampled band matrix.
pub(crate) fn weighted_band_matrix(plan: &SamplePlan, basis: &SpectralBasis, k: usize) -> Result<DMatrix<f64>> {
    basis.check_bandwidth(k)?;
    if plan.n() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: plan.n() });
    }
    let mut a = plan.psi() * basis.band(k);
    for (mut row, p) in a.row_iter_mut().zip(plan.p_omega()) {
        row /= p.sqrt();
    }
    Ok(a)
}

/// Least squares on the band: `x_hat = argmin ||P^{-1/2}(Psi U_k x_hat - y)||`,
/// `x* = U_k x_hat`. Fails when the sampled band matrix loses rank.
pub fn reconstruct_bandlimited_ls(plan: &SamplePlan, basis: &SpectralBasis, k: usize) -> Result<ReconstructionResult> {
    let a = weighted_band_matrix(plan, basis, k)?;
    let b = DVector::from_iterator(plan.m(), plan.y().iter().zip(plan.p_omega()).map(|(y, p)| y / p.sqrt()));
    let svd = SVD::new(a, true, true);
    let smax = svd.singular_values.max();
    let tol = smax * plan.m().max(k) as f64 * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    if rank < k || !(smax > 0.0) {
        return Err(Error::RankDeficient { rank, k });
    }
    let coeffs = svd.solve(&b, tol).map_err(|_| Error::RankDeficient { rank, k })?;
    let x = basis.band(k) * coeffs;
    Ok(ReconstructionResult::new(plan, x, Decoder::BandlimitedLeastSquares))
}
