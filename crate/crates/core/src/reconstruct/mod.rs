//! Decoders and reconstruction quality metrics.

mod embedding;
mod least_squares;
mod metrics;
mod tikhonov;

pub(crate) use embedding::diagnostic_from_matrix;
pub use embedding::{delta_lower_bound, delta_lower_bound_with, DeltaScaling, EmbeddingDiagnostic};
pub use least_squares::reconstruct_bandlimited_ls;
pub use metrics::{energy_ratio, energy_ratio_profile, relative_error, snr, SNR_CAP_DB};
pub use tikhonov::{reconstruct_tikhonov, tikhonov_objective, TikhonovSystem};

use std::fmt;

use nalgebra::DVector;

use crate::error::Result;
use crate::sampling::SamplePlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    Tikhonov,
    BandlimitedLeastSquares,
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decoder::Tikhonov => "tikhonov",
            Decoder::BandlimitedLeastSquares => "bandlimited-ls",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub x: DVector<f64>,
    pub decoder: Decoder,
    /// `||P^{-1/2} (Psi x - y)||_2`.
    pub residual_norm: f64,
    pub relative_error: Option<f64>,
}

impl ReconstructionResult {
    pub(crate) fn new(plan: &SamplePlan, x: DVector<f64>, decoder: Decoder) -> Self {
        let residual = plan.psi() * &x - plan.y();
        let residual_norm = residual.iter().zip(plan.p_omega()).map(|(r, p)| r * r / p).sum::<f64>().sqrt();
        Self { x, decoder, residual_norm, relative_error: None }
    }

    /// Records the relative error against a known ground truth.
    pub fn with_truth(mut self, truth: &[f64]) -> Result<Self> {
        self.relative_error = Some(relative_error(self.x.as_slice(), truth)?);
        Ok(self)
    }
}
