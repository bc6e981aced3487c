use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SpectralBasis;
use crate::error::Result;

/// A real signal on the vertices, optionally tagged with the bandwidth and
/// Fourier coefficients it was synthesized from.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    pub values: DVector<f64>,
    pub band: Option<(usize, DVector<f64>)>,
}

impl GraphSignal {
    pub fn new(values: DVector<f64>) -> Self {
        Self { values, band: None }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bandwidth(&self) -> Option<usize> {
        self.band.as_ref().map(|(k, _)| *k)
    }
}

impl From<DVector<f64>> for GraphSignal {
    fn from(values: DVector<f64>) -> Self {
        Self::new(values)
    }
}

/// `x = U_k x_hat` with `x_hat` i.i.d. uniform on (-1, 1).
pub fn synth_bandlimited(basis: &SpectralBasis, k: usize, seed: u64) -> Result<GraphSignal> {
    basis.check_band_edge(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = DVector::from_fn(k, |_, _| loop {
        let c: f64 = rng.random_range(-1.0..1.0);
        if c != -1.0 {
            break c;
        }
    });
    let values = basis.band(k) * &coeffs;
    Ok(GraphSignal { values, band: Some((k, coeffs)) })
}
