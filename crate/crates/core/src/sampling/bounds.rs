//! Graph weighted coherence and the measurement-count bound.

use super::distribution::{band_energies, SamplingDistribution};
use super::kernel::MeasurementOperator;
use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

/// `max_i ||U_k^T phi_i||^2 / p_i` over `omega` when given, otherwise over
/// every vertex.
pub fn coherence(
    basis: &SpectralBasis,
    op: &MeasurementOperator,
    p: &SamplingDistribution,
    k: usize,
    omega: Option<&[usize]>,
) -> Result<f64> {
    let energies = band_energies(basis, op, k)?;
    coherence_from_energies(&energies, p, omega)
}

/// [`coherence`] with precomputed band energies.
pub fn coherence_from_energies(energies: &[f64], p: &SamplingDistribution, omega: Option<&[usize]>) -> Result<f64> {
    if p.len() != energies.len() {
        return Err(Error::DimensionMismatch { expected: energies.len(), found: p.len() });
    }
    let probs = p.probabilities();
    let ratio = |i: usize| energies[i] / probs[i];
    Ok(match omega {
        Some(set) => {
            if set.is_empty() {
                return Err(Error::EmptyVertexSet);
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= energies.len()) {
                return Err(Error::VertexOutOfRange { index: bad, n: energies.len() });
            }
            set.iter().map(|&i| ratio(i)).fold(f64::NEG_INFINITY, f64::max)
        }
        None => (0..energies.len()).map(ratio).fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Unrounded `(3 zeta / (c1 delta^2)) ln(2k / epsilon)`.
pub fn measurement_bound(zeta: f64, c1: f64, k: usize, delta: f64, epsilon: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1), got {delta}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::param("zeta", format!("must be positive, got {zeta}")));
    }
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::param("c1", format!("must be positive, got {c1}")));
    }
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    Ok(3.0 * zeta / (c1 * delta * delta) * (2.0 * k as f64 / epsilon).ln())
}

/// Number of measurements sufficient for the two-sided embedding with
/// probability at least `1 - epsilon`.
pub fn required_measurements(zeta: f64, c1: f64, k: usize, delta: f64, epsilon: f64) -> Result<usize> {
    Ok(measurement_bound(zeta, c1, k, delta, epsilon)?.ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Provenance;

    #[test]
    fn bound_example() {
        // 120 ln 200 = 635.8...
        assert_eq!(required_measurements(10.0, 1.0, 10, 0.5, 0.1).unwrap(), 636);
    }

    #[test]
    fn linear_in_zeta() {
        let a = measurement_bound(3.7, 1.3, 7, 0.4, 0.05).unwrap();
        let b = measurement_bound(7.4, 1.3, 7, 0.4, 0.05).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn parameter_ranges() {
        assert!(required_measurements(1.0, 1.0, 1, 1.0, 0.1).is_err());
        assert!(required_measurements(1.0, 1.0, 1, 0.5, 0.0).is_err());
        assert!(required_measurements(0.0, 1.0, 1, 0.5, 0.1).is_err());
        assert!(required_measurements(1.0, -1.0, 1, 0.5, 0.1).is_err());
        assert!(required_measurements(1.0, 1.0, 0, 0.5, 0.1).is_err());
    }

    #[test]
    fn restricted_coherence() {
        let e = [1.0, 4.0, 2.0];
        let p = SamplingDistribution::from_weights(vec![0.5, 0.25, 0.25], Provenance::Custom).unwrap();
        assert_eq!(coherence_from_energies(&e, &p, None).unwrap(), 16.0);
        assert_eq!(coherence_from_energies(&e, &p, Some(&[0, 2])).unwrap(), 8.0);
        assert!(coherence_from_energies(&e, &p, Some(&[])).is_err());
        assert!(coherence_from_energies(&e, &p, Some(&[3])).is_err());
    }
}
