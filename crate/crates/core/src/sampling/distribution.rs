//! Sampling distributions over the vertex set.

use std::fmt;
use std::io::Write;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::kernel::{KernelPoly, MeasurementOperator};
use crate::error::{Error, Result};
use crate::linalg::LinearOperator;
use crate::spectral::{ideal_lowpass_apply, ChebyshevLowPass, LowPassSpec, SpectralBasis};

/// Entries below this are raised to it before renormalizing.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Uniform,
    Optimal,
    Estimated,
    /// Loaded from a file or supplied by the caller.
    Custom,
    Reordered(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Uniform => f.write_str("uniform"),
            Provenance::Optimal => f.write_str("optimal"),
            Provenance::Estimated => f.write_str("estimated"),
            Provenance::Custom => f.write_str("custom"),
            Provenance::Reordered(base) => write!(f, "reordered-{base}"),
        }
    }
}

/// Probability vector over vertices: every entry positive, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingDistribution {
    p: Vec<f64>,
    provenance: Provenance,
    floored: bool,
}

impl SamplingDistribution {
    /// Normalizes non-negative `weights`, raising tiny entries to
    /// [`PROBABILITY_FLOOR`].
    pub fn from_weights(weights: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("distribution", "empty probability vector"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param("distribution", "weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::param("distribution", "weights sum to zero"));
        }
        let mut p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut floored = false;
        for v in &mut p {
            if *v < PROBABILITY_FLOOR {
                *v = PROBABILITY_FLOOR;
                floored = true;
            }
        }
        let total: f64 = p.iter().sum();
        for v in &mut p {
            *v /= total;
        }
        Ok(Self { p, provenance, floored })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Whether the positivity floor changed any entry.
    pub fn floored(&self) -> bool {
        self.floored
    }

    pub(crate) fn from_parts(p: Vec<f64>, provenance: Provenance, floored: bool) -> Self {
        Self { p, provenance, floored }
    }

    /// CSV `i,p` with 1-based vertex indices.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "i,p")?;
        for (i, p) in self.p.iter().enumerate() {
            writeln!(out, "{},{:e}", i + 1, p)?;
        }
        Ok(())
    }

    pub fn read_csv(input: impl std::io::BufRead) -> Result<Self> {
        let mut weights = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || (idx == 0 && t.starts_with('i')) {
                continue;
            }
            let (i, p) = t.split_once(',').ok_or_else(|| Error::parse(idx + 1, "expected `i,p`"))?;
            let i: usize = i.trim().parse().map_err(|_| Error::parse(idx + 1, "bad index"))?;
            if i != weights.len() + 1 {
                return Err(Error::parse(idx + 1, "indices must be consecutive from 1"));
            }
            weights.push(p.trim().parse().map_err(|_| Error::parse(idx + 1, "bad probability"))?);
        }
        Self::from_weights(weights, Provenance::Custom)
    }
}

pub fn uniform_distribution(n: usize) -> Result<SamplingDistribution> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    Ok(SamplingDistribution { p: vec![1.0 / n as f64; n], provenance: Provenance::Uniform, floored: false })
}

/// `||U_k^T phi_i||^2` for every vertex: the energy of each local
/// measurement vector in the first `k` Fourier modes.
pub fn band_energies(basis: &SpectralBasis, op: &MeasurementOperator, k: usize) -> Result<Vec<f64>> {
    basis.check_bandwidth(k)?;
    if op.n() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: op.n() });
    }
    // Phi symmetric, so row i of Phi U_k is U_k^T phi_i
    let projected = op.matrix() * basis.band(k);
    Ok(projected.row_iter().map(|r| r.norm_squared()).collect())
}

/// `p*_i = ||U_k^T phi_i||^2 / sum_{j<=k} g(lambda_j)^2`.
pub fn optimal_distribution(basis: &SpectralBasis, op: &MeasurementOperator, k: usize) -> Result<SamplingDistribution> {
    let energies = band_energies(basis, op, k)?;
    let denom = op.poly().band_energy(basis, k)?;
    if !(denom > 0.0) {
        return Err(Error::param("kernel", "g vanishes on the first k eigenvalues"));
    }
    let weights = energies.into_iter().map(|e| e / denom).collect();
    SamplingDistribution::from_weights(weights, Provenance::Optimal)
}

/// How probe vectors are low-pass filtered in [`estimated_distribution`].
#[derive(Debug, Clone, Copy)]
pub enum ProbeFilter<'a> {
    /// Exact projection through the eigenbasis (reference path).
    Exact { basis: &'a SpectralBasis, cutoff: f64 },
    /// Chebyshev approximation using only products with `L`.
    Chebyshev(LowPassSpec),
}

/// `p_i proportional to sum_l <r^l_filtered, phi_i>^2` over `t` Gaussian
/// probes with covariance `I / t`.
pub fn estimated_distribution(
    laplacian: &dyn LinearOperator,
    poly: &KernelPoly,
    filter: ProbeFilter<'_>,
    t: usize,
    seed: u64,
) -> Result<SamplingDistribution> {
    if t == 0 {
        return Err(Error::param("t", "probe count must be at least 1"));
    }
    let n = laplacian.dim();
    let cheby = match filter {
        ProbeFilter::Chebyshev(spec) => Some(ChebyshevLowPass::new(&spec)),
        ProbeFilter::Exact { basis, .. } => {
            if basis.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: basis.n() });
            }
            None
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (t as f64).sqrt();
    let mut acc = vec![0.0; n];
    for _ in 0..t {
        let r: Vec<f64> = (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                scale * z
            })
            .collect();
        let filtered = match (&cheby, filter) {
            (Some(f), _) => f.apply(laplacian, &r)?,
            (None, ProbeFilter::Exact { basis, cutoff }) => ideal_lowpass_apply(basis, cutoff, &DVector::from_vec(r))?,
            (None, ProbeFilter::Chebyshev(_)) => unreachable!(),
        };
        // <r, phi_i> = (Phi r)_i since Phi is symmetric
        let measured = poly.apply(laplacian, filtered.as_slice());
        for (a, m) in acc.iter_mut().zip(&measured) {
            *a += m * m;
        }
    }
    SamplingDistribution::from_weights(acc, Provenance::Estimated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_cases() {
        assert_eq!(uniform_distribution(4).unwrap().probabilities(), &[0.25; 4]);
        assert_eq!(uniform_distribution(1).unwrap().probabilities(), &[1.0]);
        assert!(uniform_distribution(0).is_err());
        let s: f64 = uniform_distribution(7).unwrap().probabilities().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn floor_applies_and_flags() {
        let d = SamplingDistribution::from_weights(vec![1.0, 0.0, 1.0], Provenance::Custom).unwrap();
        assert!(d.floored());
        assert!(d.probabilities().iter().all(|&p| p > 0.0));
        assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let d = SamplingDistribution::from_weights(vec![1.0, 3.0], Provenance::Custom).unwrap();
        assert!(!d.floored());
        assert_eq!(d.probabilities(), &[0.25, 0.75]);
    }

    #[test]
    fn rejects_invalid_weights() {
        assert!(SamplingDistribution::from_weights(vec![], Provenance::Custom).is_err());
        assert!(SamplingDistribution::from_weights(vec![0.0, 0.0], Provenance::Custom).is_err());
        assert!(SamplingDistribution::from_weights(vec![1.0, -0.1], Provenance::Custom).is_err());
    }

    #[test]
    fn provenance_names() {
        assert_eq!(Provenance::Reordered(Box::new(Provenance::Estimated)).to_string(), "reordered-estimated");
    }

    #[test]
    fn csv_round_trip() {
        let d = SamplingDistribution::from_weights(vec![0.1, 0.2, 0.7], Provenance::Custom).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = SamplingDistribution::read_csv(buf.as_slice()).unwrap();
        for (a, b) in back.probabilities().iter().zip(d.probabilities()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
