//! With-replacement vertex sampling and measurement plans.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distribution::SamplingDistribution;
use super::kernel::MeasurementOperator;
use crate::error::{Error, Result};

/// `m` i.i.d. draws from `p` by inverse CDF; 0-based vertex indices.
pub fn draw_samples(p: &SamplingDistribution, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &pi in p.probabilities() {
        acc += pi;
        cdf.push(acc);
    }
    let total = acc;
    let last = p.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..m)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect())
}

/// Sampling set `Omega`, the diagonal of `P_Omega`, the row-submatrix
/// `Psi` of `Phi` and the measurements `y = Psi x`.
#[derive(Debug, Clone)]
pub struct SamplePlan {
    omega: Vec<usize>,
    p_omega: Vec<f64>,
    psi: DMatrix<f64>,
    y: DVector<f64>,
    seed: Option<u64>,
}

pub fn assemble_plan(
    op: &MeasurementOperator,
    p: &SamplingDistribution,
    omega: &[usize],
    x: &[f64],
) -> Result<SamplePlan> {
    let n = op.n();
    if omega.is_empty() {
        return Err(Error::param("omega", "sampling set is empty"));
    }
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if let Some(&bad) = omega.iter().find(|&&w| w >= n) {
        return Err(Error::VertexOutOfRange { index: bad, n });
    }
    let psi = DMatrix::from_fn(omega.len(), n, |r, c| op.row(omega[r])[c]);
    let y = &psi * DVector::from_row_slice(x);
    let p_omega = omega.iter().map(|&w| p.probabilities()[w]).collect();
    Ok(SamplePlan { omega: omega.to_vec(), p_omega, psi, y, seed: None })
}

/// Draws `m` vertices from `p` and assembles the plan for signal `x`.
pub fn draw_plan(
    op: &MeasurementOperator,
    p: &SamplingDistribution,
    m: usize,
    x: &[f64],
    seed: u64,
) -> Result<SamplePlan> {
    let omega = draw_samples(p, m, seed)?;
    let mut plan = assemble_plan(op, p, &omega, x)?;
    plan.seed = Some(seed);
    Ok(plan)
}

impl SamplePlan {
    /// Rebuilds a plan from stored `(omega, p_omega, y)` and the operator.
    pub fn from_measurements(
        op: &MeasurementOperator,
        omega: Vec<usize>,
        p_omega: Vec<f64>,
        y: Vec<f64>,
    ) -> Result<Self> {
        let n = op.n();
        if omega.is_empty() {
            return Err(Error::param("omega", "sampling set is empty"));
        }
        if p_omega.len() != omega.len() || y.len() != omega.len() {
            return Err(Error::DimensionMismatch { expected: omega.len(), found: p_omega.len().min(y.len()) });
        }
        if let Some(&bad) = omega.iter().find(|&&w| w >= n) {
            return Err(Error::VertexOutOfRange { index: bad, n });
        }
        if p_omega.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::param("p_omega", "sampling probabilities must lie in (0, 1]"));
        }
        let psi = DMatrix::from_fn(omega.len(), n, |r, c| op.row(omega[r])[c]);
        Ok(Self { omega, p_omega, psi, y: DVector::from_vec(y), seed: None })
    }

    pub fn m(&self) -> usize {
        self.omega.len()
    }

    pub fn n(&self) -> usize {
        self.psi.ncols()
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn p_omega(&self) -> &[f64] {
        &self.p_omega
    }

    pub fn psi(&self) -> &DMatrix<f64> {
        &self.psi
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Replaces the measurements with `Psi x` for another signal.
    pub fn remeasure(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        self.y = &self.psi * DVector::from_row_slice(x);
        Ok(())
    }

    /// CSV with one row per sample: `row,omega,p_omega,y` (1-based omega).
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        if let Some(seed) = self.seed {
            writeln!(out, "# seed = {seed}")?;
        }
        writeln!(out, "row,omega,p_omega,y")?;
        for (r, ((w, p), y)) in self.omega.iter().zip(&self.p_omega).zip(self.y.iter()).enumerate() {
            writeln!(out, "{},{},{:e},{:e}", r + 1, w + 1, p, y)?;
        }
        Ok(())
    }

    /// Parses [`write_csv`](Self::write_csv) output into `(omega, p_omega, y)`.
    pub fn read_csv(input: impl BufRead) -> Result<(Vec<usize>, Vec<f64>, Vec<f64>)> {
        let (mut omega, mut p, mut y) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t.starts_with("row") {
                continue;
            }
            let cols: Vec<&str> = t.split(',').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(Error::parse(idx + 1, "expected `row,omega,p_omega,y`"));
            }
            let w: usize = cols[1].parse().map_err(|_| Error::parse(idx + 1, "bad omega"))?;
            if w == 0 {
                return Err(Error::parse(idx + 1, "omega is 1-based"));
            }
            omega.push(w - 1);
            p.push(cols[2].parse().map_err(|_| Error::parse(idx + 1, "bad p_omega"))?);
            y.push(cols[3].parse().map_err(|_| Error::parse(idx + 1, "bad y"))?);
        }
        Ok((omega, p, y))
    }
}
