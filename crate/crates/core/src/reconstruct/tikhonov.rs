//! Laplacian-regularized decoder
//! `x* = (Psi^T P^-1 Psi + L)^-1 Psi^T P^-1 y`.

use nalgebra::{DMatrix, DVector};

use super::{Decoder, ReconstructionResult};
use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::linalg::SpdFactor;
use crate::sampling::SamplePlan;

/// Factorized normal matrix `Psi^T P^-1 Psi + L` of a plan.
pub struct TikhonovSystem {
    factor: SpdFactor,
}

/// `Psi^T P^-1 Psi + L`, accumulated over the nonzero pattern of each
/// distinct sampled row.
pub fn normal_matrix(plan: &SamplePlan, l: &LaplacianMatrix) -> Result<DMatrix<f64>> {
    let n = plan.n();
    if l.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l.n() });
    }
    let mut a = l.matrix().clone();
    // repeated draws of one vertex contribute the same outer product
    let mut weight = vec![0.0; n];
    let mut first_row = vec![usize::MAX; n];
    for (r, (&w, &p)) in plan.omega().iter().zip(plan.p_omega()).enumerate() {
        weight[w] += 1.0 / p;
        if first_row[w] == usize::MAX {
            first_row[w] = r;
        }
    }
    let psi = plan.psi();
    for v in 0..n {
        if first_row[v] == usize::MAX {
            continue;
        }
        let r = first_row[v];
        let support: Vec<(usize, f64)> = (0..n).map(|c| (c, psi[(r, c)])).filter(|(_, x)| *x != 0.0).collect();
        for &(j, bj) in &support {
            let s = weight[v] * bj;
            for &(i, bi) in &support {
                a[(i, j)] += s * bi;
            }
        }
    }
    Ok(a)
}

impl TikhonovSystem {
    pub fn new(plan: &SamplePlan, l: &LaplacianMatrix) -> Result<Self> {
        Ok(Self { factor: SpdFactor::new(&normal_matrix(plan, l)?)? })
    }

    pub fn condition_estimate(&self) -> f64 {
        self.factor.condition_estimate()
    }

    /// Solves for the plan's own measurements.
    pub fn solve(&self, plan: &SamplePlan) -> DVector<f64> {
        let weighted = DVector::from_iterator(plan.m(), plan.y().iter().zip(plan.p_omega()).map(|(y, p)| y / p));
        let rhs = plan.psi().tr_mul(&weighted);
        self.factor.solve(&rhs)
    }
}

pub fn reconstruct_tikhonov(plan: &SamplePlan, l: &LaplacianMatrix) -> Result<ReconstructionResult> {
    let system = TikhonovSystem::new(plan, l)?;
    let x = system.solve(plan);
    Ok(ReconstructionResult::new(plan, x, Decoder::Tikhonov))
}

/// `1/2 ||P^{-1/2} (Psi x - y)||^2 + 1/2 x^T L x`.
pub fn tikhonov_objective(plan: &SamplePlan, l: &LaplacianMatrix, x: &DVector<f64>) -> f64 {
    let r = plan.psi() * x - plan.y();
    let data: f64 = r.iter().zip(plan.p_omega()).map(|(r, p)| r * r / p).sum();
    0.5 * data + 0.5 * x.dot(&(l.matrix() * x))
}
