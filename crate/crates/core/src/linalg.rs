//! Dense linear algebra shared across modules.
//!
//! Matrices are `nalgebra` types throughout the crate. The two heavy
//! factorizations (symmetric eigendecomposition and Cholesky) go through
//! `faer`, which is blocked and considerably faster at n in the thousands.

use faer::linalg::solvers::{Llt, Solve};
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A symmetric linear map on R^n that can be applied to vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes `A x` into `out`. Both slices have length [`dim`](Self::dim).
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.nrows();
        out.fill(0.0);
        // column-major: accumulate column by column
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let col = &self.as_slice()[j * n..(j + 1) * n];
            for (o, &a) in out.iter_mut().zip(col) {
                *o += a * xj;
            }
        }
    }
}

fn to_faer(a: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let evd = to_faer(a).self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenNoConvergence)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let values: Vec<f64> = order.iter().map(|&i| s[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNoConvergence);
    }
    let vectors = DMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((values, vectors))
}

/// Cholesky factorization of a symmetric positive definite matrix with a
/// cheap conditioning diagnostic.
pub struct SpdFactor {
    llt: Llt<f64>,
    condition: f64,
}

/// Systems whose condition estimate exceeds this are reported as singular.
pub const MAX_CONDITION: f64 = 1e14;

impl SpdFactor {
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let llt = to_faer(a).llt(Side::Lower).map_err(|_| Error::SingularSystem { condition: f64::INFINITY })?;
        let l = llt.L();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..l.nrows() {
            let d = l[(i, i)].abs();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        // (max/min pivot)^2 bounds cond_2 from below
        let condition = if lo > 0.0 { (hi / lo).powi(2) } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::SingularSystem { condition });
        }
        Ok(Self { llt, condition })
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        self.llt.solve_in_place(&mut rhs);
        DVector::from_fn(b.len(), |i, _| rhs[(i, 0)])
    }
}
