//! Ideal low-pass filtering, exact (through the eigenbasis) and approximate
//! (Chebyshev expansion of the step response, matrix-vector products only).

use std::f64::consts::PI;

use nalgebra::DVector;

use super::SpectralBasis;
use crate::error::{Error, Result};
use crate::linalg::LinearOperator;

/// `U diag(1{lambda_i <= cutoff}) U^T v`.
pub fn ideal_lowpass_apply(basis: &SpectralBasis, cutoff: f64, v: &DVector<f64>) -> Result<DVector<f64>> {
    if v.len() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: v.len() });
    }
    let mut coeffs = basis.vectors().tr_mul(v);
    for (c, &lambda) in coeffs.iter_mut().zip(basis.eigenvalues()) {
        if lambda > cutoff {
            *c = 0.0;
        }
    }
    Ok(basis.vectors() * coeffs)
}

/// Step response `1{t <= cutoff}` on the spectral interval `[0, lambda_max]`,
/// approximated by a Chebyshev expansion of degree `order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowPassSpec {
    cutoff: f64,
    lambda_max: f64,
    order: usize,
    damping: bool,
}

impl LowPassSpec {
    /// `lambda_max` must bound the largest Laplacian eigenvalue from above.
    /// Jackson damping is on by default.
    pub fn new(cutoff: f64, lambda_max: f64, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::param("order", "Chebyshev order must be at least 1"));
        }
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(Error::param("lambda_max", format!("must be positive, got {lambda_max}")));
        }
        if !(cutoff > 0.0 && cutoff <= lambda_max) {
            return Err(Error::param("cutoff", format!("must lie in (0, {lambda_max}], got {cutoff}")));
        }
        Ok(Self { cutoff, lambda_max, order, damping: true })
    }

    pub fn with_damping(mut self, damping: bool) -> Self {
        self.damping = damping;
        self
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn damping(&self) -> bool {
        self.damping
    }
}

/// Precomputed expansion coefficients for a [`LowPassSpec`].
#[derive(Debug, Clone)]
pub struct ChebyshevLowPass {
    coeffs: Vec<f64>,
    lambda_max: f64,
}

impl ChebyshevLowPass {
    pub fn new(spec: &LowPassSpec) -> Self {
        let q = spec.order;
        // cutoff mapped to [-1, 1]; the step is 1 for theta in [theta_c, pi]
        let x_c = (2.0 * spec.cutoff / spec.lambda_max - 1.0).clamp(-1.0, 1.0);
        let theta_c = x_c.acos();
        let mut coeffs = Vec::with_capacity(q + 1);
        coeffs.push((PI - theta_c) / PI);
        for j in 1..=q {
            coeffs.push(-2.0 * (j as f64 * theta_c).sin() / (j as f64 * PI));
        }
        if spec.damping {
            let terms = (q + 1) as f64;
            let a = PI / (terms + 1.0);
            for (j, c) in coeffs.iter_mut().enumerate() {
                let jf = j as f64;
                let g = ((terms - jf + 1.0) * (a * jf).cos() + (a * jf).sin() / a.tan()) / (terms + 1.0);
                *c *= g;
            }
        }
        Self { coeffs, lambda_max: spec.lambda_max }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Value of the approximated response at spectral point `t`.
    pub fn response(&self, t: f64) -> f64 {
        let x = 2.0 * t / self.lambda_max - 1.0;
        let (mut prev, mut cur) = (1.0, x);
        let mut acc = self.coeffs[0];
        for (j, &c) in self.coeffs.iter().enumerate().skip(1) {
            if j > 1 {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            acc += c * cur;
        }
        acc
    }

    /// Three-term recurrence `T_{j+1} = 2 L~ T_j - T_{j-1}` with
    /// `L~ = (2 / lambda_max) L - I`.
    pub fn apply(&self, op: &dyn LinearOperator, v: &[f64]) -> Result<DVector<f64>> {
        let n = op.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let scale = 2.0 / self.lambda_max;
        let mut out: Vec<f64> = v.iter().map(|x| self.coeffs[0] * x).collect();
        if self.coeffs.len() == 1 {
            return Ok(DVector::from_vec(out));
        }
        let mut prev = v.to_vec();
        let mut cur = vec![0.0; n];
        op.apply(&prev, &mut cur);
        for (c, p) in cur.iter_mut().zip(&prev) {
            *c = scale * *c - p;
        }
        let mut scratch = vec![0.0; n];
        for (j, &coef) in self.coeffs.iter().enumerate().skip(1) {
            if j > 1 {
                op.apply(&cur, &mut scratch);
                for ((s, c), p) in scratch.iter_mut().zip(&cur).zip(&prev) {
                    *s = 2.0 * (scale * *s - c) - p;
                }
                std::mem::swap(&mut prev, &mut cur);
                std::mem::swap(&mut cur, &mut scratch);
            }
            for (o, c) in out.iter_mut().zip(&cur) {
                *o += coef * c;
            }
        }
        Ok(DVector::from_vec(out))
    }
}

pub fn cheby_lowpass_apply(op: &dyn LinearOperator, spec: &LowPassSpec, v: &DVector<f64>) -> Result<DVector<f64>> {
    ChebyshevLowPass::new(spec).apply(op, v.as_slice())
}
