//! Monte Carlo sweeps over the sampling set size.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::config::{DistributionKind, ExperimentConfig, GraphSpec, ProbeFilterKind};
use super::curve::{CurveRow, CurveTable, StatisticKind};
use super::seed::{derive_seed, stream};
use crate::error::Result;
use crate::graph::{
    build_laplacian, gen_grid_knn, gen_random_geometric, read_graph, Graph, LaplacianMatrix, SparseLaplacian,
};
use crate::reconstruct::{diagnostic_from_matrix, reconstruct_tikhonov, DeltaScaling};
use crate::sampling::{
    band_energies, coherence_from_energies, draw_plan, draw_samples, estimated_distribution, kernel_matrix_checked,
    optimal_distribution, reorder_distribution, required_measurements, uniform_distribution, KernelPoly,
    MeasurementOperator, ProbeFilter, SamplingDistribution,
};
use crate::spectral::{eigendecompose, synth_bandlimited, LowPassSpec, SpectralBasis};

/// Graph, Laplacian views and eigenbasis shared by every trial.
pub struct Setup {
    pub graph: Graph,
    pub coords: Option<Vec<[f64; 2]>>,
    pub laplacian: LaplacianMatrix,
    pub sparse: SparseLaplacian,
    pub basis: SpectralBasis,
}

pub fn build_graph(cfg: &ExperimentConfig) -> Result<(Graph, Option<Vec<[f64; 2]>>)> {
    Ok(match &cfg.graph {
        GraphSpec::RandomGeometric { n, radius, sigma, weight_floor } => {
            let s = gen_random_geometric(*n, *radius, *sigma, *weight_floor, derive_seed(cfg.seed, &[stream::GRAPH]))?;
            (s.graph, Some(s.coords))
        }
        GraphSpec::GridKnn { width, height, knn } => {
            let s = gen_grid_knn(*width, *height, *knn)?;
            (s.graph, Some(s.coords))
        }
        GraphSpec::File(path) => (read_graph(std::io::BufReader::new(std::fs::File::open(path)?))?, None),
    })
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let (graph, coords) = build_graph(cfg)?;
        Self::from_graph(graph, coords)
    }

    pub fn from_graph(graph: Graph, coords: Option<Vec<[f64; 2]>>) -> Result<Self> {
        let laplacian = build_laplacian(&graph);
        let sparse = graph.sparse_laplacian();
        let basis = eigendecompose(&laplacian)?;
        Ok(Self { graph, coords, laplacian, sparse, basis })
    }
}

/// Per-kernel quantities for bandwidth `k`.
pub struct KernelContext {
    pub poly: KernelPoly,
    pub op: MeasurementOperator,
    /// `||U_k^T phi_i||^2` for every vertex.
    pub energies: Vec<f64>,
    /// `Phi U_k`; row `i` is `(U_k^T phi_i)^T`.
    pub band_rows: DMatrix<f64>,
    pub c1: f64,
    pub c2: f64,
}

impl KernelContext {
    pub fn new(setup: &Setup, poly: &KernelPoly, k: usize) -> Result<Self> {
        let op = kernel_matrix_checked(&setup.laplacian, poly, &setup.basis)?;
        let energies = band_energies(&setup.basis, &op, k)?;
        let band_rows = op.matrix() * setup.basis.band(k);
        let (c1, c2) = poly.band_constants(&setup.basis, k)?;
        Ok(Self { poly: poly.clone(), op, energies, band_rows, c1, c2 })
    }

    /// `P^{-1/2} Psi U_k` for a drawn sampling set.
    pub fn sampled_band_matrix(&self, p: &SamplingDistribution, omega: &[usize]) -> DMatrix<f64> {
        let probs = p.probabilities();
        DMatrix::from_fn(omega.len(), self.band_rows.ncols(), |r, c| {
            self.band_rows[(omega[r], c)] / probs[omega[r]].sqrt()
        })
    }
}

pub fn kernel_label(poly: &KernelPoly) -> String {
    poly.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Low-pass spec used for the probes of the estimated distribution.
pub fn probe_spec(cfg: &ExperimentConfig, basis: &SpectralBasis, k: usize) -> Result<LowPassSpec> {
    let cutoff = match cfg.cutoff {
        Some(c) => c,
        None => basis.band_cutoff(k)?,
    };
    Ok(LowPassSpec::new(cutoff, basis.lambda_max(), cfg.cheby_order)?.with_damping(cfg.cheby_damping))
}

/// Builds the requested distributions for one kernel, computing each base
/// distribution once.
pub struct DistributionFactory<'a> {
    cfg: &'a ExperimentConfig,
    setup: &'a Setup,
    k: usize,
    cache: HashMap<(usize, DistributionKind), SamplingDistribution>,
}

impl<'a> DistributionFactory<'a> {
    pub fn new(cfg: &'a ExperimentConfig, setup: &'a Setup, k: usize) -> Self {
        Self { cfg, setup, k, cache: HashMap::new() }
    }

    pub fn get(
        &mut self,
        kernel_idx: usize,
        ctx: &KernelContext,
        kind: DistributionKind,
    ) -> Result<SamplingDistribution> {
        if let Some(d) = self.cache.get(&(kernel_idx, kind)) {
            return Ok(d.clone());
        }
        let hops = self.cfg.reorder_hops.unwrap_or(ctx.poly.degree());
        let basis = &self.setup.basis;
        let d = match kind {
            DistributionKind::Uniform => uniform_distribution(basis.n())?,
            DistributionKind::Optimal => optimal_distribution(basis, &ctx.op, self.k)?,
            DistributionKind::Estimated => {
                let seed = derive_seed(self.cfg.seed, &[stream::PROBES, kernel_idx as u64]);
                let filter = match self.cfg.probe_filter {
                    ProbeFilterKind::Chebyshev => ProbeFilter::Chebyshev(probe_spec(self.cfg, basis, self.k)?),
                    ProbeFilterKind::Exact => ProbeFilter::Exact {
                        basis,
                        cutoff: self.cfg.cutoff.map_or_else(|| basis.band_cutoff(self.k), Ok)?,
                    },
                };
                estimated_distribution(&self.setup.sparse, &ctx.poly, filter, self.cfg.probes_t, seed)?
            }
            DistributionKind::ReorderedOptimal => {
                let q = self.get(kernel_idx, ctx, DistributionKind::Optimal)?;
                reorder_distribution(&self.setup.graph, &q, hops)?
            }
            DistributionKind::ReorderedEstimated => {
                let q = self.get(kernel_idx, ctx, DistributionKind::Estimated)?;
                reorder_distribution(&self.setup.graph, &q, hops)?
            }
        };
        self.cache.insert((kernel_idx, kind), d.clone());
        Ok(d)
    }
}

fn binomial_std_error(f: f64, trials: usize) -> f64 {
    (f * (1.0 - f) / trials as f64).sqrt()
}

/// f(m): fraction of trials with embedding lower bound at or below the
/// threshold, for every kernel, distribution and grid point.
pub fn run_fm_curve(cfg: &ExperimentConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let setup = Setup::new(cfg)?;
    run_fm_curve_on(cfg, &setup)
}

pub fn run_fm_curve_on(cfg: &ExperimentConfig, setup: &Setup) -> Result<CurveTable> {
    let k = cfg.k;
    setup.basis.check_band_edge(k)?;
    let grid = cfg.m_grid();
    let mut factory = DistributionFactory::new(cfg, setup, k);
    let mut table = CurveTable::new(StatisticKind::SuccessProbability);
    for (ki, poly) in cfg.kernels.iter().enumerate() {
        let ctx = KernelContext::new(setup, poly, k)?;
        for &kind in &cfg.distributions {
            let p = factory.get(ki, &ctx, kind)?;
            for (mi, &m) in grid.iter().enumerate() {
                // same sub-seeds for every distribution: common random numbers
                let outcomes: Vec<Result<bool>> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let omega = draw_samples(&p, m, derive_seed(cfg.seed, &[stream::DRAW, mi as u64, t as u64]))?;
                        let a = ctx.sampled_band_matrix(&p, &omega);
                        let d = diagnostic_from_matrix(&a, ctx.c1, ctx.c2, cfg.delta_scaling);
                        Ok(d.delta.is_finite() && d.delta <= cfg.threshold)
                    })
                    .collect();
                let failures = outcomes.iter().filter(|o| o.is_err()).count();
                let successes = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
                let f = successes as f64 / cfg.trials as f64;
                table.rows.push(CurveRow {
                    kernel: kernel_label(poly),
                    distribution: kind.to_string(),
                    m,
                    value: f,
                    trials: cfg.trials,
                    std_error: binomial_std_error(f, cfg.trials),
                    failures,
                });
            }
        }
    }
    Ok(table)
}

/// Mean relative error of the Laplacian-regularized decoder over fresh
/// bandlimited signals. Trials whose system is singular are counted as
/// failures and left out of the mean.
pub fn run_error_curve(cfg: &ExperimentConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let setup = Setup::new(cfg)?;
    run_error_curve_on(cfg, &setup)
}

pub fn run_error_curve_on(cfg: &ExperimentConfig, setup: &Setup) -> Result<CurveTable> {
    let k = cfg.k;
    setup.basis.check_band_edge(k)?;
    let grid = cfg.m_grid();
    let mut factory = DistributionFactory::new(cfg, setup, k);
    let mut table = CurveTable::new(StatisticKind::MeanRelativeError);
    for (ki, poly) in cfg.kernels.iter().enumerate() {
        let ctx = KernelContext::new(setup, poly, k)?;
        for &kind in &cfg.distributions {
            let p = factory.get(ki, &ctx, kind)?;
            for (mi, &m) in grid.iter().enumerate() {
                let outcomes: Vec<Result<f64>> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let path = [mi as u64, t as u64];
                        let x = synth_bandlimited(
                            &setup.basis,
                            k,
                            derive_seed(cfg.seed, &[stream::SIGNAL, path[0], path[1]]),
                        )?;
                        let seed = derive_seed(cfg.seed, &[stream::DRAW, path[0], path[1]]);
                        let plan = draw_plan(&ctx.op, &p, m, x.values.as_slice(), seed)?;
                        let r = reconstruct_tikhonov(&plan, &setup.laplacian)?.with_truth(x.values.as_slice())?;
                        Ok(r.relative_error.unwrap_or(f64::NAN))
                    })
                    .collect();
                let errors: Vec<f64> = outcomes.iter().filter_map(|o| o.as_ref().ok().copied()).collect();
                let failures = cfg.trials - errors.len();
                let count = errors.len() as f64;
                let mean = errors.iter().sum::<f64>() / count;
                let std_error = if errors.len() > 1 {
                    (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1.0) / count).sqrt()
                } else {
                    f64::NAN
                };
                table.rows.push(CurveRow {
                    kernel: kernel_label(poly),
                    distribution: kind.to_string(),
                    m,
                    value: mean,
                    trials: cfg.trials,
                    std_error,
                    failures,
                });
            }
        }
    }
    Ok(table)
}

/// Outcome of checking the two-sided frame inequality on the whole band
/// at the measurement count given by the coherence bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCheckReport {
    pub kernel: String,
    pub distribution: String,
    pub k: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub c1: f64,
    pub c2: f64,
    pub m: usize,
    pub trials: usize,
    pub violations: usize,
}

impl FrameCheckReport {
    pub fn violation_rate(&self) -> f64 {
        self.violations as f64 / self.trials as f64
    }

    /// `epsilon` plus three binomial standard errors.
    pub fn allowed_rate(&self) -> f64 {
        self.epsilon + 3.0 * binomial_std_error(self.epsilon, self.trials)
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "kernel,distribution,k,delta,epsilon,zeta,c1,c2,m,trials,violations,rate,allowed")?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kernel,
            self.distribution,
            self.k,
            self.delta,
            self.epsilon,
            self.zeta,
            self.c1,
            self.c2,
            self.m,
            self.trials,
            self.violations,
            self.violation_rate(),
            self.allowed_rate()
        )?;
        Ok(())
    }
}

/// Draws `trials` plans with the first configured kernel and distribution at
/// `m = required_measurements(zeta, c1, k, delta, epsilon)` and counts the
/// draws violating the frame inequality.
pub fn run_frame_check(cfg: &ExperimentConfig) -> Result<FrameCheckReport> {
    cfg.validate()?;
    let setup = Setup::new(cfg)?;
    run_frame_check_on(cfg, &setup)
}

pub fn run_frame_check_on(cfg: &ExperimentConfig, setup: &Setup) -> Result<FrameCheckReport> {
    let k = cfg.k;
    setup.basis.check_band_edge(k)?;
    let poly = &cfg.kernels[0];
    let kind = cfg.distributions[0];
    let ctx = KernelContext::new(setup, poly, k)?;
    let p = DistributionFactory::new(cfg, setup, k).get(0, &ctx, kind)?;
    let zeta = coherence_from_energies(&ctx.energies, &p, None)?;
    let m = required_measurements(zeta, ctx.c1, k, cfg.delta, cfg.epsilon)?;
    let violations = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let omega = draw_samples(&p, m, derive_seed(cfg.seed, &[stream::FRAME, t as u64]))?;
            let a = ctx.sampled_band_matrix(&p, &omega);
            Ok(!diagnostic_from_matrix(&a, ctx.c1, ctx.c2, DeltaScaling::Squared).satisfies_frame(cfg.delta))
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&v| v)
        .count();
    Ok(FrameCheckReport {
        kernel: kernel_label(poly),
        distribution: kind.to_string(),
        k,
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        zeta,
        c1: ctx.c1,
        c2: ctx.c2,
        m,
        trials: cfg.trials,
        violations,
    })
}

/// Smallest grid `m` at which a series reaches `f(m) = 1`.
pub fn first_full_success(table: &CurveTable, kernel: &str, distribution: &str) -> Option<usize> {
    table.series(kernel, distribution).find(|r| r.value >= 1.0).map(|r| r.m)
}

pub(crate) fn write_file(path: &Path, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    f(&mut out)?;
    out.flush()?;
    Ok(())
}
