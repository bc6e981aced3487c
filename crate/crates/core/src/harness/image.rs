//! Image reconstruction on a k-nearest-neighbour pixel graph.
//!
//! The image is one graph signal of length `width * height` (pixels in
//! row-major order), so Frobenius norms of the image equal 2-norms of the
//! signal.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::config::ExperimentConfig;
use super::experiment::{kernel_label, write_file, DistributionFactory, KernelContext, Setup};
use super::pgm::{read_pgm, write_pgm};
use super::seed::{derive_seed, stream};
use crate::error::{Error, Result};
use crate::graph::gen_grid_knn;
use crate::reconstruct::{energy_ratio_profile, reconstruct_tikhonov, snr};
use crate::sampling::{draw_plan, SamplingDistribution};
use crate::spectral::SpectralBasis;

/// One row of the energy table: `k = ceil(i n / 10000)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRow {
    pub i: usize,
    pub k: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrRow {
    pub kernel: String,
    pub distribution: String,
    /// `None` when the decoder failed.
    pub snr_db: Option<f64>,
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ImageReport {
    pub width: usize,
    pub height: usize,
    /// Mean intensity removed before the analysis (0 when not centering).
    pub mean: f64,
    pub k: usize,
    /// Energy ratio captured by the first `k` modes.
    pub energy: f64,
    pub m: usize,
    pub energy_table: Vec<EnergyRow>,
    pub rows: Vec<SnrRow>,
    /// Reconstructed images, aligned with `rows`, in intensity units.
    pub reconstructions: Vec<Option<DMatrix<f64>>>,
    pub distributions: Vec<(String, SamplingDistribution)>,
}

impl ImageReport {
    pub fn snr_of(&self, kernel: &str, distribution: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.kernel == kernel && r.distribution == distribution).and_then(|r| r.snr_db)
    }
}

/// Energy ratios at `k = ceil(i n / 10000)` for `i = 1, 6, 11, ...`.
pub fn energy_table(profile: &[f64]) -> Vec<EnergyRow> {
    let n = profile.len();
    (1..=10_000)
        .step_by(5)
        .map(|i| {
            let k = (i * n).div_ceil(10_000).max(1);
            EnergyRow { i, k, energy: profile[k - 1] }
        })
        .collect()
}

/// Smallest `k` whose energy ratio reaches `threshold`, moved up past any
/// repeated eigenvalue at the band edge.
pub fn select_bandwidth(profile: &[f64], basis: &SpectralBasis, threshold: f64) -> Result<usize> {
    let mut k = profile
        .iter()
        .position(|&e| e >= threshold)
        .map(|i| i + 1)
        .ok_or_else(|| Error::param("image.energy", format!("no bandwidth reaches energy ratio {threshold}")))?;
    while basis.check_band_edge(k).is_err() {
        k += 1;
    }
    Ok(k)
}

pub fn run_image_experiment(cfg: &ExperimentConfig, image_path: &Path) -> Result<ImageReport> {
    cfg.validate()?;
    let image = read_pgm(image_path)?;
    run_image_experiment_on(cfg, &image)
}

pub fn run_image_experiment_on(cfg: &ExperimentConfig, image: &DMatrix<f64>) -> Result<ImageReport> {
    let (height, width) = image.shape();
    let pixels = width * height;
    if pixels > cfg.image.max_pixels {
        return Err(Error::ImageTooLarge { width, height, pixels, limit: cfg.image.max_pixels });
    }
    let mean = if cfg.image.center { image.mean() } else { 0.0 };
    let x = DVector::from_iterator(
        pixels,
        (0..height).flat_map(|r| (0..width).map(move |c| (r, c))).map(|rc| image[rc] - mean),
    );
    let spatial = gen_grid_knn(width, height, cfg.image.knn)?;
    let setup = Setup::from_graph(spatial.graph, Some(spatial.coords))?;
    let xm = DMatrix::from_column_slice(pixels, 1, x.as_slice());
    let profile = energy_ratio_profile(&setup.basis, &xm)?;
    let k = select_bandwidth(&profile, &setup.basis, cfg.image.energy)?;
    let m = cfg.image.m_factor * k;

    let mut factory = DistributionFactory::new(cfg, &setup, k);
    let mut rows = Vec::new();
    let mut reconstructions = Vec::new();
    let mut distributions = Vec::new();
    for (ki, poly) in cfg.kernels.iter().enumerate() {
        let ctx = KernelContext::new(&setup, poly, k)?;
        let seed = derive_seed(cfg.seed, &[stream::IMAGE, ki as u64]);
        for &kind in &cfg.distributions {
            let p = factory.get(ki, &ctx, kind)?;
            let plan = draw_plan(&ctx.op, &p, m, x.as_slice(), seed)?;
            let (row, recon) = match reconstruct_tikhonov(&plan, &setup.laplacian) {
                Ok(r) => {
                    let estimate = DMatrix::from_column_slice(pixels, 1, r.x.as_slice());
                    let s = snr(&estimate, &xm)?;
                    let rel = crate::reconstruct::relative_error(r.x.as_slice(), x.as_slice())?;
                    let img = DMatrix::from_fn(height, width, |rr, c| r.x[rr * width + c] + mean);
                    (Some(s), Some((rel, img)))
                }
                Err(Error::SingularSystem { .. }) => (None, None),
                Err(e) => return Err(e),
            };
            rows.push(SnrRow {
                kernel: kernel_label(poly),
                distribution: kind.to_string(),
                snr_db: row,
                relative_error: recon.as_ref().map(|(r, _)| *r),
            });
            reconstructions.push(recon.map(|(_, img)| img));
            distributions.push((format!("{}_{}", kernel_slug(&kernel_label(poly)), kind), p));
        }
    }
    Ok(ImageReport {
        width,
        height,
        mean,
        k,
        energy: profile[k - 1],
        m,
        energy_table: energy_table(&profile),
        rows,
        reconstructions,
        distributions,
    })
}

fn kernel_slug(label: &str) -> String {
    label.replace(' ', "_")
}

/// Writes `energy_table.csv`, `snr_report.csv`, `dist_<kernel>_<name>.csv`
/// and `recon_<kernel>_<name>.pgm` into `dir`.
pub fn write_image_outputs(report: &ImageReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_file(&dir.join("energy_table.csv"), |out| {
        writeln!(out, "i,k,energy_ratio")?;
        for r in &report.energy_table {
            writeln!(out, "{},{},{}", r.i, r.k, r.energy)?;
        }
        Ok(())
    })?;
    write_file(&dir.join("snr_report.csv"), |out| {
        writeln!(out, "kernel,distribution,k,m,snr_db,relative_error")?;
        for r in &report.rows {
            let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.kernel,
                r.distribution,
                report.k,
                report.m,
                opt(r.snr_db),
                opt(r.relative_error)
            )?;
        }
        Ok(())
    })?;
    for (name, p) in &report.distributions {
        write_file(&dir.join(format!("dist_{name}.csv")), |out| p.write_csv(out))?;
    }
    for ((name, _), recon) in report.distributions.iter().zip(&report.reconstructions) {
        if let Some(img) = recon {
            write_pgm(img, &dir.join(format!("recon_{name}.pgm")))?;
        }
    }
    Ok(())
}
