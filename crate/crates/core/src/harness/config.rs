//! Line-based `key = value` experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::DEFAULT_WEIGHT_FLOOR;
use crate::reconstruct::DeltaScaling;
use crate::sampling::KernelPoly;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    RandomGeometric { n: usize, radius: f64, sigma: f64, weight_floor: f64 },
    GridKnn { width: usize, height: usize, knn: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    Uniform,
    Optimal,
    Estimated,
    ReorderedOptimal,
    ReorderedEstimated,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 5] = [
        DistributionKind::Uniform,
        DistributionKind::Optimal,
        DistributionKind::Estimated,
        DistributionKind::ReorderedOptimal,
        DistributionKind::ReorderedEstimated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::Uniform => "uniform",
            DistributionKind::Optimal => "optimal",
            DistributionKind::Estimated => "estimated",
            DistributionKind::ReorderedOptimal => "reordered-optimal",
            DistributionKind::ReorderedEstimated => "reordered-estimated",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::param("distributions", format!("unknown distribution `{s}`")))
    }
}

/// Filter applied to the Gaussian probes of the estimated distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeFilterKind {
    Chebyshev,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageOptions {
    pub path: Option<PathBuf>,
    /// Smallest energy ratio the chosen bandwidth must capture.
    pub energy: f64,
    pub knn: usize,
    /// `m = m_factor * k`.
    pub m_factor: usize,
    /// Subtract the mean intensity before the spectral analysis.
    pub center: bool,
    pub max_pixels: usize,
}

impl Default for ImageOptions {
    fn default() -> Self {
        Self { path: None, energy: 0.92, knn: 10, m_factor: 15, center: true, max_pixels: 5000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub kernels: Vec<KernelPoly>,
    pub k: usize,
    pub distributions: Vec<DistributionKind>,
    pub delta: f64,
    pub epsilon: f64,
    /// `None` selects [`default_m_grid`].
    pub m_grid: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    /// Success threshold on the embedding lower bound for f(m).
    pub threshold: f64,
    pub delta_scaling: DeltaScaling,
    pub cheby_order: usize,
    pub cheby_damping: bool,
    pub probes_t: usize,
    pub probe_filter: ProbeFilterKind,
    /// Overrides the low-pass cutoff taken from the eigenbasis.
    pub cutoff: Option<f64>,
    /// Overrides the reordering radius, which defaults to the kernel degree.
    pub reorder_hops: Option<usize>,
    pub out_dir: PathBuf,
    pub image: ImageOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graph: GraphSpec::RandomGeometric { n: 300, radius: 0.12, sigma: 0.06, weight_floor: DEFAULT_WEIGHT_FLOOR },
            kernels: vec![KernelPoly::identity(), KernelPoly::one_plus_laplacian()],
            k: 10,
            distributions: vec![DistributionKind::Uniform, DistributionKind::Optimal, DistributionKind::Estimated],
            delta: 0.5,
            epsilon: 0.1,
            m_grid: None,
            trials: 500,
            seed: 1,
            threshold: 0.995,
            delta_scaling: DeltaScaling::Squared,
            cheby_order: 100,
            cheby_damping: true,
            probes_t: 500,
            probe_filter: ProbeFilterKind::Chebyshev,
            cutoff: None,
            reorder_hops: None,
            out_dir: PathBuf::from("out"),
            image: ImageOptions::default(),
        }
    }
}

/// `k` to `40 k` in 20 roughly even steps.
pub fn default_m_grid(k: usize) -> Vec<usize> {
    let (lo, hi) = (k as f64, 40.0 * k as f64);
    let mut grid: Vec<usize> = (0..20).map(|i| (lo + (hi - lo) * i as f64 / 19.0).round() as usize).collect();
    grid.dedup();
    grid
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    ExperimentConfig::parse(&text, path)
}

impl ExperimentConfig {
    pub fn m_grid(&self) -> Vec<usize> {
        self.m_grid.clone().unwrap_or_else(|| default_m_grid(self.k))
    }

    /// Parses config text; `path` only labels error messages. Keys not set
    /// keep their [`Default`] values.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut graph_kind = None;
        let mut rgg = (300usize, 0.12f64, None::<f64>, DEFAULT_WEIGHT_FLOOR);
        let mut grid = (64usize, 64usize, 10usize);
        let mut graph_path = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Config { path: path.to_path_buf(), line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn fmt::Display| err(format!("`{key}`: {e}"));
            macro_rules! num {
                () => {
                    value.parse().map_err(|e| bad(&e))?
                };
            }
            match key {
                "graph.kind" => graph_kind = Some(value.to_string()),
                "graph.n" => rgg.0 = num!(),
                "graph.radius" => rgg.1 = num!(),
                "graph.sigma" => rgg.2 = Some(num!()),
                "graph.floor" => rgg.3 = num!(),
                "graph.width" => grid.0 = num!(),
                "graph.height" => grid.1 = num!(),
                "graph.knn" => grid.2 = num!(),
                "graph.path" => graph_path = Some(PathBuf::from(value)),
                "kernel" => {
                    cfg.kernels = value
                        .split(';')
                        .map(|s| s.trim().parse::<KernelPoly>())
                        .collect::<Result<_>>()
                        .map_err(|e| bad(&e))?
                }
                "k" => cfg.k = num!(),
                "delta" => cfg.delta = num!(),
                "epsilon" => cfg.epsilon = num!(),
                "m.grid" => {
                    cfg.m_grid = if value == "auto" {
                        None
                    } else {
                        Some(
                            value
                                .split(',')
                                .map(|s| s.trim().parse::<usize>())
                                .collect::<std::result::Result<_, _>>()
                                .map_err(|e| bad(&e))?,
                        )
                    }
                }
                "trials" => cfg.trials = num!(),
                "seed" => cfg.seed = num!(),
                "threshold" => cfg.threshold = num!(),
                "delta.scaling" => {
                    cfg.delta_scaling = match value {
                        "squared" => DeltaScaling::Squared,
                        "literal" => DeltaScaling::Literal,
                        _ => return Err(err(format!("`{key}`: expected `squared` or `literal`"))),
                    }
                }
                "distributions" => {
                    cfg.distributions = value
                        .split(',')
                        .map(|s| s.trim().parse::<DistributionKind>())
                        .collect::<Result<_>>()
                        .map_err(|e| bad(&e))?
                }
                "cheby.order" => cfg.cheby_order = num!(),
                "cheby.damping" => cfg.cheby_damping = num!(),
                "probes.t" => cfg.probes_t = num!(),
                "probes.filter" => {
                    cfg.probe_filter = match value {
                        "chebyshev" => ProbeFilterKind::Chebyshev,
                        "exact" => ProbeFilterKind::Exact,
                        _ => return Err(err(format!("`{key}`: expected `chebyshev` or `exact`"))),
                    }
                }
                "cutoff" => cfg.cutoff = Some(num!()),
                "reorder.hops" => cfg.reorder_hops = Some(num!()),
                "out.dir" => cfg.out_dir = PathBuf::from(value),
                "image.path" => cfg.image.path = Some(PathBuf::from(value)),
                "image.energy" => cfg.image.energy = num!(),
                "image.knn" => cfg.image.knn = num!(),
                "image.m_factor" => cfg.image.m_factor = num!(),
                "image.center" => cfg.image.center = num!(),
                "image.max_pixels" => cfg.image.max_pixels = num!(),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.graph = match graph_kind.as_deref() {
            None | Some("rgg") => {
                let (n, radius, sigma, weight_floor) = rgg;
                GraphSpec::RandomGeometric { n, radius, sigma: sigma.unwrap_or(radius / 2.0), weight_floor }
            }
            Some("grid") => GraphSpec::GridKnn { width: grid.0, height: grid.1, knn: grid.2 },
            Some("file") => GraphSpec::File(graph_path.ok_or_else(|| Error::Config {
                path: path.to_path_buf(),
                line: 0,
                message: "graph.kind = file requires graph.path".into(),
            })?),
            Some(other) => {
                return Err(Error::Config {
                    path: path.to_path_buf(),
                    line: 0,
                    message: format!("unknown graph.kind `{other}`"),
                })
            }
        };
        cfg.validate().map_err(|e| Error::Config { path: path.to_path_buf(), line: 0, message: e.to_string() })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta", format!("must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param("epsilon", format!("must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.k == 0 {
            return Err(Error::param("k", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        if let Some(grid) = &self.m_grid {
            if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::param("m.grid", "must be positive and strictly increasing"));
            }
        }
        if self.kernels.is_empty() {
            return Err(Error::param("kernel", "at least one kernel is required"));
        }
        if self.distributions.is_empty() {
            return Err(Error::param("distributions", "at least one distribution is required"));
        }
        if self.cheby_order == 0 || self.probes_t == 0 {
            return Err(Error::param("cheby.order/probes.t", "must be at least 1"));
        }
        if !(self.image.energy > 0.0 && self.image.energy <= 1.0) {
            return Err(Error::param("image.energy", "must lie in (0, 1]"));
        }
        if self.image.m_factor == 0 {
            return Err(Error::param("image.m_factor", "must be at least 1"));
        }
        Ok(())
    }
}
