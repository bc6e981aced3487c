//! Experiment driver: configuration, seeded Monte Carlo sweeps, the image
//! pipeline and their file formats.

mod config;
mod curve;
mod experiment;
mod image;
mod pgm;
mod seed;

pub use config::{
    default_m_grid, load_config, DistributionKind, ExperimentConfig, GraphSpec, ImageOptions, ProbeFilterKind,
};
pub use curve::{write_curve_csv, CurveRow, CurveTable, StatisticKind};
pub use experiment::{
    build_graph, first_full_success, kernel_label, probe_spec, run_error_curve, run_error_curve_on, run_fm_curve,
    run_fm_curve_on, run_frame_check, run_frame_check_on, DistributionFactory, FrameCheckReport, KernelContext, Setup,
};
pub use image::{
    energy_table, run_image_experiment, run_image_experiment_on, select_bandwidth, write_image_outputs, EnergyRow,
    ImageReport, SnrRow,
};
pub use pgm::{read_pgm, read_pgm_from, write_pgm, write_pgm_to};
pub use seed::derive_seed;
