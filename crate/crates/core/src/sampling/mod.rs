//! Local measurement operators, sampling distributions and the sampler.

mod bounds;
mod distribution;
mod kernel;
mod reorder;
mod sampler;

pub use bounds::{coherence, coherence_from_energies, measurement_bound, required_measurements};
pub use distribution::{
    band_energies, estimated_distribution, optimal_distribution, uniform_distribution, ProbeFilter, Provenance,
    SamplingDistribution, PROBABILITY_FLOOR,
};
pub use kernel::{kernel_matrix, kernel_matrix_checked, local_measure, KernelPoly, MeasurementOperator};
pub use reorder::{reorder_distribution, reorder_with_packing, Reordering};
pub use sampler::{assemble_plan, draw_plan, draw_samples, SamplePlan};
