//! Random sampling of bandlimited graph signals from locally weighted
//! measurements.
//!
//! A measurement at vertex `i` is `<phi_i, x>`, where `phi_i` is row `i` of
//! `Phi = g(L)` for a polynomial `g` of the graph Laplacian, so it only sees
//! the signal within `deg g` hops of `i`. Vertices are drawn with
//! replacement from a sampling distribution; the crate provides the uniform,
//! optimal (leverage-score), estimated (filtered Gaussian probes) and
//! distance-reordered distributions, the coherence and measurement-count
//! bounds that go with them, and decoders for recovering the signal.
//!
//! Vertex indices are 0-based in the API and 1-based in every file format.

// parameter checks use negated comparisons so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod reconstruct;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
