//! Simulation of the Bell-state quantum eraser.
//!
//! The crate builds the experiment's joint quantum state stage by stage
//! (double slit, path tagging with quarter-wave plates, polarization
//! measurements of both photons), computes all of its entropic quantities
//! (joint/conditional/mutual entropies and tripartite Venn diagrams),
//! verifies the complementarity equality between coherence and which-path
//! information, and renders the conditional interference patterns on a
//! discretized screen.
//!
//! Modules:
//! - [`tensor`]: state vectors and density operators on labeled composite
//!   spaces, partial traces, Hermitian eigendecomposition, entropy.
//! - [`venn`]: the entropy calculus (mutual, conditional, ternary) and
//!   tripartite Venn diagrams.
//! - [`pipeline`]: the eraser experiment itself, from Bell pair to both
//!   detectors, plus the analytic scalar quantities it predicts.
//! - [`interference`]: Fraunhofer slit amplitudes and the conditional
//!   screen patterns of the erasure measurement.

pub mod error;
pub mod interference;
pub mod pipeline;
pub mod tensor;
pub mod venn;

pub use error::{Error, Result};
