//! Estimate the intrinsic frequency spectrum of PE-equipped coordinate
//! MLPs, derive a cut-off frequency and the Nyquist-sufficient sampling
//! density, and fit signed distance fields at that rate.
//!
//! The pipeline: probe randomized networks along a line
//! ([`spectrum::intrinsic_spectrum`]), fit the decay curve and solve the
//! cut-off ([`spectrum::fit_with_cutoff`]), turn the cut-off into a grid
//! sampling plan near the target surface ([`sampling::build_plan`]), train
//! ([`trainer::train`]), and evaluate field error and extracted-surface
//! Chamfer distance ([`trainer::evaluate`], [`trainer::fit_and_extract`]).

pub mod encoding;
pub mod error;
pub mod geometry;
pub mod nn;
pub mod par;
pub mod points;
pub mod sampling;
pub mod spectrum;
pub mod trainer;

pub use error::{Error, Result};
pub use points::Points;
