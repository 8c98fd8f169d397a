//! Exact models of group actions on dendrites.
//!
//! Dendrites are finite weighted trees, homeomorphisms are exact
//! piecewise-linear maps with rational breakpoints, and every quantity
//! (distances, Hausdorff distances, meshes, measures, integrals) is an exact
//! rational.

pub mod action;
pub mod dendrite;
pub mod error;
pub mod homeo;
pub mod measure;
pub mod rational;
pub mod structure;
pub mod zoo;

pub use error::{Error, Result};
pub use rational::Q;
