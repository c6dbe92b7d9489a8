//! Constructive ReLU approximation of Barron-class functions and of indicator
//! functions of sets with Barron-class boundary, with Monte-Carlo tooling to
//! check approximation, estimation and quantization behaviour empirically.
//!
//! Modules:
//! - [`nn`]: ReLU networks, their realization, calculus and quantization.
//! - [`barron`]: Fourier-analytic Barron functions and shallow-network synthesis.
//! - [`classifier`]: Barron-boundary sets and the three-hidden-layer classifier.
//! - [`measure`]: tube-compatible measures and Monte-Carlo error functionals.
//! - [`erm`]: width selection, approximate empirical risk minimization, shattering.

pub mod barron;
pub mod classifier;
pub mod error;
pub mod erm;
pub mod measure;
pub mod nn;
pub mod par;

pub use error::{Error, Result};
pub use nn::{NetworkStats, NeuralNetwork};
