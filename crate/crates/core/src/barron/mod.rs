//! Barron functions on boxes: representation, evaluation and constructive
//! shallow ReLU approximation.

mod domain;
mod gap;
mod heaviside;
mod spec;
mod synth;

pub use domain::{seminorm_xi, vartheta, DomainBox};
pub use gap::{fourier_gap_demo, GapRow};
pub use heaviside::{
    eval_relu_representation, heaviside, max_deviation, relu_norm, relu_to_heaviside, HeavisideAtom,
    HeavisideRepresentation, ReluAtom,
};
pub use spec::{barron_constant, eval_barron, BarronFunctionSpec, SpectralAtom};
pub use synth::{
    default_validation_grid, grid_sup_error, synthesize_shallow, ShallowSynthesis, CDF_POINTS,
    DEFAULT_CANDIDATES,
};

pub(crate) use spec::dot;
