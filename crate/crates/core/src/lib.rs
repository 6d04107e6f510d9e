//! Parabolic Newton–Sobolev calculus on finite metric measure spaces.
//!
//! A metric measure space is a connected weighted graph ([`MetricGraph`]):
//! vertex masses form the measure, edge lengths the metric. On top of it the
//! crate provides
//!
//! - p-modulus of finite curve families ([`modulus`]),
//! - discrete upper gradients ([`gradient`]),
//! - parabolic step functions in time and their product-space norms
//!   ([`parabolic`]),
//! - time mollification with exact hat-kernel coefficients ([`mollifier`]),
//! - sweeps that measure how fast the gradient of `f − f_ε` and of
//!   `f(· − s) − f` vanish over subcylinders ([`harness`]).

pub mod cli;
pub mod error;
pub mod gradient;
pub mod formats;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod interval;
pub mod modulus;
pub mod mollifier;
pub mod parabolic;
pub mod plot;
pub mod quadrature;
mod solver;

pub use error::{Error, Result};
pub use gradient::{
    local_slope_gradient, lp_minimal_gradient, verify_upper_gradient, GradientKind, GradientPair,
};
pub use graph::{
    enumerate_paths, line_integral, lp_norm, Curve, CurveFamily, GraphSpec, MetricGraph,
    VertexFunction,
};
pub use harness::{
    epsilon_sweep, gradient_of_difference, shift_sweep, verify_proof_bound, ConvergenceReport,
    ProofBound, Schedule, SweepMode,
};
pub use interval::IntervalUnion;
pub use modulus::{compute_modulus, is_admissible, ModulusResult};
pub use mollifier::{make_mollifier, mollify, mollify_indicator, KernelKind, MollifiedFunction, Mollifier};
pub use parabolic::{ParabolicStepFunction, Subcylinder, TimePartition};
pub use solver::SolverOptions;
