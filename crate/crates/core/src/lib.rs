//! Ising model on Cayley trees with generation-dependent external fields.
//!
//! The crate is organized around the scalar boundary-field recursion
//! `b_{n-1} = h_{n-1} + d F(b_n, theta)` with `F(x, theta) = arctanh(theta tanh x)`,
//! which characterizes the splitting Gibbs measures of the model:
//!
//! * [`model`] — model parameters, tree geometry and field profiles,
//! * [`recursion`] — the kernel `F`, the one-generation maps and backward iteration,
//! * [`criticality`] — critical temperature/field and fixed-point classification,
//! * [`perturbation`] — summability diagnostics and Taylor predictors for
//!   near-critical perturbed fields,
//! * [`classifier`] — phase-transition vs. uniqueness verdicts for decaying
//!   perturbations of the critical field,
//! * [`oracle`] — exact finite-volume enumeration used as ground truth.

pub mod classifier;
pub mod criticality;
pub mod error;
pub mod model;
pub mod oracle;
pub mod perturbation;
pub mod recursion;

pub use classifier::{classify, ClassificationVerdict, ClassifyConfig, Verdict};
pub use criticality::{critical_beta, critical_field, fixed_points, FixedPointReport};
pub use error::{Error, Result};
pub use model::{EpsilonFamily, FieldProfile, ModelParams, TreeGeometry};
pub use recursion::{iterate_backward, ExtendedReal, IterationTrace};
