//! Simulation toolkit for almost-everywhere algorithmic stability.
//!
//! The crate is organised around five pieces:
//!
//! * [`model`]: examples, training sets, classifiers, costs, the distribution
//!   catalog and the error-rate functionals.
//! * [`learners`]: the toy learning algorithms (constant, finite ERM,
//!   threshold midpoint, radius nearest neighbour, finite languages and an
//!   exact low-dimensional maximum-margin solver).
//! * [`stability`]: replace-one Monte Carlo estimators for the six stability
//!   notions, all computed from one shared perturbation sample.
//! * [`concentration`]: weakly difference-bounded certificates, estimators of
//!   the mean generalization error and closed-form tail bounds.
//! * [`harness`]: configuration, experiment runners and report emission used
//!   by the `stabsim` CLI.

pub mod concentration;
pub mod error;
pub mod harness;
pub mod learners;
pub mod model;
pub mod rng;
pub mod stability;
pub mod stats;

pub use error::{Error, Result};
pub use learners::Learner;
pub use model::{
    Classifier, Cost, Distribution, Example, Label, Point, TrainingSet, TrueErrorMode,
};
pub use stability::{IndexPolicy, Notion, SamplerConfig, StabilityEstimate, StabilityMode};
