//! Shared data model: examples, training sets, classifiers, costs,
//! distributions and error-rate functionals.

mod classifier;
mod cost;
mod distribution;
mod intervals;
mod point;
mod risk;
mod training_set;

pub use classifier::{sign, Classifier, ConstantClassifier};
pub use cost::Cost;
pub use distribution::{default_strings, Distribution};
pub use intervals::IntervalSet;
pub use point::{Example, Label, Point};
pub use risk::{
    empirical_error, generalization_error, true_error, TrueError, TrueErrorEval, TrueErrorMode,
};
pub use training_set::TrainingSet;
