//! The example learning algorithms and their registry.

mod language;
mod max_margin;
mod radius_nn;
mod threshold;

pub use language::{train_finite_language, FiniteLanguageClassifier};
pub use max_margin::{train_max_margin, HyperplaneClassifier, DEFAULT_MAX_POINTS, SUPPORT_TOL};
pub use radius_nn::{train_radius_nn, RadiusNnClassifier};
pub use threshold::{train_finite_erm, train_threshold_midpoint, ThresholdClassifier};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Classifier, ConstantClassifier, Cost, Distribution, TrainingSet};

/// Registry names, in listing order.
pub const LEARNER_NAMES: [&str; 6] = [
    "constant",
    "finite_erm",
    "threshold_midpoint",
    "radius_nn",
    "finite_language",
    "max_margin",
];

/// A learning algorithm `S -> f_S`, selected by name with JSON/TOML
/// parameters. Every variant is deterministic and symmetric in the order of
/// the training set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Learner {
    /// Always `h = +1`.
    Constant,
    /// ERM over thresholds `g_theta`, theta from `thetas` in order.
    FiniteErm {
        #[serde(default = "default_thetas")]
        thetas: Vec<f64>,
    },
    ThresholdMidpoint,
    /// Radius nearest neighbour with `d(m) = scale * m^(-exponent)`.
    RadiusNn {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "two")]
        exponent: f64,
    },
    FiniteLanguage,
    MaxMargin {
        #[serde(default = "default_cap")]
        max_points: usize,
    },
}

fn default_thetas() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn default_cap() -> usize {
    DEFAULT_MAX_POINTS
}

impl Learner {
    pub fn finite_erm(thetas: Vec<f64>) -> Self {
        Learner::FiniteErm { thetas }
    }

    /// Radius nearest neighbour with `d(m) = m^-2`.
    pub fn radius_nn_inverse_square() -> Self {
        Learner::RadiusNn {
            scale: 1.0,
            exponent: 2.0,
        }
    }

    /// Radius nearest neighbour with a radius independent of `m`.
    pub fn radius_nn_fixed(d: f64) -> Self {
        Learner::RadiusNn {
            scale: d,
            exponent: 0.0,
        }
    }

    pub fn max_margin() -> Self {
        Learner::MaxMargin {
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Learner::Constant => LEARNER_NAMES[0],
            Learner::FiniteErm { .. } => LEARNER_NAMES[1],
            Learner::ThresholdMidpoint => LEARNER_NAMES[2],
            Learner::RadiusNn { .. } => LEARNER_NAMES[3],
            Learner::FiniteLanguage => LEARNER_NAMES[4],
            Learner::MaxMargin { .. } => LEARNER_NAMES[5],
        }
    }

    /// Name plus parameters, e.g. `radius_nn(d=1*m^-2)`.
    pub fn description(&self) -> String {
        match self {
            Learner::FiniteErm { thetas } => format!("finite_erm(thetas={thetas:?})"),
            Learner::RadiusNn { scale, exponent } => format!("radius_nn(d={scale}*m^-{exponent})"),
            Learner::MaxMargin { max_points } => format!("max_margin(max_points={max_points})"),
            other => other.name().to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Learner::FiniteErm { thetas } if thetas.is_empty() => {
                Err(Error::config("finite_erm needs at least one threshold"))
            }
            Learner::RadiusNn { scale, exponent } if !(*scale >= 0.0) || !exponent.is_finite() => {
                Err(Error::config("radius_nn needs scale >= 0 and a finite exponent"))
            }
            Learner::MaxMargin { max_points } if *max_points < 2 => {
                Err(Error::config("max_margin needs max_points >= 2"))
            }
            _ => Ok(()),
        }
    }

    /// Radius used by `radius_nn` on a training set of size `m`.
    pub fn radius_for(&self, m: usize) -> Option<f64> {
        match self {
            Learner::RadiusNn { scale, exponent } => Some(scale * (m as f64).powf(-exponent)),
            _ => None,
        }
    }

    pub fn hypotheses(&self) -> Option<Vec<Classifier>> {
        match self {
            Learner::FiniteErm { thetas } => {
                Some(thetas.iter().map(|&t| ThresholdClassifier::new(t).into()).collect())
            }
            _ => None,
        }
    }

    /// `f_S`. Finite ERM minimizes zero-one training error.
    pub fn train(&self, s: &TrainingSet) -> Result<Classifier> {
        Ok(match self {
            Learner::Constant => ConstantClassifier::positive().into(),
            Learner::FiniteErm { .. } => {
                let hs = self.hypotheses().unwrap_or_default();
                train_finite_erm(&hs, s, &Cost::default())?
            }
            Learner::ThresholdMidpoint => train_threshold_midpoint(s)?.into(),
            Learner::RadiusNn { .. } => {
                let d = self.radius_for(s.len()).unwrap_or(0.0);
                train_radius_nn(s, d)?.into()
            }
            Learner::FiniteLanguage => train_finite_language(s)?.into(),
            Learner::MaxMargin { max_points } => train_max_margin(s, *max_points)?.into(),
        })
    }

    /// Whether the pair is a realizable setting in which this learner has
    /// zero training error on every sample.
    pub fn realizes(&self, dist: &Distribution) -> bool {
        match self {
            Learner::Constant => dist.negative_mass() == 0.0,
            Learner::FiniteErm { thetas } => dist.unit_boundary().is_some_and(|t| thetas.contains(&t)),
            Learner::ThresholdMidpoint => dist.unit_boundary().is_some(),
            Learner::RadiusNn { scale, .. } => dist.unit_boundary().is_some() && *scale > 0.0,
            Learner::FiniteLanguage => matches!(dist, Distribution::FiniteStrings { .. }),
            Learner::MaxMargin { .. } => matches!(dist, Distribution::SeparatedDiscs2d { .. }),
        }
    }

    /// Whether the learner minimizes training error over its hypothesis
    /// class (exactly when the data are consistent with the class).
    pub fn is_erm(&self) -> bool {
        !matches!(self, Learner::Constant | Learner::RadiusNn { .. })
    }

    /// A distribution this learner is designed for, used by listings and
    /// benchmarks.
    pub fn natural_distribution(&self) -> Distribution {
        match self {
            Learner::Constant | Learner::FiniteErm { .. } | Learner::ThresholdMidpoint => {
                Distribution::uniform_threshold(0.5)
            }
            Learner::RadiusNn { .. } => Distribution::label_noise_constant(0.3),
            Learner::FiniteLanguage => Distribution::finite_strings_default(),
            Learner::MaxMargin { .. } => Distribution::separated_discs(1.0, 1.0),
        }
    }
}
