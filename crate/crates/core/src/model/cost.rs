use serde::{Deserialize, Serialize};

use super::classifier::Classifier;
use super::point::{Example, Label};
use crate::error::{Error, Result};

/// A cost `c(h, z)` bounded by `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cost {
    /// `M * 1[sign(h(x)) != y]`.
    ZeroOne {
        #[serde(default = "unit_bound")]
        bound: f64,
    },
    /// `|h(x) - y| / 2`, bounded by 1.
    ConfidenceRated,
}

fn unit_bound() -> f64 {
    1.0
}

impl Default for Cost {
    fn default() -> Self {
        Cost::ZeroOne { bound: 1.0 }
    }
}

impl Cost {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Cost::ZeroOne { bound } if !(bound > 0.0 && bound.is_finite()) => {
                Err(Error::invalid(format!("cost bound must be positive, got {bound}")))
            }
            _ => Ok(()),
        }
    }

    /// The bound `M`.
    pub fn bound(&self) -> f64 {
        match *self {
            Cost::ZeroOne { bound } => bound,
            Cost::ConfidenceRated => 1.0,
        }
    }

    pub fn is_zero_one(&self) -> bool {
        matches!(self, Cost::ZeroOne { .. })
    }

    /// Cost of predicting `hx` on a point labeled `y`.
    pub fn of_prediction(&self, hx: f64, y: Label) -> f64 {
        match *self {
            Cost::ZeroOne { bound } => {
                if Label::of(hx) == y {
                    0.0
                } else {
                    bound
                }
            }
            Cost::ConfidenceRated => (hx - y.value()).abs() / 2.0,
        }
    }

    pub fn cost(&self, h: &Classifier, z: &Example) -> Result<f64> {
        Ok(self.of_prediction(h.evaluate(&z.x)?, z.y))
    }

    /// Multiplier turning a disagreement probability into an expected cost,
    /// when that reduction is exact for `h`.
    pub(crate) fn disagreement_scale(&self, h: &Classifier) -> Option<f64> {
        match *self {
            Cost::ZeroOne { bound } => Some(bound),
            Cost::ConfidenceRated if h.is_binary() => Some(1.0),
            Cost::ConfidenceRated => None,
        }
    }
}
