use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::classifier::Classifier;
use super::cost::Cost;
use super::intervals::IntervalSet;
use super::point::{Example, Label, Point};
use super::training_set::TrainingSet;
use crate::error::{Error, Result};

/// The catalog of labeled distributions on `Z = X x {-1, +1}`.
///
/// All families label deterministically, so each one is realizable by the
/// hypothesis class it was designed for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Distribution {
    /// `x ~ U[0, 1]`, `y = sign(x - theta)`.
    UniformThreshold {
        #[serde(default = "default_theta")]
        theta: f64,
    },
    /// `x ~ U[0, 1]`, negative exactly on `[0, eta)`, so the constant `+1`
    /// hypothesis has error `eta`.
    LabelNoiseConstant {
        #[serde(default = "default_eta")]
        eta: f64,
    },
    /// A finite support of strings with fixed probabilities, labeled positive
    /// iff the string belongs to the target language.
    FiniteStrings {
        #[serde(default = "default_support")]
        support: Vec<String>,
        #[serde(default = "default_probs")]
        probs: Vec<f64>,
        #[serde(default = "default_language")]
        language: Vec<String>,
    },
    /// Two uniform discs in the plane with equal mass; the left one negative.
    /// Centers sit at `(-(radius + gap / 2), 0)` and `(radius + gap / 2, 0)`.
    #[serde(rename = "separated_discs_2d")]
    SeparatedDiscs2d {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "one")]
        gap: f64,
    },
}

fn default_theta() -> f64 {
    0.5
}

fn default_eta() -> f64 {
    0.3
}

fn one() -> f64 {
    1.0
}

/// Default finite-strings support over the alphabet `{a, b}`.
pub fn default_strings() -> (Vec<String>, Vec<f64>, Vec<String>) {
    (default_support(), default_probs(), default_language())
}

fn default_support() -> Vec<String> {
    ["a", "b", "aa", "ab", "ba", "bb", "aaa", "aab", "aba", "abb"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn default_probs() -> Vec<f64> {
    vec![0.2, 0.2, 0.2, 0.2, 0.05, 0.05, 0.04, 0.03, 0.02, 0.01]
}

fn default_language() -> Vec<String> {
    default_support().into_iter().take(4).collect()
}

impl Distribution {
    pub fn uniform_threshold(theta: f64) -> Self {
        Distribution::UniformThreshold { theta }
    }

    pub fn label_noise_constant(eta: f64) -> Self {
        Distribution::LabelNoiseConstant { eta }
    }

    pub fn finite_strings_default() -> Self {
        let (support, probs, language) = default_strings();
        Distribution::FiniteStrings {
            support,
            probs,
            language,
        }
    }

    pub fn separated_discs(radius: f64, gap: f64) -> Self {
        Distribution::SeparatedDiscs2d { radius, gap }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::UniformThreshold { .. } => "uniform_threshold",
            Distribution::LabelNoiseConstant { .. } => "label_noise_constant",
            Distribution::FiniteStrings { .. } => "finite_strings",
            Distribution::SeparatedDiscs2d { .. } => "separated_discs_2d",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Distribution::UniformThreshold { theta } if !(0.0..=1.0).contains(theta) => {
                Err(Error::config(format!("theta must lie in [0, 1], got {theta}")))
            }
            Distribution::LabelNoiseConstant { eta } if !(0.0..=1.0).contains(eta) => {
                Err(Error::config(format!("eta must lie in [0, 1], got {eta}")))
            }
            Distribution::FiniteStrings {
                support,
                probs,
                language,
            } => {
                if support.is_empty() || support.len() != probs.len() {
                    return Err(Error::config("finite_strings needs one probability per support string"));
                }
                if probs.iter().any(|p| !(*p >= 0.0)) {
                    return Err(Error::config("finite_strings probabilities must be nonnegative"));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::config(format!(
                        "finite_strings probabilities must sum to 1, got {total}"
                    )));
                }
                let mut seen = std::collections::BTreeSet::new();
                if support.iter().any(|s| !seen.insert(s)) {
                    return Err(Error::config("finite_strings support has duplicates"));
                }
                if let Some(w) = language.iter().find(|w| !support.contains(w)) {
                    return Err(Error::config(format!("language word {w:?} is not in the support")));
                }
                Ok(())
            }
            Distribution::SeparatedDiscs2d { radius, gap } => {
                if !(*radius > 0.0) || !(*gap > 0.0) {
                    return Err(Error::config("separated_discs_2d needs radius > 0 and gap > 0"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Family name and parameters, e.g. `uniform_threshold(theta=0.5)`.
    pub fn description(&self) -> String {
        match self {
            Distribution::UniformThreshold { theta } => format!("uniform_threshold(theta={theta})"),
            Distribution::LabelNoiseConstant { eta } => format!("label_noise_constant(eta={eta})"),
            Distribution::FiniteStrings { support, language, .. } => format!(
                "finite_strings(support={},language={},p_min={})",
                support.len(),
                language.len(),
                self.min_language_probability().unwrap_or(0.0)
            ),
            Distribution::SeparatedDiscs2d { radius, gap } => {
                format!("separated_discs_2d(radius={radius},gap={gap})")
            }
        }
    }

    /// Right end of the negative interval `[0, t)` for families on `[0, 1]`.
    pub fn unit_boundary(&self) -> Option<f64> {
        match self {
            Distribution::UniformThreshold { theta } => Some(*theta),
            Distribution::LabelNoiseConstant { eta } => Some(*eta),
            _ => None,
        }
    }

    /// `Pr(y = -1)`.
    pub fn negative_mass(&self) -> f64 {
        match self {
            Distribution::UniformThreshold { theta } => *theta,
            Distribution::LabelNoiseConstant { eta } => *eta,
            Distribution::FiniteStrings {
                support,
                probs,
                language,
            } => support
                .iter()
                .zip(probs)
                .filter(|(s, _)| !language.contains(s))
                .map(|(_, p)| p)
                .sum(),
            Distribution::SeparatedDiscs2d { .. } => 0.5,
        }
    }

    /// `min_{x in L} Pr(x)` for the finite-strings family.
    pub fn min_language_probability(&self) -> Option<f64> {
        match self {
            Distribution::FiniteStrings {
                support,
                probs,
                language,
            } => support
                .iter()
                .zip(probs)
                .filter(|(s, _)| language.contains(s))
                .map(|(_, &p)| p)
                .reduce(f64::min),
            _ => None,
        }
    }

    fn disc_centers(radius: f64, gap: f64) -> [[f64; 2]; 2] {
        let c = radius + gap / 2.0;
        [[-c, 0.0], [c, 0.0]]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Example {
        match self {
            Distribution::UniformThreshold { .. } | Distribution::LabelNoiseConstant { .. } => {
                let t = self.unit_boundary().unwrap_or(0.0);
                let x: f64 = rng.random();
                Example::real(x, if x < t { Label::Negative } else { Label::Positive })
            }
            Distribution::FiniteStrings {
                support,
                probs,
                language,
            } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut idx = support.len() - 1;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        idx = k;
                        break;
                    }
                }
                let w = &support[idx];
                let y = if language.contains(w) { Label::Positive } else { Label::Negative };
                Example::word(w.clone(), y)
            }
            Distribution::SeparatedDiscs2d { radius, gap } => {
                let positive = rng.random_bool(0.5);
                let centers = Self::disc_centers(*radius, *gap);
                let c = centers[usize::from(positive)];
                let r = radius * rng.random::<f64>().sqrt();
                let phi = 2.0 * PI * rng.random::<f64>();
                let y = if positive { Label::Positive } else { Label::Negative };
                Example::vector(vec![c[0] + r * phi.cos(), c[1] + r * phi.sin()], y)
            }
        }
    }

    pub fn sample_set<R: Rng + ?Sized>(&self, rng: &mut R, m: usize) -> Result<TrainingSet> {
        TrainingSet::new((0..m).map(|_| self.sample(rng)).collect())
    }

    /// Closed-form `Err_D(h)`, when available for this family, classifier and
    /// cost.
    pub fn exact_error(&self, h: &Classifier, cost: &Cost) -> Option<f64> {
        match self {
            Distribution::UniformThreshold { .. } | Distribution::LabelNoiseConstant { .. } => {
                let scale = cost.disagreement_scale(h)?;
                let t = self.unit_boundary()?;
                let target = IntervalSet::from_spans([(0.0, t)]);
                let region = h.negative_region()?.clip(0.0, 1.0);
                Some(scale * region.symmetric_difference_measure(&target))
            }
            Distribution::FiniteStrings {
                support,
                probs,
                language,
            } => {
                let mut total = 0.0;
                for (w, p) in support.iter().zip(probs) {
                    let y = if language.contains(w) { Label::Positive } else { Label::Negative };
                    let hx = h.evaluate(&Point::Word(w.clone())).ok()?;
                    total += p * cost.of_prediction(hx, y);
                }
                Some(total)
            }
            Distribution::SeparatedDiscs2d { radius, gap } => {
                let scale = cost.disagreement_scale(h)?;
                match h {
                    // Both classes carry mass 1/2.
                    Classifier::Constant(_) => Some(scale * 0.5),
                    Classifier::Hyperplane(hp) if hp.w.len() == 2 => {
                        let norm = hp.w.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if norm == 0.0 {
                            // Degenerate: sign(b) everywhere.
                            return Some(scale * 0.5);
                        }
                        let [neg, pos] = Self::disc_centers(*radius, *gap);
                        let dist = |c: [f64; 2]| (hp.w[0] * c[0] + hp.w[1] * c[1] + hp.b) / norm;
                        // Positive disc errs where w.x + b < 0, negative disc
                        // where w.x + b >= 0.
                        let pos_err = cap_fraction(dist(pos), *radius);
                        let neg_err = cap_fraction(-dist(neg), *radius);
                        Some(scale * 0.5 * (pos_err + neg_err))
                    }
                    _ => None,
                }
            }
        }
    }
}

/// Fraction of a disc of radius `r` lying on the far side of a line whose
/// signed distance from the center is `s` (the side not containing the
/// center when `s > 0`).
fn cap_fraction(s: f64, r: f64) -> f64 {
    if s >= r {
        0.0
    } else if s <= -r {
        1.0
    } else {
        (r * r * (s / r).acos() - s * (r * r - s * s).sqrt()) / (PI * r * r)
    }
}
