//! Replace-one Monte Carlo estimators for the six stability notions.
//!
//! One [`PerturbationSample`] holds, per trial, the four statistics every
//! notion is built from; estimating several notions from the same sample
//! keeps their per-trial relationships exact.

mod estimators;
mod sampler;

pub use estimators::{
    check_cv_to_error, cv_to_error_stability, estimate, estimate_cv_stability,
    estimate_overlap_stability, estimate_training_stability, estimate_uniform_hypothesis_stability,
    estimate_weak_error_stability, estimate_weak_hypothesis_stability, CvToErrorCheck, EstimateMode,
    StabilityEstimate,
};
pub use sampler::{sample_perturbations, PerturbationSample, SamplerConfig, TrialStats};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    UniformHyp,
    WeakHyp,
    WeakError,
    Cv,
    Overlap,
    Training,
}

impl Notion {
    pub const ALL: [Notion; 6] = [
        Notion::UniformHyp,
        Notion::WeakHyp,
        Notion::WeakError,
        Notion::Cv,
        Notion::Overlap,
        Notion::Training,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::UniformHyp => "uniform_hyp",
            Notion::WeakHyp => "weak_hyp",
            Notion::WeakError => "weak_error",
            Notion::Cv => "cv",
            Notion::Overlap => "overlap",
            Notion::Training => "training",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Notion::UniformHyp => "sup over S, i, u, z of |c(f_S,z) - c(f_S^{i,u},z)| (observed maximum)",
            Notion::WeakHyp => "Pr(sup_z |c(f_S,z) - c(f_S^{i,u},z)| > beta)",
            Notion::WeakError => "Pr(|Err_D(f_S) - Err_D(f_S^{i,u})| > beta)",
            Notion::Cv => "Pr(|c(f_S,u) - c(f_S^{i,u},u)| > beta)",
            Notion::Overlap => "Pr(|Err_S^i(f_S) - Err_S^i(f_S^{i,u})| > beta)",
            Notion::Training => "Pr(cv or overlap difference > beta)",
        }
    }
}

/// Which one-dimensional slice of `(beta, delta)` to estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMode {
    /// Estimate `delta` at a given `beta`.
    FixBeta(f64),
    /// Estimate `beta` at a given `delta`.
    FixDelta(f64),
}

/// Which training index is replaced in each trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexPolicy {
    /// `i = m - 1` (the last entry).
    #[default]
    Last,
    /// A fixed 0-based index.
    Fixed(usize),
    UniformRandom,
    /// `i = trial mod m`.
    Cycle,
}

impl IndexPolicy {
    pub fn label(&self) -> String {
        match self {
            IndexPolicy::Last => "last".into(),
            IndexPolicy::Fixed(i) => format!("fixed({i})"),
            IndexPolicy::UniformRandom => "uniform_random".into(),
            IndexPolicy::Cycle => "cycle".into(),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        match *self {
            IndexPolicy::Fixed(i) if i >= m => Err(Error::IndexOutOfRange { index: i, len: m }),
            _ => Ok(()),
        }
    }

    pub(crate) fn index<R: Rng + ?Sized>(&self, trial: u64, m: usize, rng: &mut R) -> usize {
        match *self {
            IndexPolicy::Last => m - 1,
            IndexPolicy::Fixed(i) => i,
            IndexPolicy::UniformRandom => rng.random_range(0..m),
            IndexPolicy::Cycle => (trial % m as u64) as usize,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_serde_shapes() {
        #[derive(Deserialize)]
        struct W {
            p: IndexPolicy,
        }
        assert_eq!(toml::from_str::<W>("p = \"last\"").unwrap().p, IndexPolicy::Last);
        assert_eq!(toml::from_str::<W>("p = { fixed = 3 }").unwrap().p, IndexPolicy::Fixed(3));
        assert_eq!(toml::from_str::<W>("p = \"cycle\"").unwrap().p, IndexPolicy::Cycle);
        assert!(IndexPolicy::Fixed(5).validate(5).is_err());
    }

    #[test]
    fn notion_names_unique() {
        let names: std::collections::BTreeSet<_> = Notion::ALL.iter().map(|n| n.name()).collect();
        assert_eq!(names.len(), 6);
    }
}
