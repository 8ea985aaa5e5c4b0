use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IndexPolicy;
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{empirical_error, Cost, Distribution, TrainingSet, TrueErrorEval};
use crate::rng::Substreams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub m: usize,
    pub trials: usize,
    pub index_policy: IndexPolicy,
    pub seed: u64,
    /// Auxiliary points for the sup over `z` when no exact oracle applies.
    pub n_z: usize,
    /// Test points for `Err_D` when no closed form applies.
    pub n_test: usize,
}

impl SamplerConfig {
    pub fn new(m: usize, trials: usize, seed: u64) -> Self {
        Self {
            m,
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn with_policy(mut self, policy: IndexPolicy) -> Self {
        self.index_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::invalid("replace-one sampling needs m >= 2"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("need at least one trial"));
        }
        self.index_policy.validate(self.m)
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            m: 50,
            trials: 1000,
            index_policy: IndexPolicy::Last,
            seed: 0,
            n_z: 1024,
            n_test: 10_000,
        }
    }
}

/// The statistics of one replace-one trial `(S, i, u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub index: usize,
    /// `sup_z |c(f_S, z) - c(f_{S^{i,u}}, z)|`, exact or a sampled maximum.
    pub hyp_diff: f64,
    pub hyp_exact: bool,
    /// `|Err_D(f_S) - Err_D(f_{S^{i,u}})|`.
    pub err_diff: f64,
    /// `c(f_S, u) - c(f_{S^{i,u}}, u)`.
    pub cv_signed: f64,
    /// `|Err_{S^i}(f_S) - Err_{S^i}(f_{S^{i,u}})|`.
    pub overlap_diff: f64,
}

impl TrialStats {
    pub fn cv_diff(&self) -> f64 {
        self.cv_signed.abs()
    }
}

/// Per-trial statistics for one learner/distribution/cost configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSample {
    pub config: SamplerConfig,
    pub cost_bound: f64,
    pub trials: Vec<TrialStats>,
}

impl PerturbationSample {
    /// True when every trial used an exact sup-over-z oracle.
    pub fn hyp_exact(&self) -> bool {
        self.trials.iter().all(|t| t.hyp_exact)
    }
}

/// Draws `trials` independent `(S ~ D^m, u ~ D, i)` triples and computes the
/// four replace-one statistics for each.
///
/// Trial `t` uses its own substream of `seed`, so the result is identical
/// under any degree of parallelism.
pub fn sample_perturbations(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
) -> Result<PerturbationSample> {
    cfg.validate()?;
    let streams = Substreams::new(cfg.seed);
    let trials = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(learner, dist, cost, cfg, &streams, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(PerturbationSample {
        config: *cfg,
        cost_bound: cost.bound(),
        trials,
    })
}

fn run_trial(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    streams: &Substreams,
    t: u64,
) -> Result<TrialStats> {
    let mut rng = streams.trial(t);
    let s = dist.sample_set(&mut rng, cfg.m)?;
    let u = dist.sample(&mut rng);
    let i = cfg.index_policy.index(t, cfg.m, &mut rng);
    let s_iu = s.replace_one(i, u.clone())?;
    let f = learner.train(&s)?;
    let g = learner.train(&s_iu)?;

    let cv_signed = cost.cost(&f, &u)? - cost.cost(&g, &u)?;
    let s_i: TrainingSet = s.remove_one(i)?;
    let overlap_diff = (empirical_error(&f, &s_i, cost)? - empirical_error(&g, &s_i, cost)?).abs();

    let oracle = if cost.is_zero_one() { f.differs_from(&g) } else { None };
    let (hyp_diff, hyp_exact) = match oracle {
        Some(differ) => (if differ { cost.bound() } else { 0.0 }, true),
        None => {
            // Lower bound on the sup. The training points and u are included
            // so the bound still dominates the cv and overlap statistics.
            let mut best = 0.0f64;
            for z in s.iter().chain(std::iter::once(&u)) {
                best = best.max((cost.cost(&f, z)? - cost.cost(&g, z)?).abs());
            }
            for _ in 0..cfg.n_z {
                let z = dist.sample(&mut rng);
                best = best.max((cost.cost(&f, &z)? - cost.cost(&g, &z)?).abs());
            }
            (best, false)
        }
    };

    let eval = TrueErrorEval::for_classifiers(dist, cost, &[&f, &g], cfg.n_test, &mut rng);
    let err_diff = (eval.error(&f, cost)? - eval.error(&g, cost)?).abs();

    Ok(TrialStats {
        index: i,
        hyp_diff,
        hyp_exact,
        err_diff,
        cv_signed,
        overlap_diff,
    })
}
