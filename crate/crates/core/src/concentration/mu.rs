use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::learners::Learner;
use crate::model::{generalization_error, Cost, Distribution};
use crate::rng::Substreams;
use crate::stability::SamplerConfig;
use crate::stats::{combined_sigma, MeanEstimate};

/// An estimate of `mu = E_S gen(S)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub method: MuMethod,
    pub m: usize,
    pub estimate: MeanEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMethod {
    /// Sample mean of `gen(S)`.
    Direct,
    /// Sample mean of `c(f_S, z) - c(f_{S^{i,z}}, z)` over `(S, z) ~ D^{m+1}`.
    Replacement,
}

impl MuEstimate {
    pub fn mean(&self) -> f64 {
        self.estimate.mean
    }

    pub fn std_error(&self) -> f64 {
        self.estimate.std_error
    }

    /// `|self - other|` and three combined standard errors.
    pub fn difference(&self, other: &MuEstimate) -> (f64, f64) {
        (
            (self.mean() - other.mean()).abs(),
            3.0 * combined_sigma(self.std_error(), other.std_error()),
        )
    }
}

/// Per-trial `gen(S)` values, trial `t` on its own substream.
pub fn gen_samples(learner: &Learner, dist: &Distribution, cost: &Cost, cfg: &SamplerConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let streams = Substreams::new(cfg.seed).fork("gen");
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.trial(t);
            let s = dist.sample_set(&mut rng, cfg.m)?;
            generalization_error(learner, &s, dist, cost, cfg.n_test, &mut rng)
        })
        .collect()
}

pub fn mu_direct(learner: &Learner, dist: &Distribution, cost: &Cost, cfg: &SamplerConfig) -> Result<MuEstimate> {
    let xs = gen_samples(learner, dist, cost, cfg)?;
    Ok(MuEstimate {
        method: MuMethod::Direct,
        m: cfg.m,
        estimate: MeanEstimate::from_samples(&xs, 2.0 * cost.bound()),
    })
}

/// Estimates `mu` through the replace-one identity
/// `mu = E[c(f_S, z) - c(f_{S^{i,z}}, z)]`, with `i` from `cfg.index_policy`.
pub fn mu_via_replacement(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
) -> Result<MuEstimate> {
    cfg.validate()?;
    let streams = Substreams::new(cfg.seed).fork("mu_replacement");
    let xs = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.trial(t);
            let s = dist.sample_set(&mut rng, cfg.m)?;
            let z = dist.sample(&mut rng);
            let i = cfg.index_policy.index(t, cfg.m, &mut rng);
            let f = learner.train(&s)?;
            let g = learner.train(&s.replace_one(i, z.clone())?)?;
            Ok(cost.cost(&f, &z)? - cost.cost(&g, &z)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MuEstimate {
        method: MuMethod::Replacement,
        m: cfg.m,
        estimate: MeanEstimate::from_samples(&xs, 2.0 * cost.bound()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_learner_has_zero_replacement_terms() {
        let cfg = SamplerConfig::new(20, 500, 1);
        let d = Distribution::label_noise_constant(0.3);
        let r = mu_via_replacement(&Learner::Constant, &d, &Cost::default(), &cfg).unwrap();
        assert_eq!((r.mean(), r.std_error()), (0.0, 0.0));
        let direct = mu_direct(&Learner::Constant, &d, &Cost::default(), &cfg).unwrap();
        let (diff, tol) = direct.difference(&r);
        assert!(diff <= tol, "{diff} > {tol}");
    }

    #[test]
    fn zero_error_learner_has_zero_mu() {
        let cfg = SamplerConfig::new(20, 200, 2);
        let d = Distribution::uniform_threshold(0.0);
        let e = mu_direct(&Learner::Constant, &d, &Cost::default(), &cfg).unwrap();
        assert_eq!(e.mean(), 0.0);
    }

    #[test]
    fn erm_replacement_terms_are_nonnegative() {
        let cfg = SamplerConfig::new(20, 500, 3);
        let d = Distribution::uniform_threshold(0.5);
        let r = mu_via_replacement(&Learner::ThresholdMidpoint, &d, &Cost::default(), &cfg).unwrap();
        assert!(r.mean() >= 0.0);
    }
}
