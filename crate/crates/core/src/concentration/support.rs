use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::support_change_delta;
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{Classifier, Distribution};
use crate::rng::Substreams;
use crate::stability::SamplerConfig;
use crate::stats::{combined_sigma, MeanEstimate, Proportion};

/// Replace-one hypothesis-change frequency against the support-count bound
/// `2 E|T| / (m + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportChangeResult {
    pub m: usize,
    pub trials: usize,
    /// Fraction of trials where `f_S` and `f_{S^{i,u}}` differ as functions.
    pub change: Proportion,
    /// Support points of the classifier trained on `S` plus `u` (`m + 1` points).
    pub support: MeanEstimate,
    pub bound: f64,
    /// Three combined standard errors of `change` and `bound`.
    pub tolerance: f64,
    pub holds: bool,
}

fn support_count(h: &Classifier) -> Result<usize> {
    match h {
        Classifier::Hyperplane(p) => Ok(p.support_indices.len()),
        other => Err(Error::Unsupported(format!("{} classifiers have no support points", other.family()))),
    }
}

pub fn support_change_experiment(learner: &Learner, dist: &Distribution, cfg: &SamplerConfig) -> Result<SupportChangeResult> {
    cfg.validate()?;
    let streams = Substreams::new(cfg.seed).fork("support_change");
    let rows = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.trial(t);
            let s = dist.sample_set(&mut rng, cfg.m)?;
            let u = dist.sample(&mut rng);
            let i = cfg.index_policy.index(t, cfg.m, &mut rng);
            let f = learner.train(&s)?;
            let g = learner.train(&s.replace_one(i, u.clone())?)?;
            let changed = f
                .differs_from(&g)
                .ok_or_else(|| Error::Unsupported(format!("no exact difference oracle for {}", f.family())))?;
            let count = support_count(&learner.train(&s.with_appended(u))?)?;
            Ok((changed, count as f64))
        })
        .collect::<Result<Vec<(bool, f64)>>>()?;
    let change = Proportion::from_flags(rows.iter().map(|r| r.0));
    let counts: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let support = MeanEstimate::from_samples(&counts, cfg.m as f64 + 1.0);
    let bound = support_change_delta(support.mean, cfg.m);
    let scale = 2.0 / (cfg.m as f64 + 1.0);
    let tolerance = 3.0 * combined_sigma(change.std_error, scale * support.std_error);
    Ok(SupportChangeResult {
        m: cfg.m,
        trials: cfg.trials,
        holds: change.value <= bound + tolerance,
        change,
        support,
        bound,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_disc_run() {
        let cfg = SamplerConfig::new(12, 60, 2);
        let d = Distribution::separated_discs(1.0, 1.0);
        let r = support_change_experiment(&Learner::max_margin(), &d, &cfg).unwrap();
        assert!(r.support.mean >= 2.0 && r.support.mean <= 3.0 + 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn needs_hyperplanes() {
        let cfg = SamplerConfig::new(10, 5, 0);
        let d = Distribution::uniform_threshold(0.5);
        assert!(support_change_experiment(&Learner::ThresholdMidpoint, &d, &cfg).is_err());
    }
}
