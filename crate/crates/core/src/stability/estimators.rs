use serde::{Deserialize, Serialize};

use super::{sample_perturbations, IndexPolicy, Notion, PerturbationSample, SamplerConfig, StabilityMode, TrialStats};
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{Cost, Distribution};
use crate::rng::Substreams;
use crate::stats::{combined_sigma, upper_quantile, Proportion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    /// `beta` given, `delta` estimated.
    FixBeta,
    /// `delta` given, `beta` estimated.
    FixDelta,
    /// Largest statistic seen over all trials; the true supremum is at least this.
    ObservedSup,
}

/// An estimated `(beta, delta)` pair. Exactly one coordinate is estimated,
/// the other is the configured input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityEstimate {
    pub notion: Notion,
    pub mode: EstimateMode,
    pub beta: f64,
    pub delta: f64,
    /// The estimated coordinate.
    pub value: f64,
    /// 95% half-width around `value`.
    pub ci: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub std_error: f64,
    pub trials: usize,
    pub m: usize,
    pub index_policy: IndexPolicy,
    /// The sup over `z` was sampled, so `value` is only a lower bound.
    pub lower_bound: bool,
}

fn statistic(notion: Notion, t: &TrialStats) -> f64 {
    match notion {
        Notion::UniformHyp | Notion::WeakHyp => t.hyp_diff,
        Notion::WeakError => t.err_diff,
        Notion::Cv => t.cv_diff(),
        Notion::Overlap => t.overlap_diff,
        Notion::Training => t.cv_diff().max(t.overlap_diff),
    }
}

/// Estimates `notion` from a shared perturbation sample.
///
/// `uniform_hyp` ignores `mode` and reports the observed maximum of the
/// hypothesis difference. `training` supports `fix_beta` only.
pub fn estimate(sample: &PerturbationSample, notion: Notion, mode: StabilityMode) -> Result<StabilityEstimate> {
    let n = sample.trials.len();
    if n == 0 {
        return Err(Error::invalid("empty perturbation sample"));
    }
    let big_m = sample.cost_bound;
    let values: Vec<f64> = sample.trials.iter().map(|t| statistic(notion, t)).collect();
    let lower_bound = matches!(notion, Notion::UniformHyp | Notion::WeakHyp) && !sample.hyp_exact();
    let base = |mode, beta, delta, value, ci_low, ci_high, std_error| StabilityEstimate {
        notion,
        mode,
        beta,
        delta,
        value,
        ci: (ci_high - ci_low) / 2.0,
        ci_low,
        ci_high,
        std_error,
        trials: n,
        m: sample.config.m,
        index_policy: sample.config.index_policy,
        lower_bound,
    };

    if notion == Notion::UniformHyp {
        let sup = values.iter().cloned().fold(0.0f64, f64::max).min(big_m);
        return Ok(base(EstimateMode::ObservedSup, sup, 0.0, sup, sup, sup, 0.0));
    }
    match mode {
        StabilityMode::FixBeta(beta) => {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
            }
            let p = Proportion::from_flags(values.iter().map(|&v| v > beta));
            Ok(base(EstimateMode::FixBeta, beta, p.value, p.value, p.ci_low, p.ci_high, p.std_error))
        }
        StabilityMode::FixDelta(delta) => {
            if notion == Notion::Training {
                return Err(Error::Unsupported("training stability is estimated in fix_beta mode only".into()));
            }
            if !(0.0..=1.0).contains(&delta) {
                return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
            }
            let mut sorted = values;
            sorted.sort_by(f64::total_cmp);
            let q = upper_quantile(&sorted, 1.0 - delta);
            let value = q.value.clamp(0.0, big_m);
            // Order-statistic interval; the half-width doubles as a standard-error proxy.
            let se = q.ci() / crate::stats::Z95;
            Ok(base(EstimateMode::FixDelta, value, delta, value, q.ci_low, q.ci_high, se))
        }
    }
}

fn run(
    notion: Notion,
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    mode: StabilityMode,
) -> Result<StabilityEstimate> {
    let sample = sample_perturbations(learner, dist, cost, cfg)?;
    estimate(&sample, notion, mode)
}

pub fn estimate_uniform_hypothesis_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
) -> Result<StabilityEstimate> {
    run(Notion::UniformHyp, learner, dist, cost, cfg, StabilityMode::FixBeta(0.0))
}

pub fn estimate_weak_hypothesis_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    mode: StabilityMode,
) -> Result<StabilityEstimate> {
    run(Notion::WeakHyp, learner, dist, cost, cfg, mode)
}

pub fn estimate_weak_error_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    mode: StabilityMode,
) -> Result<StabilityEstimate> {
    run(Notion::WeakError, learner, dist, cost, cfg, mode)
}

pub fn estimate_cv_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    mode: StabilityMode,
) -> Result<StabilityEstimate> {
    run(Notion::Cv, learner, dist, cost, cfg, mode)
}

pub fn estimate_overlap_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    mode: StabilityMode,
) -> Result<StabilityEstimate> {
    run(Notion::Overlap, learner, dist, cost, cfg, mode)
}

pub fn estimate_training_stability(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    beta: f64,
) -> Result<StabilityEstimate> {
    run(Notion::Training, learner, dist, cost, cfg, StabilityMode::FixBeta(beta))
}

/// Converts cross-validation stability `(beta, delta)` into weak error
/// stability `(2 beta + 2 M alpha, min(1, 2 delta / alpha))`.
pub fn cv_to_error_stability(beta: f64, delta: f64, alpha: f64, big_m: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
    }
    if !(beta >= 0.0) || !(0.0..=1.0).contains(&delta) || !(big_m > 0.0) {
        return Err(Error::invalid("need beta >= 0, delta in [0, 1], M > 0"));
    }
    Ok((2.0 * beta + 2.0 * big_m * alpha, (2.0 * delta / alpha).min(1.0)))
}

/// Empirical check of the cv-to-error conversion on an independent sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvToErrorCheck {
    pub cv: StabilityEstimate,
    pub alpha: f64,
    pub error_beta: f64,
    pub error_delta: f64,
    /// Fraction of fresh trials with `err_diff > error_beta`.
    pub observed: Proportion,
    /// `3 * sqrt(sd(error_delta)^2 + sd(observed)^2)`.
    pub tolerance: f64,
    pub holds: bool,
}

/// Estimates cv stability at `cv_beta`, converts it, and checks the
/// converted error-stability claim on trials drawn from a forked seed.
pub fn check_cv_to_error(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    cv_beta: f64,
    alpha: f64,
) -> Result<CvToErrorCheck> {
    let cv = estimate_cv_stability(learner, dist, cost, cfg, StabilityMode::FixBeta(cv_beta))?;
    let (error_beta, error_delta) = cv_to_error_stability(cv.beta, cv.value, alpha, cost.bound())?;
    let fresh_cfg = SamplerConfig {
        seed: Substreams::new(cfg.seed).fork("cv_to_error").seed(),
        ..*cfg
    };
    let fresh = sample_perturbations(learner, dist, cost, &fresh_cfg)?;
    let observed = Proportion::from_flags(fresh.trials.iter().map(|t| t.err_diff > error_beta));
    let tolerance = 3.0 * combined_sigma(2.0 / alpha * cv.std_error, observed.std_error);
    let holds = observed.value <= error_delta + tolerance;
    Ok(CvToErrorCheck {
        cv,
        alpha,
        error_beta,
        error_delta,
        observed,
        tolerance,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_of(diffs: &[(f64, f64, f64, f64)]) -> PerturbationSample {
        PerturbationSample {
            config: SamplerConfig::new(10, diffs.len(), 0),
            cost_bound: 1.0,
            trials: diffs
                .iter()
                .map(|&(h, e, c, o)| TrialStats {
                    index: 9,
                    hyp_diff: h,
                    hyp_exact: true,
                    err_diff: e,
                    cv_signed: c,
                    overlap_diff: o,
                })
                .collect(),
        }
    }

    #[test]
    fn cv_to_error_arithmetic() {
        let (b, d) = cv_to_error_stability(0.01, 0.001, 0.05, 1.0).unwrap();
        assert!((b - 0.12).abs() < 1e-12 && (d - 0.04).abs() < 1e-12);
        assert_eq!(cv_to_error_stability(0.0, 0.0, 0.3, 1.0).unwrap(), (0.6, 0.0));
        let (b, d) = cv_to_error_stability(0.1, 0.5, 0.5, 1.0).unwrap();
        assert!((b - 1.2).abs() < 1e-12);
        assert_eq!(d, 1.0);
        assert!(cv_to_error_stability(0.1, 0.1, 0.0, 1.0).is_err());
        assert!(cv_to_error_stability(0.1, 0.1, -1.0, 1.0).is_err());
    }

    #[test]
    fn fix_beta_counts_strict_exceedances() {
        let s = sample_of(&[(1.0, 0.2, 1.0, 0.0), (0.0, 0.0, 0.0, 0.0), (1.0, 0.5, -1.0, 0.1), (1.0, 0.1, 0.0, 0.3)]);
        let e = estimate(&s, Notion::WeakError, StabilityMode::FixBeta(0.2)).unwrap();
        assert_eq!(e.value, 0.25);
        let cv = estimate(&s, Notion::Cv, StabilityMode::FixBeta(0.0)).unwrap();
        assert_eq!(cv.value, 0.5);
        let tr = estimate(&s, Notion::Training, StabilityMode::FixBeta(0.0)).unwrap();
        assert_eq!(tr.value, 0.75);
        let sup = estimate(&s, Notion::UniformHyp, StabilityMode::FixBeta(0.0)).unwrap();
        assert_eq!((sup.mode, sup.value), (EstimateMode::ObservedSup, 1.0));
    }

    #[test]
    fn fix_delta_quantile() {
        let diffs: Vec<_> = (0..100).map(|k| (0.0, k as f64 / 100.0, 0.0, 0.0)).collect();
        let s = sample_of(&diffs);
        let e = estimate(&s, Notion::WeakError, StabilityMode::FixDelta(0.05)).unwrap();
        assert!((e.value - 0.94).abs() < 1e-12);
        assert!(e.ci_low <= e.value && e.value <= e.ci_high);
        let wide = estimate(&s, Notion::WeakError, StabilityMode::FixDelta(0.2)).unwrap();
        assert!(wide.value <= e.value);
        assert!(estimate(&s, Notion::Training, StabilityMode::FixDelta(0.1)).is_err());
        assert!(estimate(&s, Notion::Cv, StabilityMode::FixDelta(1.5)).is_err());
    }
}
