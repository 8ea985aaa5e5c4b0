use serde::{Deserialize, Serialize};

use super::bounds::{
    erm_cv_stability_tail, hypothesis_stability_tail, training_stability_tail, uniform_stability_tail, wdb_tail,
    BoundKind,
};
use super::mu::gen_samples;
use super::wdb::gen_wdb_certificate;
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{Cost, Distribution};
use crate::rng::Substreams;
use crate::stability::{estimate, sample_perturbations, Notion, SamplerConfig, StabilityMode};
use crate::stats::{sample_variance, MeanEstimate, Proportion};

/// One bound evaluated along the tau grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    /// Stability parameter plugged in (`beta` for the uniform bound, `lambda` otherwise).
    pub parameter: f64,
    /// Raw bound values, possibly above 1.
    pub values: Vec<f64>,
    /// No trial of the stability sample exceeded the parameter used.
    pub certified: bool,
}

/// Empirical tail of `gen(S)` around its sample mean, with bound curves
/// computed from stability parameters estimated on the same configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub m: usize,
    pub trials: usize,
    pub mean: MeanEstimate,
    pub variance: f64,
    pub tau_grid: Vec<f64>,
    /// `Pr(|gen - mean| >= tau)` per tau.
    pub empirical: Vec<Proportion>,
    /// Level used for the quantile-based `beta` estimates.
    pub delta: f64,
    pub curves: Vec<BoundCurve>,
}

impl TailCurve {
    pub fn curve(&self, kind: BoundKind) -> Option<&BoundCurve> {
        self.curves.iter().find(|c| c.kind == kind)
    }
}

pub fn validate_tau_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.is_empty() {
        return Err(Error::invalid("tau grid is empty"));
    }
    if tau_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::invalid("tau values must be finite and >= 0"));
    }
    if tau_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("tau grid must be strictly ascending"));
    }
    Ok(())
}

/// Empirical `Pr(|x - center| >= tau)` for each tau.
pub fn empirical_tail(xs: &[f64], center: f64, tau_grid: &[f64]) -> Vec<Proportion> {
    let mut dev: Vec<f64> = xs.iter().map(|x| (x - center).abs()).collect();
    dev.sort_by(f64::total_cmp);
    tau_grid
        .iter()
        .map(|&tau| {
            let below = dev.partition_point(|&d| d < tau);
            Proportion::new(dev.len() - below, dev.len())
        })
        .collect()
}

/// Samples `gen(S)` and a replace-one perturbation sample (on an independent
/// seed fork), then evaluates every tail bound along `tau_grid`.
///
/// `beta` for the lambda-based bounds is the `(1 - delta)`-quantile of the
/// matching per-trial statistic; the uniform bound uses the observed maximum.
pub fn concentration_experiment(
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    tau_grid: &[f64],
    delta: f64,
) -> Result<TailCurve> {
    validate_tau_grid(tau_grid)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let gens = gen_samples(learner, dist, cost, cfg)?;
    let big_m = cost.bound();
    let mean = MeanEstimate::from_samples(&gens, 2.0 * big_m);
    let empirical = empirical_tail(&gens, mean.mean, tau_grid);

    let stab_cfg = SamplerConfig {
        seed: Substreams::new(cfg.seed).fork("tail_stability").seed(),
        ..*cfg
    };
    let sample = sample_perturbations(learner, dist, cost, &stab_cfg)?;
    let m = cfg.m;
    let mf = m as f64;
    let quantile = |notion| estimate(&sample, notion, StabilityMode::FixDelta(delta)).map(|e| e.value);
    let exceed = |notion, beta| estimate(&sample, notion, StabilityMode::FixBeta(beta)).map(|e| e.value == 0.0);

    let beta_sup = estimate(&sample, Notion::UniformHyp, StabilityMode::FixBeta(0.0))?.value;
    // Training stability needs one beta for both clauses, so take the larger quantile.
    let beta_train = quantile(Notion::Cv)?.max(quantile(Notion::Overlap)?);
    let beta_hyp = quantile(Notion::WeakHyp)?;
    let beta_cv = quantile(Notion::Cv)?;
    let train_ok = exceed(Notion::Training, beta_train)?;
    let cert = gen_wdb_certificate(beta_train, 0.0, big_m, m)?;

    let along = |f: &dyn Fn(f64) -> f64| tau_grid.iter().map(|&t| f(t)).collect::<Vec<_>>();
    let curves = vec![
        BoundCurve {
            kind: BoundKind::Uniform,
            parameter: beta_sup,
            values: along(&|t| uniform_stability_tail(beta_sup, big_m, m, t)),
            certified: true,
        },
        BoundCurve {
            kind: BoundKind::Training,
            parameter: mf * beta_train,
            values: along(&|t| training_stability_tail(mf * beta_train, big_m, m, t)),
            certified: train_ok,
        },
        BoundCurve {
            kind: BoundKind::Hypothesis,
            parameter: mf * beta_hyp,
            values: along(&|t| hypothesis_stability_tail(mf * beta_hyp, big_m, m, t)),
            certified: exceed(Notion::WeakHyp, beta_hyp)?,
        },
        BoundCurve {
            kind: BoundKind::ErmCv,
            parameter: mf * beta_cv,
            values: along(&|t| erm_cv_stability_tail(mf * beta_cv, big_m, m, t)),
            certified: exceed(Notion::Cv, beta_cv)? && learner.is_erm(),
        },
        BoundCurve {
            kind: BoundKind::Wdb,
            parameter: mf * cert.c,
            values: along(&|t| wdb_tail(mf * cert.c, m, t)),
            certified: train_ok,
        },
    ];
    Ok(TailCurve {
        m,
        trials: cfg.trials,
        variance: sample_variance(&gens),
        mean,
        tau_grid: tau_grid.to_vec(),
        empirical,
        delta,
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_tail_shape() {
        let xs = [0.0, 0.25, 0.5, 0.75, 1.0];
        let t = empirical_tail(&xs, 0.5, &[0.0, 0.25, 0.3, 0.5, 0.6]);
        let v: Vec<f64> = t.iter().map(|p| p.value).collect();
        assert_eq!(v, vec![1.0, 0.8, 0.4, 0.4, 0.0]);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_tau_grid(&[]).is_err());
        assert!(validate_tau_grid(&[0.2, 0.1]).is_err());
        assert!(validate_tau_grid(&[-0.1, 0.1]).is_err());
        assert!(validate_tau_grid(&[0.0, 0.1]).is_ok());
    }

    #[test]
    fn small_run_produces_monotone_tail() {
        let cfg = SamplerConfig::new(30, 400, 4);
        let d = Distribution::uniform_threshold(0.5);
        let grid = [0.0, 0.005, 0.01, 0.02, 0.05];
        let c = concentration_experiment(&Learner::ThresholdMidpoint, &d, &Cost::default(), &cfg, &grid, 0.05).unwrap();
        assert_eq!(c.empirical[0].value, 1.0);
        assert!(c.empirical.windows(2).all(|w| w[0].value >= w[1].value));
        assert_eq!(c.curves.len(), 5);
        for curve in &c.curves {
            for (e, b) in c.empirical.iter().zip(&curve.values) {
                if curve.certified {
                    assert!(e.value <= b.min(1.0) + e.ci());
                }
            }
        }
    }
}
