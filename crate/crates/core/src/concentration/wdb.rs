use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{empirical_error, Cost, Distribution, Point, TrainingSet, TrueErrorEval};
use crate::rng::Substreams;
use crate::stability::SamplerConfig;
use crate::stats::Proportion;

/// A weak difference bound: a one-coordinate change moves the variable by at
/// most `c` except with probability `delta`, and never by more than `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WdbTriple {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
}

impl WdbTriple {
    pub fn new(b: f64, c: f64, delta: f64) -> Result<Self> {
        if !(0.0 <= c && c <= b && b.is_finite()) {
            return Err(Error::invalid(format!("need 0 <= c <= b, got b={b}, c={c}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
        }
        Ok(Self { b, c, delta })
    }

    pub fn zero() -> Self {
        Self { b: 0.0, c: 0.0, delta: 0.0 }
    }

    /// Builds a triple from bounds that may have `c > b` or `delta > 1`.
    /// A typical bound above the worst case carries no information beyond
    /// `b`, so `c` is clamped to `b`; `delta` is capped at 1.
    pub fn clamped(b: f64, c: f64, delta: f64) -> Self {
        Self {
            b,
            c: c.min(b),
            delta: delta.min(1.0),
        }
    }
}

/// Triple for a sum `X + Y`: `(b1 + b2, c1 + c2, min(1, delta1 + delta2))`.
pub fn compose_wdb(t1: WdbTriple, t2: WdbTriple) -> WdbTriple {
    WdbTriple::clamped(t1.b + t2.b, t1.c + t2.c, t1.delta + t2.delta)
}

/// Triple for `gen(S)` from training stability `(beta, delta)`.
///
/// Composes `(M, beta + M/m, delta)` for the training error with
/// `(M, 2 beta + 2M/m, 2 m delta)` for the true error (the cv-to-error
/// conversion at `alpha = 1/m`), giving `(2M, 3 beta + 3M/m, (2m + 1) delta)`.
pub fn gen_wdb_certificate(beta: f64, delta: f64, big_m: f64, m: usize) -> Result<WdbTriple> {
    if m == 0 || !(beta >= 0.0) || !(0.0..=1.0).contains(&delta) || !(big_m > 0.0) {
        return Err(Error::invalid("need m >= 1, beta >= 0, delta in [0, 1], M > 0"));
    }
    let mf = m as f64;
    let train = WdbTriple::clamped(big_m, beta + big_m / mf, delta);
    let true_err = WdbTriple::clamped(big_m, 2.0 * beta + 2.0 * big_m / mf, 2.0 * mf * delta);
    Ok(compose_wdb(train, true_err))
}

/// The random variable whose one-coordinate differences are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WdbStatistic {
    /// Mean of the real coordinates of `S` (1-D distributions only).
    CoordinateMean,
    /// `Err_S(f_S)`.
    TrainError,
    /// `Err_D(f_S)`.
    TrueError,
    /// `gen(S) = Err_D(f_S) - Err_S(f_S)`.
    #[default]
    Gen,
}

impl WdbStatistic {
    pub fn name(self) -> &'static str {
        match self {
            WdbStatistic::CoordinateMean => "coordinate_mean",
            WdbStatistic::TrainError => "train_error",
            WdbStatistic::TrueError => "true_error",
            WdbStatistic::Gen => "gen",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WdbEstimate {
    pub statistic: WdbStatistic,
    pub m: usize,
    pub c: f64,
    /// Largest observed difference, a lower bound on `b`.
    pub b_hat: f64,
    /// Fraction of trials with difference `> c`.
    pub delta: Proportion,
    pub trials: usize,
}

fn coordinate_mean(s: &TrainingSet) -> Result<f64> {
    let mut sum = 0.0;
    for z in s {
        match z.x {
            Point::Real(x) => sum += x,
            _ => return Err(Error::Unsupported("coordinate_mean needs real-valued points".into())),
        }
    }
    Ok(sum / s.len() as f64)
}

/// Estimates `(b, delta)` at threshold `c` for `statistic`, replacing the
/// coordinate chosen by `cfg.index_policy` (default: the last one).
pub fn estimate_wdb(
    statistic: WdbStatistic,
    learner: &Learner,
    dist: &Distribution,
    cost: &Cost,
    cfg: &SamplerConfig,
    c: f64,
) -> Result<WdbEstimate> {
    cfg.validate()?;
    if !(c >= 0.0) {
        return Err(Error::invalid(format!("c must be >= 0, got {c}")));
    }
    let streams = Substreams::new(cfg.seed).fork("wdb");
    let diffs = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.trial(t);
            let s = dist.sample_set(&mut rng, cfg.m)?;
            let u = dist.sample(&mut rng);
            let k = cfg.index_policy.index(t, cfg.m, &mut rng);
            let s2 = s.replace_one(k, u)?;
            if statistic == WdbStatistic::CoordinateMean {
                return Ok((coordinate_mean(&s)? - coordinate_mean(&s2)?).abs());
            }
            let f = learner.train(&s)?;
            let g = learner.train(&s2)?;
            let train = |h, set| empirical_error(h, set, cost);
            let mut eval = || TrueErrorEval::for_classifiers(dist, cost, &[&f, &g], cfg.n_test, &mut rng);
            let d = match statistic {
                WdbStatistic::CoordinateMean => unreachable!(),
                WdbStatistic::TrainError => train(&f, &s)? - train(&g, &s2)?,
                WdbStatistic::TrueError => {
                    let e = eval();
                    e.error(&f, cost)? - e.error(&g, cost)?
                }
                WdbStatistic::Gen => {
                    let e = eval();
                    (e.error(&f, cost)? - train(&f, &s)?) - (e.error(&g, cost)? - train(&g, &s2)?)
                }
            };
            Ok(d.abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let b_hat = diffs.iter().cloned().fold(0.0, f64::max);
    Ok(WdbEstimate {
        statistic,
        m: cfg.m,
        c,
        b_hat,
        delta: Proportion::from_flags(diffs.iter().map(|&d| d > c)),
        trials: cfg.trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition() {
        let t = compose_wdb(WdbTriple::new(1.0, 0.1, 0.01).unwrap(), WdbTriple::new(1.0, 0.2, 0.02).unwrap());
        assert!((t.b - 2.0).abs() < 1e-15 && (t.c - 0.3).abs() < 1e-15 && (t.delta - 0.03).abs() < 1e-15);
        let x = WdbTriple::new(1.0, 0.05, 0.2).unwrap();
        assert_eq!(compose_wdb(x, WdbTriple::zero()), x);
        assert_eq!(compose_wdb(WdbTriple::new(1.0, 0.0, 0.7).unwrap(), WdbTriple::new(1.0, 0.0, 0.6).unwrap()).delta, 1.0);
        assert!(WdbTriple::new(1.0, 2.0, 0.0).is_err());
        assert!(WdbTriple::new(1.0, 0.5, 1.5).is_err());
    }

    #[test]
    fn certificate_values() {
        let t = gen_wdb_certificate(0.0, 0.0, 1.0, 100).unwrap();
        assert_eq!((t.b, t.delta), (2.0, 0.0));
        assert!((t.c - 0.03).abs() < 1e-15);
        let m = 50;
        let t = gen_wdb_certificate(1.0 / m as f64, (-(m as f64)).exp(), 1.0, m).unwrap();
        assert!((t.c - 6.0 / m as f64).abs() < 1e-15);
        assert!(t.c >= 1.0 / m as f64 + 1.0 / m as f64);
        assert!(gen_wdb_certificate(0.1, 0.1, 1.0, 0).is_err());
    }

    #[test]
    fn coordinate_mean_moves_at_most_one_over_m() {
        let cfg = SamplerConfig::new(40, 300, 5);
        let d = Distribution::uniform_threshold(0.5);
        let e = estimate_wdb(WdbStatistic::CoordinateMean, &Learner::Constant, &d, &Cost::default(), &cfg, 1.0 / 40.0)
            .unwrap();
        assert_eq!(e.delta.value, 0.0);
        assert!(e.b_hat <= 1.0 / 40.0 + 1e-15);
    }

    #[test]
    fn realizable_training_error_never_moves() {
        let cfg = SamplerConfig::new(30, 300, 6);
        let d = Distribution::uniform_threshold(0.5);
        let e = estimate_wdb(WdbStatistic::TrainError, &Learner::ThresholdMidpoint, &d, &Cost::default(), &cfg, 0.0)
            .unwrap();
        assert_eq!((e.b_hat, e.delta.value), (0.0, 0.0));
    }
}
