use rand::Rng;
use serde::{Deserialize, Serialize};

use super::classifier::Classifier;
use super::cost::Cost;
use super::distribution::Distribution;
use super::point::Example;
use super::training_set::TrainingSet;
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::stats::MeanEstimate;

/// `Err_S(h)`: mean cost over the training set.
pub fn empirical_error(h: &Classifier, s: &TrainingSet, cost: &Cost) -> Result<f64> {
    mean_cost(h, s.examples(), cost)
}

fn mean_cost(h: &Classifier, zs: &[Example], cost: &Cost) -> Result<f64> {
    if zs.is_empty() {
        return Err(Error::invalid("empirical error of an empty sample"));
    }
    let mut total = 0.0;
    for z in zs {
        total += cost.cost(h, z)?;
    }
    Ok(total / zs.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrueErrorMode {
    Exact,
    MonteCarlo { n: usize },
}

/// `Err_D(h)` with its sampling uncertainty (zero in exact mode).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrueError {
    pub value: f64,
    pub std_error: f64,
    pub ci: f64,
    pub exact: bool,
}

/// `Err_D(h) = E_{z ~ D} c(h, z)`.
pub fn true_error<R: Rng + ?Sized>(
    h: &Classifier,
    dist: &Distribution,
    cost: &Cost,
    mode: TrueErrorMode,
    rng: &mut R,
) -> Result<TrueError> {
    match mode {
        TrueErrorMode::Exact => {
            let value = dist.exact_error(h, cost).ok_or_else(|| {
                Error::Unsupported(format!(
                    "no closed-form error for {} under {}",
                    h.family(),
                    dist.name()
                ))
            })?;
            Ok(TrueError {
                value,
                std_error: 0.0,
                ci: 0.0,
                exact: true,
            })
        }
        TrueErrorMode::MonteCarlo { n } => {
            if n == 0 {
                return Err(Error::invalid("Monte Carlo true error needs n >= 1"));
            }
            let mut costs = Vec::with_capacity(n);
            for _ in 0..n {
                costs.push(cost.cost(h, &dist.sample(rng))?);
            }
            let est = MeanEstimate::from_samples(&costs, cost.bound());
            Ok(TrueError {
                value: est.mean,
                std_error: est.std_error,
                ci: est.ci,
                exact: false,
            })
        }
    }
}

/// How `Err_D` is evaluated inside a Monte Carlo trial: the closed form when
/// the distribution has one, else a fixed test sample shared by every
/// classifier of the trial (common random numbers).
pub enum TrueErrorEval<'a> {
    Exact(&'a Distribution),
    Sample(Vec<Example>),
}

impl<'a> TrueErrorEval<'a> {
    /// Uses the closed form if it covers every classifier in `hs`, otherwise
    /// draws `n_test` points from `rng`.
    pub fn for_classifiers<R: Rng + ?Sized>(
        dist: &'a Distribution,
        cost: &Cost,
        hs: &[&Classifier],
        n_test: usize,
        rng: &mut R,
    ) -> Self {
        if hs.iter().all(|h| dist.exact_error(h, cost).is_some()) {
            TrueErrorEval::Exact(dist)
        } else {
            TrueErrorEval::Sample((0..n_test.max(1)).map(|_| dist.sample(rng)).collect())
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TrueErrorEval::Exact(_))
    }

    pub fn error(&self, h: &Classifier, cost: &Cost) -> Result<f64> {
        match self {
            TrueErrorEval::Exact(d) => d
                .exact_error(h, cost)
                .ok_or_else(|| Error::Unsupported(format!("no closed-form error for {}", h.family()))),
            TrueErrorEval::Sample(zs) => mean_cost(h, zs, cost),
        }
    }
}

/// `gen(S) = Err_D(f_S) - Err_S(f_S)`.
///
/// `Err_D` is exact when the distribution has a closed form for `f_S`, else
/// estimated from `n_test` fresh draws.
pub fn generalization_error<R: Rng + ?Sized>(
    learner: &Learner,
    s: &TrainingSet,
    dist: &Distribution,
    cost: &Cost,
    n_test: usize,
    rng: &mut R,
) -> Result<f64> {
    let f = learner.train(s)?;
    let eval = TrueErrorEval::for_classifiers(dist, cost, &[&f], n_test, rng);
    Ok(eval.error(&f, cost)? - empirical_error(&f, s, cost)?)
}
