use serde::{Deserialize, Serialize};

use super::config::check_realizable;
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{Cost, Distribution};
use crate::stability::{sample_perturbations, IndexPolicy, SamplerConfig};
use crate::stats::{least_squares, LinearFit, Proportion};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub m: usize,
    /// Cross-validation stability `delta` at the study's `beta`.
    pub delta: Proportion,
}

/// `delta(m)` at fixed `beta` across a grid of training-set sizes, with
/// least-squares fits of `log delta` against `m` and against `log m`.
/// Points with `delta = 0` have no logarithm and are left out of both fits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayStudy {
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<DecayRow>,
    pub log_linear: Option<LinearFit>,
    pub log_log: Option<LinearFit>,
    pub zero_points: Vec<usize>,
}

impl DecayStudy {
    /// Each step down the grid lowers the estimate, or the two Wilson
    /// intervals overlap.
    pub fn decreasing_up_to_ci(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (a, b) = (&w[0].delta, &w[1].delta);
            b.value < a.value || b.ci_low <= a.ci_high
        })
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].delta.value < w[0].delta.value)
    }
}

pub struct DecayInput<'a> {
    pub learner: &'a Learner,
    pub dist: &'a Distribution,
    pub cost: &'a Cost,
    pub m_grid: &'a [usize],
    pub trials: usize,
    pub seed: u64,
    pub beta: f64,
    pub index_policy: IndexPolicy,
}

/// Runs the study; a learner that can err on its own training data under
/// `dist` is a configuration error.
pub fn run_decay_study(input: &DecayInput) -> Result<DecayStudy> {
    check_realizable(input.learner, input.dist)?;
    if input.m_grid.len() < 2 {
        return Err(Error::config("decay study needs at least two training-set sizes"));
    }
    let mut rows = Vec::with_capacity(input.m_grid.len());
    for &m in input.m_grid {
        let cfg = SamplerConfig {
            index_policy: input.index_policy,
            ..SamplerConfig::new(m, input.trials, input.seed)
        };
        let sample = sample_perturbations(input.learner, input.dist, input.cost, &cfg)?;
        let delta = Proportion::from_flags(sample.trials.iter().map(|t| t.cv_diff() > input.beta));
        rows.push(DecayRow { m, delta });
    }
    let positive: Vec<&DecayRow> = rows.iter().filter(|r| r.delta.value > 0.0).collect();
    let zero_points = rows.iter().filter(|r| r.delta.value == 0.0).map(|r| r.m).collect();
    let ms: Vec<f64> = positive.iter().map(|r| r.m as f64).collect();
    let logd: Vec<f64> = positive.iter().map(|r| r.delta.value.ln()).collect();
    let logm: Vec<f64> = ms.iter().map(|m| m.ln()).collect();
    Ok(DecayStudy {
        beta: input.beta,
        trials: input.trials,
        seed: input.seed,
        log_linear: least_squares(&ms, &logd),
        log_log: least_squares(&logm, &logd),
        rows,
        zero_points,
    })
}
