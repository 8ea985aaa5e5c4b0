//! Closed-form tail and mean bounds. All evaluators return raw values, which
//! may exceed 1; callers clamp for presentation.

use serde::{Deserialize, Serialize};

/// `|mu| <= beta + delta * M` under cross-validation stability `(beta, delta)`.
pub fn mu_bound(beta: f64, delta: f64, big_m: f64) -> f64 {
    beta + delta * big_m
}

/// `Pr(|gen| > tau + beta) <= 2 exp(-tau^2 m / (2 (m beta + M)^2))` under
/// uniform hypothesis stability `beta`.
pub fn uniform_stability_tail(beta: f64, big_m: f64, m: usize, tau: f64) -> f64 {
    let m = m as f64;
    2.0 * (-tau * tau * m / (2.0 * (m * beta + big_m).powi(2))).exp()
}

/// `4 exp(-tau^2 m / (1440 (lambda + M)^2))` under training stability
/// `(lambda / m, e^{-Km})`.
pub fn training_stability_tail(lambda: f64, big_m: f64, m: usize, tau: f64) -> f64 {
    4.0 * (-tau * tau * m as f64 / (1440.0 * (lambda + big_m).powi(2))).exp()
}

/// `4 exp(-tau^2 m / (160 (2 lambda + M)^2))` under weak hypothesis
/// stability `(lambda / m, e^{-Km})`.
pub fn hypothesis_stability_tail(lambda: f64, big_m: f64, m: usize, tau: f64) -> f64 {
    4.0 * (-tau * tau * m as f64 / (160.0 * (2.0 * lambda + big_m).powi(2))).exp()
}

/// `4 exp(-tau^2 m / (160 (2 lambda + 3M)^2))` for ERM learners with
/// cross-validation stability `(lambda / m, e^{-Km})`.
pub fn erm_cv_stability_tail(lambda: f64, big_m: f64, m: usize, tau: f64) -> f64 {
    4.0 * (-tau * tau * m as f64 / (160.0 * (2.0 * lambda + 3.0 * big_m).powi(2))).exp()
}

/// `4 exp(-tau^2 m / (40 lambda^2))` for a variable weakly difference-bounded
/// by `(b, lambda / m, e^{-Km})`.
///
/// The inequality only holds for `tau` in a window and `m` above a floor
/// whose constants are not known; this evaluates the formula regardless.
pub fn wdb_tail(lambda: f64, m: usize, tau: f64) -> f64 {
    let num = tau * tau * m as f64;
    if num == 0.0 {
        return 4.0;
    }
    4.0 * (-num / (40.0 * lambda * lambda)).exp()
}

/// `2 E|T| / (m + 1)`, the replace-one change probability of a
/// maximum-margin learner whose `m + 1`-point training sets have `E|T|`
/// support points on average.
pub fn support_change_delta(mean_support_count: f64, m: usize) -> f64 {
    2.0 * mean_support_count / (m as f64 + 1.0)
}

/// Catalog of bound evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    MeanGen,
    Uniform,
    Training,
    Hypothesis,
    ErmCv,
    Wdb,
    SupportChange,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::Uniform,
        BoundKind::Training,
        BoundKind::Hypothesis,
        BoundKind::ErmCv,
        BoundKind::Wdb,
        BoundKind::SupportChange,
        BoundKind::MeanGen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::MeanGen => "mean_gen",
            BoundKind::Uniform => "uniform",
            BoundKind::Training => "training",
            BoundKind::Hypothesis => "hypothesis",
            BoundKind::ErmCv => "erm_cv",
            BoundKind::Wdb => "wdb",
            BoundKind::SupportChange => "support_change",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            BoundKind::MeanGen => "|mu| <= beta + delta*M  (params: beta, delta, M)",
            BoundKind::Uniform => "Pr(|gen| > tau + beta) <= 2 exp(-tau^2 m / (2 (m beta + M)^2))  (params: beta, M, m, tau)",
            BoundKind::Training => "Pr(|gen| > tau) <= 4 exp(-tau^2 m / (1440 (lambda + M)^2))  (params: lambda, M, m, tau)",
            BoundKind::Hypothesis => "Pr(|gen| > tau) <= 4 exp(-tau^2 m / (160 (2 lambda + M)^2))  (params: lambda, M, m, tau)",
            BoundKind::ErmCv => "Pr(|gen| > tau) <= 4 exp(-tau^2 m / (160 (2 lambda + 3M)^2))  (params: lambda, M, m, tau)",
            BoundKind::Wdb => "Pr(|X - EX| > tau) <= 4 exp(-tau^2 m / (40 lambda^2))  (params: lambda, m, tau)",
            BoundKind::SupportChange => "delta <= 2 E|T| / (m + 1)  (params: mean_support_count, m)",
        }
    }

    /// Evaluates with named parameters; missing ones are an error.
    pub fn evaluate(self, p: &BoundParams) -> crate::Result<f64> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| crate::Error::invalid(format!("bound {} needs parameter {name}", self.name())))
        };
        let m = || p.m.ok_or_else(|| crate::Error::invalid(format!("bound {} needs parameter m", self.name())));
        Ok(match self {
            BoundKind::MeanGen => mu_bound(need(p.beta, "beta")?, need(p.delta, "delta")?, p.big_m),
            BoundKind::Uniform => uniform_stability_tail(need(p.beta, "beta")?, p.big_m, m()?, need(p.tau, "tau")?),
            BoundKind::Training => training_stability_tail(need(p.lambda, "lambda")?, p.big_m, m()?, need(p.tau, "tau")?),
            BoundKind::Hypothesis => {
                hypothesis_stability_tail(need(p.lambda, "lambda")?, p.big_m, m()?, need(p.tau, "tau")?)
            }
            BoundKind::ErmCv => erm_cv_stability_tail(need(p.lambda, "lambda")?, p.big_m, m()?, need(p.tau, "tau")?),
            BoundKind::Wdb => wdb_tail(need(p.lambda, "lambda")?, m()?, need(p.tau, "tau")?),
            BoundKind::SupportChange => support_change_delta(need(p.mean_support_count, "mean_support_count")?, m()?),
        })
    }
}

/// Parameters shared by the bound evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_support_count: Option<f64>,
    #[serde(default = "one", rename = "M")]
    pub big_m: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            beta: None,
            delta: None,
            lambda: None,
            m: None,
            tau: None,
            mean_support_count: None,
            big_m: 1.0,
        }
    }
}
