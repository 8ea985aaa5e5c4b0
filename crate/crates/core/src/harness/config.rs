use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::concentration::{validate_tau_grid, BoundParams, WdbStatistic};
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::model::{Cost, Distribution};
use crate::stability::{IndexPolicy, Notion, SamplerConfig, StabilityMode};

/// Experiments the harness can run; each writes its own CSV tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Estimate,
    Mu,
    Wdb,
    Concentration,
    Decay,
    Bounds,
    SupportChange,
    CvToError,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Estimate,
        ExperimentKind::Mu,
        ExperimentKind::Wdb,
        ExperimentKind::Concentration,
        ExperimentKind::Decay,
        ExperimentKind::Bounds,
        ExperimentKind::SupportChange,
        ExperimentKind::CvToError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Estimate => "estimate",
            ExperimentKind::Mu => "mu",
            ExperimentKind::Wdb => "wdb",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::Decay => "decay",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::SupportChange => "support_change",
            ExperimentKind::CvToError => "cv_to_error",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    FixBeta,
    FixDelta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    #[serde(default = "default_notions")]
    pub notions: Vec<Notion>,
    #[serde(default)]
    pub mode: ModeName,
    /// `beta` under `fix_beta`, `delta` under `fix_delta`.
    #[serde(default)]
    pub value: f64,
}

impl StabilitySection {
    pub fn mode(&self) -> StabilityMode {
        match self.mode {
            ModeName::FixBeta => StabilityMode::FixBeta(self.value),
            ModeName::FixDelta => StabilityMode::FixDelta(self.value),
        }
    }
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self {
            notions: default_notions(),
            mode: ModeName::FixBeta,
            value: 0.0,
        }
    }
}

fn default_notions() -> Vec<Notion> {
    vec![Notion::Cv]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationSection {
    #[serde(default = "default_tau_grid")]
    pub tau_grid: Vec<f64>,
    /// Quantile level for the stability parameters behind each bound curve.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

impl Default for ConcentrationSection {
    fn default() -> Self {
        Self {
            tau_grid: default_tau_grid(),
            delta: default_delta(),
        }
    }
}

fn default_tau_grid() -> Vec<f64> {
    vec![0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5]
}

fn default_delta() -> f64 {
    0.05
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdbSection {
    #[serde(default)]
    pub statistic: WdbStatistic,
    /// Typical-difference threshold; `1/m` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySection {
    #[serde(default = "default_decay_grid")]
    pub m_grid: Vec<usize>,
    #[serde(default)]
    pub beta: f64,
}

impl Default for DecaySection {
    fn default() -> Self {
        Self {
            m_grid: default_decay_grid(),
            beta: 0.0,
        }
    }
}

fn default_decay_grid() -> Vec<usize> {
    vec![25, 50, 100, 200, 400]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "three")]
    pub mean_support_count: f64,
    /// Evaluated at every tau; the concentration grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_grid: Option<Vec<f64>>,
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self {
            beta: 0.0,
            delta: 0.0,
            lambda: 1.0,
            mean_support_count: 3.0,
            tau_grid: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn three() -> f64 {
    3.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvToErrorSection {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// `beta` at which cross-validation stability is estimated.
    #[serde(default)]
    pub beta: f64,
}

impl Default for CvToErrorSection {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            beta: 0.0,
        }
    }
}

fn default_alpha() -> f64 {
    0.1
}

/// A complete, serializable experiment description.
///
/// Scalars come first so that the TOML rendering keeps them above the tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m_grid: Vec<usize>,
    #[serde(default)]
    pub index_policy: IndexPolicy,
    /// Worker threads; 0 uses one per core.
    #[serde(default)]
    pub threads: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_n_z")]
    pub n_z: usize,
    #[serde(default = "default_n_test")]
    pub n_test: usize,
    /// Experiments run by `report`.
    #[serde(default = "default_experiments")]
    pub experiments: Vec<ExperimentKind>,
    pub learner: Learner,
    /// The learner's natural distribution when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Distribution>,
    #[serde(default)]
    pub cost: Cost,
    #[serde(default)]
    pub stability: StabilitySection,
    #[serde(default)]
    pub concentration: ConcentrationSection,
    #[serde(default)]
    pub wdb: WdbSection,
    #[serde(default)]
    pub decay: DecaySection,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub cv_to_error: CvToErrorSection,
}

fn default_trials() -> usize {
    1000
}

fn default_out() -> PathBuf {
    PathBuf::from("stabsim-out")
}

fn default_n_z() -> usize {
    1024
}

fn default_n_test() -> usize {
    10_000
}

fn default_experiments() -> Vec<ExperimentKind> {
    vec![ExperimentKind::Estimate]
}

pub const DEFAULT_M: usize = 50;

fn to_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    pub fn new(learner: Learner, distribution: Distribution) -> Self {
        Self {
            seed: 0,
            trials: default_trials(),
            m: None,
            m_grid: Vec::new(),
            index_policy: IndexPolicy::default(),
            threads: 0,
            out: default_out(),
            n_z: default_n_z(),
            n_test: default_n_test(),
            experiments: default_experiments(),
            learner,
            distribution: Some(distribution),
            cost: Cost::default(),
            stability: StabilitySection::default(),
            concentration: ConcentrationSection::default(),
            wdb: WdbSection::default(),
            decay: DecaySection::default(),
            bounds: BoundsSection::default(),
            cv_to_error: CvToErrorSection::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
            .clone()
            .unwrap_or_else(|| self.learner.natural_distribution())
    }

    /// Training-set sizes to run: `m_grid` if given, else `[m]`.
    pub fn m_values(&self) -> Vec<usize> {
        if self.m_grid.is_empty() {
            vec![self.m.unwrap_or(DEFAULT_M)]
        } else {
            self.m_grid.clone()
        }
    }

    pub fn sampler(&self, m: usize) -> SamplerConfig {
        SamplerConfig {
            m,
            trials: self.trials,
            index_policy: self.index_policy,
            seed: self.seed,
            n_z: self.n_z,
            n_test: self.n_test,
        }
    }

    /// Checks the settings that every experiment depends on plus the
    /// sections used by `kinds`. All failures are configuration errors.
    pub fn validate_for(&self, kinds: &[ExperimentKind]) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials must be >= 1"));
        }
        if self.m.is_some() && !self.m_grid.is_empty() {
            return Err(Error::config("set either m or m_grid, not both"));
        }
        if self.n_test == 0 {
            return Err(Error::config("n_test must be >= 1"));
        }
        for m in self.m_values() {
            if m < 2 {
                return Err(Error::config(format!("m must be >= 2, got {m}")));
            }
            self.index_policy.validate(m).map_err(to_config)?;
        }
        self.learner.validate().map_err(to_config)?;
        let dist = self.distribution();
        dist.validate().map_err(to_config)?;
        self.cost.validate().map_err(to_config)?;
        check_compatible(&self.learner, &dist)?;

        for kind in kinds {
            match kind {
                ExperimentKind::Estimate => self.validate_stability()?,
                ExperimentKind::Mu => {}
                ExperimentKind::Wdb => {
                    if let Some(c) = self.wdb.c {
                        if !(c >= 0.0 && c.is_finite()) {
                            return Err(Error::config(format!("wdb.c must be finite and >= 0, got {c}")));
                        }
                    }
                    if self.wdb.statistic == WdbStatistic::CoordinateMean && dist.unit_boundary().is_none() {
                        return Err(Error::config("coordinate_mean needs a distribution on [0, 1]"));
                    }
                }
                ExperimentKind::Concentration => {
                    validate_tau_grid(&self.concentration.tau_grid).map_err(to_config)?;
                    let d = self.concentration.delta;
                    if !(d > 0.0 && d < 1.0) {
                        return Err(Error::config(format!("concentration.delta must lie in (0, 1), got {d}")));
                    }
                }
                ExperimentKind::Decay => {
                    if self.decay.m_grid.len() < 2 || self.decay.m_grid.iter().any(|&m| m < 2) {
                        return Err(Error::config("decay.m_grid needs at least two sizes, each >= 2"));
                    }
                    if !(self.decay.beta >= 0.0) {
                        return Err(Error::config("decay.beta must be >= 0"));
                    }
                    for &m in &self.decay.m_grid {
                        self.index_policy.validate(m).map_err(to_config)?;
                    }
                    check_realizable(&self.learner, &dist)?;
                }
                ExperimentKind::Bounds => {
                    let b = &self.bounds;
                    let ok = b.beta >= 0.0 && (0.0..=1.0).contains(&b.delta) && b.lambda >= 0.0 && b.mean_support_count >= 0.0;
                    if !ok {
                        return Err(Error::config("bounds needs beta, lambda, mean_support_count >= 0 and delta in [0, 1]"));
                    }
                    validate_tau_grid(self.bounds_tau_grid()).map_err(to_config)?;
                }
                ExperimentKind::SupportChange => {
                    if !matches!(self.learner, Learner::MaxMargin { .. }) {
                        return Err(Error::config("support_change needs the max_margin learner"));
                    }
                    if !self.cost.is_zero_one() {
                        return Err(Error::config("support_change needs the zero-one cost"));
                    }
                }
                ExperimentKind::CvToError => {
                    let c = &self.cv_to_error;
                    if !(c.alpha > 0.0) || !(c.beta >= 0.0) {
                        return Err(Error::config("cv_to_error needs alpha > 0 and beta >= 0"));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_stability(&self) -> Result<()> {
        let s = &self.stability;
        if s.notions.is_empty() {
            return Err(Error::config("stability.notions is empty"));
        }
        match s.mode {
            ModeName::FixBeta if !(s.value >= 0.0 && s.value.is_finite()) => {
                Err(Error::config(format!("fix_beta needs a finite beta >= 0, got {}", s.value)))
            }
            ModeName::FixDelta if !(0.0..=1.0).contains(&s.value) => {
                Err(Error::config(format!("fix_delta needs delta in [0, 1], got {}", s.value)))
            }
            ModeName::FixDelta if s.notions.contains(&Notion::Training) => {
                Err(Error::config("training stability supports fix_beta only"))
            }
            _ => Ok(()),
        }
    }

    pub fn bounds_tau_grid(&self) -> &[f64] {
        self.bounds.tau_grid.as_deref().unwrap_or(&self.concentration.tau_grid)
    }

    pub fn bound_params(&self, m: usize, tau: f64) -> BoundParams {
        BoundParams {
            beta: Some(self.bounds.beta),
            delta: Some(self.bounds.delta),
            lambda: Some(self.bounds.lambda),
            m: Some(m),
            tau: Some(tau),
            mean_support_count: Some(self.bounds.mean_support_count),
            big_m: self.cost.bound(),
        }
    }
}

/// Rejects learner/distribution pairs whose point types do not match.
pub fn check_compatible(learner: &Learner, dist: &Distribution) -> Result<()> {
    let ok = match learner {
        Learner::Constant => true,
        Learner::FiniteErm { .. } | Learner::ThresholdMidpoint | Learner::RadiusNn { .. } => matches!(
            dist,
            Distribution::UniformThreshold { .. } | Distribution::LabelNoiseConstant { .. }
        ),
        Learner::FiniteLanguage => matches!(dist, Distribution::FiniteStrings { .. }),
        Learner::MaxMargin { .. } => matches!(dist, Distribution::SeparatedDiscs2d { .. }),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!("learner {} cannot train on {}", learner.name(), dist.name())))
    }
}

/// Decay studies need a consistent target and a zero-training-error learner.
pub fn check_realizable(learner: &Learner, dist: &Distribution) -> Result<()> {
    check_compatible(learner, dist)?;
    if learner.realizes(dist) {
        Ok(())
    } else {
        Err(Error::config(format!(
            "{} on {} is not realizable: the decay study needs zero training error",
            learner.description(),
            dist.description()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
seed = 7
trials = 200
m = 40
index_policy = { fixed = 3 }
experiments = ["estimate", "mu"]

[learner]
name = "threshold_midpoint"

[distribution]
family = "uniform_threshold"
theta = 0.4

[stability]
notions = ["cv", "weak_hyp"]
mode = "fix_delta"
value = 0.1
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.index_policy, IndexPolicy::Fixed(3));
        assert_eq!(cfg.stability.mode(), StabilityMode::FixDelta(0.1));
        assert_eq!(cfg.distribution(), Distribution::uniform_threshold(0.4));
        cfg.validate_for(&ExperimentKind::ALL[..2]).unwrap();
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn schema_violations_are_config_errors() {
        assert!(ExperimentConfig::from_toml_str("seed = 1").unwrap_err().is_config());
        let bad = SAMPLE.replace("trials = 200", "trials = 200\nbogus = 1");
        assert!(ExperimentConfig::from_toml_str(&bad).unwrap_err().is_config());
        let mut cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        cfg.index_policy = IndexPolicy::Fixed(40);
        assert!(cfg.validate_for(&[]).unwrap_err().is_config());
        cfg.index_policy = IndexPolicy::Last;
        cfg.stability.notions.push(Notion::Training);
        assert!(cfg.validate_for(&[ExperimentKind::Estimate]).unwrap_err().is_config());
    }

    #[test]
    fn decay_needs_realizable_setting() {
        let cfg = ExperimentConfig::new(Learner::Constant, Distribution::uniform_threshold(0.5));
        assert!(cfg.validate_for(&[ExperimentKind::Decay]).unwrap_err().is_config());
        let cfg = ExperimentConfig::new(Learner::finite_erm(vec![0.25, 0.75]), Distribution::uniform_threshold(0.5));
        assert!(cfg.validate_for(&[ExperimentKind::Decay]).unwrap_err().is_config());
        let cfg = ExperimentConfig::new(Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5));
        cfg.validate_for(&[ExperimentKind::Decay]).unwrap();
        let cfg = ExperimentConfig::new(Learner::max_margin(), Distribution::uniform_threshold(0.5));
        assert!(cfg.validate_for(&[]).unwrap_err().is_config());
    }
}
