use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use crate::concentration::BoundKind;
use crate::learners::{Learner, LEARNER_NAMES};
use crate::model::Distribution;
use crate::stability::Notion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    Learners,
    Distributions,
    Notions,
    Bounds,
    Experiments,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub detail: String,
}

fn entry(name: &str, detail: impl Into<String>) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        detail: detail.into(),
    }
}

fn default_learner(name: &str) -> Learner {
    toml::from_str(&format!("name = \"{name}\"")).expect("registered learner parses with defaults")
}

pub fn list(catalog: Catalog) -> Vec<CatalogEntry> {
    match catalog {
        Catalog::Learners => LEARNER_NAMES
            .iter()
            .map(|&n| {
                let l = default_learner(n);
                entry(n, format!("{} (defaults; natural distribution {})", l.description(), l.natural_distribution().description()))
            })
            .collect(),
        Catalog::Distributions => [
            Distribution::uniform_threshold(0.5),
            Distribution::label_noise_constant(0.3),
            Distribution::finite_strings_default(),
            Distribution::separated_discs(1.0, 1.0),
        ]
        .iter()
        .map(|d| entry(d.name(), d.description()))
        .collect(),
        Catalog::Notions => Notion::ALL.iter().map(|n| entry(n.name(), n.summary())).collect(),
        Catalog::Bounds => BoundKind::ALL.iter().map(|b| entry(b.name(), b.formula())).collect(),
        Catalog::Experiments => ExperimentKind::ALL
            .iter()
            .map(|k| entry(k.name(), experiment_detail(*k)))
            .collect(),
    }
}

fn experiment_detail(k: ExperimentKind) -> &'static str {
    match k {
        ExperimentKind::Estimate => "stability estimates for [stability].notions -> estimates.csv",
        ExperimentKind::Mu => "mean generalization error, direct and by replacement, with the mean bound -> mu.csv, mu_check.csv",
        ExperimentKind::Wdb => "weak difference bound of [wdb].statistic at threshold c -> wdb.csv",
        ExperimentKind::Concentration => "tail of gen(S) against the tail bounds -> tail.csv, concentration.csv, tail_bounds.csv",
        ExperimentKind::Decay => "cv delta over [decay].m_grid with log fits -> decay.csv, decay_fit.csv",
        ExperimentKind::Bounds => "closed-form bounds at [bounds] parameters -> bounds.csv",
        ExperimentKind::SupportChange => "max-margin hypothesis changes against 2E|T|/(m+1) -> support_change.csv",
        ExperimentKind::CvToError => "cv stability converted to error stability, checked on fresh trials -> cv_to_error.csv",
    }
}
