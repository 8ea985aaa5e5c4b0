use serde::{Deserialize, Serialize};

use super::intervals::IntervalSet;
use super::point::Point;
use crate::error::{Error, Result};
use crate::learners::{
    FiniteLanguageClassifier, HyperplaneClassifier, RadiusNnClassifier, ThresholdClassifier,
};

/// `sign` with the convention `sign(0) = +1`.
pub fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `h(x) = value` everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantClassifier {
    pub value: f64,
}

impl ConstantClassifier {
    pub fn new(value: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&value) {
            return Err(Error::invalid(format!("constant {value} outside [-1, 1]")));
        }
        Ok(Self { value })
    }

    pub fn positive() -> Self {
        Self { value: 1.0 }
    }
}

/// A hypothesis `h: X -> [-1, 1]` from one of the shipped families.
///
/// Families that permit it answer [`Classifier::differs_from`] exactly, which
/// the stability estimators use as the supremum over `z` of the zero-one cost
/// difference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Classifier {
    Constant(ConstantClassifier),
    Threshold(ThresholdClassifier),
    RadiusNn(RadiusNnClassifier),
    FiniteLanguage(FiniteLanguageClassifier),
    Hyperplane(HyperplaneClassifier),
}

impl Classifier {
    pub fn evaluate(&self, x: &Point) -> Result<f64> {
        match self {
            Classifier::Constant(c) => Ok(c.value),
            Classifier::Threshold(t) => Ok(t.evaluate(x.as_real()?)),
            Classifier::RadiusNn(r) => Ok(r.evaluate(x.as_real()?)),
            Classifier::FiniteLanguage(l) => Ok(l.evaluate(x.as_word()?)),
            Classifier::Hyperplane(h) => h.evaluate(x.as_vector()?),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Classifier::Constant(_) => "constant",
            Classifier::Threshold(_) => "threshold",
            Classifier::RadiusNn(_) => "radius_nn",
            Classifier::FiniteLanguage(_) => "finite_language",
            Classifier::Hyperplane(_) => "hyperplane",
        }
    }

    /// Whether every output is exactly `-1` or `+1`.
    pub fn is_binary(&self) -> bool {
        match self {
            Classifier::Constant(c) => c.value.abs() == 1.0,
            _ => true,
        }
    }

    /// `{x in [0, 1] : sign(h(x)) = -1}` for classifiers on the unit interval.
    pub fn negative_region(&self) -> Option<IntervalSet> {
        match self {
            Classifier::Constant(c) if c.value < 0.0 => Some(IntervalSet::from_spans([(0.0, 1.0)])),
            Classifier::Constant(_) => Some(IntervalSet::empty()),
            Classifier::Threshold(t) => Some(t.negative_region()),
            Classifier::RadiusNn(r) => Some(r.negative_region().clone()),
            _ => None,
        }
    }

    fn on_unit_interval(&self) -> bool {
        matches!(self, Classifier::Threshold(_) | Classifier::RadiusNn(_))
    }

    /// Exact test of whether the two classifiers' signs disagree anywhere on
    /// the instance space. `None` when no exact oracle covers the pair.
    pub fn differs_from(&self, other: &Classifier) -> Option<bool> {
        use Classifier::*;
        match (self, other) {
            (Constant(a), Constant(b)) => Some(a.value != b.value),
            (Threshold(a), Threshold(b)) => Some(a.theta != b.theta),
            (FiniteLanguage(a), FiniteLanguage(b)) => Some(a.positives != b.positives),
            (Hyperplane(a), Hyperplane(b)) => Some(!a.same_hyperplane(b)),
            (Constant(c), FiniteLanguage(l)) | (FiniteLanguage(l), Constant(c)) if c.value.abs() == 1.0 => {
                Some(!(c.value < 0.0 && l.positives.is_empty()))
            }
            (a, b) if (a.on_unit_interval() || b.on_unit_interval()) && a.is_binary() && b.is_binary() => {
                Some(a.negative_region()? != b.negative_region()?)
            }
            _ => None,
        }
    }
}

impl From<ConstantClassifier> for Classifier {
    fn from(c: ConstantClassifier) -> Self {
        Classifier::Constant(c)
    }
}

impl From<ThresholdClassifier> for Classifier {
    fn from(c: ThresholdClassifier) -> Self {
        Classifier::Threshold(c)
    }
}

impl From<RadiusNnClassifier> for Classifier {
    fn from(c: RadiusNnClassifier) -> Self {
        Classifier::RadiusNn(c)
    }
}

impl From<FiniteLanguageClassifier> for Classifier {
    fn from(c: FiniteLanguageClassifier) -> Self {
        Classifier::FiniteLanguage(c)
    }
}

impl From<HyperplaneClassifier> for Classifier {
    fn from(c: HyperplaneClassifier) -> Self {
        Classifier::Hyperplane(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_range_checked() {
        assert!(ConstantClassifier::new(1.5).is_err());
        assert_eq!(ConstantClassifier::new(-1.0).unwrap().value, -1.0);
    }

    #[test]
    fn threshold_at_zero_equals_constant_on_unit_interval() {
        let g0: Classifier = ThresholdClassifier::new(0.0).into();
        let plus: Classifier = ConstantClassifier::positive().into();
        assert_eq!(g0.differs_from(&plus), Some(false));
        let g: Classifier = ThresholdClassifier::new(0.3).into();
        assert_eq!(g.differs_from(&plus), Some(true));
    }

    #[test]
    fn mismatched_point_kind_is_an_error() {
        let g: Classifier = ThresholdClassifier::new(0.3).into();
        assert!(g.evaluate(&Point::Word("a".into())).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let g: Classifier = ThresholdClassifier::new(0.3).into();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"family\":\"threshold\""));
        assert_eq!(serde_json::from_str::<Classifier>(&s).unwrap(), g);
    }
}
