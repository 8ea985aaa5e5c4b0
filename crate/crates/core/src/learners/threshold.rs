use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{sign, Classifier, Cost, IntervalSet, Label, TrainingSet};

/// `g_theta(x) = sign(x - theta)` on `[0, 1]`, with `g_theta(theta) = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdClassifier {
    pub theta: f64,
    /// Set by the midpoint learner when no threshold fits the training data.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub non_separable: bool,
}

impl ThresholdClassifier {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            non_separable: false,
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        sign(x - self.theta)
    }

    pub fn negative_region(&self) -> IntervalSet {
        IntervalSet::from_spans([(0.0, self.theta)])
    }
}

/// ERM over thresholds via the midpoint rule `theta_S = a + xi (b - a)`.
///
/// `a` is the largest negative point (0 if none), `b` the smallest positive
/// point (1 if none) and `xi` the mean of all training points. When the data
/// admit no consistent threshold (`a >= b` with negatives present) the
/// learner returns `g_a` flagged `non_separable`.
pub fn train_threshold_midpoint(s: &TrainingSet) -> Result<ThresholdClassifier> {
    let mut xs = Vec::with_capacity(s.len());
    let mut a: Option<f64> = None;
    let mut b: Option<f64> = None;
    for z in s {
        let x = z.x.as_real()?;
        xs.push(x);
        match z.y {
            Label::Negative => a = Some(a.map_or(x, |v| v.max(x))),
            Label::Positive => b = Some(b.map_or(x, |v| v.min(x))),
        }
    }
    let has_negatives = a.is_some();
    let a = a.unwrap_or(0.0);
    let b = b.unwrap_or(1.0);
    if a >= b {
        return Ok(ThresholdClassifier {
            theta: a,
            non_separable: has_negatives,
        });
    }
    // Summing in sorted order makes xi, hence theta, independent of the
    // order of the training set.
    xs.sort_by(f64::total_cmp);
    let xi = xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(ThresholdClassifier::new(a + xi * (b - a)))
}

/// ERM over a finite hypothesis list: the first classifier (in list order)
/// with minimal empirical error.
pub fn train_finite_erm(hypotheses: &[Classifier], s: &TrainingSet, cost: &Cost) -> Result<Classifier> {
    let mut best: Option<(f64, &Classifier)> = None;
    for h in hypotheses {
        let err = crate::model::empirical_error(h, s, cost)?;
        if best.is_none_or(|(e, _)| err < e) {
            best = Some((err, h));
        }
    }
    best.map(|(_, h)| h.clone())
        .ok_or_else(|| crate::Error::invalid("finite ERM needs a nonempty hypothesis list"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{empirical_error, Example, Label::*};

    fn reals(zs: &[(f64, Label)]) -> TrainingSet {
        TrainingSet::new(zs.iter().map(|&(x, y)| Example::real(x, y)).collect()).unwrap()
    }

    #[test]
    fn midpoint_formula() {
        let s = reals(&[(0.2, Negative), (0.4, Negative), (0.9, Positive)]);
        let g = train_threshold_midpoint(&s).unwrap();
        assert!((g.theta - 0.65).abs() < 1e-15);
        let h: Classifier = g.into();
        assert_eq!(empirical_error(&h, &s, &Cost::default()).unwrap(), 0.0);
    }

    #[test]
    fn one_sided_defaults() {
        let g = train_threshold_midpoint(&reals(&[(0.5, Positive)])).unwrap();
        assert!((g.theta - 0.25).abs() < 1e-15);
        let g = train_threshold_midpoint(&reals(&[(0.5, Negative)])).unwrap();
        assert!((g.theta - 0.75).abs() < 1e-15);
    }

    #[test]
    fn non_separable_returns_a() {
        let g = train_threshold_midpoint(&reals(&[(0.7, Negative), (0.3, Positive)])).unwrap();
        assert_eq!(g.theta, 0.7);
        assert!(g.non_separable);
        // All-positive data starting at 0 is still fit by g_0.
        let g = train_threshold_midpoint(&reals(&[(0.0, Positive)])).unwrap();
        assert_eq!(g.theta, 0.0);
        assert!(!g.non_separable);
    }

    fn grid() -> Vec<Classifier> {
        [0.25, 0.5, 0.75].iter().map(|&t| ThresholdClassifier::new(t).into()).collect()
    }

    #[test]
    fn finite_erm_hand_counts() {
        let c = Cost::default();
        let h = train_finite_erm(&grid(), &reals(&[(0.3, Positive), (0.6, Positive)]), &c).unwrap();
        assert_eq!(h, grid()[0]);
        // Tie: every threshold fits (0.8, +1); first in order wins.
        let h = train_finite_erm(&grid(), &reals(&[(0.8, Positive)]), &c).unwrap();
        assert_eq!(h, grid()[0]);
        let h = train_finite_erm(&grid(), &reals(&[(0.6, Negative), (0.8, Positive)]), &c).unwrap();
        assert_eq!(h, grid()[2]);
        assert!(train_finite_erm(&[], &reals(&[(0.8, Positive)]), &c).is_err());
    }
}
