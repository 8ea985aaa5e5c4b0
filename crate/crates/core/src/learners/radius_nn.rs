use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IntervalSet, Label, TrainingSet};

/// Nearest neighbour within radius `d`, `+1` elsewhere.
///
/// For a query `x`, let `x_j` be the nearest anchor (smallest index on ties).
/// The output is `y_j` if `|x - x_j| < d` and `+1` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusNnClassifier {
    pub anchors: Vec<(f64, Label)>,
    pub radius: f64,
    /// `{x in [0, 1] : output = -1}`, up to finitely many points.
    region: IntervalSet,
}

impl RadiusNnClassifier {
    pub fn new(anchors: Vec<(f64, Label)>, radius: f64) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::invalid("radius nearest neighbour needs at least one anchor"));
        }
        if !(radius >= 0.0) {
            return Err(Error::invalid(format!("radius must be nonnegative, got {radius}")));
        }
        let region = negative_region(&anchors, radius);
        Ok(Self {
            anchors,
            radius,
            region,
        })
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let mut best = (f64::INFINITY, Label::Positive);
        for &(a, y) in &self.anchors {
            let d = (x - a).abs();
            if d < best.0 {
                best = (d, y);
            }
        }
        if best.0 < self.radius {
            best.1.value()
        } else {
            1.0
        }
    }

    pub fn negative_region(&self) -> &IntervalSet {
        &self.region
    }
}

/// Union over negative anchors of (Voronoi cell) ∩ (x_j - d, x_j + d),
/// restricted to [0, 1].
fn negative_region(anchors: &[(f64, Label)], radius: f64) -> IntervalSet {
    let mut order: Vec<usize> = (0..anchors.len()).collect();
    order.sort_by(|&i, &j| anchors[i].0.total_cmp(&anchors[j].0).then(i.cmp(&j)));
    // Coincident anchors: the smallest index is always the argmin.
    order.dedup_by(|later, earlier| anchors[*later].0 == anchors[*earlier].0);
    let pts: Vec<(f64, Label)> = order.iter().map(|&i| anchors[i]).collect();
    let spans = pts.iter().enumerate().filter(|(_, (_, y))| *y == Label::Negative).map(|(k, &(p, _))| {
        let lo = if k == 0 { f64::NEG_INFINITY } else { (pts[k - 1].0 + p) / 2.0 };
        let hi = pts.get(k + 1).map_or(f64::INFINITY, |q| (p + q.0) / 2.0);
        (lo.max(p - radius), hi.min(p + radius))
    });
    IntervalSet::from_spans(spans).clip(0.0, 1.0)
}

pub fn train_radius_nn(s: &TrainingSet, radius: f64) -> Result<RadiusNnClassifier> {
    let anchors = s
        .iter()
        .map(|z| Ok((z.x.as_real()?, z.y)))
        .collect::<Result<Vec<_>>>()?;
    RadiusNnClassifier::new(anchors, radius)
}
