use serde::{Deserialize, Serialize};

/// A finite union of intervals on the real line, kept sorted, disjoint and
/// merged. Endpoints are not tracked: two sets are equal when they agree up
/// to finitely many points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    spans: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_spans(spans: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut v: Vec<(f64, f64)> = spans.into_iter().filter(|(a, b)| a < b).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut spans: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match spans.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => spans.push((a, b)),
            }
        }
        Self { spans }
    }

    pub fn spans(&self) -> &[(f64, f64)] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.spans.iter().map(|(a, b)| b - a).sum()
    }

    /// Restriction to `[lo, hi]`.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalSet {
        IntervalSet::from_spans(self.spans.iter().map(|&(a, b)| (a.max(lo), b.min(hi))))
    }

    pub fn intersection_measure(&self, other: &IntervalSet) -> f64 {
        let (mut i, mut j, mut total) = (0, 0, 0.0);
        while i < self.spans.len() && j < other.spans.len() {
            let (a0, a1) = self.spans[i];
            let (b0, b1) = other.spans[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                total += hi - lo;
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// Lebesgue measure of the symmetric difference.
    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        (self.measure() + other.measure() - 2.0 * self.intersection_measure(other)).max(0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.spans.iter().any(|&(a, b)| a <= x && x < b)
    }
}
