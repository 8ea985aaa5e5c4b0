use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Label, TrainingSet};

/// `+1` exactly on a finite set of strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLanguageClassifier {
    pub positives: BTreeSet<String>,
}

impl FiniteLanguageClassifier {
    pub fn evaluate(&self, w: &str) -> f64 {
        if self.positives.contains(w) {
            1.0
        } else {
            -1.0
        }
    }
}

/// The smallest language containing every positive example; negatives are
/// ignored.
pub fn train_finite_language(s: &TrainingSet) -> Result<FiniteLanguageClassifier> {
    let mut positives = BTreeSet::new();
    for z in s {
        let w = z.x.as_word()?;
        if z.y == Label::Positive {
            positives.insert(w.to_owned());
        }
    }
    Ok(FiniteLanguageClassifier { positives })
}
