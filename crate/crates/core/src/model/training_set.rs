use serde::{Deserialize, Serialize};

use super::point::Example;
use crate::error::{Error, Result};

/// An ordered, nonempty sequence of examples.
///
/// Indices are 0-based: `replace_one(i, u)` builds `S^{i,u}` and
/// `remove_one(i)` builds `S^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Example>", into = "Vec<Example>")]
pub struct TrainingSet {
    examples: Vec<Example>,
}

impl TrainingSet {
    pub fn new(examples: Vec<Example>) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::invalid("training set must be nonempty"));
        }
        Ok(Self { examples })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Example> {
        self.examples.iter()
    }

    pub fn get(&self, i: usize) -> Result<&Example> {
        self.examples.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.len(),
        })
    }

    /// `S^{i,u}`: entry `i` replaced by `u`.
    pub fn replace_one(&self, i: usize, u: Example) -> Result<TrainingSet> {
        self.get(i)?;
        let mut examples = self.examples.clone();
        examples[i] = u;
        Ok(Self { examples })
    }

    /// `S^i`: entry `i` removed, order of the rest preserved.
    ///
    /// Fails on a single-example set, whose `S^i` would be empty.
    pub fn remove_one(&self, i: usize) -> Result<TrainingSet> {
        self.get(i)?;
        let mut examples = self.examples.clone();
        examples.remove(i);
        TrainingSet::new(examples)
    }

    /// A copy with `u` appended (a training set of size `m + 1`).
    pub fn with_appended(&self, u: Example) -> TrainingSet {
        let mut examples = self.examples.clone();
        examples.push(u);
        Self { examples }
    }

    /// A copy with entries reordered by `perm`, a permutation of `0..m`.
    pub fn permuted(&self, perm: &[usize]) -> Result<TrainingSet> {
        let m = self.len();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("not a permutation of the training indices"));
        }
        Ok(Self {
            examples: perm.iter().map(|&p| self.examples[p].clone()).collect(),
        })
    }
}

impl TryFrom<Vec<Example>> for TrainingSet {
    type Error = Error;

    fn try_from(v: Vec<Example>) -> Result<Self> {
        TrainingSet::new(v)
    }
}

impl From<TrainingSet> for Vec<Example> {
    fn from(s: TrainingSet) -> Self {
        s.examples
    }
}

impl<'a> IntoIterator for &'a TrainingSet {
    type Item = &'a Example;
    type IntoIter = std::slice::Iter<'a, Example>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}
