//! Exact hard-margin hyperplanes in dimensions 1 to 3.
//!
//! Some optimal solution of `min w.w s.t. y_i (w.x_i + b) >= 1` has at most
//! `k + 1` support points with positive multipliers and linearly independent
//! lifted vectors `y_i (x_i, 1)`. For each candidate subset `A` of that size
//! the KKT system
//!
//! ```text
//! sum_{s in A} alpha_s y_r y_s <x_r, x_s> + y_r b = 1    (r in A)
//! sum_{s in A} alpha_s y_s = 0
//! ```
//!
//! gives the minimum-norm hyperplane with every constraint in `A` tight, and
//! `w.w = sum alpha`. The answer is the feasible candidate with the smallest
//! norm; candidates with a negative multiplier cannot be the optimum and are
//! skipped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sign, Label, TrainingSet};

/// Tolerance on constraint slack for feasibility and support detection.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Default cap on the training-set size.
pub const DEFAULT_MAX_POINTS: usize = 400;

/// `h(x) = sign(w.x + b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneClassifier {
    pub w: Vec<f64>,
    pub b: f64,
    /// Indices `i` with `y_i (w.x_i + b) <= 1 + SUPPORT_TOL`.
    #[serde(default)]
    pub support_indices: Vec<usize>,
}

impl HyperplaneClassifier {
    pub fn new(w: Vec<f64>, b: f64) -> Self {
        Self {
            w,
            b,
            support_indices: Vec::new(),
        }
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::invalid(format!(
                "point of dimension {} for a hyperplane in dimension {}",
                x.len(),
                self.w.len()
            )));
        }
        Ok(dot(&self.w, x) + self.b)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(sign(self.decision(x)?))
    }

    /// `(w, b) / |w|`, or `(w, b)` itself when `w = 0`.
    pub fn canonical(&self) -> (Vec<f64>, f64) {
        let norm = dot(&self.w, &self.w).sqrt();
        if norm == 0.0 {
            return (self.w.clone(), self.b);
        }
        (self.w.iter().map(|v| v / norm).collect(), self.b / norm)
    }

    /// Same oriented hyperplane after normalization, to `SUPPORT_TOL`.
    pub fn same_hyperplane(&self, other: &HyperplaneClassifier) -> bool {
        if self.w.len() != other.w.len() {
            return false;
        }
        let (wa, ba) = self.canonical();
        let (wb, bb) = other.canonical();
        if dot(&self.w, &self.w) == 0.0 || dot(&other.w, &other.w) == 0.0 {
            // Constant classifiers: only the sign of b matters.
            return dot(&self.w, &self.w) == dot(&other.w, &other.w) && sign(self.b) == sign(other.b);
        }
        (ba - bb).abs() <= SUPPORT_TOL && wa.iter().zip(&wb).all(|(a, b)| (a - b).abs() <= SUPPORT_TOL)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `a x = rhs` in place (`n <= 4`), returning `None` when singular.
fn solve(a: &mut [[f64; 5]; 5], rhs: &mut [f64; 5], n: usize) -> Option<[f64; 5]> {
    let scale = a[..n]
        .iter()
        .flat_map(|row| row[..n].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut x = [0.0; 5];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

struct Problem {
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    gram: Vec<f64>,
    m: usize,
    k: usize,
}

impl Problem {
    fn new(xs: Vec<Vec<f64>>, ys: Vec<f64>) -> Self {
        let m = xs.len();
        let k = xs[0].len();
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = dot(&xs[i], &xs[j]);
                gram[i * m + j] = v;
                gram[j * m + i] = v;
            }
        }
        Self { xs, ys, gram, m, k }
    }

    /// Minimum-norm hyperplane with all constraints in `subset` tight.
    /// Returns `(alpha, b)` or `None` when degenerate or a multiplier is
    /// negative.
    fn candidate(&self, subset: &[usize]) -> Option<([f64; 5], f64)> {
        let n = subset.len();
        let mut a = [[0.0; 5]; 5];
        let mut rhs = [0.0; 5];
        for (r, &i) in subset.iter().enumerate() {
            for (c, &j) in subset.iter().enumerate() {
                a[r][c] = self.ys[i] * self.ys[j] * self.gram[i * self.m + j];
            }
            a[r][n] = self.ys[i];
            a[n][r] = self.ys[i];
            rhs[r] = 1.0;
        }
        let sol = solve(&mut a, &mut rhs, n + 1)?;
        let alpha_scale = sol[..n].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if sol[..n].iter().any(|&v| v < -1e-9 * alpha_scale) {
            return None;
        }
        Some((sol, sol[n]))
    }

    fn weights(&self, subset: &[usize], alpha: &[f64; 5]) -> Vec<f64> {
        let mut w = vec![0.0; self.k];
        for (r, &i) in subset.iter().enumerate() {
            for (wd, xd) in w.iter_mut().zip(&self.xs[i]) {
                *wd += alpha[r] * self.ys[i] * xd;
            }
        }
        w
    }

    fn margin(&self, w: &[f64], b: f64, i: usize) -> f64 {
        self.ys[i] * (dot(w, &self.xs[i]) + b)
    }
}

/// Calls `f` on every subset of `0..m` of size `2..=max_size`, in
/// lexicographic order within each size.
fn for_each_subset(m: usize, max_size: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = Vec::with_capacity(max_size);
    for size in 2..=max_size.min(m) {
        idx.clear();
        idx.extend(0..size);
        loop {
            f(&idx);
            // Advance to the next combination.
            let mut p = size;
            while p > 0 && idx[p - 1] == m - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
}

/// Exact maximum-margin hyperplane by candidate-subset enumeration.
///
/// Points must be vectors of a common dimension `k` in `1..=3`; at most
/// `max_points` examples. Single-class data yield `w = 0, b = y`.
pub fn train_max_margin(s: &TrainingSet, max_points: usize) -> Result<HyperplaneClassifier> {
    let m = s.len();
    if m > max_points {
        return Err(Error::invalid(format!(
            "max-margin solver is capped at {max_points} points, got {m}"
        )));
    }
    let xs = s
        .iter()
        .map(|z| z.x.as_vector().map(<[f64]>::to_vec))
        .collect::<Result<Vec<_>>>()?;
    let k = xs[0].len();
    if !(1..=3).contains(&k) {
        return Err(Error::Unsupported(format!("max-margin solver supports dimensions 1..=3, got {k}")));
    }
    if xs.iter().any(|x| x.len() != k) {
        return Err(Error::invalid("training points have mixed dimensions"));
    }
    let ys: Vec<f64> = s.iter().map(|z| z.y.value()).collect();

    let has_pos = s.iter().any(|z| z.y == Label::Positive);
    let has_neg = s.iter().any(|z| z.y == Label::Negative);
    if !(has_pos && has_neg) {
        let b = if has_pos { 1.0 } else { -1.0 };
        return Ok(HyperplaneClassifier {
            w: vec![0.0; k],
            b,
            support_indices: (0..m).collect(),
        });
    }

    let problem = Problem::new(xs, ys);
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    // Most recent violator, checked first: infeasible candidates usually fail
    // on the same few points.
    let mut last_violator = 0usize;
    for_each_subset(m, k + 1, |subset| {
        let (first, rest) = (problem.ys[subset[0]], &subset[1..]);
        if rest.iter().all(|&i| problem.ys[i] == first) {
            return;
        }
        let Some((alpha, b)) = problem.candidate(subset) else {
            return;
        };
        let norm2: f64 = alpha[..subset.len()].iter().sum();
        if best.as_ref().is_some_and(|(bn, _, _)| norm2 >= *bn) {
            return;
        }
        let w = problem.weights(subset, &alpha);
        if problem.margin(&w, b, last_violator) < 1.0 - SUPPORT_TOL {
            return;
        }
        if let Some(v) = (0..m).find(|&i| problem.margin(&w, b, i) < 1.0 - SUPPORT_TOL) {
            last_violator = v;
            return;
        }
        best = Some((norm2, w, b));
    });

    let (_, w, b) = best.ok_or_else(|| Error::Infeasible("training set is not linearly separable".into()))?;
    let support_indices = (0..m)
        .filter(|&i| problem.margin(&w, b, i) <= 1.0 + SUPPORT_TOL)
        .collect();
    Ok(HyperplaneClassifier { w, b, support_indices })
}
