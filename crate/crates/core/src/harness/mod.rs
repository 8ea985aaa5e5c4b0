//! Configuration, experiment runners and report emission.
//!
//! A run validates an [`ExperimentConfig`], executes the requested
//! experiments inside a thread pool of the configured size and writes one CSV
//! per table plus `summary.json` and `report.txt`. Every file is written
//! through a temporary file and renamed into place.
//!
//! CSV tables and their columns, in order:
//!
//! | file | columns |
//! |------|---------|
//! | `estimates.csv` | notion, mode, m, beta, delta_hat, ci, ci_low, ci_high, trials, seed, learner, distribution, index_policy, lower_bound |
//! | `mu.csv` | m, method, mean, std_error, ci, trials, seed, learner, distribution |
//! | `mu_check.csv` | m, difference, tolerance, agree, cv_beta, cv_delta_hat, cv_ci, mean_bound, bound_holds, trials, seed |
//! | `wdb.csv` | statistic, m, c, b_hat, delta_hat, ci, ci_low, ci_high, trials, seed, learner, distribution |
//! | `tail.csv` | m, tau, empirical, ci, bound_uniform, bound_training, bound_hypothesis, bound_erm_cv, bound_wdb, trials, seed |
//! | `concentration.csv` | m, mean, ci, variance, trials, seed |
//! | `tail_bounds.csv` | m, bound, parameter, certified, trials, seed |
//! | `decay.csv` | m, beta, delta_hat, ci, ci_low, ci_high, trials, seed |
//! | `decay_fit.csv` | fit, slope, ci, intercept, points, zero_points, trials, seed |
//! | `bounds.csv` | bound, m, tau, beta, delta, lambda, mean_support_count, M, value, clamped |
//! | `support_change.csv` | m, change, change_ci, mean_support, support_ci, bound, tolerance, holds, trials, seed |
//! | `cv_to_error.csv` | m, alpha, cv_beta, cv_delta_hat, cv_ci, error_beta, error_delta, observed, observed_ci, tolerance, holds, trials, seed |
//!
//! In `estimates.csv`, `fix_beta` rows estimate `delta_hat` at the given
//! `beta`, `fix_delta` rows estimate `beta` at the given `delta_hat`, and
//! `observed_sup` rows carry the largest observed difference in `beta`.
//! `ci` is always the 95% half-width of the estimated column.

mod catalog;
mod config;
mod decay;
mod report;
mod run;

pub use catalog::{list, Catalog, CatalogEntry};
pub use config::{
    check_compatible, check_realizable, BoundsSection, ConcentrationSection, CvToErrorSection, DecaySection,
    ExperimentConfig, ExperimentKind, ModeName, StabilitySection, WdbSection, DEFAULT_M,
};
pub use decay::{run_decay_study, DecayInput, DecayRow, DecayStudy};
pub use report::{num, write_atomic, Table};
pub use run::{compute, normalize_kinds, run_experiment, RunOutput};
