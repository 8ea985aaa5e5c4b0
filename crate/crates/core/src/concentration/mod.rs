//! Weak difference bounds, mean generalization error estimators, closed-form
//! tail bounds and empirical tail experiments.

pub mod bounds;
mod mu;
mod support;
mod tail;
mod wdb;

pub use bounds::{BoundKind, BoundParams};
pub use mu::{gen_samples, mu_direct, mu_via_replacement, MuEstimate, MuMethod};
pub use support::{support_change_experiment, SupportChangeResult};
pub use tail::{concentration_experiment, empirical_tail, validate_tau_grid, BoundCurve, TailCurve};
pub use wdb::{compose_wdb, estimate_wdb, gen_wdb_certificate, WdbEstimate, WdbStatistic, WdbTriple};
