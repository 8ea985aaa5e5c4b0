use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind};
use super::decay::{run_decay_study, DecayInput};
use super::report::{num, write_atomic, Table};
use crate::concentration::{
    concentration_experiment, estimate_wdb, mu_direct, mu_via_replacement, support_change_experiment, BoundKind,
};
use crate::error::{Error, Result};
use crate::stability::{check_cv_to_error, estimate, sample_perturbations, EstimateMode, Notion, StabilityMode};
use crate::stats::combined_sigma;

/// Everything an experiment run produces, before it is written to disk.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub results: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub report: Vec<String>,
}

impl RunOutput {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// The JSON summary: config echo, per-experiment results, notes.
    pub fn summary(&self, cfg: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<Value> {
        Ok(json!({
            "config": serde_json::to_value(cfg)?,
            "experiments": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "files": self.tables.iter().map(|t| t.file_name()).collect::<Vec<_>>(),
            "results": self.results,
            "notes": self.notes,
        }))
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn mode_name(mode: EstimateMode) -> &'static str {
    match mode {
        EstimateMode::FixBeta => "fix_beta",
        EstimateMode::FixDelta => "fix_delta",
        EstimateMode::ObservedSup => "observed_sup",
    }
}

/// Canonical order without duplicates.
pub fn normalize_kinds(kinds: &[ExperimentKind]) -> Vec<ExperimentKind> {
    let mut k = kinds.to_vec();
    k.sort();
    k.dedup();
    k
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    learner: String,
    dist: String,
    seed: String,
    trials: String,
    out: RunOutput,
}

impl Ctx<'_> {
    fn note(&mut self, s: &str) {
        if !self.out.notes.iter().any(|n| n == s) {
            self.out.notes.push(s.to_string());
        }
    }
}

/// Runs `kinds` on `cfg` inside a thread pool of `cfg.threads` workers and
/// returns the tables without touching the filesystem.
pub fn compute(cfg: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<RunOutput> {
    let kinds = normalize_kinds(kinds);
    cfg.validate_for(&kinds)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot build thread pool: {e}")))?;
    pool.install(|| {
        let dist = cfg.distribution();
        let mut ctx = Ctx {
            cfg,
            learner: cfg.learner.description(),
            dist: dist.description(),
            seed: cfg.seed.to_string(),
            trials: cfg.trials.to_string(),
            out: RunOutput {
                tables: Vec::new(),
                results: BTreeMap::new(),
                notes: Vec::new(),
                report: Vec::new(),
            },
        };
        for kind in &kinds {
            match kind {
                ExperimentKind::Estimate => run_estimate(&mut ctx)?,
                ExperimentKind::Mu => run_mu(&mut ctx)?,
                ExperimentKind::Wdb => run_wdb(&mut ctx)?,
                ExperimentKind::Concentration => run_concentration(&mut ctx)?,
                ExperimentKind::Decay => run_decay(&mut ctx)?,
                ExperimentKind::Bounds => run_bounds(&mut ctx)?,
                ExperimentKind::SupportChange => run_support(&mut ctx)?,
                ExperimentKind::CvToError => run_cv_to_error(&mut ctx)?,
            }
        }
        Ok(ctx.out)
    })
}

/// Runs `kinds` and writes one CSV per table, `summary.json` and
/// `report.txt` into `cfg.out`. Returns the written paths.
pub fn run_experiment(cfg: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<(RunOutput, Vec<PathBuf>)> {
    let kinds = normalize_kinds(kinds);
    let out = compute(cfg, &kinds)?;
    let mut paths = Vec::new();
    for t in &out.tables {
        paths.push(write_atomic(&cfg.out, &t.file_name(), &t.to_csv()?)?);
    }
    let mut summary = serde_json::to_vec_pretty(&out.summary(cfg, &kinds)?)?;
    summary.push(b'\n');
    paths.push(write_atomic(&cfg.out, "summary.json", &summary)?);
    let mut report = out.report.join("\n");
    report.push('\n');
    paths.push(write_atomic(&cfg.out, "report.txt", report.as_bytes())?);
    Ok((out, paths))
}

fn run_estimate(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let mode = cfg.stability.mode();
    let mut table = Table::new(
        "estimates",
        &[
            "notion", "mode", "m", "beta", "delta_hat", "ci", "ci_low", "ci_high", "trials", "seed", "learner",
            "distribution", "index_policy", "lower_bound",
        ],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let sample = sample_perturbations(&cfg.learner, &dist, &cfg.cost, &cfg.sampler(m))?;
        for &notion in &cfg.stability.notions {
            let e = estimate(&sample, notion, mode)?;
            table.push(vec![
                notion.name().into(),
                mode_name(e.mode).into(),
                m.to_string(),
                num(e.beta),
                num(e.delta),
                num(e.ci),
                num(e.ci_low),
                num(e.ci_high),
                ctx.trials.clone(),
                ctx.seed.clone(),
                ctx.learner.clone(),
                ctx.dist.clone(),
                cfg.index_policy.label(),
                e.lower_bound.to_string(),
            ]);
            ctx.out.report.push(format!(
                "estimate m={m} {}: {} = {} (95% CI [{}, {}])",
                notion.name(),
                if e.mode == EstimateMode::FixDelta { "beta_hat" } else if e.mode == EstimateMode::ObservedSup { "observed sup" } else { "delta_hat" },
                num(e.value),
                num(e.ci_low),
                num(e.ci_high),
            ));
            if e.lower_bound {
                ctx.note("hyp_diff used a sampled sup over z, so weak_hyp and uniform_hyp values are lower bounds");
            }
            if notion == Notion::UniformHyp {
                ctx.note("uniform_hyp reports the observed supremum; the true uniform beta is at least this value");
            }
            records.push(to_json(&e)?);
        }
    }
    ctx.out.tables.push(table);
    ctx.out.results.insert("estimate".into(), Value::Array(records));
    Ok(())
}

fn run_mu(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let big_m = cfg.cost.bound();
    let cv_beta = match cfg.stability.mode() {
        StabilityMode::FixBeta(b) => b,
        StabilityMode::FixDelta(_) => 0.0,
    };
    let mut mu = Table::new(
        "mu",
        &["m", "method", "mean", "std_error", "ci", "trials", "seed", "learner", "distribution"],
    );
    let mut check = Table::new(
        "mu_check",
        &[
            "m", "difference", "tolerance", "agree", "cv_beta", "cv_delta_hat", "cv_ci", "mean_bound", "bound_holds",
            "trials", "seed",
        ],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let s = cfg.sampler(m);
        let direct = mu_direct(&cfg.learner, &dist, &cfg.cost, &s)?;
        let repl = mu_via_replacement(&cfg.learner, &dist, &cfg.cost, &s)?;
        for e in [&direct, &repl] {
            mu.push(vec![
                m.to_string(),
                if e.method == crate::concentration::MuMethod::Direct { "direct" } else { "replacement" }.into(),
                num(e.mean()),
                num(e.std_error()),
                num(e.estimate.ci),
                ctx.trials.clone(),
                ctx.seed.clone(),
                ctx.learner.clone(),
                ctx.dist.clone(),
            ]);
        }
        let (diff, tol) = direct.difference(&repl);
        let sample = sample_perturbations(&cfg.learner, &dist, &cfg.cost, &s)?;
        let cv = estimate(&sample, Notion::Cv, StabilityMode::FixBeta(cv_beta))?;
        let bound = crate::concentration::bounds::mu_bound(cv_beta, cv.value, big_m);
        let bound_tol = 3.0 * combined_sigma(direct.std_error(), big_m * cv.std_error);
        let holds = direct.mean().abs() <= bound + bound_tol;
        check.push(vec![
            m.to_string(),
            num(diff),
            num(tol),
            (diff <= tol).to_string(),
            num(cv_beta),
            num(cv.value),
            num(cv.ci),
            num(bound),
            holds.to_string(),
            ctx.trials.clone(),
            ctx.seed.clone(),
        ]);
        ctx.out.report.push(format!(
            "mu m={m}: direct {} +- {}, replacement {} +- {}; |mu| <= beta + delta*M = {} holds: {holds}",
            num(direct.mean()),
            num(direct.estimate.ci),
            num(repl.mean()),
            num(repl.estimate.ci),
            num(bound)
        ));
        records.push(json!({
            "m": m,
            "direct": to_json(&direct)?,
            "replacement": to_json(&repl)?,
            "difference": diff,
            "tolerance": tol,
            "cv": to_json(&cv)?,
            "mean_bound": bound,
            "bound_tolerance": bound_tol,
            "bound_holds": holds,
        }));
    }
    ctx.out.tables.push(mu);
    ctx.out.tables.push(check);
    ctx.out.results.insert("mu".into(), Value::Array(records));
    Ok(())
}

fn run_wdb(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let mut table = Table::new(
        "wdb",
        &[
            "statistic", "m", "c", "b_hat", "delta_hat", "ci", "ci_low", "ci_high", "trials", "seed", "learner",
            "distribution",
        ],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let c = cfg.wdb.c.unwrap_or(1.0 / m as f64);
        let e = estimate_wdb(cfg.wdb.statistic, &cfg.learner, &dist, &cfg.cost, &cfg.sampler(m), c)?;
        table.push(vec![
            e.statistic.name().into(),
            m.to_string(),
            num(c),
            num(e.b_hat),
            num(e.delta.value),
            num(e.delta.ci()),
            num(e.delta.ci_low),
            num(e.delta.ci_high),
            ctx.trials.clone(),
            ctx.seed.clone(),
            ctx.learner.clone(),
            ctx.dist.clone(),
        ]);
        ctx.out.report.push(format!(
            "wdb m={m} {}: c={} delta_hat={} b_hat={}",
            e.statistic.name(),
            num(c),
            num(e.delta.value),
            num(e.b_hat)
        ));
        records.push(to_json(&e)?);
    }
    ctx.note("wdb b_hat is the largest observed difference, a lower bound on b");
    ctx.out.tables.push(table);
    ctx.out.results.insert("wdb".into(), Value::Array(records));
    Ok(())
}

const TAIL_KINDS: [BoundKind; 5] = [
    BoundKind::Uniform,
    BoundKind::Training,
    BoundKind::Hypothesis,
    BoundKind::ErmCv,
    BoundKind::Wdb,
];

fn run_concentration(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let mut header = vec!["m", "tau", "empirical", "ci"];
    header.extend(["bound_uniform", "bound_training", "bound_hypothesis", "bound_erm_cv", "bound_wdb"]);
    header.extend(["trials", "seed"]);
    let mut tail = Table::new("tail", &header);
    let mut summary = Table::new("concentration", &["m", "mean", "ci", "variance", "trials", "seed"]);
    let mut params = Table::new("tail_bounds", &["m", "bound", "parameter", "certified", "trials", "seed"]);
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let c = concentration_experiment(
            &cfg.learner,
            &dist,
            &cfg.cost,
            &cfg.sampler(m),
            &cfg.concentration.tau_grid,
            cfg.concentration.delta,
        )?;
        for (k, &tau) in c.tau_grid.iter().enumerate() {
            let mut row = vec![m.to_string(), num(tau), num(c.empirical[k].value), num(c.empirical[k].ci())];
            for kind in TAIL_KINDS {
                let v = c.curve(kind).map_or(f64::NAN, |curve| curve.values[k]);
                row.push(num(v.min(1.0)));
            }
            row.extend([ctx.trials.clone(), ctx.seed.clone()]);
            tail.push(row);
        }
        summary.push(vec![
            m.to_string(),
            num(c.mean.mean),
            num(c.mean.ci),
            num(c.variance),
            ctx.trials.clone(),
            ctx.seed.clone(),
        ]);
        for curve in &c.curves {
            params.push(vec![
                m.to_string(),
                curve.kind.name().into(),
                num(curve.parameter),
                curve.certified.to_string(),
                ctx.trials.clone(),
                ctx.seed.clone(),
            ]);
        }
        ctx.out.report.push(format!(
            "concentration m={m}: mean gen {} +- {}, variance {}",
            num(c.mean.mean),
            num(c.mean.ci),
            num(c.variance)
        ));
        records.push(to_json(&c)?);
    }
    ctx.note(
        "tail bound formulas are evaluated for every tau; the tau window and minimum m under which they hold are not \
         known, so their applicability is unverified",
    );
    ctx.note("tail.csv clamps bound values at 1; summary.json keeps the raw values");
    ctx.out.tables.extend([tail, summary, params]);
    ctx.out.results.insert("concentration".into(), Value::Array(records));
    Ok(())
}

fn run_decay(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let study = run_decay_study(&DecayInput {
        learner: &cfg.learner,
        dist: &dist,
        cost: &cfg.cost,
        m_grid: &cfg.decay.m_grid,
        trials: cfg.trials,
        seed: cfg.seed,
        beta: cfg.decay.beta,
        index_policy: cfg.index_policy,
    })?;
    let mut rows = Table::new(
        "decay",
        &["m", "beta", "delta_hat", "ci", "ci_low", "ci_high", "trials", "seed"],
    );
    for r in &study.rows {
        rows.push(vec![
            r.m.to_string(),
            num(study.beta),
            num(r.delta.value),
            num(r.delta.ci()),
            num(r.delta.ci_low),
            num(r.delta.ci_high),
            ctx.trials.clone(),
            ctx.seed.clone(),
        ]);
        ctx.out.report.push(format!("decay m={}: delta_hat={} (95% CI [{}, {}])", r.m, num(r.delta.value), num(r.delta.ci_low), num(r.delta.ci_high)));
    }
    let mut fits = Table::new(
        "decay_fit",
        &["fit", "slope", "ci", "intercept", "points", "zero_points", "trials", "seed"],
    );
    let zero = study.zero_points.len().to_string();
    for (name, fit) in [("log_delta_vs_m", &study.log_linear), ("log_delta_vs_log_m", &study.log_log)] {
        match fit {
            Some(f) => {
                fits.push(vec![
                    name.into(),
                    num(f.slope),
                    num(crate::stats::Z95 * f.slope_std_error),
                    num(f.intercept),
                    f.points.to_string(),
                    zero.clone(),
                    ctx.trials.clone(),
                    ctx.seed.clone(),
                ]);
                ctx.out.report.push(format!("decay fit {name}: slope {}", num(f.slope)));
            }
            None => ctx.out.report.push(format!("decay fit {name}: too few nonzero points")),
        }
    }
    ctx.note("the decay study reports both fits and makes no claim about the functional form of the decay");
    let mut v = to_json(&study)?;
    v["decreasing_up_to_ci"] = json!(study.decreasing_up_to_ci());
    ctx.out.tables.extend([rows, fits]);
    ctx.out.results.insert("decay".into(), v);
    Ok(())
}

fn run_bounds(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let mut table = Table::new(
        "bounds",
        &["bound", "m", "tau", "beta", "delta", "lambda", "mean_support_count", "M", "value", "clamped"],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        for kind in BoundKind::ALL {
            let taus: Vec<Option<f64>> = match kind {
                BoundKind::MeanGen | BoundKind::SupportChange => vec![None],
                _ => cfg.bounds_tau_grid().iter().map(|&t| Some(t)).collect(),
            };
            for tau in taus {
                let p = cfg.bound_params(m, tau.unwrap_or(0.0));
                let value = kind.evaluate(&p)?;
                let b = &cfg.bounds;
                table.push(vec![
                    kind.name().into(),
                    m.to_string(),
                    tau.map(num).unwrap_or_default(),
                    num(b.beta),
                    num(b.delta),
                    num(b.lambda),
                    num(b.mean_support_count),
                    num(p.big_m),
                    num(value),
                    num(value.min(1.0)),
                ]);
                records.push(json!({"bound": kind.name(), "m": m, "tau": tau, "value": value}));
            }
        }
    }
    ctx.out.report.push(format!("bounds: {} evaluations", records.len()));
    ctx.out.tables.push(table);
    ctx.out.results.insert("bounds".into(), Value::Array(records));
    Ok(())
}

fn run_support(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let mut table = Table::new(
        "support_change",
        &[
            "m", "change", "change_ci", "mean_support", "support_ci", "bound", "tolerance", "holds", "trials", "seed",
        ],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let r = support_change_experiment(&cfg.learner, &dist, &cfg.sampler(m))?;
        table.push(vec![
            m.to_string(),
            num(r.change.value),
            num(r.change.ci()),
            num(r.support.mean),
            num(r.support.ci),
            num(r.bound),
            num(r.tolerance),
            r.holds.to_string(),
            ctx.trials.clone(),
            ctx.seed.clone(),
        ]);
        ctx.out.report.push(format!(
            "support_change m={m}: change {} vs 2E|T|/(m+1) = {} (E|T| = {}), holds: {}",
            num(r.change.value),
            num(r.bound),
            num(r.support.mean),
            r.holds
        ));
        records.push(to_json(&r)?);
    }
    ctx.out.tables.push(table);
    ctx.out.results.insert("support_change".into(), Value::Array(records));
    Ok(())
}

fn run_cv_to_error(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let dist = cfg.distribution();
    let mut table = Table::new(
        "cv_to_error",
        &[
            "m", "alpha", "cv_beta", "cv_delta_hat", "cv_ci", "error_beta", "error_delta", "observed", "observed_ci",
            "tolerance", "holds", "trials", "seed",
        ],
    );
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let c = &cfg.cv_to_error;
        let r = check_cv_to_error(&cfg.learner, &dist, &cfg.cost, &cfg.sampler(m), c.beta, c.alpha)?;
        table.push(vec![
            m.to_string(),
            num(c.alpha),
            num(c.beta),
            num(r.cv.value),
            num(r.cv.ci),
            num(r.error_beta),
            num(r.error_delta),
            num(r.observed.value),
            num(r.observed.ci()),
            num(r.tolerance),
            r.holds.to_string(),
            ctx.trials.clone(),
            ctx.seed.clone(),
        ]);
        ctx.out.report.push(format!(
            "cv_to_error m={m}: Pr(err_diff > {}) = {} vs {} (+{}), holds: {}",
            num(r.error_beta),
            num(r.observed.value),
            num(r.error_delta),
            num(r.tolerance),
            r.holds
        ));
        records.push(to_json(&r)?);
    }
    ctx.out.tables.push(table);
    ctx.out.results.insert("cv_to_error".into(), Value::Array(records));
    Ok(())
}
