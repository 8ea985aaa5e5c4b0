//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p stabsim-core --test acceptance`.

use std::time::Instant;

use stabsim_core::concentration::bounds::{
    erm_cv_stability_tail, hypothesis_stability_tail, mu_bound, support_change_delta, training_stability_tail,
    uniform_stability_tail, wdb_tail,
};
use stabsim_core::concentration::{
    compose_wdb, gen_samples, gen_wdb_certificate, mu_direct, mu_via_replacement, support_change_experiment, WdbTriple,
};
use stabsim_core::harness::{compute, run_decay_study, DecayInput, ExperimentConfig, ExperimentKind};
use stabsim_core::learners::train_max_margin;
use stabsim_core::stability::{check_cv_to_error, estimate, sample_perturbations};
use stabsim_core::stats::{combined_sigma, sample_variance};
use stabsim_core::{Cost, Distribution, Example, IndexPolicy, Label, Learner, Notion, SamplerConfig, StabilityMode, TrainingSet};

use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const SEED: u64 = 20_240_601;

fn zero_one() -> Cost {
    Cost::default()
}

fn mean_identity() -> Outcome {
    let cases = [
        (Learner::Constant, Distribution::label_noise_constant(0.3)),
        (Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5)),
        (Learner::radius_nn_inverse_square(), Distribution::label_noise_constant(0.3)),
        (Learner::FiniteLanguage, Distribution::finite_strings_default()),
    ];
    let cfg = SamplerConfig::new(50, 20_000, SEED);
    let mut pass = true;
    let mut parts = Vec::new();
    for (l, d) in &cases {
        let a = mu_direct(l, d, &zero_one(), &cfg).unwrap();
        let b = mu_via_replacement(l, d, &zero_one(), &cfg).unwrap();
        let (diff, tol) = a.difference(&b);
        pass &= diff <= tol;
        parts.push(format!("{}: |{:.5} - {:.5}| = {:.5} <= {:.5}", l.name(), a.mean(), b.mean(), diff, tol));
    }
    outcome(pass, parts.join("; "))
}

fn mean_bound_from_cv() -> Outcome {
    let (l, d) = (Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5));
    let cfg = SamplerConfig::new(50, 20_000, SEED);
    let mu = mu_direct(&l, &d, &zero_one(), &cfg).unwrap();
    let sample = sample_perturbations(&l, &d, &zero_one(), &cfg).unwrap();
    let cv = estimate(&sample, Notion::Cv, StabilityMode::FixBeta(0.0)).unwrap();
    let bound = mu_bound(0.0, cv.value, 1.0);
    let tol = 3.0 * combined_sigma(mu.std_error(), cv.std_error);
    outcome(
        mu.mean().abs() <= bound + tol,
        format!("|mu| = {:.5} <= beta + delta*M = {:.5} + 3 sigma {:.5}", mu.mean().abs(), bound, tol),
    )
}

fn threshold_not_hypothesis_stable() -> Outcome {
    let cfg = SamplerConfig::new(50, 5000, SEED);
    let sample =
        sample_perturbations(&Learner::ThresholdMidpoint, &Distribution::uniform_threshold(0.5), &zero_one(), &cfg).unwrap();
    let e = estimate(&sample, Notion::WeakHyp, StabilityMode::FixBeta(0.5)).unwrap();
    outcome(
        sample.hyp_exact() && e.value >= 0.99,
        format!("delta_hat = {} at beta = 0.5 (exact oracle: {})", e.value, sample.hyp_exact()),
    )
}

fn error_stable_without_generalization() -> Outcome {
    let m = 100;
    let l = Learner::radius_nn_inverse_square();
    let d = Distribution::label_noise_constant(0.3);
    let r = l.radius_for(m).unwrap();
    let cfg = SamplerConfig::new(m, 10_000, SEED);
    let sample = sample_perturbations(&l, &d, &zero_one(), &cfg).unwrap();
    let e = estimate(&sample, Notion::WeakError, StabilityMode::FixBeta(4.0 * r)).unwrap();
    let mu = mu_direct(&l, &d, &zero_one(), &cfg).unwrap();
    let floor = 0.3 - 0.02 - 3.0 * mu.std_error();
    outcome(
        e.value == 0.0 && mu.mean() >= floor,
        format!("(a) delta_hat at beta=4d is {}; (b) mean gen {:.5} >= {:.5}", e.value, mu.mean(), floor),
    )
}

fn samplewise_dominance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let learners = [
        Learner::Constant,
        Learner::finite_erm(vec![0.25, 0.5, 0.75]),
        Learner::ThresholdMidpoint,
        Learner::radius_nn_inverse_square(),
        Learner::FiniteLanguage,
        Learner::max_margin(),
    ];
    for l in &learners {
        let d = l.natural_distribution();
        let cfg = SamplerConfig::new(50, 5000, SEED);
        let s = sample_perturbations(l, &d, &zero_one(), &cfg).unwrap();
        let per_trial = s.trials.iter().filter(|t| t.cv_diff() > t.hyp_diff || t.overlap_diff > t.hyp_diff).count();
        let mut violations = per_trial;
        for k in 0..=10 {
            let beta = k as f64 / 10.0;
            let at = |n| estimate(&s, n, StabilityMode::FixBeta(beta)).unwrap().value;
            let hyp = at(Notion::WeakHyp);
            violations += usize::from(at(Notion::Cv) > hyp) + usize::from(at(Notion::Overlap) > hyp);
        }
        pass &= violations == 0;
        parts.push(format!("{}: {violations}", l.name()));
    }
    outcome(pass, format!("violations per learner: {}", parts.join(", ")))
}

fn cv_to_error_on_fresh_sample() -> Outcome {
    let cfg = SamplerConfig::new(100, 10_000, SEED);
    let r = check_cv_to_error(&Learner::ThresholdMidpoint, &Distribution::uniform_threshold(0.5), &zero_one(), &cfg, 0.0, 0.1)
        .unwrap();
    outcome(
        r.holds,
        format!(
            "Pr(err_diff > {:.3}) = {} <= 2 delta/alpha = {:.5} + {:.5}",
            r.error_beta, r.observed.value, r.error_delta, r.tolerance
        ),
    )
}

fn support_points_bound_changes() -> Outcome {
    let cfg = SamplerConfig::new(50, 2000, SEED);
    let r = support_change_experiment(&Learner::max_margin(), &Distribution::separated_discs(1.0, 1.0), &cfg).unwrap();
    outcome(
        r.holds,
        format!(
            "Pr(change) = {:.5} <= 2E|T|/(m+1) = {:.5} (E|T| = {:.3}) + {:.5}",
            r.change.value, r.bound, r.support.mean, r.tolerance
        ),
    )
}

/// Distance between the convex hulls of two planar point sets, by brute
/// force over point-to-segment distances.
fn hull_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    fn seg(p: [f64; 2], u: [f64; 2], v: [f64; 2]) -> f64 {
        let (dx, dy) = (v[0] - u[0], v[1] - u[1]);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 { 0.0 } else { (((p[0] - u[0]) * dx + (p[1] - u[1]) * dy) / len2).clamp(0.0, 1.0) };
        ((p[0] - u[0] - t * dx).powi(2) + (p[1] - u[1] - t * dy).powi(2)).sqrt()
    }
    let one_way = |ps: &[[f64; 2]], qs: &[[f64; 2]]| {
        let mut best = f64::INFINITY;
        for &p in ps {
            for i in 0..qs.len() {
                for j in i..qs.len() {
                    best = best.min(seg(p, qs[i], qs[j]));
                }
            }
        }
        best
    };
    one_way(a, b).min(one_way(b, a))
}

fn max_margin_solver_oracle() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut instances = 0;
    while instances < 200 {
        let m = rng.random_range(2..=30);
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (nx, ny) = (angle.cos(), angle.sin());
        let offset: f64 = rng.random_range(-0.5..0.5);
        let gap: f64 = rng.random_range(0.05..0.5);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut examples = Vec::new();
        while examples.len() < m {
            let p = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let s = nx * p[0] + ny * p[1] - offset;
            if s.abs() < gap / 2.0 {
                continue;
            }
            let y = if s > 0.0 { Label::Positive } else { Label::Negative };
            if s > 0.0 { pos.push(p) } else { neg.push(p) }
            examples.push(Example::vector(p.to_vec(), y));
        }
        if pos.is_empty() || neg.is_empty() {
            continue;
        }
        instances += 1;
        let set = TrainingSet::new(examples.clone()).unwrap();
        let h = train_max_margin(&set, 400).unwrap();
        let feasible = examples.iter().all(|z| {
            let x = z.x.as_vector().unwrap();
            z.y.value() * (h.w[0] * x[0] + h.w[1] * x[1] + h.b) >= 1.0 - 1e-9
        });
        let w2 = h.w[0] * h.w[0] + h.w[1] * h.w[1];
        let dist = hull_distance(&pos, &neg);
        let optimal_gap = (w2 * dist * dist / 4.0 - 1.0).abs();
        worst = worst.max(optimal_gap);
        let mut stable = true;
        for i in 0..m {
            if h.support_indices.contains(&i) {
                continue;
            }
            let mut rest = examples.clone();
            rest.remove(i);
            let h2 = train_max_margin(&TrainingSet::new(rest).unwrap(), 400).unwrap();
            let same = h.w.iter().zip(&h2.w).all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0))
                && (h.b - h2.b).abs() <= 1e-9 * h.b.abs().max(1.0);
            stable &= same;
        }
        if !(feasible && optimal_gap <= 1e-9 && stable) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{failures} failures in 200 instances; max |w.w * hull_dist^2 / 4 - 1| = {worst:.2e}"),
    )
}

fn variance_scaling() -> Outcome {
    let (l, d) = (Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5));
    let var = |m| sample_variance(&gen_samples(&l, &d, &zero_one(), &SamplerConfig::new(m, 20_000, SEED)).unwrap());
    let (v100, v400) = (var(100), var(400));
    let ratio = v100 / v400;
    outcome(
        (2.5..=6.0).contains(&ratio),
        format!("Var(m=100) = {v100:.3e}, Var(m=400) = {v400:.3e}, ratio = {ratio:.2} (required [2.5, 6])"),
    )
}

fn rel_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn bound_formulas() -> Outcome {
    // Independent transcriptions of the closed forms.
    let t32 = |beta: f64, mm: f64, m: f64, t: f64| 2.0 / (t.powi(2) * m / (2.0 * (m * beta + mm).powi(2))).exp();
    let t44 = |l: f64, mm: f64, m: f64, t: f64| 4.0 / (t * t * m / 1440.0 / ((l + mm) * (l + mm))).exp();
    let t45 = |l: f64, mm: f64, m: f64, t: f64| 4.0 / (t * t * m / 160.0 / ((2.0 * l + mm) * (2.0 * l + mm))).exp();
    let t46 = |l: f64, mm: f64, m: f64, t: f64| 4.0 / (t * t * m / 160.0 / ((2.0 * l + 3.0 * mm) * (2.0 * l + 3.0 * mm))).exp();
    let t29 = |l: f64, m: f64, t: f64| 4.0 / (t * t * m / 40.0 / (l * l)).exp();
    let mut checked = 0;
    let mut bad = 0;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let beta: f64 = rng.random_range(0.0..0.2);
        let lambda: f64 = rng.random_range(0.01..5.0);
        let mm: f64 = rng.random_range(0.5..3.0);
        let m: usize = rng.random_range(1..5000);
        let tau: f64 = rng.random_range(0.0..1.0);
        let delta: f64 = rng.random_range(0.0..1.0);
        let support: f64 = rng.random_range(0.0..10.0);
        let mf = m as f64;
        let pairs = [
            (uniform_stability_tail(beta, mm, m, tau), t32(beta, mm, mf, tau)),
            (training_stability_tail(lambda, mm, m, tau), t44(lambda, mm, mf, tau)),
            (hypothesis_stability_tail(lambda, mm, m, tau), t45(lambda, mm, mf, tau)),
            (erm_cv_stability_tail(lambda, mm, m, tau), t46(lambda, mm, mf, tau)),
            (wdb_tail(lambda, m, tau), t29(lambda, mf, tau)),
            (support_change_delta(support, m), support * 2.0 / (mf + 1.0)),
            (mu_bound(beta, delta, mm), mm * delta + beta),
        ];
        let d1: f64 = rng.random_range(0.0..0.5);
        let d2: f64 = rng.random_range(0.0..0.7);
        let a = WdbTriple::new(mm, beta.min(mm), d1).unwrap();
        let b = WdbTriple::new(2.0 * mm, lambda.min(2.0 * mm), d2).unwrap();
        let c = compose_wdb(a, b);
        let cert = gen_wdb_certificate(beta, delta / mf, mm, m).unwrap();
        let want_c = (3.0 * mm / mf + 3.0 * beta).min(2.0 * mm);
        let want_d = ((2 * m + 1) as f64 * (delta / mf)).min(1.0);
        let composed = [
            (c.b, 3.0 * mm),
            (c.c, beta.min(mm) + lambda.min(2.0 * mm)),
            (c.delta, (d1 + d2).min(1.0)),
            (cert.b, mm + mm),
            (cert.c, want_c),
            (cert.delta, want_d),
        ];
        for (got, want) in pairs.iter().chain(composed.iter()) {
            checked += 1;
            if !rel_close(*got, *want) {
                bad += 1;
            }
        }
    }
    // Worked values.
    let worked = [
        (uniform_stability_tail(0.0, 1.0, 100, 0.3), 2.0 * (-4.5f64).exp()),
        (wdb_tail(1.0, 4000, 0.3), 4.0 * (-9.0f64).exp()),
        (training_stability_tail(1.0, 1.0, 1000, 0.5), 4.0 * (-250.0f64 / 5760.0).exp()),
        (support_change_delta(3.0, 99), 0.06),
        (mu_bound(0.01, 0.001, 1.0), 0.011),
        (mu_bound(0.02, 0.5, 2.0), 1.02),
        (gen_wdb_certificate(0.0, 0.0, 1.0, 100).unwrap().c, 0.03),
        (gen_wdb_certificate(0.0, 0.0, 1.0, 100).unwrap().b, 2.0),
    ];
    for (got, want) in worked {
        checked += 1;
        if !rel_close(got, want) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} mismatches in {checked} comparisons at 1e-12 relative"))
}

fn decay_studies() -> Outcome {
    let cost = zero_one();
    let threshold = run_decay_study(&DecayInput {
        learner: &Learner::ThresholdMidpoint,
        dist: &Distribution::uniform_threshold(0.5),
        cost: &cost,
        m_grid: &[25, 50, 100, 200, 400],
        trials: 20_000,
        seed: SEED,
        beta: 0.0,
        index_policy: IndexPolicy::Last,
    })
    .unwrap();
    let language = run_decay_study(&DecayInput {
        learner: &Learner::FiniteLanguage,
        dist: &Distribution::finite_strings_default(),
        cost: &cost,
        m_grid: &[5, 10, 15, 20, 25],
        trials: 20_000,
        seed: SEED,
        beta: 0.0,
        index_policy: IndexPolicy::Last,
    })
    .unwrap();
    let deltas: Vec<String> = threshold.rows.iter().map(|r| format!("{:.4}", r.delta.value)).collect();
    let fits = threshold.log_linear.is_some() && threshold.log_log.is_some();
    let lang_slope = language.log_linear.map(|f| f.slope).unwrap_or(f64::NAN);
    let t = threshold.log_linear.unwrap();
    let tl = threshold.log_log.unwrap();
    outcome(
        threshold.decreasing_up_to_ci() && fits && lang_slope < 0.0,
        format!(
            "threshold delta_hat [{}], slopes log-linear {:.4}, log-log {:.3}; finite_language log-linear slope {:.4}",
            deltas.join(", "),
            t.slope,
            tl.slope,
            lang_slope
        ),
    )
}

fn determinism() -> Outcome {
    let mut cfg = ExperimentConfig::new(Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5));
    cfg.seed = 99;
    cfg.trials = 400;
    cfg.m = Some(30);
    cfg.index_policy = IndexPolicy::UniformRandom;
    cfg.stability.notions = Notion::ALL.to_vec();
    let kinds = [
        ExperimentKind::Estimate,
        ExperimentKind::Mu,
        ExperimentKind::Wdb,
        ExperimentKind::Concentration,
        ExperimentKind::CvToError,
    ];
    let run = |threads| {
        let mut c = cfg.clone();
        c.threads = threads;
        compute(&c, &kinds)
            .unwrap()
            .tables
            .iter()
            .map(|t| t.to_csv().unwrap())
            .collect::<Vec<_>>()
    };
    let a = run(1);
    let b = run(1);
    let c = run(4);
    let bytes: usize = a.iter().map(Vec::len).sum();
    outcome(a == b && a == c, format!("{} tables, {bytes} bytes; rerun equal: {}, 4 threads equal: {}", a.len(), a == b, a == c))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("mean gen: direct vs replace-one identity", mean_identity),
        ("mean gen bounded by cv stability", mean_bound_from_cv),
        ("threshold midpoint not weakly hypothesis stable", threshold_not_hypothesis_stable),
        ("radius NN error stable but does not generalize", error_stable_without_generalization),
        ("cv and overlap dominated by hypothesis difference", samplewise_dominance),
        ("cv to error stability conversion on fresh sample", cv_to_error_on_fresh_sample),
        ("max-margin change probability vs support points", support_points_bound_changes),
        ("max-margin solver oracle", max_margin_solver_oracle),
        ("Var(gen) scaling m=100 vs m=400", variance_scaling),
        ("bound formula exactness", bound_formulas),
        ("cv stability decay study", decay_studies),
        ("determinism across reruns and threads", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} [{:.1}s] {name}: {}", start.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
