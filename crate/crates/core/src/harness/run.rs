use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::{noisy_clustering, FaultyOracle, NoisyConfig, QueryStats};
use crate::recovery::{recursive_cluster, Profile, RecoveryConfig};
use crate::sbm::sample_sbm;

use super::evaluate::{evaluate_recovery, RecoveryEvaluation};
use super::spec::{format_sizes, Expectation, ExperimentSpec, PublishedRow, Runner};

#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub graph_seed: u64,
    pub algorithm_seed: u64,
    pub passed: bool,
    pub evaluation: Option<RecoveryEvaluation>,
    /// Sizes of the emitted sets, in emission order.
    pub recovered_sizes: Vec<usize>,
    /// Size estimate of each inner clustering call.
    pub size_estimates: Vec<Option<f64>>,
    pub stop: Option<String>,
    pub queries: Option<QueryStats>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub name: String,
    pub profile: Profile,
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub sizes: String,
    pub expect: Expectation,
    pub repeats: usize,
    pub passes: usize,
    pub pass_rate: f64,
    pub trials: Vec<TrialOutcome>,
    pub published: PublishedRow,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub reports: Vec<RunReport>,
}

/// Whether an evaluation meets `expect` for a planted partition with `sizes`
/// (non-increasing). Any partial or empty set fails the trial.
pub fn expectation_met(expect: Expectation, eval: &RecoveryEvaluation, sizes: &[usize]) -> bool {
    if !eval.is_clean() {
        return false;
    }
    let mut got: Vec<usize> = eval.exact_clusters.iter().map(|&i| sizes[i]).collect();
    got.sort_unstable_by(|a, b| b.cmp(a));
    match expect {
        Expectation::LargestExact => got.first() == sizes.first(),
        Expectation::TopExact(t) => got.len() >= t && got[..t] == sizes[..t],
        Expectation::AllExact => got.len() == sizes.len(),
        Expectation::CountAtLeast(t) => got.len() >= t,
    }
}

/// `"exhausted"` or `{"no_cluster": "size_gate_rejected"}` as `no_cluster(size_gate_rejected)`.
fn stop_label(v: serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s,
        serde_json::Value::Object(m) if m.len() == 1 => {
            let (k, inner) = m.into_iter().next().expect("one entry");
            format!("{k}({})", stop_label(inner))
        }
        other => other.to_string(),
    }
}

fn run_trial(spec: &ExperimentSpec, trial: usize) -> TrialOutcome {
    let start = Instant::now();
    let sbm = spec.sbm(trial);
    let graph_seed = sbm.as_ref().map_or(spec.seed, |s| s.seed);
    let algorithm_seed = trial as u64;
    let mut t = TrialOutcome {
        trial,
        graph_seed,
        algorithm_seed,
        passed: false,
        evaluation: None,
        recovered_sizes: Vec::new(),
        size_estimates: Vec::new(),
        stop: None,
        queries: None,
        wall_ms: 0.0,
        error: None,
    };
    let result = (|| -> Result<()> {
        let sbm = sbm?;
        let truth = sbm.ground_truth();
        let mut cfg = RecoveryConfig::for_profile(spec.profile, algorithm_seed);
        cfg.k_prime_override = spec.k_prime_override;
        let clusters = match spec.runner {
            Runner::Peel => {
                let (g, _) = sample_sbm(&sbm)?;
                let out = recursive_cluster(&g, sbm.p, sbm.q, &cfg)?;
                t.size_estimates = out.traces.iter().map(|tr| tr.s_prime).collect();
                t.stop = Some(stop_label(serde_json::to_value(out.stop)?));
                out.clusters
            }
            Runner::Noisy { delta, s } => {
                let oracle = FaultyOracle::new(truth.clone(), delta, graph_seed)?;
                let ncfg = NoisyConfig {
                    recovery: cfg,
                    ..NoisyConfig::for_profile(spec.profile, s, algorithm_seed)
                };
                let out = noisy_clustering(&oracle, truth.n(), delta, &ncfg)?;
                t.size_estimates = out.traces.iter().map(|tr| tr.s_prime).collect();
                t.stop = out.last_status.map(serde_json::to_value).transpose()?.map(stop_label);
                t.queries = Some(out.stats);
                out.clusters
            }
        };
        t.recovered_sizes = clusters.iter().map(Vec::len).collect();
        let eval = evaluate_recovery(&clusters, &truth);
        t.passed = expectation_met(spec.expect, &eval, truth.sizes());
        t.evaluation = Some(eval);
        Ok(())
    })();
    if let Err(e) = result {
        t.error = Some(e.to_string());
        t.passed = false;
    }
    t.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    t
}

/// Runs every trial of `spec` on up to `threads` worker threads. Results are
/// ordered by trial index regardless of scheduling.
pub fn run_spec(spec: &ExperimentSpec, threads: usize) -> RunReport {
    let threads = threads.clamp(1, spec.repeats.max(1));
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(spec.repeats));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= spec.repeats {
                    break;
                }
                let outcome = run_trial(spec, i);
                done.lock().unwrap_or_else(|e| e.into_inner()).push(outcome);
            });
        }
    });
    let mut trials = done.into_inner().unwrap_or_else(|e| e.into_inner());
    trials.sort_by_key(|t| t.trial);
    let passes = trials.iter().filter(|t| t.passed).count();
    let (sizes, p, q) = spec.model();
    RunReport {
        name: spec.name.clone(),
        profile: spec.profile,
        n: spec.n(),
        k: sizes.len(),
        p,
        q,
        sizes: format_sizes(&sizes),
        expect: spec.expect,
        repeats: spec.repeats,
        passes,
        pass_rate: passes as f64 / spec.repeats.max(1) as f64,
        trials,
        published: spec.published.clone(),
    }
}

pub fn run_suite(specs: &[ExperimentSpec], threads: usize) -> SuiteReport {
    SuiteReport {
        reports: specs.iter().map(|s| run_spec(s, threads)).collect(),
    }
}

impl SuiteReport {
    /// One row per experiment. The last two columns quote the published tables
    /// and are never computed here.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Experiment | n | p, q | k | Cluster sizes | Profile | Check | Passed | Published (ours) | Published (ACX, quoted) |\n");
        out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
        for r in &self.reports {
            let dash = || "-".to_string();
            let _ = writeln!(
                out,
                "| {} | {} | {}, {} | {} | {} | {} | {} | {}/{} | {} | {} |",
                r.name,
                r.n,
                r.p,
                r.q,
                r.k,
                r.sizes.replace(',', ", "),
                r.profile,
                r.expect,
                r.passes,
                r.repeats,
                r.published.ours.clone().unwrap_or_else(dash),
                r.published.acx.clone().unwrap_or_else(dash),
            );
        }
        out
    }

    /// Per-trial rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "experiment,trial,graph_seed,algorithm_seed,passed,exact,partial,spurious,misclassified,recovered_sizes,distinct_queries,wall_ms,error\n",
        );
        for r in &self.reports {
            for t in &r.trials {
                let (e, p, s, m) = t
                    .evaluation
                    .as_ref()
                    .map_or((0, 0, 0, 0), |e| (e.exact, e.partial, e.spurious, e.misclassified));
                let sizes: Vec<String> = t.recovered_sizes.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
                    csv_field(&r.name),
                    t.trial,
                    t.graph_seed,
                    t.algorithm_seed,
                    t.passed,
                    e,
                    p,
                    s,
                    m,
                    sizes.join(";"),
                    t.queries.as_ref().map_or(String::new(), |q| q.distinct.to_string()),
                    t.wall_ms,
                    csv_field(t.error.as_deref().unwrap_or("")),
                );
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
