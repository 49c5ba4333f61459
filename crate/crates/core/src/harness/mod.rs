//! Experiment specs, outcome classification, suite runs and cross-checks.
//!
//! A spec names a planted partition, the model probabilities and what counts as
//! success. Trial `i` samples its graph with seed `seed + i` and runs the
//! algorithm with seed `i`, so a single trial can be replayed from the command
//! line. Trials of one spec run in parallel and are folded in trial order.

mod bruteforce;
mod evaluate;
mod run;
mod spec;
mod verify;

pub use bruteforce::{log_likelihood, ml_bruteforce_partition, BRUTEFORCE_MAX_K, BRUTEFORCE_MAX_N};
pub use evaluate::{evaluate_recovery, same_partition, RecoveryEvaluation, SetClass};
pub use run::{expectation_met, run_spec, run_suite, RunReport, SuiteReport, TrialOutcome};
pub use spec::{
    format_sizes, parse_experiment_specs, parse_sizes, Expectation, ExperimentSpec, PublishedRow, Runner,
    SpecFile, DEFAULT_SEED,
};
pub use verify::{
    check_biadjacency_scan, check_expectation_spectrum, check_ml_agreement, check_singular_value_bound,
    check_subspace_vs_dense, run_verification, CheckResult, VerifyOptions, VerifyReport,
};
