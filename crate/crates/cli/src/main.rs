//! `sbmrec`: sample planted partitions, recover large clusters, simulate a faulty
//! oracle and run experiment suites.
//!
//! Exit status is 0 on success, 1 when the run completed but found nothing (or a
//! verification check failed) and 2 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sbm_recovery::harness::{
    evaluate_recovery, parse_experiment_specs, parse_sizes, run_suite, run_verification, VerifyOptions,
};
use sbm_recovery::io::{parse_edge_list, parse_labels, write_clusters, write_edge_list, write_labels};
use sbm_recovery::oracle::{noisy_clustering, FaultyOracle, NoisyConfig};
use sbm_recovery::recovery::{recursive_cluster, ClusterStatus, PeelStop, Profile, RecoveryConfig};
use sbm_recovery::{sample_sbm, SbmSpec};

#[derive(Parser, Debug)]
#[command(name = "sbmrec", version, about = "Exact recovery of large clusters in unbalanced SBMs")]
struct Cli {
    /// Worker threads for experiment suites.
    #[arg(long, global = true, env = "SBMREC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Common {
    /// Seed; reruns with the same seed are bit-identical.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Constant set: `theory` or `empirical`.
    #[arg(long, default_value_t = Profile::Empirical)]
    profile: Profile,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an SBM graph and write it with its planted labels.
    Generate {
        /// Cluster sizes, e.g. `800,200,80,20` or `1000,903,1x997`.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recover clusters from an edge list by recursive peeling.
    Recover {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Use this projection rank instead of the derived one.
        #[arg(long)]
        k_prime_override: Option<usize>,
        /// Clusters file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON trace of every inner call.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Planted labels to score the result against.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Cluster through an in-process faulty oracle over a planted partition.
    Noisy {
        /// Number of vertices; must equal the sum of `--sizes`.
        #[arg(long)]
        n: usize,
        /// Oracle bias: answers are correct with probability `(1 + delta) / 2`.
        #[arg(long)]
        delta: f64,
        /// Smallest cluster size to recover.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        k_prime_override: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every query as a `u v +/-` line.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run an experiment spec file.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        /// Replace every spec's repeat count.
        #[arg(long)]
        repeats: Option<usize>,
        /// Force one profile for every spec.
        #[arg(long)]
        profile: Option<Profile>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        markdown: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the randomized cross-checks against dense and exhaustive references.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fewer instances per check.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    NotFound(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn header(common: &Common) -> String {
    format!("# profile={} seed={}\n", common.profile, common.seed)
}

fn status_text(status: ClusterStatus) -> &'static str {
    match status {
        ClusterStatus::Found => "cluster found",
        ClusterStatus::SizeGateRejected => "size gate rejected",
        ClusterStatus::RoundsExhausted => "no candidate center passed",
        ClusterStatus::Degenerate => "residual graph too small to partition",
    }
}

fn recovery_config(common: &Common, k_prime_override: Option<usize>) -> RecoveryConfig {
    let mut cfg = RecoveryConfig::for_profile(common.profile, common.seed);
    cfg.k_prime_override = k_prime_override;
    cfg
}

fn emit_clusters(out: Option<&Path>, common: &Common, clusters: &[Vec<usize>]) -> CliResult {
    let text = header(common) + &write_clusters(clusters);
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    match cli.command {
        Command::Generate {
            sizes,
            p,
            q,
            graph,
            labels,
            common,
        } => {
            let spec = SbmSpec::new(parse_sizes(&sizes)?, p, q, common.seed)?;
            let (g, truth) = sample_sbm(&spec)?;
            write(&graph, &(header(&common) + &write_edge_list(&g)))?;
            write(&labels, &(header(&common) + &write_labels(&truth)))?;
            println!("profile: {}", common.profile);
            println!("n: {} edges: {} clusters: {}", g.n(), g.edge_count(), truth.k());
            Ok(())
        }
        Command::Recover {
            graph,
            p,
            q,
            k_prime_override,
            out,
            trace,
            truth,
            common,
        } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let truth = truth.map(|t| read(&t).and_then(|s| Ok(parse_labels(&s)?))).transpose()?;
            if let Some(t) = &truth {
                if t.n() != g.n() {
                    return Err(Failure::Invalid(format!("labels cover {} vertices, graph has {}", t.n(), g.n())));
                }
            }
            let cfg = recovery_config(&common, k_prime_override);
            let result = recursive_cluster(&g, p, q, &cfg)?;
            if let Some(path) = trace {
                let doc = json!({
                    "command": "recover",
                    "profile": common.profile,
                    "seed": common.seed,
                    "p": p,
                    "q": q,
                    "config": cfg,
                    "stop": result.stop,
                    "traces": result.traces,
                });
                write(&path, &serde_json::to_string_pretty(&doc)?)?;
            }
            emit_clusters(out.as_deref(), &common, &result.clusters)?;
            eprintln!("profile: {}", common.profile);
            eprintln!("clusters: {}", result.clusters.len());
            if let Some(t) = &truth {
                let e = evaluate_recovery(&result.clusters, t);
                eprintln!("exact: {} partial: {} spurious: {}", e.exact, e.partial, e.spurious);
            }
            match result.stop {
                PeelStop::NoCluster(status) if result.clusters.is_empty() => {
                    Err(Failure::NotFound(status_text(status).into()))
                }
                _ => Ok(()),
            }
        }
        Command::Noisy {
            n,
            delta,
            s,
            sizes,
            k_prime_override,
            out,
            transcript,
            trace,
            common,
        } => {
            let sizes = parse_sizes(&sizes)?;
            let truth = SbmSpec::new(sizes, 1.0, 0.0, common.seed)?.ground_truth();
            if truth.n() != n {
                return Err(Failure::Invalid(format!("--sizes sum to {}, but --n is {n}", truth.n())));
            }
            let mut oracle = FaultyOracle::new(truth.clone(), delta, common.seed)?;
            if let Some(path) = &transcript {
                let f = fs::File::create(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
                oracle = oracle.with_transcript(Box::new(std::io::BufWriter::new(f)));
            }
            let cfg = NoisyConfig {
                recovery: recovery_config(&common, k_prime_override),
                ..NoisyConfig::for_profile(common.profile, s, common.seed)
            };
            let result = noisy_clustering(&oracle, n, delta, &cfg)?;
            if let Some(path) = trace {
                let doc = json!({
                    "command": "noisy",
                    "profile": common.profile,
                    "seed": common.seed,
                    "delta": delta,
                    "config": cfg,
                    "stats": result.stats,
                    "last_status": result.last_status,
                    "traces": result.traces,
                });
                write(&path, &serde_json::to_string_pretty(&doc)?)?;
            }
            emit_clusters(out.as_deref(), &common, &result.clusters)?;
            let st = &result.stats;
            let trivial = (n as u64) * (n as u64).saturating_sub(1) / 2;
            let e = evaluate_recovery(&result.clusters, &truth);
            eprintln!("profile: {}", common.profile);
            eprintln!("clusters: {} exact: {} partial: {}", result.clusters.len(), e.exact, e.partial);
            eprintln!("sample_size: {} rounds: {} vote_size: {}", st.sample_size, st.rounds, st.vote_size);
            eprintln!("total_queries: {}", st.total);
            eprintln!("distinct_queries: {}", st.distinct);
            eprintln!("budget_bound: {}", st.budget_bound);
            if st.budget_exceeds_trivial {
                eprintln!("note: the sample covers all of V, so the query bound is no better than n(n-1)/2");
            }
            let cmp = if st.distinct < trivial { "<" } else { ">=" };
            eprintln!("distinct_queries {cmp} {trivial}");
            match result.last_status {
                Some(status) if result.clusters.is_empty() => Err(Failure::NotFound(status_text(status).into())),
                _ => Ok(()),
            }
        }
        Command::Experiment {
            spec,
            repeats,
            profile,
            json,
            markdown,
            csv,
        } => {
            let mut specs = parse_experiment_specs(&read(&spec)?)?;
            for s in &mut specs {
                if let Some(r) = repeats {
                    if r == 0 {
                        return Err(Failure::Invalid("--repeats must be at least 1".into()));
                    }
                    s.repeats = r;
                }
                if let Some(p) = profile {
                    s.profile = p;
                }
            }
            let report = run_suite(&specs, threads);
            let md = report.to_markdown();
            print!("{md}");
            if let Some(p) = json {
                write(&p, &serde_json::to_string_pretty(&report)?)?;
            }
            if let Some(p) = markdown {
                write(&p, &md)?;
            }
            if let Some(p) = csv {
                write(&p, &report.to_csv())?;
            }
            Ok(())
        }
        Command::Verify { seed, quick, json } => {
            let opts = if quick {
                VerifyOptions::quick(seed)
            } else {
                VerifyOptions::full(seed)
            };
            let report = run_verification(opts)?;
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(p) = json {
                write(&p, &serde_json::to_string_pretty(&report)?)?;
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::NotFound("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotFound(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
