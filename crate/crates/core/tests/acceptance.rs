//! Acceptance gate: every criterion at its stated tolerance, one line each.
//!
//! Seeds: trial `i` samples its graph (or oracle) with seed `1000 + i` and runs
//! the algorithm with seed `i`. Reference quantities are computed here rather
//! than taken from the library: nalgebra's built-in SVD, direct edge lookups and
//! set comparisons against the planted labels.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sbm_recovery::harness::ml_bruteforce_partition;
use sbm_recovery::oracle::{noisy_clustering, FaultyOracle, NoisyConfig};
use sbm_recovery::recovery::{
    cluster_once, estimate_size, identify_cluster, passes_purity_test, recursive_cluster, FourWayPartition,
    RecoveryConfig, VoteScale,
};
use sbm_recovery::spectral::{top_left_singular_basis_dense, SubspaceOptions};
use sbm_recovery::{sample_sbm, Graph, GroundTruth, SbmSpec, VertexSet};

const GRAPH_SEED: u64 = 1000;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn truth_sets(truth: &GroundTruth) -> Vec<BTreeSet<usize>> {
    let mut sets = vec![BTreeSet::new(); truth.k()];
    for (v, &l) in truth.labels().iter().enumerate() {
        sets[l].insert(v);
    }
    sets
}

/// Sizes of the emitted sets that equal a planted cluster, and the number that do not.
fn score(found: &[Vec<usize>], truth: &GroundTruth) -> (Vec<usize>, usize) {
    let planted = truth_sets(truth);
    let mut exact = Vec::new();
    let mut other = 0;
    for s in found {
        let s: BTreeSet<usize> = s.iter().copied().collect();
        if !s.is_empty() && planted.contains(&s) {
            exact.push(s.len());
        } else {
            other += 1;
        }
    }
    exact.sort_unstable_by(|a, b| b.cmp(a));
    (exact, other)
}

fn count_into(g: &Graph, v: usize, set: &VertexSet) -> usize {
    set.iter().filter(|&u| g.has_edge(v, u)).count()
}

struct PeelRun {
    exact: Vec<usize>,
    other: usize,
}

fn peel_trials(sizes: &[usize], p: f64, q: f64, trials: usize) -> (Vec<PeelRun>, Duration) {
    let start = Instant::now();
    let runs = (0..trials)
        .map(|i| {
            let spec = SbmSpec::new(sizes.to_vec(), p, q, GRAPH_SEED + i as u64).unwrap();
            let (g, truth) = sample_sbm(&spec).unwrap();
            match recursive_cluster(&g, p, q, &RecoveryConfig::empirical(i as u64)) {
                Ok(out) => {
                    let (exact, other) = score(&out.clusters, &truth);
                    PeelRun { exact, other }
                }
                Err(e) => {
                    eprintln!("  trial {i}: {e}");
                    PeelRun { exact: Vec::new(), other: usize::MAX }
                }
            }
        })
        .collect();
    (runs, start.elapsed())
}

fn has_top(run: &PeelRun, want: &[usize]) -> bool {
    run.exact.len() >= want.len() && run.exact[..want.len()] == *want
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn criterion_1() -> Verdict {
    let limit = Duration::from_secs(120);
    let (r1, t1) = peel_trials(&[800, 200, 80, 20], 0.7, 0.3, 10);
    let e1 = r1.iter().filter(|r| has_top(r, &[800])).count();
    let (r3, t3) = peel_trials(&[500, 150, 70, 30], 0.8, 0.2, 10);
    let e3 = r3.iter().filter(|r| has_top(r, &[500]) && r.other == 0).count();
    let (r4, t4) = peel_trials(&[500, 200, 70, 30], 0.8, 0.2, 10);
    let e4 = r4.iter().filter(|r| has_top(r, &[500, 200])).count();
    let passed = e1 >= 8 && e3 >= 8 && e4 >= 8 && t1 < limit && t3 < limit && t4 < limit;
    verdict(
        passed,
        format!(
            "Exp-1 largest {e1}/10 in {}, Exp-3 largest with no partial {e3}/10 in {}, Exp-4 two largest {e4}/10 in {}",
            secs(t1),
            secs(t3),
            secs(t4)
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut exp5 = vec![1000, 903];
    exp5.extend(std::iter::repeat_n(1, 997));
    let (r5, t5) = peel_trials(&exp5, 0.7, 0.3, 10);
    let e5 = r5.iter().filter(|r| r.exact.contains(&1000) && r.exact.contains(&903)).count();
    let (r6, t6) = peel_trials(&[12000, 100, 100, 100], 0.85, 0.15, 10);
    let e6 = r6.iter().filter(|r| has_top(r, &[12000, 100, 100, 100])).count();
    let limit = Duration::from_secs(15 * 60);
    verdict(
        e5 >= 8 && e6 >= 8 && t5 < limit && t6 < limit,
        format!("Exp-5 both large {e5}/10 in {}, Exp-6 all four {e6}/10 in {}", secs(t5), secs(t6)),
    )
}

fn criterion_3() -> Verdict {
    let mut ratios = Vec::new();
    for i in 0..20 {
        let spec = SbmSpec::new(vec![800, 200, 80, 20], 0.7, 0.3, GRAPH_SEED + i).unwrap();
        let (g, _) = sample_sbm(&spec).unwrap();
        let out = cluster_once(&g, 0.7, 0.3, &RecoveryConfig::empirical(i)).unwrap();
        ratios.push(out.trace.s_prime.map_or(f64::NAN, |s| s / 800.0));
    }
    let inside = ratios.iter().filter(|r| (0.40..=0.60).contains(*r)).count();
    let outliers: Vec<String> = ratios
        .iter()
        .enumerate()
        .filter(|(_, r)| !(0.40..=0.60).contains(*r))
        .map(|(i, r)| format!("seed {i}: {r:.3}"))
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    verdict(
        inside >= 18,
        format!("{inside}/20 in [0.40, 0.60], mean {mean:.3}; outside: {}", outliers.join(", ")),
    )
}

fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(GRAPH_SEED);
    let (mut violations, mut worst) = (0, 0.0f64);
    for _ in 0..1000 {
        let n = rng.random_range(2..=500);
        let k = rng.random_range(1..=8);
        let p: f64 = rng.random_range(0.01..=1.0);
        let q = rng.random_range(0.0..p);
        // every vertex lands in one cluster and on one side, with both sides non-empty
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for v in 0..n {
            let c = rng.random_range(0..k);
            if v == 0 || (v > 1 && rng.random_bool(0.5)) {
                rows.push(c);
            } else {
                cols.push(c);
            }
        }
        let a = DMatrix::from_fn(rows.len(), cols.len(), |i, j| if rows[i] == cols[j] { p } else { q });
        for (idx, s) in sorted_singular_values(&a).into_iter().enumerate().skip(1) {
            let t = (idx + 1) as f64;
            let bound = (p - q) * n as f64 / t;
            if bound > 0.0 {
                worst = worst.max(s / bound);
            }
            if s > bound * (1.0 + 1e-9) {
                violations += 1;
            }
        }
    }
    let took = start.elapsed();
    verdict(
        violations == 0 && took < Duration::from_secs(60),
        format!("1000 matrices, {violations} violations, largest sigma_t / bound {worst:.3}, {}", secs(took)),
    )
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(GRAPH_SEED + 5);
    let (mut compared, mut failed, mut worst) = (0, 0, 0.0f64);
    for t in 0..200u64 {
        let (m, c) = (rng.random_range(2..=80), rng.random_range(2..=60));
        let density = rng.random_range(0.05..0.95);
        let a = DMatrix::from_fn(m, c, |_, _| f64::from(u8::from(rng.random_bool(density))));
        let k = rng.random_range(1..=m.min(c).min(16));
        let svd = a.clone().svd(true, false);
        let u = svd.u.expect("left vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let next = sv.get(k).copied().unwrap_or(0.0);
        if sv[k - 1] - next <= 1e-3 {
            continue;
        }
        compared += 1;
        let reference = DMatrix::from_fn(m, k, |i, j| u[(i, order[j])]);
        let opts = SubspaceOptions { max_iterations: 1000, ..SubspaceOptions::new(1e-10, t) };
        let sin = match top_left_singular_basis_dense(&a, k, opts) {
            Ok(b) => {
                let outside = b.basis() - &reference * reference.tr_mul(b.basis());
                outside.singular_values().max()
            }
            Err(e) => {
                eprintln!("  matrix {t} ({m}x{c}, k={k}): {e}");
                f64::INFINITY
            }
        };
        worst = worst.max(sin);
        if !(sin < 1e-6) {
            failed += 1;
        }
    }
    verdict(
        compared > 0 && failed == 0,
        format!("{compared}/200 matrices with gap > 1e-3 compared, {failed} with angle >= 1e-6, worst sin {worst:.1e}"),
    )
}

fn criterion_6() -> Verdict {
    let (p, q) = (0.7, 0.3);
    let mut hits = 0;
    for i in 0..20u64 {
        let spec = SbmSpec::new(vec![1200, 400, 400], p, q, GRAPH_SEED + i).unwrap();
        let (g, truth) = sample_sbm(&spec).unwrap();
        let cfg = RecoveryConfig::empirical(i);
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let part = FourWayPartition::sample(g.n(), &mut rng).unwrap();
        let planted = truth_sets(&truth);
        let in_y2 = |c: usize| -> Vec<usize> { planted[c].iter().copied().filter(|&v| part.y2.contains(v)).collect() };
        // S: all of V_0 in Y2, plus exactly a tenth as many from each other cluster
        let core = in_y2(0);
        let mut s = VertexSet::from_vertices(g.n(), core.iter().copied()).unwrap();
        for c in 1..planted.len() {
            let others = in_y2(c);
            let take = (core.len() / 10).min(others.len());
            for idx in sample(&mut rng, others.len(), take) {
                s.insert(others[idx]);
            }
        }
        let s_ref = match cfg.thresholds.vote_scale {
            VoteScale::BallSize => s.len() as f64,
            VoteScale::SizeEstimate => estimate_size(&g, &part, p, q, &cfg).unwrap().s_prime,
        };
        let t = identify_cluster(&g, &s, &part.w, s_ref, p, q, cfg.thresholds.vote_fraction).unwrap();
        let want: BTreeSet<usize> = planted[0].iter().copied().filter(|&v| part.w.contains(v)).collect();
        hits += usize::from(t.iter().collect::<BTreeSet<_>>() == want);
    }
    verdict(hits >= 19, format!("T = V_i ∩ W in {hits}/20"))
}

fn criterion_7() -> Verdict {
    let (p, q) = (0.9, 0.1);
    let mut rejected = [0; 2];
    let mut accepted = [0; 2];
    for i in 0..20u64 {
        let spec = SbmSpec::new(vec![200, 200, 200, 200], p, q, GRAPH_SEED + i).unwrap();
        let (g, truth) = sample_sbm(&spec).unwrap();
        let n = g.n();
        let planted = truth_sets(&truth);
        let w = VertexSet::full(n);
        let merged = VertexSet::from_vertices(n, planted[0].iter().chain(&planted[1]).copied()).unwrap();
        let single = VertexSet::from_vertices(n, planted[2].iter().copied()).unwrap();
        // s' tracks |V_i ∩ W| of the largest cluster, here 200. The gate uses the
        // empirical constants; the theory ones are reported alongside.
        for (slot, cfg) in [RecoveryConfig::empirical(i), RecoveryConfig::theory(i)].iter().enumerate() {
            let th = &cfg.thresholds;
            rejected[slot] += usize::from(passes_purity_test(&g, &merged, &w, 200.0, p, q, th).unwrap().is_err());
            accepted[slot] += usize::from(passes_purity_test(&g, &single, &w, 200.0, p, q, th).unwrap().is_ok());
            // the library's verdict agrees with a direct degree scan
            let (a, b) = th.purity_mix;
            let cut = (a * p + b * q) * single.len() as f64;
            let direct = single.iter().all(|v| count_into(&g, v, &single) as f64 > cut)
                && w.difference(&single).iter().all(|v| (count_into(&g, v, &single) as f64) < cut);
            assert_eq!(direct, passes_purity_test(&g, &single, &w, 200.0, p, q, th).unwrap().is_ok());
        }
    }
    verdict(
        rejected[0] >= 19 && accepted[0] >= 19,
        format!(
            "union of two rejected {}/20, single cluster accepted {}/20; with theory constants {}/20 and {}/20",
            rejected[0], accepted[0], rejected[1], accepted[1]
        ),
    )
}

fn criterion_8() -> Verdict {
    // persistence under an adaptive query sequence with many repeats
    let truth = GroundTruth::from_labels((0..200).map(|v| v % 3).collect()).unwrap();
    let oracle = FaultyOracle::new(truth, 0.3, GRAPH_SEED).unwrap();
    let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(GRAPH_SEED);
    let mut changed = 0;
    let (mut u, mut v) = (0usize, 1usize);
    for _ in 0..10_000 {
        let ans = oracle.query(u, v).unwrap();
        if *seen.entry((u.min(v), u.max(v))).or_insert(ans) != ans {
            changed += 1;
        }
        // the next pair depends on the answer just given
        if ans || seen.len() < 20 {
            v = (v + 1 + usize::from(ans)) % 200;
            if v == u {
                v = (v + 1) % 200;
            }
        } else {
            let keys: Vec<_> = seen.keys().copied().collect();
            (u, v) = keys[rng.random_range(0..keys.len())];
        }
    }
    let repeats = 10_000 - seen.len();

    // '+' rate on same-cluster pairs
    let mut rates = Vec::new();
    for delta in [0.2, 0.5, 0.8] {
        let o = FaultyOracle::new(GroundTruth::from_labels(vec![0; 500]).unwrap(), delta, GRAPH_SEED).unwrap();
        let mut plus = 0usize;
        let mut asked = 0usize;
        'outer: for a in 0..500 {
            for b in a + 1..500 {
                plus += usize::from(o.query(a, b).unwrap());
                asked += 1;
                if asked == 100_000 {
                    break 'outer;
                }
            }
        }
        rates.push((delta, plus as f64 / asked as f64));
    }
    let rates_ok = rates.iter().all(|&(d, r)| (r - (1.0 + d) / 2.0).abs() <= 0.02);

    // positive-answer graph on a sampled T versus sample_sbm, block by block
    let (delta, sizes, t_size) = (0.5, vec![60usize, 40], 50usize);
    let (p, q) = ((1.0 + delta) / 2.0, (1.0 - delta) / 2.0);
    let mut oracle_counts = [(0usize, 0usize); 2];
    let mut sbm_counts = [(0usize, 0usize); 2];
    for seed in 0..50u64 {
        let spec = SbmSpec::new(sizes.clone(), p, q, GRAPH_SEED + seed).unwrap();
        let truth = spec.ground_truth();
        let o = FaultyOracle::new(truth.clone(), delta, GRAPH_SEED + seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t: Vec<usize> = sample(&mut rng, truth.n(), t_size).into_vec();
        t.sort_unstable();
        let pg = o.positive_graph(&t).unwrap();
        let (g, _) = sample_sbm(&spec).unwrap();
        for (i, &a) in t.iter().enumerate() {
            for (j, &b) in t.iter().enumerate().skip(i + 1) {
                let block = usize::from(truth.label(a) != truth.label(b));
                oracle_counts[block].0 += usize::from(pg.has_edge(i, j));
                oracle_counts[block].1 += 1;
                sbm_counts[block].0 += usize::from(g.has_edge(a, b));
                sbm_counts[block].1 += 1;
            }
        }
    }
    let mut blocks_ok = true;
    let mut block_detail = Vec::new();
    for (block, expect) in [(0, p), (1, q)] {
        let (e1, n1) = oracle_counts[block];
        let (e2, n2) = sbm_counts[block];
        let (d1, d2) = (e1 as f64 / n1 as f64, e2 as f64 / n2 as f64);
        let sigma = (expect * (1.0 - expect) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
        let own = (expect * (1.0 - expect) / n1 as f64).sqrt();
        blocks_ok &= (d1 - d2).abs() <= 4.0 * sigma && (d1 - expect).abs() <= 4.0 * own;
        block_detail.push(format!("{d1:.4} vs {d2:.4}"));
    }
    let rate_text: Vec<String> = rates.iter().map(|(d, r)| format!("delta {d}: {r:.4}")).collect();
    verdict(
        changed == 0 && rates_ok && blocks_ok,
        format!(
            "{changed} changed answers over {repeats} repeats; '+' rates {}; block densities oracle vs SBM {}",
            rate_text.join(", "),
            block_detail.join(" / ")
        ),
    )
}

fn criterion_9() -> Verdict {
    let (n, delta, s) = (3000usize, 0.5, 1200usize);
    let mut sizes = vec![1200];
    sizes.extend(std::iter::repeat_n(1, 1800));
    let trivial = (n * (n - 1) / 2) as u64;
    let vote = (4.0 * (n as f64).ln() / (delta * delta)).ceil() as u64;
    let (mut exact, mut under, mut budget_ok) = (0, 0, 0);
    let mut max_distinct = 0;
    for i in 0..10u64 {
        let truth = SbmSpec::new(sizes.clone(), 1.0, 0.0, 0).unwrap().ground_truth();
        let oracle = FaultyOracle::new(truth.clone(), delta, GRAPH_SEED + i).unwrap();
        let cfg = NoisyConfig::empirical(s, i);
        let out = match noisy_clustering(&oracle, n, delta, &cfg) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("  trial {i}: {e}");
                continue;
            }
        };
        let (found, _) = score(&out.clusters, &truth);
        exact += usize::from(found.contains(&1200));
        let distinct = oracle.distinct_queries();
        max_distinct = max_distinct.max(distinct);
        under += usize::from(distinct < trivial);
        let t = out.stats.sample_size as u64;
        let raw = ((cfg.c_oracle * n as f64 * (n as f64).ln()) / (s as f64 * delta)).powi(2).ceil();
        let t_expected = if raw >= n as f64 { n as u64 } else { raw as u64 };
        let bound = t * (t - 1) / 2 + out.stats.rounds as u64 * vote * n as u64;
        budget_ok += usize::from(t == t_expected && distinct <= bound);
    }
    verdict(
        exact >= 8 && under == 10 && budget_ok == 10,
        format!(
            "exact {exact}/10, distinct < {trivial} in {under}/10 (max {max_distinct}), budget invariant {budget_ok}/10"
        ),
    )
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.len() == b.len()
        && a.iter().zip(b).all(|(&x, &y)| *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x)
}

fn criterion_10() -> Verdict {
    let (p, q) = (0.95, 0.05);
    let mut agree = 0;
    for i in 0..20 {
        let spec = SbmSpec::new(vec![5, 5], p, q, GRAPH_SEED + i).unwrap();
        let (g, truth) = sample_sbm(&spec).unwrap();
        let ml = ml_bruteforce_partition(&g, p, q, 12, 3).unwrap();
        agree += usize::from(same_partition(ml.labels(), truth.labels()));
    }
    verdict(agree >= 18, format!("ML partition equals planted truth in {agree}/20"))
}

fn criterion_11() -> Verdict {
    let (p, q) = (0.7, 0.3);
    let mut points = Vec::new();
    for n in [1000usize, 2000, 4000] {
        let mut times = Vec::new();
        for i in 0..5u64 {
            let spec = SbmSpec::new(vec![n / 2, n / 4, n - n / 2 - n / 4], p, q, GRAPH_SEED + i).unwrap();
            let (g, _) = sample_sbm(&spec).unwrap();
            let cfg = RecoveryConfig::empirical(i);
            let start = Instant::now();
            let _ = cluster_once(&g, p, q, &cfg);
            times.push(start.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        points.push(((n as f64).ln(), times[times.len() / 2]));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = num / den;
    let medians: Vec<String> = points.iter().map(|p| format!("{:.3}s", p.1)).collect();
    verdict(slope <= 2.8, format!("slope {slope:.2}; medians {}", medians.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("small planted partitions", criterion_1),
        ("singletons and a dominant cluster", criterion_2),
        ("size estimator band", criterion_3),
        ("singular-value bound", criterion_4),
        ("truncated SVD fidelity", criterion_5),
        ("identify from a plural set", criterion_6),
        ("purity test soundness", criterion_7),
        ("oracle model fidelity", criterion_8),
        ("sublinear-query recovery", criterion_9),
        ("brute-force oracle agreement", criterion_10),
        ("runtime scaling", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!("criterion {:>2} {}: {} ({})", i + 1, name, if v.passed { "PASS" } else { "FAIL" }, v.detail);
        if !v.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
