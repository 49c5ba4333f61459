use std::collections::BTreeSet;

use sbm_recovery::harness::{parse_experiment_specs, run_spec};
use sbm_recovery::recovery::{cluster_once, dominant_cluster, recursive_cluster, PeelStop, RecoveryConfig};
use sbm_recovery::{sample_sbm, GroundTruth, SbmSpec};

fn planted(truth: &GroundTruth) -> Vec<BTreeSet<usize>> {
    (0..truth.k()).map(|i| truth.cluster(i).iter().collect()).collect()
}

#[test]
fn emitted_sets_are_disjoint_planted_clusters() {
    let cases: [(&[usize], f64, f64); 3] =
        [(&[800, 200, 80, 20], 0.7, 0.3), (&[500, 150, 70, 30], 0.8, 0.2), (&[500, 200, 70, 30], 0.8, 0.2)];
    for (sizes, p, q) in cases {
        for i in 0..3u64 {
            let (g, truth) = sample_sbm(&SbmSpec::new(sizes.to_vec(), p, q, 1000 + i).unwrap()).unwrap();
            let out = recursive_cluster(&g, p, q, &RecoveryConfig::empirical(i)).unwrap();
            let clusters = planted(&truth);
            let mut seen = BTreeSet::new();
            for c in &out.clusters {
                let set: BTreeSet<usize> = c.iter().copied().collect();
                assert!(clusters.contains(&set), "{sizes:?} seed {i}: emitted a set of size {}", set.len());
                assert!(set.iter().all(|v| seen.insert(*v)), "overlapping output");
            }
            assert!(!out.clusters.is_empty());
        }
    }
}

#[test]
fn reruns_are_identical() {
    let (g, _) = sample_sbm(&SbmSpec::new(vec![500, 200, 70, 30], 0.8, 0.2, 3).unwrap()).unwrap();
    let cfg = RecoveryConfig::empirical(11);
    let a = recursive_cluster(&g, 0.8, 0.2, &cfg).unwrap();
    let b = recursive_cluster(&g, 0.8, 0.2, &cfg).unwrap();
    assert_eq!(a.clusters, b.clusters);
    assert_eq!(serde_json::to_string(&a.traces).unwrap(), serde_json::to_string(&b.traces).unwrap());
}

#[test]
fn singletons_stop_at_the_size_gate() {
    let (g, _) = sample_sbm(&SbmSpec::new(vec![1; 300], 0.7, 0.3, 0).unwrap()).unwrap();
    let out = recursive_cluster(&g, 0.7, 0.3, &RecoveryConfig::empirical(0)).unwrap();
    assert!(out.clusters.is_empty());
    assert_eq!(out.stop, PeelStop::NoCluster(sbm_recovery::recovery::ClusterStatus::SizeGateRejected));
}

#[test]
fn successful_balls_are_plural_sets() {
    let (mut successes, mut plural) = (0, 0);
    for i in 0..20u64 {
        let (g, truth) = sample_sbm(&SbmSpec::new(vec![800, 200, 80, 20], 0.7, 0.3, 1000 + i).unwrap()).unwrap();
        let out = cluster_once(&g, 0.7, 0.3, &RecoveryConfig::empirical(i)).unwrap();
        if let Some(c) = out.candidate {
            successes += 1;
            plural += usize::from(dominant_cluster(&c.s_set, &truth).is_some());
        }
    }
    assert!(successes > 0);
    assert!(100 * plural >= 95 * successes, "{plural}/{successes} balls were plural sets");
}

#[test]
fn suite_reports_are_deterministic_and_consistent() {
    let specs = parse_experiment_specs(
        r#"{"experiments": [{"name": "Exp-3", "sizes": [500, 150, 70, 30], "p": 0.8, "q": 0.2,
            "repeats": 3, "expect": "largest exact"}]}"#,
    )
    .unwrap();
    let a = run_spec(&specs[0], 1);
    let b = run_spec(&specs[0], 2);
    assert_eq!(a.passes, b.passes);
    assert_eq!(a.passes, a.trials.iter().filter(|t| t.passed).count());
    for (x, y) in a.trials.iter().zip(&b.trials) {
        assert_eq!((x.trial, x.graph_seed, &x.recovered_sizes), (y.trial, y.graph_seed, &y.recovered_sizes));
    }
    assert_eq!(a.trials[2].graph_seed, 1002);
}
