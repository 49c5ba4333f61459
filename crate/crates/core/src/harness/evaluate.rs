use serde::Serialize;

use crate::graph::VertexSet;
use crate::sbm::GroundTruth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "cluster")]
pub enum SetClass {
    /// Equal to the given ground-truth cluster.
    Exact(usize),
    /// A proper subset of one cluster, or a set meeting two or more clusters.
    Partial,
    /// Empty.
    Spurious,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryEvaluation {
    pub classes: Vec<SetClass>,
    /// Indices of truth clusters matched exactly, in emission order.
    pub exact_clusters: Vec<usize>,
    pub exact: usize,
    pub partial: usize,
    pub spurious: usize,
    /// Over non-exact sets: `|S Δ V_i|` against the cluster meeting `S` most.
    pub misclassified: usize,
}

impl RecoveryEvaluation {
    pub fn is_clean(&self) -> bool {
        self.partial == 0 && self.spurious == 0
    }
}

/// Classifies each emitted set against the planted partition. Ids at or beyond
/// `truth.n()` are ignored.
pub fn evaluate_recovery(found: &[Vec<usize>], truth: &GroundTruth) -> RecoveryEvaluation {
    let n = truth.n();
    let clusters = truth.clusters();
    let mut eval = RecoveryEvaluation {
        classes: Vec::with_capacity(found.len()),
        exact_clusters: Vec::new(),
        exact: 0,
        partial: 0,
        spurious: 0,
        misclassified: 0,
    };
    for set in found {
        let mut s = VertexSet::empty(n);
        for &v in set.iter().filter(|&&v| v < n) {
            s.insert(v);
        }
        if s.is_empty() {
            eval.classes.push(SetClass::Spurious);
            eval.spurious += 1;
            continue;
        }
        let first = truth.label(s.iter().next().expect("non-empty"));
        if s == clusters[first] {
            eval.classes.push(SetClass::Exact(first));
            eval.exact_clusters.push(first);
            eval.exact += 1;
            continue;
        }
        let best = (0..clusters.len())
            .max_by_key(|&i| (s.intersection_len(&clusters[i]), std::cmp::Reverse(i)))
            .expect("at least one cluster");
        let overlap = s.intersection_len(&clusters[best]);
        eval.misclassified += s.len() + clusters[best].len() - 2 * overlap;
        eval.classes.push(SetClass::Partial);
        eval.partial += 1;
    }
    eval
}

/// Whether two labelings describe the same partition, up to renaming labels.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd = std::collections::HashMap::new();
    let mut back = std::collections::HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x
    })
}
