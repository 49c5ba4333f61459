//! Exact recovery of large clusters and the peeling loop built on it.

mod cluster;
mod config;
mod estimate;
mod identify;
mod partition;
mod peel;
mod plural;
mod prominent;

pub use cluster::{
    cluster_once, CandidateCluster, ClusterOutcome, ClusterStatus, ClusterTrace, RoundTrace,
};
pub use config::{Profile, RecoveryConfig, Thresholds, VoteScale};
pub use estimate::{estimate_size, SizeEstimate};
pub use identify::{identify_cluster, passes_purity_test, PurityFailure};
pub use partition::{preprocess, FourWayPartition, PartitionSizes, Preprocessed};
pub use peel::{recursive_cluster, PeelOutcome, PeelStop};
pub use plural::{dominant_cluster, is_plural_set};
pub use prominent::prominent_cluster_count;
