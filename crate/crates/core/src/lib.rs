//! Exact recovery of large clusters in unbalanced stochastic block models.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`], [`sbm`], [`io`]: bit-packed graphs, planted-partition sampling and
//!   the plain-text file formats.
//! - [`spectral`]: bi-adjacency matrices and truncated singular subspaces.
//! - [`recovery`]: one-shot large-cluster recovery and recursive peeling.
//! - [`oracle`]: a persistent-noise same-cluster oracle and clustering with a
//!   sublinear number of queries.
//! - [`harness`]: experiment specs, outcome classification and reports.

pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod recovery;
pub mod sbm;
pub mod spectral;

mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use sbm::{sample_sbm, GroundTruth, SbmSpec};
