//! Discrete edge curvature on undirected graphs, curvature-driven rewiring
//! (stochastic discrete Ricci flow), an audit of the edges it selects against
//! the oversquashing bottleneck conditions, a small message-passing network
//! for checking the Jacobian bound numerically, and the statistics used to
//! evaluate rewiring.

pub mod audit;
pub mod components;
pub mod curvature;
pub mod error;
pub mod graph;
pub mod io;
pub mod mpnn;
pub mod rewiring;
pub mod stats;

pub use audit::{audit_edge, audit_rewiring, AuditRecord, AuditReport, AuditSummary};
pub use components::largest_connected_component;
pub use curvature::{
    curvature, curvature_distribution, edge_local_stats, CurvatureKind, EdgeCurvature, EdgeLocalStats,
};
pub use error::{Error, Result};
pub use graph::{Graph, LabeledGraph};
pub use io::{load_edge_list, IdMap, LoadedGraph};
pub use mpnn::{verify_sensitivity_bound, BoundReport, MpnnConfig};
pub use rewiring::{sdrf, softmax_sample, RewiringTrace, SdrfParams};
pub use stats::{homophily, saturation_analysis, spectral_gap, top_fraction_summary, wasserstein_1d, SampleSet};
