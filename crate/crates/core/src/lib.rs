//! Classify enterprise-network hosts into roles from observed connection
//! patterns.
//!
//! The pipeline has three stages, each usable on its own:
//!
//! 1. **Formation** ([`form_groups`]): condense role groups out of a
//!    [`ConnectionSnapshot`] by extracting biconnected components from
//!    common-neighbor graphs at decreasing thresholds.
//! 2. **Merging** ([`merge_pass`]): collapse groups whose per-member
//!    connection profiles overlap under tunable thresholds.
//! 3. **Correlation** ([`correlate`]): match the groups of one run with
//!    the groups of an earlier run over a drifting host population.
//!
//! [`rand_statistic`] scores a produced partitioning against a reference
//! one, and [`partition_diff`] summarizes drift between correlated runs.
//! All algorithms are deterministic: identical inputs produce identical
//! outputs, with no dependence on hash iteration order.

mod bcc;
mod conn_graph;
mod correlation;
mod error;
mod evaluation;
mod formation;
mod merging;
mod partition;
mod similarity;
mod snapshot;

pub use bcc::find_bccs;
pub use conn_graph::{neighborhood_graph, neighborhood_graph_over, ConnGraph, NeighborhoodGraph};
pub use correlation::{
    align_snapshots, compute_h_same, correlate, pair_neighbors, time_varying_similarity,
    CorrelationConfig, CorrelationResult,
};
pub use error::{Error, Result};
pub use evaluation::{
    partition_diff, rand_counts, rand_statistic, DiffReport, GroupChange, RandCounts,
};
pub use formation::{
    form_groups, resolve_shared_members, FormationConfig, FormationEvent, FormationOutcome,
    GroupOrigin,
};
pub use merging::{merge_pass, GroupGraph, MergeConfig, MergeEvent, MergeOutcome};
pub use partition::{Group, GroupId, Partitioning};
pub use similarity::{avg_similarity, pair_similarity};
pub use snapshot::{ordered_pair, ConnectionSnapshot, HostId};
