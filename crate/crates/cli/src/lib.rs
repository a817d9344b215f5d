//! Support library for the `rolegraph` command-line tool: text formats
//! (edge lists, partitioning documents), synthetic network generators,
//! parameter sweeps, and the command pipelines the binary dispatches to.

pub mod commands;
pub mod edge_list;
pub mod errors;
pub mod partition_doc;
pub mod report;
pub mod sweep;
pub mod synth;
