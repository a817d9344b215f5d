//! The edge-list text format: one "src,dst" connection per line.
//!
//! Lines starting with "#" are comments, except the "#host <id>"
//! directive, which declares a host with no connections — a plain edge
//! list has no other way to express one.

use crate::errors::{CliError, CliResult};
use rolegraph::{ConnectionSnapshot, HostId};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Parses an edge list into a snapshot labeled `label`.
pub fn parse_edge_list(label: &str, text: &str) -> CliResult<ConnectionSnapshot> {
    let mut hosts: BTreeSet<HostId> = BTreeSet::new();
    let mut connections: Vec<(HostId, HostId)> = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let number = number + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#host") {
            let token = rest.trim();
            if token.is_empty() {
                return Err(CliError::Validation(format!(
                    "line {number}: #host directive needs a host id"
                )));
            }
            let host = HostId::new(token)
                .map_err(|e| CliError::Validation(format!("line {number}: {e}")))?;
            hosts.insert(host);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',');
        let (src, dst) = match (fields.next(), fields.next(), fields.next()) {
            (Some(src), Some(dst), None) => (src.trim(), dst.trim()),
            _ => {
                return Err(CliError::Validation(format!(
                    "line {number}: expected exactly two host tokens separated by a comma"
                )))
            }
        };
        let src = HostId::new(src)
            .map_err(|e| CliError::Validation(format!("line {number}: {e}")))?;
        let dst = HostId::new(dst)
            .map_err(|e| CliError::Validation(format!("line {number}: {e}")))?;
        if src == dst {
            return Err(CliError::Validation(format!(
                "line {number}: a host cannot connect to itself ({src})"
            )));
        }
        hosts.insert(src.clone());
        hosts.insert(dst.clone());
        connections.push((src, dst));
    }
    ConnectionSnapshot::new(label, hosts, connections).map_err(CliError::from)
}

/// Renders a snapshot back into edge-list text: "#host" directives for
/// connectionless hosts, then the connections in canonical order.
pub fn render_edge_list(snapshot: &ConnectionSnapshot) -> String {
    let mut out = String::new();
    for host in snapshot.hosts() {
        if snapshot.degree(host).unwrap_or(0) == 0 {
            writeln!(out, "#host {host}").expect("string write");
        }
    }
    for (a, b) in snapshot.connections() {
        writeln!(out, "{a},{b}").expect("string write");
    }
    out
}
