//! Shared fixtures for the integration tests.
//!
//! Each test binary compiles this module separately, so not every
//! helper is used from every binary.
#![allow(dead_code)]

use rolegraph::{ConnectionSnapshot, GroupId, HostId, Partitioning};
use std::collections::BTreeSet;

pub fn host(name: &str) -> HostId {
    HostId::new(name).expect("valid host id")
}

pub fn hosts(names: &[&str]) -> BTreeSet<HostId> {
    names.iter().map(|n| host(n)).collect()
}

/// Builds a snapshot from string pairs; the host set is exactly the
/// mentioned endpoints.
pub fn net(label: &str, pairs: &[(&str, &str)]) -> ConnectionSnapshot {
    ConnectionSnapshot::from_connections(
        label,
        pairs.iter().map(|(a, b)| (host(a), host(b))),
    )
    .expect("valid snapshot")
}

/// The two-department example network: Mail and Web serve every client,
/// SalesDatabase serves the sales clients, SourceRevisionControl serves
/// the engineering clients. `m` sales and `n` engineering clients.
pub fn department_net(m: u32, n: u32) -> ConnectionSnapshot {
    ConnectionSnapshot::new(
        format!("departments-{m}-{n}"),
        department_hosts(m, n),
        department_edges(m, n),
    )
    .expect("valid snapshot")
}

pub fn department_hosts(m: u32, n: u32) -> BTreeSet<HostId> {
    let mut all = hosts(&["Mail", "Web", "SalesDatabase", "SourceRevisionControl"]);
    for i in 1..=m {
        all.insert(host(&format!("Sales-{i}")));
    }
    for j in 1..=n {
        all.insert(host(&format!("Eng-{j}")));
    }
    all
}

pub fn department_edges(m: u32, n: u32) -> Vec<(HostId, HostId)> {
    let mut edges = Vec::new();
    for i in 1..=m {
        let c = format!("Sales-{i}");
        for s in ["Mail", "Web", "SalesDatabase"] {
            edges.push((host(&c), host(s)));
        }
    }
    for j in 1..=n {
        let c = format!("Eng-{j}");
        for s in ["Mail", "Web", "SourceRevisionControl"] {
            edges.push((host(&c), host(s)));
        }
    }
    edges
}

/// Members of a group as plain strings, for terse assertions.
pub fn members_of(partitioning: &Partitioning, id: u64) -> Vec<String> {
    partitioning
        .get(GroupId(id))
        .expect("group exists")
        .members
        .iter()
        .map(|h| h.to_string())
        .collect()
}

pub fn k_of(partitioning: &Partitioning, id: u64) -> u32 {
    partitioning.get(GroupId(id)).expect("group exists").k_value
}
