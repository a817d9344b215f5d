//! Correlating grouping runs taken at different times: role swaps,
//! server replacement, churned hosts, and roles that appear or vanish
//! between captures.

mod common;

use common::{department_net, host, hosts, k_of, members_of, net};
use rolegraph::{
    correlate, form_groups, merge_pass, ConnectionSnapshot, CorrelationConfig, Error,
    FormationConfig, GroupId, MergeConfig, Partitioning,
};
use std::collections::BTreeMap;

fn grouped(snapshot: &ConnectionSnapshot, merge: &MergeConfig) -> Partitioning {
    let formed = form_groups(snapshot, &FormationConfig::default()).unwrap();
    merge_pass(&formed.partitioning, snapshot, merge).unwrap().partitioning
}

fn mapping(pairs: &[(u64, u64)]) -> BTreeMap<GroupId, GroupId> {
    pairs.iter().map(|&(c, p)| (GroupId(c), GroupId(p))).collect()
}

/// A second capture of the department network after an eventful quarter:
/// the two department servers swapped roles, Mail was replaced by Mail2,
/// Sales-3 was decommissioned, and Eng-4 joined.
fn churned_departments() -> ConnectionSnapshot {
    let mut edges = Vec::new();
    for i in 1..=2 {
        let c = format!("Sales-{i}");
        for s in ["Mail2", "Web", "SourceRevisionControl"] {
            edges.push((host(&c), host(s)));
        }
    }
    for j in 1..=4 {
        let c = format!("Eng-{j}");
        for s in ["Mail2", "Web", "SalesDatabase"] {
            edges.push((host(&c), host(s)));
        }
    }
    ConnectionSnapshot::from_connections("departments-later", edges).unwrap()
}

#[test]
fn roles_survive_swap_replacement_and_churn() {
    let prev_snapshot = department_net(3, 3);
    // The stricter similarity profile for strong groups has to apply
    // from strength 5 here; see the companion test below for what the
    // stock profile does to this capture.
    let merge = MergeConfig { k_hi: 5, ..MergeConfig::default() };
    let prev = grouped(&prev_snapshot, &merge);
    assert_eq!(prev.len(), 5);

    let curr_snapshot = churned_departments();
    let curr = grouped(&curr_snapshot, &merge);
    assert_eq!(curr.len(), 5);
    assert_eq!(members_of(&curr, 0), ["Mail2", "Web"]);
    assert_eq!(members_of(&curr, 1), ["Eng-1", "Eng-2", "Eng-3", "Eng-4"]);
    assert_eq!(members_of(&curr, 2), ["Sales-1", "Sales-2"]);
    assert_eq!(members_of(&curr, 3), ["SalesDatabase"]);
    assert_eq!(k_of(&curr, 3), 2);
    assert_eq!(members_of(&curr, 4), ["SourceRevisionControl"]);

    let result = correlate(
        &prev_snapshot,
        &prev,
        &curr_snapshot,
        &curr,
        &CorrelationConfig::default(),
    )
    .unwrap();

    // Every current group finds its logical predecessor: the shared
    // servers map to the shared servers, each department to itself, and
    // the swapped department servers to each other's prior ids.
    assert_eq!(result.mapping, mapping(&[(0, 0), (1, 1), (2, 2), (3, 4), (4, 3)]));
    assert!(result.new_groups.is_empty());
    assert!(result.retired_groups.is_empty());
    // Only Web kept its connection set verbatim across the captures.
    assert_eq!(result.h_same, hosts(&["Web"]));
}

/// With the stock merge profile the churned capture degrades: the
/// engineering server's profile overlaps the shared servers' far enough
/// to pass the relaxed bar, so the strong shared-server group absorbs
/// it. Groups of strength 5 and up need the strict bar to stay apart.
#[test]
fn stock_profile_absorbs_the_swapped_server() {
    let snapshot = churned_departments();
    let merged = grouped(&snapshot, &MergeConfig::default());
    assert_eq!(merged.len(), 4);
    assert_eq!(members_of(&merged, 0), ["Mail2", "SalesDatabase", "Web"]);
}

#[test]
fn a_role_without_precedent_is_new() {
    let prev_snapshot = department_net(3, 3);
    let prev = grouped(&prev_snapshot, &MergeConfig::default());

    // The current capture adds a disconnected lab triangle.
    let mut edges: Vec<_> = snapshot_edges(&prev_snapshot);
    edges.push((host("Lab-1"), host("Lab-2")));
    edges.push((host("Lab-2"), host("Lab-3")));
    edges.push((host("Lab-1"), host("Lab-3")));
    let curr_snapshot = ConnectionSnapshot::from_connections("with-lab", edges).unwrap();
    let curr = grouped(&curr_snapshot, &MergeConfig::default());
    assert_eq!(curr.len(), 6);
    assert_eq!(members_of(&curr, 3), ["Lab-1", "Lab-2", "Lab-3"]);

    let result = correlate(
        &prev_snapshot,
        &prev,
        &curr_snapshot,
        &curr,
        &CorrelationConfig::default(),
    )
    .unwrap();
    assert_eq!(result.mapping, mapping(&[(0, 0), (1, 1), (2, 2), (4, 3), (5, 4)]));
    assert_eq!(result.new_groups, [GroupId(3)].into_iter().collect());
    assert!(result.retired_groups.is_empty());
}

#[test]
fn a_role_that_vanished_is_retired() {
    let mut edges = snapshot_edges(&department_net(3, 3));
    edges.push((host("Lab-1"), host("Lab-2")));
    edges.push((host("Lab-2"), host("Lab-3")));
    edges.push((host("Lab-1"), host("Lab-3")));
    let prev_snapshot = ConnectionSnapshot::from_connections("with-lab", edges).unwrap();
    let prev = grouped(&prev_snapshot, &MergeConfig::default());

    let curr_snapshot = department_net(3, 3);
    let curr = grouped(&curr_snapshot, &MergeConfig::default());

    let result = correlate(
        &prev_snapshot,
        &prev,
        &curr_snapshot,
        &curr,
        &CorrelationConfig::default(),
    )
    .unwrap();
    assert_eq!(result.mapping, mapping(&[(0, 0), (1, 1), (2, 2), (3, 4), (4, 5)]));
    assert!(result.new_groups.is_empty());
    assert_eq!(result.retired_groups, [GroupId(3)].into_iter().collect());
}

#[test]
fn disjoint_captures_cannot_be_correlated() {
    let prev_snapshot = net("a", &[("x", "y")]);
    let curr_snapshot = net("b", &[("p", "q")]);
    let prev = grouped(&prev_snapshot, &MergeConfig::default());
    let curr = grouped(&curr_snapshot, &MergeConfig::default());
    let err = correlate(
        &prev_snapshot,
        &prev,
        &curr_snapshot,
        &curr,
        &CorrelationConfig::default(),
    )
    .unwrap_err();
    assert_eq!(err, Error::EmptyAlignment);
}

fn snapshot_edges(snapshot: &ConnectionSnapshot) -> Vec<(rolegraph::HostId, rolegraph::HostId)> {
    snapshot.connections().iter().cloned().collect()
}
