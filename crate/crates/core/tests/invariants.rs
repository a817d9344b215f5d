//! Property-based invariants of the pipeline: similarity symmetry,
//! neighborhood-graph nesting, partition totality and disjointness,
//! determinism, merge monotonicity, agreement-count consistency, and
//! self-correlation identity.

mod common;

use common::host;
use proptest::prelude::*;
use rolegraph::{
    correlate, form_groups, merge_pass, neighborhood_graph, pair_similarity, rand_counts,
    ConnectionSnapshot, CorrelationConfig, FormationConfig, Group, GroupId, GroupOrigin,
    MergeConfig, Partitioning,
};
use std::collections::BTreeSet;

/// Random snapshot whose hosts are exactly the endpoints of its
/// connections: between 1 and ~40 edges over up to 14 hosts.
fn snapshot_strategy() -> impl Strategy<Value = ConnectionSnapshot> {
    (2usize..=14)
        .prop_flat_map(|n| {
            let pair_count = n * (n - 1) / 2;
            (Just(n), prop::collection::vec(prop::bool::weighted(0.35), pair_count))
        })
        .prop_filter_map("needs at least one connection", |(n, mask)| {
            let mut edges = Vec::new();
            let mut at = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if mask[at] {
                        edges.push((host(&format!("h{u}")), host(&format!("h{v}"))));
                    }
                    at += 1;
                }
            }
            if edges.is_empty() {
                return None;
            }
            Some(ConnectionSnapshot::from_connections("prop", edges).unwrap())
        })
}

/// Random partitioning of `hosts` into up to five groups.
fn partitioning_of(hosts: &BTreeSet<rolegraph::HostId>, labels: &[u8]) -> Partitioning {
    let mut members: Vec<BTreeSet<rolegraph::HostId>> = vec![BTreeSet::new(); 5];
    for (host, &label) in hosts.iter().zip(labels) {
        members[(label % 5) as usize].insert(host.clone());
    }
    let mut p = Partitioning::new("prop");
    let mut next = 0;
    for set in members {
        if !set.is_empty() {
            p.insert(Group::new(GroupId(next), 1, set).unwrap()).unwrap();
            next += 1;
        }
    }
    p
}

proptest! {
    #[test]
    fn similarity_is_symmetric_and_bounded(snapshot in snapshot_strategy()) {
        let hosts: Vec<_> = snapshot.hosts().iter().cloned().collect();
        for a in &hosts {
            for b in &hosts {
                if a == b {
                    continue;
                }
                let ab = pair_similarity(&snapshot, a, b).unwrap();
                let ba = pair_similarity(&snapshot, b, a).unwrap();
                prop_assert_eq!(ab, ba);
                let bound = snapshot.degree(a).unwrap().min(snapshot.degree(b).unwrap());
                prop_assert!((ab as usize) <= bound);
            }
        }
    }

    #[test]
    fn tighter_neighborhoods_are_subgraphs(snapshot in snapshot_strategy()) {
        for k in 1..=3u32 {
            let wide = neighborhood_graph(&snapshot, k).unwrap();
            let tight = neighborhood_graph(&snapshot, k + 1).unwrap();
            for (pair, &weight) in tight.edges() {
                prop_assert!(weight > k);
                prop_assert_eq!(wide.edge_weight(&pair.0, &pair.1), Some(weight));
            }
        }
    }

    #[test]
    fn formation_partitions_every_host_once(snapshot in snapshot_strategy()) {
        let outcome = form_groups(&snapshot, &FormationConfig::default()).unwrap();
        prop_assert!(outcome.partitioning.validate_against(&snapshot).is_ok());
        // The log and the result agree.
        prop_assert_eq!(outcome.events.len(), outcome.partitioning.len());
        // Component thresholds never rise as formation proceeds.
        let component_ks: Vec<u32> = outcome
            .events
            .iter()
            .filter(|e| e.origin == GroupOrigin::Component)
            .map(|e| e.k)
            .collect();
        prop_assert!(component_ks.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn formation_is_deterministic(snapshot in snapshot_strategy()) {
        let first = form_groups(&snapshot, &FormationConfig::default()).unwrap();
        let second = form_groups(&snapshot, &FormationConfig::default()).unwrap();
        prop_assert_eq!(first.partitioning, second.partitioning);
        prop_assert_eq!(first.events, second.events);
    }

    #[test]
    fn merging_preserves_coverage_and_never_grows(snapshot in snapshot_strategy()) {
        let formed = form_groups(&snapshot, &FormationConfig::default()).unwrap();
        let merged = merge_pass(&formed.partitioning, &snapshot, &MergeConfig::default()).unwrap();
        prop_assert!(merged.partitioning.validate_against(&snapshot).is_ok());
        prop_assert!(merged.partitioning.len() <= formed.partitioning.len());
        prop_assert_eq!(
            formed.partitioning.len() - merged.partitioning.len(),
            merged.merges.len()
        );
    }

    #[test]
    fn agreement_counts_match_pair_enumeration(
        snapshot in snapshot_strategy(),
        ref_labels in prop::collection::vec(any::<u8>(), 14),
        cand_labels in prop::collection::vec(any::<u8>(), 14),
    ) {
        let reference = partitioning_of(snapshot.hosts(), &ref_labels);
        let candidate = partitioning_of(snapshot.hosts(), &cand_labels);
        let counts = rand_counts(&reference, &candidate).unwrap();

        // Oracle: classify every unordered host pair directly.
        let hosts: Vec<_> = snapshot.hosts().iter().cloned().collect();
        let (mut ss, mut sd, mut ds, mut dd) = (0u64, 0u64, 0u64, 0u64);
        for i in 0..hosts.len() {
            for j in (i + 1)..hosts.len() {
                let same_ref =
                    reference.group_of(&hosts[i]).unwrap() == reference.group_of(&hosts[j]).unwrap();
                let same_cand =
                    candidate.group_of(&hosts[i]).unwrap() == candidate.group_of(&hosts[j]).unwrap();
                match (same_ref, same_cand) {
                    (true, true) => ss += 1,
                    (true, false) => sd += 1,
                    (false, true) => ds += 1,
                    (false, false) => dd += 1,
                }
            }
        }
        prop_assert_eq!((counts.same_same, counts.same_diff, counts.diff_same, counts.diff_diff),
                        (ss, sd, ds, dd));
    }

    #[test]
    fn self_correlation_is_identity(snapshot in snapshot_strategy()) {
        let formed = form_groups(&snapshot, &FormationConfig::default()).unwrap();
        let merged = merge_pass(&formed.partitioning, &snapshot, &MergeConfig::default()).unwrap();
        let p = &merged.partitioning;
        let result = correlate(&snapshot, p, &snapshot, p, &CorrelationConfig::default()).unwrap();
        prop_assert!(result.new_groups.is_empty());
        prop_assert!(result.retired_groups.is_empty());
        for (curr, prev) in &result.mapping {
            prop_assert_eq!(curr, prev);
        }
        prop_assert_eq!(result.mapping.len(), p.len());
        prop_assert_eq!(result.h_same.len(), snapshot.host_count());
    }
}
