//! Group formation: condensing role groups out of a snapshot by scanning
//! neighborhood thresholds from the highest downward.
//!
//! At each threshold k the ungrouped hosts are joined into a graph whose
//! edges mark pairs with at least k common neighbors; the biconnected
//! components of that graph become candidate groups. Hosts claimed by
//! several components go to the largest one, and whatever the resolution
//! dissolves is retried at the same k before k decreases. Hosts with many
//! connections relative to the current k are split off alone early, and
//! anything still ungrouped at the end becomes a singleton.

use crate::bcc::biconnected_components;
use crate::conn_graph::ConnGraph;
use crate::error::{Error, Result};
use crate::partition::{Group, GroupId, Partitioning};
use crate::snapshot::{ConnectionSnapshot, HostId};
use num_rational::Ratio;
use std::collections::BTreeSet;

/// Tuning for the formation phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationConfig {
    /// A still-ungrouped host becomes its own group as soon as the
    /// current threshold k drops below `alpha` times its connection
    /// count. Kept as an exact rational so boundary comparisons never
    /// depend on floating-point rounding.
    pub alpha: Ratio<u64>,
}

impl FormationConfig {
    pub fn new(alpha: Ratio<u64>) -> Result<Self> {
        if alpha <= Ratio::from_integer(0) {
            return Err(Error::InvalidConfig(
                "alpha must be positive".into(),
            ));
        }
        Ok(FormationConfig { alpha })
    }
}

impl Default for FormationConfig {
    fn default() -> Self {
        FormationConfig { alpha: Ratio::new(3, 5) }
    }
}

/// How a group came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrigin {
    /// Condensed out of a k-neighborhood graph as a biconnected
    /// component.
    Component,
    /// Split off alone because its connection count is high relative to
    /// the current threshold (k < alpha * connections).
    EarlySingleton,
    /// Still ungrouped after the threshold scan; grouped alone at k = 0.
    Residual,
}

/// One entry of the formation log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationEvent {
    pub group: GroupId,
    pub origin: GroupOrigin,
    /// Threshold at which the group was created; also its cohesion value.
    pub k: u32,
    pub members: BTreeSet<HostId>,
}

/// A finished formation run: the partitioning plus the log of how each
/// group appeared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationOutcome {
    pub partitioning: Partitioning,
    pub events: Vec<FormationEvent>,
}

/// Resolves overlapping candidate sets into disjoint ones. Every shared
/// element goes to the largest set containing it — ties to the set whose
/// sorted member sequence is smallest — and sets left with fewer than two
/// elements are dropped entirely.
pub fn resolve_shared_members<T: Ord + Clone>(sets: Vec<BTreeSet<T>>) -> Vec<BTreeSet<T>> {
    let mut ranked = sets;
    ranked.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

    let mut claimed: BTreeSet<T> = BTreeSet::new();
    let mut retained: Vec<BTreeSet<T>> = Vec::new();
    for set in ranked {
        let owned: BTreeSet<T> = set
            .iter()
            .filter(|e| !claimed.contains(*e))
            .cloned()
            .collect();
        claimed.extend(set);
        if owned.len() >= 2 {
            retained.push(owned);
        }
    }
    retained
}

/// Runs the formation phase over `snapshot`.
pub fn form_groups(
    snapshot: &ConnectionSnapshot,
    config: &FormationConfig,
) -> Result<FormationOutcome> {
    FormationConfig::new(config.alpha)?;
    let mut graph = ConnGraph::new(snapshot);
    let mut partitioning = Partitioning::new(snapshot.label());
    let mut events = Vec::new();
    let mut next_id = 0u64;

    let alpha_num = *config.alpha.numer();
    let alpha_den = *config.alpha.denom();

    let k_max = graph.max_degree();
    for k in (1..=k_max).rev() {
        // Components may free hosts when overlaps are resolved, and the
        // freed hosts can condense into new components at the same k, so
        // iterate until nothing more forms.
        loop {
            let edges: Vec<(u32, u32)> = graph
                .ungrouped_k_edges(k)
                .into_iter()
                .map(|(a, b, _)| (a, b))
                .collect();
            if edges.is_empty() {
                break;
            }
            let candidates: Vec<BTreeSet<u32>> =
                biconnected_components(graph.host_count(), &edges)
                    .into_iter()
                    .map(|c| c.into_iter().collect())
                    .collect();
            let mut resolved = resolve_shared_members(candidates);
            if resolved.is_empty() {
                break;
            }
            resolved.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
            for members_idx in resolved {
                let members: BTreeSet<HostId> = members_idx
                    .iter()
                    .map(|&i| graph.host_at(i).clone())
                    .collect();
                let id = GroupId(next_id);
                next_id += 1;
                for &i in &members_idx {
                    graph.mark_grouped(i, id)?;
                }
                partitioning.insert(Group::new(id, k, members.clone())?)?;
                events.push(FormationEvent {
                    group: id,
                    origin: GroupOrigin::Component,
                    k,
                    members,
                });
            }
        }

        // Hosts whose connection count is large against the current k are
        // unlikely to join any component below it; separate them now.
        // The comparison k < alpha * degree is done in integers.
        for idx in graph.ungrouped_indices() {
            let degree = graph.degree(idx) as u64;
            if (k as u64) * alpha_den < alpha_num * degree {
                let host = graph.host_at(idx).clone();
                let id = GroupId(next_id);
                next_id += 1;
                graph.mark_grouped(idx, id)?;
                let members: BTreeSet<HostId> = [host].into_iter().collect();
                partitioning.insert(Group::new(id, k, members.clone())?)?;
                events.push(FormationEvent {
                    group: id,
                    origin: GroupOrigin::EarlySingleton,
                    k,
                    members,
                });
            }
        }
    }

    for idx in graph.ungrouped_indices() {
        let host = graph.host_at(idx).clone();
        let id = GroupId(next_id);
        next_id += 1;
        graph.mark_grouped(idx, id)?;
        let members: BTreeSet<HostId> = [host].into_iter().collect();
        partitioning.insert(Group::new(id, 0, members.clone())?)?;
        events.push(FormationEvent {
            group: id,
            origin: GroupOrigin::Residual,
            k: 0,
            members,
        });
    }

    debug_assert!(partitioning.validate_against(snapshot).is_ok());
    Ok(FormationOutcome { partitioning, events })
}
