//! Evaluating a produced partitioning against a reference one, and
//! summarizing what changed between correlated runs.

use crate::correlation::CorrelationResult;
use crate::error::{Error, Result};
use crate::partition::{GroupId, Partitioning};
use crate::snapshot::HostId;
use std::collections::{BTreeMap, BTreeSet};

/// Host-pair agreement counts between a reference partitioning and a
/// candidate one. The first word of each field says whether the pair
/// shares a group in the reference, the second whether it does in the
/// candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RandCounts {
    pub same_same: u64,
    pub same_diff: u64,
    pub diff_same: u64,
    pub diff_diff: u64,
}

impl RandCounts {
    pub fn new(same_same: u64, same_diff: u64, diff_same: u64, diff_diff: u64) -> Self {
        RandCounts { same_same, same_diff, diff_same, diff_diff }
    }

    pub fn total(&self) -> u64 {
        self.same_same + self.same_diff + self.diff_same + self.diff_diff
    }

    /// Fraction of host pairs on which the two partitionings agree.
    /// With no pairs at all (fewer than two hosts) there is nothing to
    /// disagree about, so the score is 1.
    pub fn statistic(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            1.0
        } else {
            (self.same_same + self.diff_diff) as f64 / total as f64
        }
    }
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Classifies every host pair by agreement between `reference` and
/// `candidate`. Both partitionings must cover exactly the same hosts.
///
/// Counted through the cluster-overlap table rather than by enumerating
/// pairs: with `n_ij` hosts in reference group i and candidate group j,
/// the pairs together in both are `sum C(n_ij, 2)`, and the row and
/// column totals give the rest.
pub fn rand_counts(reference: &Partitioning, candidate: &Partitioning) -> Result<RandCounts> {
    let ref_hosts = reference.covered_hosts();
    let cand_hosts = candidate.covered_hosts();
    if ref_hosts != cand_hosts {
        return Err(Error::HostSetMismatch {
            only_in_first: ref_hosts.difference(&cand_hosts).cloned().collect(),
            only_in_second: cand_hosts.difference(&ref_hosts).cloned().collect(),
        });
    }

    let cand_membership = candidate.membership();
    let mut cell: BTreeMap<(GroupId, GroupId), u64> = BTreeMap::new();
    for group in reference.groups() {
        for member in &group.members {
            *cell.entry((group.id, cand_membership[member])).or_insert(0) += 1;
        }
    }

    let together_both: u64 = cell.values().map(|&n| choose2(n)).sum();
    let together_ref: u64 = reference.groups().map(|g| choose2(g.len() as u64)).sum();
    let together_cand: u64 = candidate.groups().map(|g| choose2(g.len() as u64)).sum();
    let all_pairs = choose2(ref_hosts.len() as u64);

    let same_diff = together_ref - together_both;
    let diff_same = together_cand - together_both;
    let diff_diff = all_pairs - together_both - same_diff - diff_same;
    Ok(RandCounts::new(together_both, same_diff, diff_same, diff_diff))
}

/// Agreement between two partitionings of the same hosts, in [0, 1].
pub fn rand_statistic(reference: &Partitioning, candidate: &Partitioning) -> Result<f64> {
    Ok(rand_counts(reference, candidate)?.statistic())
}

/// Membership and cohesion drift of one correlated group pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupChange {
    pub current: GroupId,
    pub prior: GroupId,
    pub added: BTreeSet<HostId>,
    pub removed: BTreeSet<HostId>,
    pub k_before: u32,
    pub k_after: u32,
}

/// What changed between two correlated runs: correlated groups whose
/// membership or cohesion drifted, plus the uncorrelated groups on each
/// side. Correlated groups that are entirely unchanged are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffReport {
    pub changed: Vec<GroupChange>,
    pub new_groups: BTreeSet<GroupId>,
    pub retired_groups: BTreeSet<GroupId>,
}

/// Summarizes the drift between a previous and a current partitioning,
/// following the group mapping established by correlation.
pub fn partition_diff(
    prev: &Partitioning,
    curr: &Partitioning,
    correlation: &CorrelationResult,
) -> Result<DiffReport> {
    let mut changed = Vec::new();
    for (&current, &prior) in &correlation.mapping {
        let curr_group = curr.get(current).ok_or(Error::UnknownGroup(current))?;
        let prev_group = prev.get(prior).ok_or(Error::UnknownGroup(prior))?;
        let added: BTreeSet<HostId> = curr_group
            .members
            .difference(&prev_group.members)
            .cloned()
            .collect();
        let removed: BTreeSet<HostId> = prev_group
            .members
            .difference(&curr_group.members)
            .cloned()
            .collect();
        if added.is_empty() && removed.is_empty() && curr_group.k_value == prev_group.k_value
        {
            continue;
        }
        changed.push(GroupChange {
            current,
            prior,
            added,
            removed,
            k_before: prev_group.k_value,
            k_after: curr_group.k_value,
        });
    }
    Ok(DiffReport {
        changed,
        new_groups: correlation.new_groups.clone(),
        retired_groups: correlation.retired_groups.clone(),
    })
}
