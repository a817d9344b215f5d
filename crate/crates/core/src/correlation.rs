//! Correlating role groups across two time-separated runs.
//!
//! Host populations drift between runs, so both snapshots are first
//! restricted to the hosts they share. Groups are then matched in two
//! steps: first by comparing how each group's neighborhood connects to it
//! now versus then (neighbor hosts matched by identity where their
//! connection sets are provably unchanged, otherwise by connection-count
//! proximity), and second — for the leftovers — by comparing group-level
//! connection profiles expressed in the id space of the previous run.

use crate::error::{Error, Result};
use crate::merging::GroupGraph;
use crate::partition::{GroupId, Partitioning};
use crate::snapshot::{ConnectionSnapshot, HostId};
use std::collections::{BTreeMap, BTreeSet};

/// Tuning for group correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationConfig {
    /// Tolerance, as a fraction, for connection-count comparisons: both
    /// for pairing individual neighbor hosts and for comparing group
    /// volumes across runs.
    pub t_hi: f64,
    /// Minimum normalized neighborhood-profile score for a first-step
    /// match, in [0, 1].
    pub sim_threshold: f64,
    /// Minimum group-profile similarity for a second-step match, in
    /// [0, 100].
    pub step2_threshold: f64,
}

impl CorrelationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_hi.is_finite() && (0.0..=1.0).contains(&self.t_hi)) {
            return Err(Error::InvalidConfig(
                "t_hi must lie in [0, 1]".into(),
            ));
        }
        if !(self.sim_threshold.is_finite() && (0.0..=1.0).contains(&self.sim_threshold)) {
            return Err(Error::InvalidConfig(
                "sim_threshold must lie in [0, 1]".into(),
            ));
        }
        if !(self.step2_threshold.is_finite()
            && (0.0..=100.0).contains(&self.step2_threshold))
        {
            return Err(Error::InvalidConfig(
                "step2_threshold must lie in [0, 100]".into(),
            ));
        }
        Ok(())
    }
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        CorrelationConfig { t_hi: 0.3, sim_threshold: 0.5, step2_threshold: 55.0 }
    }
}

/// Outcome of correlating a current run against a previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationResult {
    /// Current group id -> previous group id, injective.
    pub mapping: BTreeMap<GroupId, GroupId>,
    /// Current groups with no previous counterpart.
    pub new_groups: BTreeSet<GroupId>,
    /// Previous groups with no current counterpart.
    pub retired_groups: BTreeSet<GroupId>,
    /// Hosts whose connection sets are literally unchanged between the
    /// aligned snapshots.
    pub h_same: BTreeSet<HostId>,
}

/// Restricts both snapshots to the hosts they share. Fails if the runs
/// have no host in common.
pub fn align_snapshots(
    prev: &ConnectionSnapshot,
    curr: &ConnectionSnapshot,
) -> Result<(ConnectionSnapshot, ConnectionSnapshot)> {
    let shared: BTreeSet<HostId> =
        prev.hosts().intersection(curr.hosts()).cloned().collect();
    if shared.is_empty() {
        return Err(Error::EmptyAlignment);
    }
    Ok((prev.restricted_to(&shared), curr.restricted_to(&shared)))
}

/// Hosts whose connection sets are identical in the two aligned
/// snapshots. The snapshots must cover the same hosts, as produced by
/// [`align_snapshots`].
pub fn compute_h_same(
    prev_aligned: &ConnectionSnapshot,
    curr_aligned: &ConnectionSnapshot,
) -> Result<BTreeSet<HostId>> {
    if prev_aligned.hosts() != curr_aligned.hosts() {
        let only_in_first: Vec<HostId> = prev_aligned
            .hosts()
            .difference(curr_aligned.hosts())
            .cloned()
            .collect();
        let only_in_second: Vec<HostId> = curr_aligned
            .hosts()
            .difference(prev_aligned.hosts())
            .cloned()
            .collect();
        return Err(Error::HostSetMismatch { only_in_first, only_in_second });
    }
    let mut same = BTreeSet::new();
    for host in prev_aligned.hosts() {
        if prev_aligned.neighbors(host)? == curr_aligned.neighbors(host)? {
            same.insert(host.clone());
        }
    }
    Ok(same)
}

/// Matches the neighbor hosts of a previous group with those of a current
/// group.
///
/// Hosts known unchanged (in `h_same`) match themselves when they appear
/// on both sides and match nothing otherwise. The remaining hosts are
/// paired greedily, in token order, with the unused previous-side host
/// whose connection count is closest — ties to the smallest token — and
/// within `t_hi` times the current host's count.
pub fn pair_neighbors(
    prev_aligned: &ConnectionSnapshot,
    prev_neighbors: &BTreeSet<HostId>,
    curr_aligned: &ConnectionSnapshot,
    curr_neighbors: &BTreeSet<HostId>,
    h_same: &BTreeSet<HostId>,
    t_hi: f64,
) -> Result<Vec<(HostId, HostId)>> {
    let mut pairs: Vec<(HostId, HostId)> = Vec::new();
    let mut remainder_curr: Vec<&HostId> = Vec::new();
    for host in curr_neighbors {
        if h_same.contains(host) {
            if prev_neighbors.contains(host) {
                pairs.push((host.clone(), host.clone()));
            }
            // An unchanged host absent from the other side stays
            // unpaired; it cannot be anyone else.
        } else {
            remainder_curr.push(host);
        }
    }
    let remainder_prev: Vec<&HostId> = prev_neighbors
        .iter()
        .filter(|h| !h_same.contains(*h))
        .collect();

    let mut taken = vec![false; remainder_prev.len()];
    for curr_host in remainder_curr {
        let curr_count = curr_aligned.degree(curr_host)? as f64;
        let mut best: Option<(f64, usize)> = None;
        for (i, prev_host) in remainder_prev.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let prev_count = prev_aligned.degree(prev_host)? as f64;
            let diff = (prev_count - curr_count).abs();
            if diff > t_hi * curr_count {
                continue;
            }
            // remainder_prev ascends by token, so on equal distance the
            // earlier (smaller) token is kept.
            if best.map_or(true, |(best_diff, _)| diff < best_diff) {
                best = Some((diff, i));
            }
        }
        if let Some((_, i)) = best {
            taken[i] = true;
            pairs.push((curr_host.clone(), remainder_prev[i].clone()));
        }
    }
    Ok(pairs)
}

/// Per-group view used while scoring: the aligned members, each neighbor
/// host's connection count into the group, and the average member
/// connection count.
struct AlignedProfile {
    members: BTreeSet<HostId>,
    neighbor_counts: BTreeMap<HostId, u64>,
    neighbor_set: BTreeSet<HostId>,
    avg_connections: f64,
}

impl AlignedProfile {
    fn build(aligned: &ConnectionSnapshot, members: &BTreeSet<HostId>) -> Result<Self> {
        let members: BTreeSet<HostId> = members
            .iter()
            .filter(|m| aligned.contains(m))
            .cloned()
            .collect();
        let mut neighbor_counts: BTreeMap<HostId, u64> = BTreeMap::new();
        let mut total = 0u64;
        for member in &members {
            for neighbor in aligned.neighbors(member)? {
                *neighbor_counts.entry(neighbor.clone()).or_insert(0) += 1;
                total += 1;
            }
        }
        let avg_connections = if members.is_empty() {
            0.0
        } else {
            total as f64 / members.len() as f64
        };
        let neighbor_set = neighbor_counts.keys().cloned().collect();
        Ok(AlignedProfile { members, neighbor_counts, neighbor_set, avg_connections })
    }
}

fn profile_score(
    prev_aligned: &ConnectionSnapshot,
    prev: &AlignedProfile,
    curr_aligned: &ConnectionSnapshot,
    curr: &AlignedProfile,
    h_same: &BTreeSet<HostId>,
    t_hi: f64,
) -> Result<f64> {
    if prev.members.is_empty() || curr.members.is_empty() {
        return Ok(0.0);
    }
    let denominator = curr.avg_connections.max(prev.avg_connections);
    if denominator == 0.0 {
        return Ok(0.0);
    }
    let pairs = pair_neighbors(
        prev_aligned,
        &prev.neighbor_set,
        curr_aligned,
        &curr.neighbor_set,
        h_same,
        t_hi,
    )?;
    let curr_size = curr.members.len() as f64;
    let prev_size = prev.members.len() as f64;
    let mut total = 0.0;
    for (curr_host, prev_host) in &pairs {
        let curr_share = curr.neighbor_counts[curr_host] as f64 / curr_size;
        let prev_share = prev.neighbor_counts[prev_host] as f64 / prev_size;
        total += curr_share.min(prev_share);
    }
    Ok(total / denominator)
}

/// Scores how much a current group's neighborhood profile looks like a
/// previous group's, normalized to [0, 1]. A group whose aligned members
/// lost every connection — or that has no aligned member — scores zero
/// against everything.
pub fn time_varying_similarity(
    prev_aligned: &ConnectionSnapshot,
    prev_members: &BTreeSet<HostId>,
    curr_aligned: &ConnectionSnapshot,
    curr_members: &BTreeSet<HostId>,
    h_same: &BTreeSet<HostId>,
    t_hi: f64,
) -> Result<f64> {
    let prev = AlignedProfile::build(prev_aligned, prev_members)?;
    let curr = AlignedProfile::build(curr_aligned, curr_members)?;
    profile_score(prev_aligned, &prev, curr_aligned, &curr, h_same, t_hi)
}

/// Second-step similarity: group-level connection profiles, with the
/// current group's neighbors translated into previous-run ids through the
/// first-step mapping. Same overlap-over-union scoring as group merging,
/// in percent.
fn mapped_profile_similarity(
    curr_graph: &GroupGraph,
    curr_group: GroupId,
    mapping: &BTreeMap<GroupId, GroupId>,
    prev_graph: &GroupGraph,
    prev_group: GroupId,
) -> Result<f64> {
    let curr_avg = to_f64(curr_graph.avg_external(curr_group)?);
    let prev_avg = to_f64(prev_graph.avg_external(prev_group)?);
    if curr_avg == 0.0 || prev_avg == 0.0 {
        return Ok(0.0);
    }
    let curr_size = curr_graph.size(curr_group)? as f64;
    let prev_size = prev_graph.size(prev_group)? as f64;
    let mut curr_profile: BTreeMap<GroupId, f64> = BTreeMap::new();
    for &neighbor in curr_graph.neighbor_groups(curr_group)? {
        if let Some(&prior) = mapping.get(&neighbor) {
            let share =
                curr_graph.connections_between(curr_group, neighbor)? as f64 / curr_size;
            curr_profile.insert(prior, share);
        }
    }
    let mut overlap = 0.0;
    for &neighbor in prev_graph.neighbor_groups(prev_group)? {
        if let Some(&curr_share) = curr_profile.get(&neighbor) {
            let prev_share =
                prev_graph.connections_between(prev_group, neighbor)? as f64 / prev_size;
            overlap += curr_share.min(prev_share);
        }
    }
    let score = 100.0 * overlap / (curr_avg + prev_avg - overlap);
    Ok(score.clamp(0.0, 100.0))
}

fn to_f64(r: num_rational::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Correlates the groups of a current run with those of a previous run.
pub fn correlate(
    prev_snapshot: &ConnectionSnapshot,
    prev_partitioning: &Partitioning,
    curr_snapshot: &ConnectionSnapshot,
    curr_partitioning: &Partitioning,
    config: &CorrelationConfig,
) -> Result<CorrelationResult> {
    config.validate()?;
    prev_partitioning.validate_against(prev_snapshot)?;
    curr_partitioning.validate_against(curr_snapshot)?;
    let (prev_aligned, curr_aligned) = align_snapshots(prev_snapshot, curr_snapshot)?;
    let h_same = compute_h_same(&prev_aligned, &curr_aligned)?;

    let mut prev_profiles: BTreeMap<GroupId, AlignedProfile> = BTreeMap::new();
    for group in prev_partitioning.groups() {
        prev_profiles.insert(group.id, AlignedProfile::build(&prev_aligned, &group.members)?);
    }
    let mut curr_profiles: BTreeMap<GroupId, AlignedProfile> = BTreeMap::new();
    for group in curr_partitioning.groups() {
        curr_profiles.insert(group.id, AlignedProfile::build(&curr_aligned, &group.members)?);
    }

    // Groups with no member inside the alignment cannot be matched by any
    // evidence; they are new (or retired) outright.
    let curr_candidates: Vec<GroupId> = curr_profiles
        .iter()
        .filter(|(_, p)| !p.members.is_empty())
        .map(|(&g, _)| g)
        .collect();
    let prev_candidates: Vec<GroupId> = prev_profiles
        .iter()
        .filter(|(_, p)| !p.members.is_empty())
        .map(|(&g, _)| g)
        .collect();

    // Step 1: neighborhood-profile matching, best scores first.
    let mut rows: Vec<(f64, GroupId, GroupId)> = Vec::new();
    for &curr_group in &curr_candidates {
        let curr = &curr_profiles[&curr_group];
        for &prev_group in &prev_candidates {
            let prev = &prev_profiles[&prev_group];
            let score =
                profile_score(&prev_aligned, prev, &curr_aligned, curr, &h_same, config.t_hi)?;
            if score < config.sim_threshold {
                continue;
            }
            let volume_gap = (curr.avg_connections - prev.avg_connections).abs();
            if volume_gap > config.t_hi * curr.avg_connections.max(prev.avg_connections) {
                continue;
            }
            rows.push((score, curr_group, prev_group));
        }
    }
    rows.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut mapping: BTreeMap<GroupId, GroupId> = BTreeMap::new();
    let mut prev_taken: BTreeSet<GroupId> = BTreeSet::new();
    for (_, curr_group, prev_group) in rows {
        if !mapping.contains_key(&curr_group) && !prev_taken.contains(&prev_group) {
            mapping.insert(curr_group, prev_group);
            prev_taken.insert(prev_group);
        }
    }

    // Step 2: remaining groups matched on group-level profiles keyed by
    // previous-run ids.
    let leftover_curr: Vec<GroupId> = curr_candidates
        .iter()
        .copied()
        .filter(|g| !mapping.contains_key(g))
        .collect();
    let leftover_prev: Vec<GroupId> = prev_candidates
        .iter()
        .copied()
        .filter(|g| !prev_taken.contains(g))
        .collect();
    if !leftover_curr.is_empty() && !leftover_prev.is_empty() {
        let curr_graph = GroupGraph::new(curr_partitioning, curr_snapshot)?;
        let prev_graph = GroupGraph::new(prev_partitioning, prev_snapshot)?;
        let mut rows: Vec<(f64, GroupId, GroupId)> = Vec::new();
        for &curr_group in &leftover_curr {
            for &prev_group in &leftover_prev {
                let score = mapped_profile_similarity(
                    &curr_graph,
                    curr_group,
                    &mapping,
                    &prev_graph,
                    prev_group,
                )?;
                if score >= config.step2_threshold {
                    rows.push((score, curr_group, prev_group));
                }
            }
        }
        rows.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        for (_, curr_group, prev_group) in rows {
            if !mapping.contains_key(&curr_group) && !prev_taken.contains(&prev_group) {
                mapping.insert(curr_group, prev_group);
                prev_taken.insert(prev_group);
            }
        }
    }

    let new_groups: BTreeSet<GroupId> = curr_partitioning
        .group_ids()
        .filter(|g| !mapping.contains_key(g))
        .collect();
    let retired_groups: BTreeSet<GroupId> = prev_partitioning
        .group_ids()
        .filter(|g| !prev_taken.contains(g))
        .collect();

    Ok(CorrelationResult { mapping, new_groups, retired_groups, h_same })
}
