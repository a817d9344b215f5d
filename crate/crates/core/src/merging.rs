//! Group merging: collapsing role groups whose members relate to the rest
//! of the network in the same way.
//!
//! Two groups are compared through their connection profiles — how many
//! connections per member each maintains toward every neighboring group.
//! Pairs whose per-member connection volumes are close enough, and whose
//! profile overlap clears a threshold, are merged; the bar is higher for
//! groups formed at demanding neighborhood thresholds, which tend to hold
//! servers rather than interchangeable clients.

use crate::error::{Error, Result};
use crate::partition::{GroupId, Partitioning};
use crate::snapshot::ConnectionSnapshot;
use num_rational::Ratio;
use std::collections::{BTreeMap, BTreeSet};

/// Tuning for the merge phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeConfig {
    /// Two groups are comparable only if their per-member external
    /// connection counts differ by at most this fraction of the larger.
    pub beta: f64,
    /// Similarity bar for pairs involving a high-cohesion group.
    pub s_hi: f64,
    /// Similarity bar for everything else.
    pub s_lo: f64,
    /// Cohesion value at or above which a group counts as high-cohesion.
    pub k_hi: u32,
}

impl MergeConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(
                "beta must be a non-negative finite number".into(),
            ));
        }
        if !self.s_lo.is_finite() || !self.s_hi.is_finite() {
            return Err(Error::InvalidConfig(
                "similarity thresholds must be finite".into(),
            ));
        }
        if !(0.0 <= self.s_lo && self.s_lo < self.s_hi && self.s_hi <= 100.0) {
            return Err(Error::InvalidConfig(format!(
                "similarity thresholds must satisfy 0 <= s_lo < s_hi <= 100 \
                 (got s_lo={}, s_hi={})",
                self.s_lo, self.s_hi
            )));
        }
        Ok(())
    }

    /// Whether a similarity score clears the bar for a pair whose more
    /// cohesive side was formed at `k_a.max(k_b)`.
    pub fn similarity_met(&self, k_a: u32, k_b: u32, similarity: f64) -> bool {
        if k_a.max(k_b) >= self.k_hi {
            similarity >= self.s_hi
        } else {
            similarity >= self.s_lo
        }
    }
}

impl Default for MergeConfig {
    fn default() -> Self {
        MergeConfig { beta: 0.5, s_hi: 80.0, s_lo: 55.0, k_hi: 7 }
    }
}

/// Group-level view of a snapshot: connection volumes between groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGraph {
    sizes: BTreeMap<GroupId, u64>,
    k_values: BTreeMap<GroupId, u32>,
    /// Host-level connection counts between group pairs, keyed ordered.
    counts: BTreeMap<(GroupId, GroupId), u64>,
    neighbors: BTreeMap<GroupId, BTreeSet<GroupId>>,
    external: BTreeMap<GroupId, u64>,
}

impl GroupGraph {
    pub fn new(partitioning: &Partitioning, snapshot: &ConnectionSnapshot) -> Result<Self> {
        partitioning.validate_against(snapshot)?;
        let membership = partitioning.membership();
        let mut counts: BTreeMap<(GroupId, GroupId), u64> = BTreeMap::new();
        let mut neighbors: BTreeMap<GroupId, BTreeSet<GroupId>> = partitioning
            .group_ids()
            .map(|g| (g, BTreeSet::new()))
            .collect();
        let mut external: BTreeMap<GroupId, u64> =
            partitioning.group_ids().map(|g| (g, 0)).collect();
        for (a, b) in snapshot.connections() {
            let ga = membership[a];
            let gb = membership[b];
            if ga == gb {
                continue;
            }
            let key = if ga < gb { (ga, gb) } else { (gb, ga) };
            *counts.entry(key).or_insert(0) += 1;
            *external.get_mut(&ga).expect("group known") += 1;
            *external.get_mut(&gb).expect("group known") += 1;
            neighbors.get_mut(&ga).expect("group known").insert(gb);
            neighbors.get_mut(&gb).expect("group known").insert(ga);
        }
        let sizes = partitioning
            .groups()
            .map(|g| (g.id, g.len() as u64))
            .collect();
        let k_values = partitioning.groups().map(|g| (g.id, g.k_value)).collect();
        Ok(GroupGraph { sizes, k_values, counts, neighbors, external })
    }

    fn known(&self, g: GroupId) -> Result<()> {
        if self.sizes.contains_key(&g) {
            Ok(())
        } else {
            Err(Error::UnknownGroup(g))
        }
    }

    pub fn size(&self, g: GroupId) -> Result<u64> {
        self.known(g)?;
        Ok(self.sizes[&g])
    }

    pub fn k_value(&self, g: GroupId) -> Result<u32> {
        self.known(g)?;
        Ok(self.k_values[&g])
    }

    /// Host-level connections between two distinct groups.
    pub fn connections_between(&self, a: GroupId, b: GroupId) -> Result<u64> {
        self.known(a)?;
        self.known(b)?;
        if a == b {
            return Err(Error::SelfGroupComparison(a));
        }
        let key = if a < b { (a, b) } else { (b, a) };
        Ok(self.counts.get(&key).copied().unwrap_or(0))
    }

    pub fn neighbor_groups(&self, g: GroupId) -> Result<&BTreeSet<GroupId>> {
        self.known(g)?;
        Ok(&self.neighbors[&g])
    }

    /// Connections leaving the group (one endpoint inside, one outside).
    pub fn external_connections(&self, g: GroupId) -> Result<u64> {
        self.known(g)?;
        Ok(self.external[&g])
    }

    /// External connections per member, exact.
    pub fn avg_external(&self, g: GroupId) -> Result<Ratio<u64>> {
        Ok(Ratio::new(self.external_connections(g)?, self.sizes[&g]))
    }

    /// Whether two groups carry comparable per-member connection volumes:
    /// the difference must stay within `beta` times the larger volume.
    /// Two groups with no external connections at all are comparable.
    pub fn connection_compatible(&self, a: GroupId, b: GroupId, beta: f64) -> Result<bool> {
        let va = ratio_to_f64(self.avg_external(a)?);
        let vb = ratio_to_f64(self.avg_external(b)?);
        if va == 0.0 && vb == 0.0 {
            return Ok(true);
        }
        Ok((va - vb).abs() <= beta * va.max(vb))
    }

    /// Profile-overlap similarity between two groups, in percent.
    ///
    /// Each group is profiled by its per-member connection count toward
    /// every neighboring group; the score is the overlapping volume of
    /// the two profiles relative to their union, scaled to [0, 100]. A
    /// group with no external connections is similar to nothing.
    pub fn similarity(&self, a: GroupId, b: GroupId) -> Result<f64> {
        if a == b {
            return Err(Error::SelfGroupComparison(a));
        }
        let na = self.neighbor_groups(a)?;
        let nb = self.neighbor_groups(b)?;
        let ca = ratio_to_f64(self.avg_external(a)?);
        let cb = ratio_to_f64(self.avg_external(b)?);
        if ca == 0.0 || cb == 0.0 {
            return Ok(0.0);
        }
        let sa = self.sizes[&a] as f64;
        let sb = self.sizes[&b] as f64;
        let mut overlap = 0.0;
        for &shared in na.intersection(nb) {
            let pa = self.connections_between(a, shared)? as f64 / sa;
            let pb = self.connections_between(b, shared)? as f64 / sb;
            overlap += pa.min(pb);
        }
        let score = 100.0 * overlap / (ca + cb - overlap);
        Ok(score.clamp(0.0, 100.0))
    }
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One merge performed by [`merge_pass`].
#[derive(Debug, Clone, PartialEq)]
pub struct MergeEvent {
    /// Surviving id (always the smaller of the pair).
    pub kept: GroupId,
    pub absorbed: GroupId,
    pub similarity: f64,
    /// Cohesion of the merged group: the minimum member connection count.
    pub merged_k: u32,
}

/// A finished merge phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    pub partitioning: Partitioning,
    pub merges: Vec<MergeEvent>,
}

/// Repeatedly merges the most similar qualifying pair of groups until no
/// pair qualifies. Group volumes and similarities are recomputed after
/// every merge, so one merge can enable or disable later ones. Ties on
/// similarity go to the pair with the smallest ids.
pub fn merge_pass(
    partitioning: &Partitioning,
    snapshot: &ConnectionSnapshot,
    config: &MergeConfig,
) -> Result<MergeOutcome> {
    config.validate()?;
    let mut current = partitioning.clone();
    let mut merges = Vec::new();

    loop {
        let graph = GroupGraph::new(&current, snapshot)?;
        let ids: Vec<GroupId> = current.group_ids().collect();
        let mut best: Option<(f64, GroupId, GroupId)> = None;
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if !graph.connection_compatible(a, b, config.beta)? {
                    continue;
                }
                let score = graph.similarity(a, b)?;
                if !config.similarity_met(graph.k_value(a)?, graph.k_value(b)?, score) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bs, ba, bb)) => {
                        score > bs || (score == bs && (a, b) < (ba, bb))
                    }
                };
                if better {
                    best = Some((score, a, b));
                }
            }
        }
        let Some((score, a, b)) = best else { break };

        let absorbed = current.remove(b).expect("candidate exists");
        let mut kept = current.remove(a).expect("candidate exists");
        kept.members.extend(absorbed.members);
        let merged_k = kept
            .members
            .iter()
            .map(|h| snapshot.degree(h).expect("member of snapshot"))
            .min()
            .expect("groups are non-empty") as u32;
        kept.k_value = merged_k;
        current.replace(kept);
        merges.push(MergeEvent { kept: a, absorbed: b, similarity: score, merged_k });
    }

    Ok(MergeOutcome { partitioning: current, merges })
}
