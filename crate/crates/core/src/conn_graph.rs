//! Host-level connection graph with precomputed pair similarities, and the
//! k-neighborhood graphs derived from it.
//!
//! Pair weights are always measured against the full snapshot adjacency:
//! restricting the node set (for example to the not-yet-grouped hosts)
//! changes which edges are present, never how much they weigh.

use crate::error::{Error, Result};
use crate::partition::GroupId;
use crate::snapshot::{ConnectionSnapshot, HostId};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Interned, similarity-annotated view of one snapshot.
///
/// Hosts are numbered `0..host_count()` in ascending token order and all
/// hot paths work on those indices. The pair table lists every host pair
/// with at least one common neighbor, sorted by descending weight, so the
/// pairs that survive a threshold `k` always form a prefix.
#[derive(Debug, Clone)]
pub struct ConnGraph {
    hosts: Vec<HostId>,
    index: HashMap<HostId, u32>,
    degrees: Vec<u32>,
    grouped: Vec<Option<GroupId>>,
    /// `(a, b, weight)` with `a < b` and `weight >= 1`, sorted by
    /// `(weight desc, a asc, b asc)`.
    pairs: Vec<(u32, u32, u32)>,
}

impl ConnGraph {
    pub fn new(snapshot: &ConnectionSnapshot) -> Self {
        let hosts: Vec<HostId> = snapshot.hosts().iter().cloned().collect();
        let index: HashMap<HostId, u32> = hosts
            .iter()
            .enumerate()
            .map(|(i, h)| (h.clone(), i as u32))
            .collect();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); hosts.len()];
        for (a, b) in snapshot.connections() {
            let ia = index[a];
            let ib = index[b];
            adj[ia as usize].push(ib);
            adj[ib as usize].push(ia);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let degrees: Vec<u32> = adj.iter().map(|l| l.len() as u32).collect();

        // Count common neighbors by charging each host to all pairs of its
        // neighbors; host w contributes one unit to (a, b) exactly when it
        // is a common neighbor of a and b.
        let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
        for nbrs in &adj {
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    *counts.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        let mut pairs: Vec<(u32, u32, u32)> =
            counts.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        pairs.sort_unstable_by(|x, y| {
            y.2.cmp(&x.2).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1))
        });

        let grouped = vec![None; hosts.len()];
        ConnGraph { hosts, index, degrees, grouped, pairs }
    }

    pub fn host_count(&self) -> usize {
        self.hosts.len()
    }

    pub fn host_at(&self, idx: u32) -> &HostId {
        &self.hosts[idx as usize]
    }

    pub fn index_of(&self, host: &HostId) -> Option<u32> {
        self.index.get(host).copied()
    }

    pub fn degree(&self, idx: u32) -> u32 {
        self.degrees[idx as usize]
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// All `(a, b, weight)` pairs with at least one common neighbor,
    /// sorted by descending weight.
    pub fn pairs(&self) -> &[(u32, u32, u32)] {
        &self.pairs
    }

    pub fn assignment(&self, idx: u32) -> Option<GroupId> {
        self.grouped[idx as usize]
    }

    pub fn mark_grouped(&mut self, idx: u32, group: GroupId) -> Result<()> {
        match self.grouped[idx as usize] {
            Some(existing) => Err(Error::AlreadyGrouped(
                self.hosts[idx as usize].clone(),
                existing,
            )),
            None => {
                self.grouped[idx as usize] = Some(group);
                Ok(())
            }
        }
    }

    pub fn ungrouped_indices(&self) -> Vec<u32> {
        (0..self.hosts.len() as u32)
            .filter(|&i| self.grouped[i as usize].is_none())
            .collect()
    }

    /// Edges of the k-neighborhood graph over the ungrouped hosts: pairs
    /// with weight at least `k` whose endpoints are both unassigned.
    pub fn ungrouped_k_edges(&self, k: u32) -> Vec<(u32, u32, u32)> {
        let end = self.pairs.partition_point(|p| p.2 >= k);
        self.pairs[..end]
            .iter()
            .filter(|&&(a, b, _)| {
                self.grouped[a as usize].is_none() && self.grouped[b as usize].is_none()
            })
            .copied()
            .collect()
    }
}

/// The k-neighborhood graph over an explicit node set: an edge joins two
/// nodes whenever they share at least `k` neighbors in the underlying
/// snapshot, and carries that common-neighbor count as its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodGraph {
    k: u32,
    adjacency: BTreeMap<HostId, BTreeSet<HostId>>,
    edges: BTreeMap<(HostId, HostId), u32>,
}

impl NeighborhoodGraph {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn nodes(&self) -> impl Iterator<Item = &HostId> {
        self.adjacency.keys()
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges keyed by the ordered host pair, valued by common-neighbor
    /// count.
    pub fn edges(&self) -> &BTreeMap<(HostId, HostId), u32> {
        &self.edges
    }

    pub fn edge_weight(&self, a: &HostId, b: &HostId) -> Option<u32> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.edges.get(&key).copied()
    }

    pub fn neighbors(&self, host: &HostId) -> Option<&BTreeSet<HostId>> {
        self.adjacency.get(host)
    }

    pub fn is_isolated(&self, host: &HostId) -> bool {
        self.adjacency.get(host).map_or(false, BTreeSet::is_empty)
    }
}

/// Builds the k-neighborhood graph over every host of the snapshot.
pub fn neighborhood_graph(snapshot: &ConnectionSnapshot, k: u32) -> Result<NeighborhoodGraph> {
    neighborhood_graph_over(snapshot, k, snapshot.hosts())
}

/// Builds the k-neighborhood graph over a chosen subset of the snapshot's
/// hosts. Edge weights still count common neighbors in the full snapshot,
/// including hosts outside the subset.
pub fn neighborhood_graph_over(
    snapshot: &ConnectionSnapshot,
    k: u32,
    hosts: &BTreeSet<HostId>,
) -> Result<NeighborhoodGraph> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "the neighborhood threshold k must be at least 1".into(),
        ));
    }
    for h in hosts {
        if !snapshot.contains(h) {
            return Err(Error::UnknownHost(h.clone()));
        }
    }
    let graph = ConnGraph::new(snapshot);
    let mut adjacency: BTreeMap<HostId, BTreeSet<HostId>> = hosts
        .iter()
        .map(|h| (h.clone(), BTreeSet::new()))
        .collect();
    let mut edges = BTreeMap::new();
    for &(a, b, w) in graph.pairs() {
        if w < k {
            break;
        }
        let ha = graph.host_at(a);
        let hb = graph.host_at(b);
        if adjacency.contains_key(ha) && adjacency.contains_key(hb) {
            edges.insert((ha.clone(), hb.clone()), w);
            adjacency.get_mut(ha).expect("checked").insert(hb.clone());
            adjacency.get_mut(hb).expect("checked").insert(ha.clone());
        }
    }
    Ok(NeighborhoodGraph { k, adjacency, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HostId {
        HostId::new(s).unwrap()
    }

    /// Two clients both talking to two servers: every same-side pair
    /// shares exactly two neighbors.
    fn two_by_two() -> ConnectionSnapshot {
        ConnectionSnapshot::from_connections(
            "t",
            vec![
                (h("c1"), h("m")),
                (h("c1"), h("w")),
                (h("c2"), h("m")),
                (h("c2"), h("w")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pair_weights_count_common_neighbors() {
        let g = ConnGraph::new(&two_by_two());
        assert_eq!(g.host_count(), 4);
        assert_eq!(g.max_degree(), 2);
        let named: Vec<(String, String, u32)> = g
            .pairs()
            .iter()
            .map(|&(a, b, w)| {
                (g.host_at(a).to_string(), g.host_at(b).to_string(), w)
            })
            .collect();
        assert_eq!(
            named,
            vec![
                ("c1".into(), "c2".into(), 2),
                ("m".into(), "w".into(), 2),
            ]
        );
    }

    #[test]
    fn k_filter_drops_light_pairs() {
        let snap = two_by_two();
        let g2 = neighborhood_graph(&snap, 2).unwrap();
        assert_eq!(g2.edge_count(), 2);
        assert_eq!(g2.edge_weight(&h("c2"), &h("c1")), Some(2));
        let g3 = neighborhood_graph(&snap, 3).unwrap();
        assert_eq!(g3.edge_count(), 0);
        assert_eq!(g3.node_count(), 4);
        assert!(g3.is_isolated(&h("m")));
    }

    #[test]
    fn weights_ignore_node_restriction() {
        // a and b share only c; restricting the node set to {a, b} keeps
        // the edge because c still counts as a common neighbor.
        let snap = ConnectionSnapshot::from_connections(
            "t",
            vec![(h("a"), h("c")), (h("b"), h("c"))],
        )
        .unwrap();
        let over: BTreeSet<HostId> = [h("a"), h("b")].into_iter().collect();
        let g = neighborhood_graph_over(&snap, 1, &over).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_weight(&h("a"), &h("b")), Some(1));
    }

    #[test]
    fn zero_threshold_is_rejected() {
        let err = neighborhood_graph(&two_by_two(), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn foreign_nodes_are_rejected() {
        let over: BTreeSet<HostId> = [h("nope")].into_iter().collect();
        let err = neighborhood_graph_over(&two_by_two(), 1, &over).unwrap_err();
        assert_eq!(err, Error::UnknownHost(h("nope")));
    }

    #[test]
    fn grouping_excludes_edges_not_weights() {
        let mut g = ConnGraph::new(&two_by_two());
        assert_eq!(g.ungrouped_k_edges(2).len(), 2);
        let m = g.index_of(&h("m")).unwrap();
        g.mark_grouped(m, GroupId(0)).unwrap();
        let remaining = g.ungrouped_k_edges(2);
        assert_eq!(remaining.len(), 1);
        // The surviving client pair still weighs 2 even though one of the
        // servers providing that weight is grouped away.
        assert_eq!(remaining[0].2, 2);
        assert_eq!(g.ungrouped_indices().len(), 3);
        let err = g.mark_grouped(m, GroupId(1)).unwrap_err();
        assert_eq!(err, Error::AlreadyGrouped(h("m"), GroupId(0)));
    }
}
