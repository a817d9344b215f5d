//! Biconnected components of undirected graphs.
//!
//! A biconnected component is a maximal set of edges in which any two
//! edges lie on a common simple cycle; a lone bridge edge forms a
//! component of its own. Components are reported as vertex sets, so a cut
//! vertex appears in every component it joins, and isolated vertices
//! appear in none.

use crate::conn_graph::NeighborhoodGraph;
use crate::snapshot::HostId;
use std::collections::{BTreeMap, BTreeSet};

/// Biconnected components of `graph`, each a set of at least two hosts,
/// sorted by their member sequences.
pub fn find_bccs(graph: &NeighborhoodGraph) -> Vec<BTreeSet<HostId>> {
    let nodes: Vec<&HostId> = graph.nodes().collect();
    let index: BTreeMap<&HostId, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, h)| (*h, i as u32))
        .collect();
    let edges: Vec<(u32, u32)> = graph
        .edges()
        .keys()
        .map(|(a, b)| (index[a], index[b]))
        .collect();
    biconnected_components(nodes.len(), &edges)
        .into_iter()
        .map(|comp| comp.into_iter().map(|i| nodes[i as usize].clone()).collect())
        .collect()
}

/// Index-based Tarjan-Hopcroft biconnected components, iterative so that
/// deep graphs cannot overflow the call stack. Vertices are `0..n`; edges
/// are undirected and assumed simple. Each returned component is sorted
/// ascending, and components are sorted by their vertex sequences.
pub(crate) fn biconnected_components(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut disc = vec![0u32; n]; // discovery time, 0 = unvisited
    let mut low = vec![0u32; n];
    let mut timer = 0u32;
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    // DFS frames: (vertex, parent, index of the next neighbor to examine).
    let mut frames: Vec<(u32, u32, usize)> = Vec::new();
    let mut components: Vec<Vec<u32>> = Vec::new();

    for root in 0..n as u32 {
        if disc[root as usize] != 0 || adj[root as usize].is_empty() {
            continue;
        }
        timer += 1;
        disc[root as usize] = timer;
        low[root as usize] = timer;
        frames.push((root, u32::MAX, 0));

        while let Some(top) = frames.last().copied() {
            let (u, parent, next) = top;
            let ui = u as usize;
            if next < adj[ui].len() {
                frames.last_mut().expect("frame exists").2 += 1;
                let v = adj[ui][next];
                let vi = v as usize;
                if disc[vi] == 0 {
                    edge_stack.push((u, v));
                    timer += 1;
                    disc[vi] = timer;
                    low[vi] = timer;
                    frames.push((v, u, 0));
                } else if v != parent && disc[vi] < disc[ui] {
                    edge_stack.push((u, v));
                    low[ui] = low[ui].min(disc[vi]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    let pi = p as usize;
                    low[pi] = low[pi].min(low[ui]);
                    if low[ui] >= disc[pi] {
                        // u's subtree reaches no higher than p: the edges
                        // pushed since (p, u) form one component. Those
                        // edges originate inside u's subtree, so their
                        // tails were discovered no earlier than u.
                        let mut vertices = BTreeSet::new();
                        while let Some(&(x, y)) = edge_stack.last() {
                            if disc[x as usize] >= disc[ui] {
                                vertices.insert(x);
                                vertices.insert(y);
                                edge_stack.pop();
                            } else {
                                break;
                            }
                        }
                        let (x, y) = edge_stack.pop().expect("tree edge present");
                        debug_assert_eq!((x, y), (p, u));
                        vertices.insert(x);
                        vertices.insert(y);
                        components.push(vertices.into_iter().collect());
                    }
                }
            }
        }
        debug_assert!(edge_stack.is_empty());
    }

    components.sort_unstable();
    components
}
