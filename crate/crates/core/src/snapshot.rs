//! Observed hosts and their connections over one collection window.
//!
//! A [`ConnectionSnapshot`] is the input to everything else: an undirected
//! graph whose vertices are hosts and whose edges record that two hosts
//! communicated at least once during the window. Connections are unordered,
//! deduplicated pairs; a host may also be declared with no connections at all.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Opaque, stable identifier of a host (an address or a name).
///
/// Tokens are non-empty and contain no whitespace. `,` and `:` are also
/// rejected because they act as separators in the text formats built on top
/// of this library.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostId(String);

impl HostId {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        let reason = if token.is_empty() {
            Some("must not be empty")
        } else if token.chars().any(char::is_whitespace) {
            Some("must not contain whitespace")
        } else if token.contains(',') || token.contains(':') {
            Some("must not contain ',' or ':'")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidHostId { token, reason }),
            None => Ok(HostId(token)),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for HostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for HostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::str::FromStr for HostId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HostId::new(s)
    }
}

/// Returns the canonical (lexicographically ordered) form of a host pair.
pub fn ordered_pair(a: HostId, b: HostId) -> (HostId, HostId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All hosts seen in one collection window plus the set of host pairs that
/// communicated.
///
/// Invariants enforced at construction:
/// - every connection endpoint is a declared host,
/// - no host connects to itself,
/// - pairs are stored in canonical order and deduplicated.
#[derive(Clone, PartialEq, Eq)]
pub struct ConnectionSnapshot {
    label: String,
    hosts: BTreeSet<HostId>,
    connections: BTreeSet<(HostId, HostId)>,
    adjacency: BTreeMap<HostId, BTreeSet<HostId>>,
}

impl ConnectionSnapshot {
    /// Builds a snapshot from an explicit host set and a list of connections.
    pub fn new(
        label: impl Into<String>,
        hosts: BTreeSet<HostId>,
        connections: impl IntoIterator<Item = (HostId, HostId)>,
    ) -> Result<Self> {
        let mut canonical = BTreeSet::new();
        let mut adjacency: BTreeMap<HostId, BTreeSet<HostId>> =
            hosts.iter().map(|h| (h.clone(), BTreeSet::new())).collect();
        for (a, b) in connections {
            if a == b {
                return Err(Error::SelfConnection(a));
            }
            for end in [&a, &b] {
                if !hosts.contains(end) {
                    return Err(Error::UnknownEndpoint {
                        a: a.clone(),
                        b: b.clone(),
                        missing: end.clone(),
                    });
                }
            }
            let (x, y) = ordered_pair(a, b);
            if canonical.insert((x.clone(), y.clone())) {
                adjacency.get_mut(&x).unwrap().insert(y.clone());
                adjacency.get_mut(&y).unwrap().insert(x);
            }
        }
        Ok(ConnectionSnapshot {
            label: label.into(),
            hosts,
            connections: canonical,
            adjacency,
        })
    }

    /// Builds a snapshot whose host set is exactly the endpoints mentioned in
    /// `connections`.
    pub fn from_connections(
        label: impl Into<String>,
        connections: impl IntoIterator<Item = (HostId, HostId)>,
    ) -> Result<Self> {
        let connections: Vec<(HostId, HostId)> = connections.into_iter().collect();
        let hosts = connections
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        Self::new(label, hosts, connections)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hosts(&self) -> &BTreeSet<HostId> {
        &self.hosts
    }

    pub fn connections(&self) -> &BTreeSet<(HostId, HostId)> {
        &self.connections
    }

    pub fn contains(&self, host: &HostId) -> bool {
        self.hosts.contains(host)
    }

    /// The connection set of `host`: every peer it communicated with.
    pub fn neighbors(&self, host: &HostId) -> Result<&BTreeSet<HostId>> {
        self.adjacency
            .get(host)
            .ok_or_else(|| Error::UnknownHost(host.clone()))
    }

    /// Number of distinct peers of `host`.
    pub fn degree(&self, host: &HostId) -> Result<usize> {
        Ok(self.neighbors(host)?.len())
    }

    pub fn host_count(&self) -> usize {
        self.hosts.len()
    }

    pub fn connection_count(&self) -> usize {
        self.connections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hosts.is_empty()
    }

    /// True iff `a` and `b` communicated in this window.
    pub fn connected(&self, a: &HostId, b: &HostId) -> bool {
        if a == b {
            return false;
        }
        let (x, y) = ordered_pair(a.clone(), b.clone());
        self.connections.contains(&(x, y))
    }

    /// Restricts the snapshot to `keep`, dropping any connection with an
    /// endpoint outside it.
    pub fn restricted_to(&self, keep: &BTreeSet<HostId>) -> ConnectionSnapshot {
        let hosts: BTreeSet<HostId> = self.hosts.intersection(keep).cloned().collect();
        let connections = self
            .connections
            .iter()
            .filter(|(a, b)| hosts.contains(a) && hosts.contains(b))
            .cloned();
        ConnectionSnapshot::new(self.label.clone(), hosts.clone(), connections)
            .expect("restriction of a valid snapshot is valid")
    }
}

impl fmt::Debug for ConnectionSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionSnapshot")
            .field("label", &self.label)
            .field("hosts", &self.hosts.len())
            .field("connections", &self.connections.len())
            .finish()
    }
}
