//! Role groups and whole-network partitionings.

use crate::error::{Error, Result};
use crate::snapshot::{ConnectionSnapshot, HostId};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier of a role group, unique within one partitioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(pub u64);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of hosts believed to play one role.
///
/// `k_value` records how demanding the evidence for the group was: the
/// common-neighbor threshold at which the group condensed out of the
/// network, or, after merging, the minimum member degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub id: GroupId,
    pub k_value: u32,
    pub members: BTreeSet<HostId>,
}

impl Group {
    pub fn new(id: GroupId, k_value: u32, members: BTreeSet<HostId>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyGroup(id));
        }
        Ok(Group { id, k_value, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Smallest member token; used for deterministic orderings.
    pub fn least_member(&self) -> &HostId {
        self.members.iter().next().expect("groups are non-empty")
    }
}

/// A complete assignment of every host of a snapshot to exactly one group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partitioning {
    snapshot_label: String,
    groups: BTreeMap<GroupId, Group>,
}

impl Partitioning {
    pub fn new(snapshot_label: impl Into<String>) -> Self {
        Partitioning {
            snapshot_label: snapshot_label.into(),
            groups: BTreeMap::new(),
        }
    }

    pub fn from_groups(
        snapshot_label: impl Into<String>,
        groups: impl IntoIterator<Item = Group>,
    ) -> Result<Self> {
        let mut p = Partitioning::new(snapshot_label);
        for g in groups {
            p.insert(g)?;
        }
        Ok(p)
    }

    /// Adds a group, rejecting duplicate ids and member overlap.
    pub fn insert(&mut self, group: Group) -> Result<()> {
        if self.groups.contains_key(&group.id) {
            return Err(Error::InvalidConfig(format!(
                "duplicate group id {}",
                group.id
            )));
        }
        for member in &group.members {
            if let Some(existing) = self.group_of(member) {
                return Err(Error::OverlappingGroups {
                    host: member.clone(),
                    first: existing,
                    second: group.id,
                });
            }
        }
        self.groups.insert(group.id, group);
        Ok(())
    }

    pub fn snapshot_label(&self) -> &str {
        &self.snapshot_label
    }

    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.groups.values()
    }

    pub fn group_ids(&self) -> impl Iterator<Item = GroupId> + '_ {
        self.groups.keys().copied()
    }

    pub fn get(&self, id: GroupId) -> Option<&Group> {
        self.groups.get(&id)
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// The group containing `host`, if any.
    pub fn group_of(&self, host: &HostId) -> Option<GroupId> {
        self.groups
            .values()
            .find(|g| g.members.contains(host))
            .map(|g| g.id)
    }

    /// Map from host to owning group id (groups are disjoint by
    /// construction).
    pub fn membership(&self) -> BTreeMap<&HostId, GroupId> {
        let mut map = BTreeMap::new();
        for g in self.groups.values() {
            for m in &g.members {
                map.insert(m, g.id);
            }
        }
        map
    }

    /// Union of all member sets.
    pub fn covered_hosts(&self) -> BTreeSet<HostId> {
        self.groups
            .values()
            .flat_map(|g| g.members.iter().cloned())
            .collect()
    }

    /// Checks that this partitioning covers exactly the hosts of `snapshot`,
    /// with no host in two groups.
    pub fn validate_against(&self, snapshot: &ConnectionSnapshot) -> Result<()> {
        let mut seen: BTreeMap<&HostId, GroupId> = BTreeMap::new();
        for g in self.groups.values() {
            for m in &g.members {
                if !snapshot.contains(m) {
                    return Err(Error::ForeignMember(m.clone()));
                }
                if let Some(&first) = seen.get(m) {
                    return Err(Error::OverlappingGroups {
                        host: m.clone(),
                        first,
                        second: g.id,
                    });
                }
                seen.insert(m, g.id);
            }
        }
        for host in snapshot.hosts() {
            if !seen.contains_key(host) {
                return Err(Error::UncoveredHost(host.clone()));
            }
        }
        Ok(())
    }

    pub(crate) fn remove(&mut self, id: GroupId) -> Option<Group> {
        self.groups.remove(&id)
    }

    pub(crate) fn replace(&mut self, group: Group) {
        self.groups.insert(group.id, group);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HostId {
        HostId::new(s).unwrap()
    }

    fn members(names: &[&str]) -> BTreeSet<HostId> {
        names.iter().map(|s| h(s)).collect()
    }

    #[test]
    fn insert_rejects_overlap() {
        let mut p = Partitioning::new("t");
        p.insert(Group::new(GroupId(0), 2, members(&["a", "b"])).unwrap())
            .unwrap();
        let err = p
            .insert(Group::new(GroupId(1), 1, members(&["b"])).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::OverlappingGroups { .. }));
    }

    #[test]
    fn empty_groups_are_rejected() {
        assert!(matches!(
            Group::new(GroupId(0), 0, BTreeSet::new()),
            Err(Error::EmptyGroup(_))
        ));
    }

    #[test]
    fn validate_detects_uncovered_hosts() {
        let snap =
            ConnectionSnapshot::from_connections("t", vec![(h("a"), h("b"))]).unwrap();
        let mut p = Partitioning::new("t");
        p.insert(Group::new(GroupId(0), 0, members(&["a"])).unwrap())
            .unwrap();
        assert_eq!(
            p.validate_against(&snap).unwrap_err(),
            Error::UncoveredHost(h("b"))
        );
        p.insert(Group::new(GroupId(1), 0, members(&["b"])).unwrap())
            .unwrap();
        p.validate_against(&snap).unwrap();
    }

    #[test]
    fn membership_maps_every_member() {
        let mut p = Partitioning::new("t");
        p.insert(Group::new(GroupId(3), 1, members(&["x", "y"])).unwrap())
            .unwrap();
        let m = p.membership();
        assert_eq!(m.get(&h("x")), Some(&GroupId(3)));
        assert_eq!(p.group_of(&h("y")), Some(GroupId(3)));
        assert_eq!(p.group_of(&h("z")), None);
    }
}
