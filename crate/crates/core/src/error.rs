use crate::partition::GroupId;
use crate::snapshot::HostId;
use thiserror::Error;

/// Errors produced by snapshot construction, graph queries, and the
/// grouping/correlation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid host id {token:?}: {reason}")]
    InvalidHostId { token: String, reason: &'static str },

    #[error("connection ({0},{0}) connects a host to itself")]
    SelfConnection(HostId),

    #[error("connection ({a},{b}) references {missing}, which is not a declared host")]
    UnknownEndpoint { a: HostId, b: HostId, missing: HostId },

    #[error("unknown host {0}")]
    UnknownHost(HostId),

    #[error("cannot compare a host with itself")]
    SelfComparison(HostId),

    #[error("average similarity is undefined against an empty comparison set")]
    EmptyComparisonSet,

    #[error("host {0} is already assigned to group {1}")]
    AlreadyGrouped(HostId, GroupId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown group {0}")]
    UnknownGroup(GroupId),

    #[error("cannot compare group {0} with itself")]
    SelfGroupComparison(GroupId),

    #[error("group {0} has no members")]
    EmptyGroup(GroupId),

    #[error("host {host} appears in groups {first} and {second}")]
    OverlappingGroups {
        host: HostId,
        first: GroupId,
        second: GroupId,
    },

    #[error("host {0} is not covered by any group")]
    UncoveredHost(HostId),

    #[error("group member {0} is not a host of the snapshot")]
    ForeignMember(HostId),

    #[error(
        "partitionings cover different host sets (only in first: {only_in_first:?}; \
         only in second: {only_in_second:?})"
    )]
    HostSetMismatch {
        only_in_first: Vec<HostId>,
        only_in_second: Vec<HostId>,
    },

    #[error("the two runs share no hosts; nothing can be correlated")]
    EmptyAlignment,
}

pub type Result<T> = std::result::Result<T, Error>;
