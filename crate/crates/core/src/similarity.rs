//! Pairwise host similarity: the number of third-party hosts two hosts have
//! in common.
//!
//! Two hosts play the same role when they talk to the same set of peers, so
//! similarity is measured on connection sets, not on direct adjacency: a pair
//! of hosts that communicate only with each other share no third party and
//! score 0.

use crate::error::{Error, Result};
use crate::snapshot::{ConnectionSnapshot, HostId};
use num_rational::Ratio;
use std::collections::BTreeSet;

/// Number of common members of the two hosts' connection sets.
pub fn pair_similarity(snapshot: &ConnectionSnapshot, a: &HostId, b: &HostId) -> Result<u32> {
    if a == b {
        return Err(Error::SelfComparison(a.clone()));
    }
    let ca = snapshot.neighbors(a)?;
    let cb = snapshot.neighbors(b)?;
    // Walk the smaller set, probe the larger.
    let (small, large) = if ca.len() <= cb.len() { (ca, cb) } else { (cb, ca) };
    Ok(small.iter().filter(|h| large.contains(*h)).count() as u32)
}

/// Mean pair similarity between `host` and the members of `set`, excluding
/// `host` itself from the comparison when it is a member.
///
/// The result is exact; the divisor is the number of members actually
/// compared against. An empty comparison set (or one containing only `host`)
/// has no defined average.
pub fn avg_similarity(
    snapshot: &ConnectionSnapshot,
    host: &HostId,
    set: &BTreeSet<HostId>,
) -> Result<Ratio<u64>> {
    let mut total: u64 = 0;
    let mut compared: u64 = 0;
    for other in set {
        if other == host {
            continue;
        }
        total += u64::from(pair_similarity(snapshot, host, other)?);
        compared += 1;
    }
    if compared == 0 {
        return Err(Error::EmptyComparisonSet);
    }
    Ok(Ratio::new(total, compared))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HostId {
        HostId::new(s).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<HostId> {
        names.iter().map(|s| h(s)).collect()
    }

    /// A hub shared by two spokes plus one spoke-only peer.
    fn star() -> ConnectionSnapshot {
        ConnectionSnapshot::from_connections(
            "star",
            vec![(h("hub"), h("s1")), (h("hub"), h("s2")), (h("s1"), h("leaf"))],
        )
        .unwrap()
    }

    #[test]
    fn counts_common_peers() {
        let snap = star();
        assert_eq!(pair_similarity(&snap, &h("s1"), &h("s2")).unwrap(), 1);
        assert_eq!(pair_similarity(&snap, &h("s2"), &h("s1")).unwrap(), 1);
    }

    #[test]
    fn mutually_connected_pair_without_third_party_scores_zero() {
        let snap =
            ConnectionSnapshot::from_connections("pair", vec![(h("a"), h("b"))]).unwrap();
        assert_eq!(pair_similarity(&snap, &h("a"), &h("b")).unwrap(), 0);
    }

    #[test]
    fn disjoint_connection_sets_score_zero() {
        let snap = ConnectionSnapshot::from_connections(
            "two-pairs",
            vec![(h("a"), h("b")), (h("c"), h("d"))],
        )
        .unwrap();
        assert_eq!(pair_similarity(&snap, &h("a"), &h("c")).unwrap(), 0);
    }

    #[test]
    fn self_comparison_is_an_error() {
        let snap = star();
        assert_eq!(
            pair_similarity(&snap, &h("hub"), &h("hub")).unwrap_err(),
            Error::SelfComparison(h("hub"))
        );
    }

    #[test]
    fn unknown_host_is_an_error() {
        let snap = star();
        assert!(matches!(
            pair_similarity(&snap, &h("hub"), &h("nope")),
            Err(Error::UnknownHost(_))
        ));
    }

    #[test]
    fn average_excludes_the_host_itself() {
        let snap = star();
        // s1 vs {s1, s2}: only the s2 comparison counts.
        let v = avg_similarity(&snap, &h("s1"), &set(&["s1", "s2"])).unwrap();
        assert_eq!(v, Ratio::new(1, 1));
    }

    #[test]
    fn average_over_singleton_matches_pair_similarity() {
        let snap = star();
        let v = avg_similarity(&snap, &h("s1"), &set(&["s2"])).unwrap();
        assert_eq!(v, Ratio::from_integer(1));
    }

    #[test]
    fn average_with_no_counterparts_is_undefined() {
        let snap = star();
        assert_eq!(
            avg_similarity(&snap, &h("s1"), &set(&[])).unwrap_err(),
            Error::EmptyComparisonSet
        );
        assert_eq!(
            avg_similarity(&snap, &h("s1"), &set(&["s1"])).unwrap_err(),
            Error::EmptyComparisonSet
        );
    }

    #[test]
    fn isolated_host_averages_zero() {
        let hosts = set(&["a", "b", "x"]);
        let snap = ConnectionSnapshot::new("t", hosts, vec![(h("a"), h("b"))]).unwrap();
        let v = avg_similarity(&snap, &h("x"), &set(&["a", "b"])).unwrap();
        assert_eq!(v, Ratio::from_integer(0));
    }
}
