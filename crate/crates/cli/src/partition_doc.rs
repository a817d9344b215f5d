//! The partitioning document: a line-oriented text format that carries a
//! labeled partitioning, the configuration that produced it, each
//! member's connection count, and the connection volumes between
//! neighboring groups. Human-readable, machine-parsable, byte-stable.
//!
//! ```text
//! # rolegraph partitioning v1
//! label: fig33
//! alpha: 3/5
//! beta: 0.5
//! s_hi: 80
//! s_lo: 55
//! k_hi: 7
//! group: 0 k=6 avg=6.0 members=Mail:6,Web:6
//! comm: 0 1 total=6 avg_a=3.0 avg_b=2.0
//! ```
//!
//! Hand-written documents (ground truth for evaluation) may leave out
//! everything but the `group:` ids and bare member lists.

use crate::errors::{CliError, CliResult};
use num_rational::Ratio;
use rolegraph::{
    ConnectionSnapshot, FormationConfig, Group, GroupGraph, GroupId, HostId, MergeConfig,
    Partitioning,
};
use std::collections::BTreeMap;

pub const HEADER: &str = "# rolegraph partitioning v1";

/// Configuration echo carried by a document. Absent keys fall back to
/// defaults when the document is used to drive a new run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DocConfig {
    pub alpha: Option<Ratio<u64>>,
    pub beta: Option<f64>,
    pub s_hi: Option<f64>,
    pub s_lo: Option<f64>,
    pub k_hi: Option<u32>,
}

impl DocConfig {
    pub fn formation_config(&self) -> FormationConfig {
        let defaults = FormationConfig::default();
        FormationConfig { alpha: self.alpha.unwrap_or(defaults.alpha) }
    }

    pub fn merge_config(&self) -> MergeConfig {
        let defaults = MergeConfig::default();
        MergeConfig {
            beta: self.beta.unwrap_or(defaults.beta),
            s_hi: self.s_hi.unwrap_or(defaults.s_hi),
            s_lo: self.s_lo.unwrap_or(defaults.s_lo),
            k_hi: self.k_hi.unwrap_or(defaults.k_hi),
        }
    }

    pub fn from_configs(formation: &FormationConfig, merge: &MergeConfig) -> Self {
        DocConfig {
            alpha: Some(formation.alpha),
            beta: Some(merge.beta),
            s_hi: Some(merge.s_hi),
            s_lo: Some(merge.s_lo),
            k_hi: Some(merge.k_hi),
        }
    }
}

/// Connection volume between two groups as recorded in a document:
/// total host-level connections plus the per-member averages seen from
/// each side.
#[derive(Debug, Clone, PartialEq)]
pub struct CommRecord {
    pub a: GroupId,
    pub b: GroupId,
    pub total: u64,
    pub avg_a: f64,
    pub avg_b: f64,
}

/// A parsed partitioning document.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionDoc {
    pub label: String,
    pub config: DocConfig,
    pub partitioning: Partitioning,
    /// Connection counts annotated per member, where present.
    pub degrees: BTreeMap<HostId, u64>,
    pub comms: Vec<CommRecord>,
}

/// Parses a rational from "3/5", "0.6", or "2" — always exactly.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
        let den: u64 = den.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
        if den == 0 {
            return Err("denominator cannot be zero".into());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| format!("bad number {text:?}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number {text:?}"));
        }
        let scale = 10u64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| format!("too many decimal places in {text:?}"))?;
        let frac_value: u64 = frac.parse().map_err(|_| format!("bad number {text:?}"))?;
        let numerator = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac_value))
            .ok_or_else(|| format!("number out of range: {text:?}"))?;
        return Ok(Ratio::new(numerator, scale));
    }
    let whole: u64 = text.parse().map_err(|_| format!("bad number {text:?}"))?;
    Ok(Ratio::from_integer(whole))
}

fn ratio_string(r: Ratio<u64>) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct LineParser<'a> {
    number: usize,
    line: &'a str,
}

impl LineParser<'_> {
    fn fail(&self, message: impl std::fmt::Display) -> CliError {
        CliError::Validation(format!("line {}: {message}", self.number))
    }

    fn parse_f64(&self, value: &str, key: &str) -> CliResult<f64> {
        value
            .parse::<f64>()
            .map_err(|_| self.fail(format!("bad {key} value {value:?}")))
    }
}

/// Parses a partitioning document.
pub fn parse_partition_doc(text: &str) -> CliResult<PartitionDoc> {
    let mut label = String::new();
    let mut config = DocConfig::default();
    let mut groups: Vec<Group> = Vec::new();
    let mut degrees: BTreeMap<HostId, u64> = BTreeMap::new();
    let mut comms: Vec<CommRecord> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let p = LineParser { number: index + 1, line: raw.trim() };
        let line = p.line;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(value) = line.strip_prefix("label:") {
            label = value.trim().to_string();
        } else if let Some(value) = line.strip_prefix("alpha:") {
            config.alpha = Some(parse_ratio(value).map_err(|e| p.fail(e))?);
        } else if let Some(value) = line.strip_prefix("beta:") {
            config.beta = Some(p.parse_f64(value.trim(), "beta")?);
        } else if let Some(value) = line.strip_prefix("s_hi:") {
            config.s_hi = Some(p.parse_f64(value.trim(), "s_hi")?);
        } else if let Some(value) = line.strip_prefix("s_lo:") {
            config.s_lo = Some(p.parse_f64(value.trim(), "s_lo")?);
        } else if let Some(value) = line.strip_prefix("k_hi:") {
            let value = value.trim();
            config.k_hi =
                Some(value.parse().map_err(|_| p.fail(format!("bad k_hi value {value:?}")))?);
        } else if let Some(rest) = line.strip_prefix("group:") {
            groups.push(parse_group_line(&p, rest, &mut degrees)?);
        } else if let Some(rest) = line.strip_prefix("comm:") {
            comms.push(parse_comm_line(&p, rest)?);
        } else {
            return Err(p.fail("unrecognized line"));
        }
    }

    let partitioning = Partitioning::from_groups(label.clone(), groups)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    for comm in &comms {
        for id in [comm.a, comm.b] {
            if partitioning.get(id).is_none() {
                return Err(CliError::Validation(format!(
                    "comm record references unknown group {id}"
                )));
            }
        }
    }
    Ok(PartitionDoc { label, config, partitioning, degrees, comms })
}

fn parse_group_line(
    p: &LineParser<'_>,
    rest: &str,
    degrees: &mut BTreeMap<HostId, u64>,
) -> CliResult<Group> {
    let mut tokens = rest.split_whitespace();
    let id: u64 = tokens
        .next()
        .ok_or_else(|| p.fail("group line needs an id"))?
        .parse()
        .map_err(|_| p.fail("group id must be an unsigned integer"))?;
    let mut k_value = 0u32;
    let mut members = None;
    for token in tokens {
        if let Some(value) = token.strip_prefix("k=") {
            k_value = value.parse().map_err(|_| p.fail(format!("bad k value {value:?}")))?;
        } else if let Some(value) = token.strip_prefix("avg=") {
            // Derived from the members' connections; recomputed on write.
            p.parse_f64(value, "avg")?;
        } else if let Some(value) = token.strip_prefix("members=") {
            let mut set = std::collections::BTreeSet::new();
            for entry in value.split(',') {
                let (name, degree) = match entry.split_once(':') {
                    Some((name, degree)) => (name, Some(degree)),
                    None => (entry, None),
                };
                let host = HostId::new(name).map_err(|e| p.fail(e))?;
                if let Some(degree) = degree {
                    let degree: u64 = degree
                        .parse()
                        .map_err(|_| p.fail(format!("bad connection count {degree:?}")))?;
                    degrees.insert(host.clone(), degree);
                }
                set.insert(host);
            }
            members = Some(set);
        } else {
            return Err(p.fail(format!("unrecognized group attribute {token:?}")));
        }
    }
    let members = members.ok_or_else(|| p.fail("group line needs members="))?;
    Group::new(GroupId(id), k_value, members).map_err(|e| p.fail(e))
}

fn parse_comm_line(p: &LineParser<'_>, rest: &str) -> CliResult<CommRecord> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() != 5 {
        return Err(p.fail("comm line needs: <a> <b> total=<n> avg_a=<x> avg_b=<x>"));
    }
    let a: u64 = tokens[0].parse().map_err(|_| p.fail("bad group id"))?;
    let b: u64 = tokens[1].parse().map_err(|_| p.fail("bad group id"))?;
    let total = tokens[2]
        .strip_prefix("total=")
        .ok_or_else(|| p.fail("expected total="))?
        .parse()
        .map_err(|_| p.fail("bad total"))?;
    let avg_a = p.parse_f64(
        tokens[3].strip_prefix("avg_a=").ok_or_else(|| p.fail("expected avg_a="))?,
        "avg_a",
    )?;
    let avg_b = p.parse_f64(
        tokens[4].strip_prefix("avg_b=").ok_or_else(|| p.fail("expected avg_b="))?,
        "avg_b",
    )?;
    Ok(CommRecord { a: GroupId(a), b: GroupId(b), total, avg_a, avg_b })
}

/// Renders a partitioning over its snapshot: member connection counts and
/// group-to-group volumes are recomputed from the snapshot.
pub fn render_partition_doc(
    label: &str,
    config: &DocConfig,
    partitioning: &Partitioning,
    snapshot: &ConnectionSnapshot,
) -> CliResult<String> {
    let graph = GroupGraph::new(partitioning, snapshot).map_err(CliError::from)?;
    let mut out = String::new();
    let w = |out: &mut String, s: String| out.push_str(&(s + "\n"));
    w(&mut out, HEADER.to_string());
    w(&mut out, format!("label: {label}"));
    if let Some(alpha) = config.alpha {
        w(&mut out, format!("alpha: {}", ratio_string(alpha)));
    }
    if let Some(beta) = config.beta {
        w(&mut out, format!("beta: {beta}"));
    }
    if let Some(s_hi) = config.s_hi {
        w(&mut out, format!("s_hi: {s_hi}"));
    }
    if let Some(s_lo) = config.s_lo {
        w(&mut out, format!("s_lo: {s_lo}"));
    }
    if let Some(k_hi) = config.k_hi {
        w(&mut out, format!("k_hi: {k_hi}"));
    }
    for group in partitioning.groups() {
        let avg = avg_to_f64(graph.avg_external(group.id).map_err(CliError::from)?);
        let members: Vec<String> = group
            .members
            .iter()
            .map(|m| {
                let degree = snapshot.degree(m).map_err(CliError::from)?;
                Ok(format!("{m}:{degree}"))
            })
            .collect::<CliResult<_>>()?;
        w(
            &mut out,
            format!(
                "group: {} k={} avg={:.1} members={}",
                group.id,
                group.k_value,
                avg,
                members.join(",")
            ),
        );
    }
    let ids: Vec<GroupId> = partitioning.group_ids().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let total = graph.connections_between(a, b).map_err(CliError::from)?;
            if total == 0 {
                continue;
            }
            let size_a = graph.size(a).map_err(CliError::from)?;
            let size_b = graph.size(b).map_err(CliError::from)?;
            w(
                &mut out,
                format!(
                    "comm: {a} {b} total={total} avg_a={:.1} avg_b={:.1}",
                    total as f64 / size_a as f64,
                    total as f64 / size_b as f64
                ),
            );
        }
    }
    Ok(out)
}

fn avg_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HostId {
        HostId::new(s).unwrap()
    }

    #[test]
    fn ratio_parsing_is_exact() {
        assert_eq!(parse_ratio("3/5").unwrap(), Ratio::new(3, 5));
        assert_eq!(parse_ratio("0.6").unwrap(), Ratio::new(3, 5));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_ratio(".25").unwrap(), Ratio::new(1, 4));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
        assert!(parse_ratio("0.6e1").is_err());
    }

    #[test]
    fn documents_round_trip() {
        let snapshot = crate::edge_list::parse_edge_list(
            "t",
            "s1,m\ns1,w\ns2,m\ns2,w\n",
        )
        .unwrap();
        let mut partitioning = Partitioning::new("t");
        partitioning
            .insert(Group::new(GroupId(0), 2, [h("m"), h("w")].into_iter().collect()).unwrap())
            .unwrap();
        partitioning
            .insert(Group::new(GroupId(1), 2, [h("s1"), h("s2")].into_iter().collect()).unwrap())
            .unwrap();
        let config = DocConfig::from_configs(&FormationConfig::default(), &MergeConfig::default());
        let text = render_partition_doc("t", &config, &partitioning, &snapshot).unwrap();
        let doc = parse_partition_doc(&text).unwrap();
        assert_eq!(doc.partitioning, partitioning);
        assert_eq!(doc.label, "t");
        assert_eq!(doc.config, config);
        assert_eq!(doc.degrees[&h("m")], 2);
        assert_eq!(doc.comms.len(), 1);
        assert_eq!(doc.comms[0].total, 4);
        // Rendering the parsed document again is byte-identical.
        let text2 = render_partition_doc(&doc.label, &doc.config, &doc.partitioning, &snapshot)
            .unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn bare_ground_truth_documents_parse() {
        let doc = parse_partition_doc("group: 0 members=a,b\ngroup: 1 members=c\n").unwrap();
        assert_eq!(doc.partitioning.len(), 2);
        assert_eq!(doc.config, DocConfig::default());
        assert!(doc.degrees.is_empty());
        assert_eq!(doc.partitioning.get(GroupId(0)).unwrap().k_value, 0);
    }

    #[test]
    fn unknown_lines_are_rejected() {
        let err = parse_partition_doc("label: x\nwhat is this\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        let err =
            parse_partition_doc("group: 0 members=a\ngroup: 1 members=a\n").unwrap_err();
        assert!(err.to_string().contains("appears in groups"), "{err}");
    }

    #[test]
    fn comm_records_must_reference_known_groups() {
        let err = parse_partition_doc(
            "group: 0 members=a,b\ncomm: 0 9 total=1 avg_a=0.5 avg_b=1.0\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown group 9"), "{err}");
    }
}
