//! End-to-end command pipelines over already-parsed inputs. File and
//! terminal plumbing stays in `main`.

use crate::errors::{CliError, CliResult};
use crate::partition_doc::{render_partition_doc, DocConfig, PartitionDoc};
use rolegraph::{
    correlate, form_groups, merge_pass, partition_diff, rand_counts, ConnectionSnapshot,
    CorrelationConfig, FormationConfig, Group, GroupId, MergeConfig, Partitioning,
};
use std::fmt::Write as _;

/// Effective settings for one grouping run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingSettings {
    pub formation: FormationConfig,
    pub merge: MergeConfig,
    pub skip_merge: bool,
}

impl Default for GroupingSettings {
    fn default() -> Self {
        GroupingSettings {
            formation: FormationConfig::default(),
            merge: MergeConfig::default(),
            skip_merge: false,
        }
    }
}

impl GroupingSettings {
    pub fn doc_config(&self) -> DocConfig {
        DocConfig::from_configs(&self.formation, &self.merge)
    }
}

/// Forms and (unless skipped) merges groups.
pub fn group_pipeline(
    snapshot: &ConnectionSnapshot,
    settings: &GroupingSettings,
) -> CliResult<Partitioning> {
    // Merge settings are validated even when the merge phase is skipped,
    // so a bad flag never passes silently.
    settings.merge.validate()?;
    let formed = form_groups(snapshot, &settings.formation)?;
    if settings.skip_merge {
        return Ok(formed.partitioning);
    }
    let merged = merge_pass(&formed.partitioning, snapshot, &settings.merge)?;
    Ok(merged.partitioning)
}

/// The `group` command: snapshot in, partitioning document out.
pub fn run_group(
    snapshot: &ConnectionSnapshot,
    settings: &GroupingSettings,
) -> CliResult<String> {
    let partitioning = group_pipeline(snapshot, settings)?;
    render_partition_doc(snapshot.label(), &settings.doc_config(), &partitioning, snapshot)
}

/// Output of the `correlate` command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelateOutput {
    /// The current run's partitioning, ids rewritten to match the
    /// previous run.
    pub partitioning_doc: String,
    /// Mapping, new/retired groups, unchanged hosts, and drift summary.
    pub correlation_doc: String,
}

/// The `correlate` command: groups the current snapshot (using the
/// previous document's configuration unless overridden), matches the
/// result against the previous partitioning, and rewrites current ids to
/// their predecessors' — fresh ids, above every previous id, for groups
/// without a predecessor.
pub fn run_correlate(
    prev_snapshot: &ConnectionSnapshot,
    prev_doc: &PartitionDoc,
    curr_snapshot: &ConnectionSnapshot,
    settings: &GroupingSettings,
    correlation_config: &CorrelationConfig,
) -> CliResult<CorrelateOutput> {
    prev_doc
        .partitioning
        .validate_against(prev_snapshot)
        .map_err(|e| {
            CliError::Validation(format!(
                "previous partitioning does not match the previous edge list: {e}"
            ))
        })?;

    let curr_partitioning = group_pipeline(curr_snapshot, settings)?;
    let correlation = correlate(
        prev_snapshot,
        &prev_doc.partitioning,
        curr_snapshot,
        &curr_partitioning,
        correlation_config,
    )?;
    let diff = partition_diff(&prev_doc.partitioning, &curr_partitioning, &correlation)?;

    let mut next_fresh = prev_doc
        .partitioning
        .group_ids()
        .map(|g| g.0 + 1)
        .max()
        .unwrap_or(0);
    let mut rewritten = Partitioning::new(curr_snapshot.label());
    let mut fresh_ids: Vec<(GroupId, GroupId)> = Vec::new();
    for group in curr_partitioning.groups() {
        let new_id = match correlation.mapping.get(&group.id) {
            Some(&prior) => prior,
            None => {
                let id = GroupId(next_fresh);
                next_fresh += 1;
                fresh_ids.push((group.id, id));
                id
            }
        };
        rewritten
            .insert(Group::new(new_id, group.k_value, group.members.clone())?)
            .map_err(CliError::from)?;
    }

    let partitioning_doc = render_partition_doc(
        curr_snapshot.label(),
        &settings.doc_config(),
        &rewritten,
        curr_snapshot,
    )?;

    let mut out = String::new();
    writeln!(out, "# rolegraph correlation v1").expect("string write");
    writeln!(out, "prev: {}", prev_doc.label).expect("string write");
    writeln!(out, "curr: {}", curr_snapshot.label()).expect("string write");
    writeln!(
        out,
        "summary: correlated={} new={} retired={}",
        correlation.mapping.len(),
        correlation.new_groups.len(),
        correlation.retired_groups.len()
    )
    .expect("string write");
    let h_same: Vec<String> = correlation.h_same.iter().map(|h| h.to_string()).collect();
    writeln!(out, "h_same: {}", h_same.join(",")).expect("string write");
    for (curr_id, prior_id) in &correlation.mapping {
        writeln!(out, "map: {curr_id} -> {prior_id}").expect("string write");
    }
    for (orig, fresh) in &fresh_ids {
        writeln!(out, "new: {orig} -> {fresh}").expect("string write");
    }
    for retired in &correlation.retired_groups {
        writeln!(out, "retired: {retired}").expect("string write");
    }
    let mut changes = diff.changed;
    changes.sort_by_key(|c| c.prior);
    for change in &changes {
        let added: Vec<String> = change.added.iter().map(|h| h.to_string()).collect();
        let removed: Vec<String> = change.removed.iter().map(|h| h.to_string()).collect();
        writeln!(
            out,
            "diff: {} added={} removed={} k={}->{}",
            change.prior,
            added.join(","),
            removed.join(","),
            change.k_before,
            change.k_after
        )
        .expect("string write");
    }
    Ok(CorrelateOutput { partitioning_doc, correlation_doc: out })
}

/// The `evaluate` command: agreement counts between a produced
/// partitioning and a reference one, as CSV.
pub fn run_evaluate(candidate: &PartitionDoc, reference: &PartitionDoc) -> CliResult<String> {
    let counts = rand_counts(&reference.partitioning, &candidate.partitioning)?;
    Ok(format!(
        "ss,sd,ds,dd,r\n{},{},{},{},{:.4}\n",
        counts.same_same,
        counts.same_diff,
        counts.diff_same,
        counts.diff_diff,
        counts.statistic()
    ))
}
