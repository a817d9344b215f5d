//! Human-oriented rendering of a partitioning document.

use crate::partition_doc::PartitionDoc;
use std::fmt::Write as _;

/// Renders a parsed document as an indented per-group report: the group
/// header with its cohesion value, each member with its connection count
/// (where the document records one), then the per-member connection
/// volume toward each neighboring group.
pub fn render_report(doc: &PartitionDoc) -> String {
    let mut out = String::new();
    for group in doc.partitioning.groups() {
        writeln!(out, "Group {} ({})", group.id, group.k_value).expect("string write");
        for member in &group.members {
            match doc.degrees.get(member) {
                Some(degree) => writeln!(out, "  {member} {degree}"),
                None => writeln!(out, "  {member}"),
            }
            .expect("string write");
        }
        let mut comm_lines: Vec<(u64, f64)> = Vec::new();
        for comm in &doc.comms {
            if comm.a == group.id {
                comm_lines.push((comm.b.0, comm.avg_a));
            } else if comm.b == group.id {
                comm_lines.push((comm.a.0, comm.avg_b));
            }
        }
        comm_lines.sort_by(|x, y| x.0.cmp(&y.0));
        for (neighbor, avg) in comm_lines {
            writeln!(out, "  comm with {neighbor}: {avg:.1}").expect("string write");
        }
    }
    out
}
