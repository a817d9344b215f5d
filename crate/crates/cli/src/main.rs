use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use rolegraph::{CorrelationConfig, FormationConfig, MergeConfig};
use rolegraph_cli::commands::{run_correlate, run_evaluate, run_group, GroupingSettings};
use rolegraph_cli::edge_list::{parse_edge_list, render_edge_list};
use rolegraph_cli::errors::{CliError, CliResult};
use rolegraph_cli::partition_doc::{parse_partition_doc, parse_ratio, PartitionDoc};
use rolegraph_cli::report::render_report;
use rolegraph_cli::sweep::{run_sweep, SweepParam};
use rolegraph_cli::synth::{figure1, roles as synth_roles, RolesSpec};
use std::path::{Path, PathBuf};
use std::process;

/// Role discovery for enterprise networks: group hosts by who they talk
/// to, track the groups across later captures, and score the results.
#[derive(Debug, Parser)]
#[command(name = "rolegraph", version, about, max_term_width = 100)]
struct Cli {
    /// Write the primary output document to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Seed for the synthetic network generators.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group the hosts of a connection snapshot into roles.
    Group(GroupArgs),
    /// Group a later snapshot and align its group ids with a previous run.
    Correlate(CorrelateArgs),
    /// Compare a partitioning against a reference with the Rand statistic.
    Evaluate(EvaluateArgs),
    /// Render a partitioning document as a readable report.
    Report(ReportArgs),
    /// Re-run grouping over a range of one merge parameter.
    Sweep(SweepArgs),
    /// Generate synthetic connection snapshots.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Connection snapshot (edge list) to group.
    edges: PathBuf,

    /// Neighborhood-level fraction below which an ungrouped host becomes
    /// its own group early. Accepts decimals or fractions, e.g. 0.6 or 3/5.
    #[arg(long, value_name = "RATIO", default_value = "0.6", value_parser = ratio_arg)]
    alpha: Ratio<u64>,

    /// Allowed relative difference in per-member connection volume for a
    /// merge.
    #[arg(long, value_name = "F", default_value_t = 0.5)]
    beta: f64,

    /// Similarity required to merge well-connected groups (percent).
    #[arg(long, value_name = "PCT", default_value_t = 80.0)]
    s_hi: f64,

    /// Similarity required to merge weakly connected groups (percent).
    #[arg(long, value_name = "PCT", default_value_t = 55.0)]
    s_lo: f64,

    /// Group strength at or above which the stricter similarity bar
    /// applies.
    #[arg(long, value_name = "K", default_value_t = 7)]
    k_hi: u32,

    /// Stop after formation; do not merge similar groups.
    #[arg(long)]
    no_merge: bool,
}

impl GroupArgs {
    fn settings(&self) -> CliResult<GroupingSettings> {
        Ok(GroupingSettings {
            formation: FormationConfig::new(self.alpha)?,
            merge: MergeConfig {
                beta: self.beta,
                s_hi: self.s_hi,
                s_lo: self.s_lo,
                k_hi: self.k_hi,
            },
            skip_merge: self.no_merge,
        })
    }
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    /// Edge list of the previous capture.
    prev_edges: PathBuf,

    /// Partitioning document produced from the previous capture.
    prev_groups: PathBuf,

    /// Edge list of the current capture.
    curr_edges: PathBuf,

    /// Override the grouping parameter recorded in the previous document.
    #[arg(long, value_name = "RATIO", value_parser = ratio_arg)]
    alpha: Option<Ratio<u64>>,

    /// Override the grouping parameter recorded in the previous document.
    #[arg(long, value_name = "F")]
    beta: Option<f64>,

    /// Override the grouping parameter recorded in the previous document.
    #[arg(long, value_name = "PCT")]
    s_hi: Option<f64>,

    /// Override the grouping parameter recorded in the previous document.
    #[arg(long, value_name = "PCT")]
    s_lo: Option<f64>,

    /// Override the grouping parameter recorded in the previous document.
    #[arg(long, value_name = "K")]
    k_hi: Option<u32>,

    /// Stop after formation; do not merge similar groups.
    #[arg(long)]
    no_merge: bool,

    /// Allowed relative difference in connection volume when matching
    /// hosts and groups across captures.
    #[arg(long, value_name = "F", default_value_t = 0.3)]
    t_hi: f64,

    /// Minimum profile similarity for a first-pass group match.
    #[arg(long, value_name = "F", default_value_t = 0.5)]
    sim_threshold: f64,

    /// Minimum neighborhood similarity (percent) for a second-pass match.
    #[arg(long, value_name = "PCT", default_value_t = 55.0)]
    step2_threshold: f64,
}

impl CorrelateArgs {
    fn settings(&self, prev_doc: &PartitionDoc) -> CliResult<GroupingSettings> {
        let formation = prev_doc.config.formation_config();
        let merge = prev_doc.config.merge_config();
        let alpha = self.alpha.unwrap_or(formation.alpha);
        Ok(GroupingSettings {
            formation: FormationConfig::new(alpha)?,
            merge: MergeConfig {
                beta: self.beta.unwrap_or(merge.beta),
                s_hi: self.s_hi.unwrap_or(merge.s_hi),
                s_lo: self.s_lo.unwrap_or(merge.s_lo),
                k_hi: self.k_hi.unwrap_or(merge.k_hi),
            },
            skip_merge: self.no_merge,
        })
    }

    fn correlation_config(&self) -> CorrelationConfig {
        CorrelationConfig {
            t_hi: self.t_hi,
            sim_threshold: self.sim_threshold,
            step2_threshold: self.step2_threshold,
        }
    }
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Partitioning document to score.
    groups: PathBuf,

    /// Reference partitioning document to score against.
    reference: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Partitioning document to render.
    groups: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Connection snapshot (edge list) to group at every point.
    edges: PathBuf,

    /// Parameter to sweep.
    #[arg(long, value_enum)]
    param: SweepParam,

    /// First value of the sweep (inclusive).
    #[arg(long)]
    from: f64,

    /// Last value of the sweep (inclusive).
    #[arg(long)]
    to: f64,

    /// Distance between sweep points.
    #[arg(long)]
    step: f64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(subcommand)]
    network: SynthNetwork,
}

#[derive(Debug, Subcommand)]
enum SynthNetwork {
    /// Two shared servers, two department servers, and two client
    /// departments.
    Figure1 {
        /// Number of sales clients.
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// Number of engineering clients.
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Random role-structured network: every client of a role connects
    /// to the same servers.
    Roles {
        /// Number of roles.
        #[arg(long)]
        roles: u32,
        /// Minimum clients per role.
        #[arg(long, default_value_t = 4)]
        hosts_min: u32,
        /// Maximum clients per role.
        #[arg(long, default_value_t = 9)]
        hosts_max: u32,
        /// Servers each role connects to.
        #[arg(long, default_value_t = 3)]
        servers_per_role: u32,
        /// Probability that a role reuses an existing server.
        #[arg(long, default_value_t = 0.5)]
        share_prob: f64,
    },
}

fn ratio_arg(text: &str) -> Result<Ratio<u64>, String> {
    parse_ratio(text)
}

fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn snapshot_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snapshot".to_string())
}

fn load_snapshot(path: &Path) -> CliResult<rolegraph::ConnectionSnapshot> {
    let text = read_input(path)?;
    parse_edge_list(&snapshot_label(path), &text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_partition_doc(path: &Path) -> CliResult<PartitionDoc> {
    let text = read_input(path)?;
    parse_partition_doc(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn write_output(target: Option<&Path>, text: &str) -> CliResult<()> {
    match target {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Group(args) => {
            let snapshot = load_snapshot(&args.edges)?;
            let doc = run_group(&snapshot, &args.settings()?)?;
            write_output(cli.output.as_deref(), &doc)
        }
        Command::Correlate(args) => {
            let prev_snapshot = load_snapshot(&args.prev_edges)?;
            let prev_doc = load_partition_doc(&args.prev_groups)?;
            let curr_snapshot = load_snapshot(&args.curr_edges)?;
            let settings = args.settings(&prev_doc)?;
            let out = run_correlate(
                &prev_snapshot,
                &prev_doc,
                &curr_snapshot,
                &settings,
                &args.correlation_config(),
            )?;
            write_output(cli.output.as_deref(), &out.partitioning_doc)?;
            print!("{}", out.correlation_doc);
            Ok(())
        }
        Command::Evaluate(args) => {
            let candidate = load_partition_doc(&args.groups)?;
            let reference = load_partition_doc(&args.reference)?;
            let csv = run_evaluate(&candidate, &reference)?;
            write_output(cli.output.as_deref(), &csv)
        }
        Command::Report(args) => {
            let doc = load_partition_doc(&args.groups)?;
            write_output(cli.output.as_deref(), &render_report(&doc))
        }
        Command::Sweep(args) => {
            let snapshot = load_snapshot(&args.edges)?;
            let csv = run_sweep(&snapshot, args.param, args.from, args.to, args.step)?;
            write_output(cli.output.as_deref(), &csv)
        }
        Command::Synth(args) => {
            let snapshot = match args.network {
                SynthNetwork::Figure1 { m, n } => figure1(m, n)?,
                SynthNetwork::Roles {
                    roles,
                    hosts_min,
                    hosts_max,
                    servers_per_role,
                    share_prob,
                } => synth_roles(&RolesSpec {
                    roles,
                    hosts_min,
                    hosts_max,
                    servers_per_role,
                    share_prob,
                    seed: cli.seed,
                })?,
            };
            write_output(cli.output.as_deref(), &render_edge_list(&snapshot))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code());
    }
}
