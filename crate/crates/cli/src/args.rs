use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowmech::mechanisms::Mechanism;
use flowmech::rational::parse_rational;
use flowmech::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "flowmech",
    version,
    about = "Exact payoff mechanisms and audits for max-flow games"
)]
pub struct Cli {
    /// Output as an aligned table or as a JSON run document.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,

    /// Reported capacity override, `edge=p/q`; repeatable. Unlisted edges report truthfully.
    #[arg(long = "report", value_name = "EDGE=P/Q", global = true, value_parser = parse_pair)]
    pub reports: Vec<(String, Rational)>,

    /// Drop edges on no s-t path instead of rejecting the network.
    #[arg(long, global = true)]
    pub prune: bool,

    /// Use the brute-force paths (all-orders Shapley, edge-subset cuts).
    #[arg(long, global = true)]
    pub oracle: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check structural assumptions and list every diagnostic.
    Validate(Input),
    /// Max-flow value and one maximum flow under the reports.
    Maxflow(Input),
    /// Minimal s-t cuts of the network with s-t edges removed.
    Cuts(Input),
    /// Shapley value of the flow game.
    Shapley(Input),
    /// Minimal-cut based allocation.
    Mc {
        #[command(flatten)]
        input: Input,
        /// Skip paying s-t edges up front (diagnostic variant).
        #[arg(long)]
        no_step_one: bool,
    },
    /// Is a payoff vector in the core?
    CoreCheck {
        #[command(flatten)]
        input: Input,
        /// Payoff for one edge, `edge=p/q`; repeatable, unlisted edges get 0.
        /// Without any, the allocation of `--mechanism` is checked.
        #[arg(long = "payoff", value_name = "EDGE=P/Q", value_parser = parse_pair)]
        payoffs: Vec<(String, Rational)>,
        #[arg(long, value_parser = parse_mechanism, default_value = "core-nearest-cut")]
        mechanism: Mechanism,
    },
    /// Least and greatest core payoff of every edge.
    CoreBounds(Input),
    /// Core allocation paying the minimum cut nearest the source.
    CoreSelect(Input),
    /// Cut structure and complementarity of an edge pair.
    ClassifyPair {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
        /// Also sample this many capacity configurations to test whether
        /// the relation is constant; needs `--seed`.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Best unilateral misreport of one edge.
    Deviate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_mechanism, default_value = "mc")]
        mechanism: Mechanism,
        #[arg(long)]
        edge: String,
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Search for violations of one property, or all mechanism properties.
    Audit(AuditArgs),
    /// Trace the MC payoff of one edge while another edge's report grows.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
        /// Grid points per interval on each side of the critical value.
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// Print the bundled example networks, or write them into a directory.
    Fixtures {
        /// Only this fixture.
        name: Option<String>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Network file (line format or JSON).
    pub network: PathBuf,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long)]
    pub edge: String,
    #[arg(long)]
    pub edge2: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditTarget {
    Dsic,
    Sir,
    Sp,
    Mp,
    Cm,
    CrossEffect,
    Complementarity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CmMode {
    /// Judge only steps raising the max flow by the whole increase.
    Full,
    /// Judge every step that raises the max flow at all.
    Any,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(value_enum)]
    pub property: AuditTarget,
    /// Network file; omit with `--corpus`.
    pub network: Option<PathBuf>,
    #[arg(long, value_parser = parse_mechanism, default_value = "mc")]
    pub mechanism: Mechanism,
    /// Restrict SP, CM and pair audits to one edge (first of the pair).
    #[arg(long)]
    pub edge: Option<String>,
    /// Second edge of a pair.
    #[arg(long)]
    pub edge2: Option<String>,
    /// Audit this many seeded random networks instead of a file.
    #[arg(long, value_name = "N")]
    pub corpus: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Even grid steps per deviation search.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    /// Sampled configurations per complementarity probe.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Sweep points per interval for the cross-effect audit.
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = CmMode::Full)]
    pub cm: CmMode,
    /// Corpus networks: at most this many nodes.
    #[arg(long, default_value_t = 6)]
    pub max_nodes: usize,
    /// Corpus networks: at most this many edges.
    #[arg(long, default_value_t = 8)]
    pub max_edges: usize,
}

fn parse_pair(text: &str) -> Result<(String, Rational), String> {
    let (id, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected EDGE=P/Q, got `{text}`"))?;
    let id = id.trim();
    if id.is_empty() {
        return Err(format!("missing edge id in `{text}`"));
    }
    let value = parse_rational(value.trim()).map_err(|e| e.to_string())?;
    Ok((id.to_string(), value))
}

fn parse_mechanism(text: &str) -> Result<Mechanism, String> {
    text.parse().map_err(|e: flowmech::FlowError| e.to_string())
}
