use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

/// Environment variable consulted when `mc` is run without `--seed`.
pub const SEED_ENV: &str = "BNVAR_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "bnvar",
    version,
    about = "Variances of inferred probabilities in Bayesian networks with uncertain parameters"
)]
pub struct Cli {
    /// Output format: aligned text with 6 significant digits, or JSON at full precision.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network file and list every violated rule.
    Validate { network: PathBuf },

    /// Classify the network structure and suggest a root loop cutset.
    Topology { network: PathBuf },

    /// Prior means and variances of every node's probabilities.
    PriorVar { network: PathBuf },

    /// Means and variances given evidence at ancestrally closed nodes.
    EvidenceVar {
        network: PathBuf,
        /// Evidence document: {"evidence": {"NODE": "ALTERNATIVE", ...}}.
        #[arg(long)]
        evidence: PathBuf,
    },

    /// Prior moments of a multiply connected network, conditioning on root nodes.
    CondVar {
        network: PathBuf,
        /// Comma-separated root nodes; defaults to the suggested cutset.
        #[arg(long, value_delimiter = ',')]
        cutset: Option<Vec<String>>,
    },

    /// Monte Carlo estimate of the standard deviation of one probability.
    Mc(McArgs),

    /// Number of trials that makes any 95% interval narrower than epsilon.
    PlanN {
        #[arg(long)]
        expected: f64,
        #[arg(long)]
        epsilon: f64,
        /// Bound the width relative to the expected value.
        #[arg(long)]
        relative: bool,
    },

    /// Tolerance interval confidence, or the sample size needed to reach it.
    #[command(group(ArgGroup::new("mode").required(true).args(["gamma", "n"])))]
    Tolerance {
        /// Fraction of the distribution the interval must cover.
        #[arg(long)]
        p: f64,
        /// Required confidence; plans the sample size for [min, max].
        #[arg(long)]
        gamma: Option<f64>,
        /// Sample size; reports the confidence.
        #[arg(long)]
        n: Option<u64>,
        /// Lower order statistic (1-based); defaults to the minimum.
        #[arg(long, requires_all = ["n", "j"])]
        i: Option<u64>,
        /// Upper order statistic (1-based); defaults to the maximum.
        #[arg(long, requires_all = ["n", "i"])]
        j: Option<u64>,
    },

    /// Distribution-free variance bounds for a probability with known mean.
    Bound {
        #[arg(long)]
        expected: f64,
        /// A variance to compare against the bound.
        #[arg(long)]
        variance: Option<f64>,
    },

    /// Exact moments by enumerating every atom combination (finite supports only).
    Oracle {
        network: PathBuf,
        /// Node to report; every node when omitted.
        #[arg(long)]
        node: Option<String>,
        #[arg(long)]
        evidence: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "epsilon"])))]
pub struct McArgs {
    pub network: PathBuf,

    /// Query as NODE=ALTERNATIVE.
    #[arg(long, value_parser = parse_query)]
    pub query: (String, String),

    #[arg(long)]
    pub evidence: Option<PathBuf>,

    /// Number of trials.
    #[arg(long, value_parser = parse_trials)]
    pub n: Option<u64>,

    /// Target interval width; the trial count is planned from it.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Interpret epsilon relative to the expected value.
    #[arg(long, requires = "epsilon")]
    pub relative: bool,

    /// Master seed for the trial streams.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Coverage fraction for the tolerance interval.
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,

    /// Lower order statistic of the tolerance interval (1-based).
    #[arg(long, requires = "j")]
    pub i: Option<u64>,

    /// Upper order statistic of the tolerance interval (1-based).
    #[arg(long, requires = "i")]
    pub j: Option<u64>,
}

fn parse_query(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((node, alt)) if !node.is_empty() && !alt.is_empty() => {
            Ok((node.to_string(), alt.to_string()))
        }
        _ => Err(format!("expected NODE=ALTERNATIVE, got `{s}`")),
    }
}

fn parse_trials(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("the trial count must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(format!("`{s}` is not a trial count: {e}")),
    }
}
