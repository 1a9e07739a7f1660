//! Library half of the `bnvar` command: argument types, the report schema
//! and [`execute`], which maps a parsed command onto the core operations.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod report;
pub mod sig;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use bnvar::mc::{
    minmax_tolerance_gamma, minmax_tolerance_interval, order_stat_gamma,
    order_stat_tolerance_gamma, plan_n_absolute, plan_n_relative, plan_scale, plan_tolerance_n,
    worst_case_width, MIN_CI_TRIALS,
};
use bnvar::oracle::{atom_combinations, enumerate_all_moments, enumerate_exact_moments};
use bnvar::{
    bounds, classify_topology, conditioned_prior_moments, downstream_evidence_moments,
    exact_marginal, instantiate_expected, parse_evidence, parse_network, propagate_prior_moments,
    run_trials, std_confidence_interval, ErrorKind, Evidence, Network, NodeMap, NodeMoments, Query,
    TopologyClass,
};

use args::{Command, McArgs};
use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(bnvar::Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Usage => EXIT_USAGE,
                ErrorKind::Data => EXIT_DATA,
                ErrorKind::Unsupported => EXIT_UNSUPPORTED,
            },
            CliError::Io { .. } => EXIT_DATA,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }

    /// `error[code]: message` on a single line.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.code(), msg.trim())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bnvar::Error> for CliError {
    fn from(e: bnvar::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_network(path: &Path) -> Result<Network> {
    Ok(parse_network(&read(path)?)?)
}

fn load_evidence(net: &Network, path: Option<&Path>) -> Result<Evidence> {
    match path {
        Some(p) => Ok(parse_evidence(net, &read(p)?)?),
        None => Ok(Evidence::new()),
    }
}

fn evidence_labels(net: &Network, ev: &Evidence) -> BTreeMap<String, String> {
    ev.to_labels(net).into_iter().collect()
}

fn tables(net: &Network, moments: &NodeMap<NodeMoments>, with_terms: bool) -> Vec<NodeTable> {
    net.nodes
        .iter()
        .filter_map(|spec| {
            moments
                .get(&spec.name)
                .map(|m| NodeTable::from_moments(m, &spec.alternatives, with_terms))
        })
        .collect()
}

fn moments_body(
    net: &Network,
    analysis: Analysis,
    ev: &Evidence,
    cutset: Vec<String>,
    moments: &NodeMap<NodeMoments>,
) -> MomentsBody {
    MomentsBody {
        network: net.name.clone(),
        analysis,
        evidence: evidence_labels(net, ev),
        cutset,
        combinations: None,
        nodes: tables(net, moments, true),
    }
}

/// Runs one parsed command. `Ok` reports may still carry a non-zero
/// `exit_status` (a network that fails validation).
pub fn execute(command: &Command, echo: Vec<String>) -> Result<Report> {
    let mut exit_status = EXIT_OK;
    let result = match command {
        Command::Validate { network } => {
            let text = read(network)?;
            match parse_network(&text) {
                Ok(net) => Body::Validation(ValidationBody {
                    network: Some(net.name),
                    valid: true,
                    violations: vec![],
                }),
                Err(bnvar::Error::InvalidNetwork(report)) => {
                    exit_status = EXIT_DATA;
                    let name = serde_json::from_str::<serde_json::Value>(&text)
                        .ok()
                        .and_then(|v| v.get("name").and_then(|n| n.as_str()).map(String::from));
                    Body::Validation(ValidationBody {
                        network: name,
                        valid: false,
                        violations: report.violations,
                    })
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Topology { network } => {
            let net = load_network(network)?;
            Body::Topology(TopologyBody {
                report: classify_topology(&net),
                network: net.name,
            })
        }
        Command::PriorVar { network } => {
            let net = load_network(network)?;
            let moments = propagate_prior_moments(&net)?;
            Body::Moments(moments_body(
                &net,
                Analysis::Prior,
                &Evidence::new(),
                vec![],
                &moments,
            ))
        }
        Command::EvidenceVar { network, evidence } => {
            let net = load_network(network)?;
            let ev = load_evidence(&net, Some(evidence))?;
            let moments = downstream_evidence_moments(&net, &ev)?;
            Body::Moments(moments_body(
                &net,
                Analysis::DownstreamEvidence,
                &ev,
                vec![],
                &moments,
            ))
        }
        Command::CondVar { network, cutset } => {
            let net = load_network(network)?;
            Body::Moments(cond_var(&net, cutset.as_deref())?)
        }
        Command::Mc(args) => Body::MonteCarlo(monte_carlo(args)?),
        Command::PlanN {
            expected,
            epsilon,
            relative,
        } => Body::Plan(plan(*expected, *epsilon, *relative)?),
        Command::Tolerance { p, gamma, n, i, j } => {
            Body::Tolerance(tolerance(*p, *gamma, *n, *i, *j)?)
        }
        Command::Bound { expected, variance } => Body::Bound(bound(*expected, *variance)?),
        Command::Oracle {
            network,
            node,
            evidence,
        } => {
            let net = load_network(network)?;
            let ev = load_evidence(&net, evidence.as_deref())?;
            let combinations = atom_combinations(&net)?.len() as u64;
            let nodes = match node {
                Some(name) => {
                    let spec = net
                        .node(name)
                        .ok_or_else(|| bnvar::Error::UnknownNode(name.clone()))?;
                    let m = enumerate_exact_moments(&net, &ev, name)?;
                    vec![NodeTable::from_moments(&m, &spec.alternatives, false)]
                }
                None => tables(&net, &enumerate_all_moments(&net, &ev)?, false),
            };
            Body::Moments(MomentsBody {
                network: net.name.clone(),
                analysis: Analysis::Enumeration,
                evidence: evidence_labels(&net, &ev),
                cutset: vec![],
                combinations: Some(combinations),
                nodes,
            })
        }
    };
    Ok(Report {
        command: echo,
        exit_status,
        result,
    })
}

fn cond_var(net: &Network, cutset: Option<&[String]>) -> Result<MomentsBody> {
    let cutset: Vec<String> = match cutset {
        Some(c) => c.to_vec(),
        None => {
            let topo = classify_topology(net);
            if topo.class != TopologyClass::MultiplyConnected {
                // Nothing to condition on.
                let moments = propagate_prior_moments(net)?;
                return Ok(moments_body(
                    net,
                    Analysis::Prior,
                    &Evidence::new(),
                    vec![],
                    &moments,
                ));
            }
            if !topo.root_cutset_available {
                return Err(bnvar::Error::InvalidCutset(
                    "no set of root nodes breaks every loop; pass --cutset or use mc".into(),
                )
                .into());
            }
            topo.suggested_cutset
        }
    };
    let moments = conditioned_prior_moments(net, &cutset)?;
    Ok(moments_body(
        net,
        Analysis::CutsetConditioned,
        &Evidence::new(),
        cutset,
        &moments,
    ))
}

/// `n` rounded up to two significant digits.
fn round_up_two_digits(n: u64) -> u64 {
    let mut unit = 1;
    while n / unit >= 100 {
        unit *= 10;
    }
    n.div_ceil(unit) * unit
}

fn plan(expected: f64, epsilon: f64, relative: bool) -> Result<PlanBody> {
    let n = if relative {
        plan_n_relative(expected, epsilon)?
    } else {
        plan_n_absolute(expected, epsilon)?
    };
    let scale = plan_scale(expected, relative);
    let sufficient = round_up_two_digits(n);
    Ok(PlanBody {
        expected,
        epsilon,
        relative,
        n,
        width_at_n: worst_case_width(n, scale),
        sufficient,
        width_at_sufficient: worst_case_width(sufficient, scale),
    })
}

fn tolerance(
    p: f64,
    gamma: Option<f64>,
    n: Option<u64>,
    i: Option<u64>,
    j: Option<u64>,
) -> Result<ToleranceBody> {
    if let Some(target) = gamma {
        let n = plan_tolerance_n(p, target)?;
        return Ok(ToleranceBody {
            mode: ToleranceMode::Plan,
            p,
            target_gamma: Some(target),
            gamma: minmax_tolerance_gamma(n, p)?,
            n,
            i: 1,
            j: n,
        });
    }
    let n = n.ok_or_else(|| CliError::Usage("tolerance needs --gamma or --n".into()))?;
    let (mode, i, j) = match (i, j) {
        (Some(i), Some(j)) => (ToleranceMode::OrderStatistics, i, j),
        _ => (ToleranceMode::MinMax, 1, n),
    };
    let gamma = match mode {
        ToleranceMode::MinMax => minmax_tolerance_gamma(n, p)?,
        _ => order_stat_gamma(n as usize, i as usize, j as usize, p)?,
    };
    Ok(ToleranceBody {
        mode,
        p,
        target_gamma: None,
        gamma,
        n,
        i,
        j,
    })
}

fn bound(expected: f64, variance: Option<f64>) -> Result<BoundBody> {
    let variance_bound = bounds::variance_upper_bound(expected)?;
    if let Some(v) = variance {
        if !(v >= 0.0) {
            return Err(CliError::Usage(format!(
                "variance {v} must be non-negative"
            )));
        }
    }
    Ok(BoundBody {
        expected,
        variance_bound,
        std_bound: variance_bound.sqrt(),
        relative_std_bound: (expected > 0.0)
            .then(|| bounds::relative_std_bound(expected))
            .transpose()?,
        variance,
        within_bound: variance.map(|v| v <= variance_bound),
    })
}

fn monte_carlo(args: &McArgs) -> Result<McBody> {
    if !(args.p > 0.0 && args.p < 1.0) {
        return Err(CliError::Usage(format!(
            "--p {} must lie in (0, 1)",
            args.p
        )));
    }
    if let Some(eps) = args.epsilon {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(CliError::Usage(format!("--epsilon {eps} must be positive")));
        }
    }
    let net = load_network(&args.network)?;
    let ev = load_evidence(&net, args.evidence.as_deref())?;
    let (node, label) = &args.query;
    let alternative = net.alternative_index(node, label)?;
    let query = Query::new(node.clone(), alternative, ev.clone());

    let (n, plan_body) = match (args.n, args.epsilon) {
        (Some(n), _) => (n, None),
        (None, Some(eps)) => {
            let pnet = instantiate_expected(&net)?;
            let expected = exact_marginal(&pnet, &ev, node)?[alternative];
            let p = plan(expected, eps, args.relative)?;
            (p.n, Some(p))
        }
        (None, None) => return Err(CliError::Usage("mc needs --n or --epsilon".into())),
    };
    if let (Some(i), Some(j)) = (args.i, args.j) {
        if !(1 <= i && i < j && j <= n) {
            return Err(CliError::Usage(format!(
                "order statistics need 1 <= i < j <= n, got i={i}, j={j}, n={n}"
            )));
        }
    }

    let summary = run_trials(&net, &query, n as usize, args.seed)?;
    let mut notes = Vec::new();
    let ci = if summary.n > MIN_CI_TRIALS {
        Some(std_confidence_interval(&summary)?)
    } else {
        notes.push(format!(
            "no confidence interval: it needs more than {MIN_CI_TRIALS} trials"
        ));
        None
    };
    let tolerance = match (args.i, args.j) {
        (Some(i), Some(j)) => {
            let t = order_stat_tolerance_gamma(&summary, i as usize, j as usize, args.p)?;
            Some(ToleranceEcho {
                i,
                j,
                lower: t.lower,
                upper: t.upper,
                p: t.p,
                gamma: t.gamma,
            })
        }
        _ if summary.n >= 2 => {
            let t = minmax_tolerance_interval(&summary, args.p)?;
            Some(ToleranceEcho {
                i: 1,
                j: n,
                lower: t.lower,
                upper: t.upper,
                p: t.p,
                gamma: t.gamma,
            })
        }
        _ => {
            notes.push("no tolerance interval: it needs at least 2 trials".into());
            None
        }
    };
    Ok(McBody {
        network: net.name.clone(),
        query: QueryEcho {
            node: node.clone(),
            alternative: label.clone(),
            evidence: evidence_labels(&net, &ev),
        },
        seed: args.seed,
        plan: plan_body,
        summary: SampleDigest {
            n: summary.n as u64,
            reference_mean: summary.reference_mean,
            sample_mean: summary.sample_mean(),
            sq_dev_sum: summary.sq_dev_sum,
            variance_estimate: summary.variance_estimate(),
            std_estimate: summary.std_estimate(),
            min: summary.min,
            max: summary.max,
        },
        ci,
        tolerance,
        notes,
    })
}
