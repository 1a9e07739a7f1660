//! Report schema. The JSON form is what `--format json` prints and parses
//! back into the same value; the text form is for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use bnvar::network::Violation;
use bnvar::{NodeMoments, StdCI, TopologyReport};
use serde::{Deserialize, Serialize};

use crate::sig::sig6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Arguments as given, without the program name.
    pub command: Vec<String>,
    pub exit_status: i32,
    pub result: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Body {
    Validation(ValidationBody),
    Topology(TopologyBody),
    Moments(MomentsBody),
    MonteCarlo(McBody),
    Plan(PlanBody),
    Tolerance(ToleranceBody),
    Bound(BoundBody),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationBody {
    pub network: Option<String>,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyBody {
    pub network: String,
    #[serde(flatten)]
    pub report: TopologyReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Prior,
    DownstreamEvidence,
    CutsetConditioned,
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsBody {
    pub network: String,
    pub analysis: Analysis,
    pub evidence: BTreeMap<String, String>,
    pub cutset: Vec<String>,
    /// Atom combinations enumerated; only for enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combinations: Option<u64>,
    pub nodes: Vec<NodeTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTable {
    pub node: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_products: Option<u64>,
    pub rows: Vec<AlternativeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeRow {
    pub alternative: String,
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
    /// `mean - mean^2`, the largest variance any distribution on [0, 1] with this mean can have.
    pub bound: f64,
    /// `variance / bound`; absent when the bound is zero.
    pub bound_ratio: Option<f64>,
}

impl NodeTable {
    pub fn from_moments(m: &NodeMoments, labels: &[String], with_terms: bool) -> Self {
        let rows = (0..m.len())
            .map(|i| {
                let mean = m.mean[i];
                let variance = m.variance[i];
                let bound = mean - mean * mean;
                AlternativeRow {
                    alternative: labels[i].clone(),
                    mean,
                    variance,
                    std: variance.max(0.0).sqrt(),
                    bound,
                    bound_ratio: (bound > 0.0).then(|| variance / bound),
                }
            })
            .collect();
        NodeTable {
            node: m.node.clone(),
            term_products: with_terms.then_some(m.term_products),
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub node: String,
    pub alternative: String,
    pub evidence: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDigest {
    pub n: u64,
    pub reference_mean: f64,
    pub sample_mean: f64,
    pub sq_dev_sum: f64,
    pub variance_estimate: f64,
    pub std_estimate: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEcho {
    /// 1-based order statistics bounding the interval.
    pub i: u64,
    pub j: u64,
    pub lower: f64,
    pub upper: f64,
    pub p: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McBody {
    pub network: String,
    pub query: QueryEcho,
    pub seed: u64,
    /// Present when the trial count came from `--epsilon`.
    pub plan: Option<PlanBody>,
    pub summary: SampleDigest,
    /// Absent when there are too few trials for an interval.
    pub ci: Option<StdCI>,
    pub tolerance: Option<ToleranceEcho>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanBody {
    pub expected: f64,
    pub epsilon: f64,
    pub relative: bool,
    /// Smallest trial count meeting the target.
    pub n: u64,
    pub width_at_n: f64,
    /// `n` rounded up to two significant digits, which also meets the target.
    pub sufficient: u64,
    pub width_at_sufficient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceMode {
    Plan,
    MinMax,
    OrderStatistics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceBody {
    pub mode: ToleranceMode,
    pub p: f64,
    /// Requested confidence when planning.
    pub target_gamma: Option<f64>,
    /// Confidence achieved by order statistics `i..j` of `n` draws.
    pub gamma: f64,
    pub n: u64,
    pub i: u64,
    pub j: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundBody {
    pub expected: f64,
    pub variance_bound: f64,
    pub std_bound: f64,
    /// `sqrt(1/E - 1)`; absent at `E = 0`.
    pub relative_std_bound: Option<f64>,
    pub variance: Option<f64>,
    pub within_bound: Option<bool>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.result {
            Body::Validation(b) => validation_text(&mut out, b),
            Body::Topology(b) => topology_text(&mut out, b),
            Body::Moments(b) => moments_text(&mut out, b),
            Body::MonteCarlo(b) => mc_text(&mut out, b),
            Body::Plan(b) => plan_text(&mut out, b),
            Body::Tolerance(b) => tolerance_text(&mut out, b),
            Body::Bound(b) => bound_text(&mut out, b),
        }
        out
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), sig6)
}

fn evidence_text(ev: &BTreeMap<String, String>) -> String {
    if ev.is_empty() {
        "none".to_string()
    } else {
        ev.iter()
            .map(|(n, a)| format!("{n}={a}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn validation_text(out: &mut String, b: &ValidationBody) {
    let name = b.network.as_deref().unwrap_or("(unnamed)");
    if b.valid {
        let _ = writeln!(out, "network {name}: valid");
        return;
    }
    let _ = writeln!(out, "network {name}: {} violation(s)", b.violations.len());
    for v in &b.violations {
        let _ = writeln!(out, "  {v}");
    }
}

fn topology_text(out: &mut String, b: &TopologyBody) {
    let r = &b.report;
    let _ = writeln!(out, "network           {}", b.network);
    let _ = writeln!(out, "class             {}", r.class);
    let _ = writeln!(out, "nodes             {}", r.node_count);
    let _ = writeln!(out, "values            {}", r.value_count);
    let _ = writeln!(out, "max alternatives  {}", r.max_alternatives);
    let _ = writeln!(
        out,
        "parents           {}..{}",
        r.min_parents, r.max_parents
    );
    let cutset = if r.suggested_cutset.is_empty() {
        if r.root_cutset_available {
            "none needed".to_string()
        } else {
            "no root cutset found".to_string()
        }
    } else {
        r.suggested_cutset.join(",")
    };
    let _ = writeln!(out, "root cutset       {cutset}");
}

fn moments_text(out: &mut String, b: &MomentsBody) {
    let analysis = match b.analysis {
        Analysis::Prior => "prior",
        Analysis::DownstreamEvidence => "downstream evidence",
        Analysis::CutsetConditioned => "cutset conditioned",
        Analysis::Enumeration => "enumeration",
    };
    let _ = writeln!(out, "network {}  analysis {analysis}", b.network);
    if !b.evidence.is_empty() || b.analysis == Analysis::DownstreamEvidence {
        let _ = writeln!(out, "evidence {}", evidence_text(&b.evidence));
    }
    if !b.cutset.is_empty() {
        let _ = writeln!(out, "cutset {}", b.cutset.join(","));
    }
    if let Some(c) = b.combinations {
        let _ = writeln!(out, "atom combinations {c}");
    }
    for node in &b.nodes {
        let _ = writeln!(out);
        match node.term_products {
            Some(t) => {
                let _ = writeln!(out, "node {}  (term products {t})", node.node);
            }
            None => {
                let _ = writeln!(out, "node {}", node.node);
            }
        }
        let _ = writeln!(
            out,
            "  {:<14} {:>12} {:>12} {:>12} {:>12} {:>12}",
            "alternative", "mean", "variance", "std", "bound", "V/bound"
        );
        for r in &node.rows {
            let _ = writeln!(
                out,
                "  {:<14} {:>12} {:>12} {:>12} {:>12} {:>12}",
                r.alternative,
                sig6(r.mean),
                sig6(r.variance),
                sig6(r.std),
                sig6(r.bound),
                opt(r.bound_ratio)
            );
        }
    }
}

fn mc_text(out: &mut String, b: &McBody) {
    let q = &b.query;
    let _ = writeln!(out, "network {}", b.network);
    let _ = writeln!(
        out,
        "query P({}={} | {})",
        q.node,
        q.alternative,
        evidence_text(&q.evidence)
    );
    let _ = writeln!(out, "seed {}", b.seed);
    if let Some(p) = &b.plan {
        let kind = if p.relative { "relative " } else { "" };
        let _ = writeln!(
            out,
            "planned n {} for {kind}epsilon {} at E = {}",
            p.n,
            sig6(p.epsilon),
            sig6(p.expected)
        );
    }
    let s = &b.summary;
    let _ = writeln!(out, "trials            {}", s.n);
    let _ = writeln!(out, "reference mean    {}", sig6(s.reference_mean));
    let _ = writeln!(out, "sample mean       {}", sig6(s.sample_mean));
    let _ = writeln!(out, "variance estimate {}", sig6(s.variance_estimate));
    let _ = writeln!(out, "std estimate      {}", sig6(s.std_estimate));
    let _ = writeln!(out, "range             [{}, {}]", sig6(s.min), sig6(s.max));
    if let Some(ci) = &b.ci {
        let _ = writeln!(
            out,
            "{}% std interval  [{}, {}]  width {}",
            sig6(ci.level * 100.0),
            sig6(ci.lower),
            sig6(ci.upper),
            sig6(ci.width())
        );
    }
    if let Some(t) = &b.tolerance {
        let _ = writeln!(
            out,
            "tolerance         [{}, {}] (order statistics {}..{}) covers {} with confidence {}",
            sig6(t.lower),
            sig6(t.upper),
            t.i,
            t.j,
            sig6(t.p),
            sig6(t.gamma)
        );
    }
    for note in &b.notes {
        let _ = writeln!(out, "note: {note}");
    }
}

fn plan_text(out: &mut String, b: &PlanBody) {
    let kind = if b.relative { "relative " } else { "" };
    let _ = writeln!(out, "{}", b.n);
    let _ = writeln!(
        out,
        "smallest n with every 95% std interval narrower than {kind}epsilon {} at E = {} (worst-case width {})",
        sig6(b.epsilon),
        sig6(b.expected),
        sig6(b.width_at_n)
    );
    if b.sufficient != b.n {
        let _ = writeln!(
            out,
            "{} is sufficient (worst-case width {})",
            b.sufficient,
            sig6(b.width_at_sufficient)
        );
    }
}

fn tolerance_text(out: &mut String, b: &ToleranceBody) {
    match b.mode {
        ToleranceMode::Plan => {
            let _ = writeln!(out, "{}", b.n);
            let _ = writeln!(
                out,
                "smallest n whose [min, max] covers {} with confidence >= {} (achieved {})",
                sig6(b.p),
                opt(b.target_gamma),
                sig6(b.gamma)
            );
        }
        ToleranceMode::MinMax | ToleranceMode::OrderStatistics => {
            let _ = writeln!(out, "{}", sig6(b.gamma));
            let _ = writeln!(
                out,
                "confidence that order statistics {}..{} of {} draws cover {}",
                b.i,
                b.j,
                b.n,
                sig6(b.p)
            );
        }
    }
}

fn bound_text(out: &mut String, b: &BoundBody) {
    let _ = writeln!(out, "expected          {}", sig6(b.expected));
    let _ = writeln!(out, "variance bound    {}", sig6(b.variance_bound));
    let _ = writeln!(out, "std bound         {}", sig6(b.std_bound));
    let _ = writeln!(out, "std/E bound       {}", opt(b.relative_std_bound));
    if let (Some(v), Some(ok)) = (b.variance, b.within_bound) {
        let _ = writeln!(
            out,
            "variance          {} ({})",
            sig6(v),
            if ok { "within bound" } else { "exceeds bound" }
        );
    }
}
