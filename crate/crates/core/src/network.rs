//! The uncertain-network data model.
//!
//! A [`Network`] is a DAG of discrete nodes. Every node stores one
//! [`DistributionSpec`] per configuration of its parents; each spec describes
//! the uncertainty over one conditional probability vector. Specs are assumed
//! mutually independent.
//!
//! Parent configurations are indexed row-major over the parents' alternative
//! indices in declared parent order, so the *last* parent varies fastest.
//!
//! The JSON layout is
//!
//! ```text
//! {"name": "...",
//!  "nodes": [{"name": "E", "alternatives": ["e1", "e2"], "parents": [],
//!             "cpd": [{"dirichlet": [0, 0]}]}, ...]}
//! ```
//!
//! where a cpd row is `{"dirichlet": [int...]}`, `{"point": [number...]}` or
//! `{"finite": [{"probs": [number...], "weight": number}, ...]}`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "lies on the simplex" and "weights sum to one".
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub name: String,
    pub nodes: Vec<NodeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub name: String,
    pub alternatives: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpd: Vec<DistributionSpec>,
}

/// Uncertainty over one stored probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionSpec {
    /// Dirichlet with density proportional to `prod p_i^{a_i}`.
    Dirichlet(Vec<u64>),
    /// A known vector.
    Point(Vec<f64>),
    /// A discrete distribution over vectors.
    Finite(Vec<Atom>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub probs: Vec<f64>,
    pub weight: f64,
}

impl Atom {
    pub fn new(probs: Vec<f64>, weight: f64) -> Self {
        Atom { probs, weight }
    }
}

impl DistributionSpec {
    /// Length of the probability vector this spec describes.
    pub fn len(&self) -> usize {
        match self {
            DistributionSpec::Dirichlet(a) => a.len(),
            DistributionSpec::Point(p) => p.len(),
            DistributionSpec::Finite(atoms) => atoms.first().map_or(0, |a| a.probs.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, DistributionSpec::Dirichlet(_))
    }

    /// Number of support points when the spec is enumerable.
    pub fn atom_count(&self) -> Option<usize> {
        match self {
            DistributionSpec::Dirichlet(_) => None,
            DistributionSpec::Point(_) => Some(1),
            DistributionSpec::Finite(atoms) => Some(atoms.len()),
        }
    }

    /// Support points with weights, normalized. `None` for Dirichlet specs.
    pub fn atoms(&self) -> Option<Vec<(Vec<f64>, f64)>> {
        match self {
            DistributionSpec::Dirichlet(_) => None,
            DistributionSpec::Point(p) => Some(vec![(normalized(p), 1.0)]),
            DistributionSpec::Finite(atoms) => {
                let total: f64 = atoms.iter().map(|a| a.weight).sum();
                Some(
                    atoms
                        .iter()
                        .map(|a| (normalized(&a.probs), a.weight / total))
                        .collect(),
                )
            }
        }
    }
}

/// Rescales a vector that is already within tolerance of the simplex.
pub(crate) fn normalized(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s == 1.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / s).collect()
    }
}

/// Observed alternatives, keyed by node name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub assignments: BTreeMap<String, usize>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, node: &str, alternative: usize) -> Self {
        self.assignments.insert(node.to_string(), alternative);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn get(&self, node: &str) -> Option<usize> {
        self.assignments.get(node).copied()
    }

    /// Checks that every node exists and every index is in range.
    pub fn check(&self, net: &Network) -> Result<()> {
        for (node, &idx) in &self.assignments {
            let spec = net
                .node(node)
                .ok_or_else(|| Error::UnknownNode(node.clone()))?;
            if idx >= spec.alternatives.len() {
                return Err(Error::AlternativeOutOfRange {
                    node: node.clone(),
                    index: idx,
                    count: spec.alternatives.len(),
                });
            }
        }
        Ok(())
    }

    /// Builds evidence from `node -> alternative label` pairs.
    pub fn from_labels<'a, I>(net: &Network, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut ev = Evidence::new();
        for (node, label) in pairs {
            let idx = net.alternative_index(node, label)?;
            ev.assignments.insert(node.to_string(), idx);
        }
        Ok(ev)
    }

    /// Renders as `node -> label` pairs in node-declaration order.
    pub fn to_labels(&self, net: &Network) -> Vec<(String, String)> {
        net.nodes
            .iter()
            .filter_map(|n| {
                self.get(&n.name)
                    .map(|i| (n.name.clone(), n.alternatives[i].clone()))
            })
            .collect()
    }

    /// `D=d1, E=e2` form, used in error messages.
    pub fn describe(&self, net: &Network) -> String {
        let parts: Vec<String> = self
            .to_labels(net)
            .into_iter()
            .map(|(n, l)| format!("{n}={l}"))
            .collect();
        if parts.is_empty() {
            "(no evidence)".to_string()
        } else {
            parts.join(", ")
        }
    }
}

#[derive(Deserialize, Serialize)]
struct EvidenceDocument {
    evidence: BTreeMap<String, String>,
}

/// Parses an evidence document `{"evidence": {"node": "label", ...}}`.
pub fn parse_evidence(net: &Network, text: &str) -> Result<Evidence> {
    let doc: EvidenceDocument = serde_json::from_str(text).map_err(syntax_error)?;
    Evidence::from_labels(
        net,
        doc.evidence.iter().map(|(n, l)| (n.as_str(), l.as_str())),
    )
}

pub fn serialize_evidence(net: &Network, ev: &Evidence) -> String {
    let doc = EvidenceDocument {
        evidence: ev.to_labels(net).into_iter().collect(),
    };
    serde_json::to_string_pretty(&doc).expect("evidence serializes")
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> Result<Network> {
    let net: Network = serde_json::from_str(text).map_err(syntax_error)?;
    let report = validate_network(&net);
    if report.is_valid() {
        Ok(net)
    } else {
        Err(Error::InvalidNetwork(report))
    }
}

/// Pretty-printed JSON with fields in declaration order.
pub fn serialize_network(net: &Network) -> String {
    serde_json::to_string_pretty(net).expect("network serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DuplicateNode,
    TooFewAlternatives,
    DuplicateAlternative,
    UnknownParent,
    DuplicateParent,
    Cycle,
    CpdRowCount,
    VectorLength,
    Simplex,
    NonFinite,
    EmptySupport,
    Weight,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::DuplicateNode => "duplicate-node",
            Rule::TooFewAlternatives => "too-few-alternatives",
            Rule::DuplicateAlternative => "duplicate-alternative",
            Rule::UnknownParent => "unknown-parent",
            Rule::DuplicateParent => "duplicate-parent",
            Rule::Cycle => "cycle",
            Rule::CpdRowCount => "cpd-row-count",
            Rule::VectorLength => "vector-length",
            Rule::Simplex => "simplex",
            Rule::NonFinite => "non-finite",
            Rule::EmptySupport => "empty-support",
            Rule::Weight => "weight",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub node: String,
    pub row: Option<usize>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(r) => write!(f, "{} row {}: {}: {}", self.node, r, self.rule, self.detail),
            None => write!(f, "{}: {}: {}", self.node, self.rule, self.detail),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, node: &str, row: Option<usize>, rule: Rule, detail: impl Into<String>) {
        self.violations.push(Violation {
            node: node.to_string(),
            row,
            rule,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

fn check_simplex(
    report: &mut ValidationReport,
    node: &str,
    row: usize,
    v: &[f64],
    expected_len: usize,
) {
    if v.len() != expected_len {
        report.push(
            node,
            Some(row),
            Rule::VectorLength,
            format!(
                "vector has length {}, node has {} alternatives",
                v.len(),
                expected_len
            ),
        );
        return;
    }
    if v.iter().any(|x| !x.is_finite()) {
        report.push(
            node,
            Some(row),
            Rule::NonFinite,
            "vector entry is not finite",
        );
        return;
    }
    if let Some(x) = v.iter().find(|&&x| x < 0.0) {
        report.push(
            node,
            Some(row),
            Rule::Simplex,
            format!("negative entry {x}"),
        );
        return;
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOLERANCE {
        report.push(
            node,
            Some(row),
            Rule::Simplex,
            format!("entries sum to {s}"),
        );
    }
}

/// Checks every structural and numerical invariant. Violations are data.
pub fn validate_network(net: &Network) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut cards: HashMap<&str, usize> = HashMap::new();
    for node in &net.nodes {
        if cards
            .insert(node.name.as_str(), node.alternatives.len())
            .is_some()
        {
            report.push(
                &node.name,
                None,
                Rule::DuplicateNode,
                "node declared more than once",
            );
        }
    }

    for node in &net.nodes {
        let t = node.alternatives.len();
        if t < 2 {
            report.push(
                &node.name,
                None,
                Rule::TooFewAlternatives,
                format!("{t} alternatives, need at least 2"),
            );
        }
        let mut seen = HashSet::new();
        for alt in &node.alternatives {
            if !seen.insert(alt) {
                report.push(
                    &node.name,
                    None,
                    Rule::DuplicateAlternative,
                    format!("alternative `{alt}` repeated"),
                );
            }
        }

        let mut seen = HashSet::new();
        let mut rows: Option<usize> = Some(1);
        for p in &node.parents {
            if !seen.insert(p) {
                report.push(
                    &node.name,
                    None,
                    Rule::DuplicateParent,
                    format!("parent `{p}` repeated"),
                );
            }
            match cards.get(p.as_str()) {
                Some(&c) => rows = rows.map(|r| r * c),
                None => {
                    report.push(
                        &node.name,
                        None,
                        Rule::UnknownParent,
                        format!("parent `{p}` not declared"),
                    );
                    rows = None;
                }
            }
        }
        if let Some(rows) = rows {
            if node.cpd.len() != rows {
                report.push(
                    &node.name,
                    None,
                    Rule::CpdRowCount,
                    format!(
                        "{} cpd rows, expected {} parent configurations",
                        node.cpd.len(),
                        rows
                    ),
                );
            }
        }

        for (r, spec) in node.cpd.iter().enumerate() {
            match spec {
                DistributionSpec::Dirichlet(a) => {
                    if a.len() != t {
                        report.push(
                            &node.name,
                            Some(r),
                            Rule::VectorLength,
                            format!(
                                "dirichlet has {} counts, node has {} alternatives",
                                a.len(),
                                t
                            ),
                        );
                    }
                }
                DistributionSpec::Point(p) => check_simplex(&mut report, &node.name, r, p, t),
                DistributionSpec::Finite(atoms) => {
                    if atoms.is_empty() {
                        report.push(
                            &node.name,
                            Some(r),
                            Rule::EmptySupport,
                            "finite spec has no atoms",
                        );
                        continue;
                    }
                    for a in atoms {
                        check_simplex(&mut report, &node.name, r, &a.probs, t);
                    }
                    if atoms
                        .iter()
                        .any(|a| !(a.weight > 0.0) || !a.weight.is_finite())
                    {
                        report.push(
                            &node.name,
                            Some(r),
                            Rule::Weight,
                            "atom weights must be positive",
                        );
                    } else {
                        let s: f64 = atoms.iter().map(|a| a.weight).sum();
                        if (s - 1.0).abs() > SIMPLEX_TOLERANCE {
                            report.push(
                                &node.name,
                                Some(r),
                                Rule::Weight,
                                format!("atom weights sum to {s}"),
                            );
                        }
                    }
                }
            }
        }
    }

    // Kahn's algorithm over declared parents; whatever is left sits on or behind a cycle.
    let index: HashMap<&str, usize> = net
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.name.as_str(), i))
        .collect();
    let n = net.nodes.len();
    let mut indegree = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, node) in net.nodes.iter().enumerate() {
        for p in &node.parents {
            if let Some(&pi) = index.get(p.as_str()) {
                indegree[i] += 1;
                children[pi].push(i);
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(i) = stack.pop() {
        removed[i] = true;
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                stack.push(c);
            }
        }
    }
    for (i, node) in net.nodes.iter().enumerate() {
        if !removed[i] && index.get(node.name.as_str()) == Some(&i) {
            report.push(
                &node.name,
                None,
                Rule::Cycle,
                "node lies on or downstream of a directed cycle",
            );
        }
    }

    report
}

impl Network {
    pub fn node(&self, name: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn alternative_index(&self, node: &str, label: &str) -> Result<usize> {
        let spec = self
            .node(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        spec.alternatives
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownAlternative {
                node: node.to_string(),
                label: label.to_string(),
            })
    }

    /// Total number of stored probability values.
    pub fn value_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.alternatives.len() * n.cpd.len())
            .sum()
    }

    pub fn has_dirichlet(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| n.cpd.iter().any(|d| d.is_dirichlet()))
    }
}

/// Index-based view of a valid network.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    pub cards: Vec<usize>,
    pub parents: Vec<Vec<usize>>,
    /// Topological order, ties broken by declaration order.
    pub topo: Vec<usize>,
}

impl Structure {
    pub fn new(net: &Network) -> Self {
        let index: HashMap<&str, usize> = net
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.as_str(), i))
            .collect();
        let n = net.nodes.len();
        let cards = net.nodes.iter().map(|n| n.alternatives.len()).collect();
        let parents: Vec<Vec<usize>> = net
            .nodes
            .iter()
            .map(|node| node.parents.iter().map(|p| index[p.as_str()]).collect())
            .collect();
        let mut placed = vec![false; n];
        let mut topo = Vec::with_capacity(n);
        while topo.len() < n {
            let next = (0..n)
                .find(|&i| !placed[i] && parents[i].iter().all(|&p| placed[p]))
                .expect("network is acyclic");
            placed[next] = true;
            topo.push(next);
        }
        Structure {
            cards,
            parents,
            topo,
        }
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    /// Ancestors of `node`, excluding itself.
    pub fn ancestors(&self, node: usize) -> HashSet<usize> {
        let mut seen = HashSet::new();
        let mut stack = self.parents[node].clone();
        while let Some(p) = stack.pop() {
            if seen.insert(p) {
                stack.extend(self.parents[p].iter().copied());
            }
        }
        seen
    }

    /// Whether the undirected skeleton restricted to `keep` has no cycle.
    pub fn skeleton_acyclic(&self, keep: &[bool]) -> bool {
        let nodes = keep.iter().filter(|&&k| k).count();
        let mut edges = 0;
        let mut uf = UnionFind::new(self.len());
        for (c, ps) in self.parents.iter().enumerate() {
            if !keep[c] {
                continue;
            }
            for &p in ps {
                if keep[p] {
                    edges += 1;
                    uf.union(p, c);
                }
            }
        }
        let components = (0..self.len())
            .filter(|&i| keep[i] && uf.find(i) == i)
            .count();
        edges == nodes - components
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Row-major configuration index; the last entry varies fastest.
pub fn config_index(values: &[usize], cards: &[usize]) -> usize {
    values
        .iter()
        .zip(cards)
        .fold(0, |acc, (&v, &c)| acc * c + v)
}

/// Inverse of [`config_index`].
pub fn config_values(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut values = vec![0; cards.len()];
    for k in (0..cards.len()).rev() {
        values[k] = index % cards[k];
        index /= cards[k];
    }
    values
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyClass {
    Tree,
    SinglyConnected,
    MultiplyConnected,
}

impl fmt::Display for TopologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyClass::Tree => "tree",
            TopologyClass::SinglyConnected => "singly_connected",
            TopologyClass::MultiplyConnected => "multiply_connected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub class: TopologyClass,
    /// Minimal set of roots whose removal leaves a singly connected skeleton.
    pub suggested_cutset: Vec<String>,
    /// False when the network is multiply connected and no root set of size
    /// at most [`MAX_ROOT_CUTSET`] breaks every loop.
    pub root_cutset_available: bool,
    pub max_alternatives: usize,
    pub min_parents: usize,
    pub max_parents: usize,
    pub node_count: usize,
    pub value_count: usize,
}

pub const MAX_ROOT_CUTSET: usize = 3;

/// Classifies the undirected skeleton and suggests a root loop cutset.
pub fn classify_topology(net: &Network) -> TopologyReport {
    let s = Structure::new(net);
    let n = s.len();
    let all = vec![true; n];
    let acyclic = s.skeleton_acyclic(&all);
    let class = if !acyclic {
        TopologyClass::MultiplyConnected
    } else if s.parents.iter().all(|p| p.len() <= 1) {
        TopologyClass::Tree
    } else {
        TopologyClass::SinglyConnected
    };

    let mut cutset = Vec::new();
    let mut available = true;
    if class == TopologyClass::MultiplyConnected {
        let roots: Vec<usize> = (0..n).filter(|&i| s.parents[i].is_empty()).collect();
        available = false;
        'search: for size in 1..=MAX_ROOT_CUTSET.min(roots.len()) {
            for combo in combinations(roots.len(), size) {
                let mut keep = all.clone();
                for &k in &combo {
                    keep[roots[k]] = false;
                }
                if s.skeleton_acyclic(&keep) {
                    cutset = combo
                        .iter()
                        .map(|&k| net.nodes[roots[k]].name.clone())
                        .collect();
                    available = true;
                    break 'search;
                }
            }
        }
    }

    let parent_counts = s.parents.iter().map(Vec::len);
    TopologyReport {
        class,
        suggested_cutset: cutset,
        root_cutset_available: available,
        max_alternatives: s.cards.iter().copied().max().unwrap_or(0),
        min_parents: parent_counts.clone().min().unwrap_or(0),
        max_parents: parent_counts.max().unwrap_or(0),
        node_count: n,
        value_count: net.value_count(),
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node_text() -> &'static str {
        r#"{
          "name": "two-node",
          "nodes": [
            {"name": "E", "alternatives": ["e1", "e2"], "parents": [],
             "cpd": [{"dirichlet": [0, 0]}]},
            {"name": "F", "alternatives": ["f1", "f2"], "parents": ["E"],
             "cpd": [{"dirichlet": [0, 0]}, {"dirichlet": [0, 0]}]}
          ]
        }"#
    }

    fn node(name: &str, parents: &[&str], rows: usize) -> NodeSpec {
        NodeSpec {
            name: name.into(),
            alternatives: vec![
                format!("{}1", name.to_lowercase()),
                format!("{}2", name.to_lowercase()),
            ],
            parents: parents.iter().map(|p| p.to_string()).collect(),
            cpd: vec![DistributionSpec::Point(vec![0.5, 0.5]); rows],
        }
    }

    fn diamond() -> Network {
        Network {
            name: "diamond".into(),
            nodes: vec![
                node("C", &[], 1),
                node("D", &["C"], 2),
                node("E", &["C"], 2),
                node("F", &["D", "E"], 4),
            ],
        }
    }

    #[test]
    fn parses_two_node_example() {
        let net = parse_network(two_node_text()).unwrap();
        assert_eq!(net.nodes.len(), 2);
        assert_eq!(net.nodes[1].cpd.len(), 2);
        assert_eq!(net.nodes[1].parents, vec!["E".to_string()]);
    }

    #[test]
    fn degenerate_root_is_valid() {
        let text = r#"{"name": "x", "nodes": [{"name": "A", "alternatives": ["a1", "a2"],
                       "cpd": [{"point": [1, 0]}]}]}"#;
        assert!(parse_network(text).is_ok());
    }

    #[test]
    fn missing_row_is_schema_violation() {
        let text = r#"{"name": "x", "nodes": [
            {"name": "E", "alternatives": ["e1", "e2"], "parents": [], "cpd": [{"dirichlet": [0, 0]}]},
            {"name": "F", "alternatives": ["f1", "f2"], "parents": ["E"], "cpd": [{"dirichlet": [0, 0]}]}]}"#;
        match parse_network(text) {
            Err(Error::InvalidNetwork(r)) => {
                assert_eq!(r.violations.len(), 1);
                assert_eq!(r.violations[0].rule, Rule::CpdRowCount);
                assert_eq!(r.violations[0].node, "F");
            }
            other => panic!("expected schema violation, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_network("{\"name\": \"x\",\n \"nodes\": [,]}").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diamond_validates_clean() {
        assert!(validate_network(&diamond()).is_valid());
    }

    #[test]
    fn off_simplex_vector_names_row() {
        let mut net = diamond();
        net.nodes[2].cpd[1] = DistributionSpec::Point(vec![0.5, 0.6]);
        let report = validate_network(&net);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(
            (v.node.as_str(), v.row, v.rule),
            ("E", Some(1), Rule::Simplex)
        );
    }

    #[test]
    fn within_tolerance_is_accepted() {
        let mut net = diamond();
        net.nodes[0].cpd[0] = DistributionSpec::Point(vec![0.5, 0.5 + 5e-13]);
        assert!(validate_network(&net).is_valid());
        net.nodes[0].cpd[0] = DistributionSpec::Point(vec![0.5, 0.5 + 5e-12]);
        assert!(!validate_network(&net).is_valid());
    }

    #[test]
    fn self_parent_is_cycle() {
        let net = Network {
            name: "loop".into(),
            nodes: vec![node("A", &["A"], 2)],
        };
        let report = validate_network(&net);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::Cycle && v.node == "A"));
    }

    #[test]
    fn bad_weights_and_empty_support() {
        let mut net = diamond();
        net.nodes[0].cpd[0] = DistributionSpec::Finite(vec![
            Atom::new(vec![0.2, 0.8], 0.5),
            Atom::new(vec![0.8, 0.2], 0.6),
        ]);
        net.nodes[1].cpd[0] = DistributionSpec::Finite(vec![]);
        let rules: Vec<Rule> = validate_network(&net)
            .violations
            .iter()
            .map(|v| v.rule)
            .collect();
        assert_eq!(rules, vec![Rule::Weight, Rule::EmptySupport]);
    }

    #[test]
    fn validation_is_pure() {
        let mut net = diamond();
        net.nodes[3].cpd.pop();
        net.nodes[1].alternatives[1] = "d1".into();
        assert_eq!(validate_network(&net), validate_network(&net));
    }

    #[test]
    fn config_index_is_row_major() {
        let cards = [2, 3];
        assert_eq!(config_index(&[0, 0], &cards), 0);
        assert_eq!(config_index(&[0, 2], &cards), 2);
        assert_eq!(config_index(&[1, 0], &cards), 3);
        for i in 0..6 {
            assert_eq!(config_index(&config_values(i, &cards), &cards), i);
        }
    }

    #[test]
    fn topology_of_chain_diamond_and_vee() {
        let chain = Network {
            name: "chain".into(),
            nodes: vec![
                node("D", &[], 1),
                node("E", &["D"], 2),
                node("F", &["E"], 2),
            ],
        };
        let r = classify_topology(&chain);
        assert_eq!(r.class, TopologyClass::Tree);
        assert!(r.suggested_cutset.is_empty());

        let r = classify_topology(&diamond());
        assert_eq!(r.class, TopologyClass::MultiplyConnected);
        assert_eq!(r.suggested_cutset, vec!["C".to_string()]);
        assert_eq!(
            (r.max_alternatives, r.min_parents, r.max_parents),
            (2, 0, 2)
        );
        assert_eq!((r.node_count, r.value_count), (4, 18));

        let vee = Network {
            name: "vee".into(),
            nodes: vec![
                node("D", &[], 1),
                node("E", &[], 1),
                node("F", &["D", "E"], 4),
            ],
        };
        assert_eq!(
            classify_topology(&vee).class,
            TopologyClass::SinglyConnected
        );
    }

    #[test]
    fn loop_without_root_cutset_is_flagged() {
        // A -> B, A -> C, B -> D, C -> D with A's loop closed below a non-root:
        // R -> A, and the loop A-B-D-C-A contains no root.
        let net = Network {
            name: "deep".into(),
            nodes: vec![
                node("R", &[], 1),
                node("A", &["R"], 2),
                node("B", &["A"], 2),
                node("C", &["A"], 2),
                node("D", &["B", "C"], 4),
            ],
        };
        let r = classify_topology(&net);
        assert_eq!(r.class, TopologyClass::MultiplyConnected);
        assert!(!r.root_cutset_available);
        assert!(r.suggested_cutset.is_empty());
    }

    #[test]
    fn evidence_round_trip_through_labels() {
        let net = diamond();
        let ev = parse_evidence(&net, r#"{"evidence": {"D": "d2", "C": "c1"}}"#).unwrap();
        assert_eq!(ev.get("D"), Some(1));
        assert_eq!(ev.get("C"), Some(0));
        assert_eq!(
            parse_evidence(&net, &serialize_evidence(&net, &ev)).unwrap(),
            ev
        );
        assert!(matches!(
            parse_evidence(&net, r#"{"evidence": {"D": "zz"}}"#),
            Err(Error::UnknownAlternative { .. })
        ));
    }
}
