//! Downward propagation of first and second moments of node marginals.
//!
//! For a node `X` with mutually independent parents, `p(x_i)` is the sum over
//! parent configurations `c` of `p(x_i | c) * prod_l p(parent_l = c_l)`. Since
//! cpd rows are independent of each other and of the parents' marginals,
//!
//! ```text
//! E[p(x_i) p(x_j)] = sum_{c, c'} E[p(x_i|c) p(x_j|c')] * prod_l E[p(c_l) p(c'_l)]
//! ```
//!
//! where the row factor is the row's cross moment when `c == c'` and the
//! product of row means otherwise, and the parent factor is an entry of the
//! parent's second-moment matrix.
//!
//! The same expansion is carried out simultaneously for a list of
//! *conditions* (joint values of instantiated nodes). Conditions share
//! uncertain rows, so the engine tracks second moments for every pair of
//! conditions, `E[p(x_i | m) p(x_j | m')]`. A single empty condition gives
//! ordinary prior propagation; conditioning on root cutset values and on
//! upstream evidence are the other two uses.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{exact_marginal, instantiate_expected};
use crate::moments::MomentTable;
use crate::network::{
    classify_topology, config_index, config_values, Evidence, Network, Structure, TopologyClass,
};
use crate::NodeMap;

/// Mean and second-moment matrix of a node's (random) marginal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMoments {
    pub node: String,
    pub mean: Vec<f64>,
    pub second: Vec<Vec<f64>>,
    pub variance: Vec<f64>,
    /// Number of `(i, j, c, c')` terms summed to produce `second`.
    pub term_products: u64,
}

impl NodeMoments {
    pub fn new(
        node: impl Into<String>,
        mean: Vec<f64>,
        second: Vec<Vec<f64>>,
        term_products: u64,
    ) -> Self {
        let variance = (0..mean.len())
            .map(|i| second[i][i] - mean[i] * mean[i])
            .collect();
        NodeMoments {
            node: node.into(),
            mean,
            second,
            variance,
            term_products,
        }
    }

    pub fn from_table(node: impl Into<String>, table: &MomentTable) -> Self {
        Self::new(node, table.mean.clone(), table.second.clone(), 0)
    }

    /// Moments of a node known to take alternative `value`.
    pub fn indicator(node: impl Into<String>, t: usize, value: usize) -> Self {
        let mut p = vec![0.0; t];
        p[value] = 1.0;
        Self::from_table(node, &MomentTable::point(&p))
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn std_dev(&self, i: usize) -> f64 {
        self.variance[i].max(0.0).sqrt()
    }

    /// Checks mean normalization, row sums, symmetry and the variance range
    /// `0 <= V_i <= mu_i - mu_i^2`, all within `tol`.
    pub fn verify(&self, tol: f64) -> std::result::Result<(), String> {
        let t = self.len();
        let total: f64 = self.mean.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(format!("{}: means sum to {total}", self.node));
        }
        for i in 0..t {
            let row: f64 = self.second[i].iter().sum();
            if (row - self.mean[i]).abs() > tol {
                return Err(format!(
                    "{}: row {i} sums to {row}, mean {}",
                    self.node, self.mean[i]
                ));
            }
            for j in 0..t {
                if (self.second[i][j] - self.second[j][i]).abs() > tol {
                    return Err(format!(
                        "{}: second moments not symmetric at ({i},{j})",
                        self.node
                    ));
                }
            }
            let v = self.variance[i];
            let cap = self.mean[i] - self.mean[i] * self.mean[i];
            if v < -tol || v > cap + tol {
                return Err(format!("{}: variance {v} outside [0, {cap}]", self.node));
            }
        }
        Ok(())
    }
}

/// `S_ii - mu_i^2`.
pub fn variance_of(m: &NodeMoments, i: usize) -> Result<f64> {
    if i >= m.len() {
        return Err(Error::AlternativeOutOfRange {
            node: m.node.clone(),
            index: i,
            count: m.len(),
        });
    }
    Ok(m.second[i][i] - m.mean[i] * m.mean[i])
}

/// Moments of a node's marginal under each of several conditions, with
/// second moments for every ordered pair of conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionedMoments {
    pub node: String,
    pub alternatives: usize,
    pub conditions: usize,
    /// `mean[m * t + i] = E[p(x_i | c_m)]`
    mean: Vec<f64>,
    /// `joint[((m * M + m') * t + i) * t + j] = E[p(x_i | c_m) p(x_j | c_m')]`
    joint: Vec<f64>,
    pub term_products: u64,
}

impl ConditionedMoments {
    fn from_node(m: &NodeMoments) -> Self {
        ConditionedMoments {
            node: m.node.clone(),
            alternatives: m.len(),
            conditions: 1,
            mean: m.mean.clone(),
            joint: m.second.iter().flatten().copied().collect(),
            term_products: m.term_products,
        }
    }

    pub fn mean(&self, m: usize, i: usize) -> f64 {
        self.mean[m * self.alternatives + i]
    }

    pub fn joint(&self, m: usize, m2: usize, i: usize, j: usize) -> f64 {
        let t = self.alternatives;
        self.joint[((m * self.conditions + m2) * t + i) * t + j]
    }

    fn into_node(self) -> NodeMoments {
        assert_eq!(self.conditions, 1);
        let t = self.alternatives;
        let second = self.joint.chunks(t).map(<[f64]>::to_vec).collect();
        NodeMoments::new(self.node, self.mean, second, self.term_products)
    }
}

/// Expands one child's moments over its free parents for all condition pairs.
///
/// `row_of(m, c)` maps a condition and a free-parent configuration to the
/// index of the stored cpd row that applies.
fn mix_conditioned(
    node: &str,
    parents: &[&ConditionedMoments],
    cpt: &[MomentTable],
    t: usize,
    conditions: usize,
    row_of: &dyn Fn(usize, usize) -> usize,
) -> ConditionedMoments {
    let cards: Vec<usize> = parents.iter().map(|p| p.alternatives).collect();
    let configs: usize = cards.iter().product();
    let values: Vec<Vec<usize>> = (0..configs).map(|c| config_values(c, &cards)).collect();
    let mut count = 0u64;

    let mut mean = vec![0.0; conditions * t];
    for m in 0..conditions {
        for (c, vals) in values.iter().enumerate() {
            let weight: f64 = parents
                .iter()
                .zip(vals)
                .map(|(p, &v)| p.mean(m, v))
                .product();
            let row = &cpt[row_of(m, c)];
            for i in 0..t {
                mean[m * t + i] += row.mean[i] * weight;
            }
        }
    }

    let mut joint = vec![0.0; conditions * conditions * t * t];
    let mut weights = vec![0.0; configs * configs];
    for m in 0..conditions {
        for m2 in 0..conditions {
            for (c, a) in values.iter().enumerate() {
                for (c2, b) in values.iter().enumerate() {
                    weights[c * configs + c2] = parents
                        .iter()
                        .zip(a.iter().zip(b))
                        .map(|(p, (&u, &v))| p.joint(m, m2, u, v))
                        .product();
                }
            }
            let base = (m * conditions + m2) * t * t;
            for c in 0..configs {
                let r = row_of(m, c);
                for c2 in 0..configs {
                    let r2 = row_of(m2, c2);
                    let w = weights[c * configs + c2];
                    let (row, row2) = (&cpt[r], &cpt[r2]);
                    for i in 0..t {
                        for j in 0..t {
                            let cross = if r == r2 {
                                row.second[i][j]
                            } else {
                                row.mean[i] * row2.mean[j]
                            };
                            joint[base + i * t + j] += cross * w;
                        }
                    }
                    count += (t * t) as u64;
                }
            }
        }
    }

    ConditionedMoments {
        node: node.to_string(),
        alternatives: t,
        conditions,
        mean,
        joint,
        term_products: count,
    }
}

/// Moments of a child from independent parents and its cpd moment tables.
///
/// `cpt` is indexed by parent configuration, row-major in `parent_moments`
/// order. With one parent this is the tree expansion; with several, parent
/// configuration weights are products over parents.
pub fn mix_child_moments(
    child: &str,
    parent_moments: &[NodeMoments],
    cpt: &[MomentTable],
) -> Result<NodeMoments> {
    let configs: usize = parent_moments.iter().map(NodeMoments::len).product();
    if cpt.len() != configs {
        return Err(Error::DimensionMismatch(format!(
            "{child}: {} cpd rows for {configs} parent configurations",
            cpt.len()
        )));
    }
    let t = cpt.first().map_or(0, MomentTable::len);
    if t < 2 {
        return Err(Error::TooFewAlternatives(t));
    }
    if cpt.iter().any(|r| r.len() != t) {
        return Err(Error::DimensionMismatch(format!(
            "{child}: cpd rows differ in length"
        )));
    }
    let parents: Vec<ConditionedMoments> = parent_moments
        .iter()
        .map(ConditionedMoments::from_node)
        .collect();
    let refs: Vec<&ConditionedMoments> = parents.iter().collect();
    Ok(mix_conditioned(child, &refs, cpt, t, 1, &|_, c| c).into_node())
}

fn moment_tables(net: &Network) -> Result<Vec<Vec<MomentTable>>> {
    net.nodes
        .iter()
        .map(|n| n.cpd.iter().map(|d| d.moments()).collect())
        .collect()
}

/// Propagates over every node not in `fixed`, under each of `conditions`
/// (one value per fixed node). The free part of the network must be singly
/// connected.
fn propagate_conditions(
    net: &Network,
    s: &Structure,
    tables: &[Vec<MomentTable>],
    fixed: &[usize],
    conditions: &[Vec<usize>],
) -> Vec<Option<ConditionedMoments>> {
    let n = s.len();
    let count = conditions.len();
    let mut fixed_pos = vec![None; n];
    for (k, &f) in fixed.iter().enumerate() {
        fixed_pos[f] = Some(k);
    }
    let mut out: Vec<Option<ConditionedMoments>> = vec![None; n];
    for &x in &s.topo {
        if fixed_pos[x].is_some() {
            continue;
        }
        let all_parents = &s.parents[x];
        let all_cards: Vec<usize> = all_parents.iter().map(|&p| s.cards[p]).collect();
        let free: Vec<usize> = (0..all_parents.len())
            .filter(|&k| fixed_pos[all_parents[k]].is_none())
            .collect();
        let free_cards: Vec<usize> = free.iter().map(|&k| all_cards[k]).collect();
        let parent_refs: Vec<&ConditionedMoments> = free
            .iter()
            .map(|&k| out[all_parents[k]].as_ref().expect("parent precedes child"))
            .collect();
        let row_of = |m: usize, c: usize| {
            let free_vals = config_values(c, &free_cards);
            let mut full = vec![0; all_parents.len()];
            let mut next_free = 0;
            for (k, &p) in all_parents.iter().enumerate() {
                full[k] = match fixed_pos[p] {
                    Some(fk) => conditions[m][fk],
                    None => {
                        next_free += 1;
                        free_vals[next_free - 1]
                    }
                };
            }
            config_index(&full, &all_cards)
        };
        out[x] = Some(mix_conditioned(
            &net.nodes[x].name,
            &parent_refs,
            &tables[x],
            s.cards[x],
            count,
            &row_of,
        ));
    }
    out
}

/// Exact prior moments of every node of a singly connected network.
pub fn propagate_prior_moments(net: &Network) -> Result<NodeMap<NodeMoments>> {
    if classify_topology(net).class == TopologyClass::MultiplyConnected {
        return Err(Error::MultiplyConnected);
    }
    let s = Structure::new(net);
    let tables = moment_tables(net)?;
    let conditioned = propagate_conditions(net, &s, &tables, &[], &[vec![]]);
    Ok(net
        .nodes
        .iter()
        .zip(conditioned)
        .map(|(node, c)| {
            (
                node.name.clone(),
                c.expect("every node is free").into_node(),
            )
        })
        .collect())
}

/// Exact moments of every node's conditional marginal given evidence that
/// lies entirely upstream: every ancestor of an evidence node must itself
/// be observed. Evidence nodes are removed and their children's cpds sliced
/// at the observed values; the rest of the network must stay singly
/// connected. Observed nodes report degenerate moments.
pub fn downstream_evidence_moments(net: &Network, ev: &Evidence) -> Result<NodeMap<NodeMoments>> {
    ev.check(net)?;
    let s = Structure::new(net);
    let mut fixed = Vec::new();
    let mut values = Vec::new();
    for (i, node) in net.nodes.iter().enumerate() {
        if let Some(v) = ev.get(&node.name) {
            fixed.push(i);
            values.push(v);
        }
    }
    let observed: HashSet<usize> = fixed.iter().copied().collect();
    for &w in &fixed {
        let upstream = s
            .ancestors(w)
            .into_iter()
            .filter(|a| !observed.contains(a))
            .min();
        if let Some(a) = upstream {
            return Err(Error::UnsupportedEvidence {
                node: net.nodes[w].name.clone(),
                reason: format!(
                    "unobserved ancestor `{}` would need upward propagation",
                    net.nodes[a].name
                ),
            });
        }
    }
    let keep: Vec<bool> = (0..s.len()).map(|i| !observed.contains(&i)).collect();
    if !s.skeleton_acyclic(&keep) {
        return Err(Error::MultiplyConnected);
    }
    if !ev.is_empty() {
        // Expected-value network: P(ev) must be positive for the conditional to exist.
        let pnet = instantiate_expected(net)?;
        exact_marginal(&pnet, ev, &net.nodes[fixed[0]].name)?;
    }

    let tables = moment_tables(net)?;
    let conditioned = propagate_conditions(net, &s, &tables, &fixed, &[values]);
    Ok(net
        .nodes
        .iter()
        .zip(conditioned)
        .map(|(node, c)| {
            let m = match c {
                Some(c) => c.into_node(),
                None => NodeMoments::indicator(
                    &node.name,
                    node.alternatives.len(),
                    ev.get(&node.name).unwrap(),
                ),
            };
            (node.name.clone(), m)
        })
        .collect())
}

/// Per-condition moments of every non-cutset node, for every joint value of
/// the (root) cutset, in row-major cutset order.
pub fn cutset_conditioned_moments(
    net: &Network,
    cutset: &[String],
) -> Result<NodeMap<ConditionedMoments>> {
    let (s, fixed) = check_cutset(net, cutset)?;
    let tables = moment_tables(net)?;
    let cards: Vec<usize> = fixed.iter().map(|&f| s.cards[f]).collect();
    let conditions: Vec<Vec<usize>> = (0..cards.iter().product())
        .map(|m| config_values(m, &cards))
        .collect();
    let conditioned = propagate_conditions(net, &s, &tables, &fixed, &conditions);
    Ok(net
        .nodes
        .iter()
        .zip(conditioned)
        .filter_map(|(node, c)| c.map(|c| (node.name.clone(), c)))
        .collect())
}

fn check_cutset(net: &Network, cutset: &[String]) -> Result<(Structure, Vec<usize>)> {
    if cutset.is_empty() {
        return Err(Error::InvalidCutset("cutset is empty".into()));
    }
    let s = Structure::new(net);
    let mut fixed = Vec::new();
    for name in cutset {
        let i = net.index_of(name)?;
        if !s.parents[i].is_empty() {
            return Err(Error::InvalidCutset(format!("`{name}` is not a root")));
        }
        if fixed.contains(&i) {
            return Err(Error::InvalidCutset(format!("`{name}` listed twice")));
        }
        fixed.push(i);
    }
    let keep: Vec<bool> = (0..s.len()).map(|i| !fixed.contains(&i)).collect();
    if !s.skeleton_acyclic(&keep) {
        return Err(Error::InvalidCutset(format!(
            "removing {} leaves a loop",
            cutset.join(", ")
        )));
    }
    Ok((s, fixed))
}

/// Exact prior moments of every node by conditioning on a set of roots whose
/// removal leaves a singly connected network.
///
/// With `p(x) = sum_m p(x | c_m) p(c_m)` and the cutset roots' uncertainty
/// independent of everything below them,
///
/// ```text
/// E[p(x_i)]        = sum_m E[p(x_i | c_m)] E[p(c_m)]
/// E[p(x_i) p(x_j)] = sum_{m, m'} E[p(x_i | c_m) p(x_j | c_m')] E[p(c_m) p(c_m')]
/// ```
///
/// where `E[p(c_m) p(c_m')]` is a product of the roots' second moments.
pub fn conditioned_prior_moments(net: &Network, cutset: &[String]) -> Result<NodeMap<NodeMoments>> {
    let (s, fixed) = check_cutset(net, cutset)?;
    let tables = moment_tables(net)?;
    let cards: Vec<usize> = fixed.iter().map(|&f| s.cards[f]).collect();
    let count: usize = cards.iter().product();
    let conditions: Vec<Vec<usize>> = (0..count).map(|m| config_values(m, &cards)).collect();
    let root_tables: Vec<&MomentTable> = fixed.iter().map(|&f| &tables[f][0]).collect();

    let cond_mean: Vec<f64> = conditions
        .iter()
        .map(|c| {
            root_tables
                .iter()
                .zip(c)
                .map(|(tb, &v)| tb.mean[v])
                .product()
        })
        .collect();
    let cond_second: Vec<f64> = conditions
        .iter()
        .flat_map(|a| {
            conditions.iter().map(|b| {
                root_tables
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(tb, (&u, &v))| tb.second[u][v])
                    .product::<f64>()
            })
        })
        .collect();

    let conditioned = propagate_conditions(net, &s, &tables, &fixed, &conditions);
    Ok(net
        .nodes
        .iter()
        .enumerate()
        .zip(conditioned)
        .map(|((i, node), c)| {
            let m = match c {
                None => {
                    // A cutset root costs what the same root costs in prior propagation.
                    let mut m = NodeMoments::from_table(&node.name, &tables[i][0]);
                    m.term_products = (m.len() * m.len()) as u64;
                    m
                }
                Some(c) => {
                    let t = c.alternatives;
                    let mut mean = vec![0.0; t];
                    let mut second = vec![vec![0.0; t]; t];
                    for m in 0..count {
                        for i in 0..t {
                            mean[i] += c.mean(m, i) * cond_mean[m];
                        }
                        for m2 in 0..count {
                            let w = cond_second[m * count + m2];
                            for i in 0..t {
                                for j in 0..t {
                                    second[i][j] += c.joint(m, m2, i, j) * w;
                                }
                            }
                        }
                    }
                    let terms = c.term_products + (count * count * t * t) as u64;
                    NodeMoments::new(&node.name, mean, second, terms)
                }
            };
            (node.name.clone(), m)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::dirichlet_moments;
    use crate::network::{Atom, DistributionSpec, NodeSpec};
    use approx::assert_abs_diff_eq;

    fn node(name: &str, parents: &[&str], cpd: Vec<DistributionSpec>) -> NodeSpec {
        let t = cpd[0].len();
        NodeSpec {
            name: name.into(),
            alternatives: (1..=t)
                .map(|i| format!("{}{i}", name.to_lowercase()))
                .collect(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            cpd,
        }
    }

    fn flat(n: usize) -> Vec<DistributionSpec> {
        vec![DistributionSpec::Dirichlet(vec![0, 0]); n]
    }

    fn urn() -> DistributionSpec {
        DistributionSpec::Finite(vec![
            Atom::new(vec![0.25, 0.75], 0.5),
            Atom::new(vec![0.75, 0.25], 0.5),
        ])
    }

    #[test]
    fn two_node_example() {
        let net = Network {
            name: "ef".into(),
            nodes: vec![node("E", &[], flat(1)), node("F", &["E"], flat(2))],
        };
        let m = propagate_prior_moments(&net).unwrap();
        let f = m.get("F").unwrap();
        assert_abs_diff_eq!(f.mean[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.second[0][0], 11.0 / 36.0, epsilon = 1e-15);
        assert_abs_diff_eq!(variance_of(f, 0).unwrap(), 1.0 / 18.0, epsilon = 1e-15);
        let e = m.get("E").unwrap();
        assert_abs_diff_eq!(variance_of(e, 0).unwrap(), 1.0 / 12.0, epsilon = 1e-15);
        assert_eq!(e.term_products, 4);
        assert_eq!(f.term_products, 16);
    }

    #[test]
    fn mix_matches_hand_expansion() {
        let root = NodeMoments::from_table("E", &dirichlet_moments(&[0, 0]).unwrap());
        let cpt = vec![dirichlet_moments(&[0, 0]).unwrap(); 2];
        let f = mix_child_moments("F", &[root], &cpt).unwrap();
        // (1/3)(1/3) + 2 (1/2)(1/2)(1/6) + (1/3)(1/3)
        assert_abs_diff_eq!(
            f.second[0][0],
            1.0 / 9.0 + 1.0 / 12.0 + 1.0 / 9.0,
            epsilon = 1e-15
        );
        assert!(mix_child_moments("F", std::slice::from_ref(&f), &cpt[..1]).is_err());
    }

    #[test]
    fn urn_child() {
        let net = Network {
            name: "urn".into(),
            nodes: vec![
                node("U", &[], vec![urn()]),
                node("F", &["U"], vec![urn(), urn()]),
            ],
        };
        let f = propagate_prior_moments(&net)
            .unwrap()
            .get("F")
            .unwrap()
            .clone();
        assert_abs_diff_eq!(f.mean[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.second[0][0], 0.2890625, epsilon = 1e-15);
        assert_abs_diff_eq!(f.variance[0], 0.0390625, epsilon = 1e-15);
    }

    #[test]
    fn point_specs_have_no_variance() {
        let p = |v: Vec<f64>| DistributionSpec::Point(v);
        let net = Network {
            name: "pts".into(),
            nodes: vec![
                node("A", &[], vec![p(vec![0.2, 0.8])]),
                node("B", &["A"], vec![p(vec![0.9, 0.1]), p(vec![0.3, 0.7])]),
            ],
        };
        for m in propagate_prior_moments(&net).unwrap().values() {
            for i in 0..2 {
                assert_abs_diff_eq!(m.variance[i], 0.0, epsilon = 1e-15);
                for j in 0..2 {
                    assert_abs_diff_eq!(m.second[i][j], m.mean[i] * m.mean[j], epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn chain_evidence_reduces_to_two_node_case() {
        let net = Network {
            name: "def".into(),
            nodes: vec![
                node("D", &[], flat(1)),
                node("E", &["D"], flat(2)),
                node("F", &["E"], flat(2)),
            ],
        };
        let m = downstream_evidence_moments(&net, &Evidence::new().with("D", 0)).unwrap();
        assert_abs_diff_eq!(m.get("F").unwrap().variance[0], 1.0 / 18.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get("E").unwrap().variance[0], 1.0 / 12.0, epsilon = 1e-15);
        assert_eq!(m.get("D").unwrap().mean, vec![1.0, 0.0]);
        assert_eq!(m.get("D").unwrap().variance, vec![0.0, 0.0]);

        let err = downstream_evidence_moments(&net, &Evidence::new().with("F", 0)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedEvidence { ref node, .. } if node == "F"));
    }

    #[test]
    fn prior_rejects_loops() {
        let net = Network {
            name: "diamond".into(),
            nodes: vec![
                node("C", &[], flat(1)),
                node("D", &["C"], flat(2)),
                node("E", &["C"], flat(2)),
                node("F", &["D", "E"], flat(4)),
            ],
        };
        assert!(matches!(
            propagate_prior_moments(&net),
            Err(Error::MultiplyConnected)
        ));
        let m = conditioned_prior_moments(&net, &["C".to_string()]).unwrap();
        m.get("F").unwrap().verify(1e-12).unwrap();
        assert!(matches!(
            conditioned_prior_moments(&net, &["D".to_string()]),
            Err(Error::InvalidCutset(_))
        ));
        assert!(matches!(
            conditioned_prior_moments(&net, &[]),
            Err(Error::InvalidCutset(_))
        ));
    }

    #[test]
    fn variance_index_checked() {
        let m = NodeMoments::from_table("X", &dirichlet_moments(&[0, 0]).unwrap());
        assert!(variance_of(&m, 2).is_err());
        let p = NodeMoments::from_table("P", &MomentTable::point(&[0.4, 0.6]));
        assert_abs_diff_eq!(variance_of(&p, 1).unwrap(), 0.0, epsilon = 1e-16);
    }
}
