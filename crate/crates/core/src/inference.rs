//! Exact inference on networks with fixed (point-valued) parameters.
//!
//! Plain sum-product variable elimination over the full factorization, with a
//! min-degree elimination order (ties broken by declaration order).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{Evidence, Network, Structure};
use crate::NodeMap;

/// A network whose every cpd row is a known probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointNetwork {
    pub names: Vec<String>,
    pub alternatives: Vec<Vec<String>>,
    pub cards: Vec<usize>,
    pub parents: Vec<Vec<usize>>,
    /// `cpt[node][row]` is the distribution of `node` under parent configuration `row`.
    pub cpt: Vec<Vec<Vec<f64>>>,
}

impl PointNetwork {
    /// Shares the structure of `net` with the given rows.
    pub fn with_rows(net: &Network, cpt: Vec<Vec<Vec<f64>>>) -> Self {
        let s = Structure::new(net);
        PointNetwork {
            names: net.nodes.iter().map(|n| n.name.clone()).collect(),
            alternatives: net.nodes.iter().map(|n| n.alternatives.clone()).collect(),
            cards: s.cards,
            parents: s.parents,
            cpt,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    fn evidence_vector(&self, ev: &Evidence) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; self.len()];
        for (node, &value) in &ev.assignments {
            let i = self.index_of(node)?;
            if value >= self.cards[i] {
                return Err(Error::AlternativeOutOfRange {
                    node: node.clone(),
                    index: value,
                    count: self.cards[i],
                });
            }
            out[i] = Some(value);
        }
        Ok(out)
    }
}

/// Replaces every spec by its mean vector.
pub fn instantiate_expected(net: &Network) -> Result<PointNetwork> {
    let cpt = net
        .nodes
        .iter()
        .map(|node| {
            node.cpd
                .iter()
                .map(|spec| spec.mean())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointNetwork::with_rows(net, cpt))
}

#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl Factor {
    fn scalar(v: f64) -> Self {
        Factor {
            vars: Vec::new(),
            cards: Vec::new(),
            values: vec![v],
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.vars.len()];
        for k in (0..self.vars.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.cards[k + 1];
        }
        strides
    }

    /// Restricts observed variables to their values and drops them.
    fn reduce(self, observed: &[Option<usize>]) -> Factor {
        if self.vars.iter().all(|&v| observed[v].is_none()) {
            return self;
        }
        let strides = self.strides();
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&k| observed[self.vars[k]].is_none())
            .collect();
        let base: usize = (0..self.vars.len())
            .filter_map(|k| observed[self.vars[k]].map(|v| v * strides[k]))
            .sum();
        let vars: Vec<usize> = keep.iter().map(|&k| self.vars[k]).collect();
        let cards: Vec<usize> = keep.iter().map(|&k| self.cards[k]).collect();
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut counter = vec![0; keep.len()];
        for _ in 0..size {
            let offset: usize = keep
                .iter()
                .zip(&counter)
                .map(|(&k, &c)| c * strides[k])
                .sum();
            values.push(self.values[base + offset]);
            increment(&mut counter, &cards);
        }
        Factor {
            vars,
            cards,
            values,
        }
    }

    fn product(&self, other: &Factor) -> Factor {
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        for (k, &v) in other.vars.iter().enumerate() {
            if !vars.contains(&v) {
                vars.push(v);
                cards.push(other.cards[k]);
            }
        }
        let sa = self.strides();
        let sb = other.strides();
        let pos_a: Vec<Option<usize>> = vars
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v).map(|k| sa[k]))
            .collect();
        let pos_b: Vec<Option<usize>> = vars
            .iter()
            .map(|v| other.vars.iter().position(|w| w == v).map(|k| sb[k]))
            .collect();
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut counter = vec![0; vars.len()];
        for _ in 0..size {
            let (mut ia, mut ib) = (0, 0);
            for (k, &c) in counter.iter().enumerate() {
                if let Some(s) = pos_a[k] {
                    ia += c * s;
                }
                if let Some(s) = pos_b[k] {
                    ib += c * s;
                }
            }
            values.push(self.values[ia] * other.values[ib]);
            increment(&mut counter, &cards);
        }
        Factor {
            vars,
            cards,
            values,
        }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let Some(k) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(k);
        cards.remove(k);
        let size: usize = cards.iter().product();
        let mut values = vec![0.0; size];
        let mut counter = vec![0; self.vars.len()];
        for &v in &self.values {
            let mut out = 0;
            let mut stride = 1;
            for q in (0..self.vars.len()).rev() {
                if q == k {
                    continue;
                }
                out += counter[q] * stride;
                stride *= self.cards[q];
            }
            values[out] += v;
            increment(&mut counter, &self.cards);
        }
        Factor {
            vars,
            cards,
            values,
        }
    }
}

fn increment(counter: &mut [usize], cards: &[usize]) {
    for k in (0..counter.len()).rev() {
        counter[k] += 1;
        if counter[k] < cards[k] {
            return;
        }
        counter[k] = 0;
    }
}

fn node_factor(pnet: &PointNetwork, node: usize) -> Factor {
    let mut vars = pnet.parents[node].clone();
    vars.push(node);
    let cards: Vec<usize> = vars.iter().map(|&v| pnet.cards[v]).collect();
    let values = pnet.cpt[node].iter().flatten().copied().collect();
    Factor {
        vars,
        cards,
        values,
    }
}

/// Min-degree order over the variables to eliminate, ties by index.
fn min_degree_order(pnet: &PointNetwork, eliminate: &[bool]) -> Vec<usize> {
    let n = pnet.len();
    let mut adj = vec![vec![false; n]; n];
    for c in 0..n {
        let mut scope = pnet.parents[c].clone();
        scope.push(c);
        for &a in &scope {
            for &b in &scope {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    let mut remaining: Vec<usize> = (0..n).filter(|&i| eliminate[i]).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let (pos, &next) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| ((0..n).filter(|&u| alive[u] && adj[v][u]).count(), v))
            .unwrap();
        let neighbours: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[next][u]).collect();
        for &a in &neighbours {
            for &b in &neighbours {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        alive[next] = false;
        remaining.remove(pos);
        order.push(next);
    }
    order
}

/// Unnormalized `P(query = x, ev)` for every `x`, eliminating in `order`
/// (which must list every non-query, non-evidence node exactly once).
fn joint_with_evidence(
    pnet: &PointNetwork,
    observed: &[Option<usize>],
    query: usize,
    order: &[usize],
) -> Vec<f64> {
    let mut factors: Vec<Factor> = (0..pnet.len())
        .map(|i| node_factor(pnet, i).reduce(observed))
        .collect();
    for &var in order {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        let merged = touching
            .iter()
            .fold(Factor::scalar(1.0), |acc, f| acc.product(f));
        factors.push(merged.sum_out(var));
    }
    let result = factors
        .iter()
        .fold(Factor::scalar(1.0), |acc, f| acc.product(f));
    match observed[query] {
        Some(v) => {
            let mut out = vec![0.0; pnet.cards[query]];
            out[v] = result.values.iter().sum();
            out
        }
        None => {
            debug_assert_eq!(result.vars, vec![query]);
            result.values
        }
    }
}

fn normalize_or_fail(pnet: &PointNetwork, ev: &Evidence, joint: Vec<f64>) -> Result<Vec<f64>> {
    let z: f64 = joint.iter().sum();
    if !(z > 0.0) {
        let assignment = ev
            .assignments
            .iter()
            .map(|(n, &v)| match pnet.index_of(n) {
                Ok(i) => format!("{n}={}", pnet.alternatives[i][v]),
                Err(_) => format!("{n}={v}"),
            })
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::ZeroProbabilityEvidence { assignment });
    }
    Ok(joint.into_iter().map(|x| x / z).collect())
}

/// `P(query | ev)` as a probability vector.
pub fn exact_marginal(pnet: &PointNetwork, ev: &Evidence, query: &str) -> Result<Vec<f64>> {
    let q = pnet.index_of(query)?;
    let observed = pnet.evidence_vector(ev)?;
    let eliminate: Vec<bool> = (0..pnet.len())
        .map(|i| i != q && observed[i].is_none())
        .collect();
    let order = min_degree_order(pnet, &eliminate);
    normalize_or_fail(pnet, ev, joint_with_evidence(pnet, &observed, q, &order))
}

/// Same as [`exact_marginal`] with a caller-chosen elimination order.
pub fn exact_marginal_with_order(
    pnet: &PointNetwork,
    ev: &Evidence,
    query: &str,
    order: &[usize],
) -> Result<Vec<f64>> {
    let q = pnet.index_of(query)?;
    let observed = pnet.evidence_vector(ev)?;
    let mut expected: Vec<usize> = (0..pnet.len())
        .filter(|&i| i != q && observed[i].is_none())
        .collect();
    let mut given = order.to_vec();
    given.sort_unstable();
    expected.sort_unstable();
    if given != expected {
        return Err(Error::InvalidArgument(
            "elimination order must list every unobserved non-query node once".into(),
        ));
    }
    normalize_or_fail(pnet, ev, joint_with_evidence(pnet, &observed, q, order))
}

/// Conditional marginals of every node, in declaration order.
pub fn exact_marginals(pnet: &PointNetwork, ev: &Evidence) -> Result<NodeMap<Vec<f64>>> {
    let mut out = NodeMap::new();
    for name in &pnet.names {
        out.insert(name.clone(), exact_marginal(pnet, ev, name)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{DistributionSpec, NodeSpec};
    use approx::assert_abs_diff_eq;

    fn point_node(name: &str, parents: &[&str], rows: Vec<Vec<f64>>) -> NodeSpec {
        let t = rows[0].len();
        NodeSpec {
            name: name.into(),
            alternatives: (1..=t)
                .map(|i| format!("{}{i}", name.to_lowercase()))
                .collect(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            cpd: rows.into_iter().map(DistributionSpec::Point).collect(),
        }
    }

    fn ef() -> Network {
        Network {
            name: "ef".into(),
            nodes: vec![
                point_node("E", &[], vec![vec![0.3, 0.7]]),
                point_node("F", &["E"], vec![vec![0.8, 0.2], vec![0.4, 0.6]]),
            ],
        }
    }

    #[test]
    fn two_node_prior_and_posterior() {
        let p = instantiate_expected(&ef()).unwrap();
        let f = exact_marginal(&p, &Evidence::new(), "F").unwrap();
        assert_abs_diff_eq!(f[0], 0.52, epsilon = 1e-15);
        let e = exact_marginal(&p, &Evidence::new().with("F", 0), "E").unwrap();
        assert_abs_diff_eq!(e[0], 0.24 / 0.52, epsilon = 1e-15);
        let f_obs = exact_marginal(&p, &Evidence::new().with("F", 0), "F").unwrap();
        assert_eq!(f_obs, vec![1.0, 0.0]);
    }

    #[test]
    fn deterministic_chain() {
        let net = Network {
            name: "chain".into(),
            nodes: vec![
                point_node("A", &[], vec![vec![1.0, 0.0]]),
                point_node("B", &["A"], vec![vec![1.0, 0.0], vec![1.0, 0.0]]),
                point_node("C", &["B"], vec![vec![1.0, 0.0], vec![1.0, 0.0]]),
            ],
        };
        let p = instantiate_expected(&net).unwrap();
        for (_, m) in exact_marginals(&p, &Evidence::new()).unwrap().iter() {
            assert_eq!(m, &vec![1.0, 0.0]);
        }
    }

    #[test]
    fn zero_probability_evidence() {
        let net = Network {
            name: "z".into(),
            nodes: vec![
                point_node("A", &[], vec![vec![1.0, 0.0]]),
                point_node("B", &["A"], vec![vec![1.0, 0.0], vec![0.5, 0.5]]),
            ],
        };
        let p = instantiate_expected(&net).unwrap();
        let err = exact_marginal(&p, &Evidence::new().with("B", 1), "A").unwrap_err();
        assert!(matches!(err, Error::ZeroProbabilityEvidence { .. }));
    }

    #[test]
    fn expected_instantiation() {
        let mut net = ef();
        net.nodes[0].cpd[0] = DistributionSpec::Dirichlet(vec![0, 0]);
        net.nodes[1].cpd[0] = DistributionSpec::Finite(vec![
            crate::network::Atom::new(vec![0.25, 0.75], 0.5),
            crate::network::Atom::new(vec![0.75, 0.25], 0.5),
        ]);
        let p = instantiate_expected(&net).unwrap();
        assert_eq!(p.cpt[0][0], vec![0.5, 0.5]);
        assert_eq!(p.cpt[1][0], vec![0.5, 0.5]);
        assert_eq!(p.cpt[1][1], vec![0.4, 0.6]);
    }

    #[test]
    fn root_marginal_equals_its_row() {
        let p = instantiate_expected(&ef()).unwrap();
        assert_eq!(
            exact_marginal(&p, &Evidence::new(), "E").unwrap(),
            vec![0.3, 0.7]
        );
    }

    #[test]
    fn rejects_incomplete_order() {
        let p = instantiate_expected(&ef()).unwrap();
        assert!(exact_marginal_with_order(&p, &Evidence::new(), "F", &[]).is_err());
        let f = exact_marginal_with_order(&p, &Evidence::new(), "F", &[0]).unwrap();
        assert_abs_diff_eq!(f[0], 0.52, epsilon = 1e-15);
    }
}
