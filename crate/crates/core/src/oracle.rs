//! Brute-force moments by enumerating every combination of finite-support
//! atoms and running exact inference in each resulting point network.
//!
//! This is correctness scaffolding for the propagation code: it shares
//! nothing with it beyond the network model and point inference.

use crate::error::{Error, Result};
use crate::inference::{exact_marginal, PointNetwork};
use crate::network::{Evidence, Network};
use crate::propagation::NodeMoments;
use crate::NodeMap;

/// Upper limit on the number of atom combinations enumerated.
pub const MAX_COMBINATIONS: u128 = 1_000_000;

/// One choice of atom for every stored cpd row.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomCombination {
    /// `choices[node][row]` indexes the chosen atom.
    pub choices: Vec<Vec<usize>>,
    pub weight: f64,
}

type Support = Vec<Vec<Vec<(Vec<f64>, f64)>>>;

fn support(net: &Network) -> Result<Support> {
    let mut count: u128 = 1;
    let mut out = Vec::with_capacity(net.nodes.len());
    for node in &net.nodes {
        let mut rows = Vec::with_capacity(node.cpd.len());
        for spec in &node.cpd {
            let atoms = spec
                .atoms()
                .ok_or_else(|| Error::NotEnumerable(node.name.clone()))?;
            count = count.saturating_mul(atoms.len() as u128);
            rows.push(atoms);
        }
        out.push(rows);
    }
    if count > MAX_COMBINATIONS {
        return Err(Error::CombinationExplosion {
            count,
            limit: MAX_COMBINATIONS,
        });
    }
    Ok(out)
}

/// Every atom combination with its probability, last row varying fastest.
pub fn atom_combinations(net: &Network) -> Result<Vec<AtomCombination>> {
    let sup = support(net)?;
    let slots: Vec<(usize, usize, usize)> = sup
        .iter()
        .enumerate()
        .flat_map(|(n, rows)| {
            rows.iter()
                .enumerate()
                .map(move |(r, atoms)| (n, r, atoms.len()))
        })
        .collect();
    let mut counter = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut choices: Vec<Vec<usize>> = sup.iter().map(|rows| vec![0; rows.len()]).collect();
        let mut weight = 1.0;
        for (k, &(n, r, _)) in slots.iter().enumerate() {
            choices[n][r] = counter[k];
            weight *= sup[n][r][counter[k]].1;
        }
        out.push(AtomCombination { choices, weight });

        let mut k = slots.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            counter[k] += 1;
            if counter[k] < slots[k].2 {
                break;
            }
            counter[k] = 0;
        }
    }
}

fn point_network(net: &Network, sup: &Support, combo: &AtomCombination) -> PointNetwork {
    let cpt = sup
        .iter()
        .zip(&combo.choices)
        .map(|(rows, ch)| {
            rows.iter()
                .zip(ch)
                .map(|(atoms, &a)| atoms[a].0.clone())
                .collect()
        })
        .collect();
    PointNetwork::with_rows(net, cpt)
}

/// The distribution of `P(node | ev)` over atom combinations: one
/// `(marginal vector, weight)` pair per combination.
pub fn enumerate_conditional(
    net: &Network,
    ev: &Evidence,
    node: &str,
) -> Result<Vec<(Vec<f64>, f64)>> {
    net.index_of(node)?;
    ev.check(net)?;
    let sup = support(net)?;
    atom_combinations(net)?
        .into_iter()
        .map(|combo| {
            let pnet = point_network(net, &sup, &combo);
            Ok((exact_marginal(&pnet, ev, node)?, combo.weight))
        })
        .collect()
}

fn moments_from_values(node: &str, values: &[(Vec<f64>, f64)]) -> NodeMoments {
    let t = values[0].0.len();
    let mut mean = vec![0.0; t];
    let mut second = vec![vec![0.0; t]; t];
    for (x, w) in values {
        for i in 0..t {
            mean[i] += w * x[i];
            for j in 0..t {
                second[i][j] += w * x[i] * x[j];
            }
        }
    }
    NodeMoments::new(node, mean, second, 0)
}

/// Exact moments of `P(node | ev)` for a network with point and finite specs only.
pub fn enumerate_exact_moments(net: &Network, ev: &Evidence, node: &str) -> Result<NodeMoments> {
    let values = enumerate_conditional(net, ev, node)?;
    Ok(moments_from_values(node, &values))
}

/// [`enumerate_exact_moments`] for every node, sharing the enumeration.
pub fn enumerate_all_moments(net: &Network, ev: &Evidence) -> Result<NodeMap<NodeMoments>> {
    ev.check(net)?;
    let sup = support(net)?;
    let combos = atom_combinations(net)?;
    let mut per_node: Vec<Vec<(Vec<f64>, f64)>> =
        vec![Vec::with_capacity(combos.len()); net.nodes.len()];
    for combo in &combos {
        let pnet = point_network(net, &sup, combo);
        for (k, node) in net.nodes.iter().enumerate() {
            per_node[k].push((exact_marginal(&pnet, ev, &node.name)?, combo.weight));
        }
    }
    Ok(net
        .nodes
        .iter()
        .zip(per_node)
        .map(|(node, values)| (node.name.clone(), moments_from_values(&node.name, &values)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Atom, DistributionSpec, NodeSpec};
    use approx::assert_abs_diff_eq;

    fn urn() -> DistributionSpec {
        DistributionSpec::Finite(vec![
            Atom::new(vec![0.25, 0.75], 0.5),
            Atom::new(vec![0.75, 0.25], 0.5),
        ])
    }

    fn urn_network() -> Network {
        let node = |name: &str, parents: Vec<String>, cpd| NodeSpec {
            name: name.into(),
            alternatives: vec!["heads".into(), "tails".into()],
            parents,
            cpd,
        };
        Network {
            name: "urns".into(),
            nodes: vec![
                node("U", vec![], vec![urn()]),
                node("F", vec!["U".into()], vec![urn(), urn()]),
            ],
        }
    }

    #[test]
    fn urn_values_and_weights() {
        let net = urn_network();
        let combos = atom_combinations(&net).unwrap();
        assert_eq!(combos.len(), 8);
        assert_abs_diff_eq!(
            combos.iter().map(|c| c.weight).sum::<f64>(),
            1.0,
            epsilon = 1e-15
        );

        let mut values: Vec<(f64, f64)> = enumerate_conditional(&net, &Evidence::new(), "F")
            .unwrap()
            .into_iter()
            .map(|(x, w)| (x[0], w))
            .collect();
        values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut grouped: Vec<(f64, f64)> = Vec::new();
        for (x, w) in values {
            match grouped.last_mut() {
                Some(g) if (g.0 - x).abs() < 1e-12 => g.1 += w,
                _ => grouped.push((x, w)),
            }
        }
        let expected = [0.25, 0.375, 0.625, 0.75];
        assert_eq!(grouped.len(), 4);
        for (g, e) in grouped.iter().zip(expected) {
            assert_abs_diff_eq!(g.0, e, epsilon = 1e-15);
            assert_abs_diff_eq!(g.1, 0.25, epsilon = 1e-15);
        }

        let m = enumerate_exact_moments(&net, &Evidence::new(), "F").unwrap();
        assert_abs_diff_eq!(m.mean[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.variance[0], 0.0390625, epsilon = 1e-15);
    }

    #[test]
    fn point_network_is_one_combination() {
        let mut net = urn_network();
        for node in &mut net.nodes {
            for row in &mut node.cpd {
                *row = DistributionSpec::Point(vec![0.4, 0.6]);
            }
        }
        assert_eq!(atom_combinations(&net).unwrap().len(), 1);
        let m = enumerate_exact_moments(&net, &Evidence::new(), "F").unwrap();
        assert_abs_diff_eq!(m.variance[0], 0.0, epsilon = 1e-16);
    }

    #[test]
    fn rejects_dirichlet_and_explosions() {
        let mut net = urn_network();
        net.nodes[0].cpd[0] = DistributionSpec::Dirichlet(vec![0, 0]);
        assert!(matches!(
            enumerate_exact_moments(&net, &Evidence::new(), "F"),
            Err(Error::NotEnumerable(ref n)) if n == "U"
        ));

        let wide = DistributionSpec::Finite(
            (0..10)
                .map(|k| Atom::new(vec![k as f64 / 10.0, 1.0 - k as f64 / 10.0], 0.1))
                .collect(),
        );
        let mut nodes = vec![NodeSpec {
            name: "R".into(),
            alternatives: vec!["a".into(), "b".into()],
            parents: vec![],
            cpd: vec![wide.clone()],
        }];
        for k in 0..3 {
            nodes.push(NodeSpec {
                name: format!("C{k}"),
                alternatives: vec!["a".into(), "b".into()],
                parents: vec!["R".into()],
                cpd: vec![wide.clone(), wide.clone()],
            });
        }
        let net = Network {
            name: "wide".into(),
            nodes,
        };
        assert!(matches!(
            enumerate_exact_moments(&net, &Evidence::new(), "R"),
            Err(Error::CombinationExplosion { .. })
        ));
    }

    #[test]
    fn conditional_on_observed_child() {
        let net = urn_network();
        let m = enumerate_exact_moments(&net, &Evidence::new().with("F", 0), "U").unwrap();
        m.verify(1e-12).unwrap();
        // symmetric urns: P(U = heads | F = heads) has mean 1/2 by symmetry
        assert_abs_diff_eq!(m.mean[0], 0.5, epsilon = 1e-12);
        assert!(m.variance[0] > 0.0);
    }
}
