#![allow(dead_code)]

use bnvar::{Atom, DistributionSpec, Evidence, Network, NodeSpec};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn node(name: &str, t: usize, parents: &[&str], cpd: Vec<DistributionSpec>) -> NodeSpec {
    NodeSpec {
        name: name.into(),
        alternatives: (1..=t)
            .map(|i| format!("{}{i}", name.to_lowercase()))
            .collect(),
        parents: parents.iter().map(|p| p.to_string()).collect(),
        cpd,
    }
}

pub fn flat_dirichlet(t: usize, rows: usize) -> Vec<DistributionSpec> {
    vec![DistributionSpec::Dirichlet(vec![0; t]); rows]
}

pub fn urn() -> DistributionSpec {
    DistributionSpec::Finite(vec![
        Atom::new(vec![0.25, 0.75], 0.5),
        Atom::new(vec![0.75, 0.25], 0.5),
    ])
}

/// E -> F, every row Dirichlet(0, 0).
pub fn two_node_example() -> Network {
    Network {
        name: "two-node".into(),
        nodes: vec![
            node("E", 2, &[], flat_dirichlet(2, 1)),
            node("F", 2, &["E"], flat_dirichlet(2, 2)),
        ],
    }
}

/// Root urn U choosing between two child urns for F.
pub fn urn_network() -> Network {
    Network {
        name: "urns".into(),
        nodes: vec![
            node("U", 2, &[], vec![urn()]),
            node("F", 2, &["U"], vec![urn(), urn()]),
        ],
    }
}

/// Strictly positive random probability vector.
pub fn random_vector<R: Rng>(rng: &mut R, t: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..t).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

pub fn random_finite<R: Rng>(rng: &mut R, t: usize, atoms: usize) -> DistributionSpec {
    if atoms == 1 {
        return DistributionSpec::Point(random_vector(rng, t));
    }
    let w = random_vector(rng, atoms);
    DistributionSpec::Finite(
        w.into_iter()
            .map(|w| Atom::new(random_vector(rng, t), w))
            .collect(),
    )
}

pub fn random_dirichlet<R: Rng>(rng: &mut R, t: usize) -> DistributionSpec {
    DistributionSpec::Dirichlet((0..t).map(|_| rng.random_range(0..6)).collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecKind {
    Finite,
    Dirichlet,
}

struct Builder<'a, R: Rng> {
    rng: &'a mut R,
    kind: SpecKind,
    budget: u64,
    nodes: Vec<NodeSpec>,
}

impl<'a, R: Rng> Builder<'a, R> {
    fn spec(&mut self, t: usize) -> DistributionSpec {
        match self.kind {
            SpecKind::Dirichlet => random_dirichlet(self.rng, t),
            SpecKind::Finite => {
                let mut atoms = self.rng.random_range(1..=3);
                while atoms > 1 && self.budget < atoms as u64 {
                    atoms -= 1;
                }
                self.budget /= atoms as u64;
                random_finite(self.rng, t, atoms)
            }
        }
    }

    fn add(&mut self, name: String, t: usize, parents: Vec<usize>) {
        let rows: usize = parents
            .iter()
            .map(|&p| self.nodes[p].alternatives.len())
            .product();
        let cpd = (0..rows).map(|_| self.spec(t)).collect();
        let parents: Vec<&str> = parents
            .iter()
            .map(|&p| self.nodes[p].name.as_str())
            .collect();
        let spec = node(&name, t, &parents, cpd);
        self.nodes.push(spec);
    }
}

/// Union-find root lookup without path compression.
pub fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        x = uf[x];
    }
    x
}

/// Random singly connected network with up to `max_nodes` nodes, 2..=3
/// alternatives, at most 2 parents per node. Finite specs keep the number of
/// atom combinations at or below `budget`.
pub fn random_polytree<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    kind: SpecKind,
    budget: u64,
) -> Network {
    let n = rng.random_range(2..=max_nodes);
    let mut b = Builder {
        rng,
        kind,
        budget,
        nodes: Vec::new(),
    };
    let mut uf: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let t = b.rng.random_range(2..=3);
        let mut parents = Vec::new();
        if k > 0 {
            let wanted = b.rng.random_range(0..=2usize);
            for _ in 0..wanted {
                let p = b.rng.random_range(0..k);
                let (rp, rk) = (find(&mut uf, p), find(&mut uf, k));
                if rp != rk {
                    uf[rp] = rk;
                    parents.push(p);
                }
            }
        }
        b.add(format!("N{k}"), t, parents);
    }
    Network {
        name: "random-polytree".into(),
        nodes: b.nodes,
    }
}

/// A polytree plus one or two extra roots, each wired into at least two
/// nodes of it so that the network is multiply connected and the extra
/// roots form a loop cutset. Returns the network and the cutset.
pub fn random_looped<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    kind: SpecKind,
    budget: u64,
) -> (Network, Vec<String>) {
    let roots = rng.random_range(1..=2usize);
    loop {
        let base_n = rng.random_range(2..=(max_nodes - roots).max(2));
        let mut b = Builder {
            rng,
            kind,
            budget,
            nodes: Vec::new(),
        };
        let mut cut = Vec::new();
        for r in 0..roots {
            let t = b.rng.random_range(2..=3);
            b.add(format!("C{r}"), t, vec![]);
            cut.push(format!("C{r}"));
        }
        // Connected polytree over the remaining nodes (parent from the base set).
        for k in 0..base_n {
            let t = b.rng.random_range(2..=3);
            let mut parents = Vec::new();
            if k > 0 {
                parents.push(roots + b.rng.random_range(0..k));
            }
            // attach cutset roots to some base nodes; at most 2 parents total
            for r in 0..roots {
                if parents.len() < 2 && b.rng.random_bool(0.6) {
                    parents.push(r);
                }
            }
            b.add(format!("N{k}"), t, parents);
        }
        let net = Network {
            name: "random-looped".into(),
            nodes: b.nodes,
        };
        if bnvar::classify_topology(&net).class == bnvar::TopologyClass::MultiplyConnected {
            return (net, cut);
        }
    }
}

/// Ancestrally closed evidence: a node may be observed only when all of its
/// parents are. Never observes every node.
pub fn random_upstream_evidence<R: Rng>(rng: &mut R, net: &Network) -> Evidence {
    let mut ev = Evidence::new();
    for node in &net.nodes {
        if ev.len() + 1 >= net.nodes.len() {
            break;
        }
        let closed = node.parents.iter().all(|p| ev.get(p).is_some());
        if closed && rng.random_bool(0.4) {
            let t = node.alternatives.len();
            ev = ev.with(&node.name, rng.random_range(0..t));
        }
    }
    if ev.is_empty() {
        let root = net.nodes.iter().find(|n| n.parents.is_empty()).unwrap();
        ev = ev.with(&root.name, 0);
    }
    ev
}

pub fn pick<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).unwrap()
}

/// Largest absolute difference between two moment results.
pub fn max_diff(a: &bnvar::NodeMoments, b: &bnvar::NodeMoments) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..a.len() {
        d = d.max((a.mean[i] - b.mean[i]).abs());
        for j in 0..a.len() {
            d = d.max((a.second[i][j] - b.second[i][j]).abs());
        }
    }
    d
}
