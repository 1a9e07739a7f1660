//! Propagated moments against brute-force enumeration on random
//! finite-support networks.

mod common;

use bnvar::oracle::enumerate_all_moments;
use bnvar::{
    conditioned_prior_moments, downstream_evidence_moments, propagate_prior_moments, Evidence,
};
use common::{max_diff, random_looped, random_polytree, random_upstream_evidence, rng, SpecKind};

const NETWORKS: u64 = 120;
const TOL: f64 = 1e-12;
const BUDGET: u64 = 729;

#[test]
fn prior_moments_match_enumeration() {
    for seed in 0..NETWORKS {
        let mut r = rng(seed);
        let net = random_polytree(&mut r, 6, SpecKind::Finite, BUDGET);
        let prop = propagate_prior_moments(&net).unwrap();
        let oracle = enumerate_all_moments(&net, &Evidence::new()).unwrap();
        for (name, m) in prop.iter() {
            let o = oracle.get(name).unwrap();
            assert!(
                max_diff(m, o) < TOL,
                "seed {seed} node {name}: {m:?} vs {o:?}"
            );
            m.verify(TOL).unwrap();
        }
    }
}

#[test]
fn upstream_evidence_moments_match_enumeration() {
    for seed in 0..NETWORKS {
        let mut r = rng(1000 + seed);
        let net = random_polytree(&mut r, 6, SpecKind::Finite, BUDGET);
        let ev = random_upstream_evidence(&mut r, &net);
        let prop = downstream_evidence_moments(&net, &ev).unwrap();
        let oracle = enumerate_all_moments(&net, &ev).unwrap();
        for (name, m) in prop.iter() {
            let o = oracle.get(name).unwrap();
            assert!(max_diff(m, o) < TOL, "seed {seed} node {name} ev {ev:?}");
            m.verify(TOL).unwrap();
        }
    }
}

#[test]
fn cutset_conditioned_moments_match_enumeration() {
    for seed in 0..NETWORKS {
        let mut r = rng(2000 + seed);
        let (net, cutset) = random_looped(&mut r, 6, SpecKind::Finite, BUDGET);
        let prop = conditioned_prior_moments(&net, &cutset).unwrap();
        let oracle = enumerate_all_moments(&net, &Evidence::new()).unwrap();
        for (name, m) in prop.iter() {
            let o = oracle.get(name).unwrap();
            assert!(
                max_diff(m, o) < TOL,
                "seed {seed} node {name} cutset {cutset:?}"
            );
            m.verify(TOL).unwrap();
        }
    }
}

#[test]
fn naive_independent_combination_would_fail() {
    // Combining per-condition moments as if p(x|c_m) were independent across m
    // disagrees with the oracle on the diamond; the tracked cross-condition
    // moments are what makes the result exact.
    use bnvar::propagation::cutset_conditioned_moments;
    let mut found_gap = false;
    for seed in 0..20 {
        let mut r = rng(3000 + seed);
        let (net, cutset) = random_looped(&mut r, 5, SpecKind::Finite, BUDGET);
        if cutset.len() != 1 {
            continue;
        }
        let cond = cutset_conditioned_moments(&net, &cutset).unwrap();
        let root = net.node(&cutset[0]).unwrap().cpd[0].moments().unwrap();
        let oracle = enumerate_all_moments(&net, &Evidence::new()).unwrap();
        for (name, c) in cond.iter() {
            let t = c.alternatives;
            let k = c.conditions;
            let mut naive = 0.0;
            for m in 0..k {
                for m2 in 0..k {
                    let cross = if m == m2 {
                        c.joint(m, m, 0, 0)
                    } else {
                        c.mean(m, 0) * c.mean(m2, 0)
                    };
                    naive += cross * root.second[m][m2];
                }
            }
            let exact = oracle.get(name).unwrap().second[0][0];
            assert!(t >= 2);
            if (naive - exact).abs() > 1e-9 {
                found_gap = true;
            }
        }
    }
    assert!(found_gap);
}
