//! Variances of inferred probabilities in discrete Bayesian networks whose
//! stored conditional probabilities are themselves uncertain.
//!
//! Each stored probability vector carries a [`DistributionSpec`] (Dirichlet,
//! point or finite support). From these the crate computes
//!
//! * exact prior means and second moments of every node's marginal by
//!   downward moment propagation ([`propagate_prior_moments`]), also under
//!   upstream evidence ([`downstream_evidence_moments`]) and on multiply
//!   connected networks by conditioning on a root loop cutset
//!   ([`conditioned_prior_moments`]);
//! * Monte Carlo samples of any conditional probability with confidence
//!   intervals for its standard deviation and nonparametric tolerance
//!   intervals ([`mc`]);
//! * closed-form variance bounds ([`bounds`]);
//! * a brute-force enumeration oracle for finite-support networks ([`oracle`]).

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod error;
pub mod inference;
pub mod mc;
pub mod moments;
pub mod network;
pub mod oracle;
pub mod propagation;
pub mod sampling;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub use error::{Error, ErrorKind, Result};
pub use inference::{exact_marginal, exact_marginals, instantiate_expected, PointNetwork};
pub use mc::{run_trials, std_confidence_interval, Query, SampleSummary, StdCI};
pub use moments::{dirichlet_moments, finite_support_moments, MomentTable};
pub use network::{
    classify_topology, parse_evidence, parse_network, serialize_network, validate_network, Atom,
    DistributionSpec, Evidence, Network, NodeSpec, TopologyClass, TopologyReport, ValidationReport,
};
pub use oracle::enumerate_exact_moments;
pub use propagation::{
    conditioned_prior_moments, downstream_evidence_moments, mix_child_moments,
    propagate_prior_moments, variance_of, ConditionedMoments, NodeMoments,
};
pub use sampling::{beta_inverse_cdf, sample_parameter_vector, RandomStream, UniformSource};

/// Per-node results in node-declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMap<T> {
    entries: Vec<(String, T)>,
}

impl<T> Default for NodeMap<T> {
    fn default() -> Self {
        NodeMap {
            entries: Vec::new(),
        }
    }
}

impl<T> NodeMap<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces an existing entry in place, or appends.
    pub fn insert(&mut self, name: String, value: T) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(_, v)| v)
    }
}

impl<T> IntoIterator for NodeMap<T> {
    type Item = (String, T);
    type IntoIter = std::vec::IntoIter<(String, T)>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}

impl<T> FromIterator<(String, T)> for NodeMap<T> {
    fn from_iter<I: IntoIterator<Item = (String, T)>>(iter: I) -> Self {
        let mut map = NodeMap::new();
        for (n, v) in iter {
            map.insert(n, v);
        }
        map
    }
}

impl<T: Serialize> Serialize for NodeMap<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (n, v) in &self.entries {
            map.serialize_entry(n, v)?;
        }
        map.end()
    }
}
