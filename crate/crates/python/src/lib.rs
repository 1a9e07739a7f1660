//! Python bindings. Networks are passed around as `Network` objects; evidence
//! is a `dict` of node name to alternative label. Failures raise
//! `UsageError`, `DataError` or `UnsupportedError`, all subclasses of
//! `BnvarError`, with the stable error code as the `code` attribute.

use std::collections::HashMap;

use bnvar::mc;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pybnvar, BnvarError, PyException);
create_exception!(pybnvar, UsageError, BnvarError);
create_exception!(pybnvar, DataError, BnvarError);
create_exception!(pybnvar, UnsupportedError, BnvarError);

fn to_py(e: bnvar::Error) -> PyErr {
    let msg = format!("[{}] {e}", e.code());
    let err = match e.kind() {
        bnvar::ErrorKind::Usage => UsageError::new_err(msg),
        bnvar::ErrorKind::Data => DataError::new_err(msg),
        bnvar::ErrorKind::Unsupported => UnsupportedError::new_err(msg),
    };
    Python::attach(|py| {
        // Best effort: the message already carries the code.
        let _ = err.value(py).setattr("code", e.code());
    });
    err
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for bnvar::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(frozen, module = "pybnvar")]
pub struct Network {
    inner: bnvar::Network,
}

#[pymethods]
impl Network {
    /// Parses and validates a JSON network document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Network {
            inner: bnvar::parse_network(text).py()?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DataError::new_err(format!("[io] {path}: {e}")))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        bnvar::serialize_network(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.nodes.iter().map(|n| n.name.clone()).collect()
    }

    fn alternatives(&self, node: &str) -> PyResult<Vec<String>> {
        self.inner
            .node(node)
            .map(|n| n.alternatives.clone())
            .ok_or_else(|| to_py(bnvar::Error::UnknownNode(node.to_string())))
    }

    fn parents(&self, node: &str) -> PyResult<Vec<String>> {
        self.inner
            .node(node)
            .map(|n| n.parents.clone())
            .ok_or_else(|| to_py(bnvar::Error::UnknownNode(node.to_string())))
    }

    /// Structure class, suggested root cutset and size statistics.
    fn topology<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = bnvar::classify_topology(&self.inner);
        let d = PyDict::new(py);
        d.set_item("class", r.class.to_string())?;
        d.set_item("suggested_cutset", r.suggested_cutset)?;
        d.set_item("root_cutset_available", r.root_cutset_available)?;
        d.set_item("max_alternatives", r.max_alternatives)?;
        d.set_item("min_parents", r.min_parents)?;
        d.set_item("max_parents", r.max_parents)?;
        d.set_item("node_count", r.node_count)?;
        d.set_item("value_count", r.value_count)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(name={:?}, nodes={})",
            self.inner.name,
            self.inner.nodes.len()
        )
    }
}

/// Rule violations of a network document, as strings; empty when valid.
#[pyfunction]
fn validate_json(text: &str) -> PyResult<Vec<String>> {
    match bnvar::parse_network(text) {
        Ok(_) => Ok(vec![]),
        Err(bnvar::Error::InvalidNetwork(report)) => {
            Ok(report.violations.iter().map(|v| v.to_string()).collect())
        }
        Err(e) => Err(to_py(e)),
    }
}

#[pyclass(frozen, module = "pybnvar")]
pub struct NodeMoments {
    #[pyo3(get)]
    node: String,
    #[pyo3(get)]
    mean: Vec<f64>,
    #[pyo3(get)]
    second: Vec<Vec<f64>>,
    #[pyo3(get)]
    variance: Vec<f64>,
    #[pyo3(get)]
    term_products: u64,
}

impl From<bnvar::NodeMoments> for NodeMoments {
    fn from(m: bnvar::NodeMoments) -> Self {
        NodeMoments {
            node: m.node,
            mean: m.mean,
            second: m.second,
            variance: m.variance,
            term_products: m.term_products,
        }
    }
}

#[pymethods]
impl NodeMoments {
    fn std(&self) -> Vec<f64> {
        self.variance.iter().map(|v| v.max(0.0).sqrt()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "NodeMoments(node={:?}, mean={:?}, variance={:?})",
            self.node, self.mean, self.variance
        )
    }
}

fn moments_dict<'py>(
    py: Python<'py>,
    map: bnvar::NodeMap<bnvar::NodeMoments>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (name, m) in map {
        d.set_item(name, NodeMoments::from(m))?;
    }
    Ok(d)
}

fn evidence(
    net: &bnvar::Network,
    ev: Option<HashMap<String, String>>,
) -> PyResult<bnvar::Evidence> {
    let ev = ev.unwrap_or_default();
    bnvar::Evidence::from_labels(net, ev.iter().map(|(n, l)| (n.as_str(), l.as_str()))).py()
}

/// `(mean, second)` of a Dirichlet(a) parameter vector.
#[pyfunction]
fn dirichlet_moments(counts: Vec<u64>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let t = bnvar::dirichlet_moments(&counts).py()?;
    Ok((t.mean, t.second))
}

/// `(mean, second)` of a finite mixture of `(probs, weight)` atoms.
#[pyfunction]
fn finite_support_moments(atoms: Vec<(Vec<f64>, f64)>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let t = bnvar::finite_support_moments(&atoms).py()?;
    Ok((t.mean, t.second))
}

#[pyfunction]
fn propagate_prior_moments<'py>(py: Python<'py>, net: &Network) -> PyResult<Bound<'py, PyDict>> {
    moments_dict(py, bnvar::propagate_prior_moments(&net.inner).py()?)
}

#[pyfunction]
fn downstream_evidence_moments<'py>(
    py: Python<'py>,
    net: &Network,
    evidence: HashMap<String, String>,
) -> PyResult<Bound<'py, PyDict>> {
    let ev = self::evidence(&net.inner, Some(evidence))?;
    moments_dict(
        py,
        bnvar::downstream_evidence_moments(&net.inner, &ev).py()?,
    )
}

/// Conditions on `cutset`, or on the suggested root cutset when omitted.
#[pyfunction]
#[pyo3(signature = (net, cutset = None))]
fn conditioned_prior_moments<'py>(
    py: Python<'py>,
    net: &Network,
    cutset: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyDict>> {
    let cutset = cutset.unwrap_or_else(|| bnvar::classify_topology(&net.inner).suggested_cutset);
    moments_dict(
        py,
        bnvar::conditioned_prior_moments(&net.inner, &cutset).py()?,
    )
}

/// Posterior marginals of every node in the expected-value network.
#[pyfunction]
#[pyo3(signature = (net, evidence = None))]
fn exact_marginals<'py>(
    py: Python<'py>,
    net: &Network,
    evidence: Option<HashMap<String, String>>,
) -> PyResult<Bound<'py, PyDict>> {
    let ev = self::evidence(&net.inner, evidence)?;
    let pnet = bnvar::instantiate_expected(&net.inner).py()?;
    let d = PyDict::new(py);
    for (name, v) in bnvar::exact_marginals(&pnet, &ev).py()? {
        d.set_item(name, v)?;
    }
    Ok(d)
}

/// Exact moments by enumeration; finite-support and point specs only.
#[pyfunction]
#[pyo3(signature = (net, node, evidence = None))]
fn enumerate_exact_moments(
    net: &Network,
    node: &str,
    evidence: Option<HashMap<String, String>>,
) -> PyResult<NodeMoments> {
    let ev = self::evidence(&net.inner, evidence)?;
    Ok(bnvar::enumerate_exact_moments(&net.inner, &ev, node)
        .py()?
        .into())
}

#[pyclass(frozen, module = "pybnvar")]
pub struct SampleSummary {
    inner: bnvar::SampleSummary,
}

#[pymethods]
impl SampleSummary {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn reference_mean(&self) -> f64 {
        self.inner.reference_mean
    }

    #[getter]
    fn sq_dev_sum(&self) -> f64 {
        self.inner.sq_dev_sum
    }

    #[getter]
    fn sample(&self) -> Vec<f64> {
        self.inner.sorted_sample.clone()
    }

    #[getter]
    fn min(&self) -> f64 {
        self.inner.min
    }

    #[getter]
    fn max(&self) -> f64 {
        self.inner.max
    }

    fn sample_mean(&self) -> f64 {
        self.inner.sample_mean()
    }

    fn variance_estimate(&self) -> f64 {
        self.inner.variance_estimate()
    }

    fn std_estimate(&self) -> f64 {
        self.inner.std_estimate()
    }

    /// 95% interval `(lower, upper)` for the standard deviation.
    fn confidence_interval(&self) -> PyResult<(f64, f64)> {
        let ci = bnvar::std_confidence_interval(&self.inner).py()?;
        Ok((ci.lower, ci.upper))
    }

    /// `(min, max, gamma)` for coverage `p`.
    fn minmax_tolerance(&self, p: f64) -> PyResult<(f64, f64, f64)> {
        let t = mc::minmax_tolerance_interval(&self.inner, p).py()?;
        Ok((t.lower, t.upper, t.gamma))
    }

    /// `(x_i, x_j, gamma)` for 1-based order statistics and coverage `p`.
    fn order_stat_tolerance(&self, i: usize, j: usize, p: f64) -> PyResult<(f64, f64, f64)> {
        let t = mc::order_stat_tolerance_gamma(&self.inner, i, j, p).py()?;
        Ok((t.lower, t.upper, t.gamma))
    }

    fn __repr__(&self) -> String {
        format!(
            "SampleSummary(n={}, reference_mean={}, std_estimate={})",
            self.inner.n,
            self.inner.reference_mean,
            self.inner.std_estimate()
        )
    }
}

/// `n` Monte Carlo trials of `P(node = alternative | evidence)`.
#[pyfunction]
#[pyo3(signature = (net, node, alternative, n, seed = 0, evidence = None))]
fn run_trials(
    py: Python<'_>,
    net: &Network,
    node: &str,
    alternative: &str,
    n: usize,
    seed: u64,
    evidence: Option<HashMap<String, String>>,
) -> PyResult<SampleSummary> {
    let ev = self::evidence(&net.inner, evidence)?;
    let alt = net.inner.alternative_index(node, alternative).py()?;
    let query = bnvar::Query::new(node, alt, ev);
    let inner = py
        .detach(|| bnvar::run_trials(&net.inner, &query, n, seed))
        .py()?;
    Ok(SampleSummary { inner })
}

#[pyfunction]
fn std_confidence_interval(n: usize, sq_dev_sum: f64) -> PyResult<(f64, f64)> {
    let ci = mc::std_confidence_interval_from(n, sq_dev_sum).py()?;
    Ok((ci.lower, ci.upper))
}

#[pyfunction]
fn plan_n_absolute(expected: f64, epsilon: f64) -> PyResult<u64> {
    mc::plan_n_absolute(expected, epsilon).py()
}

#[pyfunction]
fn plan_n_relative(expected: f64, epsilon: f64) -> PyResult<u64> {
    mc::plan_n_relative(expected, epsilon).py()
}

#[pyfunction]
fn minmax_tolerance_gamma(n: u64, p: f64) -> PyResult<f64> {
    mc::minmax_tolerance_gamma(n, p).py()
}

#[pyfunction]
fn plan_tolerance_n(p: f64, gamma: f64) -> PyResult<u64> {
    mc::plan_tolerance_n(p, gamma).py()
}

#[pyfunction]
fn order_stat_gamma(n: usize, i: usize, j: usize, p: f64) -> PyResult<f64> {
    mc::order_stat_gamma(n, i, j, p).py()
}

#[pyfunction]
fn variance_upper_bound(expected: f64) -> PyResult<f64> {
    bnvar::bounds::variance_upper_bound(expected).py()
}

#[pyfunction]
fn relative_std_bound(expected: f64) -> PyResult<f64> {
    bnvar::bounds::relative_std_bound(expected).py()
}

#[pymodule]
mod pybnvar {
    #[pymodule_export]
    use super::{
        conditioned_prior_moments, dirichlet_moments, downstream_evidence_moments,
        enumerate_exact_moments, exact_marginals, finite_support_moments, minmax_tolerance_gamma,
        order_stat_gamma, plan_n_absolute, plan_n_relative, plan_tolerance_n,
        propagate_prior_moments, relative_std_bound, run_trials, std_confidence_interval,
        validate_json, variance_upper_bound, BnvarError, DataError, Network, NodeMoments,
        SampleSummary, UnsupportedError, UsageError,
    };
}
