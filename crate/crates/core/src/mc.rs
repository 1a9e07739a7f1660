//! Monte Carlo estimation of the distribution of an inferred probability.
//!
//! Each trial draws every stored row independently from its spec, which
//! takes the posterior over the uncertain parameters to equal the prior,
//! and records `P(query | evidence)` in the resulting point network. The
//! reference mean comes from exact inference in the expected-value network.
//!
//! From the sample this module builds a 95% confidence interval for the
//! standard deviation using the large-sample chi-square approximation
//!
//! ```text
//! a(n) = (z_.975 + sqrt(2n - 1))^2 / 2,   b(n) = (z_.025 + sqrt(2n - 1))^2 / 2
//! [ sqrt(S / b(n)), sqrt(S / a(n)) ],      S = sum_i (x_i - E)^2
//! ```
//!
//! with `z_.975 = -1.96` and `z_.025 = 1.96`, plus planners for the number
//! of trials and distribution-free tolerance intervals from order statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::inference::{exact_marginal, instantiate_expected};
use crate::network::{Evidence, Network};
use crate::sampling::{derive_seed, sample_parameter_vector, RandomStream};

pub const Z_975: f64 = -1.96;
pub const Z_025: f64 = 1.96;
pub const CONFIDENCE_LEVEL: f64 = 0.95;
/// The chi-square approximation needs more than this many trials.
pub const MIN_CI_TRIALS: usize = 100;
/// Planners give up beyond this many trials.
pub const PLAN_CAP: u64 = 1_000_000_000;

/// `P(node = alternative | evidence)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub node: String,
    pub alternative: usize,
    pub evidence: Evidence,
}

impl Query {
    pub fn new(node: impl Into<String>, alternative: usize, evidence: Evidence) -> Self {
        Query {
            node: node.into(),
            alternative,
            evidence,
        }
    }

    fn check(&self, net: &Network) -> Result<()> {
        let spec = net
            .node(&self.node)
            .ok_or_else(|| Error::UnknownNode(self.node.clone()))?;
        if self.alternative >= spec.alternatives.len() {
            return Err(Error::AlternativeOutOfRange {
                node: self.node.clone(),
                index: self.alternative,
                count: spec.alternatives.len(),
            });
        }
        self.evidence.check(net)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub query: Query,
    pub n: usize,
    /// Query probability in the expected-value network.
    pub reference_mean: f64,
    /// `sum_i (x_i - reference_mean)^2`
    pub sq_dev_sum: f64,
    pub sorted_sample: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl SampleSummary {
    /// Builds a summary from raw trial values in any order.
    pub fn from_values(query: Query, reference_mean: f64, mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sample is empty".into()));
        }
        if values.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument(
                "sample values must lie in [0, 1]".into(),
            ));
        }
        let sq_dev_sum = values.iter().map(|x| (x - reference_mean).powi(2)).sum();
        values.sort_by(f64::total_cmp);
        Ok(SampleSummary {
            query,
            n: values.len(),
            reference_mean,
            sq_dev_sum,
            min: values[0],
            max: values[values.len() - 1],
            sorted_sample: values,
        })
    }

    pub fn sample_mean(&self) -> f64 {
        self.sorted_sample.iter().sum::<f64>() / self.n as f64
    }

    /// `S / n`: variance about the reference mean.
    pub fn variance_estimate(&self) -> f64 {
        self.sq_dev_sum / self.n as f64
    }

    pub fn std_estimate(&self) -> f64 {
        self.variance_estimate().sqrt()
    }

    /// The `k`-th smallest value, 1-based.
    pub fn order_statistic(&self, k: usize) -> Option<f64> {
        k.checked_sub(1)
            .and_then(|i| self.sorted_sample.get(i))
            .copied()
    }
}

/// Runs `n` independent trials of the query.
///
/// Trial `i` draws stored row `r` (rows numbered across nodes in declaration
/// order) from a stream seeded by `derive_seed(master_seed, i, r)`, so the
/// result does not depend on how trials are scheduled.
///
/// Rows are drawn from their stored distributions even when there is
/// evidence: the distribution of the uncertain parameters given the evidence
/// is taken to be the stored one.
pub fn run_trials(
    net: &Network,
    query: &Query,
    n: usize,
    master_seed: u64,
) -> Result<SampleSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of trials must be at least 1".into(),
        ));
    }
    query.check(net)?;
    let template = instantiate_expected(net)?;
    let reference_mean =
        exact_marginal(&template, &query.evidence, &query.node)?[query.alternative];

    let trial = |i: usize| -> Result<f64> {
        let mut pnet = template.clone();
        let mut row_id = 0u64;
        for (node, rows) in net.nodes.iter().zip(pnet.cpt.iter_mut()) {
            for (spec, row) in node.cpd.iter().zip(rows.iter_mut()) {
                let mut stream = RandomStream::new(derive_seed(master_seed, i as u64, row_id));
                *row = sample_parameter_vector(spec, &mut stream)?;
                row_id += 1;
            }
        }
        match exact_marginal(&pnet, &query.evidence, &query.node) {
            Ok(p) => Ok(p[query.alternative].clamp(0.0, 1.0)),
            Err(Error::ZeroProbabilityEvidence { .. }) => {
                Err(Error::ZeroProbabilityTrial { trial: i })
            }
            Err(e) => Err(e),
        }
    };
    let results: Vec<Result<f64>> = (0..n).into_par_iter().map(trial).collect();
    let values = results.into_iter().collect::<Result<Vec<f64>>>()?;
    SampleSummary::from_values(query.clone(), reference_mean, values)
}

/// `(a(n), b(n))`.
pub fn chi_square_factors(n: usize) -> (f64, f64) {
    let root = (2.0 * n as f64 - 1.0).sqrt();
    (0.5 * (Z_975 + root).powi(2), 0.5 * (Z_025 + root).powi(2))
}

/// `(b^{1/2} - a^{1/2}) / (a^{1/2} b^{1/2})`: interval width per unit `sqrt(S)`.
pub fn width_factor(n: usize) -> f64 {
    let (a, b) = chi_square_factors(n);
    (b.sqrt() - a.sqrt()) / (a.sqrt() * b.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdCI {
    pub level: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub lower: f64,
    pub upper: f64,
}

impl StdCI {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// 95% interval for the standard deviation, deviations taken about the
/// reference mean. Needs more than 100 trials.
pub fn std_confidence_interval(s: &SampleSummary) -> Result<StdCI> {
    std_confidence_interval_from(s.n, s.sq_dev_sum)
}

/// [`std_confidence_interval`] from the trial count and `S` alone.
pub fn std_confidence_interval_from(n: usize, sq_dev_sum: f64) -> Result<StdCI> {
    if n <= MIN_CI_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "confidence interval needs more than {MIN_CI_TRIALS} trials, got {n}"
        )));
    }
    if !(sq_dev_sum >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "squared-deviation sum {sq_dev_sum} is negative"
        )));
    }
    let (a, b) = chi_square_factors(n);
    Ok(StdCI {
        level: CONFIDENCE_LEVEL,
        a_n: a,
        b_n: b,
        lower: (sq_dev_sum / b).sqrt(),
        upper: (sq_dev_sum / a).sqrt(),
    })
}

fn check_plan_inputs(expected: f64, epsilon: f64) -> Result<()> {
    if !(expected > 0.0 && expected < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "expected value {expected} must lie in (0, 1)"
        )));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} must be positive"
        )));
    }
    Ok(())
}

/// Smallest `n` in `[lo, cap]` with `ok(n)`, assuming `ok` is monotone.
fn smallest_satisfying(lo: u64, cap: u64, ok: impl Fn(u64) -> bool) -> Result<u64> {
    if ok(lo) {
        return Ok(lo);
    }
    let mut below = lo;
    let mut above = lo;
    loop {
        above = (above * 2).min(cap);
        if ok(above) {
            break;
        }
        if above == cap {
            return Err(Error::CapExceeded { cap });
        }
        below = above;
    }
    while above - below > 1 {
        let mid = below + (above - below) / 2;
        if ok(mid) {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(above)
}

/// Worst-case interval width `sqrt(n) * scale * width_factor(n)` for a
/// sample of `n` values in `[0, 1]`.
pub fn worst_case_width(n: u64, scale: f64) -> f64 {
    (n as f64).sqrt() * scale * width_factor(n as usize)
}

/// Bound on `|x - E|` for `x` in `[0, 1]`, divided by `E` when `relative`.
pub fn plan_scale(expected: f64, relative: bool) -> f64 {
    let spread = expected.max(1.0 - expected);
    if relative {
        spread / expected
    } else {
        spread
    }
}

/// Smallest `n > 100` with `sqrt(n) max(E, 1-E) (b^{1/2} - a^{1/2}) / (a b)^{1/2} < epsilon`.
/// Any sample of that size has a confidence interval narrower than `epsilon`.
pub fn plan_n_absolute(expected: f64, epsilon: f64) -> Result<u64> {
    check_plan_inputs(expected, epsilon)?;
    let scale = plan_scale(expected, false);
    smallest_satisfying(MIN_CI_TRIALS as u64 + 1, PLAN_CAP, |n| {
        worst_case_width(n, scale) < epsilon
    })
}

/// As [`plan_n_absolute`] for the width relative to `E`, with factor
/// `max(1, (1-E)/E)`. Grows without bound as `E` approaches 0.
pub fn plan_n_relative(expected: f64, epsilon: f64) -> Result<u64> {
    check_plan_inputs(expected, epsilon)?;
    let scale = plan_scale(expected, true);
    smallest_satisfying(MIN_CI_TRIALS as u64 + 1, PLAN_CAP, |n| {
        worst_case_width(n, scale) < epsilon
    })
}

fn check_fraction(p: f64, what: &str) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "{what} {p} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Confidence that `[min, max]` of `n` draws covers at least a fraction `p`
/// of the distribution: `1 + (n-1) p^n - n p^{n-1}`.
pub fn minmax_tolerance_gamma(n: u64, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "tolerance interval needs n >= 2, got {n}"
        )));
    }
    check_fraction(p, "coverage p")?;
    let nf = n as f64;
    Ok(1.0 + (nf - 1.0) * p.powf(nf) - nf * p.powf(nf - 1.0))
}

/// Smallest `n` whose min-max interval reaches confidence `gamma`.
pub fn plan_tolerance_n(p: f64, gamma: f64) -> Result<u64> {
    check_fraction(p, "coverage p")?;
    check_fraction(gamma, "confidence gamma")?;
    smallest_satisfying(2, PLAN_CAP, |n| {
        minmax_tolerance_gamma(n, p)
            .map(|g| g >= gamma)
            .unwrap_or(false)
    })
}

/// Confidence that `[x_i, x_j]` (1-based order statistics of `n` draws)
/// covers at least a fraction `p`: `1 - I_p(j - i, n - j + i + 1)`.
pub fn order_stat_gamma(n: usize, i: usize, j: usize, p: f64) -> Result<f64> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidArgument(format!(
            "order statistics need 1 <= i < j <= n, got i={i}, j={j}, n={n}"
        )));
    }
    check_fraction(p, "coverage p")?;
    let a = (j - i) as f64;
    let b = (n - j + i + 1) as f64;
    Ok(1.0 - beta_reg(a, b, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceInterval {
    pub lower: f64,
    pub upper: f64,
    /// Claimed coverage fraction.
    pub p: f64,
    /// Confidence of the claim.
    pub gamma: f64,
}

/// `[x_i, x_j]` from the sample with its confidence for coverage `p`.
pub fn order_stat_tolerance_gamma(
    s: &SampleSummary,
    i: usize,
    j: usize,
    p: f64,
) -> Result<ToleranceInterval> {
    let gamma = order_stat_gamma(s.n, i, j, p)?;
    Ok(ToleranceInterval {
        lower: s.sorted_sample[i - 1],
        upper: s.sorted_sample[j - 1],
        p,
        gamma,
    })
}

/// `[min, max]` of the sample with its confidence for coverage `p`.
pub fn minmax_tolerance_interval(s: &SampleSummary, p: f64) -> Result<ToleranceInterval> {
    Ok(ToleranceInterval {
        lower: s.min,
        upper: s.max,
        p,
        gamma: minmax_tolerance_gamma(s.n as u64, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn summary(values: Vec<f64>, mean: f64) -> SampleSummary {
        SampleSummary::from_values(Query::new("X", 0, Evidence::new()), mean, values).unwrap()
    }

    #[test]
    fn chi_square_factors_at_200() {
        let (a, b) = chi_square_factors(200);
        assert_abs_diff_eq!(a, 162.270, epsilon = 1e-3);
        assert_abs_diff_eq!(b, 240.572, epsilon = 1e-3);
    }

    #[test]
    fn interval_at_200() {
        let ci = std_confidence_interval_from(200, 2.0).unwrap();
        assert_abs_diff_eq!(ci.lower, 0.09118, epsilon = 1e-5);
        assert_abs_diff_eq!(ci.upper, 0.11102, epsilon = 1e-5);
        let zero = std_confidence_interval_from(200, 0.0).unwrap();
        assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
        assert!(std_confidence_interval_from(100, 1.0).is_err());
    }

    #[test]
    fn width_factor_matches_endpoint_difference() {
        for n in [101, 200, 5000] {
            let ci = std_confidence_interval_from(n, 3.0).unwrap();
            assert_abs_diff_eq!(ci.width(), 3.0f64.sqrt() * width_factor(n), epsilon = 1e-14);
        }
    }

    #[test]
    fn absolute_planner() {
        assert_eq!(plan_n_absolute(0.5, 0.1).unwrap(), 197);
        assert!(worst_case_width(200, 0.5) < 0.1);
        assert!(worst_case_width(196, 0.5) >= 0.1);
        assert_eq!(plan_n_absolute(0.5, 10.0).unwrap(), 101);
        assert_eq!(
            plan_n_absolute(0.9, 0.1).unwrap(),
            plan_n_absolute(0.1, 0.1).unwrap()
        );
        assert!(plan_n_absolute(0.0, 0.1).is_err());
        assert!(plan_n_absolute(0.5, 0.0).is_err());
    }

    #[test]
    fn relative_planner() {
        assert!(worst_case_width(200, 1.0) > 0.1);
        assert_abs_diff_eq!(worst_case_width(200, 1.0), 0.1984, epsilon = 1e-4);
        assert_eq!(
            plan_n_relative(0.5, 0.1).unwrap(),
            plan_n_relative(0.8, 0.1).unwrap()
        );
        assert!(matches!(
            plan_n_relative(0.0001, 0.01),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn worst_case_width_is_decreasing() {
        let mut prev = f64::INFINITY;
        for n in 101..20_000 {
            let w = worst_case_width(n, 1.0);
            assert!(w < prev, "n={n}");
            prev = w;
        }
    }

    #[test]
    fn minmax_gamma_values() {
        let g = minmax_tolerance_gamma(46, 0.9).unwrap();
        assert!((0.9515..=0.9523).contains(&g), "{g}");
        assert_abs_diff_eq!(
            minmax_tolerance_gamma(2, 0.5).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        assert!(minmax_tolerance_gamma(10, 1e-9).unwrap() > 1.0 - 1e-12);
        assert!(minmax_tolerance_gamma(1, 0.5).is_err());
    }

    #[test]
    fn tolerance_planner() {
        assert_eq!(plan_tolerance_n(0.9, 0.95).unwrap(), 46);
        assert_eq!(plan_tolerance_n(0.5, 0.25).unwrap(), 2);
        let n = plan_tolerance_n(0.9, 0.9996).unwrap();
        let scanned = (2..)
            .find(|&k| minmax_tolerance_gamma(k, 0.9).unwrap() >= 0.9996)
            .unwrap();
        assert_eq!(n, scanned);
        assert!(minmax_tolerance_gamma(100, 0.9).unwrap() >= 0.9996);
        assert_abs_diff_eq!(
            minmax_tolerance_gamma(100, 0.9).unwrap(),
            0.99968,
            epsilon = 1e-5
        );
    }

    #[test]
    fn order_statistic_gamma() {
        assert_abs_diff_eq!(
            order_stat_gamma(5, 1, 5, 0.5).unwrap(),
            0.8125,
            epsilon = 1e-12
        );
        assert!(order_stat_gamma(5, 1, 5, 1.0 - 1e-12).unwrap() < 1e-9);
        assert!(order_stat_gamma(5, 3, 3, 0.5).is_err());
        assert!(order_stat_gamma(5, 0, 3, 0.5).is_err());
        assert!(order_stat_gamma(5, 2, 6, 0.5).is_err());
        // narrower intervals carry less confidence
        assert!(
            order_stat_gamma(50, 2, 49, 0.9).unwrap() < order_stat_gamma(50, 1, 50, 0.9).unwrap()
        );
    }

    #[test]
    fn summary_fields() {
        let s = summary(vec![0.4, 0.1, 0.3], 0.25);
        assert_eq!(s.sorted_sample, vec![0.1, 0.3, 0.4]);
        assert_eq!((s.min, s.max, s.n), (0.1, 0.4, 3));
        assert_abs_diff_eq!(s.sq_dev_sum, 0.0225 + 0.0025 + 0.0225, epsilon = 1e-15);
        assert_eq!(s.order_statistic(2), Some(0.3));
        assert_eq!(s.order_statistic(0), None);
        let t = order_stat_tolerance_gamma(&s, 1, 3, 0.5).unwrap();
        assert_eq!((t.lower, t.upper), (0.1, 0.4));
        assert!(
            SampleSummary::from_values(Query::new("X", 0, Evidence::new()), 0.5, vec![]).is_err()
        );
    }
}
