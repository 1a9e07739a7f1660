//! First and second moments of a stored probability vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::DistributionSpec;

/// `E(p_i)` and `E(p_i p_j)` for one random probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub mean: Vec<f64>,
    /// Symmetric `t x t`; the diagonal holds `E(p_i^2)`.
    pub second: Vec<Vec<f64>>,
}

impl MomentTable {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.second[i][i] - self.mean[i] * self.mean[i]
    }

    /// Moments of a known vector: `S = mu mu^T`.
    pub fn point(p: &[f64]) -> Self {
        let second = p
            .iter()
            .map(|&a| p.iter().map(|&b| a * b).collect())
            .collect();
        MomentTable {
            mean: p.to_vec(),
            second,
        }
    }
}

/// Moments of a Dirichlet with density proportional to `prod p_i^{a_i}`:
///
/// ```text
/// E(p_i)     = (a_i + 1) / (A + t)
/// E(p_i^2)   = (a_i + 2) / (A + t + 1) * E(p_i)
/// E(p_i p_j) = (a_i + 1)(a_j + 1) / ((A + t + 1)(A + t))
/// ```
///
/// with `A = sum a_k`.
pub fn dirichlet_moments(counts: &[u64]) -> Result<MomentTable> {
    let t = counts.len();
    if t < 2 {
        return Err(Error::TooFewAlternatives(t));
    }
    let total = counts.iter().map(|&a| a as f64).sum::<f64>() + t as f64;
    let mean: Vec<f64> = counts.iter().map(|&a| (a as f64 + 1.0) / total).collect();
    let denom = (total + 1.0) * total;
    let second = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    let ai = counts[i] as f64;
                    if i == j {
                        (ai + 2.0) / (total + 1.0) * mean[i]
                    } else {
                        (ai + 1.0) * (counts[j] as f64 + 1.0) / denom
                    }
                })
                .collect()
        })
        .collect();
    Ok(MomentTable { mean, second })
}

/// Moments of a discrete distribution over vectors: weight-averaged entries
/// and pairwise products.
pub fn finite_support_moments(atoms: &[(Vec<f64>, f64)]) -> Result<MomentTable> {
    let first = atoms.first().ok_or(Error::EmptySupport)?;
    let t = first.0.len();
    if atoms.iter().any(|(v, _)| v.len() != t) {
        return Err(Error::DimensionMismatch(
            "atoms have differing vector lengths".into(),
        ));
    }
    let mut mean = vec![0.0; t];
    let mut second = vec![vec![0.0; t]; t];
    for (v, w) in atoms {
        for i in 0..t {
            mean[i] += w * v[i];
            for j in 0..t {
                second[i][j] += w * v[i] * v[j];
            }
        }
    }
    Ok(MomentTable { mean, second })
}

impl DistributionSpec {
    /// The moment table of this spec, with in-tolerance vectors renormalized.
    pub fn moments(&self) -> Result<MomentTable> {
        match self {
            DistributionSpec::Dirichlet(a) => dirichlet_moments(a),
            DistributionSpec::Point(_) | DistributionSpec::Finite(_) => {
                finite_support_moments(&self.atoms().expect("enumerable spec"))
            }
        }
    }

    /// The expected probability vector.
    pub fn mean(&self) -> Result<Vec<f64>> {
        Ok(self.moments()?.mean)
    }
}
