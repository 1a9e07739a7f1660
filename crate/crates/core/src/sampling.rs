//! Drawing random probability vectors from stored specs.
//!
//! Dirichlet vectors are produced one component at a time: at stage `i` of
//! `t` the fraction of the remaining mass taken by component `i` is a
//! `Beta(a_i + 1, sum_{k>i} (a_k + 1))` variate, obtained by inverting its
//! CDF at one uniform draw. The last component is one minus the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::checked_beta_reg;

use crate::error::{Error, Result};
use crate::network::DistributionSpec;

pub const INVERSE_CDF_TOLERANCE: f64 = 1e-10;
pub const INVERSE_CDF_MAX_ITER: usize = 200;

/// A source of reals uniform on `[0, 1]`.
///
/// Low-discrepancy sequences can be plugged in through this trait.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// Seeded pseudo-random stream. Same seed, same sequence.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl UniformSource for RandomStream {
    fn next_uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Replays a fixed list of draws, cycling when exhausted.
#[derive(Debug, Clone)]
pub struct ReplayStream {
    values: Vec<f64>,
    pos: usize,
}

impl ReplayStream {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "replay stream needs at least one value");
        ReplayStream { values, pos: 0 }
    }
}

impl UniformSource for ReplayStream {
    fn next_uniform(&mut self) -> f64 {
        let v = self.values[self.pos % self.values.len()];
        self.pos += 1;
        v
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream of one stored row in one trial.
///
/// `splitmix64(splitmix64(splitmix64(master) ^ trial) ^ row)`; distinct
/// `(trial, row)` pairs give unrelated streams.
pub fn derive_seed(master: u64, trial: u64, row: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ trial) ^ row)
}

/// Solves `I_x(alpha, beta) = r` for `x` by bisection.
pub fn beta_inverse_cdf(alpha: f64, beta: f64, r: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "beta shape parameters must be positive (alpha={alpha}, beta={beta})"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r={r} is outside [0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r == 1.0 {
        return Ok(1.0);
    }
    if alpha == 1.0 && beta == 1.0 {
        return Ok(r);
    }

    let cdf = |x: f64| {
        checked_beta_reg(alpha, beta, x).map_err(|_| Error::NoConvergence { alpha, beta, r })
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..INVERSE_CDF_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f = cdf(mid)?;
        if (f - r).abs() <= tol {
            return Ok(mid);
        }
        if f < r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Err(Error::NoConvergence { alpha, beta, r })
}

/// Draws one probability vector from `spec`.
pub fn sample_parameter_vector<S: UniformSource + ?Sized>(
    spec: &DistributionSpec,
    stream: &mut S,
) -> Result<Vec<f64>> {
    match spec {
        DistributionSpec::Dirichlet(counts) => sample_dirichlet(counts, stream),
        DistributionSpec::Point(_) | DistributionSpec::Finite(_) => {
            let atoms = spec.atoms().expect("enumerable spec");
            if atoms.len() == 1 {
                return Ok(atoms.into_iter().next().unwrap().0);
            }
            let r = stream.next_uniform();
            let mut cumulative = 0.0;
            let last = atoms.len() - 1;
            for (i, (v, w)) in atoms.into_iter().enumerate() {
                cumulative += w;
                if r < cumulative || i == last {
                    return Ok(v);
                }
            }
            unreachable!()
        }
    }
}

fn sample_dirichlet<S: UniformSource + ?Sized>(counts: &[u64], stream: &mut S) -> Result<Vec<f64>> {
    let t = counts.len();
    if t < 2 {
        return Err(Error::TooFewAlternatives(t));
    }
    let mut out = Vec::with_capacity(t);
    let mut remaining = 1.0;
    // sum_{k>i} (a_k + 1), maintained from the back
    let mut tail: f64 = counts[1..].iter().map(|&a| a as f64 + 1.0).sum();
    for i in 0..t - 1 {
        let alpha = counts[i] as f64 + 1.0;
        let x = beta_inverse_cdf(alpha, tail, stream.next_uniform(), INVERSE_CDF_TOLERANCE)?;
        out.push(remaining * x);
        remaining -= remaining * x;
        tail -= counts[i + 1] as f64 + 1.0;
    }
    let last = 1.0 - out.iter().sum::<f64>();
    out.push(last.max(0.0));
    Ok(out)
}
