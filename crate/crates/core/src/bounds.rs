//! Distribution-free bounds for a random variable `p` with `0 <= p <= 1`.
//!
//! Because `p^2 <= p`, `V(p) = E(p^2) - E(p)^2 <= E(p) - E(p)^2`, which also
//! bounds `std(p) / E(p)` by `sqrt(1 / E(p) - 1)`.

use crate::error::{Error, Result};

/// `E - E^2`; at most `0.25`, attained at `E = 0.5`.
pub fn variance_upper_bound(expected: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&expected) {
        return Err(Error::InvalidArgument(format!(
            "expected probability {expected} is outside [0, 1]"
        )));
    }
    Ok(expected - expected * expected)
}

/// `sqrt(1/E - 1)`.
pub fn relative_std_bound(expected: f64) -> Result<f64> {
    if !(expected > 0.0 && expected <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "expected probability {expected} is outside (0, 1]"
        )));
    }
    Ok((1.0 / expected - 1.0).sqrt())
}
