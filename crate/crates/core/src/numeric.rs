use crate::error::{Error, Result};

/// Magnitude below which a negative radicand or eigenvalue is treated as round-off.
pub const ROUNDOFF: f64 = 1e-12;

/// Square root that clamps arguments in `[-ROUNDOFF, 0)` to zero and rejects anything below.
pub fn sqrt_clamped(x: f64, context: &'static str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -ROUNDOFF {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { context, value: x })
    }
}

pub fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfUnitInterval { name, value })
    }
}

/// `-x log2 x`, with the `0 log 0 = 0` convention.
pub fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy in bits of a list of probabilities (clamped at zero).
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| entropy_term(p.max(0.0))).sum()
}
