use crate::error::Result;
use crate::linalg::spin_flip_spectrum;
use crate::machine::OutputAmplitudes;

use super::TwoModeState;

/// Relative size of `b² − ac` below which it is indistinguishable from rounding.
const PRODUCT_ROUNDING: f64 = 16.0 * f64::EPSILON;

/// Concurrence of a cloner output from its amplitudes.
///
/// With `x = b² − ac` and `y = c²d²`, the nonzero spin-flip eigenvalues are
/// `λ₃,₄ = α ± β`, `α = 2x² + y`, `β = 2|x|√(x² + y)`, and the concurrence is
/// `|√λ₃ − √λ₄|`. Since `λ₃λ₄ = y²`, this equals `2β / (√λ₃ + y/√λ₃)`, which is free of
/// cancellation and exactly zero when `b² = ac`.
pub fn concurrence_closed(amps: &OutputAmplitudes) -> f64 {
    let OutputAmplitudes { a, b, c, d } = *amps;
    let mut x = b * b - a * c;
    // b² = ac up to rounding of the two products
    if x.abs() <= PRODUCT_ROUNDING * (b * b + (a * c).abs()) {
        x = 0.0;
    }
    let y = c * c * d * d;
    let alpha = 2.0 * x * x + y;
    let beta = 2.0 * x.abs() * (x * x + y).sqrt();
    let upper = alpha + beta;
    if beta == 0.0 || upper == 0.0 {
        return 0.0;
    }
    let root_upper = upper.sqrt();
    let root_lower = y / root_upper;
    2.0 * beta / (root_upper + root_lower)
}

/// Concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}` from the spin-flip spectrum of `ρ`.
pub fn concurrence_eigen(rho: &TwoModeState) -> Result<f64> {
    let [l1, l2, l3, l4] = spin_flip_spectrum(rho.matrix())?;
    Ok((l1 - l2 - l3 - l4).max(0.0))
}
