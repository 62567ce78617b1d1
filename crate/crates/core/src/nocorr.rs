//! The correlation-free cloner.
//!
//! Imposing `γ = 1` and `b² = ac` on the output makes the two output modes an exact
//! product `|χ̃⟩⊗|χ̃⟩`, so neither entanglement nor discord is present. The two solution
//! families are
//!
//! ```text
//! family 1: A = (1 + s + √(1+s)) / (2 + 2s),  B = √s / (2√(1+s)),  C = (√(1+s) − (1+s)) / (2 + 2s)
//! family 2: A = −(1 + s + √(1+s)) / (2 + 2s), B = −√s / (2√(1+s)), C = ((1+s) − √(1+s)) / (2 + 2s)
//! ```
//!
//! with `D = 0`, and the fidelity is `f_no = ½[1 + s^{3/2} + (1 − s)√(1 + s)]`.

use serde::Serialize;

use crate::check::{all_passed, Check};
use crate::correlations::{
    concurrence_closed, concurrence_eigen, quantum_discord, tangle_from_state, DiscordOptions,
    MeasuredMode,
};
use crate::error::Result;
use crate::fidelity::fidelity_general;
use crate::linalg::symmetric_eigen;
use crate::machine::{
    apply_machine, output_density, success_probability, Family, Input, InputPair, MachineParams,
};
use crate::numeric::check_unit_interval;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NocorrSolution {
    pub params: MachineParams,
    pub family: Family,
    pub s: f64,
    pub fidelity: f64,
}

pub fn nocorr_params(s: f64, family: Family) -> Result<NocorrSolution> {
    check_unit_interval("s", s)?;
    let root = (1.0 + s).sqrt();
    let denom = 2.0 + 2.0 * s;
    let a = (1.0 + s + root) / denom;
    let b = s.sqrt() / (2.0 * root);
    let params = match family {
        Family::One => MachineParams::new(a, b, (root - (1.0 + s)) / denom, 0.0)?,
        Family::Two => MachineParams::new(-a, -b, ((1.0 + s) - root) / denom, 0.0)?,
    };
    Ok(NocorrSolution {
        params,
        family,
        s,
        fidelity: nocorr_fidelity(s)?,
    })
}

/// `f_no = ½[1 + s^{3/2} + (1 − s)√(1 + s)]`.
pub fn nocorr_fidelity(s: f64) -> Result<f64> {
    check_unit_interval("s", s)?;
    Ok(0.5 * (1.0 + s.powf(1.5) + (1.0 - s) * (1.0 + s).sqrt()))
}

/// Dense scan of `f_no` over `points` evenly spaced overlaps in `[0, 1]`; returns the
/// minimizing `(s, f_no)`.
pub fn fidelity_minimum(points: usize) -> Result<(f64, f64)> {
    let n = points.max(2);
    let mut best = (0.0, f64::INFINITY);
    for k in 0..n {
        let s = k as f64 / (n - 1) as f64;
        let f = nocorr_fidelity(s)?;
        if f < best.1 {
            best = (s, f);
        }
    }
    Ok(best)
}

/// Outcome of checking that the correlation-free cloner really produces a product output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub s: f64,
    pub family: Family,
    pub checks: Vec<Check>,
    /// `|χ̃⟩` amplitudes `(√|a|, ±√|c|)`.
    pub factor: [f64; 2],
    /// Sign between the two components of `|χ̃⟩` that matched the rank-1 factor.
    pub relative_sign: i8,
    /// Sign relating the output to `|χ̃⟩⊗|χ̃⟩`.
    pub global_sign: i8,
    pub fidelity: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub tangle: f64,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Applies the correlation-free cloner and checks that the output modes form a product
/// state with no correlations. Failed checks are reported, not raised.
pub fn verify_product_output(s: f64, family: Family) -> Result<ProductReport> {
    let solution = nocorr_params(s, family)?;
    let params = solution.params;
    let pair = InputPair::from_overlap(s)?;
    let mut checks = vec![Check::at_most(
        "orthonormality",
        params.coefficients().max_violation(),
        1e-10,
    )];

    let state = apply_machine(&params, &pair, Input::First);
    let rho = output_density(&state);
    let amps = params.output_amplitudes(&pair, Input::First);

    checks.push(Check::at_most(
        "success_probability",
        (success_probability(&state) - 1.0).abs(),
        1e-12,
    ));
    checks.push(Check::at_most(
        "product_defect",
        amps.product_defect().abs(),
        1e-12,
    ));

    let (eigenvalues, eigenvectors) = symmetric_eigen(rho.matrix());
    checks.push(Check::at_most("rank_one", eigenvalues[2].abs(), 1e-10));
    checks.push(Check::at_most(
        "equal_marginals",
        (rho.marginal(MeasuredMode::First) - rho.marginal(MeasuredMode::Second)).amax(),
        1e-12,
    ));

    let concurrence = concurrence_eigen(&rho)?;
    checks.push(Check::at_most("concurrence", concurrence, 1e-10));
    checks.push(Check::at_most(
        "concurrence_closed",
        concurrence_closed(&amps),
        1e-10,
    ));
    let discord = quantum_discord(&rho, &DiscordOptions::default())?.value;
    checks.push(Check::at_most("discord", discord, 1e-8));
    let tangle = tangle_from_state(&state)?;
    checks.push(Check::at_most("tangle", tangle, 1e-10));

    // Rank-1 factor w = √μ e of ρ, equal to the output vector up to sign.
    let top = eigenvalues[3].max(0.0).sqrt();
    let w: [f64; 4] = std::array::from_fn(|i| top * eigenvectors[(i, 3)]);
    let (factor, relative_sign, global_sign, mismatch) = match_product_factor(amps.a, amps.c, &w);
    checks.push(Check::at_most("product_factorization", mismatch, 1e-10));
    let output = state.probe_projection(0);
    let direct = output
        .iter()
        .zip(&product_vector(factor))
        .map(|(x, y)| (x - f64::from(global_sign) * y).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("factor_matches_output", direct, 1e-10));

    let second = params.output_amplitudes(&pair, Input::Second);
    checks.push(Check::at_most(
        "second_input_product_defect",
        second.product_defect().abs(),
        1e-12,
    ));

    let fidelity = fidelity_general(&params, &pair)?;
    checks.push(Check::at_most(
        "fidelity",
        (fidelity - solution.fidelity).abs(),
        1e-10,
    ));

    Ok(ProductReport {
        s,
        family,
        checks,
        factor,
        relative_sign,
        global_sign,
        fidelity,
        concurrence,
        discord,
        tangle,
    })
}

fn product_vector(u: [f64; 2]) -> [f64; 4] {
    [u[0] * u[0], u[0] * u[1], u[1] * u[0], u[1] * u[1]]
}

/// Picks the sign in `(√|a|, ±√|c|)` whose tensor square matches `w` up to a global sign.
fn match_product_factor(a: f64, c: f64, w: &[f64; 4]) -> ([f64; 2], i8, i8, f64) {
    let mut best = ([0.0; 2], 1, 1, f64::INFINITY);
    for relative in [1i8, -1] {
        let u = [a.abs().sqrt(), f64::from(relative) * c.abs().sqrt()];
        let v = product_vector(u);
        for global in [1i8, -1] {
            let err = v
                .iter()
                .zip(w)
                .map(|(x, y)| (f64::from(global) * x - y).abs())
                .fold(0.0, f64::max);
            if err < best.3 {
                best = (u, relative, global, err);
            }
        }
    }
    // the eigenvector sign is arbitrary; report the sign relative to the output itself
    let global = if a.abs() >= c.abs() { a } else { c };
    let global_sign = if global < 0.0 { -1 } else { 1 };
    (best.0, best.1, global_sign, best.3)
}
