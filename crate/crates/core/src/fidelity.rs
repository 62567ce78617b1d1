//! Cloning fidelities: general, per branch, partially optimal (best branch at fixed `B`)
//! and fully optimal (best `B`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{branch_root, feasible_b_range, Branch, Input, InputPair, MachineParams};
use crate::numeric::{check_unit_interval, sqrt_clamped};

/// Success probabilities below this make the fidelity undefined.
const MIN_GAMMA: f64 = 1e-14;

/// Relative tie width when picking the best branch.
const TIE: f64 = 1e-12;

/// Single-mode fidelity of the first input:
///
/// ```text
/// f = [(A − 2B − C)(A + C) cos 4θ + 2BC + C² + 3A² + 4(A + B)(B + C) sin 2θ + 2AB + 4B²] / 4γ
/// ```
///
/// with `γ` the probe-`|0⟩` probability of the output. The cloner is symmetric, so this is
/// also the fidelity of the second input and of either output mode.
pub fn fidelity_general(params: &MachineParams, pair: &InputPair) -> Result<f64> {
    let out = params.output_amplitudes(pair, Input::First);
    let gamma = out.a * out.a + 2.0 * out.b * out.b + out.c * out.c;
    if gamma < MIN_GAMMA {
        return Err(Error::ZeroSuccessProbability { gamma });
    }
    let (a, b, c) = (params.a(), params.b(), params.c());
    let theta = pair.theta();
    let numerator = (a - 2.0 * b - c) * (a + c) * (4.0 * theta).cos()
        + 2.0 * b * c
        + c * c
        + 3.0 * a * a
        + 4.0 * (a + b) * (b + c) * (2.0 * theta).sin()
        + 2.0 * a * b
        + 4.0 * b * b;
    Ok(numerator / (4.0 * gamma))
}

/// Fidelity on one branch at `(B, γ, s)`:
///
/// ```text
/// f₁± = ½ ± (1 + s)[1 + (2B − 1)s] / 2γ · √((s − 1 − 4B²(1 + s) + 2γ)/(1 + s))
/// f₂± = ½ ∓ (1 + s)[−1 + (2B + 1)s] / 2γ · √(…)
/// ```
pub fn branch_fidelity(b: f64, gamma: f64, s: f64, branch: Branch) -> Result<f64> {
    let root = branch_root(b, gamma, s)?;
    if gamma < MIN_GAMMA {
        return Err(Error::ZeroSuccessProbability { gamma });
    }
    let scale = (1.0 + s) / (2.0 * gamma) * root;
    let value = match branch {
        Branch::OnePlus => 0.5 + scale * (1.0 + (2.0 * b - 1.0) * s),
        Branch::OneMinus => 0.5 - scale * (1.0 + (2.0 * b - 1.0) * s),
        Branch::TwoPlus => 0.5 - scale * (-1.0 + (2.0 * b + 1.0) * s),
        Branch::TwoMinus => 0.5 + scale * (-1.0 + (2.0 * b + 1.0) * s),
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityBranches {
    pub f1_plus: f64,
    pub f1_minus: f64,
    pub f2_plus: f64,
    pub f2_minus: f64,
    /// Maximum over the four branches.
    pub f_p: f64,
    pub argmax_branch: Branch,
}

impl FidelityBranches {
    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::OnePlus => self.f1_plus,
            Branch::OneMinus => self.f1_minus,
            Branch::TwoPlus => self.f2_plus,
            Branch::TwoMinus => self.f2_minus,
        }
    }
}

/// All four branch fidelities and their maximum.
///
/// Ties within `1e-12` go to the earliest branch in the order `1+, 1−, 2+, 2−`.
pub fn branch_fidelities(b: f64, gamma: f64, s: f64) -> Result<FidelityBranches> {
    let mut values = [0.0; 4];
    for branch in Branch::ALL {
        values[branch.index()] = branch_fidelity(b, gamma, s, branch)?;
    }
    let mut argmax = Branch::OnePlus;
    for branch in Branch::ALL {
        if values[branch.index()] > values[argmax.index()] + TIE {
            argmax = branch;
        }
    }
    Ok(FidelityBranches {
        f1_plus: values[0],
        f1_minus: values[1],
        f2_plus: values[2],
        f2_minus: values[3],
        f_p: values[argmax.index()],
        argmax_branch: argmax,
    })
}

/// `f_p` and the branch attaining it.
pub fn partially_optimal_fidelity(b: f64, gamma: f64, s: f64) -> Result<(f64, Branch)> {
    let branches = branch_fidelities(b, gamma, s)?;
    Ok((branches.f_p, branches.argmax_branch))
}

/// `M = √(1 + s²[9s² + 16(1 + s)γ − 10])`.
pub fn auxiliary_m(gamma: f64, s: f64) -> Result<f64> {
    sqrt_clamped(
        1.0 + s * s * (9.0 * s * s + 16.0 * (1.0 + s) * gamma - 10.0),
        "M",
    )
}

fn check_optimum_domain(gamma: f64, s: f64) -> Result<()> {
    check_unit_interval("s", s)?;
    if s <= 0.0 {
        return Err(Error::Singular(
            "the optimal-B expressions divide by s(1 + s); use orthogonal_optimum for s = 0",
        ));
    }
    feasible_b_range(gamma, s).map(|_| ())
}

/// Stationary points `B₁ = (s² − 1 + M) / 8(s + s²)` and `B₂ = −B₁`.
pub fn optimal_b(gamma: f64, s: f64) -> Result<(f64, f64)> {
    check_optimum_domain(gamma, s)?;
    let m = auxiliary_m(gamma, s)?;
    let b1 = (s * s - 1.0 + m) / (8.0 * (s + s * s));
    Ok((b1, -b1))
}

/// ```text
/// f_opt = ½ + (3 + M − 3s²)/32γ · √([2(s − 1)(1 − M + 3s²) + 16s²γ] / s²(1 + s))
/// ```
pub fn optimal_fidelity(gamma: f64, s: f64) -> Result<f64> {
    check_optimum_domain(gamma, s)?;
    let m = auxiliary_m(gamma, s)?;
    let radicand = (2.0 * (s - 1.0) * (1.0 - m + 3.0 * s * s) + 16.0 * s * s * gamma)
        / (s * s * (1.0 + s));
    let root = sqrt_clamped(radicand, "optimal fidelity")?;
    Ok(0.5 + (3.0 + m - 3.0 * s * s) / (32.0 * gamma) * root)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalSolution {
    pub gamma: f64,
    pub s: f64,
    pub b_opt: f64,
    pub f_opt: f64,
    /// `M`; zero on the orthogonal special path where it is not used.
    pub m: f64,
    pub b_max: f64,
    /// Whether `B₁` lies in the feasible range (within `1e-9`).
    pub in_range: bool,
}

/// `B₁`, `f_opt` and the range check for `s > 0`.
pub fn optimal_solution(gamma: f64, s: f64) -> Result<OptimalSolution> {
    let (b_opt, _) = optimal_b(gamma, s)?;
    let range = feasible_b_range(gamma, s)?;
    Ok(OptimalSolution {
        gamma,
        s,
        b_opt,
        f_opt: optimal_fidelity(gamma, s)?,
        m: auxiliary_m(gamma, s)?,
        b_max: range.b_max,
        in_range: b_opt.abs() <= range.b_max + 1e-9,
    })
}

/// Orthogonal inputs (`s = 0`): every branch gives `½ + √(2γ − 1 − 4B²)/2γ`, maximized at
/// `B = 0`. At `γ = 1` this is the perfect cloner.
pub fn orthogonal_optimum(gamma: f64) -> Result<OptimalSolution> {
    let range = feasible_b_range(gamma, 0.0)?;
    let (f_opt, _) = partially_optimal_fidelity(0.0, gamma, 0.0)?;
    Ok(OptimalSolution {
        gamma,
        s: 0.0,
        b_opt: 0.0,
        f_opt,
        m: 0.0,
        b_max: range.b_max,
        in_range: true,
    })
}
