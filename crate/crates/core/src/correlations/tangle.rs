//! Three-party tangle of the (mode₁, mode₂, probe) pure state.
//!
//! Defined here as `τ = √([Tr ρ ρ̃]² − Tr[(ρ ρ̃)²])` with `ρ` the two-mode reduced state and
//! `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`. This is evaluated as written: for GHZ it gives
//! `1/(2√2) ≈ 0.354`, not the unit value of the usual residual-tangle normalization.

use std::f64::consts::SQRT_2;

use crate::error::Result;
use crate::linalg::spin_flip_spectrum;
use crate::machine::{branch_root, feasible_b_range, Branch, Input, InputPair, ThreeQubitState};
use crate::numeric::{check_unit_interval, sqrt_clamped};

use super::TwoModeState;

/// The tangle of a pure three-qubit state.
pub fn tangle_from_state(state: &ThreeQubitState) -> Result<f64> {
    let rho = TwoModeState::from_pure_three_qubit(state);
    tangle_of_reduced(&rho)
}

/// The tangle expression evaluated on a two-mode reduced state.
///
/// With `μ_i` the eigenvalues of `ρ ρ̃`, `Tr ρρ̃ = Σ μ_i` and `Tr (ρρ̃)² = Σ μ_i²`, so the
/// radicand is `2 Σ_{i<j} μ_i μ_j`. Summing the pairwise products avoids the cancellation
/// between the two traces, which otherwise leaves ~1e-8 of noise on product states.
pub fn tangle_of_reduced(rho: &TwoModeState) -> Result<f64> {
    let mu = spin_flip_spectrum(rho.matrix())?.map(|l| l * l);
    let mut radicand = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            radicand += 2.0 * mu[i] * mu[j];
        }
    }
    sqrt_clamped(radicand, "tangle radicand")
}

/// Closed form
/// `τ = (1 − γ)/√2 · [γ − 2B²(1 + sin 2θ) − cos 2θ · √(1 − 4B² − 2(1 − γ)/(1 + sin 2θ))]`.
///
/// This is the value on the `1+` and `2+` branches. On `1−` and `2−` the root term enters
/// with the opposite sign; see [`tangle_closed_for_branch`].
pub fn tangle_closed(gamma: f64, b: f64, pair: &InputPair) -> Result<f64> {
    tangle_closed_signed(gamma, b, pair, 1.0)
}

/// Closed-form tangle on an explicit branch.
pub fn tangle_closed_for_branch(
    gamma: f64,
    b: f64,
    pair: &InputPair,
    branch: Branch,
) -> Result<f64> {
    tangle_closed_signed(gamma, b, pair, branch.sign())
}

/// Closed-form tangle for either input. The second input swaps `cos θ` and `sin θ`, which
/// flips `cos 2θ` and hence the sign of the root term.
pub fn tangle_closed_for_input(
    gamma: f64,
    b: f64,
    pair: &InputPair,
    branch: Branch,
    which: Input,
) -> Result<f64> {
    let mirror = match which {
        Input::First => 1.0,
        Input::Second => -1.0,
    };
    tangle_closed_signed(gamma, b, pair, mirror * branch.sign())
}

fn tangle_closed_signed(gamma: f64, b: f64, pair: &InputPair, sign: f64) -> Result<f64> {
    check_unit_interval("γ", gamma)?;
    let s = pair.overlap();
    let range = feasible_b_range(gamma, s)?;
    if !range.contains(b) {
        return Err(crate::error::Error::BOutOfRange {
            b,
            b_max: range.b_max,
            gamma,
            s,
        });
    }
    // 1 − 4B² − 2(1 − γ)/(1 + s) is the squared branch root
    let root = branch_root(b, gamma, s)?;
    let cos2 = (2.0 * pair.theta()).cos();
    let bracket = gamma - 2.0 * b * b * (1.0 + s) - sign * cos2 * root;
    Ok((1.0 - gamma) / SQRT_2 * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{apply_machine, solve_machine};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn product_state_has_zero_tangle() {
        let mut amps = [0.0; 8];
        amps[0] = 1.0;
        let state = ThreeQubitState::from_amplitudes(amps).unwrap();
        assert_eq!(tangle_from_state(&state).unwrap(), 0.0);
    }

    #[test]
    fn ghz_value_as_defined() {
        let mut amps = [0.0; 8];
        amps[0] = FRAC_1_SQRT_2;
        amps[7] = FRAC_1_SQRT_2;
        let state = ThreeQubitState::from_amplitudes(amps).unwrap();
        // ρ_AB = ½(|00⟩⟨00| + |11⟩⟨11|), ρρ̃ = ¼ diag(1, 0, 0, 1):
        // (½)² − 2·(1/16) = 1/8
        let expected = (1.0f64 / 8.0).sqrt();
        assert!((tangle_from_state(&state).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn vanishes_at_unit_success_probability() {
        for s in [0.0, 0.3, 0.77, 1.0] {
            let pair = InputPair::from_overlap(s).unwrap();
            let range = feasible_b_range(1.0, s).unwrap();
            for b in range.grid(7) {
                assert_eq!(tangle_closed(1.0, b, &pair).unwrap(), 0.0);
                for branch in Branch::ALL {
                    let p = solve_machine(b, 1.0, s, branch).unwrap();
                    let state = apply_machine(&p, &pair, Input::First);
                    assert!(tangle_from_state(&state).unwrap() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn hand_evaluated_point() {
        // cos 2θ = 0 at θ = π/4, leaving 0.2 · 0.8 / √2
        let pair = InputPair::new(FRAC_PI_4).unwrap();
        let t = tangle_closed(0.8, 0.0, &pair).unwrap();
        assert!((t - 0.2 * 0.8 / SQRT_2).abs() < 1e-15);
        assert!((t - 0.113137).abs() < 1e-6);
        for branch in Branch::ALL {
            let p = solve_machine(0.0, 0.8, 1.0, branch).unwrap();
            let state = apply_machine(&p, &pair, Input::First);
            assert!((tangle_from_state(&state).unwrap() - t).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_state_on_each_branch() {
        let pair = InputPair::from_overlap(0.45).unwrap();
        for branch in Branch::ALL {
            let p = solve_machine(0.13, 0.82, 0.45, branch).unwrap();
            let state = apply_machine(&p, &pair, Input::First);
            let oracle = tangle_from_state(&state).unwrap();
            let closed = tangle_closed_for_branch(0.82, 0.13, &pair, branch).unwrap();
            assert!((oracle - closed).abs() < 1e-10, "{branch}: {oracle} vs {closed}");
        }
    }

    #[test]
    fn second_input_sees_the_mirrored_sign() {
        // swapping cos θ and sin θ flips cos 2θ, which pairs 1± with 1∓
        let pair = InputPair::from_overlap(0.45).unwrap();
        for (branch, mirror) in [
            (Branch::OnePlus, Branch::OneMinus),
            (Branch::TwoPlus, Branch::TwoMinus),
        ] {
            for (here, there) in [(branch, mirror), (mirror, branch)] {
                let p = solve_machine(0.13, 0.82, 0.45, here).unwrap();
                let state = apply_machine(&p, &pair, Input::Second);
                let oracle = tangle_from_state(&state).unwrap();
                let closed = tangle_closed_for_branch(0.82, 0.13, &pair, there).unwrap();
                assert!((oracle - closed).abs() < 1e-10, "{here}: {oracle} vs {closed}");
                let direct =
                    tangle_closed_for_input(0.82, 0.13, &pair, here, Input::Second).unwrap();
                assert_eq!(direct, closed);
            }
        }
    }

    #[test]
    fn printed_form_fails_on_minus_branches() {
        let pair = InputPair::from_overlap(0.2).unwrap();
        let p = solve_machine(0.1, 0.8, 0.2, Branch::OneMinus).unwrap();
        let oracle = tangle_from_state(&apply_machine(&p, &pair, Input::First)).unwrap();
        let printed = tangle_closed(0.8, 0.1, &pair).unwrap();
        assert!((oracle - printed).abs() > 1e-3);
    }

    #[test]
    fn infeasible_inputs_error() {
        let pair = InputPair::from_overlap(0.2).unwrap();
        assert!(tangle_closed(0.2, 0.0, &pair).is_err());
        assert!(tangle_closed(0.9, 0.6, &pair).is_err());
    }
}
