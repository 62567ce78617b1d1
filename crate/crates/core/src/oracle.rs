//! Brute-force ground truth.
//!
//! The cloner is represented as an explicit 8×2 linear map, inputs are evolved by matrix
//! multiplication, and every reported quantity is recomputed from the resulting state
//! vector with explicit partial traces, eigenvalues and the grid optimizer. Nothing here
//! calls a closed-form fidelity or correlation formula; [`cross_check`] then compares the
//! closed forms against these numbers.

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector2, Vector4};
use serde::Serialize;

use crate::check::{all_passed, Check};
use crate::correlations::{
    concurrence_closed, concurrence_eigen, quantum_discord, tangle_closed_for_branch,
    tangle_of_reduced, DiscordOptions, TwoModeState,
};
use crate::error::{Error, Result};
use crate::fidelity::{branch_fidelity, fidelity_general};
use crate::machine::{
    Branch, Coefficients, Input, InputPair, MachineParams, OutputAmplitudes, ThreeQubitState,
};

/// Probe-`|0⟩` probabilities below this count as a failed projection.
const MIN_GAMMA: f64 = 1e-14;

/// The cloner as a map from span{|0⟩, |1⟩} into the (mode₁, mode₂, probe) space.
///
/// Column `k` is the image of `|k⟩|0⟩|0⟩_p`, rows indexed `4·m₁ + 2·m₂ + p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloningIsometry {
    matrix: SMatrix<f64, 8, 2>,
}

pub fn build_isometry(coefficients: &Coefficients) -> CloningIsometry {
    let Coefficients { a, b, c, d } = *coefficients;
    let mut matrix = SMatrix::<f64, 8, 2>::zeros();
    for (col, (same, flipped)) in [(a, c), (c, a)].into_iter().enumerate() {
        matrix[(ThreeQubitState::index(0, 0, 0), col)] = same;
        matrix[(ThreeQubitState::index(0, 1, 0), col)] = b;
        matrix[(ThreeQubitState::index(1, 0, 0), col)] = b;
        matrix[(ThreeQubitState::index(1, 1, 0), col)] = flipped;
        matrix[(ThreeQubitState::index(0, 0, 1), col)] = d;
    }
    CloningIsometry { matrix }
}

impl CloningIsometry {
    pub fn matrix(&self) -> &SMatrix<f64, 8, 2> {
        &self.matrix
    }

    /// Largest entry of `|VᵀV − 1|`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix2::identity()).amax()
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        self.orthonormality_error() <= tol
    }

    pub fn apply(&self, input: [f64; 2]) -> [f64; 8] {
        let out = self.matrix * Vector2::from(input);
        std::array::from_fn(|k| out[k])
    }
}

/// Everything the oracle computes for one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub gamma: f64,
    /// Fidelity of output mode 1 with the input.
    pub fidelity: f64,
    pub fidelity_other_mode: f64,
    /// Normalized probe-`|0⟩` branch `|X⟩`, indexed `2·m₁ + m₂`.
    pub success_state: [f64; 4],
    #[serde(skip)]
    pub state: ThreeQubitState,
    #[serde(skip)]
    pub rho: Matrix4<f64>,
    pub concurrence: f64,
    pub discord: f64,
    pub tangle: f64,
}

/// Evolves one member of the input pair through the explicit map and measures everything.
pub fn oracle_clone(
    params: &MachineParams,
    pair: &InputPair,
    which: Input,
    options: &DiscordOptions,
) -> Result<OracleOutcome> {
    let isometry = build_isometry(&params.coefficients());
    let input = pair.amplitudes(which);
    let raw = isometry.apply(input);

    // ⟨0_p| projection
    let projected: [f64; 4] = std::array::from_fn(|k| raw[2 * k]);
    let gamma: f64 = projected.iter().map(|x| x * x).sum();
    if gamma < MIN_GAMMA {
        return Err(Error::ProjectionFailure { gamma });
    }
    let success_state = projected.map(|x| x / gamma.sqrt());
    let chi = Vector2::from(input);
    let fidelity = chi.dot(&(mode_marginal(&success_state, 0) * chi));
    let fidelity_other_mode = chi.dot(&(mode_marginal(&success_state, 1) * chi));

    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let state = ThreeQubitState::from_amplitudes(raw.map(|x| x / norm))?;
    let rho = trace_out_probe(state.amplitudes());
    let reduced = TwoModeState::new(rho)?;

    Ok(OracleOutcome {
        gamma,
        fidelity,
        fidelity_other_mode,
        success_state,
        state,
        rho,
        concurrence: concurrence_eigen(&reduced)?,
        discord: quantum_discord(&reduced, options)?.value,
        tangle: tangle_of_reduced(&reduced)?,
    })
}

/// Reduced state of mode `keep` (0 or 1) of a real two-mode pure state.
fn mode_marginal(psi: &[f64; 4], keep: usize) -> Matrix2<f64> {
    Matrix2::from_fn(|i, k| {
        (0..2)
            .map(|o| {
                let (x, y) = if keep == 0 {
                    (2 * i + o, 2 * k + o)
                } else {
                    (2 * o + i, 2 * o + k)
                };
                psi[x] * psi[y]
            })
            .sum()
    })
}

fn trace_out_probe(psi: &[f64; 8]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, k| (0..2).map(|p| psi[2 * i + p] * psi[2 * k + p]).sum())
}

/// The closed forms under test. Swappable so that deliberately broken formulas can be
/// fed through the same comparison.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForms {
    pub fidelity_general: fn(&MachineParams, &InputPair) -> Result<f64>,
    pub branch_fidelity: fn(f64, f64, f64, Branch) -> Result<f64>,
    pub concurrence: fn(&OutputAmplitudes) -> f64,
    pub tangle: fn(f64, f64, &InputPair, Branch) -> Result<f64>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            fidelity_general,
            branch_fidelity,
            concurrence: concurrence_closed,
            tangle: tangle_closed_for_branch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub gamma: f64,
    pub fidelity: f64,
    pub density: f64,
    pub concurrence: f64,
    pub tangle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            gamma: 1e-12,
            fidelity: 1e-9,
            density: 1e-10,
            concurrence: 1e-10,
            tangle: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub branch: Branch,
    pub gamma: f64,
    pub checks: Vec<Check>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Compares the library's closed forms against the oracle at one point.
pub fn cross_check(
    params: &MachineParams,
    pair: &InputPair,
    tolerances: &Tolerances,
) -> Result<CrossCheckReport> {
    cross_check_with(&ClosedForms::default(), params, pair, tolerances)
}

/// [`cross_check`] with explicit closed forms. Disagreements, and closed forms that fail
/// to evaluate, become failed checks rather than errors.
pub fn cross_check_with(
    forms: &ClosedForms,
    params: &MachineParams,
    pair: &InputPair,
    tolerances: &Tolerances,
) -> Result<CrossCheckReport> {
    // discord has no closed form to compare; the coarsest grid keeps this cheap
    let options = DiscordOptions::default().with_grid(2);
    let oracle = oracle_clone(params, pair, Input::First, &options)?;
    let second = oracle_clone(params, pair, Input::Second, &options)?;
    let s = pair.overlap();
    let gamma = params.success_probability_for(s);
    let branch = params.branch();
    let diff = |closed: Result<f64>, truth: f64| closed.map_or(f64::NAN, |v| (v - truth).abs());

    let mut checks = vec![
        Check::at_most("gamma", (gamma - oracle.gamma).abs(), tolerances.gamma),
        Check::at_most(
            "gamma_input_symmetry",
            (oracle.gamma - second.gamma).abs(),
            tolerances.gamma,
        ),
        Check::at_most(
            "fidelity_general",
            diff((forms.fidelity_general)(params, pair), oracle.fidelity),
            tolerances.fidelity,
        ),
        Check::at_most(
            "branch_fidelity",
            diff(
                (forms.branch_fidelity)(params.b(), gamma, s, branch),
                oracle.fidelity,
            ),
            tolerances.fidelity,
        ),
        Check::at_most(
            "mode_symmetry",
            (oracle.fidelity - oracle.fidelity_other_mode).abs(),
            tolerances.fidelity,
        ),
        Check::at_most(
            "input_symmetry",
            (oracle.fidelity - second.fidelity).abs(),
            tolerances.fidelity,
        ),
    ];

    let amps = params.output_amplitudes(pair, Input::First);
    let structured = TwoModeState::from_output_amplitudes(amps);
    checks.push(Check::at_most(
        "density_matrix",
        (structured.matrix() - oracle.rho).amax(),
        tolerances.density,
    ));
    checks.push(Check::at_most(
        "concurrence",
        ((forms.concurrence)(&amps) - oracle.concurrence).abs(),
        tolerances.concurrence,
    ));
    checks.push(Check::at_most(
        "tangle",
        diff(
            (forms.tangle)(gamma, params.b(), pair, branch),
            oracle.tangle,
        ),
        tolerances.tangle,
    ));

    Ok(CrossCheckReport {
        branch,
        gamma,
        checks,
    })
}

/// Structured `|X⟩` amplitudes for a valid output, mainly for tests.
pub fn success_vector(amps: &OutputAmplitudes) -> Vector4<f64> {
    Vector4::new(amps.a, amps.b, amps.b, amps.c) / (amps.norm_sqr() - amps.d * amps.d).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::solve_machine;
    use crate::nocorr::nocorr_params;
    use crate::machine::Family;
    use std::f64::consts::FRAC_PI_4;

    fn cloner() -> MachineParams {
        MachineParams::new(1.0, 0.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn perfect_cloner_columns() {
        let v = build_isometry(&cloner().coefficients());
        let m = v.matrix();
        for row in 0..8 {
            assert_eq!(m[(row, 0)], if row == 0 { 1.0 } else { 0.0 });
            assert_eq!(m[(row, 1)], if row == 6 { 1.0 } else { 0.0 });
        }
        assert_eq!(v.orthonormality_error(), 0.0);
    }

    #[test]
    fn invalid_coefficients_are_flagged() {
        // shift C so that 2AC + 2B² + D² moves by 0.1
        let p = solve_machine(0.1, 0.9, 0.5, Branch::OnePlus).unwrap().coefficients();
        let broken = Coefficients {
            c: p.c + 0.05 / p.a,
            ..p
        };
        assert!((broken.orthogonality_violation() - 0.1).abs() < 1e-12);
        let v = build_isometry(&broken);
        assert!(!v.is_isometry(1e-10));
        assert!((v.orthonormality_error() - broken.max_violation()).abs() < 1e-12);
    }

    #[test]
    fn solved_machine_is_isometry() {
        let p = solve_machine(0.1, 0.9, 0.5, Branch::OnePlus).unwrap();
        assert!(build_isometry(&p.coefficients()).is_isometry(1e-10));
    }

    #[test]
    fn perfect_cloner_on_basis_state() {
        let pair = InputPair::new(0.0).unwrap();
        let out = oracle_clone(&cloner(), &pair, Input::First, &DiscordOptions::default()).unwrap();
        assert_eq!(out.gamma, 1.0);
        assert_eq!(out.fidelity, 1.0);
        assert_eq!(out.concurrence, 0.0);
        assert!(out.discord < 1e-12);
        assert_eq!(out.tangle, 0.0);
    }

    #[test]
    fn perfect_cloner_on_balanced_input_gives_bell_pair() {
        let pair = InputPair::new(FRAC_PI_4).unwrap();
        let out = oracle_clone(&cloner(), &pair, Input::First, &DiscordOptions::default()).unwrap();
        assert!((out.gamma - 1.0).abs() < 1e-15);
        assert!((out.fidelity - 0.5).abs() < 1e-15);
        assert!((out.concurrence - 1.0).abs() < 1e-12);
        assert!((out.discord - 1.0).abs() < 1e-6);
        assert!(out.tangle < 1e-12);
    }

    #[test]
    fn correlation_free_minimum() {
        let s = 1.0 / 3.0;
        let p = nocorr_params(s, Family::One).unwrap().params;
        let pair = InputPair::from_overlap(s).unwrap();
        let out = oracle_clone(&p, &pair, Input::First, &DiscordOptions::default()).unwrap();
        assert!((out.fidelity - 0.9811).abs() < 1e-3);
        assert!(out.concurrence < 1e-10);
        assert!(out.discord < 1e-8);
        assert!(out.tangle < 1e-10);
    }

    #[test]
    fn projection_failure() {
        // all weight on the probe: only reachable with unchecked coefficients
        let p = solve_machine(0.0, 0.0, 1.0, Branch::OnePlus).unwrap();
        let pair = InputPair::new(FRAC_PI_4).unwrap();
        let err = oracle_clone(&p, &pair, Input::First, &DiscordOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ProjectionFailure { .. }));
    }

    #[test]
    fn cross_check_passes_on_every_branch() {
        let pair = InputPair::from_overlap(0.4).unwrap();
        for branch in Branch::ALL {
            let p = solve_machine(-0.15, 0.85, 0.4, branch).unwrap();
            let report = cross_check(&p, &pair, &Tolerances::default()).unwrap();
            assert!(report.passed(), "{report:#?}");
            assert_eq!(report.branch, branch);
        }
    }

    #[test]
    fn tangle_difference_vanishes_at_unit_gamma() {
        let pair = InputPair::from_overlap(0.6).unwrap();
        let p = solve_machine(0.2, 1.0, 0.6, Branch::TwoMinus).unwrap();
        let report = cross_check(&p, &pair, &Tolerances::default()).unwrap();
        let tangle = report.checks.iter().find(|c| c.name == "tangle").unwrap();
        assert!(tangle.measured < 1e-15);
    }

    #[test]
    fn boundary_b_collapses_to_one_half() {
        let (gamma, s) = (0.8, 0.3);
        let range = crate::machine::feasible_b_range(gamma, s).unwrap();
        let pair = InputPair::from_overlap(s).unwrap();
        let p = solve_machine(range.b_max, gamma, s, Branch::OnePlus).unwrap();
        let out = oracle_clone(&p, &pair, Input::First, &DiscordOptions::default()).unwrap();
        assert!((out.fidelity - 0.5).abs() < 1e-9);
        assert!(cross_check(&p, &pair, &Tolerances::default()).unwrap().passed());
    }

    #[test]
    fn broken_closed_form_is_reported() {
        fn wrong(params: &MachineParams, pair: &InputPair) -> Result<f64> {
            Ok(fidelity_general(params, pair)? + 1e-3)
        }
        let forms = ClosedForms {
            fidelity_general: wrong,
            ..ClosedForms::default()
        };
        let p = solve_machine(0.05, 0.9, 0.5, Branch::OnePlus).unwrap();
        let pair = InputPair::from_overlap(0.5).unwrap();
        let report = cross_check_with(&forms, &p, &pair, &Tolerances::default()).unwrap();
        let failed: Vec<_> = crate::check::failures(&report.checks).map(|c| c.name).collect();
        assert_eq!(failed, ["fidelity_general"]);
    }

    #[test]
    fn success_vector_matches_oracle() {
        let p = solve_machine(0.1, 0.7, 0.8, Branch::OneMinus).unwrap();
        let pair = InputPair::from_overlap(0.8).unwrap();
        let out = oracle_clone(&p, &pair, Input::First, &DiscordOptions::default()).unwrap();
        let x = success_vector(&p.output_amplitudes(&pair, Input::First));
        for k in 0..4 {
            assert!((x[k] - out.success_state[k]).abs() < 1e-14);
        }
    }
}
