//! The invariant suite behind `clonelab verify`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use clonelab::check::Check;
use clonelab::correlations::{
    concurrence_eigen, quantum_discord, tangle_closed_for_input, tangle_from_state,
    DiscordOptions, MeasuredMode, TwoModeState,
};
use clonelab::fidelity::{optimal_fidelity, optimal_solution, partially_optimal_fidelity};
use clonelab::machine::{
    apply_machine, feasible_b_range, output_density, solve_machine, Branch, Family, Input,
    InputPair, MachineParams,
};
use clonelab::nocorr::{fidelity_minimum, nocorr_fidelity, verify_product_output};
use clonelab::oracle::{build_isometry, cross_check_with, ClosedForms, Tolerances};
use nalgebra::Vector4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Lowest γ drawn for random trials, keeping the fidelity well defined.
const MIN_TRIAL_GAMMA: f64 = 1e-3;

/// Optimality is only exercised away from `s = 0`, where the optimum formulas are singular.
const MIN_OPTIMUM_OVERLAP: f64 = 0.05;

/// Number of overlaps at which the correlation-free cloner is checked.
const NOCORR_SAMPLES: usize = 20;

/// Worst case of one named check across every evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tally {
    pub name: String,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub count: usize,
    pub failures: usize,
}

impl Tally {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    /// No random points were drawn; only the fixed anchors ran.
    pub vacuous: bool,
    pub tallies: Vec<Tally>,
    pub errors: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.tallies.iter().all(Tally::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &str> {
        self.tallies
            .iter()
            .filter(|t| !t.passed())
            .map(|t| t.name.as_str())
    }

    fn record(&mut self, prefix: &str, check: &Check) {
        let name = format!("{prefix}{}", check.name);
        let index = match self.tallies.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.tallies.push(Tally {
                    name,
                    tolerance: check.tolerance,
                    max_deviation: 0.0,
                    count: 0,
                    failures: 0,
                });
                self.tallies.len() - 1
            }
        };
        let tally = &mut self.tallies[index];
        tally.count += 1;
        // keeps NaN once seen
        if !tally.max_deviation.is_nan()
            && (check.measured.is_nan() || check.measured > tally.max_deviation)
        {
            tally.max_deviation = check.measured;
        }
        if !check.passed {
            tally.failures += 1;
        }
    }

    fn absorb(&mut self, context: &str, outcome: clonelab::Result<Vec<Check>>) {
        match outcome {
            Ok(checks) => checks.iter().for_each(|c| self.record("", c)),
            Err(e) => self.errors.push(format!("{context}: {e}")),
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify: seed {} trials {}", self.seed, self.trials)?;
        let width = self.tallies.iter().map(|t| t.name.len()).max().unwrap_or(0);
        for t in &self.tallies {
            writeln!(
                f,
                "{} {:width$}  max {:.3e}  tol {:.0e}  n {}",
                if t.passed() { "PASS" } else { "FAIL" },
                t.name,
                t.max_deviation,
                t.tolerance,
                t.count,
            )?;
        }
        for e in &self.errors {
            writeln!(f, "ERROR {e}")?;
        }
        if self.vacuous {
            writeln!(f, "note: vacuous run, no random trials (trials = 0)")?;
        }
        let failed: Vec<_> = self.failed().collect();
        if self.passed() {
            write!(f, "result: PASS ({} checks)", self.tallies.len())
        } else {
            write!(f, "result: FAIL ({})", failed.join(", "))
        }
    }
}

/// Runs the fixed anchors plus `trials` seeded random feasible points, checking the given
/// closed forms against the oracle and every module invariant.
pub fn run_verify(seed: u64, trials: usize, forms: &ClosedForms) -> VerifyReport {
    let mut report = VerifyReport {
        seed,
        trials,
        vacuous: trials == 0,
        tallies: Vec::new(),
        errors: Vec::new(),
    };
    report.absorb("anchors", anchors(forms));
    for s in (0..NOCORR_SAMPLES).map(|k| k as f64 / (NOCORR_SAMPLES - 1) as f64) {
        for family in [Family::One, Family::Two] {
            match verify_product_output(s, family) {
                Ok(r) => r.checks.iter().for_each(|c| report.record("nocorr_", c)),
                Err(e) => report.errors.push(format!("nocorr s = {s}: {e}")),
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let s: f64 = rng.gen_range(0.0..=1.0);
        let low = ((1.0 - s) / 2.0).max(MIN_TRIAL_GAMMA);
        let gamma = rng.gen_range(low..=1.0);
        let u: f64 = rng.gen_range(-1.0..=1.0);
        let branch = Branch::ALL[rng.gen_range(0..4)];
        let unit_u: f64 = rng.gen_range(-1.0..=1.0);
        let outcome = random_point(forms, s, gamma, u, branch, unit_u);
        report.absorb(
            &format!("trial {trial} (s = {s}, γ = {gamma}, branch {branch})"),
            outcome,
        );
    }
    report
}

fn anchors(forms: &ClosedForms) -> clonelab::Result<Vec<Check>> {
    let mut checks = Vec::new();
    checks.push(Check::at_most(
        "nocorr_fidelity_at_third",
        (nocorr_fidelity(1.0 / 3.0)? - 0.9811).abs(),
        5e-4,
    ));
    let (s_min, _) = fidelity_minimum(10_000)?;
    checks.push(Check::at_most(
        "nocorr_scan_argmin",
        (s_min - 1.0 / 3.0).abs(),
        2e-3,
    ));
    checks.push(Check::at_most(
        "nocorr_endpoints",
        (nocorr_fidelity(0.0)? - 1.0)
            .abs()
            .max((nocorr_fidelity(1.0)? - 1.0).abs()),
        1e-12,
    ));

    let perfect = MachineParams::new(1.0, 0.0, 0.0, 0.0)?;
    checks.push(Check::at_most(
        "fidelity_general_anchor",
        ((forms.fidelity_general)(&perfect, &InputPair::new(0.0)?)? - 1.0).abs(),
        1e-12,
    ));
    checks.push(Check::at_most(
        "optimal_fidelity_unit",
        (optimal_fidelity(1.0, 1.0)? - 1.0).abs(),
        1e-10,
    ));

    let balanced = InputPair::new(FRAC_PI_4)?;
    let bell_amps = perfect.output_amplitudes(&balanced, Input::First);
    let bell = output_density(&apply_machine(&perfect, &balanced, Input::First));
    checks.push(Check::at_most(
        "bell_concurrence",
        ((forms.concurrence)(&bell_amps) - 1.0)
            .abs()
            .max((concurrence_eigen(&bell)? - 1.0).abs()),
        1e-10,
    ));
    let discord = DiscordOptions::default();
    checks.push(Check::at_most(
        "bell_discord",
        (quantum_discord(&bell, &discord)?.value - 1.0).abs(),
        1e-6,
    ));
    let product = TwoModeState::from_pure(Vector4::new(0.6, 0.0, 0.8, 0.0))?;
    checks.push(Check::at_most(
        "product_discord",
        quantum_discord(&product, &discord)?.value,
        1e-8,
    ));
    Ok(checks)
}

fn random_point(
    forms: &ClosedForms,
    s: f64,
    gamma: f64,
    u: f64,
    branch: Branch,
    unit_u: f64,
) -> clonelab::Result<Vec<Check>> {
    let range = feasible_b_range(gamma, s)?;
    let b = u * range.b_max;
    let params = solve_machine(b, gamma, s, branch)?;
    let pair = InputPair::from_overlap(s)?;
    let mut checks = vec![
        Check::at_most("orthonormality", params.coefficients().max_violation(), 1e-10),
        Check::at_most(
            "isometry",
            build_isometry(&params.coefficients()).orthonormality_error(),
            1e-10,
        ),
        Check::at_most(
            "b_range",
            (b.abs() - range.b_max).max(0.0),
            0.0,
        ),
    ];

    let report = cross_check_with(forms, &params, &pair, &Tolerances::default())?;
    checks.extend(report.checks);

    let second = apply_machine(&params, &pair, Input::Second);
    checks.push(Check::at_most(
        "tangle_second_input",
        ((forms.tangle)(gamma, b, &pair, flip_for_second(branch))? - tangle_from_state(&second)?)
            .abs()
            .max(
                (tangle_closed_for_input(gamma, b, &pair, branch, Input::Second)?
                    - tangle_from_state(&second)?)
                .abs(),
            ),
        1e-9,
    ));

    let (f_p, _) = partially_optimal_fidelity(b, gamma, s)?;
    checks.push(Check::at_most(
        "fidelity_range",
        (-f_p).max(f_p - 1.0).max(0.0),
        1e-12,
    ));
    if s >= MIN_OPTIMUM_OVERLAP {
        let opt = optimal_solution(gamma, s)?;
        let (at_b1, _) = partially_optimal_fidelity(opt.b_opt, gamma, s)?;
        checks.push(Check::at_most("optimality", (f_p - opt.f_opt).max(0.0), 1e-9));
        checks.push(Check::at_most(
            "optimum_consistency",
            (at_b1 - opt.f_opt).abs(),
            1e-9,
        ));
        checks.push(Check::at_most(
            "optimum_in_range",
            (opt.b_opt.abs() - opt.b_max).max(0.0),
            1e-9,
        ));
    }

    let rho = output_density(&apply_machine(&params, &pair, Input::First));
    let options = DiscordOptions::default();
    let on_second = quantum_discord(&rho, &options)?.value;
    let on_first = quantum_discord(&rho, &options.measuring(MeasuredMode::First))?.value;
    checks.push(Check::at_most(
        "discord_side_symmetry",
        (on_first - on_second).abs(),
        1e-6,
    ));
    checks.push(Check::at_most(
        "discord_range",
        (on_second - 1.0).max(0.0),
        1e-9,
    ));

    // the same overlap at unit success probability
    let unit_b = unit_u * feasible_b_range(1.0, s)?.b_max;
    let unit = solve_machine(unit_b, 1.0, s, branch)?;
    checks.push(Check::at_most(
        "unit_gamma_tangle",
        tangle_from_state(&apply_machine(&unit, &pair, Input::First))?
            .max((forms.tangle)(1.0, unit_b, &pair, branch)?.abs()),
        1e-12,
    ));
    Ok(checks)
}

/// The branch whose first-input tangle equals this branch's second-input tangle.
fn flip_for_second(branch: Branch) -> Branch {
    match branch {
        Branch::OnePlus => Branch::OneMinus,
        Branch::OneMinus => Branch::OnePlus,
        Branch::TwoPlus => Branch::TwoMinus,
        Branch::TwoMinus => Branch::TwoPlus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clonelab::fidelity::fidelity_general;
    use clonelab::Result;

    #[test]
    fn nan_deviation_is_sticky() {
        let mut report = VerifyReport {
            seed: 0,
            trials: 1,
            vacuous: false,
            tallies: Vec::new(),
            errors: Vec::new(),
        };
        for x in [1e-14, f64::NAN, 1e-13, 1e-15] {
            report.record("", &Check::at_most("x", x, 1e-12));
        }
        assert!(report.tallies[0].max_deviation.is_nan());
        assert_eq!(report.tallies[0].failures, 1);
        assert_eq!(report.tallies[0].count, 4);
    }

    /// The general fidelity with the sign of the `2AB` term flipped.
    fn mutant_fidelity(params: &MachineParams, pair: &InputPair) -> Result<f64> {
        let (a, b) = (params.a(), params.b());
        let reference = fidelity_general(params, pair)?;
        let out = params.output_amplitudes(pair, Input::First);
        let gamma = out.a * out.a + 2.0 * out.b * out.b + out.c * out.c;
        Ok(reference - 4.0 * a * b / (4.0 * gamma))
    }

    #[test]
    fn small_run_passes() {
        let report = run_verify(7, 10, &ClosedForms::default());
        assert!(report.passed(), "{report}");
        assert!(!report.vacuous);
        let n = report.tallies.iter().find(|t| t.name == "fidelity_general").unwrap().count;
        assert_eq!(n, 10);
    }

    #[test]
    fn zero_trials_is_vacuous_but_passes() {
        let report = run_verify(1, 0, &ClosedForms::default());
        assert!(report.passed(), "{report}");
        assert!(report.vacuous);
        assert!(report.to_string().contains("vacuous"));
    }

    #[test]
    fn sign_mutation_is_caught_and_named() {
        let forms = ClosedForms {
            fidelity_general: mutant_fidelity,
            ..ClosedForms::default()
        };
        let report = run_verify(42, 20, &forms);
        assert!(!report.passed());
        let failed: Vec<_> = report.failed().collect();
        assert_eq!(failed, ["fidelity_general"]);
        assert!(report.to_string().contains("FAIL fidelity_general"));
    }

    #[test]
    fn same_seed_same_report() {
        let a = run_verify(3, 5, &ClosedForms::default());
        let b = run_verify(3, 5, &ClosedForms::default());
        assert_eq!(a, b);
    }
}
