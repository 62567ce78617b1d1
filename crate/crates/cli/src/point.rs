use clonelab::correlations::{CorrelationReport, DiscordOptions};
use clonelab::fidelity::{branch_fidelities, fidelity_general, FidelityBranches};
use clonelab::machine::{feasible_b_range, solve_machine, BRange, Branch, Input, InputPair, MachineParams};
use clonelab::oracle::{cross_check, oracle_clone, CrossCheckReport, OracleOutcome, Tolerances};
use clonelab::Result;
use serde::Serialize;

/// Everything known about one machine `(B, γ, θ, branch)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub b: f64,
    pub gamma: f64,
    pub theta: f64,
    pub s: f64,
    pub branch: Branch,
    pub range: BRange,
    pub params: MachineParams,
    pub fidelity: f64,
    pub branch_fidelities: FidelityBranches,
    pub correlations: CorrelationReport,
    pub oracle: OracleOutcome,
    pub cross_check: CrossCheckReport,
}

pub fn point_report(
    b: f64,
    gamma: f64,
    theta: f64,
    branch: Branch,
    discord: &DiscordOptions,
) -> Result<PointReport> {
    let pair = InputPair::new(theta)?;
    let s = pair.overlap();
    let range = feasible_b_range(gamma, s)?;
    let params = solve_machine(b, gamma, s, branch)?;
    Ok(PointReport {
        b,
        gamma,
        theta,
        s,
        branch,
        range,
        params,
        fidelity: fidelity_general(&params, &pair)?,
        branch_fidelities: branch_fidelities(b, gamma, s)?,
        correlations: CorrelationReport::closed_form(&params, &pair, Input::First, discord)?,
        oracle: oracle_clone(&params, &pair, Input::First, discord)?,
        cross_check: cross_check(&params, &pair, &Tolerances::default())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn perfect_cloner_point() {
        let r = point_report(0.0, 1.0, 0.0, Branch::OnePlus, &DiscordOptions::default()).unwrap();
        assert_eq!(r.fidelity, 1.0);
        assert_eq!(r.correlations.concurrence, 0.0);
        assert!(r.correlations.discord < 1e-12);
        assert_eq!(r.correlations.tangle, 0.0);
        assert!(r.cross_check.passed());
    }

    #[test]
    fn identical_inputs_at_the_edge_of_the_range() {
        let b = 1.0 / (2.0 * 2f64.sqrt());
        let r = point_report(b, 1.0, FRAC_PI_4, Branch::OnePlus, &DiscordOptions::default())
            .unwrap();
        assert!((r.branch_fidelities.f1_plus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_range_at_the_feasibility_boundary() {
        let theta = 0.5f64.asin() / 2.0;
        let r = point_report(0.0, 0.25, theta, Branch::OnePlus, &DiscordOptions::default())
            .unwrap();
        assert!(r.range.is_degenerate());
    }

    #[test]
    fn infeasible_gamma_names_the_constraint() {
        let err = point_report(0.0, 0.1, 0.2, Branch::OnePlus, &DiscordOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("(1 − s)/2"), "{err}");
    }
}
