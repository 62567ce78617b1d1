//! The cloning machine itself.
//!
//! A machine is the real quadruple `(A, B, C, D)` acting as
//!
//! ```text
//! |0⟩|0⟩|0⟩_p → [A|00⟩ + B(|01⟩ + |10⟩) + C|11⟩]|0⟩_p + D|00⟩|1⟩_p
//! |1⟩|0⟩|0⟩_p → [A|11⟩ + B(|01⟩ + |10⟩) + C|00⟩]|0⟩_p + D|00⟩|1⟩_p
//! ```
//!
//! and is an isometry exactly when `A² + 2B² + C² + D² = 1` and `2AC + 2B² + D² = 0`.
//! Subtracting the two conditions gives `(A − C)² = 1`, so every real machine lies in
//! one of two families (`A − C = +1` or `A − C = −1`), each split by the sign of `A + C`.
//! Those four cases are the [`Branch`]es.
//!
//! Three-qubit amplitudes are indexed as `|m₁ m₂ p⟩` with the probe least significant:
//! `index = 4·m₁ + 2·m₂ + p`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::correlations::TwoModeState;
use crate::error::{Error, Result};
use crate::numeric::{check_unit_interval, sqrt_clamped, ROUNDOFF};

/// Tolerance on the two orthonormality conditions for a machine to be accepted.
pub const PARAM_TOL: f64 = 1e-10;

/// Tolerance on the norm of a [`ThreeQubitState`].
pub const STATE_NORM_TOL: f64 = 1e-12;

/// The pair of inputs `cosθ|0⟩ + sinθ|1⟩` and `sinθ|0⟩ + cosθ|1⟩`.
///
/// θ is the only stored quantity; the overlap `s = sin 2θ` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputPair {
    theta: f64,
}

impl InputPair {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..=FRAC_PI_4).contains(&theta) {
            Ok(Self { theta })
        } else {
            Err(Error::ThetaOutOfRange { theta })
        }
    }

    /// The pair with overlap `s`, i.e. `θ = asin(s)/2`.
    pub fn from_overlap(s: f64) -> Result<Self> {
        check_unit_interval("s", s)?;
        Self::new((s.asin() / 2.0).min(FRAC_PI_4))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn overlap(&self) -> f64 {
        (2.0 * self.theta).sin()
    }

    /// Amplitudes of the selected input in the `{|0⟩, |1⟩}` basis.
    pub fn amplitudes(&self, which: Input) -> [f64; 2] {
        let (sin, cos) = self.theta.sin_cos();
        match which {
            Input::First => [cos, sin],
            Input::Second => [sin, cos],
        }
    }
}

/// `s = sin 2θ` for `θ ∈ [0, π/4]`.
pub fn overlap_from_theta(theta: f64) -> Result<f64> {
    Ok(InputPair::new(theta)?.overlap())
}

/// Which member of the input pair is cloned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Input {
    First,
    Second,
}

impl Input {
    pub const BOTH: [Input; 2] = [Input::First, Input::Second];
}

/// The two solution families, `A − C = +1` and `A − C = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::One => "1",
            Family::Two => "2",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Family::One),
            "2" => Ok(Family::Two),
            other => Err(Error::InvalidOption(format!(
                "unknown family {other:?} (expected 1 or 2)"
            ))),
        }
    }
}

/// One of the four real `(A, C)` solutions at fixed `(B, γ, s)`.
///
/// With `R = √((s + 2γ − 1)/(1 + s) − 4B²)`:
///
/// | branch | A          | C          |
/// |--------|------------|------------|
/// | `1+`   | `( R + 1)/2` | `( R − 1)/2` |
/// | `1−`   | `(−R + 1)/2` | `(−R − 1)/2` |
/// | `2+`   | `(−R − 1)/2` | `(−R + 1)/2` |
/// | `2−`   | `( R − 1)/2` | `( R + 1)/2` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    #[serde(rename = "1+")]
    OnePlus,
    #[serde(rename = "1-")]
    OneMinus,
    #[serde(rename = "2+")]
    TwoPlus,
    #[serde(rename = "2-")]
    TwoMinus,
}

impl Branch {
    /// Canonical order, also used for tie-breaking.
    pub const ALL: [Branch; 4] = [
        Branch::OnePlus,
        Branch::OneMinus,
        Branch::TwoPlus,
        Branch::TwoMinus,
    ];

    pub fn family(self) -> Family {
        match self {
            Branch::OnePlus | Branch::OneMinus => Family::One,
            Branch::TwoPlus | Branch::TwoMinus => Family::Two,
        }
    }

    /// `+1` for the upper sign of the ± in the branch formulas.
    pub fn sign(self) -> f64 {
        match self {
            Branch::OnePlus | Branch::TwoPlus => 1.0,
            Branch::OneMinus | Branch::TwoMinus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `(A, C)` for the root value `R ≥ 0`.
    pub fn a_c(self, root: f64) -> (f64, f64) {
        match self {
            Branch::OnePlus => ((root + 1.0) / 2.0, (root - 1.0) / 2.0),
            Branch::OneMinus => ((-root + 1.0) / 2.0, (-root - 1.0) / 2.0),
            Branch::TwoPlus => ((-root - 1.0) / 2.0, (-root + 1.0) / 2.0),
            Branch::TwoMinus => ((root - 1.0) / 2.0, (root + 1.0) / 2.0),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::OnePlus => "1+",
            Branch::OneMinus => "1-",
            Branch::TwoPlus => "2+",
            Branch::TwoMinus => "2-",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('\u{2212}', "-").as_str() {
            "1+" => Ok(Branch::OnePlus),
            "1-" => Ok(Branch::OneMinus),
            "2+" => Ok(Branch::TwoPlus),
            "2-" => Ok(Branch::TwoMinus),
            other => Err(Error::InvalidOption(format!(
                "unknown branch {other:?} (expected one of 1+, 1-, 2+, 2-)"
            ))),
        }
    }
}

/// Unchecked machine coefficients. Used wherever a possibly invalid quadruple must be
/// represented (negative controls in the oracle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Coefficients {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// `|A² + 2B² + C² + D² − 1|`
    pub fn normalization_violation(&self) -> f64 {
        let Self { a, b, c, d } = *self;
        (a * a + 2.0 * b * b + c * c + d * d - 1.0).abs()
    }

    /// `|2AC + 2B² + D²|`
    pub fn orthogonality_violation(&self) -> f64 {
        let Self { a, b, c, d } = *self;
        (2.0 * a * c + 2.0 * b * b + d * d).abs()
    }

    pub fn max_violation(&self) -> f64 {
        self.normalization_violation()
            .max(self.orthogonality_violation())
    }
}

/// A validated cloning machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MachineParams(Coefficients);

impl MachineParams {
    /// Accepts the quadruple only if both orthonormality conditions hold within [`PARAM_TOL`].
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::try_from(Coefficients::new(a, b, c, d))
    }

    pub fn a(&self) -> f64 {
        self.0.a
    }

    pub fn b(&self) -> f64 {
        self.0.b
    }

    pub fn c(&self) -> f64 {
        self.0.c
    }

    pub fn d(&self) -> f64 {
        self.0.d
    }

    pub fn coefficients(&self) -> Coefficients {
        self.0
    }

    /// Success probability when cloning a pair with overlap `s`: `γ = 1 − D²(1 + s)`.
    pub fn success_probability_for(&self, s: f64) -> f64 {
        1.0 - self.0.d * self.0.d * (1.0 + s)
    }

    /// Which of the four solution branches this machine belongs to.
    ///
    /// At `A + C = 0` (the boundary of the B range) the `+` branch is reported.
    pub fn branch(&self) -> Branch {
        let sum = self.0.a + self.0.c;
        if self.0.a - self.0.c >= 0.0 {
            if sum >= 0.0 {
                Branch::OnePlus
            } else {
                Branch::OneMinus
            }
        } else if sum <= 0.0 {
            Branch::TwoPlus
        } else {
            Branch::TwoMinus
        }
    }

    /// Output amplitudes `(a, b, c, d)` for the selected input.
    pub fn output_amplitudes(&self, pair: &InputPair, which: Input) -> OutputAmplitudes {
        let [x0, x1] = pair.amplitudes(which);
        let Coefficients { a, b, c, d } = self.0;
        OutputAmplitudes {
            a: a * x0 + c * x1,
            b: b * (x0 + x1),
            c: c * x0 + a * x1,
            d: d * (x0 + x1),
        }
    }
}

impl TryFrom<Coefficients> for MachineParams {
    type Error = Error;

    fn try_from(coefficients: Coefficients) -> Result<Self> {
        let normalization = coefficients.normalization_violation();
        let orthogonality = coefficients.orthogonality_violation();
        // NaN fails both comparisons
        if normalization <= PARAM_TOL && orthogonality <= PARAM_TOL {
            Ok(Self(coefficients))
        } else {
            Err(Error::InvalidParams {
                normalization,
                orthogonality,
            })
        }
    }
}

/// The four amplitudes of a cloner output:
/// `a|00⟩|0⟩ + b(|01⟩ + |10⟩)|0⟩ + c|11⟩|0⟩ + d|00⟩|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputAmplitudes {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl OutputAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        let Self { a, b, c, d } = *self;
        a * a + 2.0 * b * b + c * c + d * d
    }

    /// `b² − ac`; vanishes for product outputs.
    pub fn product_defect(&self) -> f64 {
        self.b * self.b - self.a * self.c
    }
}

/// Symmetric interval of admissible `B` at fixed `(γ, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BRange {
    pub b_min: f64,
    pub b_max: f64,
    pub gamma: f64,
    pub s: f64,
}

impl BRange {
    pub fn contains(&self, b: f64) -> bool {
        b.abs() <= self.b_max + ROUNDOFF
    }

    pub fn is_degenerate(&self) -> bool {
        self.b_max == 0.0
    }

    /// `n` points spanning `[b_min, b_max]`, exactly symmetric about zero.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => {
                let span = (n - 1) as f64;
                (0..n)
                    .map(|k| self.b_max * ((2 * k) as f64 - span) / span)
                    .collect()
            }
        }
    }
}

/// `D = √((1 − γ)/(1 + s))`.
pub fn probe_coefficient(gamma: f64, s: f64) -> f64 {
    ((1.0 - gamma) / (1.0 + s)).max(0.0).sqrt()
}

/// The admissible `B` interval: `|B| ≤ ½√((s + 2γ − 1)/(1 + s)) = ½√(1 − 2D²)`.
pub fn feasible_b_range(gamma: f64, s: f64) -> Result<BRange> {
    check_unit_interval("γ", gamma)?;
    check_unit_interval("s", s)?;
    let width_sqr = (s + 2.0 * gamma - 1.0) / (1.0 + s);
    if width_sqr < -ROUNDOFF {
        return Err(Error::Infeasible {
            gamma,
            s,
            bound: (1.0 - s) / 2.0,
        });
    }
    let b_max = 0.5 * width_sqr.max(0.0).sqrt();

    let d = probe_coefficient(gamma, s);
    let from_probe = 0.5 * (1.0 - 2.0 * d * d).max(0.0).sqrt();
    debug_assert!(
        (b_max - from_probe).abs() <= 1e-12,
        "B-range characterizations disagree: {b_max} vs {from_probe}"
    );

    Ok(BRange {
        b_min: -b_max,
        b_max,
        gamma,
        s,
    })
}

/// The root `R = √((s + 2γ − 1)/(1 + s) − 4B²)` shared by all four branches.
pub fn branch_root(b: f64, gamma: f64, s: f64) -> Result<f64> {
    let range = feasible_b_range(gamma, s)?;
    // 4(b_max² − B²) in factored form, so that R is exactly 0 at B = ±b_max
    let radicand = 4.0 * (range.b_max - b.abs()) * (range.b_max + b.abs());
    if radicand < -ROUNDOFF {
        return Err(Error::BOutOfRange {
            b,
            b_max: range.b_max,
            gamma,
            s,
        });
    }
    sqrt_clamped(radicand, "branch root")
}

/// Solves for `(A, C)` on the chosen branch, with `D = √((1 − γ)/(1 + s))`.
pub fn solve_machine(b: f64, gamma: f64, s: f64, branch: Branch) -> Result<MachineParams> {
    let root = branch_root(b, gamma, s)?;
    let (a, c) = branch.a_c(root);
    MachineParams::new(a, b, c, probe_coefficient(gamma, s))
}

/// A real pure state of `(mode₁, mode₂, probe)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeQubitState {
    amplitudes: [f64; 8],
}

impl ThreeQubitState {
    pub const fn index(m1: usize, m2: usize, probe: usize) -> usize {
        4 * m1 + 2 * m2 + probe
    }

    pub fn from_amplitudes(amplitudes: [f64; 8]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|x| x * x).sum();
        if (norm_sqr - 1.0).abs() <= STATE_NORM_TOL {
            Ok(Self { amplitudes })
        } else {
            Err(Error::InvalidState(format!(
                "three-qubit state has squared norm {norm_sqr}"
            )))
        }
    }

    pub fn amplitudes(&self) -> &[f64; 8] {
        &self.amplitudes
    }

    /// Unnormalized two-mode amplitudes `⟨p|ψ⟩`, indexed `2·m₁ + m₂`.
    pub fn probe_projection(&self, probe: usize) -> [f64; 4] {
        std::array::from_fn(|k| self.amplitudes[2 * k + probe])
    }

    /// `(a, b, c, d)` when the state has the cloner-output structure, `None` otherwise.
    pub fn output_amplitudes(&self) -> Option<OutputAmplitudes> {
        let amp = &self.amplitudes;
        let tol = STATE_NORM_TOL;
        let empty = [3, 5, 7].iter().all(|&k| amp[k].abs() <= tol);
        if empty && (amp[2] - amp[4]).abs() <= tol {
            Some(OutputAmplitudes {
                a: amp[0],
                b: 0.5 * (amp[2] + amp[4]),
                c: amp[6],
                d: amp[1],
            })
        } else {
            None
        }
    }
}

/// Applies the machine to one member of the input pair.
pub fn apply_machine(params: &MachineParams, pair: &InputPair, which: Input) -> ThreeQubitState {
    let out = params.output_amplitudes(pair, which);
    let scale = out.norm_sqr().sqrt().recip();
    let mut amplitudes = [0.0; 8];
    amplitudes[ThreeQubitState::index(0, 0, 0)] = out.a * scale;
    amplitudes[ThreeQubitState::index(0, 1, 0)] = out.b * scale;
    amplitudes[ThreeQubitState::index(1, 0, 0)] = out.b * scale;
    amplitudes[ThreeQubitState::index(1, 1, 0)] = out.c * scale;
    amplitudes[ThreeQubitState::index(0, 0, 1)] = out.d * scale;
    ThreeQubitState { amplitudes }
}

/// Probability of finding the probe in `|0⟩`.
pub fn success_probability(state: &ThreeQubitState) -> f64 {
    state.probe_projection(0).iter().map(|x| x * x).sum()
}

/// Two-mode reduced state (probe traced out).
///
/// Cloner outputs produce the structured matrix built from `(a, b, c, d)`; any other
/// state falls back to the explicit partial trace.
pub fn output_density(state: &ThreeQubitState) -> TwoModeState {
    match state.output_amplitudes() {
        Some(amps) => TwoModeState::from_output_amplitudes(amps),
        None => TwoModeState::from_pure_three_qubit(state),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn overlap_examples() {
        assert_eq!(overlap_from_theta(0.0).unwrap(), 0.0);
        assert_eq!(overlap_from_theta(FRAC_PI_4).unwrap(), 1.0);
        assert!((overlap_from_theta(PI / 12.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            overlap_from_theta(1.0),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(overlap_from_theta(-1e-9).is_err());
    }

    #[test]
    fn from_overlap_round_trips() {
        for k in 0..=100 {
            let s = k as f64 / 100.0;
            let pair = InputPair::from_overlap(s).unwrap();
            assert!((pair.overlap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn b_range_examples() {
        let r = feasible_b_range(1.0, 0.0).unwrap();
        assert_eq!((r.b_min, r.b_max), (-0.5, 0.5));

        let r = feasible_b_range(0.25, 0.5).unwrap();
        assert_eq!(r.b_max, 0.0);
        assert!(r.is_degenerate());

        assert!(matches!(
            feasible_b_range(0.2, 0.2),
            Err(Error::Infeasible { .. })
        ));
        assert!(feasible_b_range(1.1, 0.2).is_err());
    }

    #[test]
    fn grid_is_symmetric() {
        let r = feasible_b_range(0.9, 0.3).unwrap();
        for n in [2, 5, 2001, 10] {
            let g = r.grid(n);
            assert_eq!(g.len(), n);
            assert_eq!(g[0], r.b_min);
            assert_eq!(g[n - 1], r.b_max);
            for k in 0..n {
                assert_eq!(g[k], -g[n - 1 - k]);
            }
        }
        assert_eq!(r.grid(2001)[1000], 0.0);
    }

    #[test]
    fn solve_machine_examples() {
        let p = solve_machine(0.0, 1.0, 0.0, Branch::OnePlus).unwrap();
        assert_eq!((p.a(), p.b(), p.c(), p.d()), (1.0, 0.0, 0.0, 0.0));

        let p = solve_machine(0.0, 1.0, 0.0, Branch::TwoPlus).unwrap();
        assert_eq!((p.a(), p.b(), p.c(), p.d()), (-1.0, 0.0, 0.0, 0.0));

        let p = solve_machine(0.0, 0.25, 0.5, Branch::OnePlus).unwrap();
        assert!((p.a() - 0.5).abs() < 1e-15);
        assert!((p.c() + 0.5).abs() < 1e-15);
        assert!((p.d() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(p.coefficients().max_violation() < 1e-15);
    }

    #[test]
    fn solve_machine_rejects_out_of_range_b() {
        assert!(matches!(
            solve_machine(0.6, 1.0, 0.0, Branch::OnePlus),
            Err(Error::BOutOfRange { .. })
        ));
        assert!(matches!(
            solve_machine(0.0, 0.1, 0.5, Branch::OnePlus),
            Err(Error::Infeasible { .. })
        ));
        // the range endpoint itself is admissible
        let r = feasible_b_range(0.8, 0.3).unwrap();
        for branch in Branch::ALL {
            solve_machine(r.b_max, 0.8, 0.3, branch).unwrap();
        }
    }

    #[test]
    fn raw_constructor_validates() {
        assert!(MachineParams::new(1.0, 0.0, 0.0, 0.0).is_ok());
        assert!(matches!(
            MachineParams::new(1.0, 0.1, 0.0, 0.0),
            Err(Error::InvalidParams { .. })
        ));
        assert!(MachineParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn branch_identification() {
        for (gamma, s, b) in [(0.9, 0.5, 0.1), (0.7, 0.2, -0.2), (1.0, 0.9, 0.3)] {
            for branch in Branch::ALL {
                let p = solve_machine(b, gamma, s, branch).unwrap();
                assert_eq!(p.branch(), branch);
            }
        }
    }

    #[test]
    fn branch_parsing() {
        for branch in Branch::ALL {
            assert_eq!(branch.to_string().parse::<Branch>().unwrap(), branch);
        }
        assert_eq!("2\u{2212}".parse::<Branch>().unwrap(), Branch::TwoMinus);
        assert!("3+".parse::<Branch>().is_err());
    }

    #[test]
    fn apply_machine_examples() {
        let id = MachineParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let out = apply_machine(&id, &InputPair::new(0.0).unwrap(), Input::First);
        assert_eq!(out.amplitudes(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

        let out = apply_machine(&id, &InputPair::new(FRAC_PI_4).unwrap(), Input::First);
        let amp = out.amplitudes();
        assert!((amp[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((amp[6] - FRAC_1_SQRT_2).abs() < 1e-15);
        for k in [1, 2, 3, 4, 5, 7] {
            assert_eq!(amp[k], 0.0);
        }
    }

    #[test]
    fn success_probability_examples() {
        let id = MachineParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let state = apply_machine(&id, &InputPair::new(0.3).unwrap(), Input::First);
        assert!((success_probability(&state) - 1.0).abs() < 1e-15);

        let s: f64 = 0.5;
        let p = solve_machine(0.0, 0.8, s, Branch::OnePlus).unwrap();
        let pair = InputPair::new(s.asin() / 2.0).unwrap();
        for which in Input::BOTH {
            let state = apply_machine(&p, &pair, which);
            assert!((success_probability(&state) - 0.8).abs() < 1e-10);
        }
    }

    #[test]
    fn output_density_examples() {
        let id = MachineParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let rho = output_density(&apply_machine(
            &id,
            &InputPair::new(0.0).unwrap(),
            Input::First,
        ));
        assert_eq!(rho.matrix()[(0, 0)], 1.0);
        assert_eq!(rho.matrix().sum(), 1.0);

        let rho = output_density(&apply_machine(
            &id,
            &InputPair::new(FRAC_PI_4).unwrap(),
            Input::First,
        ));
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.matrix()[(i, j)] - 0.5).abs() < 1e-15);
        }
        assert!((rho.matrix().sum() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn structured_and_generic_density_agree() {
        let s: f64 = 0.6;
        let pair = InputPair::from_overlap(s).unwrap();
        for branch in Branch::ALL {
            let p = solve_machine(-0.12, 0.85, s, branch).unwrap();
            let state = apply_machine(&p, &pair, Input::Second);
            let structured = output_density(&state);
            assert!(structured.output_amplitudes().is_some());
            let generic = TwoModeState::from_pure_three_qubit(&state);
            assert!((structured.matrix() - generic.matrix()).amax() < 1e-15);
        }
    }
}
