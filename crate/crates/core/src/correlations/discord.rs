//! Quantum discord under projective measurements on one mode.
//!
//! `Q = min_Π Σ_j q_j S(ρ_A^j) + S(ρ_B) − S(ρ_AB)`, entropies in bits. The measurement is
//! parameterized on the Bloch sphere and minimized by a uniform grid over (polar, azimuth)
//! followed by Nelder–Mead refinement from the best grid points.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::hermitian2_eigenvalues;
use crate::numeric::{entropy_bits, ROUNDOFF};
use crate::optimize::nelder_mead;

use super::TwoModeState;

/// Outcome probabilities below this contribute nothing to the conditional entropy.
const NEGLIGIBLE_PROBABILITY: f64 = 1e-14;

/// Number of grid minima used to seed the local refinement.
const REFINEMENT_SEEDS: usize = 3;

/// Initial simplex size of the restart, relative to the grid spacing.
const RESTART_SCALE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasuredMode {
    First,
    Second,
}

/// Projective measurement onto `cos(t/2)|0⟩ + e^{iφ} sin(t/2)|1⟩` and its complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBasis {
    pub polar: f64,
    pub azimuth: f64,
}

impl MeasurementBasis {
    pub fn new(polar: f64, azimuth: f64) -> Self {
        Self { polar, azimuth }
    }

    /// The two orthonormal basis vectors.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (self.polar / 2.0).sin_cos();
        let phase = Complex64::from_polar(1.0, self.azimuth);
        [
            [Complex64::new(c, 0.0), phase * s],
            [-phase.conj() * s, Complex64::new(c, 0.0)],
        ]
    }

    pub fn projectors(&self) -> [Matrix2<Complex64>; 2] {
        self.vectors()
            .map(|v| Matrix2::from_fn(|i, k| v[i] * v[k].conj()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordOptions {
    /// Grid points per angle.
    pub grid: usize,
    /// Absolute tolerance on the minimized conditional entropy.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub measured: MeasuredMode,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            grid: 32,
            tolerance: 1e-13,
            max_iterations: 500,
            measured: MeasuredMode::Second,
        }
    }
}

impl DiscordOptions {
    pub fn with_grid(self, grid: usize) -> Self {
        Self { grid, ..self }
    }

    pub fn measuring(self, measured: MeasuredMode) -> Self {
        Self { measured, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidOption(format!(
                "discord grid must have at least 2 points per angle, got {}",
                self.grid
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidOption(format!(
                "discord tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult {
    pub value: f64,
    pub basis: MeasurementBasis,
    /// Minimized `Σ_j q_j S(ρ^j)` of the unmeasured mode.
    pub conditional_entropy: f64,
    /// `S` of the measured mode's marginal.
    pub marginal_entropy: f64,
    pub joint_entropy: f64,
    pub evaluations: usize,
}

/// `Σ_j q_j S(ρ^j)` for the unmeasured mode after measuring `measured` in `basis`.
pub fn conditional_entropy(
    rho: &TwoModeState,
    basis: &MeasurementBasis,
    measured: MeasuredMode,
) -> f64 {
    let m = rho.matrix();
    // (row, column) of the 4×4 entry for unmeasured index u and measured index v
    let at = |u: usize, v: usize, u2: usize, v2: usize| match measured {
        MeasuredMode::Second => m[(2 * u + v, 2 * u2 + v2)],
        MeasuredMode::First => m[(2 * v + u, 2 * v2 + u2)],
    };

    basis
        .vectors()
        .iter()
        .map(|vec| {
            // block[u][u2] = Σ_{v,v2} conj(vec_v) ρ[(u,v),(u2,v2)] vec_v2
            let block = |u: usize, u2: usize| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for v in 0..2 {
                    for v2 in 0..2 {
                        acc += vec[v].conj() * at(u, v, u2, v2) * vec[v2];
                    }
                }
                acc
            };
            let p = block(0, 0).re;
            let q = block(1, 1).re;
            let off = block(0, 1).norm();
            let prob = p + q;
            if prob < NEGLIGIBLE_PROBABILITY {
                return 0.0;
            }
            let [hi, lo] = hermitian2_eigenvalues(p, q, off);
            prob * entropy_bits(&[hi / prob, lo / prob])
        })
        .sum()
}

/// Discord with the measurement on `options.measured`.
pub fn quantum_discord(rho: &TwoModeState, options: &DiscordOptions) -> Result<DiscordResult> {
    options.validate()?;
    let measured = options.measured;
    let objective = |x: &[f64; 2]| conditional_entropy(rho, &MeasurementBasis::new(x[0], x[1]), measured);

    let n = options.grid;
    let polar_step = PI / (n - 1) as f64;
    let azimuth_step = 2.0 * PI / n as f64;
    let mut grid: Vec<([f64; 2], f64)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = [polar_step * i as f64, azimuth_step * j as f64];
            grid.push((x, objective(&x)));
        }
    }
    let mut evaluations = grid.len();
    grid.sort_by(|p, q| p.1.total_cmp(&q.1));

    let (mut best_x, mut best) = grid[0];
    for &(seed, _) in grid.iter().take(REFINEMENT_SEEDS) {
        let step = [polar_step, azimuth_step];
        let mut local = nelder_mead(objective, seed, step, options.tolerance, options.max_iterations);
        // one restart with a fresh, smaller simplex guards against premature collapse
        let restart = nelder_mead(
            objective,
            local.x,
            step.map(|h| h * RESTART_SCALE),
            options.tolerance,
            options.max_iterations,
        );
        evaluations += local.evaluations + restart.evaluations;
        if restart.value < local.value {
            local = restart;
        }
        if local.value < best {
            best = local.value;
            best_x = local.x;
        }
    }

    let marginal = rho.marginal(measured);
    let marginal_entropy = entropy_bits(&crate::linalg::symmetric2_eigenvalues(&marginal));
    let joint_entropy = rho.entropy()?;
    let raw = best + marginal_entropy - joint_entropy;
    if raw < -ROUNDOFF {
        return Err(Error::Numerical(format!("negative discord {raw:e}")));
    }

    Ok(DiscordResult {
        value: raw.max(0.0),
        basis: MeasurementBasis::new(best_x[0], best_x[1]),
        conditional_entropy: best,
        marginal_entropy,
        joint_entropy,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{apply_machine, output_density, solve_machine, Branch, Input, InputPair};
    use nalgebra::{Matrix4, Vector4};

    fn bell() -> TwoModeState {
        TwoModeState::from_pure(Vector4::new(1.0, 0.0, 0.0, 1.0) / 2f64.sqrt()).unwrap()
    }

    #[test]
    fn projectors_resolve_identity() {
        for (t, phi) in [(0.0, 0.0), (1.0, 2.0), (PI, 5.5), (0.3, -0.7)] {
            let [p, q] = MeasurementBasis::new(t, phi).projectors();
            let sum = p + q;
            assert!((sum - Matrix2::identity()).norm() < 1e-12);
            assert!((p * p - p).norm() < 1e-12);
            assert!((p * q).norm() < 1e-12);
        }
    }

    #[test]
    fn product_state_has_no_discord() {
        let rho = TwoModeState::from_pure(Vector4::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        let d = quantum_discord(&rho, &DiscordOptions::default()).unwrap();
        assert!(d.value < 1e-8);
    }

    #[test]
    fn bell_state_has_one_bit() {
        let d = quantum_discord(&bell(), &DiscordOptions::default()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-6, "{}", d.value);
        assert!((d.marginal_entropy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_quantum_mixture_has_no_discord() {
        // ½|00⟩⟨00| + ½|11⟩⟨11|
        let rho = TwoModeState::new(Matrix4::from_diagonal(&Vector4::new(0.5, 0.0, 0.0, 0.5)))
            .unwrap();
        let d = quantum_discord(&rho, &DiscordOptions::default()).unwrap();
        assert!(d.value < 1e-8, "{}", d.value);
    }

    #[test]
    fn measured_side_does_not_matter_for_cloner_outputs() {
        let pair = InputPair::from_overlap(0.35).unwrap();
        let p = solve_machine(0.2, 0.85, 0.35, Branch::OnePlus).unwrap();
        let rho = output_density(&apply_machine(&p, &pair, Input::First));
        let opts = DiscordOptions::default();
        let second = quantum_discord(&rho, &opts).unwrap().value;
        let first = quantum_discord(&rho, &opts.measuring(MeasuredMode::First))
            .unwrap()
            .value;
        assert!((first - second).abs() < 1e-6);
        assert!(second > 0.0 && second <= 1.0 + 1e-9);
    }

    #[test]
    fn finer_grid_agrees() {
        let pair = InputPair::from_overlap(0.6).unwrap();
        let p = solve_machine(-0.1, 0.7, 0.6, Branch::TwoPlus).unwrap();
        let rho = output_density(&apply_machine(&p, &pair, Input::First));
        let coarse = quantum_discord(&rho, &DiscordOptions::default()).unwrap().value;
        let fine = quantum_discord(&rho, &DiscordOptions::default().with_grid(256))
            .unwrap()
            .value;
        assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
    }

    #[test]
    fn rejects_degenerate_options() {
        let opts = DiscordOptions::default().with_grid(1);
        assert!(quantum_discord(&bell(), &opts).is_err());
    }
}
