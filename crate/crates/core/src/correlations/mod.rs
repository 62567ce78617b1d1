//! Correlations between the two output modes and with the probe.

mod concurrence;
mod discord;
mod tangle;

pub use concurrence::{concurrence_closed, concurrence_eigen};
pub use discord::{
    conditional_entropy, quantum_discord, DiscordOptions, DiscordResult, MeasuredMode,
    MeasurementBasis,
};
pub use tangle::{
    tangle_closed, tangle_closed_for_branch, tangle_closed_for_input, tangle_from_state,
    tangle_of_reduced,
};

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::machine::{
    apply_machine, output_density, Input, InputPair, MachineParams, OutputAmplitudes,
    ThreeQubitState,
};
use crate::numeric::{entropy_bits, ROUNDOFF};

/// Density matrix of the two output modes, basis `|m₁ m₂⟩` with index `2·m₁ + m₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    matrix: Matrix4<f64>,
    amplitudes: Option<OutputAmplitudes>,
}

impl TwoModeState {
    /// Validates trace, symmetry and positivity, each to `1e-12`.
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > ROUNDOFF {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let asymmetry = (matrix - matrix.transpose()).amax();
        if asymmetry > ROUNDOFF {
            return Err(Error::InvalidState(format!(
                "matrix is not symmetric (max deviation {asymmetry:e})"
            )));
        }
        linalg::psd_eigenvalues(&matrix)?;
        Ok(Self {
            matrix,
            amplitudes: None,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized two-qubit vector.
    pub fn from_pure(psi: Vector4<f64>) -> Result<Self> {
        Self::new(psi * psi.transpose())
    }

    /// The structured output matrix
    ///
    /// ```text
    /// ⎡ a²+d²  ab  ab  ac ⎤
    /// ⎢  ab    b²  b²  bc ⎥
    /// ⎢  ab    b²  b²  bc ⎥
    /// ⎣  ac    bc  bc  c² ⎦
    /// ```
    ///
    /// The amplitudes must come from a normalized cloner output.
    pub fn from_output_amplitudes(amps: OutputAmplitudes) -> Self {
        let OutputAmplitudes { a, b, c, d } = amps;
        let matrix = Matrix4::new(
            a * a + d * d, a * b, a * b, a * c, //
            a * b, b * b, b * b, b * c, //
            a * b, b * b, b * b, b * c, //
            a * c, b * c, b * c, c * c,
        );
        debug_assert!((matrix.trace() - 1.0).abs() <= 1e-10);
        Self {
            matrix,
            amplitudes: Some(amps),
        }
    }

    /// Reduced state of an arbitrary pure three-qubit state, tracing out the probe.
    pub fn from_pure_three_qubit(state: &ThreeQubitState) -> Self {
        let zero = state.probe_projection(0);
        let one = state.probe_projection(1);
        let matrix = Matrix4::from_fn(|i, k| zero[i] * zero[k] + one[i] * one[k]);
        Self {
            matrix,
            amplitudes: None,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn output_amplitudes(&self) -> Option<OutputAmplitudes> {
        self.amplitudes
    }

    /// Reduced state of one mode.
    pub fn marginal(&self, mode: MeasuredMode) -> Matrix2<f64> {
        match mode {
            MeasuredMode::First => linalg::trace_out_second(&self.matrix),
            MeasuredMode::Second => linalg::trace_out_first(&self.matrix),
        }
    }

    /// Eigenvalues in ascending order, round-off negatives clamped.
    pub fn eigenvalues(&self) -> Result<Vector4<f64>> {
        linalg::psd_eigenvalues(&self.matrix)
    }

    /// von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(entropy_bits(self.eigenvalues()?.as_slice()))
    }

    /// The same state with the two modes exchanged.
    pub fn swapped(&self) -> Self {
        let swap = |k: usize| 2 * (k % 2) + k / 2;
        Self {
            matrix: Matrix4::from_fn(|i, k| self.matrix[(swap(i), swap(k))]),
            amplitudes: self.amplitudes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

/// Concurrence, discord and tangle of one cloner output, with how each was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub discord: f64,
    pub tangle: f64,
    pub concurrence_method: Method,
    pub tangle_method: Method,
    pub discord_grid: usize,
    pub discord_tolerance: f64,
    pub discord_evaluations: usize,
}

impl CorrelationReport {
    /// Closed forms where they exist (concurrence, tangle); discord is always numerical.
    pub fn closed_form(
        params: &MachineParams,
        pair: &InputPair,
        which: Input,
        options: &DiscordOptions,
    ) -> Result<Self> {
        let amps = params.output_amplitudes(pair, which);
        let gamma = params.success_probability_for(pair.overlap());
        let state = apply_machine(params, pair, which);
        let rho = output_density(&state);
        let discord = quantum_discord(&rho, options)?;
        Ok(Self {
            concurrence: concurrence_closed(&amps),
            discord: discord.value,
            tangle: tangle_closed_for_input(gamma, params.b(), pair, params.branch(), which)?,
            concurrence_method: Method::ClosedForm,
            tangle_method: Method::ClosedForm,
            discord_grid: options.grid,
            discord_tolerance: options.tolerance,
            discord_evaluations: discord.evaluations,
        })
    }

    /// Purely numerical evaluation from the three-qubit state.
    pub fn oracle(state: &ThreeQubitState, options: &DiscordOptions) -> Result<Self> {
        let rho = TwoModeState::from_pure_three_qubit(state);
        let rho = TwoModeState::new(*rho.matrix())?;
        let discord = quantum_discord(&rho, options)?;
        Ok(Self {
            concurrence: concurrence_eigen(&rho)?,
            discord: discord.value,
            tangle: tangle_from_state(state)?,
            concurrence_method: Method::Oracle,
            tangle_method: Method::Oracle,
            discord_grid: options.grid,
            discord_tolerance: options.tolerance,
            discord_evaluations: discord.evaluations,
        })
    }

    /// A classical (zero-discord) state must carry no entanglement.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.discord > tol || self.concurrence <= tol
    }
}
