//! Unified state-dependent / probabilistic 1→2 qubit cloning.
//!
//! Builds the cloning machine from `(B, γ, s)`, evaluates fidelities in closed form,
//! measures the correlations between the two output modes (concurrence, discord and the
//! three-party tangle with the probe), and cross-checks all closed forms against a
//! brute-force state-vector oracle.

pub mod check;
pub mod correlations;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod machine;
pub mod nocorr;
pub mod numeric;
pub mod optimize;
pub mod oracle;

pub use check::Check;
pub use error::{Error, Result};
pub use machine::{
    apply_machine, feasible_b_range, solve_machine, BRange, Branch, Family, Input, InputPair,
    MachineParams, ThreeQubitState,
};
