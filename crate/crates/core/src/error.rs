use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta = {theta} is outside [0, π/4]")]
    ThetaOutOfRange { theta: f64 },

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    #[error("infeasible: γ = {gamma} < (1 − s)/2 = {bound} (s = {s})")]
    Infeasible { gamma: f64, s: f64, bound: f64 },

    #[error("B = {b} is outside the feasible range [-{b_max}, {b_max}] (γ = {gamma}, s = {s})")]
    BOutOfRange {
        b: f64,
        b_max: f64,
        gamma: f64,
        s: f64,
    },

    #[error("negative square-root argument {value:e} in {context}")]
    NegativeRadicand { context: &'static str, value: f64 },

    #[error(
        "machine parameters violate orthonormality \
         (normalization error {normalization:e}, orthogonality error {orthogonality:e})"
    )]
    InvalidParams {
        normalization: f64,
        orthogonality: f64,
    },

    #[error("singular input: {0}")]
    Singular(&'static str),

    #[error("fidelity undefined: success probability γ = {gamma:e} vanishes")]
    ZeroSuccessProbability { gamma: f64 },

    #[error("probe projection failed: γ = {gamma:e}")]
    ProjectionFailure { gamma: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
