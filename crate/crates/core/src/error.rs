use thiserror::Error;

/// Errors raised by the symmetric-state toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: states on {left} and {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} amplitudes, got {actual}")]
    AmplitudeCount { expected: usize, actual: usize },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    /// A lowering operator hit the vacuum |D_0^0>; there is no target space.
    #[error("state annihilated: lowering operator applied to the vacuum")]
    Annihilated,

    #[error("gate parameters are not unitary: |first|^2 + |second|^2 = {norm_sqr}")]
    NotPhysical { norm_sqr: f64 },

    #[error("no qubit to measure on a zero-qubit state")]
    NoQubit,

    #[error("alpha*gamma + delta*beta vanishes; P1 P2 has a degenerate spectrum")]
    DegenerateSpectrum,

    #[error("degenerate run: success branch vanished at round {round}")]
    DegenerateRun { round: usize },

    #[error("{requested} qubits requested, cap is {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("root finding did not converge (relative residual {residual:e})")]
    RootFinding { residual: f64 },

    #[error("fixed-point basis construction failed (residual {residual:e})")]
    SpectralConstruction { residual: f64 },

    #[error("closed form not applicable: {0}")]
    ClosedFormNotApplicable(&'static str),

    #[error("forced measurement branch has zero probability")]
    ZeroProbabilityBranch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
