use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix of dim {dim} is not Hermitian: max |m - m†| = {deviation:.3e}")]
    NotHermitian { dim: usize, deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("matrix has no positive part to normalize")]
    ZeroMatrix,

    #[error("qubit index {index} out of range for {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("subsystem selection must be a nonempty strictly increasing list of qubit indices")]
    BadSubsystem,

    #[error("operator dim {dim} is not a power of two; qubit-indexed operation unavailable")]
    NotQubitSized { dim: usize },

    #[error("purity {purity} outside [{low}, 1] for dim {dim}")]
    PurityOutOfRange { purity: f64, low: f64, dim: usize },

    #[error("purity is NaN")]
    NanPurity,

    #[error("dim must be at least 2, got {0}")]
    DimTooSmall(usize),

    #[error("subsystem dim {d_sub} does not divide total dim {d_total}")]
    IncompatibleDims { d_sub: usize, d_total: usize },

    #[error("marginal dims {product} do not multiply to total dim {d_total}")]
    MarginalDimMismatch { product: usize, d_total: usize },

    #[error("angle {0} outside [0, pi/2]")]
    ThetaOutOfRange(f64),

    #[error("mixing probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("at least {needed} snapshots required, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("invalid sweep configuration: {0}")]
    BadConfig(String),
}
