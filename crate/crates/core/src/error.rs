//! Shared error type for state construction, protocol runs, and formula
//! evaluation.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building states, running the
/// distribution protocol, or evaluating cost and estimation formulas.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("control and target must be distinct, both are qubit {qubit}")]
    DuplicateQubit { qubit: usize },

    #[error("a register needs at least one qubit")]
    EmptyRegister,

    #[error("{kind} with {requested} qubits exceeds the cap of {cap}")]
    CapExceeded {
        kind: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidDensity { reason: &'static str },

    #[error("{name} = {value} lies outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("at least {min} nodes required, got {n}")]
    TooFewNodes { n: u64, min: u64 },

    #[error("purification scheme 1 needs at least one step, got {s}")]
    TooFewSteps { s: u32 },

    #[error("target fidelity {target} cannot be reached")]
    UnreachableTarget { target: f64 },

    #[error("estimator carries no phase information: {reason}")]
    NoInformation { reason: &'static str },

    #[error("precision undefined at p = {p} with slope {slope}")]
    UndefinedPrecision { p: f64, slope: f64 },

    #[error("inconsistent noise description: {reason}")]
    InconsistentNoise { reason: &'static str },

    #[error("scan range {from}..={to} must satisfy 2 <= from <= to <= {max}")]
    BadScanRange { from: u64, to: u64, max: u64 },

    #[error("drew a zero-probability measurement branch")]
    ImpossibleBranch,
}
