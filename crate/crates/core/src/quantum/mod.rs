//! Exact state representations for small qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis index: for three qubits the
//! basis label |q0 q1 q2> sits at index (q0 << 2) | (q1 << 1) | q2, so the
//! amplitudes of a two-qubit state are ordered |00>, |01>, |10>, |11>.

mod density;
mod statevector;

pub use density::DensityMatrix;
pub use statevector::StateVector;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default qubit cap for pure states (2^20 amplitudes, 16 MiB).
pub const STATEVECTOR_QUBIT_CAP: usize = 20;

/// Default qubit cap for density matrices (2^8 x 2^8 entries, 1 MiB).
pub const DENSITY_QUBIT_CAP: usize = 8;

/// Absolute guard on density-matrix growth through tensor products (64 MiB).
/// Intermediate protocol states may exceed [`DENSITY_QUBIT_CAP`] by one
/// qubit; nothing is allowed past this bound.
pub const DENSITY_QUBIT_HARD_CAP: usize = 11;

/// Tolerance for norm, trace, and Hermiticity checks.
pub(crate) const CHECK_TOL: f64 = 1e-12;

/// How far an eigenvalue of a density matrix may dip below zero before the
/// state is rejected.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Result of a projective measurement of one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<S> {
    /// Measured bit, 0 or 1.
    pub bit: u8,
    /// Renormalized state conditioned on `bit`, same register size.
    pub post_state: S,
}

/// Single-qubit gate matrix, row major.
pub type Gate1 = [[Complex64; 2]; 2];

/// Hadamard gate, (|0><0| - |1><1| + |0><1| + |1><0|) / sqrt(2).
pub fn hadamard() -> Gate1 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Phase shift: |0> is untouched, |1> picks up e^{i angle}.
pub fn phase_shift(angle: f64) -> Gate1 {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::new(1.0, 0.0), zero],
        [zero, Complex64::from_polar(1.0, angle)],
    ]
}

/// Bit flip (sigma_x).
pub fn pauli_x() -> Gate1 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[zero, one], [one, zero]]
}

pub(crate) fn check_register(kind: &'static str, n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::EmptyRegister);
    }
    if n_qubits > cap {
        return Err(Error::CapExceeded {
            kind,
            requested: n_qubits,
            cap,
        });
    }
    Ok(())
}

/// Bit mask selecting `qubit` inside an `n_qubits`-wide basis index.
pub(crate) fn mask_for(qubit: usize, n_qubits: usize) -> Result<usize> {
    if qubit >= n_qubits {
        return Err(Error::QubitOutOfRange { qubit, n_qubits });
    }
    Ok(1usize << (n_qubits - 1 - qubit))
}

pub(crate) fn check_bit(bit: u8) -> Result<()> {
    if bit > 1 {
        return Err(Error::OutOfRange {
            name: "bit",
            value: f64::from(bit),
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Splits a basis index at bit position `pos` (counted from the least
/// significant end) and re-inserts `bit` there, growing the index by one bit.
pub(crate) fn insert_bit(reduced: usize, pos: usize, bit: usize) -> usize {
    let low = reduced & ((1usize << pos) - 1);
    let high = reduced >> pos;
    (high << (pos + 1)) | (bit << pos) | low
}
