//! Dense pure-state simulation.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

use super::{
    check_bit, check_register, hadamard, mask_for, pauli_x, phase_shift, Gate1, Outcome,
    CHECK_TOL, STATEVECTOR_QUBIT_CAP,
};

/// Pure state of an n-qubit register, stored as all 2^n amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state |index> on `n_qubits` qubits.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        Self::basis_state_with_cap(n_qubits, index, STATEVECTOR_QUBIT_CAP)
    }

    /// Like [`StateVector::basis_state`] with an explicit qubit cap, for
    /// callers that accept the memory cost of a larger register.
    pub fn basis_state_with_cap(n_qubits: usize, index: usize, cap: usize) -> Result<Self> {
        check_register("state vector", n_qubits, cap)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Builds a state from raw amplitudes. The vector must hold exactly
    /// 2^`n_qubits` entries with unit norm within 1e-12.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_register("state vector", n_qubits, STATEVECTOR_QUBIT_CAP)?;
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amps.len(),
            });
        }
        let state = Self { n_qubits, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > CHECK_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Result<Complex64> {
        self.amps
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                dim: self.amps.len(),
            })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Tensor product `self (x) other`; `other`'s qubits are appended after
    /// this register's qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_register("state vector tensor product", n, STATEVECTOR_QUBIT_CAP)?;
        let mut amps = Vec::with_capacity(1usize << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Applies an arbitrary single-qubit unitary to `qubit`.
    pub fn apply_single_qubit(&mut self, qubit: usize, gate: &Gate1) -> Result<()> {
        let mask = mask_for(qubit, self.n_qubits)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = gate[0][0] * a + gate[0][1] * b;
                self.amps[j] = gate[1][0] * a + gate[1][1] * b;
            }
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.apply_single_qubit(qubit, &hadamard())
    }

    /// Multiplies the |1> component of `qubit` by e^{i angle}.
    pub fn apply_phase(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.apply_single_qubit(qubit, &phase_shift(angle))
    }

    pub fn apply_not(&mut self, qubit: usize) -> Result<()> {
        self.apply_single_qubit(qubit, &pauli_x())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        if control == target {
            return Err(Error::DuplicateQubit { qubit: control });
        }
        let cm = mask_for(control, self.n_qubits)?;
        let tm = mask_for(target, self.n_qubits)?;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
        Ok(())
    }

    /// Probability of reading `bit` when measuring `qubit`.
    pub fn prob_of(&self, qubit: usize, bit: u8) -> Result<f64> {
        check_bit(bit)?;
        let mask = mask_for(qubit, self.n_qubits)?;
        let want = if bit == 1 { mask } else { 0 };
        let p = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>();
        Ok(p)
    }

    /// Renormalized state conditioned on reading `bit` at `qubit`; the
    /// register keeps its size.
    pub fn project(&self, qubit: usize, bit: u8) -> Result<Self> {
        check_bit(bit)?;
        let mask = mask_for(qubit, self.n_qubits)?;
        let want = if bit == 1 { mask } else { 0 };
        let weight = self.prob_of(qubit, bit)?;
        if weight <= 0.0 {
            return Err(Error::ImpossibleBranch);
        }
        let scale = weight.sqrt().recip();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i & mask == want {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Projects `qubit` onto `bit` and removes it from the register.
    /// Returns the branch probability together with the reduced state.
    pub fn project_out(&self, qubit: usize, bit: u8) -> Result<(f64, Self)> {
        check_bit(bit)?;
        if self.n_qubits < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: self.n_qubits,
            });
        }
        mask_for(qubit, self.n_qubits)?;
        let pos = self.n_qubits - 1 - qubit;
        let weight = self.prob_of(qubit, bit)?;
        if weight <= 0.0 {
            return Err(Error::ImpossibleBranch);
        }
        let scale = weight.sqrt().recip();
        let reduced_dim = self.amps.len() >> 1;
        let mut amps = Vec::with_capacity(reduced_dim);
        for j in 0..reduced_dim {
            let full = super::insert_bit(j, pos, usize::from(bit));
            amps.push(self.amps[full] * scale);
        }
        Ok((
            weight,
            Self {
                n_qubits: self.n_qubits - 1,
                amps,
            },
        ))
    }

    /// Measures `qubit` in the computational basis, sampling the branch from
    /// `rng`. The returned post state keeps the register size.
    pub fn measure_qubit<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        rng: &mut R,
    ) -> Result<Outcome<Self>> {
        let p0 = self.prob_of(qubit, 0)?;
        let bit = if rng.gen::<f64>() < p0 { 0 } else { 1 };
        let post_state = self.project(qubit, bit)?;
        Ok(Outcome { bit, post_state })
    }

    /// Probability that the XOR of all qubits reads 1.
    pub fn odd_parity_probability(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() % 2 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Overlap |<self|other>|^2 between two pure states.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                actual: other.amps.len(),
            });
        }
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.norm_sqr())
    }
}
