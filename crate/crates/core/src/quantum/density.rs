//! Dense density-matrix simulation, exact up to floating-point roundoff.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

use super::{
    check_bit, check_register, hadamard, insert_bit, mask_for, pauli_x, phase_shift, Gate1,
    Outcome, StateVector, CHECK_TOL, DENSITY_QUBIT_CAP, DENSITY_QUBIT_HARD_CAP, POSITIVITY_TOL,
};

/// Mixed state of an n-qubit register, stored row major as all 2^n x 2^n
/// entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    dim: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    /// |psi><psi| for a pure state.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_register("density matrix", psi.n_qubits(), DENSITY_QUBIT_CAP)?;
        let dim = psi.dim();
        let amps = psi.amplitudes();
        let mut elems = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                elems.push(amps[i] * amps[j].conj());
            }
        }
        Ok(Self {
            n_qubits: psi.n_qubits(),
            dim,
            elems,
        })
    }

    /// Identity / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register("density matrix", n_qubits, DENSITY_QUBIT_CAP)?;
        let dim = 1usize << n_qubits;
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        let mut elems = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            elems[i * dim + i] = w;
        }
        Ok(Self {
            n_qubits,
            dim,
            elems,
        })
    }

    /// Two-qubit Werner state: x |Phi+><Phi+| + (1-x) I/4 with x = (4F-1)/3,
    /// so that the overlap with |Phi+> is exactly `fidelity`.
    pub fn werner_pair(fidelity: f64) -> Result<Self> {
        if !(0.25..=1.0).contains(&fidelity) {
            return Err(Error::OutOfRange {
                name: "pair fidelity",
                value: fidelity,
                min: 0.25,
                max: 1.0,
            });
        }
        let x = (4.0 * fidelity - 1.0) / 3.0;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = StateVector::from_amplitudes(
            2,
            vec![
                Complex64::new(h, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(h, 0.0),
            ],
        )?;
        let pure = Self::from_pure(&phi_plus)?;
        let mixed = Self::maximally_mixed(2)?;
        Self::mixture(&[(x, &pure), (1.0 - x, &mixed)])
    }

    /// x |psi><psi| + (1-x) I/2^n: the pure state contaminated by white noise.
    pub fn global_mixture(psi: &StateVector, x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange {
                name: "mixture weight",
                value: x,
                min: 0.0,
                max: 1.0,
            });
        }
        let pure = Self::from_pure(psi)?;
        let mixed = Self::maximally_mixed(psi.n_qubits())?;
        Self::mixture(&[(x, &pure), (1.0 - x, &mixed)])
    }

    /// Convex combination of equally sized states. Weights must be
    /// nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::InvalidDensity {
            reason: "mixture of zero states",
        })?;
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDensity {
                reason: "mixture weights do not sum to 1",
            });
        }
        let mut elems = vec![Complex64::new(0.0, 0.0); first.elems.len()];
        for (w, part) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidDensity {
                    reason: "negative mixture weight",
                });
            }
            if part.dim != first.dim {
                return Err(Error::DimensionMismatch {
                    expected: first.dim,
                    actual: part.dim,
                });
            }
            for (dst, src) in elems.iter_mut().zip(&part.elems) {
                *dst += src * *w;
            }
        }
        Ok(Self {
            n_qubits: first.n_qubits,
            dim: first.dim,
            elems,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, row: usize, col: usize) -> Result<Complex64> {
        if row >= self.dim || col >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: row.max(col),
                dim: self.dim,
            });
        }
        Ok(self.elems[row * self.dim + col])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.elems[i * self.dim + i]).sum()
    }

    /// Tensor product `self (x) other`; `other`'s qubits are appended after
    /// this register's qubits. Guarded by the hard cap, not the default one,
    /// so protocol intermediates may exceed [`DENSITY_QUBIT_CAP`] by a qubit.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_register("density matrix tensor product", n, DENSITY_QUBIT_HARD_CAP)?;
        let dim = self.dim * other.dim;
        let mut elems = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.elems[i1 * self.dim + j1];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.dim {
                    let row = i1 * other.dim + i2;
                    for j2 in 0..other.dim {
                        let col = j1 * other.dim + j2;
                        elems[row * dim + col] = a * other.elems[i2 * other.dim + j2];
                    }
                }
            }
        }
        Ok(Self {
            n_qubits: n,
            dim,
            elems,
        })
    }

    /// Conjugates the state by a single-qubit unitary: rho -> U rho U^dag.
    pub fn apply_single_qubit(&mut self, qubit: usize, gate: &Gate1) -> Result<()> {
        let mask = mask_for(qubit, self.n_qubits)?;
        let dim = self.dim;
        // Left factor U, acting on row pairs within each column.
        for col in 0..dim {
            for i in 0..dim {
                if i & mask == 0 {
                    let j = i | mask;
                    let a = self.elems[i * dim + col];
                    let b = self.elems[j * dim + col];
                    self.elems[i * dim + col] = gate[0][0] * a + gate[0][1] * b;
                    self.elems[j * dim + col] = gate[1][0] * a + gate[1][1] * b;
                }
            }
        }
        // Right factor U^dag, acting on column pairs within each row.
        for row in 0..dim {
            for i in 0..dim {
                if i & mask == 0 {
                    let j = i | mask;
                    let a = self.elems[row * dim + i];
                    let b = self.elems[row * dim + j];
                    self.elems[row * dim + i] = a * gate[0][0].conj() + b * gate[0][1].conj();
                    self.elems[row * dim + j] = a * gate[1][0].conj() + b * gate[1][1].conj();
                }
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
        let dim = self.dim;
        // CNOT is a self-inverse permutation; conjugate rows, then columns.
        for i in 0..dim {
            if i & cm != 0 && i & tm == 0 {
                let j = i | tm;
                for col in 0..dim {
                    self.elems.swap(i * dim + col, j * dim + col);
                }
            }
        }
        for i in 0..dim {
            if i & cm != 0 && i & tm == 0 {
                let j = i | tm;
                for row in 0..dim {
                    self.elems.swap(row * dim + i, row * dim + j);
                }
            }
        }
        Ok(())
    }

    /// Phase-damping channel on one qubit: every element whose row and column
    /// disagree on `qubit` is scaled by `decay` in [0, 1].
    pub fn dephase(&mut self, qubit: usize, decay: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&decay) {
            return Err(Error::OutOfRange {
                name: "decay",
                value: decay,
                min: 0.0,
                max: 1.0,
            });
        }
        let mask = mask_for(qubit, self.n_qubits)?;
        for row in 0..self.dim {
            for col in 0..self.dim {
                if (row & mask) != (col & mask) {
                    self.elems[row * self.dim + col] *= decay;
                }
            }
        }
        Ok(())
    }

    /// Probability of reading `bit` when measuring `qubit`.
    pub fn prob_of(&self, qubit: usize, bit: u8) -> Result<f64> {
        check_bit(bit)?;
        let mask = mask_for(qubit, self.n_qubits)?;
        let want = if bit == 1 { mask } else { 0 };
        let p = (0..self.dim)
            .filter(|i| i & mask == want)
            .map(|i| self.elems[i * self.dim + i].re)
            .sum::<f64>();
        Ok(p.max(0.0))
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
        let scale = weight.recip();
        let mut elems = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for row in 0..self.dim {
            if row & mask != want {
                continue;
            }
            for col in 0..self.dim {
                if col & mask == want {
                    elems[row * self.dim + col] = self.elems[row * self.dim + col] * scale;
                }
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            dim: self.dim,
            elems,
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
        let scale = weight.recip();
        let rdim = self.dim >> 1;
        let mut elems = Vec::with_capacity(rdim * rdim);
        for r in 0..rdim {
            let row = insert_bit(r, pos, usize::from(bit));
            for c in 0..rdim {
                let col = insert_bit(c, pos, usize::from(bit));
                elems.push(self.elems[row * self.dim + col] * scale);
            }
        }
        Ok((
            weight,
            Self {
                n_qubits: self.n_qubits - 1,
                dim: rdim,
                elems,
            },
        ))
    }

    /// Partial trace over one qubit.
    pub fn trace_out(&self, qubit: usize) -> Result<Self> {
        if self.n_qubits < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: self.n_qubits,
            });
        }
        mask_for(qubit, self.n_qubits)?;
        let pos = self.n_qubits - 1 - qubit;
        let rdim = self.dim >> 1;
        let mut elems = vec![Complex64::new(0.0, 0.0); rdim * rdim];
        for b in 0..2usize {
            for r in 0..rdim {
                let row = insert_bit(r, pos, b);
                for c in 0..rdim {
                    let col = insert_bit(c, pos, b);
                    elems[r * rdim + c] += self.elems[row * self.dim + col];
                }
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits - 1,
            dim: rdim,
            elems,
        })
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
        (0..self.dim)
            .filter(|i| i.count_ones() % 2 == 1)
            .map(|i| self.elems[i * self.dim + i].re)
            .sum::<f64>()
            .max(0.0)
    }

    /// <psi| rho |psi>, the overlap with a pure reference state.
    pub fn fidelity(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: psi.dim(),
            });
        }
        let amps = psi.amplitudes();
        let mut value = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                row += self.elems[i * self.dim + j] * amps[j];
            }
            value += amps[i].conj() * row;
        }
        debug_assert!(value.im.abs() < 1e-9, "overlap should be real, got {value}");
        Ok(value.re)
    }

    /// Smallest eigenvalue; a valid state never dips below -1e-10.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_fn(self.dim, self.dim, |r, c| self.elems[r * self.dim + c]);
        m.symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks trace, Hermiticity, and positivity.
    pub fn validate(&self) -> Result<()> {
        if (self.trace().re - 1.0).abs() > CHECK_TOL || self.trace().im.abs() > CHECK_TOL {
            return Err(Error::InvalidDensity {
                reason: "trace deviates from 1",
            });
        }
        for row in 0..self.dim {
            for col in row..self.dim {
                let a = self.elems[row * self.dim + col];
                let b = self.elems[col * self.dim + row];
                if (a - b.conj()).norm() > CHECK_TOL {
                    return Err(Error::InvalidDensity {
                        reason: "not Hermitian",
                    });
                }
            }
        }
        if self.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-12;

    fn bell_pair() -> StateVector {
        let h = FRAC_1_SQRT_2;
        StateVector::from_amplitudes(
            2,
            vec![
                Complex64::new(h, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(h, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn werner_pair_has_requested_overlap() {
        let rho = DensityMatrix::werner_pair(0.9).unwrap();
        rho.validate().unwrap();
        assert!((rho.fidelity(&bell_pair()).unwrap() - 0.9).abs() < TOL);
        // Mixing weight x = (4F - 1)/3 shows up on the off-diagonal corner.
        let x: f64 = (4.0 * 0.9 - 1.0) / 3.0;
        assert!((rho.element(0, 3).unwrap().re - x / 2.0).abs() < TOL);
    }

    #[test]
    fn werner_pair_range_is_enforced() {
        assert!(DensityMatrix::werner_pair(0.2).is_err());
        assert!(DensityMatrix::werner_pair(1.1).is_err());
        let floor = DensityMatrix::werner_pair(0.25).unwrap();
        assert!((floor.fidelity(&bell_pair()).unwrap() - 0.25).abs() < TOL);
    }

    #[test]
    fn global_mixture_interpolates_fidelity() {
        // Three-qubit GHZ contaminated with weight 0.8 keeps overlap
        // 0.8 + 0.2/8 = 0.825.
        let h = FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = Complex64::new(h, 0.0);
        amps[7] = Complex64::new(h, 0.0);
        let ghz = StateVector::from_amplitudes(3, amps).unwrap();
        let rho = DensityMatrix::global_mixture(&ghz, 0.8).unwrap();
        rho.validate().unwrap();
        assert!((rho.fidelity(&ghz).unwrap() - 0.825).abs() < TOL);
        assert!(DensityMatrix::global_mixture(&ghz, 1.5).is_err());
    }

    #[test]
    fn dephase_scales_off_diagonals_only() {
        let mut rho = DensityMatrix::from_pure(&bell_pair()).unwrap();
        let before = rho.clone();
        rho.dephase(0, 1.0).unwrap();
        assert_eq!(rho, before, "decay 1 is the identity channel");

        rho.dephase(0, 0.25).unwrap();
        assert!((rho.element(0, 3).unwrap().re - 0.125).abs() < TOL);
        assert!((rho.element(0, 0).unwrap().re - 0.5).abs() < TOL, "diagonal untouched");
        rho.validate().unwrap();

        let mut full = DensityMatrix::from_pure(&bell_pair()).unwrap();
        full.dephase(1, 0.0).unwrap();
        assert!(full.element(0, 3).unwrap().norm() < TOL, "decay 0 kills coherence");
        assert!(full.dephase(0, 1.5).is_err());
    }

    #[test]
    fn cnot_and_not_act_as_permutations() {
        let mut rho = DensityMatrix::from_pure(&bell_pair()).unwrap();
        rho.apply_cnot(0, 1).unwrap();
        // (|00> + |10>)/sqrt(2): qubit 1 is now definitely 0.
        assert!((rho.prob_of(1, 0).unwrap() - 1.0).abs() < TOL);
        rho.validate().unwrap();

        let mut flipped = DensityMatrix::from_pure(&StateVector::basis_state(2, 0).unwrap()).unwrap();
        flipped.apply_not(0).unwrap();
        assert!((flipped.element(2, 2).unwrap().re - 1.0).abs() < TOL);
    }

    #[test]
    fn project_out_reduces_the_register() {
        let rho = DensityMatrix::from_pure(&bell_pair()).unwrap();
        let (p, reduced) = rho.project_out(0, 1).unwrap();
        assert!((p - 0.5).abs() < TOL);
        assert_eq!(reduced.n_qubits(), 1);
        assert!((reduced.element(1, 1).unwrap().re - 1.0).abs() < TOL);
        reduced.validate().unwrap();
    }

    #[test]
    fn trace_out_of_entangled_pair_is_maximally_mixed() {
        let rho = DensityMatrix::from_pure(&bell_pair()).unwrap();
        let reduced = rho.trace_out(1).unwrap();
        let expected = DensityMatrix::maximally_mixed(1).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let got = reduced.element(r, c).unwrap();
                let want = expected.element(r, c).unwrap();
                assert!((got - want).norm() < TOL, "entry ({r},{c}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn measure_splits_branches_by_born_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = DensityMatrix::werner_pair(0.75).unwrap();
        assert!((rho.prob_of(0, 0).unwrap() - 0.5).abs() < TOL, "marginal is unbiased");
        let out = rho.measure_qubit(0, &mut rng).unwrap();
        out.post_state.validate().unwrap();
        assert!((out.post_state.prob_of(0, out.bit).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn mixture_validates_weights_and_dims() {
        let a = DensityMatrix::maximally_mixed(1).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(DensityMatrix::mixture(&[(0.5, &a), (0.5, &b)]).is_err());
        assert!(DensityMatrix::mixture(&[(0.7, &a), (0.7, &a)]).is_err());
        assert!(DensityMatrix::mixture(&[]).is_err());
        let ok = DensityMatrix::mixture(&[(0.3, &a), (0.7, &a)]).unwrap();
        ok.validate().unwrap();
    }

    #[test]
    fn tensor_respects_the_hard_cap() {
        let a = DensityMatrix::maximally_mixed(6).unwrap();
        let b = DensityMatrix::maximally_mixed(6).unwrap();
        assert!(matches!(
            a.tensor(&b),
            Err(Error::CapExceeded { requested: 12, cap, .. }) if cap == DENSITY_QUBIT_HARD_CAP
        ));
        let small = DensityMatrix::maximally_mixed(2).unwrap();
        let prod = a.tensor(&small).unwrap();
        assert_eq!(prod.n_qubits(), 8);
        assert!((prod.trace().re - 1.0).abs() < TOL);
    }

    #[test]
    fn validity_check_catches_broken_states() {
        let mut rho = DensityMatrix::maximally_mixed(1).unwrap();
        rho.elems[1] = Complex64::new(0.9, 0.0);
        rho.elems[2] = Complex64::new(0.9, 0.0);
        assert_eq!(
            rho.validate(),
            Err(Error::InvalidDensity { reason: "negative eigenvalue" })
        );
        assert!(rho.min_eigenvalue() < -0.1);
    }
}
