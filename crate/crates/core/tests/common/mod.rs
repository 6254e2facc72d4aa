//! Shared oracle machinery for the integration suites: a dense matrix
//! toolkit built independently of the library's simulators, plus the
//! statistics helpers the sampling tests share.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix with no simulator smarts; every
/// operation is the textbook formula so it can referee the library.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub elems: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, elems: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.elems[i * dim + i] = ONE;
        }
        m
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.elems[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.elems[row * self.dim + col] = value;
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.at(i1, j1);
                for i2 in 0..other.dim {
                    for j2 in 0..other.dim {
                        out.set(
                            i1 * other.dim + i2,
                            j1 * other.dim + j2,
                            a * other.at(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "oracle matmul dims");
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.at(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..self.dim {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "oracle mul_vec dims");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    /// U rho U^dagger.
    pub fn conjugate(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.dagger())
    }

    pub fn scale(&self, w: f64) -> Self {
        Self {
            dim: self.dim,
            elems: self.elems.iter().map(|e| e * w).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "oracle add dims");
        Self {
            dim: self.dim,
            elems: self
                .elems
                .iter()
                .zip(&other.elems)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    /// <psi| M |psi>.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let mv = self.mul_vec(psi);
        psi.iter().zip(mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn outer(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.set(i, j, psi[i] * psi[j].conj());
            }
        }
        out
    }
}

pub fn gate_h() -> Dense {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Dense {
        dim: 2,
        elems: vec![
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    }
}

pub fn gate_x() -> Dense {
    Dense { dim: 2, elems: vec![ZERO, ONE, ONE, ZERO] }
}

pub fn gate_phase(angle: f64) -> Dense {
    Dense {
        dim: 2,
        elems: vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, angle)],
    }
}

/// Single-qubit gate embedded in an n-qubit identity. Qubit 0 is the
/// leftmost tensor factor (most significant basis bit), matching the
/// library's convention.
pub fn embed1(n: usize, qubit: usize, gate: &Dense) -> Dense {
    let mut out = Dense::identity(1);
    for q in 0..n {
        let factor = if q == qubit { gate.clone() } else { Dense::identity(2) };
        out = out.kron(&factor);
    }
    out
}

/// Dense CNOT permutation on n qubits.
pub fn cnot_dense(n: usize, control: usize, target: usize) -> Dense {
    let dim = 1usize << n;
    let cm = 1usize << (n - 1 - control);
    let tm = 1usize << (n - 1 - target);
    let mut out = Dense::zeros(dim);
    for col in 0..dim {
        let row = if col & cm != 0 { col ^ tm } else { col };
        out.set(row, col, ONE);
    }
    out
}

/// Projector |bit><bit| on one qubit, embedded in n qubits.
pub fn projector(n: usize, qubit: usize, bit: u8) -> Dense {
    let dim = 1usize << n;
    let mask = 1usize << (n - 1 - qubit);
    let want = if bit == 1 { mask } else { 0 };
    let mut out = Dense::zeros(dim);
    for i in 0..dim {
        if i & mask == want {
            out.set(i, i, ONE);
        }
    }
    out
}

/// Partial trace over one qubit of an n-qubit density matrix.
pub fn trace_out_dense(rho: &Dense, n: usize, qubit: usize) -> Dense {
    let pos = n - 1 - qubit;
    let rdim = rho.dim >> 1;
    let insert = |idx: usize, bit: usize| -> usize {
        let high = (idx >> pos) << (pos + 1);
        let low = idx & ((1 << pos) - 1);
        high | (bit << pos) | low
    };
    let mut out = Dense::zeros(rdim);
    for b in 0..2usize {
        for r in 0..rdim {
            for c in 0..rdim {
                let v = out.at(r, c) + rho.at(insert(r, b), insert(c, b));
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Random normalized state on n qubits.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

/// Pearson chi-square statistic for a two-bin (success/failure) sample
/// against probability `p`. One degree of freedom; the 0.001
/// significance cutoff is [`CHI2_CRIT_1DOF`].
pub fn chi_square_stat(successes: u64, total: u64, p: f64) -> f64 {
    let expected_s = total as f64 * p;
    let expected_f = total as f64 * (1.0 - p);
    let ds = successes as f64 - expected_s;
    let df = (total - successes) as f64 - expected_f;
    ds * ds / expected_s + df * df / expected_f
}

pub const CHI2_CRIT_1DOF: f64 = 10.828;

/// Two-sided binomial z-bound at significance 0.001.
pub const Z_CRIT: f64 = 3.29;
