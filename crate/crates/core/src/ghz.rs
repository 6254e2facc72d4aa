//! GHZ distribution over a star network by entanglement fan-out.
//!
//! One central node shares a two-qubit entangled pair with each of the
//! n - 1 outer nodes. The central node keeps one half of each pair, uses
//! the first half as a hub, and fans its value out with CNOTs onto its
//! remaining halves. Each of those targets is measured; an outcome of 1
//! costs one classical message telling the matching outer node to flip.
//! Afterwards the hub plus the n - 1 outer qubits hold a shared GHZ
//! state, and every node imprints a local phase on its own qubit.
//!
//! States are processed one pair at a time. An operation on one pair
//! commutes with everything acting on the others, so consuming pair k
//! fully (tensor in, CNOT, measure, flip) before touching pair k + 1
//! yields exactly the same state as handling all pairs jointly while the
//! register in flight stays at n + 1 qubits instead of 2(n - 1). Mixed
//! runs fold both measurement branches back together with their Born
//! weights, which is the same channel as measure-and-flip averaged over
//! records, so the returned density matrix is exact rather than sampled.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{
    DensityMatrix, StateVector, DENSITY_QUBIT_CAP, STATEVECTOR_QUBIT_CAP,
};

/// Quality of the raw pairs the central node shares with outer nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairSource {
    /// Perfect |00> + |11> pairs; the run stays pure.
    Ideal,
    /// Werner pairs with the given overlap with the ideal pair.
    Werner { fidelity: f64 },
}

/// State shared by the n nodes after the protocol finishes.
#[derive(Debug, Clone)]
pub enum FinalState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// Outcome of one distribution run.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub final_state: FinalState,
    /// Classical flip messages sent to outer nodes (one per 1-outcome).
    pub corrections_sent: u32,
    /// Entangled pairs consumed, always n - 1.
    pub pairs_consumed: u32,
    /// Overlap with the ideal phase-tagged GHZ state.
    pub fidelity_vs_ideal: f64,
}

/// Resource count for one distribution round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceTally {
    pub pairs: u64,
    pub classical_messages: u64,
    pub total_cost: f64,
}

/// The target state: (|0...0> + e^{-i n phase} |1...1>) / sqrt(2) on n
/// qubits. Each node contributes a local rotation by -`phase`.
pub fn prepare_ghz_ideal(n: usize, phase: f64) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::TooFewNodes { n: n as u64, min: 2 });
    }
    let dim = 1usize << n.min(STATEVECTOR_QUBIT_CAP);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] =
        Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -(n as f64) * phase);
    StateVector::from_amplitudes(n, amps)
}

/// Runs the distribution protocol on n nodes.
///
/// Ideal pairs give a pure run with measurement outcomes sampled from
/// `rng` (supported up to n = 19, one spare qubit under the register
/// cap). Werner pairs give an exact mixed run (up to n = 8); there `rng`
/// only samples the reported correction count, never the state.
pub fn run_distribution<R: Rng + ?Sized>(
    n: usize,
    source: PairSource,
    phase: f64,
    rng: &mut R,
) -> Result<ProtocolResult> {
    if n < 2 {
        return Err(Error::TooFewNodes { n: n as u64, min: 2 });
    }
    match source {
        PairSource::Ideal => {
            if n + 1 > STATEVECTOR_QUBIT_CAP {
                return Err(Error::CapExceeded {
                    kind: "ideal protocol nodes",
                    requested: n,
                    cap: STATEVECTOR_QUBIT_CAP - 1,
                });
            }
            let (state, corrections) = run_pure(n, phase, |_, p0| {
                u8::from(rng.gen::<f64>() >= p0)
            })?;
            let ideal = prepare_ghz_ideal(n, phase)?;
            let fidelity = state.fidelity(&ideal)?;
            Ok(ProtocolResult {
                final_state: FinalState::Pure(state),
                corrections_sent: corrections,
                pairs_consumed: (n - 1) as u32,
                fidelity_vs_ideal: fidelity,
            })
        }
        PairSource::Werner { fidelity } => {
            if n > DENSITY_QUBIT_CAP {
                return Err(Error::CapExceeded {
                    kind: "noisy protocol nodes",
                    requested: n,
                    cap: DENSITY_QUBIT_CAP,
                });
            }
            let (state, corrections) = run_mixed(n, fidelity, phase, rng)?;
            let ideal = prepare_ghz_ideal(n, phase)?;
            let overlap = state.fidelity(&ideal)?;
            Ok(ProtocolResult {
                final_state: FinalState::Mixed(state),
                corrections_sent: corrections,
                pairs_consumed: (n - 1) as u32,
                fidelity_vs_ideal: overlap,
            })
        }
    }
}

/// Pure run with the n - 2 central measurement outcomes pinned to
/// `outcomes`, covering one branch of the protocol exactly.
pub fn run_ideal_branch(n: usize, phase: f64, outcomes: &[u8]) -> Result<ProtocolResult> {
    if n < 2 {
        return Err(Error::TooFewNodes { n: n as u64, min: 2 });
    }
    if n + 1 > STATEVECTOR_QUBIT_CAP {
        return Err(Error::CapExceeded {
            kind: "ideal protocol nodes",
            requested: n,
            cap: STATEVECTOR_QUBIT_CAP - 1,
        });
    }
    if outcomes.len() != n - 2 {
        return Err(Error::DimensionMismatch {
            expected: n - 2,
            actual: outcomes.len(),
        });
    }
    for &bit in outcomes {
        crate::quantum::check_bit(bit)?;
    }
    let (state, corrections) = run_pure(n, phase, |step, _| outcomes[step])?;
    let ideal = prepare_ghz_ideal(n, phase)?;
    let fidelity = state.fidelity(&ideal)?;
    Ok(ProtocolResult {
        final_state: FinalState::Pure(state),
        corrections_sent: corrections,
        pairs_consumed: (n - 1) as u32,
        fidelity_vs_ideal: fidelity,
    })
}

/// Pairs consumed, classical messages, and their combined cost for one
/// distribution round: n - 1 pairs at `pair_cost` plus n - 2 messages at
/// `message_cost`.
pub fn precomputation_cost(n: u64, pair_cost: f64, message_cost: f64) -> Result<ResourceTally> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let pairs = n - 1;
    let classical_messages = n - 2;
    Ok(ResourceTally {
        pairs,
        classical_messages,
        total_cost: pairs as f64 * pair_cost + classical_messages as f64 * message_cost,
    })
}

fn epr_pair() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = vec![
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
    ];
    StateVector::from_amplitudes(2, amps).expect("pair amplitudes are normalized")
}

/// Shared pure-state pipeline. `choose` picks the measurement outcome for
/// step k (0-based) given the probability of reading 0; the register holds
/// [hub, outer_1 .. outer_k, incoming pair] while pair k + 2 is in flight.
fn run_pure<F>(n: usize, phase: f64, mut choose: F) -> Result<(StateVector, u32)>
where
    F: FnMut(usize, f64) -> u8,
{
    let mut state = epr_pair();
    let mut corrections = 0u32;
    for step in 0..n - 2 {
        let measured = state.n_qubits();
        state = state.tensor(&epr_pair())?;
        state.apply_cnot(0, measured)?;
        let p0 = state.prob_of(measured, 0)?;
        let bit = choose(step, p0);
        let (_, mut next) = state.project_out(measured, bit)?;
        if bit == 1 {
            next.apply_not(measured)?;
            corrections += 1;
        }
        state = next;
    }
    for qubit in 0..n {
        state.apply_phase(qubit, -phase)?;
    }
    Ok((state, corrections))
}

/// Mixed-state pipeline over Werner pairs. Each measurement is folded
/// back as the measure-and-flip channel, so the result is the exact
/// record-averaged state; `rng` samples a correction count with the same
/// distribution a selective run would produce.
fn run_mixed<R: Rng + ?Sized>(
    n: usize,
    pair_fidelity: f64,
    phase: f64,
    rng: &mut R,
) -> Result<(DensityMatrix, u32)> {
    let pair = DensityMatrix::werner_pair(pair_fidelity)?;
    let mut state = pair.clone();
    let mut corrections = 0u32;
    for _ in 0..n - 2 {
        let measured = state.n_qubits();
        let mut grown = state.tensor(&pair)?;
        grown.apply_cnot(0, measured)?;
        let p0 = grown.prob_of(measured, 0)?;
        let p1 = grown.prob_of(measured, 1)?;
        if rng.gen::<f64>() >= p0 {
            corrections += 1;
        }
        let mut branches = Vec::with_capacity(2);
        if p0 > 1e-14 {
            let (_, kept) = grown.project_out(measured, 0)?;
            branches.push((p0, kept));
        }
        if p1 > 1e-14 {
            let (_, mut flipped) = grown.project_out(measured, 1)?;
            flipped.apply_not(measured)?;
            branches.push((p1, flipped));
        }
        let parts: Vec<(f64, &DensityMatrix)> =
            branches.iter().map(|(w, s)| (*w, s)).collect();
        state = DensityMatrix::mixture(&parts)?;
    }
    for qubit in 0..n {
        state.apply_phase(qubit, -phase)?;
    }
    Ok((state, corrections))
}
