//! Sampled end-to-end validation of the closed-form precision claims.
//!
//! A virtual experiment repeats one estimation round many times, counts
//! successes, and inverts the fringe model to produce a phase estimate.
//! Replicating that experiment with independent seeds yields an
//! empirical spread of estimates to hold against the analytic precision.
//!
//! The quantum part of each round is identical across repetitions, so
//! the success probability is computed once per configuration through
//! the exact state pipeline and repetitions sample from it; the recorded
//! node bits are drawn uniformly within the sampled outcome's parity
//! class, which is their exact conditional law for every noise model
//! here.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimation::{
    epsilon_from_repetitions, fringe_contrast, simulate_success_probability, success_from_bits,
    NoiseSpec, Scenario, ScenarioKind,
};

/// One recorded estimation round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub repetition_index: u64,
    /// Measurement bit reported by each node.
    pub node_bits: Vec<u8>,
    /// Success per the fringe convention: bit 1 at the reporting node,
    /// or odd parity of all bits.
    pub success: bool,
}

/// Empirical spread of phase estimates against the analytic precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionReport {
    pub replications: u32,
    pub empirical_sigma: f64,
    pub analytic_epsilon: f64,
    pub relative_gap: f64,
}

/// Samples `repetitions` estimation rounds.
pub fn run_repetitions<R: Rng + ?Sized>(
    scenario: &Scenario,
    noise: &NoiseSpec,
    repetitions: u64,
    rng: &mut R,
) -> Result<Vec<TrialRecord>> {
    if repetitions == 0 {
        return Err(Error::OutOfRange {
            name: "repetitions",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let p = simulate_success_probability(scenario, noise)?;
    let n = scenario.n();
    let mut records = Vec::with_capacity(repetitions as usize);
    for repetition_index in 0..repetitions {
        let node_bits = match scenario.kind() {
            // Independent interferometers: every node's bit is its own
            // Bernoulli draw.
            ScenarioKind::Disentangled => {
                (0..n).map(|_| u8::from(rng.gen::<f64>() < p)).collect::<Vec<u8>>()
            }
            // One shared state: the parity is the physical outcome, the
            // bit pattern is uniform within that parity class.
            ScenarioKind::Entangled => {
                let odd = rng.gen::<f64>() < p;
                let mut bits: Vec<u8> =
                    (0..n - 1).map(|_| u8::from(rng.gen::<bool>())).collect();
                let partial: u8 = bits.iter().fold(0, |acc, b| acc ^ b);
                bits.push(partial ^ u8::from(odd));
                bits
            }
        };
        let success = success_from_bits(scenario.kind(), &node_bits)?;
        records.push(TrialRecord { repetition_index, node_bits, success });
    }
    Ok(records)
}

/// Inverts the fringe model on its monotone branch: given a success
/// frequency, returns the phase that would produce it. The frequency is
/// clamped into the fringe's attainable band first, so sampling noise at
/// the band edge cannot break the inversion.
pub fn estimate_phase(
    success_count: u64,
    samples: u64,
    scenario: &Scenario,
    noise: &NoiseSpec,
) -> Result<f64> {
    if samples == 0 || success_count > samples {
        return Err(Error::OutOfRange {
            name: "success count",
            value: success_count as f64,
            min: 0.0,
            max: samples as f64,
        });
    }
    let contrast = fringe_contrast(scenario.kind(), scenario.n(), noise)?;
    if contrast == 0.0 {
        return Err(Error::NoInformation {
            reason: "a flat fringe cannot be inverted",
        });
    }
    let p_hat = success_count as f64 / samples as f64;
    let cosine = ((1.0 - 2.0 * p_hat) / contrast).clamp(-1.0, 1.0);
    let periods = match scenario.kind() {
        ScenarioKind::Disentangled => 1.0,
        ScenarioKind::Entangled => scenario.n() as f64,
    };
    Ok(scenario.phi_ref() + cosine.acos() / periods)
}

/// Deterministic per-replication seed stream: splitmix64 of the master
/// seed advanced by the stream index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Replicates the full experiment and compares the spread of phase
/// estimates to the analytic precision at this repetition budget.
///
/// Disentangled replications pool every node's bit (n independent
/// samples per round); entangled ones count one parity outcome per
/// round.
pub fn empirical_precision(
    scenario: &Scenario,
    noise: &NoiseSpec,
    repetitions: u64,
    replications: u32,
    master_seed: u64,
) -> Result<PrecisionReport> {
    if replications < 30 {
        return Err(Error::OutOfRange {
            name: "replications",
            value: f64::from(replications),
            min: 30.0,
            max: f64::INFINITY,
        });
    }
    let analytic_epsilon =
        epsilon_from_repetitions(scenario.kind(), scenario.n(), noise, repetitions)?;
    let mut estimates = Vec::with_capacity(replications as usize);
    for index in 0..u64::from(replications) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, index));
        let records = run_repetitions(scenario, noise, repetitions, &mut rng)?;
        let (successes, samples) = match scenario.kind() {
            ScenarioKind::Disentangled => {
                let ones: u64 = records
                    .iter()
                    .flat_map(|r| r.node_bits.iter())
                    .map(|&b| u64::from(b))
                    .sum();
                (ones, repetitions * scenario.n() as u64)
            }
            ScenarioKind::Entangled => {
                (records.iter().filter(|r| r.success).count() as u64, repetitions)
            }
        };
        estimates.push(estimate_phase(successes, samples, scenario, noise)?);
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let variance = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (estimates.len() - 1) as f64;
    let empirical_sigma = variance.sqrt();
    Ok(PrecisionReport {
        replications,
        empirical_sigma,
        analytic_epsilon,
        relative_gap: (empirical_sigma - analytic_epsilon).abs() / analytic_epsilon,
    })
}
