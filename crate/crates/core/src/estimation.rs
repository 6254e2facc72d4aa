//! Phase-estimation statistics for the two measurement strategies.
//!
//! A network of n nodes estimates a common phase either independently
//! (each node interferes its own qubit, the disentangled strategy) or
//! collectively (all nodes share one GHZ state, the entangled strategy).
//! Every measurement round reduces to a Bernoulli trial whose success
//! probability traces out a fringe in the phase; the achievable precision
//! follows from the binomial spread divided by the fringe slope. The
//! entangled fringe oscillates n times faster, which is the entire
//! advantage, and noise enters as a contrast loss that must be paid back
//! with extra repetitions.
//!
//! Closed forms here are cross-checked elsewhere against
//! [`simulate_success_probability`], which runs the actual state-level
//! pipeline on the simulators.

use crate::error::{Error, Result};
use crate::ghz::prepare_ghz_ideal;
use crate::quantum::{DensityMatrix, StateVector};

/// Which measurement strategy a round follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Every node runs its own single-qubit interference.
    Disentangled,
    /// All nodes measure one shared GHZ state; success is odd parity.
    Entangled,
}

impl ScenarioKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Disentangled => "disentangled",
            Self::Entangled => "entangled",
        }
    }
}

/// One estimation setting: strategy, network size, true phase, and the
/// reference phase dialed into the interferometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    kind: ScenarioKind,
    n: usize,
    phi: f64,
    phi_ref: f64,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, n: usize, phi: f64, phi_ref: f64) -> Result<Self> {
        let min: usize = match kind {
            ScenarioKind::Disentangled => 1,
            ScenarioKind::Entangled => 2,
        };
        if n < min {
            return Err(Error::TooFewNodes { n: n as u64, min: min as u64 });
        }
        if !phi.is_finite() || !phi_ref.is_finite() {
            return Err(Error::OutOfRange {
                name: "phase",
                value: if phi.is_finite() { phi_ref } else { phi },
                min: f64::NEG_INFINITY,
                max: f64::INFINITY,
            });
        }
        Ok(Self { kind, n, phi, phi_ref })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn phi_ref(&self) -> f64 {
        self.phi_ref
    }

    /// Fringe argument: phi - phi_ref, scaled by n for the entangled
    /// strategy.
    fn fringe_angle(&self) -> f64 {
        let theta = self.phi - self.phi_ref;
        match self.kind {
            ScenarioKind::Disentangled => theta,
            ScenarioKind::Entangled => self.n as f64 * theta,
        }
    }
}

/// Noise model applied to the measured state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Ideal,
    /// GHZ state mixed with white noise; `visibility` is the weight of
    /// the clean component and multiplies the fringe contrast.
    Mixed { visibility: f64 },
    /// Each qubit dephases at `rate` for `duration`; `fidelity` is the
    /// overlap of the distributed state with the ideal one before the
    /// wait begins.
    Dephasing { fidelity: f64, rate: f64, duration: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Ideal => Ok(()),
            Self::Mixed { visibility } => check_unit("visibility", visibility),
            Self::Dephasing { fidelity, rate, duration } => {
                check_unit("state fidelity", fidelity)?;
                check_nonnegative("dephasing rate", rate)?;
                check_nonnegative("wait duration", duration)
            }
        }
    }

    /// Off-diagonal survival factor per qubit, e^{-rate * duration}.
    pub fn coherence_decay(&self) -> f64 {
        match *self {
            Self::Dephasing { rate, duration, .. } => (-rate * duration).exp(),
            _ => 1.0,
        }
    }
}

/// Success probability of one measurement round, by the closed forms.
///
/// Success means reading 1 in the disentangled strategy and odd parity
/// in the entangled one; both fringes then share the shape
/// (1 - contrast * cos(angle)) / 2.
pub fn p_success(scenario: &Scenario, noise: &NoiseSpec) -> Result<f64> {
    let contrast = fringe_contrast(scenario.kind, scenario.n, noise)?;
    Ok(0.5 * (1.0 - contrast * scenario.fringe_angle().cos()))
}

/// Amplitude of the cosine fringe under the given noise; 1 when clean.
/// Rejects noise fields that have no referent in the given strategy.
pub fn fringe_contrast(kind: ScenarioKind, n: usize, noise: &NoiseSpec) -> Result<f64> {
    noise.validate()?;
    Ok(match (kind, noise) {
        (_, NoiseSpec::Ideal) => 1.0,
        (ScenarioKind::Disentangled, NoiseSpec::Mixed { .. }) => {
            return Err(Error::InconsistentNoise {
                reason: "the white-noise mixture describes a shared state, \
                         the disentangled strategy has none",
            });
        }
        (ScenarioKind::Disentangled, NoiseSpec::Dephasing { fidelity, .. }) => {
            if *fidelity != 1.0 {
                return Err(Error::InconsistentNoise {
                    reason: "state fidelity does not apply to the \
                             disentangled strategy",
                });
            }
            noise.coherence_decay()
        }
        (ScenarioKind::Entangled, NoiseSpec::Mixed { visibility }) => *visibility,
        (ScenarioKind::Entangled, NoiseSpec::Dephasing { fidelity, .. }) => {
            fidelity * noise.coherence_decay().powi(n as i32)
        }
    })
}

/// Standard error of a phase estimate read off a binomial fringe:
/// sqrt(p(1-p)) / (|slope| sqrt(repetitions)).
pub fn precision(p: f64, slope: f64, repetitions: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "probability", value: p, min: 0.0, max: 1.0 });
    }
    if !repetitions.is_finite() || repetitions <= 0.0 {
        return Err(Error::OutOfRange {
            name: "repetitions",
            value: repetitions,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    if p == 0.0 || p == 1.0 || slope == 0.0 {
        return Err(Error::UndefinedPrecision { p, slope });
    }
    Ok((p * (1.0 - p)).sqrt() / (slope.abs() * repetitions.sqrt()))
}

/// Rounds the disentangled strategy needs for precision `epsilon`:
/// e^{2 rate duration} / (n epsilon^2). All n nodes measure each round,
/// and dephasing divides the fringe slope by e^{-rate duration}.
pub fn r1_required(n: usize, epsilon: f64, rate: f64, duration: f64) -> Result<f64> {
    check_formula_inputs(n, epsilon)?;
    check_nonnegative("dephasing rate", rate)?;
    check_nonnegative("wait duration", duration)?;
    Ok((2.0 * rate * duration).exp() / (n as f64 * epsilon * epsilon))
}

/// Rounds the entangled strategy needs for precision `epsilon`. The
/// clean fringe is n times steeper, so the ideal count is
/// 1 / (n^2 epsilon^2); contrast losses enter squared.
pub fn r2_required(n: usize, epsilon: f64, noise: &NoiseSpec) -> Result<f64> {
    check_formula_inputs(n, epsilon)?;
    noise.validate()?;
    let clean = 1.0 / ((n * n) as f64 * epsilon * epsilon);
    match *noise {
        NoiseSpec::Ideal => Ok(clean),
        NoiseSpec::Mixed { visibility } => {
            if visibility == 0.0 {
                return Err(Error::NoInformation {
                    reason: "zero visibility flattens the fringe",
                });
            }
            Ok(clean / (visibility * visibility))
        }
        NoiseSpec::Dephasing { fidelity, .. } => {
            if fidelity == 0.0 {
                return Err(Error::NoInformation {
                    reason: "zero state fidelity flattens the fringe",
                });
            }
            let decay = noise.coherence_decay().powi(n as i32);
            Ok(clean / (fidelity * fidelity * decay * decay))
        }
    }
}

/// Repetition count of the entangled strategy relative to the
/// disentangled one at equal precision; the precision cancels. Ideal
/// value 1/n, and exactly 1 at n = 1 where the strategies coincide.
pub fn repetition_ratio(n: usize, epsilon: f64, noise: &NoiseSpec) -> Result<f64> {
    let (rate, duration) = match *noise {
        NoiseSpec::Dephasing { rate, duration, .. } => (rate, duration),
        _ => (0.0, 0.0),
    };
    let r1 = r1_required(n, epsilon, rate, duration)?;
    let r2 = r2_required(n, epsilon, noise)?;
    Ok(r2 / r1)
}

/// Phase offset phi - phi_ref that maximizes fringe slope: the quarter
/// period, pi/2 for single qubits and pi/(2n) for the GHZ fringe.
pub fn optimal_phase_offset(kind: ScenarioKind, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooFewNodes { n: 0, min: 1 });
    }
    Ok(match kind {
        ScenarioKind::Disentangled => std::f64::consts::FRAC_PI_2,
        ScenarioKind::Entangled => std::f64::consts::FRAC_PI_2 / n as f64,
    })
}

/// Precision reached by `repetitions` rounds, the required-rounds
/// formulas inverted.
pub fn epsilon_from_repetitions(
    kind: ScenarioKind,
    n: usize,
    noise: &NoiseSpec,
    repetitions: u64,
) -> Result<f64> {
    if repetitions == 0 {
        return Err(Error::OutOfRange {
            name: "repetitions",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let at_unit_precision = match kind {
        ScenarioKind::Disentangled => match *noise {
            NoiseSpec::Ideal => r1_required(n, 1.0, 0.0, 0.0)?,
            NoiseSpec::Dephasing { fidelity, rate, duration } => {
                if fidelity != 1.0 {
                    return Err(Error::InconsistentNoise {
                        reason: "state fidelity does not apply to the \
                                 disentangled strategy",
                    });
                }
                r1_required(n, 1.0, rate, duration)?
            }
            NoiseSpec::Mixed { .. } => {
                return Err(Error::InconsistentNoise {
                    reason: "the white-noise mixture describes a shared state, \
                             the disentangled strategy has none",
                });
            }
        },
        ScenarioKind::Entangled => r2_required(n, 1.0, noise)?,
    };
    Ok((at_unit_precision / repetitions as f64).sqrt())
}

/// Success probability of one round obtained by running the actual
/// state pipeline instead of the closed forms. Ideal runs stay on the
/// state-vector simulator; noisy runs go through density matrices and
/// are limited to 8 qubits.
pub fn simulate_success_probability(scenario: &Scenario, noise: &NoiseSpec) -> Result<f64> {
    noise.validate()?;
    match scenario.kind {
        ScenarioKind::Disentangled => simulate_single_qubit(scenario, noise),
        ScenarioKind::Entangled => simulate_ghz_parity(scenario, noise),
    }
}

/// Classical success of one recorded round: bit 1 at the reporting node
/// for the disentangled strategy, odd parity for the entangled one.
pub fn success_from_bits(kind: ScenarioKind, bits: &[u8]) -> Result<bool> {
    if bits.is_empty() {
        return Err(Error::EmptyRegister);
    }
    for &bit in bits {
        crate::quantum::check_bit(bit)?;
    }
    Ok(match kind {
        ScenarioKind::Disentangled => bits[0] == 1,
        ScenarioKind::Entangled => bits.iter().map(|&b| u32::from(b)).sum::<u32>() % 2 == 1,
    })
}

fn simulate_single_qubit(scenario: &Scenario, noise: &NoiseSpec) -> Result<f64> {
    let mut psi = StateVector::basis_state(1, 0)?;
    psi.apply_hadamard(0)?;
    psi.apply_phase(0, scenario.phi)?;
    match noise {
        NoiseSpec::Ideal => {
            psi.apply_phase(0, -scenario.phi_ref)?;
            psi.apply_hadamard(0)?;
            psi.prob_of(0, 1)
        }
        NoiseSpec::Dephasing { fidelity, .. } => {
            if *fidelity != 1.0 {
                return Err(Error::InconsistentNoise {
                    reason: "state fidelity does not apply to the \
                             disentangled strategy",
                });
            }
            let mut rho = DensityMatrix::from_pure(&psi)?;
            rho.dephase(0, noise.coherence_decay())?;
            rho.apply_phase(0, -scenario.phi_ref)?;
            rho.apply_hadamard(0)?;
            rho.prob_of(0, 1)
        }
        NoiseSpec::Mixed { .. } => Err(Error::InconsistentNoise {
            reason: "the white-noise mixture describes a shared state, \
                     the disentangled strategy has none",
        }),
    }
}

fn simulate_ghz_parity(scenario: &Scenario, noise: &NoiseSpec) -> Result<f64> {
    let n = scenario.n;
    let ghz = prepare_ghz_ideal(n, scenario.phi_ref)?;
    match *noise {
        NoiseSpec::Ideal => {
            let mut psi = ghz;
            for q in 0..n {
                psi.apply_phase(q, scenario.phi)?;
            }
            for q in 0..n {
                psi.apply_hadamard(q)?;
            }
            Ok(psi.odd_parity_probability())
        }
        NoiseSpec::Mixed { visibility } => {
            let mut rho = DensityMatrix::global_mixture(&ghz, visibility)?;
            for q in 0..n {
                rho.apply_phase(q, scenario.phi)?;
            }
            for q in 0..n {
                rho.apply_hadamard(q)?;
            }
            Ok(rho.odd_parity_probability())
        }
        NoiseSpec::Dephasing { fidelity, .. } => {
            let mut rho = DensityMatrix::global_mixture(&ghz, fidelity)?;
            let decay = noise.coherence_decay();
            for q in 0..n {
                rho.dephase(q, decay)?;
                rho.apply_phase(q, scenario.phi)?;
            }
            for q in 0..n {
                rho.apply_hadamard(q)?;
            }
            Ok(rho.odd_parity_probability())
        }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value, min: 0.0, max: 1.0 });
    }
    Ok(())
}

fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::OutOfRange {
            name,
            value,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}

fn check_formula_inputs(n: usize, epsilon: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFewNodes { n: 0, min: 1 });
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::OutOfRange {
            name: "target precision",
            value: epsilon,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    Ok(())
}
