//! Communication-cost accounting and the advantage-window scanner.
//!
//! Per estimation round the disentangled strategy pays n processor runs
//! plus n - 1 result messages. The entangled strategy pays the same per
//! round and additionally re-establishes the shared GHZ state first:
//! n - 1 pair transmissions (raw or purified) plus n - 2 correction
//! messages. Multiplying by the required repetition counts gives total
//! costs, and their ratio as a function of n carves out the window of
//! network sizes where entanglement is the cheaper route to a fixed
//! precision.
//!
//! Everything here is closed form, so scans over millions of n are
//! cheap; the state simulators never run in this module.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimation::{r1_required, r2_required, NoiseSpec};
use crate::ghz::precomputation_cost;
use crate::purification::{compose_fidelity, SchemeParams};

/// Largest network size a scan may touch.
pub const SCAN_N_MAX: u64 = 1_000_000;

/// Unit costs of the three network primitives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    qubit_send: f64,
    classical_send: f64,
    processor_run: f64,
}

impl CostParams {
    /// All costs are nonnegative; a round must cost something, so the
    /// classical-send and processor-run costs cannot both vanish.
    pub fn new(qubit_send: f64, classical_send: f64, processor_run: f64) -> Result<Self> {
        for (name, value) in [
            ("qubit-send cost", qubit_send),
            ("classical-send cost", classical_send),
            ("processor-run cost", processor_run),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
        }
        if classical_send + processor_run <= 0.0 {
            return Err(Error::InconsistentNoise {
                reason: "classical-send and processor-run costs are both zero, \
                         every round would be free",
            });
        }
        Ok(Self { qubit_send, classical_send, processor_run })
    }

    pub fn qubit_send(&self) -> f64 {
        self.qubit_send
    }

    pub fn classical_send(&self) -> f64 {
        self.classical_send
    }

    pub fn processor_run(&self) -> f64 {
        self.processor_run
    }

    /// Per-round cost common to both strategies: n processor runs plus
    /// n - 1 result messages.
    fn round_cost(&self, n: u64) -> f64 {
        n as f64 * self.processor_run + (n - 1) as f64 * self.classical_send
    }
}

/// Total cost of `repetitions` disentangled rounds.
pub fn cost_disentangled(n: u64, repetitions: f64, params: &CostParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::TooFewNodes { n, min: 1 });
    }
    check_repetitions(repetitions)?;
    Ok(repetitions * params.round_cost(n))
}

/// Total cost of `repetitions` entangled rounds, each preceded by a GHZ
/// distribution costing `precomputation`.
pub fn cost_entangled(
    n: u64,
    repetitions: f64,
    precomputation: f64,
    params: &CostParams,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    check_repetitions(repetitions)?;
    if precomputation < 0.0 || precomputation.is_nan() {
        return Err(Error::OutOfRange {
            name: "precomputation cost",
            value: precomputation,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(repetitions * (precomputation + params.round_cost(n)))
}

/// Entangled-over-disentangled cost ratio with clean channels, where the
/// repetition counts are 1/(n eps^2) and 1/(n eps)^2 and the precision
/// cancels: ((n-1)X + (2n-3)Y + nZ) / (n ((n-1)Y + nZ)).
pub fn ratio_ideal(n: u64, params: &CostParams) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let x = params.qubit_send;
    let y = params.classical_send;
    let z = params.processor_run;
    let nf = n as f64;
    let numerator = (nf - 1.0) * x + (2.0 * nf - 3.0) * y + nf * z;
    let denominator = (nf - 1.0) * y + nf * z;
    Ok(numerator / (nf * denominator))
}

/// Network size where the ideal ratio crosses 1, in the regime where
/// that size is large: (2Y + X + Z) / (Y + Z).
pub fn n_min_approx(params: &CostParams) -> f64 {
    let x = params.qubit_send;
    let y = params.classical_send;
    let z = params.processor_run;
    (2.0 * y + x + z) / (y + z)
}

/// Cost ratio when the entangled strategy runs on purified pairs: the
/// pair price becomes the scheme's per-pair cost after `rounds` rounds
/// and the GHZ contrast drops to x_n = F_s^{n-1}, which inflates the
/// entangled repetition count by 1/x_n^2. Diverges (to +inf) once x_n
/// underflows.
pub fn ratio_noisy(
    n: u64,
    params: &CostParams,
    scheme: &SchemeParams,
    rounds: u32,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let pair_fidelity = scheme.fidelity(rounds)?;
    let visibility = compose_fidelity(pair_fidelity, n as usize)?;
    let pair_cost = scheme.pair_cost(rounds)?;
    let y = params.classical_send;
    let z = params.processor_run;
    let nf = n as f64;
    let numerator = (nf - 1.0) * pair_cost + (2.0 * nf - 3.0) * y + nf * z;
    let denominator = (nf - 1.0) * y + nf * z;
    Ok(numerator / (nf * visibility * visibility * denominator))
}

/// Cost ratio when every qubit dephases at `rate` for `duration` each
/// round: exactly e^{2 rate duration (n-1)} times the ideal ratio.
pub fn ratio_dephased(n: u64, params: &CostParams, rate: f64, duration: f64) -> Result<f64> {
    if rate < 0.0 || duration < 0.0 || !(rate * duration).is_finite() {
        return Err(Error::OutOfRange {
            name: "dephasing exposure",
            value: rate * duration,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let ideal = ratio_ideal(n, params)?;
    Ok((2.0 * rate * duration * (n - 1) as f64).exp() * ideal)
}

/// How the purification round count is chosen for a noisy scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepChoice {
    /// Use this many rounds for every n.
    Fixed(u32),
    /// Use the smallest round count whose pair fidelity reaches the
    /// target.
    TargetFidelity(f64),
}

/// Channel regime a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanRegime {
    Ideal,
    Dephased { rate: f64, duration: f64 },
    Purified { scheme: SchemeParams, steps: StepChoice },
}

/// One scanned network size with its repetition counts and costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: u64,
    pub reps_disentangled: f64,
    pub reps_entangled: f64,
    pub precomputation: f64,
    pub cost_disentangled: f64,
    pub cost_entangled: f64,
    pub ratio: f64,
}

/// Upper edge of the advantage window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowUpper {
    /// Last scanned n with ratio < 1, strictly inside the range.
    At(u64),
    /// Ratio still below 1 at the top of the scanned range; the window
    /// may extend beyond it.
    OpenAtBound,
}

/// Range of scanned n where the entangled strategy costs strictly less.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n_min: Option<u64>,
    pub n_max: Option<WindowUpper>,
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n_min {
            Some(n) => write!(f, "n_min={n}")?,
            None => write!(f, "n_min=none")?,
        }
        match self.n_max {
            Some(WindowUpper::At(n)) => write!(f, " n_max={n}"),
            Some(WindowUpper::OpenAtBound) => write!(f, " n_max=open"),
            None => write!(f, " n_max=none"),
        }
    }
}

/// Scan result: per-n rows, the detected window, and how many
/// purification rounds were used (with whether they came from a target
/// search rather than the config).
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub window: Window,
    pub steps_used: Option<u32>,
    pub steps_from_target: bool,
}

/// Evaluates the cost ratio over n in [n_from, n_to] and locates the
/// advantage window (strict ratio < 1; parity is no gain).
pub fn scan_window(
    params: &CostParams,
    regime: &ScanRegime,
    epsilon: f64,
    n_from: u64,
    n_to: u64,
) -> Result<ScanOutcome> {
    if n_from < 2 || n_from > n_to || n_to > SCAN_N_MAX {
        return Err(Error::BadScanRange { from: n_from, to: n_to, max: SCAN_N_MAX });
    }
    let (steps_used, steps_from_target) = match regime {
        ScanRegime::Purified { scheme, steps } => {
            let (rounds, searched) = match *steps {
                StepChoice::Fixed(rounds) => (rounds, false),
                StepChoice::TargetFidelity(target) => (scheme.steps_for_target(target)?, true),
            };
            // Surfaces a scheme-1 zero-round request before any row work.
            scheme.pair_cost(rounds)?;
            (Some(rounds), searched)
        }
        _ => (None, false),
    };

    let mut rows = Vec::with_capacity((n_to - n_from + 1) as usize);
    for n in n_from..=n_to {
        rows.push(scan_row(params, regime, steps_used, epsilon, n)?);
    }

    let n_min = rows.iter().find(|row| row.ratio < 1.0).map(|row| row.n);
    let n_max = rows.iter().rev().find(|row| row.ratio < 1.0).map(|row| {
        if row.n == n_to {
            WindowUpper::OpenAtBound
        } else {
            WindowUpper::At(row.n)
        }
    });
    Ok(ScanOutcome {
        rows,
        window: Window { n_min, n_max },
        steps_used,
        steps_from_target,
    })
}

fn scan_row(
    params: &CostParams,
    regime: &ScanRegime,
    steps_used: Option<u32>,
    epsilon: f64,
    n: u64,
) -> Result<ScanRow> {
    let nodes = n as usize;
    let (r1, r2, pair_cost, closed_ratio) = match regime {
        ScanRegime::Ideal => (
            r1_required(nodes, epsilon, 0.0, 0.0)?,
            r2_required(nodes, epsilon, &NoiseSpec::Ideal)?,
            params.qubit_send,
            ratio_ideal(n, params)?,
        ),
        ScanRegime::Dephased { rate, duration } => {
            let noise = NoiseSpec::Dephasing { fidelity: 1.0, rate: *rate, duration: *duration };
            (
                r1_required(nodes, epsilon, *rate, *duration)?,
                r2_required(nodes, epsilon, &noise)?,
                params.qubit_send,
                ratio_dephased(n, params, *rate, *duration)?,
            )
        }
        ScanRegime::Purified { scheme, .. } => {
            let rounds = steps_used.expect("purified scans always resolve a round count");
            let visibility = compose_fidelity(scheme.fidelity(rounds)?, nodes)?;
            let r2 = if visibility > 0.0 {
                r2_required(nodes, epsilon, &NoiseSpec::Mixed { visibility })?
            } else {
                f64::INFINITY
            };
            (
                r1_required(nodes, epsilon, 0.0, 0.0)?,
                r2,
                scheme.pair_cost(rounds)?,
                ratio_noisy(n, params, scheme, rounds)?,
            )
        }
    };
    let precomputation =
        precomputation_cost(n, pair_cost, params.classical_send)?.total_cost;
    let c1 = cost_disentangled(n, r1, params)?;
    let c2 = cost_entangled(n, r2, precomputation, params)?;
    // Exponential factors can push both costs past the float range; the
    // closed form keeps the ratio meaningful there.
    let ratio = if c1.is_finite() { c2 / c1 } else { closed_ratio };
    Ok(ScanRow {
        n,
        reps_disentangled: r1,
        reps_entangled: r2,
        precomputation,
        cost_disentangled: c1,
        cost_entangled: c2,
        ratio,
    })
}

fn check_repetitions(repetitions: f64) -> Result<()> {
    if repetitions.is_nan() || repetitions < 0.0 {
        return Err(Error::OutOfRange {
            name: "repetitions",
            value: repetitions,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}
