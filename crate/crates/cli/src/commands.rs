//! Subcommand implementations. Each returns the finished CSV text plus
//! an optional human note for stderr, leaving stdout byte-deterministic
//! for a given configuration and seed.

use std::fmt;

use qnetcost::cost::{scan_window, ScanRegime};
use qnetcost::estimation::{
    optimal_phase_offset, r1_required, r2_required, NoiseSpec, Scenario, ScenarioKind,
};
use qnetcost::ghz::{run_distribution, PairSource};
use qnetcost::montecarlo::{derive_seed, empirical_precision};
use qnetcost::purification::compose_fidelity;
use qnetcost::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, ScenarioChoice};

/// Command failure, split by who gets the blame in the exit code.
#[derive(Debug)]
pub enum CmdError {
    /// The configuration asks for something the model rejects; exit 2.
    Config(String),
    /// The run itself broke an internal invariant; exit 1.
    Internal(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "configuration error: {msg}"),
            Self::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

/// Finished command output: CSV for stdout, a note for stderr.
#[derive(Debug)]
pub struct CmdOutput {
    pub csv: String,
    pub note: Option<String>,
}

/// Library errors triggered by configuration values stay usage errors;
/// anything else means the run itself went wrong.
fn lift(error: Error) -> CmdError {
    match error {
        Error::ImpossibleBranch | Error::InvalidDensity { .. } | Error::NotNormalized { .. } => {
            CmdError::Internal(error.to_string())
        }
        _ => CmdError::Config(error.to_string()),
    }
}

/// Cost-window scan over the configured n range.
pub fn run_scan(config: &RunConfig) -> Result<CmdOutput, CmdError> {
    let regime = scan_regime(config)?;
    let outcome = scan_window(&config.costs, &regime, config.epsilon, config.n_from, config.n_to)
        .map_err(lift)?;

    let mut csv = String::from("n,R1,R2,P2,C1,C2,ratio\n");
    for row in &outcome.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.n,
            row.reps_disentangled,
            row.reps_entangled,
            row.precomputation,
            row.cost_disentangled,
            row.cost_entangled,
            row.ratio,
        ));
    }
    csv.push_str(&format!("# window: {}\n", outcome.window));

    let note = outcome.steps_used.map(|steps| {
        let mode = if outcome.steps_from_target {
            "chosen for the target fidelity"
        } else {
            "fixed by the configuration"
        };
        format!("purification steps: {steps} ({mode})")
    });
    Ok(CmdOutput { csv, note })
}

fn scan_regime(config: &RunConfig) -> Result<ScanRegime, CmdError> {
    if let Some(scheme) = &config.scheme {
        if config.dephasing.is_some() {
            return Err(CmdError::Config(
                "a scan models either purified pairs or dephasing, not both".into(),
            ));
        }
        if config.visibility.is_some() || config.fidelity.is_some() {
            return Err(CmdError::Config(
                "with a scheme, the scanned visibility follows from `F0` and the \
                 step policy; drop `x_n` and `F`"
                    .into(),
            ));
        }
        let steps = config.steps.expect("scheme and steps are parsed together");
        return Ok(ScanRegime::Purified { scheme: *scheme, steps });
    }
    if let Some((rate, duration)) = config.dephasing {
        if config.visibility.is_some() || config.fidelity.is_some() {
            return Err(CmdError::Config(
                "the dephased scan models in-flight decoherence only; drop `x_n` and `F`".into(),
            ));
        }
        return Ok(ScanRegime::Dephased { rate, duration });
    }
    if config.visibility.is_some() || config.fidelity.is_some() {
        return Err(CmdError::Config(
            "scans take noise from a scheme or from `g`/`t_c`; `x_n` and `F` \
             apply to simulate and validate"
                .into(),
        ));
    }
    Ok(ScanRegime::Ideal)
}

/// Distribution-protocol sweep: exact final-state fidelity per network
/// size next to the pairwise composition prediction.
pub fn run_simulate(config: &RunConfig) -> Result<CmdOutput, CmdError> {
    if config.scheme.is_some() || config.dephasing.is_some() || config.visibility.is_some() {
        return Err(CmdError::Config(
            "simulate models raw pair quality through `F` alone".into(),
        ));
    }
    let fidelity = config.fidelity.unwrap_or(1.0);
    let source = if fidelity == 1.0 {
        PairSource::Ideal
    } else {
        PairSource::Werner { fidelity }
    };

    let mut csv = String::from("n,pair_fidelity,ghz_fidelity,predicted_F_pow\n");
    for n in config.n_from..=config.n_to {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, n));
        let run = run_distribution(n as usize, source, 0.0, &mut rng).map_err(lift)?;
        let predicted = compose_fidelity(fidelity, n as usize).map_err(lift)?;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            n, fidelity, run.fidelity_vs_ideal, predicted,
        ));
    }
    Ok(CmdOutput { csv, note: None })
}

/// Monte Carlo comparison of the analytic precision against the spread
/// of sampled phase estimates.
pub fn run_validate(config: &RunConfig) -> Result<CmdOutput, CmdError> {
    if config.scheme.is_some() {
        return Err(CmdError::Config(
            "validate takes its noise from `x_n` or `F`/`g`/`t_c`, not from a scheme".into(),
        ));
    }
    let kinds: &[ScenarioKind] = match config.scenario {
        ScenarioChoice::Both => &[ScenarioKind::Disentangled, ScenarioKind::Entangled],
        ScenarioChoice::Disentangled => &[ScenarioKind::Disentangled],
        ScenarioChoice::Entangled => &[ScenarioKind::Entangled],
    };

    let mut csv = String::from("scenario,n,R,analytic_epsilon,empirical_sigma,relative_gap\n");
    let mut row_index = 0u64;
    for &kind in kinds {
        let noise = validate_noise(config, kind)?;
        for n in config.n_from..=config.n_to {
            let n = n as usize;
            let budget = match kind {
                ScenarioKind::Disentangled => {
                    let (rate, duration) = config.dephasing.unwrap_or((0.0, 0.0));
                    r1_required(n, config.epsilon, rate, duration)
                }
                ScenarioKind::Entangled => r2_required(n, config.epsilon, &noise),
            }
            .map_err(lift)?;
            let repetitions = (budget.ceil() as u64).max(1);

            let offset = optimal_phase_offset(kind, n).map_err(lift)?;
            let scenario = Scenario::new(kind, n, offset, 0.0).map_err(lift)?;
            let report = empirical_precision(
                &scenario,
                &noise,
                repetitions,
                config.replications,
                derive_seed(config.seed, row_index),
            )
            .map_err(lift)?;
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                kind.label(),
                n,
                repetitions,
                report.analytic_epsilon,
                report.empirical_sigma,
                report.relative_gap,
            ));
            row_index += 1;
        }
    }
    Ok(CmdOutput { csv, note: None })
}

fn validate_noise(config: &RunConfig, kind: ScenarioKind) -> Result<NoiseSpec, CmdError> {
    if let Some(visibility) = config.visibility {
        if kind == ScenarioKind::Disentangled {
            return Err(CmdError::Config(
                "`x_n` describes the shared state; validate it with \
                 `scenario = entangled`"
                    .into(),
            ));
        }
        return Ok(NoiseSpec::Mixed { visibility });
    }
    let fidelity = config.fidelity.unwrap_or(1.0);
    match config.dephasing {
        Some((rate, duration)) => Ok(NoiseSpec::Dephasing { fidelity, rate, duration }),
        None if fidelity != 1.0 => {
            Ok(NoiseSpec::Dephasing { fidelity, rate: 0.0, duration: 0.0 })
        }
        None => Ok(NoiseSpec::Ideal),
    }
}
