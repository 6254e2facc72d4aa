//! Recurrence-style purification of the raw pairs and its cost model.
//!
//! Both schemes drive the infidelity of a pair down geometrically in the
//! number of rounds s: the residual error 1 - F0 shrinks by a fixed
//! factor per round. They differ in how the per-pair cost grows with s.
//! Scheme 1 contracts the error by 2/3 per round and pays for a pair
//! budget that doubles each round. Scheme 2 contracts by a configurable
//! factor and pays a flat amount per round.

use crate::error::{Error, Result};

/// Fidelity after s rounds of scheme 1: 1 - (2/3)^s (1 - f0). Valid for
/// s = 0 (no purification).
pub fn scheme1_fidelity(f0: f64, rounds: u32) -> Result<f64> {
    check_base_fidelity(f0)?;
    Ok(1.0 - (2.0f64 / 3.0).powi(rounds as i32) * (1.0 - f0))
}

/// Cost of one scheme-1 pair after s rounds: 2^{s-1} times the cost of a
/// raw pair. The formula has no s = 0 reading, so at least one round is
/// required.
pub fn scheme1_cost(rounds: u32, unit_cost: f64) -> Result<f64> {
    check_cost("unit cost", unit_cost)?;
    if rounds == 0 {
        return Err(Error::TooFewSteps { s: rounds });
    }
    Ok(2.0f64.powi(rounds as i32 - 1) * unit_cost)
}

/// Fidelity after s rounds of scheme 2: 1 - decay^s (1 - f0).
pub fn scheme2_fidelity(f0: f64, decay: f64, rounds: u32) -> Result<f64> {
    check_base_fidelity(f0)?;
    check_decay(decay)?;
    Ok(1.0 - decay.powi(rounds as i32) * (1.0 - f0))
}

/// Cost of one scheme-2 pair after s rounds: a flat amount per round.
pub fn scheme2_cost(rounds: u32, step_cost: f64) -> Result<f64> {
    check_cost("step cost", step_cost)?;
    Ok(f64::from(rounds) * step_cost)
}

/// A purification scheme with its base pair quality and cost scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeParams {
    Scheme1 { f0: f64, unit_cost: f64 },
    Scheme2 { f0: f64, decay: f64, step_cost: f64 },
}

impl SchemeParams {
    pub fn scheme1(f0: f64, unit_cost: f64) -> Result<Self> {
        check_base_fidelity(f0)?;
        check_cost("unit cost", unit_cost)?;
        Ok(Self::Scheme1 { f0, unit_cost })
    }

    pub fn scheme2(f0: f64, decay: f64, step_cost: f64) -> Result<Self> {
        check_base_fidelity(f0)?;
        check_decay(decay)?;
        check_cost("step cost", step_cost)?;
        Ok(Self::Scheme2 { f0, decay, step_cost })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::Scheme1 { .. } => "scheme1",
            Self::Scheme2 { .. } => "scheme2",
        }
    }

    pub fn base_fidelity(&self) -> f64 {
        match *self {
            Self::Scheme1 { f0, .. } | Self::Scheme2 { f0, .. } => f0,
        }
    }

    /// Pair fidelity after `rounds` rounds.
    pub fn fidelity(&self, rounds: u32) -> Result<f64> {
        match *self {
            Self::Scheme1 { f0, .. } => scheme1_fidelity(f0, rounds),
            Self::Scheme2 { f0, decay, .. } => scheme2_fidelity(f0, decay, rounds),
        }
    }

    /// Cost of one purified pair after `rounds` rounds, replacing the raw
    /// pair cost in the distribution budget.
    pub fn pair_cost(&self, rounds: u32) -> Result<f64> {
        match *self {
            Self::Scheme1 { unit_cost, .. } => scheme1_cost(rounds, unit_cost),
            Self::Scheme2 { step_cost, .. } => scheme2_cost(rounds, step_cost),
        }
    }

    /// Smallest round count whose fidelity reaches `target`. Zero when the
    /// raw pairs already qualify; targets of 1 or above are unreachable in
    /// finitely many rounds.
    pub fn steps_for_target(&self, target: f64) -> Result<u32> {
        if target <= self.base_fidelity() {
            return Ok(0);
        }
        if target >= 1.0 {
            return Err(Error::UnreachableTarget { target });
        }
        let mut rounds = 1u32;
        // The residual error shrinks by a factor < 1 each round and
        // eventually underflows to zero, so the loop terminates for every
        // target below 1.
        while self.fidelity(rounds)? < target {
            rounds += 1;
        }
        Ok(rounds)
    }
}

/// Fidelity of the GHZ state assembled from n - 1 pairs of fidelity
/// `pair_fidelity`, in the regime where pair errors neither cancel nor
/// compound: the product pair_fidelity^{n-1}.
pub fn compose_fidelity(pair_fidelity: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&pair_fidelity) {
        return Err(Error::OutOfRange {
            name: "pair fidelity",
            value: pair_fidelity,
            min: 0.0,
            max: 1.0,
        });
    }
    if n < 2 {
        return Err(Error::TooFewNodes { n: n as u64, min: 2 });
    }
    Ok(pair_fidelity.powi(n as i32 - 1))
}

/// Both schemes assume pairs that start better than a coin flip.
fn check_base_fidelity(f0: f64) -> Result<()> {
    if f0 <= 0.5 || f0 > 1.0 {
        return Err(Error::OutOfRange {
            name: "base fidelity",
            value: f0,
            min: 0.5,
            max: 1.0,
        });
    }
    Ok(())
}

fn check_decay(decay: f64) -> Result<()> {
    if decay <= 0.0 || decay >= 1.0 {
        return Err(Error::OutOfRange {
            name: "decay per round",
            value: decay,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

fn check_cost(name: &'static str, cost: f64) -> Result<()> {
    if !cost.is_finite() || cost < 0.0 {
        return Err(Error::OutOfRange {
            name,
            value: cost,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn scheme1_contracts_error_by_two_thirds() {
        assert!((scheme1_fidelity(0.9, 0).unwrap() - 0.9).abs() < TOL);
        assert!((scheme1_fidelity(0.9, 1).unwrap() - (1.0 - 0.2 / 3.0)).abs() < TOL);
        assert!((scheme1_fidelity(0.95, 6).unwrap() - 0.9956104252400548).abs() < TOL);
        let lower = scheme1_fidelity(0.8, 3).unwrap();
        let higher = scheme1_fidelity(0.8, 4).unwrap();
        assert!(higher > lower, "more rounds never hurt");
    }

    #[test]
    fn scheme1_cost_doubles_per_round() {
        assert!((scheme1_cost(1, 40.0).unwrap() - 40.0).abs() < TOL);
        assert!((scheme1_cost(4, 40.0).unwrap() - 320.0).abs() < TOL);
        assert_eq!(scheme1_cost(0, 40.0), Err(Error::TooFewSteps { s: 0 }));
        assert!(scheme1_cost(2, -1.0).is_err());
    }

    #[test]
    fn scheme2_follows_its_decay_factor() {
        assert!((scheme2_fidelity(0.9, 0.5, 2).unwrap() - 0.975).abs() < TOL);
        assert!((scheme2_cost(3, 100.0).unwrap() - 300.0).abs() < TOL);
        assert!((scheme2_cost(0, 100.0).unwrap()).abs() < TOL);
        assert!(scheme2_fidelity(0.9, 1.0, 2).is_err());
        assert!(scheme2_fidelity(0.9, 0.0, 2).is_err());
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(SchemeParams::scheme1(0.5, 10.0).is_err());
        assert!(SchemeParams::scheme1(1.01, 10.0).is_err());
        assert!(SchemeParams::scheme1(0.9, f64::NAN).is_err());
        assert!(SchemeParams::scheme2(0.9, 0.5, -2.0).is_err());
        let s1 = SchemeParams::scheme1(1.0, 10.0).unwrap();
        assert_eq!(s1.id(), "scheme1");
        assert!((s1.base_fidelity() - 1.0).abs() < TOL);
    }

    #[test]
    fn round_search_finds_the_smallest_sufficient_count() {
        let s1 = SchemeParams::scheme1(0.9, 25.0).unwrap();
        assert_eq!(s1.steps_for_target(0.99).unwrap(), 6);
        assert!(s1.fidelity(6).unwrap() >= 0.99);
        assert!(s1.fidelity(5).unwrap() < 0.99);

        let s2 = SchemeParams::scheme2(0.95, 0.5, 100.0).unwrap();
        assert_eq!(s2.steps_for_target(0.995).unwrap(), 4);
        assert!((s2.fidelity(4).unwrap() - 0.996875).abs() < TOL);

        assert_eq!(s2.steps_for_target(0.90).unwrap(), 0);
        assert_eq!(
            s2.steps_for_target(1.0),
            Err(Error::UnreachableTarget { target: 1.0 })
        );
        let perfect = SchemeParams::scheme2(1.0, 0.5, 100.0).unwrap();
        assert_eq!(perfect.steps_for_target(1.0).unwrap(), 0);
    }

    #[test]
    fn composition_multiplies_pair_fidelities() {
        assert!((compose_fidelity(0.99375, 3).unwrap() - 0.9875390625).abs() < TOL);
        assert!((compose_fidelity(1.0, 7).unwrap() - 1.0).abs() < TOL);
        assert!(compose_fidelity(1.1, 3).is_err());
        assert!(compose_fidelity(0.9, 1).is_err());
    }
}
