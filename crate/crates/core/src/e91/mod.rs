//! Entanglement-based key distribution with CHSH eavesdropper detection.
//!
//! A [`PairSource`] emits spin pairs (honest singlets or some adversarial
//! preparation). Alice and Bob each pick one of three in-plane analyzers per
//! pair, record `+1`/`-1`, then publicly sift the records: four analyzer
//! combinations feed the CHSH statistic `S`, the two aligned combinations
//! become key bits, and the rest are thrown away. `|S|` decides whether the
//! channel can be trusted.

mod chsh;
mod key;
mod report;
mod session;
mod source;

pub use chsh::{
    channel_verdict, chsh_closed_form, estimate_chsh, ChannelVerdict, ChshEstimate,
    CorrelationEstimate, OutcomeCounts, Verdict, CHSH_COMBINATIONS, DEFAULT_Z,
};
pub use key::{extract_key, SiftedKey, KEY_COMBINATIONS};
pub use report::E91Summary;
pub use session::{
    run_exchange, sift, ExchangeConfig, Measurement, PairRecord, SessionTranscript, SiftedGroups,
    TRANSCRIPT_HEADER,
};
pub use source::{correlation_closed_form, sample_pair, PairSource, ProductComponent};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum E91Error {
    #[error("visibility {0} is outside [0, 1]")]
    InvalidVisibility(f64),
    #[error("product mixture needs at least one component")]
    EmptyMixture,
    #[error("mixture weight {0} is not positive")]
    NonPositiveWeight(f64),
    #[error("mixture weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),
    #[error("intercept-resend needs at least one measurement angle")]
    NoEveAngles,
    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("no closed-form correlation for {0}; estimate it from samples instead")]
    UnsupportedStrategy(String),
    #[error("no records for analyzer combination (a{alice}, b{bob})")]
    InsufficientData { alice: u8, bob: u8 },
    #[error("loss probability {0} is outside [0, 1)")]
    InvalidLossProbability(f64),
    #[error("an exchange needs at least one pair")]
    NoPairs,
    #[error("cannot parse pair source `{0}`")]
    ParseSource(String),
    #[error("analyzer basis must be 1, 2 or 3, got {0}")]
    InvalidBasis(u8),
    #[error("outcome must be +1 or -1, got {0}")]
    InvalidOutcome(i8),
    #[error("transcript csv: {0}")]
    Csv(String),
}

/// One of the three analyzer settings on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Basis {
    One,
    Two,
    Three,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::One, Basis::Two, Basis::Three];

    pub fn number(self) -> u8 {
        match self {
            Basis::One => 1,
            Basis::Two => 2,
            Basis::Three => 3,
        }
    }

    fn slot(self) -> usize {
        usize::from(self.number() - 1)
    }
}

impl TryFrom<u8> for Basis {
    type Error = E91Error;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        match n {
            1 => Ok(Basis::One),
            2 => Ok(Basis::Two),
            3 => Ok(Basis::Three),
            other => Err(E91Error::InvalidBasis(other)),
        }
    }
}

impl From<Basis> for u8 {
    fn from(b: Basis) -> u8 {
        b.number()
    }
}

/// Spin measurement result, `+1` (up) or `-1` (down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    Up,
    Down,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Up => 1,
            Outcome::Down => -1,
        }
    }

    /// Raw key bit, `(outcome + 1) / 2`.
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Up => 1,
            Outcome::Down => 0,
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Up => Outcome::Down,
            Outcome::Down => Outcome::Up,
        }
    }

    pub(crate) fn from_up(up: bool) -> Outcome {
        if up {
            Outcome::Up
        } else {
            Outcome::Down
        }
    }
}

impl TryFrom<i8> for Outcome {
    type Error = E91Error;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Outcome::Up),
            -1 => Ok(Outcome::Down),
            other => Err(E91Error::InvalidOutcome(other)),
        }
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        o.value()
    }
}

/// Azimuthal analyzer angles in radians, measured in the plane
/// perpendicular to the flight path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSet {
    pub alice: [f64; 3],
    pub bob: [f64; 3],
}

impl Default for AnalyzerSet {
    /// Alice at (0, pi/4, pi/2), Bob at (pi/4, pi/2, 3pi/4).
    fn default() -> Self {
        Self {
            alice: [0.0, FRAC_PI_4, FRAC_PI_2],
            bob: [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4],
        }
    }
}

impl AnalyzerSet {
    /// Custom angles, wrapped into `[0, 2pi)`.
    pub fn new(alice: [f64; 3], bob: [f64; 3]) -> Result<Self, E91Error> {
        let wrap = |angles: [f64; 3]| -> Result<[f64; 3], E91Error> {
            let mut out = [0.0; 3];
            for (slot, a) in out.iter_mut().zip(angles) {
                if !a.is_finite() {
                    return Err(E91Error::NonFiniteAngle(a));
                }
                *slot = a.rem_euclid(TAU);
            }
            Ok(out)
        };
        Ok(Self {
            alice: wrap(alice)?,
            bob: wrap(bob)?,
        })
    }

    pub fn alice_angle(&self, basis: Basis) -> f64 {
        self.alice[basis.slot()]
    }

    pub fn bob_angle(&self, basis: Basis) -> f64 {
        self.bob[basis.slot()]
    }
}
