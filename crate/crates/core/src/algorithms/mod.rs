//! The constant/balanced test and Shor's period-finding factorization,
//! both run on the dense simulator in [`crate::qsim`], plus the classical
//! cross-checks they are measured against.

mod deutsch;
mod period;
mod rsa_attack;
mod shor;

pub use deutsch::{dj_classify, BooleanFunction, DjOutcome, DjVerdict};
pub use period::{
    denominator_from_phase, find_period_classical, find_period_quantum, period_oracle,
    register_widths, PeriodFindingRun, RegisterSizing,
};
pub use rsa_attack::{rsa_quantum_attack, OrderSource, QuantumAttack, QUANTUM_ORDER_ATTEMPTS};
pub use shor::{
    shor_factor, AttemptKind, FactorMethod, FactorReport, FoundFactor, PeriodOutcome, Precheck,
    ShorAttempt, ShorConfig, DEFAULT_MAX_ATTEMPTS,
};

use thiserror::Error;

use crate::classical::CryptoError;
use crate::qsim::QsimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgorithmError {
    #[error(transparent)]
    Simulator(#[from] QsimError),
    #[error(transparent)]
    Crypto(#[from] CryptoError),
    #[error("modulus {0} is too small; need n >= 3")]
    ModulusTooSmall(u64),
    #[error("base {a} is outside [2, {n})")]
    BaseOutOfRange { a: u64, n: u64 },
    #[error("gcd({a}, {n}) = {gcd}; use it as a factor instead")]
    NotCoprime { a: u64, n: u64, gcd: u64 },
    #[error("measured x = 0 carries no period information")]
    NoPhaseInformation,
    #[error("measured value {x} does not fit a {width}-qubit register")]
    PhaseOutOfRange { x: u64, width: u32 },
    #[error("denominator bound must be at least 1")]
    InvalidBound,
    #[error("modulus {0} does not fit the simulator")]
    ModulusTooLarge(String),
    #[error("recovered plaintext failed verification against the cryptogram")]
    VerificationFailed,
}

/// `base^exp mod modulus` on machine words, for oracle rules evaluated once
/// per basis index.
pub(crate) fn pow_mod_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut result = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}
