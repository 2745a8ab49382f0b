//! Dense state-vector simulator for two abutting qubit registers.
//!
//! Basis index `x * 2^k + y` holds the amplitude of `|x>|y>`, where `x` lives
//! in the first register (`l` qubits) and `y` in the second (`k` qubits).
//! Only the primitives the factoring and constant/balanced demos need are
//! provided: Hadamard layers, function oracles, the Fourier transform on the
//! first register, and projective measurement.

mod measure;
mod oracle;
mod qft;
mod state;

pub use measure::{marginal_probabilities, measure, MeasurementResult};
pub use oracle::{apply_oracle, Oracle};
pub use qft::{inverse_qft_first_register, qft_first_register};
pub use state::{apply_hadamard, uniform_superposition, StateVector};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on `l + k`; 2^24 amplitudes is 256 MiB of `Complex64`.
pub const MAX_QUBITS: u32 = 24;

/// Norm tolerance for a single primitive.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("first register needs at least one qubit")]
    EmptyFirstRegister,
    #[error("layout of {qubits} qubits exceeds the {max}-qubit cap")]
    Capacity { qubits: u32, max: u32 },
    #[error("oracle needs a second register of width >= 1")]
    EmptySecondRegister,
    #[error("oracle `{oracle}` returned {output} for input {input}, outside [0, {limit})")]
    OracleOutOfRange {
        oracle: String,
        input: u64,
        output: u64,
        limit: u64,
    },
    #[error("oracle `{oracle}` is built for {oracle_layout}, state has {state_layout}")]
    LayoutMismatch {
        oracle: String,
        oracle_layout: RegisterLayout,
        state_layout: RegisterLayout,
    },
    #[error("expected {expected} amplitudes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("basis value {value} does not fit in a {width}-qubit register")]
    ValueOutOfRange { value: u64, width: u32 },
    #[error("measurement marginal sums to zero")]
    DegenerateMarginal,
}

/// Widths of the two registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterLayout {
    first: u32,
    second: u32,
}

impl RegisterLayout {
    pub fn new(first: u32, second: u32) -> Result<Self, QsimError> {
        if first == 0 {
            return Err(QsimError::EmptyFirstRegister);
        }
        let qubits = first.saturating_add(second);
        if qubits > MAX_QUBITS {
            return Err(QsimError::Capacity {
                qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Self { first, second })
    }

    /// Width `l` of the first register.
    pub fn first(&self) -> u32 {
        self.first
    }

    /// Width `k` of the second register.
    pub fn second(&self) -> u32 {
        self.second
    }

    pub fn total_qubits(&self) -> u32 {
        self.first + self.second
    }

    pub fn dimension(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn first_size(&self) -> u64 {
        1u64 << self.first
    }

    pub fn second_size(&self) -> u64 {
        1u64 << self.second
    }

    /// Basis index of `|x>|y>`.
    pub fn index(&self, x: u64, y: u64) -> usize {
        ((x << self.second) | y) as usize
    }

    /// Inverse of [`RegisterLayout::index`].
    pub fn split(&self, index: usize) -> (u64, u64) {
        let index = index as u64;
        (index >> self.second, index & (self.second_size() - 1))
    }

    pub fn width(&self, register: Register) -> u32 {
        match register {
            Register::First => self.first,
            Register::Second => self.second,
            Register::Both => self.first + self.second,
        }
    }
}

impl std::fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "l={}, k={}", self.first, self.second)
    }
}

/// Which register an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Register {
    First,
    Second,
    Both,
}
