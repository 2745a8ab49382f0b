use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use super::{QsimError, RegisterLayout, StateVector};

/// Inputs checked at construction before falling back to a strided sample.
const EXHAUSTIVE_SWEEP_LIMIT: u64 = 1 << 16;
const SAMPLED_SWEEP_POINTS: u64 = 4096;

type Rule = dyn Fn(u64) -> u64 + Send + Sync;

/// A total function `f: [0, 2^l) -> [0, 2^k)` applied as the reversible map
/// `|x>|y> -> |x>|y + f(x) mod 2^k>`.
///
/// The rule is evaluated lazily per basis index; nothing is tabulated.
/// Each call to [`apply_oracle`] bumps an application counter so callers can
/// assert how many times the oracle was queried.
pub struct Oracle {
    name: String,
    layout: RegisterLayout,
    rule: Box<Rule>,
    applications: AtomicU64,
}

impl Oracle {
    /// Builds an oracle and sweeps the rule for range violations: exhaustive
    /// when `2^l <= 65536`, otherwise 4096 evenly spaced inputs plus the last.
    pub fn new<F>(
        name: impl Into<String>,
        layout: RegisterLayout,
        rule: F,
    ) -> Result<Self, QsimError>
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        if layout.second() == 0 {
            return Err(QsimError::EmptySecondRegister);
        }
        let oracle = Self {
            name: name.into(),
            layout,
            rule: Box::new(rule),
            applications: AtomicU64::new(0),
        };
        let inputs = layout.first_size();
        if inputs <= EXHAUSTIVE_SWEEP_LIMIT {
            for x in 0..inputs {
                oracle.evaluate(x)?;
            }
        } else {
            let step = inputs / SAMPLED_SWEEP_POINTS;
            for x in (0..inputs).step_by(step as usize) {
                oracle.evaluate(x)?;
            }
            oracle.evaluate(inputs - 1)?;
        }
        Ok(oracle)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    /// `f(x)`, checked against `2^k`.
    pub fn evaluate(&self, x: u64) -> Result<u64, QsimError> {
        let output = (self.rule)(x);
        let limit = self.layout.second_size();
        if output >= limit {
            return Err(QsimError::OracleOutOfRange {
                oracle: self.name.clone(),
                input: x,
                output,
                limit,
            });
        }
        Ok(output)
    }

    /// Number of times this oracle has been applied to a state.
    pub fn applications(&self) -> u64 {
        self.applications.load(Ordering::Relaxed)
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("name", &self.name)
            .field("layout", &self.layout)
            .field("applications", &self.applications())
            .finish()
    }
}

/// Moves the amplitude at `(x, y)` to `(x, (y + f(x)) mod 2^k)`.
pub fn apply_oracle(state: &StateVector, oracle: &Oracle) -> Result<StateVector, QsimError> {
    let layout = state.layout();
    if layout.second() == 0 {
        return Err(QsimError::EmptySecondRegister);
    }
    if layout != oracle.layout {
        return Err(QsimError::LayoutMismatch {
            oracle: oracle.name.clone(),
            oracle_layout: oracle.layout,
            state_layout: layout,
        });
    }
    oracle.applications.fetch_add(1, Ordering::Relaxed);

    let amps = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    let rows = layout.second_size();
    let mask = rows - 1;
    for x in 0..layout.first_size() {
        let shift = oracle.evaluate(x)?;
        let base = layout.index(x, 0);
        for y in 0..rows {
            out[base + ((y + shift) & mask) as usize] = amps[base + y as usize];
        }
    }
    Ok(StateVector::from_parts_unchecked(layout, out))
}
