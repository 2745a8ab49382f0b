use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::AlgorithmError;
use crate::qsim::{
    apply_hadamard, apply_oracle, measure, Oracle, Register, RegisterLayout, StateVector,
};
use crate::report;

/// The four maps `{0,1} -> {0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BooleanFunction {
    Const0,
    Const1,
    Identity,
    Negation,
}

impl BooleanFunction {
    pub const ALL: [BooleanFunction; 4] = [
        BooleanFunction::Const0,
        BooleanFunction::Const1,
        BooleanFunction::Identity,
        BooleanFunction::Negation,
    ];

    pub fn apply(self, bit: u64) -> u64 {
        match self {
            BooleanFunction::Const0 => 0,
            BooleanFunction::Const1 => 1,
            BooleanFunction::Identity => bit & 1,
            BooleanFunction::Negation => !bit & 1,
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, BooleanFunction::Const0 | BooleanFunction::Const1)
    }

    pub fn name(self) -> &'static str {
        match self {
            BooleanFunction::Const0 => "const0",
            BooleanFunction::Const1 => "const1",
            BooleanFunction::Identity => "identity",
            BooleanFunction::Negation => "negation",
        }
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BooleanFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BooleanFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown boolean function `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DjVerdict {
    Constant,
    Balanced,
}

impl DjVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DjVerdict::Constant => "constant",
            DjVerdict::Balanced => "balanced",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DjOutcome {
    pub function: BooleanFunction,
    pub verdict: DjVerdict,
    /// Value registered on the first qubit.
    pub measured: u64,
    pub oracle_calls: u64,
    /// State after the second Hadamard layer, before measurement.
    pub final_state: StateVector,
}

impl DjOutcome {
    pub fn to_json(&self) -> Value {
        report::object([
            ("function", Value::String(self.function.name().into())),
            ("verdict", Value::String(self.verdict.as_str().into())),
            ("measured", report::integer(self.measured)),
            ("oracle_calls", report::integer(self.oracle_calls)),
        ])
    }
}

/// Decides whether `f` is constant or balanced with a single oracle call.
///
/// `|0>|1>` goes through Hadamards on both qubits, the oracle
/// `|x>|y> -> |x>|y + f(x)>`, and Hadamards again; the first qubit then
/// reads `f(0) xor f(1)` with certainty.
pub fn dj_classify<R: Rng + ?Sized>(
    function: BooleanFunction,
    rng: &mut R,
) -> Result<DjOutcome, AlgorithmError> {
    let layout = RegisterLayout::new(1, 1)?;
    let oracle = Oracle::new(function.name(), layout, move |x| function.apply(x))?;

    let state = StateVector::basis(layout, 0, 1)?;
    let state = apply_hadamard(&state, Register::Both);
    let state = apply_oracle(&state, &oracle)?;
    let final_state = apply_hadamard(&state, Register::Both);

    let measured = measure(&final_state, Register::First, rng)?.value;
    let verdict = if measured == 0 {
        DjVerdict::Constant
    } else {
        DjVerdict::Balanced
    };
    Ok(DjOutcome {
        function,
        verdict,
        measured,
        oracle_calls: oracle.applications(),
        final_state,
    })
}
