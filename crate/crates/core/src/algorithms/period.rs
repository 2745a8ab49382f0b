use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{pow_mod_u64, AlgorithmError};
use crate::classical::multiplicative_order;
use crate::qsim::{
    apply_oracle, measure, qft_first_register, uniform_superposition, Oracle, Register,
    RegisterLayout,
};
use crate::report;

/// How wide the first register is relative to `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterSizing {
    /// Least `l` with `2^l >= n^2`; enough periods for continued fractions.
    #[default]
    Full,
    /// Least `l` with `2^l >= n`; only reliable when `r` divides `2^l`.
    Compact,
}

impl RegisterSizing {
    pub fn as_str(self) -> &'static str {
        match self {
            RegisterSizing::Full => "full",
            RegisterSizing::Compact => "compact",
        }
    }
}

impl std::str::FromStr for RegisterSizing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(RegisterSizing::Full),
            "compact" => Ok(RegisterSizing::Compact),
            _ => Err(format!("unknown register sizing `{s}`")),
        }
    }
}

fn ceil_log2(v: u128) -> u32 {
    if v <= 1 {
        0
    } else {
        128 - (v - 1).leading_zeros()
    }
}

/// `(l, k)` for factoring `n`; `k = ceil(log2 n)` holds any residue.
pub fn register_widths(n: u64, sizing: RegisterSizing) -> (u32, u32) {
    let k = ceil_log2(n as u128);
    let l = match sizing {
        RegisterSizing::Full => ceil_log2(n as u128 * n as u128),
        RegisterSizing::Compact => k,
    };
    (l.max(1), k.max(1))
}

/// The oracle `x -> a^x mod n` on `layout`.
pub fn period_oracle(n: u64, a: u64, layout: RegisterLayout) -> Result<Oracle, AlgorithmError> {
    let name = format!("{a}^x mod {n}");
    Ok(Oracle::new(name, layout, move |x| pow_mod_u64(a, x, n))?)
}

/// One pass through the simulated period-finding pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodFindingRun {
    pub n: u64,
    pub a: u64,
    pub l: u32,
    pub k: u32,
    pub sizing: RegisterSizing,
    /// Value `a^x0 mod n` seen on the second register.
    pub second_measurement: u64,
    /// Value `x` seen on the first register after the Fourier transform.
    pub final_measurement: u64,
    pub candidate_r: Option<u64>,
    /// `a^candidate_r = 1 (mod n)`.
    pub success: bool,
}

impl PeriodFindingRun {
    pub fn to_json(&self) -> Value {
        report::object([
            ("n", report::integer(self.n)),
            ("a", report::integer(self.a)),
            ("l", report::integer(self.l)),
            ("k", report::integer(self.k)),
            ("sizing", Value::String(self.sizing.as_str().into())),
            (
                "second_measurement",
                report::integer(self.second_measurement),
            ),
            ("final_measurement", report::integer(self.final_measurement)),
            (
                "candidate_r",
                self.candidate_r.map_or(Value::Null, report::integer),
            ),
            ("success", Value::Bool(self.success)),
        ])
    }
}

pub(crate) fn check_base(n: u64, a: u64) -> Result<(), AlgorithmError> {
    if n < 3 {
        return Err(AlgorithmError::ModulusTooSmall(n));
    }
    if !(2..n).contains(&a) {
        return Err(AlgorithmError::BaseOutOfRange { a, n });
    }
    let gcd = a.gcd(&n);
    if gcd != 1 {
        return Err(AlgorithmError::NotCoprime { a, n, gcd });
    }
    Ok(())
}

/// Prepares `sum_x |x>|0>`, writes `a^x mod n` into the second register,
/// measures it, Fourier-transforms the first register, measures that, and
/// reads a period candidate off the result.
pub fn find_period_quantum<R: Rng + ?Sized>(
    n: u64,
    a: u64,
    sizing: RegisterSizing,
    rng: &mut R,
) -> Result<PeriodFindingRun, AlgorithmError> {
    check_base(n, a)?;
    let (l, k) = register_widths(n, sizing);
    let layout = RegisterLayout::new(l, k)?;
    let oracle = period_oracle(n, a, layout)?;

    let state = apply_oracle(&uniform_superposition(layout), &oracle)?;
    let second = measure(&state, Register::Second, rng)?;
    let transformed = qft_first_register(&second.collapsed);
    let final_measurement = measure(&transformed, Register::First, rng)?.value;

    let candidate_r = match denominator_from_phase(final_measurement, l, n) {
        Ok(r) if pow_mod_u64(a, r, n) == 1 => Some(reduce_to_order(n, a, r)),
        Ok(r) => Some(r),
        Err(AlgorithmError::NoPhaseInformation) => None,
        Err(e) => return Err(e),
    };
    let success = candidate_r.is_some_and(|r| pow_mod_u64(a, r, n) == 1);
    Ok(PeriodFindingRun {
        n,
        a,
        l,
        k,
        sizing,
        second_measurement: second.value,
        final_measurement,
        candidate_r,
        success,
    })
}

/// Strips prime factors from a verified multiple `r` of the order while
/// `a^(r/p) = 1` still holds, leaving the order itself.
///
/// An off-peak outcome can have a convergent whose denominator is a multiple
/// of the period, e.g. 1/18 for n = 21, a = 2.
fn reduce_to_order(n: u64, a: u64, mut r: u64) -> u64 {
    let mut rest = r;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            while r.is_multiple_of(p) && pow_mod_u64(a, r / p, n) == 1 {
                r /= p;
            }
        }
        p += 1;
    }
    if rest > 1 && pow_mod_u64(a, r / rest, n) == 1 {
        r /= rest;
    }
    r
}

/// Least `r >= 1` with `a^r = 1 (mod n)`, by iteration.
pub fn find_period_classical(n: u64, a: u64) -> Result<u64, AlgorithmError> {
    let r = multiplicative_order(&BigUint::from(a), &BigUint::from(n))?;
    Ok(r.to_u64().expect("order is below n"))
}

/// Denominator of the last continued-fraction convergent of `x / 2^l`
/// whose denominator does not exceed `bound`.
pub fn denominator_from_phase(x: u64, l: u32, bound: u64) -> Result<u64, AlgorithmError> {
    if l >= 64 || x >> l != 0 {
        return Err(AlgorithmError::PhaseOutOfRange { x, width: l });
    }
    if bound == 0 {
        return Err(AlgorithmError::InvalidBound);
    }
    if x == 0 {
        return Err(AlgorithmError::NoPhaseInformation);
    }
    let bound = bound as u128;
    let (mut num, mut den) = (x as u128, 1u128 << l);
    let (mut k_prev, mut k) = (0u128, 1u128);
    let mut best = 1u128;
    // The leading coefficient is 0 (x < 2^l), whose convergent 0/1 is skipped.
    loop {
        let rem = num % den;
        if rem == 0 {
            break;
        }
        (num, den) = (den, rem);
        let coeff = num / den;
        let next = coeff * k + k_prev;
        if next > bound {
            break;
        }
        (k_prev, k) = (k, next);
        best = k;
    }
    Ok(best as u64)
}
