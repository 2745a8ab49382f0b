use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde_json::Value;

use super::period::{check_base, find_period_quantum};
use super::{find_period_classical, pow_mod_u64, AlgorithmError, PeriodFindingRun, RegisterSizing};
use crate::classical::{mod_inverse, mod_pow, CryptoError, RsaPublicKey};
use crate::report;

/// Quantum period-finding runs tried before falling back to iteration.
pub const QUANTUM_ORDER_ATTEMPTS: u32 = 20;

/// Where the cryptogram's order came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSource {
    /// `C = 1`; no order finding needed.
    Trivial,
    Quantum,
    /// Every quantum run failed; the order was found by classical iteration.
    ClassicalFallback,
}

impl OrderSource {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderSource::Trivial => "trivial",
            OrderSource::Quantum => "quantum",
            OrderSource::ClassicalFallback => "classical_fallback",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumAttack {
    pub plaintext: BigUint,
    pub order: u64,
    /// `d' = e^-1 mod order`.
    pub reduced_exponent: u64,
    pub source: OrderSource,
    pub runs: Vec<PeriodFindingRun>,
}

impl QuantumAttack {
    pub fn to_json(&self) -> Value {
        report::object([
            ("plaintext", report::integer(&self.plaintext)),
            ("order", report::integer(self.order)),
            ("reduced_exponent", report::integer(self.reduced_exponent)),
            ("order_source", Value::String(self.source.as_str().into())),
            (
                "runs",
                Value::Array(self.runs.iter().map(PeriodFindingRun::to_json).collect()),
            ),
        ])
    }
}

fn reduced_exponent(e: &BigUint, order: u64) -> Option<u64> {
    if order == 1 {
        return Some(0);
    }
    mod_inverse(e, &BigUint::from(order))
        .ok()
        .and_then(|d| d.to_u64())
}

/// Recovers `P` from `C = P^e mod n` by finding the order of `C` with the
/// simulated period-finding pipeline.
///
/// A run is accepted when its candidate `r` satisfies `C^r = 1`, `e` is
/// invertible modulo `r`, and the resulting `P` re-encrypts to `C`.
pub fn rsa_quantum_attack<R: Rng + ?Sized>(
    cipher: &BigUint,
    key: &RsaPublicKey,
    rng: &mut R,
) -> Result<QuantumAttack, AlgorithmError> {
    let too_large = || AlgorithmError::ModulusTooLarge(key.n.to_string());
    let n = key.n.to_u64().ok_or_else(too_large)?;
    let c = cipher.to_u64().filter(|&c| c < n).ok_or_else(|| {
        AlgorithmError::Crypto(CryptoError::BlockTooLarge {
            block: cipher.clone(),
            modulus: key.n.clone(),
        })
    })?;
    let verify = |p: u64| match key.e.to_u64() {
        Some(e) => pow_mod_u64(p, e, n) == c,
        None => mod_pow(&BigUint::from(p), &key.e, &key.n).is_ok_and(|v| v == *cipher),
    };

    if cipher.is_one() {
        return Ok(QuantumAttack {
            plaintext: BigUint::one(),
            order: 1,
            reduced_exponent: 0,
            source: OrderSource::Trivial,
            runs: Vec::new(),
        });
    }
    check_base(n, c)?;

    let mut runs = Vec::new();
    for _ in 0..QUANTUM_ORDER_ATTEMPTS {
        let run = find_period_quantum(n, c, RegisterSizing::Full, rng)?;
        let accepted = match run.candidate_r {
            Some(r) if run.success => reduced_exponent(&key.e, r)
                .map(|d| (r, d, pow_mod_u64(c, d, n)))
                .filter(|&(_, _, p)| verify(p)),
            _ => None,
        };
        runs.push(run);
        if let Some((order, reduced_exponent, p)) = accepted {
            return Ok(QuantumAttack {
                plaintext: BigUint::from(p),
                order,
                reduced_exponent,
                source: OrderSource::Quantum,
                runs,
            });
        }
    }

    let order = find_period_classical(n, c)?;
    let d = reduced_exponent(&key.e, order).ok_or(AlgorithmError::VerificationFailed)?;
    let p = pow_mod_u64(c, d, n);
    if !verify(p) {
        return Err(AlgorithmError::VerificationFailed);
    }
    Ok(QuantumAttack {
        plaintext: BigUint::from(p),
        order,
        reduced_exponent: d,
        source: OrderSource::ClassicalFallback,
        runs,
    })
}
