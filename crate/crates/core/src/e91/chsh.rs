use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{correlation_closed_form, AnalyzerSet, Basis, E91Error, PairRecord, PairSource};

/// Default sigma multiplier for the verdict margins.
pub const DEFAULT_Z: f64 = 3.0;

/// Analyzer combinations entering `S = E11 - E13 + E31 + E33`, with signs.
pub const CHSH_COMBINATIONS: [(Basis, Basis, f64); 4] = [
    (Basis::One, Basis::One, 1.0),
    (Basis::One, Basis::Three, -1.0),
    (Basis::Three, Basis::One, 1.0),
    (Basis::Three, Basis::Three, 1.0),
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub plus_plus: u64,
    pub minus_minus: u64,
    pub plus_minus: u64,
    pub minus_plus: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.plus_plus + self.minus_minus + self.plus_minus + self.minus_plus
    }

    /// `(N++ + N-- - N+- - N-+) / N`.
    pub fn correlation(&self) -> f64 {
        let agree = (self.plus_plus + self.minus_minus) as f64;
        let disagree = (self.plus_minus + self.minus_plus) as f64;
        (agree - disagree) / self.total() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub alice: Basis,
    pub bob: Basis,
    pub counts: OutcomeCounts,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    pub e11: CorrelationEstimate,
    pub e13: CorrelationEstimate,
    pub e31: CorrelationEstimate,
    pub e33: CorrelationEstimate,
    pub s: f64,
    pub stderr_s: f64,
}

impl ChshEstimate {
    pub fn correlations(&self) -> [&CorrelationEstimate; 4] {
        [&self.e11, &self.e13, &self.e31, &self.e33]
    }
}

/// Estimates the four correlations and `S` from the CHSH group.
///
/// Records outside the four CHSH combinations, and lost records, are
/// ignored. The standard error treats the combinations as independent
/// samples: `sqrt(sum (1 - E^2) / N)`.
pub fn estimate_chsh(records: &[PairRecord]) -> Result<ChshEstimate, E91Error> {
    let mut counts = [OutcomeCounts::default(); 4];
    for m in records.iter().filter_map(|r| r.measurement.as_ref()) {
        let Some(slot) = CHSH_COMBINATIONS
            .iter()
            .position(|&(a, b, _)| a == m.alice_basis && b == m.bob_basis)
        else {
            continue;
        };
        let c = &mut counts[slot];
        match (m.alice_outcome.value(), m.bob_outcome.value()) {
            (1, 1) => c.plus_plus += 1,
            (-1, -1) => c.minus_minus += 1,
            (1, -1) => c.plus_minus += 1,
            _ => c.minus_plus += 1,
        }
    }

    let mut estimates = Vec::with_capacity(4);
    let mut s = 0.0;
    let mut variance = 0.0;
    for (&(alice, bob, sign), c) in CHSH_COMBINATIONS.iter().zip(counts) {
        if c.total() == 0 {
            return Err(E91Error::InsufficientData {
                alice: alice.number(),
                bob: bob.number(),
            });
        }
        let value = c.correlation();
        s += sign * value;
        variance += (1.0 - value * value) / c.total() as f64;
        estimates.push(CorrelationEstimate {
            alice,
            bob,
            counts: c,
            value,
        });
    }
    Ok(ChshEstimate {
        e11: estimates[0],
        e13: estimates[1],
        e31: estimates[2],
        e33: estimates[3],
        s,
        stderr_s: variance.sqrt(),
    })
}

/// Expected `S` for a source with a closed-form correlation.
pub fn chsh_closed_form(source: &PairSource, analyzers: &AnalyzerSet) -> Result<f64, E91Error> {
    CHSH_COMBINATIONS.iter().try_fold(0.0, |s, &(a, b, sign)| {
        let e = correlation_closed_form(source, analyzers.alice_angle(a), analyzers.bob_angle(b))?;
        Ok(s + sign * e)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `|S|` is consistent with a product-state source; no key.
    Abort,
    /// Partially entangled; a key needs privacy amplification first.
    QpaRequired,
    /// `|S|` is consistent with perfect singlets.
    Secure,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Abort => "abort",
            Verdict::QpaRequired => "qpa_required",
            Verdict::Secure => "secure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelVerdict {
    pub verdict: Verdict,
    pub s: f64,
    pub stderr_s: f64,
    pub z: f64,
    /// `sqrt(2) + z * stderr`; at or below this the channel is abandoned.
    pub abort_threshold: f64,
    /// `2 sqrt(2) - z * stderr`; at or above this the channel is secure.
    pub secure_threshold: f64,
}

pub fn channel_verdict(estimate: &ChshEstimate, z: f64) -> ChannelVerdict {
    let margin = z * estimate.stderr_s;
    let abort_threshold = SQRT_2 + margin;
    let secure_threshold = 2.0 * SQRT_2 - margin;
    let magnitude = estimate.s.abs();
    let verdict = if magnitude <= abort_threshold {
        Verdict::Abort
    } else if magnitude >= secure_threshold {
        Verdict::Secure
    } else {
        Verdict::QpaRequired
    };
    ChannelVerdict {
        verdict,
        s: estimate.s,
        stderr_s: estimate.stderr_s,
        z,
        abort_threshold,
        secure_threshold,
    }
}
