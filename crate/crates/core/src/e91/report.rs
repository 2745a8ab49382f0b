use serde_json::Value;

use super::{ChannelVerdict, ChshEstimate, SiftedKey};
use crate::report::{float, integer, object};

/// Estimate/verdict export with the fields
/// `e11, e13, e31, e33, s, stderr_s, verdict, key_length, qber, seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct E91Summary {
    pub estimate: ChshEstimate,
    pub verdict: ChannelVerdict,
    pub key_length: usize,
    pub qber: f64,
    pub seed: u64,
}

impl E91Summary {
    pub fn new(
        estimate: ChshEstimate,
        verdict: ChannelVerdict,
        key: &SiftedKey,
        seed: u64,
    ) -> Self {
        Self {
            estimate,
            verdict,
            key_length: key.len(),
            qber: key.qber,
            seed,
        }
    }

    pub fn to_json(&self) -> Value {
        object([
            ("e11", float(self.estimate.e11.value)),
            ("e13", float(self.estimate.e13.value)),
            ("e31", float(self.estimate.e31.value)),
            ("e33", float(self.estimate.e33.value)),
            ("s", float(self.estimate.s)),
            ("stderr_s", float(self.estimate.stderr_s)),
            (
                "verdict",
                Value::String(self.verdict.verdict.as_str().to_string()),
            ),
            ("key_length", integer(self.key_length)),
            ("qber", float(self.qber)),
            ("seed", integer(self.seed)),
        ])
    }
}
