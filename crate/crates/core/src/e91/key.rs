use serde::{Deserialize, Serialize};

use super::{Basis, PairRecord};

/// Aligned analyzer combinations whose outcomes become key bits.
pub const KEY_COMBINATIONS: [(Basis, Basis); 2] =
    [(Basis::Two, Basis::One), (Basis::Three, Basis::Two)];

/// Alice's raw bits are the key; Bob flips his because singlet outcomes
/// anticorrelate on aligned analyzers.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SiftedKey {
    pub bits: Vec<u8>,
    pub bob_bits: Vec<u8>,
    pub pair_indices: Vec<u64>,
    pub mismatches: usize,
    /// Fraction of positions where Bob's flipped bit differs from Alice's.
    /// Zero for an empty key; check [`SiftedKey::is_empty`].
    pub qber: f64,
}

impl SiftedKey {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Key as a string of `0`/`1` characters.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|b| if *b == 1 { '1' } else { '0' })
            .collect()
    }
}

pub fn extract_key(records: &[PairRecord]) -> SiftedKey {
    let mut key = SiftedKey::default();
    for r in records {
        let Some(m) = r.measurement else { continue };
        if !KEY_COMBINATIONS.contains(&(m.alice_basis, m.bob_basis)) {
            continue;
        }
        let alice = m.alice_outcome.bit();
        let bob = 1 - m.bob_outcome.bit();
        if alice != bob {
            key.mismatches += 1;
        }
        key.bits.push(alice);
        key.bob_bits.push(bob);
        key.pair_indices.push(r.pair_index);
    }
    if !key.is_empty() {
        key.qber = key.mismatches as f64 / key.len() as f64;
    }
    key
}
