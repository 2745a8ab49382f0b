use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CryptoError;

const MODULUS: u8 = 30;

/// One-time pad key: symbols drawn from 1..=30.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PadKey(Vec<u8>);

impl PadKey {
    pub fn new(symbols: Vec<u8>) -> Result<Self, CryptoError> {
        check_codes(&symbols)?;
        Ok(Self(symbols))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_range(1..=MODULUS)).collect())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u8>> for PadKey {
    type Error = CryptoError;

    fn try_from(v: Vec<u8>) -> Result<Self, Self::Error> {
        PadKey::new(v)
    }
}

impl From<PadKey> for Vec<u8> {
    fn from(k: PadKey) -> Vec<u8> {
        k.0
    }
}

fn check_codes(codes: &[u8]) -> Result<(), CryptoError> {
    match codes.iter().position(|c| !(1..=MODULUS).contains(c)) {
        Some(position) => Err(CryptoError::InvalidCode {
            position,
            code: u32::from(codes[position]),
        }),
        None => Ok(()),
    }
}

fn check_key(message_len: usize, key: &PadKey) -> Result<(), CryptoError> {
    if key.len() < message_len {
        return Err(CryptoError::KeyExhausted {
            key_len: key.len(),
            message_len,
        });
    }
    Ok(())
}

/// Maps any residue onto the representative set 1..=30 (0 becomes 30).
fn representative(value: i16) -> u8 {
    let r = value.rem_euclid(i16::from(MODULUS)) as u8;
    if r == 0 {
        MODULUS
    } else {
        r
    }
}

/// `c_i = p_i + k_i (mod 30)`, reported in 1..=30.
pub fn vernam_encrypt(plain: &[u8], key: &PadKey) -> Result<Vec<u8>, CryptoError> {
    check_codes(plain)?;
    check_key(plain.len(), key)?;
    Ok(plain
        .iter()
        .zip(key.symbols())
        .map(|(&p, &k)| representative(i16::from(p) + i16::from(k)))
        .collect())
}

/// `p_i = c_i - k_i (mod 30)`, reported in 1..=30.
pub fn vernam_decrypt(cipher: &[u8], key: &PadKey) -> Result<Vec<u8>, CryptoError> {
    check_codes(cipher)?;
    check_key(cipher.len(), key)?;
    Ok(cipher
        .iter()
        .zip(key.symbols())
        .map(|(&c, &k)| representative(i16::from(c) - i16::from(k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(symbols: &[u8]) -> PadKey {
        PadKey::new(symbols.to_vec()).unwrap()
    }

    #[test]
    fn single_columns() {
        assert_eq!(vernam_encrypt(&[8], &key(&[24])).unwrap(), vec![2]);
        assert_eq!(vernam_encrypt(&[30], &key(&[3])).unwrap(), vec![3]);
        // 15 + 15 = 30 stays 30 rather than becoming 0.
        assert_eq!(vernam_encrypt(&[15], &key(&[15])).unwrap(), vec![30]);
        assert_eq!(vernam_decrypt(&[30], &key(&[15])).unwrap(), vec![15]);
    }

    #[test]
    fn short_key_is_an_error() {
        assert_eq!(
            vernam_encrypt(&[1, 2, 3], &key(&[1, 2])),
            Err(CryptoError::KeyExhausted {
                key_len: 2,
                message_len: 3
            })
        );
        assert!(vernam_decrypt(&[1, 2, 3], &key(&[1])).is_err());
    }

    #[test]
    fn longer_key_is_fine() {
        let k = key(&[1, 2, 3, 4]);
        let c = vernam_encrypt(&[5, 6], &k).unwrap();
        assert_eq!(vernam_decrypt(&c, &k).unwrap(), vec![5, 6]);
    }

    #[test]
    fn key_range_checked() {
        assert!(PadKey::new(vec![0]).is_err());
        assert!(PadKey::new(vec![31]).is_err());
        assert!(vernam_encrypt(&[0], &key(&[1])).is_err());
    }
}
