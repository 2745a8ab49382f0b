use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{decode_text, encode_text, is_probable_prime, mod_inverse, mod_pow, CryptoError};

/// Serde adapter writing `BigUint` as a decimal string.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!(
                "`{text}` is not a decimal integer"
            )));
        }
        BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("`{text}` is not a decimal integer")))
    }
}

/// Decimal digit count, with `digits(0) == 1`.
fn digits(n: &BigUint) -> usize {
    n.to_str_radix(10).len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaPublicKey {
    #[serde(with = "decimal")]
    pub n: BigUint,
    #[serde(with = "decimal")]
    pub e: BigUint,
}

impl RsaPublicKey {
    /// Width of plaintext blocks, `floor(log10 n)` digits, so every block of
    /// that width is below `n`.
    pub fn plain_block_width(&self) -> usize {
        digits(&self.n).saturating_sub(1).max(1)
    }

    /// Width of cipher blocks: all residues below `n` fit.
    pub fn cipher_block_width(&self) -> usize {
        digits(&self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaPrivateKey {
    #[serde(with = "decimal")]
    pub p: BigUint,
    #[serde(with = "decimal")]
    pub q: BigUint,
    #[serde(with = "decimal")]
    pub d: BigUint,
}

/// Serializes flat as `{"n","e","p","q","d"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaKeyPair {
    #[serde(flatten)]
    pub public: RsaPublicKey,
    #[serde(flatten)]
    pub private: RsaPrivateKey,
}

impl RsaKeyPair {
    pub fn phi(&self) -> BigUint {
        (&self.private.p - 1u8) * (&self.private.q - 1u8)
    }
}

/// Builds a key pair from explicit primes and public exponent.
///
/// `d` is the inverse of `e` modulo `(p-1)(q-1)`, in `(0, (p-1)(q-1))`.
pub fn rsa_generate(p: &BigUint, q: &BigUint, e: &BigUint) -> Result<RsaKeyPair, CryptoError> {
    if p == q {
        return Err(CryptoError::EqualPrimes);
    }
    for prime in [p, q] {
        if !is_probable_prime(prime) {
            return Err(CryptoError::NotPrime(prime.clone()));
        }
    }
    let phi = (p - 1u8) * (q - 1u8);
    if !e.gcd(&phi).is_one() || e.is_zero() {
        return Err(CryptoError::ExponentNotCoprime { e: e.clone(), phi });
    }
    let d = mod_inverse(e, &phi)?;
    Ok(RsaKeyPair {
        public: RsaPublicKey {
            n: p * q,
            e: e.clone(),
        },
        private: RsaPrivateKey {
            p: p.clone(),
            q: q.clone(),
            d,
        },
    })
}

fn random_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    loop {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        if is_probable_prime(&candidate) {
            return candidate;
        }
    }
}

/// Random key pair with two distinct `prime_bits`-bit primes and a random
/// odd `e`, redrawn until coprime to `(p-1)(q-1)`.
pub fn rsa_generate_random<R: Rng + ?Sized>(
    prime_bits: u64,
    rng: &mut R,
) -> Result<RsaKeyPair, CryptoError> {
    if prime_bits < 3 {
        return Err(CryptoError::BitLengthTooSmall(prime_bits));
    }
    let p = random_prime(prime_bits, rng);
    let q = loop {
        let q = random_prime(prime_bits, rng);
        if q != p {
            break q;
        }
    };
    let phi = (&p - 1u8) * (&q - 1u8);
    let three = BigUint::from(3u8);
    let e = loop {
        let mut e = rng.gen_biguint_range(&three, &phi);
        e.set_bit(0, true);
        if e < phi && e.gcd(&phi).is_one() {
            break e;
        }
    };
    rsa_generate(&p, &q, &e)
}

/// Fixed-width decimal blocks. Rendering keeps leading zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedMessage {
    pub block_width: usize,
    pub blocks: Vec<BigUint>,
}

impl BlockedMessage {
    pub fn new(block_width: usize, blocks: Vec<BigUint>) -> Result<Self, CryptoError> {
        if let Some(block) = blocks.iter().find(|b| digits(b) > block_width) {
            return Err(CryptoError::BlockTooWide {
                block: block.clone(),
                width: block_width,
            });
        }
        Ok(Self {
            block_width,
            blocks,
        })
    }

    /// Whitespace-separated blocks that all share one width.
    pub fn parse(text: &str) -> Result<Self, CryptoError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let Some(first) = tokens.first() else {
            return Err(CryptoError::MalformedBlocks("no blocks".into()));
        };
        let width = first.len();
        let mut blocks = Vec::with_capacity(tokens.len());
        for token in &tokens {
            if token.len() != width {
                return Err(CryptoError::MalformedBlocks(format!(
                    "block `{token}` is not {width} digits wide"
                )));
            }
            if !token.bytes().all(|b| b.is_ascii_digit()) {
                return Err(CryptoError::MalformedBlocks(format!(
                    "`{token}` is not decimal"
                )));
            }
            blocks.push(BigUint::parse_bytes(token.as_bytes(), 10).expect("checked digits"));
        }
        Ok(Self {
            block_width: width,
            blocks,
        })
    }

    fn check_below(&self, modulus: &BigUint) -> Result<(), CryptoError> {
        match self.blocks.iter().find(|b| *b >= modulus) {
            Some(block) => Err(CryptoError::BlockTooLarge {
                block: block.clone(),
                modulus: modulus.clone(),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for BlockedMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(
                f,
                "{:0>width$}",
                block.to_str_radix(10),
                width = self.block_width
            )?;
        }
        Ok(())
    }
}

/// Encodes text with the 30-symbol alphabet and cuts the digit string into
/// `block_width`-digit blocks. The tail is padded with `0` digits, which can
/// never be confused with a code since codes start at 01.
pub fn blocks_from_text(text: &str, block_width: usize) -> Result<BlockedMessage, CryptoError> {
    if block_width == 0 {
        return Err(CryptoError::MalformedBlocks(
            "block width must be positive".into(),
        ));
    }
    let mut digits: String = encode_text(text)?
        .iter()
        .map(|c| format!("{c:02}"))
        .collect();
    while !digits.len().is_multiple_of(block_width) {
        digits.push('0');
    }
    let blocks = digits
        .as_bytes()
        .chunks(block_width)
        .map(|chunk| BigUint::parse_bytes(chunk, 10).expect("ascii digits"))
        .collect();
    Ok(BlockedMessage {
        block_width,
        blocks,
    })
}

/// Inverse of [`blocks_from_text`].
pub fn text_from_blocks(message: &BlockedMessage) -> Result<String, CryptoError> {
    let mut digits: String = message.to_string().split_whitespace().collect();
    if digits.len() % 2 == 1 {
        if !digits.ends_with('0') {
            return Err(CryptoError::MalformedBlocks(
                "odd digit count without padding".into(),
            ));
        }
        digits.pop();
    }
    while digits.ends_with("00") {
        digits.truncate(digits.len() - 2);
    }
    let codes = digits
        .as_bytes()
        .chunks(2)
        .map(|pair| {
            std::str::from_utf8(pair)
                .expect("ascii")
                .parse::<u8>()
                .expect("digits")
        })
        .collect::<Vec<_>>();
    decode_text(&codes)
}

/// `C = P^e mod n` per block; cipher blocks are rendered `digits(n)` wide.
pub fn rsa_encrypt(
    message: &BlockedMessage,
    key: &RsaPublicKey,
) -> Result<BlockedMessage, CryptoError> {
    message.check_below(&key.n)?;
    let blocks = message
        .blocks
        .iter()
        .map(|p| mod_pow(p, &key.e, &key.n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockedMessage {
        block_width: key.cipher_block_width(),
        blocks,
    })
}

/// `P = C^d mod n` per block, rendered `plain_width` digits wide.
pub fn rsa_decrypt(
    cipher: &BlockedMessage,
    key: &RsaKeyPair,
    plain_width: usize,
) -> Result<BlockedMessage, CryptoError> {
    cipher.check_below(&key.public.n)?;
    let blocks = cipher
        .blocks
        .iter()
        .map(|c| mod_pow(c, &key.private.d, &key.public.n))
        .collect::<Result<Vec<_>, _>>()?;
    BlockedMessage::new(plain_width, blocks)
}
