//! Classical cryptography: the 30-symbol alphabet, a mod-30 one-time pad,
//! textbook RSA on arbitrary-precision integers, and the classical attacks
//! on it (trial division and the multiplicative-order decryption).

mod alphabet;
mod arith;
mod attacks;
mod primality;
mod rsa;
mod vernam;

pub use alphabet::{decode_text, encode_text, parse_codes, render_codes, ALPHABET};
pub use arith::{extended_gcd, mod_inverse, mod_pow, ExtendedGcd};
pub use attacks::{
    default_trial_division_cap, multiplicative_order, multiplicative_order_bounded,
    rsa_order_attack, trial_division_factor, trial_division_factor_capped, OrderAttack,
    OrderAttackMethod, TrialDivision, DEFAULT_ORDER_STEP_CAP,
};
pub use primality::{is_probable_prime, MILLER_RABIN_ROUNDS};
pub use rsa::{
    blocks_from_text, rsa_decrypt, rsa_encrypt, rsa_generate, rsa_generate_random,
    text_from_blocks, BlockedMessage, RsaKeyPair, RsaPrivateKey, RsaPublicKey,
};
pub use vernam::{vernam_decrypt, vernam_encrypt, PadKey};

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CryptoError {
    #[error("character {character:?} at position {position} is not in the 30-symbol alphabet")]
    UnsupportedCharacter { position: usize, character: char },
    #[error("code {code} at position {position} is outside 1..=30")]
    InvalidCode { position: usize, code: u32 },
    #[error("cannot parse `{0}` as a two-digit code")]
    MalformedCode(String),
    #[error("pad key has {key_len} symbols, message needs {message_len}")]
    KeyExhausted { key_len: usize, message_len: usize },
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigUint),
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("{value} has no inverse modulo {modulus}")]
    NotInvertible { value: BigUint, modulus: BigUint },
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("p and q must differ")]
    EqualPrimes,
    #[error("e = {e} is not coprime to (p-1)(q-1) = {phi}")]
    ExponentNotCoprime { e: BigUint, phi: BigUint },
    #[error("prime size {0} bits is too small")]
    BitLengthTooSmall(u64),
    #[error("block {block} is not below the modulus {modulus}")]
    BlockTooLarge { block: BigUint, modulus: BigUint },
    #[error("block {block} does not fit in {width} digits")]
    BlockTooWide { block: BigUint, width: usize },
    #[error("cannot parse block message: {0}")]
    MalformedBlocks(String),
    #[error("trial division needs n >= 2, got {0}")]
    TrialDivisionDomain(BigUint),
    #[error("gcd({a}, {n}) = {gcd}, so {a} has no multiplicative order")]
    NotCoprime {
        a: BigUint,
        n: BigUint,
        gcd: BigUint,
    },
    #[error("order of {a} modulo {n} not found within {cap} steps")]
    OrderSearchExhausted { a: BigUint, n: BigUint, cap: u64 },
    #[error("e = {e} is not invertible modulo the order {order}")]
    AttackFailed { e: BigUint, order: BigUint },
}
