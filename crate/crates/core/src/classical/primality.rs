use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Total Miller-Rabin rounds: the fixed bases below, then random ones.
pub const MILLER_RABIN_ROUNDS: usize = 40;

const FIXED_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with 40 rounds.
///
/// The random bases come from a generator seeded by `n` itself, so the
/// answer for a given `n` never changes between calls.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    for &p in &FIXED_BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().expect("n - 1 > 0");
    let d = &n_minus_1 >> s;

    let witness_says_composite = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    seed[31] ^= (n.bits() & 0xff) as u8;
    let mut rng = ChaCha12Rng::from_seed(seed);

    let fixed = FIXED_BASES.iter().map(|&b| BigUint::from(b));
    let random = std::iter::repeat_with(|| rng.gen_biguint_range(&two, &n_minus_1));
    fixed
        .chain(random)
        .take(MILLER_RABIN_ROUNDS)
        .all(|a| !witness_says_composite(&a))
}
