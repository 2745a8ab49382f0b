use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::CryptoError;

/// `base^exponent mod modulus` by left-to-right square-and-multiply.
pub fn mod_pow(
    base: &BigUint,
    exponent: &BigUint,
    modulus: &BigUint,
) -> Result<BigUint, CryptoError> {
    if *modulus < BigUint::from(2u8) {
        return Err(CryptoError::ModulusTooSmall(modulus.clone()));
    }
    let base = base % modulus;
    let mut acc = BigUint::one();
    for bit in (0..exponent.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exponent.bit(bit) {
            acc = acc * &base % modulus;
        }
    }
    Ok(acc)
}

/// `g = gcd(a, b)` with Bezout coefficients `a*x + b*y = g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGcd {
    pub gcd: BigUint,
    pub x: BigInt,
    pub y: BigInt,
}

pub fn extended_gcd(a: &BigUint, b: &BigUint) -> Result<ExtendedGcd, CryptoError> {
    if a.is_zero() && b.is_zero() {
        return Err(CryptoError::ZeroGcd);
    }
    if !a.is_zero() && (b % a).is_zero() {
        return Ok(ExtendedGcd {
            gcd: a.clone(),
            x: BigInt::one(),
            y: BigInt::zero(),
        });
    }
    let mut r = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let mut s = (BigInt::one(), BigInt::zero());
    let mut t = (BigInt::zero(), BigInt::one());
    while !r.1.is_zero() {
        let q = &r.0 / &r.1;
        r = (r.1.clone(), &r.0 - &q * &r.1);
        s = (s.1.clone(), &s.0 - &q * &s.1);
        t = (t.1.clone(), &t.0 - &q * &t.1);
    }
    Ok(ExtendedGcd {
        gcd: r
            .0
            .to_biguint()
            .expect("remainders of nonnegative inputs stay nonnegative"),
        x: s.0,
        y: t.0,
    })
}

/// Inverse of `value` modulo `modulus`, in `[0, modulus)`.
pub fn mod_inverse(value: &BigUint, modulus: &BigUint) -> Result<BigUint, CryptoError> {
    let not_invertible = || CryptoError::NotInvertible {
        value: value.clone(),
        modulus: modulus.clone(),
    };
    if modulus.is_zero() {
        return Err(not_invertible());
    }
    if modulus.is_one() {
        return Ok(BigUint::zero());
    }
    let reduced = value % modulus;
    let eg = extended_gcd(&reduced, modulus).map_err(|_| not_invertible())?;
    if !eg.gcd.is_one() {
        return Err(not_invertible());
    }
    let m = BigInt::from(modulus.clone());
    Ok(eg
        .x
        .mod_floor(&m)
        .to_biguint()
        .expect("mod_floor by a positive modulus is nonnegative"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn small_powers() {
        assert_eq!(mod_pow(&big(11), &big(2), &big(15)).unwrap(), big(1));
        assert_eq!(mod_pow(&big(7), &big(0), &big(15)).unwrap(), big(1));
        assert_eq!(mod_pow(&big(0), &big(5), &big(15)).unwrap(), big(0));
    }

    #[test]
    fn worked_rsa_block() {
        let n = big(571_247);
        assert_eq!(mod_pow(&big(21_908), &big(179), &n).unwrap(), big(540_561));
        assert_eq!(
            mod_pow(&big(540_561), &big(515_627), &n).unwrap(),
            big(21_908)
        );
    }

    #[test]
    fn modulus_must_be_at_least_two() {
        assert!(matches!(
            mod_pow(&big(3), &big(3), &big(1)),
            Err(CryptoError::ModulusTooSmall(_))
        ));
        assert!(mod_pow(&big(3), &big(3), &big(0)).is_err());
    }

    #[test]
    fn bezout_and_inverse() {
        let eg = extended_gcd(&big(179), &big(569_736)).unwrap();
        assert_eq!(eg.gcd, big(1));
        assert_eq!(
            BigInt::from(179) * &eg.x + BigInt::from(569_736) * &eg.y,
            BigInt::from(1)
        );
        assert_eq!(mod_inverse(&big(179), &big(569_736)).unwrap(), big(515_627));
    }

    #[test]
    fn gcd_of_ten_and_fifteen() {
        let eg = extended_gcd(&big(10), &big(15)).unwrap();
        assert_eq!(eg.gcd, big(5));
        assert_eq!(
            BigInt::from(10) * eg.x + BigInt::from(15) * eg.y,
            BigInt::from(5)
        );
    }

    #[test]
    fn gcd_edge_cases() {
        for k in [0u64, 1, 2, 17] {
            let eg = extended_gcd(&big(1), &big(k)).unwrap();
            assert_eq!(
                (eg.gcd, eg.x, eg.y),
                (big(1), BigInt::from(1), BigInt::from(0))
            );
        }
        let eg = extended_gcd(&big(0), &big(9)).unwrap();
        assert_eq!(eg.gcd, big(9));
        assert_eq!(extended_gcd(&big(0), &big(0)), Err(CryptoError::ZeroGcd));
    }

    #[test]
    fn inverse_failures() {
        assert!(mod_inverse(&big(4), &big(8)).is_err());
        assert_eq!(mod_inverse(&big(3), &big(4)).unwrap(), big(3));
    }
}
