use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{mod_inverse, mod_pow, CryptoError, RsaPublicKey};

/// Default refusal threshold for trial division: numbers above 2^64.
pub fn default_trial_division_cap() -> BigUint {
    BigUint::one() << 64u32
}

/// Default step budget for order finding by iteration.
pub const DEFAULT_ORDER_STEP_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum TrialDivision {
    /// `smallest * cofactor == n`, `smallest` the least prime factor.
    Factored {
        smallest: BigUint,
        cofactor: BigUint,
        divisions: u64,
    },
    Prime {
        divisions: u64,
    },
    /// `n` exceeds the cap; no division was attempted.
    OverCap {
        cap: BigUint,
        estimated_divisions: BigUint,
    },
}

/// Trial division by 2, 3, ..., floor(sqrt n) with the default 2^64 cap.
pub fn trial_division_factor(n: &BigUint) -> Result<TrialDivision, CryptoError> {
    trial_division_factor_capped(n, &default_trial_division_cap())
}

/// Trial division by every integer from 2 up to `floor(sqrt n)`, counting
/// divisions. Numbers above `cap` get a cost estimate (`floor(sqrt n) - 1`
/// divisions in the worst case) instead.
pub fn trial_division_factor_capped(
    n: &BigUint,
    cap: &BigUint,
) -> Result<TrialDivision, CryptoError> {
    if *n < BigUint::from(2u8) {
        return Err(CryptoError::TrialDivisionDomain(n.clone()));
    }
    if n > cap || n.to_u128().is_none() {
        return Ok(TrialDivision::OverCap {
            cap: cap.clone(),
            estimated_divisions: n.sqrt() - 1u8,
        });
    }
    let value = n.to_u128().expect("checked above");
    let mut divisions = 0u64;
    let mut d: u128 = 2;
    while d * d <= value {
        divisions += 1;
        if value.is_multiple_of(d) {
            return Ok(TrialDivision::Factored {
                smallest: BigUint::from(d),
                cofactor: BigUint::from(value / d),
                divisions,
            });
        }
        d += 1;
    }
    Ok(TrialDivision::Prime { divisions })
}

/// Least `r >= 1` with `a^r = 1 (mod n)`, by iteration.
pub fn multiplicative_order(a: &BigUint, n: &BigUint) -> Result<BigUint, CryptoError> {
    multiplicative_order_bounded(a, n, DEFAULT_ORDER_STEP_CAP)
}

pub fn multiplicative_order_bounded(
    a: &BigUint,
    n: &BigUint,
    max_steps: u64,
) -> Result<BigUint, CryptoError> {
    if *n < BigUint::from(2u8) {
        return Err(CryptoError::ModulusTooSmall(n.clone()));
    }
    let base = a % n;
    let gcd = base.gcd(n);
    if !gcd.is_one() {
        return Err(CryptoError::NotCoprime {
            a: a.clone(),
            n: n.clone(),
            gcd,
        });
    }
    let mut power = base.clone();
    let mut r = 1u64;
    while !power.is_one() {
        if r >= max_steps {
            return Err(CryptoError::OrderSearchExhausted {
                a: a.clone(),
                n: n.clone(),
                cap: max_steps,
            });
        }
        power = power * &base % n;
        r += 1;
    }
    Ok(BigUint::from(r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum OrderAttackMethod {
    /// The cryptogram's order `r` gave `d' = e^-1 mod r`.
    Order {
        order: BigUint,
        reduced_exponent: BigUint,
    },
    /// `gcd(C, n)` was already a factor of `n`.
    GcdShortcut { factor: BigUint },
    /// `C = 0` can only come from `P = 0`.
    ZeroBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderAttack {
    pub plaintext: BigUint,
    pub method: OrderAttackMethod,
}

/// Recovers `P` from `C = P^e mod n` without the private key.
///
/// The plaintext's order modulo `n` equals the cryptogram's order `r`
/// (since `e` is coprime to it), so `C^(e^-1 mod r)` is `P`.
pub fn rsa_order_attack(cipher: &BigUint, key: &RsaPublicKey) -> Result<OrderAttack, CryptoError> {
    let n = &key.n;
    if cipher >= n {
        return Err(CryptoError::BlockTooLarge {
            block: cipher.clone(),
            modulus: n.clone(),
        });
    }
    if cipher.is_zero() {
        return Ok(OrderAttack {
            plaintext: BigUint::zero(),
            method: OrderAttackMethod::ZeroBlock,
        });
    }
    let g = cipher.gcd(n);
    let attack = if !g.is_one() {
        let cofactor = n / &g;
        let phi = (&g - 1u8) * (&cofactor - 1u8);
        let d = mod_inverse(&key.e, &phi)?;
        OrderAttack {
            plaintext: mod_pow(cipher, &d, n)?,
            method: OrderAttackMethod::GcdShortcut { factor: g },
        }
    } else {
        let order = multiplicative_order(cipher, n)?;
        let reduced_exponent =
            mod_inverse(&key.e, &order).map_err(|_| CryptoError::AttackFailed {
                e: key.e.clone(),
                order: order.clone(),
            })?;
        OrderAttack {
            plaintext: mod_pow(cipher, &reduced_exponent, n)?,
            method: OrderAttackMethod::Order {
                order,
                reduced_exponent,
            },
        }
    };
    if mod_pow(&attack.plaintext, &key.e, n)? != *cipher {
        let order = match &attack.method {
            OrderAttackMethod::Order { order, .. } => order.clone(),
            _ => BigUint::zero(),
        };
        return Err(CryptoError::AttackFailed {
            e: key.e.clone(),
            order,
        });
    }
    Ok(attack)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn factors_small_semiprimes() {
        assert_eq!(
            trial_division_factor(&big(15)).unwrap(),
            TrialDivision::Factored {
                smallest: big(3),
                cofactor: big(5),
                divisions: 2
            }
        );
        match trial_division_factor(&big(571_247)).unwrap() {
            TrialDivision::Factored {
                smallest,
                cofactor,
                divisions,
            } => {
                assert_eq!((smallest, cofactor), (big(739), big(773)));
                assert_eq!(divisions, 738);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn primes_cost_sqrt_n_divisions() {
        assert_eq!(
            trial_division_factor(&big(2)).unwrap(),
            TrialDivision::Prime { divisions: 0 }
        );
        assert_eq!(
            trial_division_factor(&big(97)).unwrap(),
            TrialDivision::Prime { divisions: 8 }
        );
        // 1_000_003 is prime; floor(sqrt) = 1000, so 999 divisions.
        assert_eq!(
            trial_division_factor(&big(1_000_003)).unwrap(),
            TrialDivision::Prime { divisions: 999 }
        );
    }

    #[test]
    fn refuses_above_cap() {
        let n = (BigUint::one() << 64u32) + 1u8;
        match trial_division_factor(&n).unwrap() {
            TrialDivision::OverCap {
                estimated_divisions,
                ..
            } => {
                assert_eq!(estimated_divisions, (BigUint::one() << 32u32) - 1u8);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            trial_division_factor_capped(&big(1000), &big(999)).unwrap(),
            TrialDivision::OverCap { .. }
        ));
        assert!(trial_division_factor(&big(1)).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(&big(11), &big(15)).unwrap(), big(2));
        assert_eq!(multiplicative_order(&big(7), &big(15)).unwrap(), big(4));
        assert_eq!(multiplicative_order(&big(1), &big(15)).unwrap(), big(1));
        assert!(matches!(
            multiplicative_order(&big(5), &big(15)),
            Err(CryptoError::NotCoprime { .. })
        ));
        assert!(matches!(
            multiplicative_order_bounded(&big(2), &big(1_000_003), 10),
            Err(CryptoError::OrderSearchExhausted { .. })
        ));
    }

    #[test]
    fn order_attack_small() {
        let key = RsaPublicKey {
            n: big(15),
            e: big(3),
        };
        let attack = rsa_order_attack(&big(8), &key).unwrap();
        assert_eq!(attack.plaintext, big(2));
        assert_eq!(
            attack.method,
            OrderAttackMethod::Order {
                order: big(4),
                reduced_exponent: big(3)
            }
        );
        assert_eq!(rsa_order_attack(&big(1), &key).unwrap().plaintext, big(1));
        assert_eq!(rsa_order_attack(&big(0), &key).unwrap().plaintext, big(0));
    }

    #[test]
    fn order_attack_gcd_shortcut() {
        // 6^3 = 216 = 6 mod 15, and gcd(6, 15) = 3.
        let key = RsaPublicKey {
            n: big(15),
            e: big(3),
        };
        let attack = rsa_order_attack(&big(6), &key).unwrap();
        assert_eq!(attack.plaintext, big(6));
        assert_eq!(
            attack.method,
            OrderAttackMethod::GcdShortcut { factor: big(3) }
        );
    }

    #[test]
    fn order_attack_worked_example() {
        let key = RsaPublicKey {
            n: big(571_247),
            e: big(179),
        };
        for (c, p) in [
            (540_561, 21_908),
            (447_313, 71_414),
            (33_313, 160_708),
            (555_657, 231_503),
        ] {
            assert_eq!(rsa_order_attack(&big(c), &key).unwrap().plaintext, big(p));
        }
    }
}
