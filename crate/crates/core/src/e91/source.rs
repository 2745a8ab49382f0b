use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AnalyzerSet, Basis, E91Error, Outcome};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// One product-state preparation: Alice's particle polarized along
/// `alice_direction`, Bob's along `bob_direction`, chosen with `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductComponent {
    pub weight: f64,
    pub alice_direction: f64,
    pub bob_direction: f64,
}

/// Who prepares the pairs and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairSource {
    /// Perfect singlets.
    Singlet,
    /// Singlet with probability `visibility`, otherwise a product pair with
    /// independent uniformly random in-plane directions.
    Werner { visibility: f64 },
    /// Eve prepares each particle separately from a finite distribution.
    ProductMixture { components: Vec<ProductComponent> },
    /// Eve measures each singlet along an angle drawn uniformly from
    /// `eve_angles` and forwards the two post-measurement states.
    InterceptResend { eve_angles: Vec<f64> },
}

impl PairSource {
    pub fn werner(visibility: f64) -> Result<Self, E91Error> {
        let source = PairSource::Werner { visibility };
        source.validate()?;
        Ok(source)
    }

    pub fn product_mixture(components: Vec<ProductComponent>) -> Result<Self, E91Error> {
        let source = PairSource::ProductMixture { components };
        source.validate()?;
        Ok(source)
    }

    pub fn intercept_resend(eve_angles: Vec<f64>) -> Result<Self, E91Error> {
        let source = PairSource::InterceptResend { eve_angles };
        source.validate()?;
        Ok(source)
    }

    pub fn validate(&self) -> Result<(), E91Error> {
        match self {
            PairSource::Singlet => Ok(()),
            PairSource::Werner { visibility } => {
                if (0.0..=1.0).contains(visibility) {
                    Ok(())
                } else {
                    Err(E91Error::InvalidVisibility(*visibility))
                }
            }
            PairSource::ProductMixture { components } => {
                if components.is_empty() {
                    return Err(E91Error::EmptyMixture);
                }
                let mut total = 0.0;
                for c in components {
                    if !c.weight.is_finite() || c.weight <= 0.0 {
                        return Err(E91Error::NonPositiveWeight(c.weight));
                    }
                    for angle in [c.alice_direction, c.bob_direction] {
                        if !angle.is_finite() {
                            return Err(E91Error::NonFiniteAngle(angle));
                        }
                    }
                    total += c.weight;
                }
                if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(E91Error::WeightsNotNormalized(total));
                }
                Ok(())
            }
            PairSource::InterceptResend { eve_angles } => {
                if eve_angles.is_empty() {
                    return Err(E91Error::NoEveAngles);
                }
                match eve_angles.iter().find(|a| !a.is_finite()) {
                    Some(a) => Err(E91Error::NonFiniteAngle(*a)),
                    None => Ok(()),
                }
            }
        }
    }

    /// The product mixture an intercept-resend attack actually delivers.
    ///
    /// For each Eve angle `t` (weight `1/m`), Alice receives spin along `t`
    /// or `t + pi` with equal odds and Bob the opposite direction.
    pub fn equivalent_product_mixture(&self) -> Option<PairSource> {
        let PairSource::InterceptResend { eve_angles } = self else {
            return None;
        };
        let weight = 0.5 / eve_angles.len() as f64;
        let components = eve_angles
            .iter()
            .flat_map(|&t| {
                let flipped = t + std::f64::consts::PI;
                [
                    ProductComponent {
                        weight,
                        alice_direction: t,
                        bob_direction: flipped,
                    },
                    ProductComponent {
                        weight,
                        alice_direction: flipped,
                        bob_direction: t,
                    },
                ]
            })
            .collect();
        Some(PairSource::ProductMixture { components })
    }
}

impl fmt::Display for PairSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSource::Singlet => write!(f, "singlet"),
            PairSource::Werner { visibility } => write!(f, "werner:{visibility}"),
            PairSource::ProductMixture { components } => {
                write!(f, "product:")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}@{},{}", c.weight, c.alice_direction, c.bob_direction)?;
                }
                Ok(())
            }
            PairSource::InterceptResend { eve_angles } => {
                write!(f, "intercept:")?;
                for (i, a) in eve_angles.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PairSource {
    type Err = E91Error;

    /// Accepts `singlet`, `werner:<v>`, `product:<w>@<a>,<b>;...` and
    /// `intercept:<t1>,<t2>,...` (angles in radians).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || E91Error::ParseSource(s.to_string());
        let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (kind, args) = match s.split_once(':') {
            Some((kind, args)) => (kind.trim(), Some(args)),
            None => (s.trim(), None),
        };
        match (kind, args) {
            ("singlet", None) => Ok(PairSource::Singlet),
            ("werner", Some(v)) => PairSource::werner(number(v)?),
            ("product", Some(list)) => {
                let mut components = Vec::new();
                for item in list.split(';') {
                    let (w, dirs) = item.split_once('@').ok_or_else(bad)?;
                    let (a, b) = dirs.split_once(',').ok_or_else(bad)?;
                    components.push(ProductComponent {
                        weight: number(w)?,
                        alice_direction: number(a)?,
                        bob_direction: number(b)?,
                    });
                }
                PairSource::product_mixture(components)
            }
            ("intercept", Some(list)) => {
                let angles = list.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
                PairSource::intercept_resend(angles)
            }
            _ => Err(bad()),
        }
    }
}

/// Expected `E(a, b)` for sources with a closed form.
///
/// Singlet: `-cos(a - b)`. Werner: `-v cos(a - b)`. Product mixture:
/// `sum_i w_i cos(a - na_i) cos(b - nb_i)`.
pub fn correlation_closed_form(
    source: &PairSource,
    alice_angle: f64,
    bob_angle: f64,
) -> Result<f64, E91Error> {
    source.validate()?;
    match source {
        PairSource::Singlet => Ok(-(alice_angle - bob_angle).cos()),
        PairSource::Werner { visibility } => Ok(-visibility * (alice_angle - bob_angle).cos()),
        PairSource::ProductMixture { components } => Ok(components
            .iter()
            .map(|c| {
                c.weight
                    * (alice_angle - c.alice_direction).cos()
                    * (bob_angle - c.bob_direction).cos()
            })
            .sum()),
        PairSource::InterceptResend { .. } => {
            Err(E91Error::UnsupportedStrategy(source.to_string()))
        }
    }
}

fn sample_singlet<R: Rng + ?Sized>(
    alice_angle: f64,
    bob_angle: f64,
    rng: &mut R,
) -> (Outcome, Outcome) {
    // P(++) = P(--) = (1 - cos d)/4, so the outcomes agree with probability
    // (1 - cos d)/2 and Alice's marginal is uniform.
    let alice = Outcome::from_up(rng.gen::<bool>());
    let agree = rng.gen::<f64>() < (1.0 - (alice_angle - bob_angle).cos()) / 2.0;
    let bob = if agree { alice } else { alice.flipped() };
    (alice, bob)
}

fn sample_spin<R: Rng + ?Sized>(analyzer: f64, direction: f64, rng: &mut R) -> Outcome {
    Outcome::from_up(rng.gen::<f64>() < (1.0 + (analyzer - direction).cos()) / 2.0)
}

fn sample_product<R: Rng + ?Sized>(
    alice_angle: f64,
    bob_angle: f64,
    alice_direction: f64,
    bob_direction: f64,
    rng: &mut R,
) -> (Outcome, Outcome) {
    let alice = sample_spin(alice_angle, alice_direction, rng);
    let bob = sample_spin(bob_angle, bob_direction, rng);
    (alice, bob)
}

/// Draws one pair of outcomes for the chosen analyzers.
pub fn sample_pair<R: Rng + ?Sized>(
    source: &PairSource,
    analyzers: &AnalyzerSet,
    alice_basis: Basis,
    bob_basis: Basis,
    rng: &mut R,
) -> (Outcome, Outcome) {
    let a = analyzers.alice_angle(alice_basis);
    let b = analyzers.bob_angle(bob_basis);
    match source {
        PairSource::Singlet => sample_singlet(a, b, rng),
        PairSource::Werner { visibility } => {
            if rng.gen::<f64>() < *visibility {
                sample_singlet(a, b, rng)
            } else {
                let na = rng.gen::<f64>() * TAU;
                let nb = rng.gen::<f64>() * TAU;
                sample_product(a, b, na, nb, rng)
            }
        }
        PairSource::ProductMixture { components } => {
            let target = rng.gen::<f64>() * components.iter().map(|c| c.weight).sum::<f64>();
            let mut cumulative = 0.0;
            let mut chosen = &components[components.len() - 1];
            for c in components {
                cumulative += c.weight;
                if target < cumulative {
                    chosen = c;
                    break;
                }
            }
            sample_product(a, b, chosen.alice_direction, chosen.bob_direction, rng)
        }
        PairSource::InterceptResend { eve_angles } => {
            let eve = eve_angles[rng.gen_range(0..eve_angles.len())];
            // Eve's result on Alice's particle is uniform; Bob's particle is
            // left antiparallel to it.
            let alice_direction = if rng.gen::<bool>() {
                eve
            } else {
                eve + std::f64::consts::PI
            };
            let bob_direction = alice_direction + std::f64::consts::PI;
            sample_product(a, b, alice_direction, bob_direction, rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn singlet_aligned_analyzers_anticorrelate() {
        let e = correlation_closed_form(&PairSource::Singlet, FRAC_PI_4, FRAC_PI_4).unwrap();
        assert_eq!(e, -1.0);
        let set = AnalyzerSet::default();
        let mut rng = RandomStream::from_seed(1);
        for _ in 0..2000 {
            let (a, b) = sample_pair(&PairSource::Singlet, &set, Basis::Two, Basis::One, &mut rng);
            assert_ne!(a, b);
        }
    }

    #[test]
    fn singlet_off_axis_value() {
        let e = correlation_closed_form(&PairSource::Singlet, 0.0, FRAC_PI_4).unwrap();
        assert!((e + FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn point_mass_product_value() {
        let source = PairSource::product_mixture(vec![ProductComponent {
            weight: 1.0,
            alice_direction: 0.0,
            bob_direction: 0.0,
        }])
        .unwrap();
        let e = correlation_closed_form(&source, 0.0, FRAC_PI_4).unwrap();
        assert!((e - FRAC_1_SQRT_2).abs() < 1e-12);

        let set = AnalyzerSet::default();
        let mut rng = RandomStream::from_seed(2);
        for _ in 0..1000 {
            let (a, _) = sample_pair(&source, &set, Basis::One, Basis::Two, &mut rng);
            assert_eq!(a, Outcome::Up);
        }
    }

    #[test]
    fn intercept_resend_has_no_closed_form() {
        let source = PairSource::intercept_resend(vec![0.0]).unwrap();
        assert!(matches!(
            correlation_closed_form(&source, 0.0, 0.0),
            Err(E91Error::UnsupportedStrategy(_))
        ));
    }

    #[test]
    fn validation() {
        assert_eq!(
            PairSource::werner(1.5),
            Err(E91Error::InvalidVisibility(1.5))
        );
        assert_eq!(
            PairSource::product_mixture(vec![]),
            Err(E91Error::EmptyMixture)
        );
        let c = |weight| ProductComponent {
            weight,
            alice_direction: 0.0,
            bob_direction: 0.0,
        };
        assert!(matches!(
            PairSource::product_mixture(vec![c(0.5), c(0.4)]),
            Err(E91Error::WeightsNotNormalized(_))
        ));
        assert_eq!(
            PairSource::product_mixture(vec![c(1.5), c(-0.5)]),
            Err(E91Error::NonPositiveWeight(-0.5))
        );
        assert_eq!(
            PairSource::intercept_resend(vec![]),
            Err(E91Error::NoEveAngles)
        );
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for text in [
            "singlet",
            "werner:0.8",
            "product:0.25@0,1.5;0.75@3.14,0.5",
            "intercept:0,0.7853981633974483",
        ] {
            let source: PairSource = text.parse().unwrap();
            assert_eq!(source.to_string(), text);
        }
        assert!("werner".parse::<PairSource>().is_err());
        assert!("product:1@0".parse::<PairSource>().is_err());
        assert!("ghz".parse::<PairSource>().is_err());
    }
}
