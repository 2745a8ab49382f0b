use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use super::period::find_period_quantum;
use super::{pow_mod_u64, AlgorithmError, PeriodFindingRun, RegisterSizing};
use crate::classical::is_probable_prime;
use crate::report;

pub const DEFAULT_MAX_ATTEMPTS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorConfig {
    /// Total period-finding attempts allowed across the whole factorization.
    pub max_attempts: u32,
    /// Base to use instead of a random one while splitting `n` itself.
    pub forced_a: Option<u64>,
    pub sizing: RegisterSizing,
}

impl Default for ShorConfig {
    fn default() -> Self {
        Self {
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            forced_a: None,
            sizing: RegisterSizing::Full,
        }
    }
}

/// How a factor was split off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMethod {
    /// Evenness or perfect-power check; no quantum step needed.
    Trivial,
    /// The random base already shared a factor with the modulus.
    GcdShortcut,
    /// `gcd(m, a^(r/2) +- 1)` with `r` from period finding.
    Period,
}

impl FactorMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorMethod::Trivial => "trivial",
            FactorMethod::GcdShortcut => "gcd_shortcut",
            FactorMethod::Period => "period",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FoundFactor {
    pub value: u64,
    pub method: FactorMethod,
}

/// Why `n` itself skipped the quantum loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precheck {
    Prime,
    Even,
    PrimePower { base: u64, exponent: u32 },
}

/// What happened to a period-finding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodOutcome {
    /// The run produced a usable `r` and `gcd(m, a^(r/2) - 1)` split `m`.
    Split {
        factor: u64,
    },
    /// `x = 0` or the candidate failed `a^r = 1`.
    NoPeriod,
    OddPeriod,
    /// `a^(r/2) = +-1 (mod m)`.
    TrivialRoot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptKind {
    GcdShortcut {
        factor: u64,
    },
    Period {
        run: PeriodFindingRun,
        outcome: PeriodOutcome,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorAttempt {
    pub index: u32,
    /// Number being split in this attempt.
    pub modulus: u64,
    pub a: u64,
    pub kind: AttemptKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub n: u64,
    pub precheck: Option<Precheck>,
    /// Prime factors with multiplicity, ascending.
    pub factors: Vec<FoundFactor>,
    /// Composite parts left when the attempt budget ran out.
    pub unfactored: Vec<u64>,
    pub attempts: Vec<ShorAttempt>,
}

impl FactorReport {
    /// All prime factors found and their product is `n`.
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty() && !self.factors.is_empty()
    }

    pub fn factor_values(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.value).collect()
    }

    pub fn to_json(&self) -> Value {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                report::object([
                    ("value", report::integer(f.value)),
                    ("method", Value::String(f.method.as_str().into())),
                ])
            })
            .collect();
        let attempts = self.attempts.iter().map(attempt_json).collect();
        let precheck = match self.precheck {
            None => Value::Null,
            Some(Precheck::Prime) => report::object([("kind", Value::String("prime".into()))]),
            Some(Precheck::Even) => report::object([("kind", Value::String("even".into()))]),
            Some(Precheck::PrimePower { base, exponent }) => report::object([
                ("kind", Value::String("prime_power".into())),
                ("base", report::integer(base)),
                ("exponent", report::integer(exponent)),
            ]),
        };
        report::object([
            ("n", report::integer(self.n)),
            ("precheck", precheck),
            ("factors", Value::Array(factors)),
            ("unfactored", report::integers(self.unfactored.iter())),
            ("complete", Value::Bool(self.is_complete())),
            ("attempts", Value::Array(attempts)),
        ])
    }
}

fn attempt_json(attempt: &ShorAttempt) -> Value {
    let mut fields = vec![
        ("index", report::integer(attempt.index)),
        ("modulus", report::integer(attempt.modulus)),
        ("a", report::integer(attempt.a)),
    ];
    match &attempt.kind {
        AttemptKind::GcdShortcut { factor } => {
            fields.push(("kind", Value::String("gcd_shortcut".into())));
            fields.push(("factor", report::integer(factor)));
        }
        AttemptKind::Period { run, outcome } => {
            fields.push(("kind", Value::String("period".into())));
            fields.push(("run", run.to_json()));
            let (name, factor) = match outcome {
                PeriodOutcome::Split { factor } => ("split", Some(*factor)),
                PeriodOutcome::NoPeriod => ("no_period", None),
                PeriodOutcome::OddPeriod => ("odd_period", None),
                PeriodOutcome::TrivialRoot => ("trivial_root", None),
            };
            fields.push(("outcome", Value::String(name.into())));
            fields.push(("factor", factor.map_or(Value::Null, report::integer)));
        }
    }
    report::object(fields)
}

fn is_prime(m: u64) -> bool {
    is_probable_prime(&BigUint::from(m))
}

/// `m = p^j` with `p` prime and `j >= 2`.
fn prime_power(m: u64) -> Option<(u64, u32)> {
    let max_exp = 63 - m.leading_zeros();
    for j in (2..=max_exp).rev() {
        let root = m.nth_root(j);
        if root >= 2 && root.checked_pow(j) == Some(m) && is_prime(root) {
            return Some((root, j));
        }
    }
    None
}

struct Factorizer<'a, R: ?Sized> {
    config: &'a ShorConfig,
    rng: &'a mut R,
    top: u64,
    report: FactorReport,
}

impl<R: Rng + ?Sized> Factorizer<'_, R> {
    fn push(&mut self, value: u64, method: FactorMethod) {
        self.report.factors.push(FoundFactor { value, method });
    }

    fn split(&mut self, m: u64, method: FactorMethod) -> Result<(), AlgorithmError> {
        if m == 1 {
            return Ok(());
        }
        if is_prime(m) {
            self.push(m, method);
            return Ok(());
        }
        if m.is_multiple_of(2) {
            self.push(2, FactorMethod::Trivial);
            return self.split(m / 2, FactorMethod::Trivial);
        }
        if let Some((p, j)) = prime_power(m) {
            for _ in 0..j {
                self.push(p, FactorMethod::Trivial);
            }
            return Ok(());
        }
        match self.find_divisor(m)? {
            Some((d, how)) => {
                self.split(d, how)?;
                self.split(m / d, how)
            }
            None => {
                self.report.unfactored.push(m);
                Ok(())
            }
        }
    }

    /// Runs attempts on odd composite `m` until one yields a proper divisor.
    fn find_divisor(&mut self, m: u64) -> Result<Option<(u64, FactorMethod)>, AlgorithmError> {
        while (self.report.attempts.len() as u32) < self.config.max_attempts {
            let a = match self.config.forced_a {
                Some(a) if m == self.top => a,
                _ => self.rng.gen_range(2..m),
            };
            let index = self.report.attempts.len() as u32;
            let g = a.gcd(&m);
            if g != 1 {
                self.report.attempts.push(ShorAttempt {
                    index,
                    modulus: m,
                    a,
                    kind: AttemptKind::GcdShortcut { factor: g },
                });
                return Ok(Some((g, FactorMethod::GcdShortcut)));
            }
            let run = find_period_quantum(m, a, self.config.sizing, self.rng)?;
            let outcome = match run.candidate_r {
                Some(r) if run.success => {
                    if r % 2 == 1 {
                        PeriodOutcome::OddPeriod
                    } else {
                        let half = pow_mod_u64(a, r / 2, m);
                        if half == m - 1 || half == 1 {
                            PeriodOutcome::TrivialRoot
                        } else {
                            // half != +-1, so both gcds are proper divisors.
                            PeriodOutcome::Split {
                                factor: (half - 1).gcd(&m),
                            }
                        }
                    }
                }
                _ => PeriodOutcome::NoPeriod,
            };
            self.report.attempts.push(ShorAttempt {
                index,
                modulus: m,
                a,
                kind: AttemptKind::Period { run, outcome },
            });
            if let PeriodOutcome::Split { factor } = outcome {
                return Ok(Some((factor, FactorMethod::Period)));
            }
        }
        Ok(None)
    }
}

/// Factors `n` with Shor's reduction from factoring to period finding.
///
/// Even numbers, primes and prime powers are handled by classical checks
/// and recorded in [`FactorReport::precheck`]. Composite parts produced by a
/// split are factored recursively under the same attempt budget.
pub fn shor_factor<R: Rng + ?Sized>(
    n: u64,
    config: &ShorConfig,
    rng: &mut R,
) -> Result<FactorReport, AlgorithmError> {
    if n < 3 {
        return Err(AlgorithmError::ModulusTooSmall(n));
    }
    if let Some(a) = config.forced_a {
        if !(2..n).contains(&a) {
            return Err(AlgorithmError::BaseOutOfRange { a, n });
        }
    }
    let precheck = if is_prime(n) {
        Some(Precheck::Prime)
    } else if n.is_multiple_of(2) {
        Some(Precheck::Even)
    } else {
        prime_power(n).map(|(base, exponent)| Precheck::PrimePower { base, exponent })
    };
    let mut f = Factorizer {
        config,
        rng,
        top: n,
        report: FactorReport {
            n,
            precheck,
            factors: Vec::new(),
            unfactored: Vec::new(),
            attempts: Vec::new(),
        },
    };
    if precheck != Some(Precheck::Prime) {
        f.split(n, FactorMethod::Trivial)?;
    }
    let mut report = f.report;
    report.factors.sort_by_key(|f| f.value);
    report.unfactored.sort_unstable();

    for f in &report.factors {
        assert!(
            f.value > 1 && f.value < n && n.is_multiple_of(f.value),
            "{} is not a proper divisor of {n}",
            f.value
        );
    }
    let product: u128 = report
        .factors
        .iter()
        .map(|f| f.value as u128)
        .chain(report.unfactored.iter().map(|&u| u as u128))
        .product();
    assert!(
        precheck == Some(Precheck::Prime) || product == n as u128,
        "factors of {n} multiply to {product}"
    );
    Ok(report)
}
