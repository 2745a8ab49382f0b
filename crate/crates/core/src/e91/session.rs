use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_pair, AnalyzerSet, Basis, E91Error, Outcome, PairSource};
use crate::rng::StreamFamily;

pub const TRANSCRIPT_HEADER: [&str; 6] = [
    "pair_index",
    "alice_basis",
    "bob_basis",
    "alice_outcome",
    "bob_outcome",
    "lost",
];

/// What both parties registered for a detected pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub alice_basis: Basis,
    pub bob_basis: Basis,
    pub alice_outcome: Outcome,
    pub bob_outcome: Outcome,
}

/// One emitted pair. `measurement` is `None` when the pair was lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_index: u64,
    pub measurement: Option<Measurement>,
}

impl PairRecord {
    pub fn is_lost(&self) -> bool {
        self.measurement.is_none()
    }

    pub fn bases(&self) -> Option<(Basis, Basis)> {
        self.measurement.map(|m| (m.alice_basis, m.bob_basis))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeConfig {
    pub n_pairs: u64,
    pub loss_probability: f64,
    pub analyzers: AnalyzerSet,
}

impl ExchangeConfig {
    pub fn new(n_pairs: u64) -> Self {
        Self {
            n_pairs,
            loss_probability: 0.0,
            analyzers: AnalyzerSet::default(),
        }
    }

    pub fn with_loss(mut self, loss_probability: f64) -> Self {
        self.loss_probability = loss_probability;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub analyzers: AnalyzerSet,
    pub source: PairSource,
    pub seed: u64,
    pub records: Vec<PairRecord>,
}

impl SessionTranscript {
    /// Writes the transcript as CSV. Lost pairs leave the basis and outcome
    /// columns empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), E91Error> {
        let csv_err = |e: csv::Error| E91Error::Csv(e.to_string());
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(TRANSCRIPT_HEADER).map_err(csv_err)?;
        for r in &self.records {
            let row: [String; 6] = match r.measurement {
                Some(m) => [
                    r.pair_index.to_string(),
                    m.alice_basis.number().to_string(),
                    m.bob_basis.number().to_string(),
                    m.alice_outcome.value().to_string(),
                    m.bob_outcome.value().to_string(),
                    "false".to_string(),
                ],
                None => [
                    r.pair_index.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "true".to_string(),
                ],
            };
            out.write_record(&row).map_err(csv_err)?;
        }
        out.flush().map_err(|e| E91Error::Csv(e.to_string()))
    }

    /// Parses records written by [`SessionTranscript::write_csv`].
    pub fn read_csv_records<R: Read>(reader: R) -> Result<Vec<PairRecord>, E91Error> {
        let mut input = csv::Reader::from_reader(reader);
        let header = input.headers().map_err(|e| E91Error::Csv(e.to_string()))?;
        if header.iter().ne(TRANSCRIPT_HEADER) {
            return Err(E91Error::Csv(format!("unexpected header {header:?}")));
        }
        let mut records = Vec::new();
        for row in input.records() {
            let row = row.map_err(|e| E91Error::Csv(e.to_string()))?;
            let field = |i: usize| row.get(i).unwrap_or("");
            let bad = |i: usize| {
                E91Error::Csv(format!(
                    "bad value `{}` in column {}",
                    field(i),
                    TRANSCRIPT_HEADER[i]
                ))
            };
            let pair_index = field(0).parse().map_err(|_| bad(0))?;
            let measurement = match field(5) {
                "true" => None,
                "false" => {
                    let basis = |i| -> Result<Basis, E91Error> {
                        Basis::try_from(field(i).parse::<u8>().map_err(|_| bad(i))?)
                    };
                    let outcome = |i| -> Result<Outcome, E91Error> {
                        Outcome::try_from(field(i).parse::<i8>().map_err(|_| bad(i))?)
                    };
                    Some(Measurement {
                        alice_basis: basis(1)?,
                        bob_basis: basis(2)?,
                        alice_outcome: outcome(3)?,
                        bob_outcome: outcome(4)?,
                    })
                }
                _ => return Err(bad(5)),
            };
            records.push(PairRecord {
                pair_index,
                measurement,
            });
        }
        Ok(records)
    }
}

/// Emits `n_pairs` pairs and records both parties' analyzer choices and
/// outcomes.
///
/// Pair `i` draws all of its randomness from stream `i` of a family keyed by
/// `seed`, so the transcript does not depend on thread scheduling. Each pair
/// is first marked lost with `loss_probability`; surviving pairs get uniform,
/// independent analyzer choices.
pub fn run_exchange(
    source: &PairSource,
    config: &ExchangeConfig,
    seed: u64,
) -> Result<SessionTranscript, E91Error> {
    source.validate()?;
    if config.n_pairs == 0 {
        return Err(E91Error::NoPairs);
    }
    let loss = config.loss_probability;
    if !(0.0..1.0).contains(&loss) {
        return Err(E91Error::InvalidLossProbability(loss));
    }
    let family = StreamFamily::new(seed, "e91/exchange");
    let analyzers = config.analyzers;
    let records = (0..config.n_pairs)
        .into_par_iter()
        .map(|pair_index| {
            let mut rng = family.stream(pair_index);
            let lost = rng.gen::<f64>() < loss;
            let measurement = if lost {
                None
            } else {
                let alice_basis = Basis::ALL[rng.gen_range(0..3)];
                let bob_basis = Basis::ALL[rng.gen_range(0..3)];
                let (alice_outcome, bob_outcome) =
                    sample_pair(source, &analyzers, alice_basis, bob_basis, &mut rng);
                Some(Measurement {
                    alice_basis,
                    bob_basis,
                    alice_outcome,
                    bob_outcome,
                })
            };
            PairRecord {
                pair_index,
                measurement,
            }
        })
        .collect();
    Ok(SessionTranscript {
        analyzers,
        source: source.clone(),
        seed,
        records,
    })
}

/// Result of the public discussion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SiftedGroups {
    /// (a1,b1), (a1,b3), (a3,b1), (a3,b3)
    pub chsh: Vec<PairRecord>,
    /// (a2,b1), (a3,b2)
    pub key: Vec<PairRecord>,
    /// Lost pairs plus (a1,b2), (a2,b2), (a2,b3).
    pub discarded: Vec<PairRecord>,
}

pub fn sift(transcript: &SessionTranscript) -> SiftedGroups {
    use Basis::*;
    let mut groups = SiftedGroups::default();
    for record in &transcript.records {
        let target = match record.bases() {
            Some((One | Three, One | Three)) => &mut groups.chsh,
            Some((Two, One) | (Three, Two)) => &mut groups.key,
            _ => &mut groups.discarded,
        };
        target.push(*record);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn detected(pair_index: u64, a: u8, b: u8) -> PairRecord {
        PairRecord {
            pair_index,
            measurement: Some(Measurement {
                alice_basis: Basis::try_from(a).unwrap(),
                bob_basis: Basis::try_from(b).unwrap(),
                alice_outcome: Outcome::Up,
                bob_outcome: Outcome::Down,
            }),
        }
    }

    fn transcript(records: Vec<PairRecord>) -> SessionTranscript {
        SessionTranscript {
            analyzers: AnalyzerSet::default(),
            source: PairSource::Singlet,
            seed: 0,
            records,
        }
    }

    #[test]
    fn single_key_record() {
        let groups = sift(&transcript(vec![detected(0, 2, 1)]));
        assert_eq!(groups.key.len(), 1);
        assert!(groups.chsh.is_empty() && groups.discarded.is_empty());
    }

    #[test]
    fn grid_partition() {
        let mut records = Vec::new();
        for a in 1..=3 {
            for b in 1..=3 {
                records.push(detected(records.len() as u64, a, b));
            }
        }
        let groups = sift(&transcript(records));
        assert_eq!(
            (groups.chsh.len(), groups.key.len(), groups.discarded.len()),
            (4, 2, 3)
        );
    }

    #[test]
    fn all_lost_goes_to_discarded() {
        let config = ExchangeConfig::new(50).with_loss(0.999_999_999);
        let t = run_exchange(&PairSource::Singlet, &config, 4).unwrap();
        let groups = sift(&t);
        assert!(groups.chsh.is_empty() && groups.key.is_empty());
        assert_eq!(groups.discarded.len(), 50);
    }

    #[test]
    fn loss_rate_is_bernoulli() {
        let config = ExchangeConfig::new(100).with_loss(0.5);
        let t = run_exchange(&PairSource::Singlet, &config, 9).unwrap();
        let lost = t.records.iter().filter(|r| r.is_lost()).count();
        // Binomial(100, 1/2): 5 sigma is 25.
        assert!((25..=75).contains(&lost), "lost = {lost}");
    }

    #[test]
    fn rejects_bad_config() {
        let source = PairSource::Singlet;
        assert_eq!(
            run_exchange(&source, &ExchangeConfig::new(0), 0),
            Err(E91Error::NoPairs)
        );
        assert_eq!(
            run_exchange(&source, &ExchangeConfig::new(1).with_loss(1.0), 0),
            Err(E91Error::InvalidLossProbability(1.0))
        );
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let config = ExchangeConfig::new(40).with_loss(0.3);
        let t = run_exchange(&PairSource::werner(0.5).unwrap(), &config, 1).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(
            text.starts_with("pair_index,alice_basis,bob_basis,alice_outcome,bob_outcome,lost\n")
        );
        let back = SessionTranscript::read_csv_records(buf.as_slice()).unwrap();
        assert_eq!(back, t.records);
    }
}
