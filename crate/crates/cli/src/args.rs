use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use qcw_core::algorithms::{BooleanFunction, RegisterSizing};

/// Value names double as type tags in the `--describe` schema.
pub(crate) const INT: &str = "INT";
pub(crate) const FLOAT: &str = "FLOAT";
pub(crate) const BIGINT: &str = "BIGINT";

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not a non-negative decimal integer"));
    }
    Ok(s.parse().expect("validated digits"))
}

#[derive(Debug, Parser)]
#[command(
    name = "qcw",
    version,
    about = "Seeded experiments on E91 key distribution, classical ciphers and small quantum algorithms",
    after_help = "Pass --describe (optionally after a subcommand) for a JSON schema of the accepted flags."
)]
pub struct Cli {
    /// Root seed; every subcommand derives its own labeled streams from it.
    #[arg(long, global = true, default_value_t = 0, value_name = INT)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file; `-` is stdout. Defaults to $QCW_OUTPUT_DIR/<subcommand>-<seed>.<ext>
    /// when that variable is set, otherwise stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Print the JSON schema of the selected subcommand (or all) and exit.
    #[arg(long, global = true)]
    pub describe: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Only for `e91-run`: the pair transcript.
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run one E91 exchange and report the CHSH estimate, verdict and key.
    E91Run(E91RunArgs),
    /// Sweep the Werner visibility and report s, QBER and verdict per point.
    E91Sweep(E91SweepArgs),
    /// One-time pad over the 30-symbol alphabet.
    VernamEncrypt(VernamEncryptArgs),
    VernamDecrypt(VernamDecryptArgs),
    /// Generate an RSA key pair from given primes or at random.
    RsaKeygen(RsaKeygenArgs),
    RsaEncrypt(RsaEncryptArgs),
    RsaDecrypt(RsaDecryptArgs),
    /// Break RSA by trial division, classical order finding, or simulated
    /// quantum order finding.
    RsaCrack(RsaCrackArgs),
    /// Factor n with simulated period finding.
    ShorFactor(ShorFactorArgs),
    /// Classify the four one-bit functions as constant or balanced.
    DjRun(DjRunArgs),
    /// Fourier-transform a periodic comb and list the resulting peaks.
    QftDemo(QftDemoArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::E91Run(_) => "e91-run",
            Command::E91Sweep(_) => "e91-sweep",
            Command::VernamEncrypt(_) => "vernam-encrypt",
            Command::VernamDecrypt(_) => "vernam-decrypt",
            Command::RsaKeygen(_) => "rsa-keygen",
            Command::RsaEncrypt(_) => "rsa-encrypt",
            Command::RsaDecrypt(_) => "rsa-decrypt",
            Command::RsaCrack(_) => "rsa-crack",
            Command::ShorFactor(_) => "shor-factor",
            Command::DjRun(_) => "dj-run",
            Command::QftDemo(_) => "qft-demo",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct E91RunArgs {
    #[arg(long, default_value_t = 90_000, value_name = INT)]
    pub pairs: u64,
    /// singlet | werner:<v> | product:<w>@<a>,<b>;... | intercept:<t1>,<t2>,...
    #[arg(long, default_value = "singlet", value_name = "SOURCE")]
    pub source: String,
    /// Probability that a pair is lost before detection.
    #[arg(long, default_value_t = 0.0, value_name = FLOAT)]
    pub loss: f64,
    /// Standard errors of margin around the verdict thresholds.
    #[arg(long, default_value_t = 3.0, value_name = FLOAT)]
    pub z: f64,
    /// Include the sifted key; fails with exit code 3 if the verdict is abort.
    #[arg(long)]
    pub key: bool,
}

#[derive(Debug, Clone, Args)]
pub struct E91SweepArgs {
    #[arg(long, default_value_t = 50_000, value_name = INT)]
    pub pairs: u64,
    /// Comma-separated visibilities in [0, 1].
    #[arg(
        long,
        default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1",
        value_name = "LIST"
    )]
    pub visibilities: String,
    #[arg(long, default_value_t = 0.0, value_name = FLOAT)]
    pub loss: f64,
    #[arg(long, default_value_t = 3.0, value_name = FLOAT)]
    pub z: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VernamEncryptArgs {
    #[arg(long, value_name = "TEXT")]
    pub message: String,
    /// Two-digit codes 01..30; drawn from the seed when omitted.
    #[arg(long, value_name = "CODES")]
    pub key: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VernamDecryptArgs {
    #[arg(long, value_name = "CODES")]
    pub cipher: String,
    #[arg(long, value_name = "CODES")]
    pub key: String,
}

#[derive(Debug, Clone, Args)]
pub struct RsaKeygenArgs {
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint, requires_all = ["q", "e"], conflicts_with = "bits")]
    pub p: Option<BigUint>,
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint, requires_all = ["p", "e"])]
    pub q: Option<BigUint>,
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint, requires_all = ["p", "q"])]
    pub e: Option<BigUint>,
    /// Size of each random prime.
    #[arg(long, value_name = INT, required_unless_present = "p")]
    pub bits: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct RsaEncryptArgs {
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub n: BigUint,
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub e: BigUint,
    /// Space-separated equal-width decimal blocks.
    #[arg(
        long,
        value_name = "BLOCKS",
        required_unless_present = "text",
        conflicts_with = "text"
    )]
    pub blocks: Option<String>,
    /// Text to encode with the 30-symbol alphabet and cut into blocks.
    #[arg(long, value_name = "TEXT")]
    pub text: Option<String>,
    /// Block width for --text; defaults to one digit less than n.
    #[arg(long, value_name = INT, requires = "text")]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RsaDecryptArgs {
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub n: BigUint,
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub d: BigUint,
    #[arg(long, value_name = "BLOCKS")]
    pub blocks: String,
    /// Plaintext block width; defaults to the digit count of n.
    #[arg(long, value_name = INT)]
    pub width: Option<usize>,
    /// Also decode the plaintext digits as text.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CrackMethod {
    TrialDivision,
    Order,
    Quantum,
}

#[derive(Debug, Clone, Args)]
pub struct RsaCrackArgs {
    #[arg(long, value_enum, value_name = "METHOD")]
    pub method: CrackMethod,
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub n: BigUint,
    /// Public exponent; needed by the order and quantum methods.
    #[arg(long, value_name = BIGINT, value_parser = parse_biguint)]
    pub e: Option<BigUint>,
    /// Cryptogram blocks; needed by the order and quantum methods.
    #[arg(long, value_name = "BLOCKS")]
    pub blocks: Option<String>,
    /// Plaintext block width; defaults to the digit count of n.
    #[arg(long, value_name = INT)]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SizingArg {
    Full,
    Compact,
}

impl From<SizingArg> for RegisterSizing {
    fn from(s: SizingArg) -> Self {
        match s {
            SizingArg::Full => RegisterSizing::Full,
            SizingArg::Compact => RegisterSizing::Compact,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShorFactorArgs {
    #[arg(long, value_name = INT)]
    pub n: u64,
    /// Use this base instead of a random one.
    #[arg(long, value_name = INT)]
    pub force_a: Option<u64>,
    #[arg(long, default_value_t = 20, value_name = INT)]
    pub max_attempts: u32,
    #[arg(long, value_enum, default_value_t = SizingArg::Full)]
    pub sizing: SizingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    All,
    Const0,
    Const1,
    Identity,
    Negation,
}

impl FunctionArg {
    pub fn functions(self) -> Vec<BooleanFunction> {
        match self {
            FunctionArg::All => BooleanFunction::ALL.to_vec(),
            FunctionArg::Const0 => vec![BooleanFunction::Const0],
            FunctionArg::Const1 => vec![BooleanFunction::Const1],
            FunctionArg::Identity => vec![BooleanFunction::Identity],
            FunctionArg::Negation => vec![BooleanFunction::Negation],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DjRunArgs {
    #[arg(long, value_enum, default_value_t = FunctionArg::All)]
    pub function: FunctionArg,
}

#[derive(Debug, Clone, Args)]
pub struct QftDemoArgs {
    /// First-register width l.
    #[arg(long, default_value_t = 8, value_name = INT)]
    pub width: u32,
    /// Spacing of the comb.
    #[arg(long, default_value_t = 4, value_name = INT)]
    pub period: u64,
    /// First occupied basis state.
    #[arg(long, default_value_t = 1, value_name = INT)]
    pub offset: u64,
}
