//! Front end for `qcw`: parses a request, dispatches it to `qcw-core`, and
//! writes a canonical JSON report (or the E91 transcript as CSV).
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 domain error,
//! 4 capacity error.

mod args;
mod commands;
mod schema;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{CommandFactory, FromArgMatches};
use serde_json::Value;
use thiserror::Error;

use qcw_core::e91::SessionTranscript;
use qcw_core::report::{integer, object, to_canonical_pretty};

pub use args::{Cli, Command, Format};
pub use schema::{describe, describe_all};

/// Directory for reports when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "QCW_OUTPUT_DIR";

/// Flags that apply to every subcommand and are reported separately.
const GLOBAL_FLAGS: [&str; 4] = ["seed", "format", "output", "describe"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Capacity(_) => 4,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct CommandRequest {
    pub command: Command,
    /// Every subcommand flag as given or defaulted, keyed by flag name.
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl CommandRequest {
    /// Parses `argv` (including the program name).
    pub fn try_parse_from<I, T>(argv: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let root = Cli::command();
        let matches = root.clone().try_get_matches_from(argv)?;
        let cli = Cli::from_arg_matches(&matches)?;
        let mut parameters = BTreeMap::new();
        if let Some((name, sub)) = matches.subcommand() {
            let declared = root
                .find_subcommand(name)
                .expect("matched subcommand exists");
            for id in sub.ids() {
                let id = id.as_str();
                // Skips globals and the argument group clap adds per struct.
                if GLOBAL_FLAGS.contains(&id) || !declared.get_arguments().any(|a| a.get_id() == id)
                {
                    continue;
                }
                if let Ok(Some(raw)) = sub.try_get_raw(id) {
                    let joined: Vec<String> =
                        raw.map(|v| v.to_string_lossy().into_owned()).collect();
                    parameters.insert(id.replace('_', "-"), joined.join(","));
                } else if let Ok(Some(flag)) = sub.try_get_one::<bool>(id) {
                    parameters.insert(id.replace('_', "-"), flag.to_string());
                }
            }
        }
        Ok(CommandRequest {
            command: cli.command,
            parameters,
            seed: cli.seed,
            format: cli.format,
            output: cli.output,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub results: Value,
    /// Kept out of every serialized form so reruns are byte-identical.
    pub wall_time: Duration,
    transcript: Option<SessionTranscript>,
}

impl RunReport {
    pub fn transcript(&self) -> Option<&SessionTranscript> {
        self.transcript.as_ref()
    }

    pub fn to_json(&self) -> Value {
        object([
            ("subcommand", Value::String(self.subcommand.clone())),
            (
                "parameters",
                object(
                    self.parameters
                        .iter()
                        .map(|(k, v)| (k.clone(), Value::String(v.clone()))),
                ),
            ),
            ("seed", integer(self.seed)),
            ("results", self.results.clone()),
        ])
    }
}

pub fn execute(request: &CommandRequest) -> Result<RunReport, CliError> {
    if request.format == Format::Csv && !matches!(request.command, Command::E91Run(_)) {
        return Err(CliError::Usage(
            "--format: csv is only available for e91-run".into(),
        ));
    }
    let seed = request.seed;
    let start = Instant::now();
    let outcome = match &request.command {
        Command::E91Run(a) => commands::e91_run(a, seed),
        Command::E91Sweep(a) => commands::e91_sweep(a, seed),
        Command::VernamEncrypt(a) => commands::vernam_encrypt_cmd(a, seed),
        Command::VernamDecrypt(a) => commands::vernam_decrypt_cmd(a),
        Command::RsaKeygen(a) => commands::rsa_keygen(a, seed),
        Command::RsaEncrypt(a) => commands::rsa_encrypt_cmd(a),
        Command::RsaDecrypt(a) => commands::rsa_decrypt_cmd(a),
        Command::RsaCrack(a) => commands::rsa_crack(a, seed),
        Command::ShorFactor(a) => commands::shor(a, seed),
        Command::DjRun(a) => commands::dj(a, seed),
        Command::QftDemo(a) => commands::qft_demo(a),
    }?;
    Ok(RunReport {
        subcommand: request.command.name().to_string(),
        parameters: request.parameters.clone(),
        seed,
        results: outcome.results,
        wall_time: start.elapsed(),
        transcript: outcome.transcript,
    })
}

/// Where a report goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    /// `--output`, else `$QCW_OUTPUT_DIR/<subcommand>-<seed>.<ext>`, else stdout.
    pub fn resolve(request: &CommandRequest) -> Destination {
        match &request.output {
            Some(path) if path.as_os_str() == "-" => Destination::Stdout,
            Some(path) => Destination::File(path.clone()),
            None => match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if !dir.is_empty() => {
                    let ext = match request.format {
                        Format::Json => "json",
                        Format::Csv => "csv",
                    };
                    let name = format!("{}-{}.{ext}", request.command.name(), request.seed);
                    Destination::File(PathBuf::from(dir).join(name))
                }
                _ => Destination::Stdout,
            },
        }
    }
}

/// Serializes `report` in `format` to `writer`.
pub fn write_report<W: Write>(
    report: &RunReport,
    format: Format,
    mut writer: W,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            writer.write_all(to_canonical_pretty(&report.to_json()).as_bytes())?;
            writer.write_all(b"\n")?;
        }
        Format::Csv => {
            let transcript = report.transcript().ok_or_else(|| {
                CliError::Usage(format!("--format: {} has no csv form", report.subcommand))
            })?;
            transcript
                .write_csv(&mut writer)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn emit_report(
    report: &RunReport,
    format: Format,
    destination: &Destination,
) -> Result<(), CliError> {
    match destination {
        Destination::Stdout => write_report(report, format, io::stdout().lock()),
        Destination::File(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
            }
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_report(report, format, BufWriter::new(file))
        }
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if argv.iter().skip(1).any(|a| a == "--describe") {
        let schema = argv
            .iter()
            .skip(1)
            .filter_map(|a| a.to_str())
            .find_map(describe)
            .unwrap_or_else(describe_all);
        let mut out = io::stdout().lock();
        return match writeln!(out, "{}", to_canonical_pretty(&schema)) {
            Ok(()) => 0,
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                eprintln!("qcw: i/o: {e}");
                1
            }
        };
    }

    let request = match CommandRequest::try_parse_from(&argv) {
        Ok(r) => r,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&request).and_then(|report| {
        emit_report(&report, request.format, &Destination::resolve(&request))?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            eprintln!(
                "qcw {}: done in {:.3} s",
                report.subcommand,
                report.wall_time.as_secs_f64()
            );
            0
        }
        Err(e) => {
            eprintln!("qcw: {e}");
            e.exit_code()
        }
    }
}
