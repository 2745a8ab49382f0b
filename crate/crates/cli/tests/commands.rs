use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcw"))
        .args(args)
        .env_remove("QCW_OUTPUT_DIR")
        .output()
        .expect("spawn qcw")
}

fn json(args: &[&str]) -> Value {
    let out = qcw(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn strings(value: &Value) -> Vec<&str> {
    value
        .as_array()
        .expect("array")
        .iter()
        .map(|v| v.as_str().expect("string"))
        .collect()
}

#[test]
fn rsa_encrypt_reproduces_the_worked_cryptogram() {
    let report = json(&[
        "rsa-encrypt",
        "--n",
        "571247",
        "--e",
        "179",
        "--blocks",
        "021908 071414 160708 231503",
    ]);
    assert_eq!(report["subcommand"], "rsa-encrypt");
    assert_eq!(
        report["results"]["cryptogram"],
        "540561 447313 033313 555657"
    );
}

#[test]
fn rsa_keygen_decrypt_and_crack_agree() {
    let keys = json(&["rsa-keygen", "--p", "773", "--q", "739", "--e", "179"]);
    assert_eq!(keys["results"]["n"], "571247");
    assert_eq!(keys["results"]["d"], "515627");

    let cipher = "540561 447313 033313 555657";
    let plain = "021908 071414 160708 231503";
    let decrypted = json(&[
        "rsa-decrypt",
        "--n",
        "571247",
        "--d",
        "515627",
        "--blocks",
        cipher,
    ]);
    assert_eq!(decrypted["results"]["plaintext"], plain);

    let cracked = json(&[
        "rsa-crack",
        "--method",
        "order",
        "--n",
        "571247",
        "--e",
        "179",
        "--blocks",
        cipher,
    ]);
    assert_eq!(cracked["results"]["plaintext"], plain);

    let factored = json(&["rsa-crack", "--method", "trial-division", "--n", "571247"]);
    let text = factored["results"].to_string();
    assert!(
        text.contains("\"739\"") && text.contains("\"773\""),
        "{text}"
    );
}

#[test]
fn shor_factors_fifteen_with_forced_base() {
    let report = json(&["shor-factor", "--n", "15", "--force-a", "11", "--seed", "1"]);
    assert_eq!(strings(&report["results"]["factor_values"]), ["3", "5"]);
    assert_eq!(report["parameters"]["force-a"], "11");
    assert_eq!(report["seed"], "1");
}

#[test]
fn honest_exchange_is_secure() {
    let report = json(&["e91-run", "--pairs", "90000", "--seed", "7"]);
    let results = &report["results"];
    assert_eq!(results["verdict"], "secure");
    assert_eq!(results["qber"].as_f64(), Some(0.0));
    let s = results["s"].as_f64().unwrap();
    let stderr = results["stderr_s"].as_f64().unwrap();
    assert!((s + 2.0 * std::f64::consts::SQRT_2).abs() <= 3.0 * stderr);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &[
            "e91-run", "--pairs", "20000", "--seed", "5", "--loss", "0.1",
        ][..],
        &["e91-sweep", "--pairs", "5000", "--visibilities", "0.2,0.9"],
        &["shor-factor", "--n", "21", "--seed", "3"],
        &["vernam-encrypt", "--message", "HELLO ROGER.", "--seed", "8"],
        &["rsa-keygen", "--bits", "20", "--seed", "4"],
        &["dj-run", "--seed", "2"],
    ] {
        let first = qcw(args);
        let second = qcw(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    let other = qcw(&[
        "e91-run", "--pairs", "20000", "--seed", "6", "--loss", "0.1",
    ]);
    let base = qcw(&[
        "e91-run", "--pairs", "20000", "--seed", "5", "--loss", "0.1",
    ]);
    assert_ne!(other.stdout, base.stdout);
}

#[test]
fn wall_time_stays_out_of_stdout() {
    let out = qcw(&["dj-run"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("done in"));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&String> = report.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["parameters", "results", "seed", "subcommand"]);
}

#[test]
fn csv_transcript_has_header_and_one_row_per_pair() {
    let out = qcw(&[
        "e91-run", "--pairs", "300", "--seed", "1", "--loss", "0.2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("pair_index,alice_basis,bob_basis,alice_outcome,bob_outcome,lost")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().any(|r| r.ends_with(",true")));
}

#[test]
fn csv_is_rejected_elsewhere() {
    assert_eq!(qcw(&["dj-run", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn output_flag_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/report.json");
    let out = qcw(&["dj-run", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["subcommand"], "dj-run");

    let out = Command::new(env!("CARGO_BIN_EXE_qcw"))
        .args(["qft-demo", "--seed", "9"])
        .env("QCW_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(dir.path().join("qft-demo-9.json").exists());

    let out = Command::new(env!("CARGO_BIN_EXE_qcw"))
        .args(["dj-run", "--output", "-"])
        .env("QCW_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(!out.stdout.is_empty());
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("report.json");
    assert_eq!(
        qcw(&["dj-run", "--output", target.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn domain_and_capacity_exit_codes() {
    let cases: [(&[&str], i32); 6] = [
        (
            &[
                "e91-run",
                "--pairs",
                "20000",
                "--source",
                "werner:0.3",
                "--key",
            ],
            3,
        ),
        (&["rsa-keygen", "--p", "4", "--q", "7", "--e", "5"], 3),
        (
            &[
                "rsa-encrypt",
                "--n",
                "571247",
                "--e",
                "179",
                "--blocks",
                "999999",
            ],
            3,
        ),
        (&["qft-demo", "--width", "30"], 4),
        (&["shor-factor", "--n", "1000001"], 4),
        (
            &[
                "rsa-crack",
                "--method",
                "quantum",
                "--n",
                "571247",
                "--e",
                "179",
                "--blocks",
                "540561",
            ],
            4,
        ),
    ];
    for (args, code) in cases {
        let out = qcw(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn describe_lists_every_subcommand() {
    let schema = json(&["--describe"]);
    let names: Vec<&str> = schema["subcommands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["subcommand"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "e91-run",
            "e91-sweep",
            "vernam-encrypt",
            "vernam-decrypt",
            "rsa-keygen",
            "rsa-encrypt",
            "rsa-decrypt",
            "rsa-crack",
            "shor-factor",
            "dj-run",
            "qft-demo"
        ]
    );
    let one = json(&["shor-factor", "--describe"]);
    assert_eq!(one["subcommand"], "shor-factor");
}
