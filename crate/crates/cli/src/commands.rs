use num_bigint::BigUint;
use num_traits::Zero;
use rand::RngCore;
use serde_json::Value;

use qcw_core::algorithms::{
    dj_classify, rsa_quantum_attack, shor_factor, AlgorithmError, DjVerdict, ShorConfig,
};
use qcw_core::classical::{
    blocks_from_text, decode_text, encode_text, mod_pow, parse_codes, render_codes, rsa_encrypt,
    rsa_generate, rsa_generate_random, rsa_order_attack, text_from_blocks, trial_division_factor,
    vernam_decrypt, vernam_encrypt, BlockedMessage, CryptoError, OrderAttackMethod, PadKey,
    RsaKeyPair, RsaPublicKey, TrialDivision,
};
use qcw_core::e91::{
    channel_verdict, chsh_closed_form, estimate_chsh, extract_key, run_exchange, sift, E91Error,
    E91Summary, ExchangeConfig, PairSource, SessionTranscript, Verdict,
};
use qcw_core::qsim::{
    inverse_qft_first_register, marginal_probabilities, qft_first_register, QsimError, Register,
    RegisterLayout, StateVector, MAX_QUBITS,
};
use qcw_core::report::{float, integer, integers, object};
use qcw_core::rng::{RandomStream, StreamFamily};

use crate::args::*;
use crate::CliError;

/// What a handler produced: the JSON payload and, for `e91-run`, the
/// transcript that the CSV format writes instead.
pub(crate) struct Outcome {
    pub results: Value,
    pub transcript: Option<SessionTranscript>,
}

impl From<Value> for Outcome {
    fn from(results: Value) -> Self {
        Outcome {
            results,
            transcript: None,
        }
    }
}

fn usage(field: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{field}: {detail}"))
}

fn crypto(e: CryptoError) -> CliError {
    match e {
        CryptoError::OrderSearchExhausted { .. } => CliError::Capacity(e.to_string()),
        other => CliError::Domain(other.to_string()),
    }
}

fn algorithm(e: AlgorithmError) -> CliError {
    match e {
        AlgorithmError::Simulator(QsimError::Capacity { .. })
        | AlgorithmError::ModulusTooLarge(_) => CliError::Capacity(e.to_string()),
        AlgorithmError::Crypto(c) => crypto(c),
        other => CliError::Domain(other.to_string()),
    }
}

fn e91(e: E91Error) -> CliError {
    CliError::Domain(e.to_string())
}

fn check_loss(loss: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&loss) {
        Ok(())
    } else {
        Err(usage("loss", format!("{loss} is outside [0, 1)")))
    }
}

fn check_z(z: f64) -> Result<(), CliError> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(usage("z", format!("{z} must be finite and non-negative")))
    }
}

fn check_pairs(pairs: u64) -> Result<(), CliError> {
    if pairs == 0 {
        Err(usage("pairs", "need at least one pair"))
    } else {
        Ok(())
    }
}

fn closed_form_s(source: &PairSource, transcript: &SessionTranscript) -> Option<f64> {
    let effective = source
        .equivalent_product_mixture()
        .unwrap_or_else(|| source.clone());
    chsh_closed_form(&effective, &transcript.analyzers).ok()
}

pub(crate) fn e91_run(args: &E91RunArgs, seed: u64) -> Result<Outcome, CliError> {
    check_pairs(args.pairs)?;
    check_loss(args.loss)?;
    check_z(args.z)?;
    let source: PairSource = args.source.parse().map_err(|e| usage("source", e))?;

    let config = ExchangeConfig::new(args.pairs).with_loss(args.loss);
    let transcript = run_exchange(&source, &config, seed).map_err(e91)?;
    let groups = sift(&transcript);
    let estimate = estimate_chsh(&groups.chsh).map_err(e91)?;
    let verdict = channel_verdict(&estimate, args.z);
    let key = extract_key(&groups.key);
    if args.key && verdict.verdict == Verdict::Abort {
        return Err(CliError::Domain(format!(
            "verdict is abort (|s| = {:.6} <= {:.6}); no key is released",
            estimate.s.abs(),
            verdict.abort_threshold
        )));
    }

    let lost = transcript.records.iter().filter(|r| r.is_lost()).count();
    let mut results = E91Summary::new(estimate, verdict, &key, seed).to_json();
    let fields = results.as_object_mut().expect("summary is an object");
    fields.insert("source".into(), Value::String(source.to_string()));
    fields.insert(
        "s_closed_form".into(),
        closed_form_s(&source, &transcript).map_or(Value::Null, float),
    );
    fields.insert("abort_threshold".into(), float(verdict.abort_threshold));
    fields.insert("secure_threshold".into(), float(verdict.secure_threshold));
    fields.insert("chsh_pairs".into(), integer(groups.chsh.len()));
    fields.insert("key_pairs".into(), integer(groups.key.len()));
    fields.insert("discarded_pairs".into(), integer(groups.discarded.len()));
    fields.insert("lost_pairs".into(), integer(lost));
    if args.key {
        fields.insert("key".into(), Value::String(key.bit_string()));
    }
    Ok(Outcome {
        results,
        transcript: Some(transcript),
    })
}

pub(crate) fn e91_sweep(args: &E91SweepArgs, seed: u64) -> Result<Outcome, CliError> {
    check_pairs(args.pairs)?;
    check_loss(args.loss)?;
    check_z(args.z)?;
    let visibilities = args
        .visibilities
        .split(',')
        .map(|t| {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| usage("visibilities", format!("`{t}` is not a number")))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(usage("visibilities", format!("{v} is outside [0, 1]")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let family = StreamFamily::new(seed, "e91-sweep");
    let config = ExchangeConfig::new(args.pairs).with_loss(args.loss);
    let mut rows = Vec::with_capacity(visibilities.len());
    for (i, &v) in visibilities.iter().enumerate() {
        let run_seed = family.stream(i as u64).next_u64();
        let source = PairSource::werner(v).map_err(e91)?;
        let transcript = run_exchange(&source, &config, run_seed).map_err(e91)?;
        let groups = sift(&transcript);
        let estimate = estimate_chsh(&groups.chsh).map_err(e91)?;
        let verdict = channel_verdict(&estimate, args.z);
        let key = extract_key(&groups.key);
        rows.push(object([
            ("visibility", float(v)),
            ("seed", integer(run_seed)),
            (
                "s_closed_form",
                closed_form_s(&source, &transcript).map_or(Value::Null, float),
            ),
            ("s", float(estimate.s)),
            ("stderr_s", float(estimate.stderr_s)),
            ("verdict", Value::String(verdict.verdict.as_str().into())),
            ("qber", float(key.qber)),
            ("qber_expected", float((1.0 - v) / 2.0)),
            ("key_length", integer(key.len())),
        ]));
    }
    Ok(object([("points", Value::Array(rows))]).into())
}

fn parse_pad(field: &str, text: &str) -> Result<Vec<u8>, CliError> {
    parse_codes(text).map_err(|e| usage(field, e))
}

pub(crate) fn vernam_encrypt_cmd(args: &VernamEncryptArgs, seed: u64) -> Result<Outcome, CliError> {
    let plain = encode_text(&args.message).map_err(|e| usage("message", e))?;
    let key = match &args.key {
        Some(text) => PadKey::new(parse_pad("key", text)?).map_err(|e| usage("key", e))?,
        None => PadKey::random(
            plain.len(),
            &mut RandomStream::labeled(seed, "vernam-encrypt/key"),
        ),
    };
    let cipher = vernam_encrypt(&plain, &key).map_err(|e| usage("key", e))?;
    Ok(object([
        (
            "message",
            Value::String(decode_text(&plain).map_err(crypto)?),
        ),
        ("message_codes", Value::String(render_codes(&plain))),
        ("key", Value::String(render_codes(key.symbols()))),
        ("cipher", Value::String(render_codes(&cipher))),
    ])
    .into())
}

pub(crate) fn vernam_decrypt_cmd(args: &VernamDecryptArgs) -> Result<Outcome, CliError> {
    let cipher = parse_pad("cipher", &args.cipher)?;
    let key = PadKey::new(parse_pad("key", &args.key)?).map_err(|e| usage("key", e))?;
    let plain = vernam_decrypt(&cipher, &key).map_err(|e| usage("key", e))?;
    Ok(object([
        ("message_codes", Value::String(render_codes(&plain))),
        (
            "message",
            Value::String(decode_text(&plain).map_err(crypto)?),
        ),
    ])
    .into())
}

fn keypair_json(kp: &RsaKeyPair) -> Value {
    object([
        ("n", integer(&kp.public.n)),
        ("e", integer(&kp.public.e)),
        ("d", integer(&kp.private.d)),
        ("p", integer(&kp.private.p)),
        ("q", integer(&kp.private.q)),
        ("phi", integer(kp.phi())),
        ("plain_block_width", integer(kp.public.plain_block_width())),
        (
            "cipher_block_width",
            integer(kp.public.cipher_block_width()),
        ),
    ])
}

pub(crate) fn rsa_keygen(args: &RsaKeygenArgs, seed: u64) -> Result<Outcome, CliError> {
    let kp = match (&args.p, &args.q, &args.e, args.bits) {
        (Some(p), Some(q), Some(e), None) => rsa_generate(p, q, e).map_err(crypto)?,
        (None, None, None, Some(bits)) => {
            if !(3..=4096).contains(&bits) {
                return Err(usage("bits", format!("{bits} is outside 3..=4096")));
            }
            let mut rng = RandomStream::labeled(seed, "rsa-keygen");
            rsa_generate_random(bits, &mut rng).map_err(crypto)?
        }
        _ => {
            return Err(CliError::Usage(
                "give either --p, --q and --e, or --bits".into(),
            ))
        }
    };
    Ok(keypair_json(&kp).into())
}

fn parse_blocks(field: &str, text: &str) -> Result<BlockedMessage, CliError> {
    BlockedMessage::parse(text).map_err(|e| usage(field, e))
}

fn check_width(width: Option<usize>, default: usize) -> Result<usize, CliError> {
    match width {
        Some(0) => Err(usage("width", "must be positive")),
        Some(w) => Ok(w),
        None => Ok(default),
    }
}

pub(crate) fn rsa_encrypt_cmd(args: &RsaEncryptArgs) -> Result<Outcome, CliError> {
    let key = RsaPublicKey {
        n: args.n.clone(),
        e: args.e.clone(),
    };
    if key.n < BigUint::from(2u8) {
        return Err(usage("n", "modulus must be at least 2"));
    }
    let plain = match (&args.blocks, &args.text) {
        (Some(blocks), None) => parse_blocks("blocks", blocks)?,
        (None, Some(text)) => {
            let width = check_width(args.width, key.plain_block_width())?;
            blocks_from_text(text, width).map_err(|e| usage("text", e))?
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --blocks, --text".into(),
            ))
        }
    };
    let cipher = rsa_encrypt(&plain, &key).map_err(crypto)?;
    Ok(object([
        ("plaintext", Value::String(plain.to_string())),
        ("cryptogram", Value::String(cipher.to_string())),
    ])
    .into())
}

/// `C^d mod n` per block with only `(n, d)` known.
fn raw_decrypt(
    cipher: &BlockedMessage,
    n: &BigUint,
    d: &BigUint,
    width: usize,
) -> Result<BlockedMessage, CliError> {
    let blocks = cipher
        .blocks
        .iter()
        .map(|c| {
            if c >= n {
                return Err(crypto(CryptoError::BlockTooLarge {
                    block: c.clone(),
                    modulus: n.clone(),
                }));
            }
            mod_pow(c, d, n).map_err(crypto)
        })
        .collect::<Result<Vec<_>, _>>()?;
    BlockedMessage::new(width, blocks).map_err(crypto)
}

fn digits(n: &BigUint) -> usize {
    n.to_string().len()
}

pub(crate) fn rsa_decrypt_cmd(args: &RsaDecryptArgs) -> Result<Outcome, CliError> {
    if args.n < BigUint::from(2u8) {
        return Err(usage("n", "modulus must be at least 2"));
    }
    let cipher = parse_blocks("blocks", &args.blocks)?;
    let width = check_width(args.width, digits(&args.n))?;
    let plain = raw_decrypt(&cipher, &args.n, &args.d, width)?;
    let mut fields = vec![
        ("cryptogram", Value::String(cipher.to_string())),
        ("plaintext", Value::String(plain.to_string())),
    ];
    if args.text {
        fields.push((
            "text",
            Value::String(text_from_blocks(&plain).map_err(crypto)?),
        ));
    }
    Ok(object(fields).into())
}

pub(crate) fn rsa_crack(args: &RsaCrackArgs, seed: u64) -> Result<Outcome, CliError> {
    if args.n < BigUint::from(2u8) {
        return Err(usage("n", "modulus must be at least 2"));
    }
    if args.method == CrackMethod::TrialDivision {
        let result = match trial_division_factor(&args.n).map_err(crypto)? {
            TrialDivision::Factored {
                smallest,
                cofactor,
                divisions,
            } => object([
                ("outcome", Value::String("factored".into())),
                ("factors", integers([&smallest, &cofactor])),
                ("divisions", integer(divisions)),
            ]),
            TrialDivision::Prime { divisions } => object([
                ("outcome", Value::String("prime".into())),
                ("factors", Value::Array(Vec::new())),
                ("divisions", integer(divisions)),
            ]),
            TrialDivision::OverCap {
                cap,
                estimated_divisions,
            } => {
                return Err(CliError::Capacity(format!(
                "trial division of {} needs about {estimated_divisions} divisions, cap is {cap}",
                args.n
            )))
            }
        };
        return Ok(object([
            ("method", Value::String("trial-division".into())),
            ("result", result),
        ])
        .into());
    }

    let e = args
        .e
        .clone()
        .ok_or_else(|| usage("e", "required by this method"))?;
    if e.is_zero() {
        return Err(usage("e", "must be positive"));
    }
    let blocks = args
        .blocks
        .as_deref()
        .ok_or_else(|| usage("blocks", "required by this method"))?;
    let cipher = parse_blocks("blocks", blocks)?;
    let width = check_width(args.width, digits(&args.n))?;
    let key = RsaPublicKey {
        n: args.n.clone(),
        e,
    };

    let mut plaintext = Vec::new();
    let mut details = Vec::new();
    let (method, mut rng) = match args.method {
        CrackMethod::Order => ("order", None),
        _ => (
            "quantum",
            Some(RandomStream::labeled(seed, "rsa-crack/quantum")),
        ),
    };
    for c in &cipher.blocks {
        match rng.as_mut() {
            None => {
                let attack = rsa_order_attack(c, &key).map_err(crypto)?;
                let mut entry = vec![
                    ("cryptogram", integer(c)),
                    ("plaintext", integer(&attack.plaintext)),
                ];
                match &attack.method {
                    OrderAttackMethod::Order {
                        order,
                        reduced_exponent,
                    } => {
                        entry.push(("method", Value::String("order".into())));
                        entry.push(("order", integer(order)));
                        entry.push(("reduced_exponent", integer(reduced_exponent)));
                    }
                    OrderAttackMethod::GcdShortcut { factor } => {
                        entry.push(("method", Value::String("gcd_shortcut".into())));
                        entry.push(("factor", integer(factor)));
                    }
                    OrderAttackMethod::ZeroBlock => {
                        entry.push(("method", Value::String("zero_block".into())));
                    }
                }
                details.push(object(entry));
                plaintext.push(attack.plaintext);
            }
            Some(rng) => {
                let attack = rsa_quantum_attack(c, &key, rng).map_err(algorithm)?;
                let mut entry = attack.to_json();
                entry
                    .as_object_mut()
                    .expect("attack is an object")
                    .insert("cryptogram".into(), integer(c));
                details.push(entry);
                plaintext.push(attack.plaintext);
            }
        }
    }
    let plain = BlockedMessage::new(width, plaintext).map_err(crypto)?;
    Ok(object([
        ("method", Value::String(method.into())),
        ("plaintext", Value::String(plain.to_string())),
        ("blocks", Value::Array(details)),
    ])
    .into())
}

pub(crate) fn shor(args: &ShorFactorArgs, seed: u64) -> Result<Outcome, CliError> {
    let n = args.n;
    if n < 3 {
        return Err(usage("n", "must be at least 3"));
    }
    if let Some(a) = args.force_a {
        if !(2..n).contains(&a) {
            return Err(usage("force-a", format!("{a} is outside [2, {n})")));
        }
    }
    if args.max_attempts == 0 {
        return Err(usage("max-attempts", "must be at least 1"));
    }
    let config = ShorConfig {
        max_attempts: args.max_attempts,
        forced_a: args.force_a,
        sizing: args.sizing.into(),
    };
    let mut rng = RandomStream::labeled(seed, "shor-factor");
    let report = shor_factor(n, &config, &mut rng).map_err(algorithm)?;
    let mut results = report.to_json();
    results
        .as_object_mut()
        .expect("report is an object")
        .insert("factor_values".into(), integers(report.factor_values()));
    Ok(results.into())
}

pub(crate) fn dj(args: &DjRunArgs, seed: u64) -> Result<Outcome, CliError> {
    let mut rng = RandomStream::labeled(seed, "dj-run");
    let runs = args
        .function
        .functions()
        .into_iter()
        .map(|f| {
            let out = dj_classify(f, &mut rng).map_err(algorithm)?;
            let mut json = out.to_json();
            json.as_object_mut().expect("outcome is an object").insert(
                "correct".into(),
                Value::Bool((out.verdict == DjVerdict::Constant) == f.is_constant()),
            );
            Ok(json)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(object([("runs", Value::Array(runs))]).into())
}

/// Peaks above this probability are listed.
const PEAK_THRESHOLD: f64 = 1e-3;

pub(crate) fn qft_demo(args: &QftDemoArgs) -> Result<Outcome, CliError> {
    let l = args.width;
    if l == 0 {
        return Err(usage("width", "must be at least 1"));
    }
    if l > MAX_QUBITS {
        return Err(CliError::Capacity(format!(
            "width {l} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    let size = 1u64 << l;
    if args.period == 0 || args.period >= size {
        return Err(usage("period", format!("must be in [1, {size})")));
    }
    if args.offset >= args.period {
        return Err(usage(
            "offset",
            format!("must be below the period {}", args.period),
        ));
    }
    let layout = RegisterLayout::new(l, 0).map_err(|e| CliError::Capacity(e.to_string()))?;
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); layout.dimension()];
    let mut x = args.offset;
    while x < size {
        amps[x as usize] = num_complex::Complex64::new(1.0, 0.0);
        x += args.period;
    }
    let comb =
        StateVector::normalized(layout, amps).map_err(|e| CliError::Domain(e.to_string()))?;
    let spectrum = qft_first_register(&comb);
    let roundtrip = comb.max_abs_diff(&inverse_qft_first_register(&spectrum));
    let probs = marginal_probabilities(&spectrum, Register::First);
    let peaks: Vec<Value> = probs
        .iter()
        .enumerate()
        .filter(|(_, p)| **p >= PEAK_THRESHOLD)
        .map(|(x, p)| object([("x", integer(x)), ("probability", float(*p))]))
        .collect();
    let spacing = if size.is_multiple_of(args.period) {
        integer(size / args.period)
    } else {
        Value::Null
    };
    Ok(object([
        ("l", integer(l)),
        ("period", integer(args.period)),
        ("offset", integer(args.offset)),
        ("peak_spacing", spacing),
        ("peaks", Value::Array(peaks)),
        ("norm_drift", float((spectrum.norm_sqr() - 1.0).abs())),
        ("roundtrip_error", float(roundtrip)),
        (
            "occupied_states",
            integer((size - args.offset).div_ceil(args.period)),
        ),
    ])
    .into())
}
