//! Command-line front end for the zero-error code families: encode,
//! decode, channel simulation, contract verification, and
//! redundancy-table generation.

use std::env;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use zerocodec::{
    apply_pattern, redundancy_table, verify_code, DistinctWeightCode, ErrorPattern, IdentityCode,
    LimitedMagnitudeCode, RecursiveCode, RepetitionCode, RsBalancedCode, RsMode, TableCell,
    VerifyConfig, Word, ZeroCode, TABLE_KS, TABLE_TS,
};

/// Exit code when verification finds a contract violation.
const EXIT_VIOLATION: u8 = 1;
/// Exit code for bad input or configuration.
const EXIT_USAGE: u8 = 2;
/// Exit code when the decoder detects an error it cannot correct.
const EXIT_DETECTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "zerocodec",
    version,
    about = "Systematic codes correcting deletions and insertions of the symbol 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode the information word read from stdin
    Encode(CodeArgs),
    /// Decode the received word read from stdin
    Decode(CodeArgs),
    /// Corrupt the word read from stdin with zero deletions and insertions
    Simulate(SimArgs),
    /// Sweep one code against its decoding contract
    Verify(VerifyArgs),
    /// Print redundancy-table cells for ranges of k and t
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    /// Shortest recursive plan
    Auto,
    /// Repetition
    #[value(alias = "R")]
    R,
    /// Distinct weight
    #[value(alias = "W")]
    W,
    /// Limited magnitude
    #[value(alias = "M")]
    M,
    /// Balanced bytes with Reed-Solomon checks
    #[value(alias = "S")]
    S,
    /// Identity
    #[value(alias = "I")]
    I,
}

impl Base {
    fn label(self) -> &'static str {
        match self {
            Base::Auto => "auto",
            Base::R => "repetition",
            Base::W => "distinct-weight",
            Base::M => "limited-magnitude",
            Base::S => "rs-balanced",
            Base::I => "identity",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Parity provably sufficient for the strength
    Guaranteed,
    /// Conjectured minimal parity
    Conjecture,
}

impl From<Mode> for RsMode {
    fn from(mode: Mode) -> RsMode {
        match mode {
            Mode::Guaranteed => RsMode::Guaranteed,
            Mode::Conjecture => RsMode::Conjecture,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// One `0`/`1` character per bit
    BitsText,
    /// Bit count, a colon, then MSB-first hex bytes
    HexPacked,
}

#[derive(Args)]
struct CodeArgs {
    /// Information length in bits
    #[arg(long)]
    k: u64,
    /// Correction strength
    #[arg(long, default_value_t = 1)]
    t: u64,
    /// Code family
    #[arg(long, value_enum, default_value_t = Base::Auto)]
    base: Base,
    /// Reed-Solomon distance policy for balanced-byte codes
    #[arg(long, value_enum, default_value_t = Mode::Guaranteed)]
    mode: Mode,
    /// Balanced-byte chunk width, overriding the parameter search
    #[arg(long)]
    b: Option<u64>,
    /// Byte stage depth, overriding the parameter search
    #[arg(long)]
    tau: Option<u64>,
    /// Stdin/stdout word format
    #[arg(long, value_enum, default_value_t = Format::BitsText)]
    format: Format,
    /// Emit JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimArgs {
    /// Zeros to delete
    #[arg(long, default_value_t = 0)]
    dels: u64,
    /// Zeros to insert
    #[arg(long, default_value_t = 0)]
    ins: u64,
    /// Seed for the drawn pattern
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stdin/stdout word format
    #[arg(long, value_enum, default_value_t = Format::BitsText)]
    format: Format,
    /// Emit JSON with the drawn pattern
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Information length in bits, at most 64
    #[arg(long)]
    k: u64,
    /// Correction strength
    #[arg(long, default_value_t = 1)]
    t: u64,
    /// Code family
    #[arg(long, value_enum, default_value_t = Base::Auto)]
    base: Base,
    /// Reed-Solomon distance policy for balanced-byte codes
    #[arg(long, value_enum, default_value_t = Mode::Guaranteed)]
    mode: Mode,
    /// Balanced-byte chunk width, overriding the parameter search
    #[arg(long)]
    b: Option<u64>,
    /// Byte stage depth, overriding the parameter search
    #[arg(long)]
    tau: Option<u64>,
    /// Largest unidirectional magnitude swept past t + 1
    #[arg(long, default_value_t = 8)]
    horizon: u64,
    /// Randomized probes after the exhaustive sweeps
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Seed for the randomized probes
    #[arg(long, default_value_t = 0xC0DEC)]
    seed: u64,
    /// Emit the full JSON report
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Message lengths: comma-separated values and lo-hi ranges
    #[arg(long)]
    ks: Option<String>,
    /// Strengths: comma-separated values and lo-hi ranges
    #[arg(long)]
    ts: Option<String>,
    /// Emit JSON cells
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Decode(a) => cmd_decode(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Table(a) => cmd_table(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn build_code(
    k: u64,
    t: u64,
    base: Base,
    mode: Mode,
    b: Option<u64>,
    tau: Option<u64>,
) -> Result<Box<dyn ZeroCode>, String> {
    if k == 0 {
        return Err("k must be at least 1".to_string());
    }
    if t == 0 && !matches!(base, Base::W | Base::I) {
        return Err("t must be at least 1".to_string());
    }
    if b.is_some() != tau.is_some() {
        return Err("--b and --tau go together".to_string());
    }
    if b.is_some() && !matches!(base, Base::S) {
        return Err("only the balanced-byte family takes --b and --tau".to_string());
    }
    Ok(match base {
        Base::Auto => {
            Box::new(RecursiveCode::new(k, t, mode.into()).map_err(|e| e.to_string())?)
        }
        Base::R => Box::new(RepetitionCode::new(k, t)),
        Base::W => {
            if k > 63 {
                return Err("distinct-weight codes support k up to 63".to_string());
            }
            Box::new(DistinctWeightCode::new(k))
        }
        Base::M => Box::new(LimitedMagnitudeCode::new(k, t)),
        Base::S => Box::new(
            RsBalancedCode::new(k, t, mode.into(), b.zip(tau)).map_err(|e| e.to_string())?,
        ),
        Base::I => Box::new(IdentityCode::new(k)),
    })
}

fn cmd_encode(a: &CodeArgs) -> Result<ExitCode, String> {
    let code = build_code(a.k, a.t, a.base, a.mode, a.b, a.tau)?;
    let info = parse_word(&read_stdin()?, a.format)?;
    if info.len() != a.k {
        return Err(format!(
            "information word is {} bits, expected {}",
            info.len(),
            a.k
        ));
    }
    let cw = code.encode(&info);
    if a.json {
        println!(
            "{}",
            json!({
                "info": emit_word(&info, a.format),
                "codeword": emit_word(&cw, a.format),
                "n": cw.len(),
            })
        );
    } else {
        println!("{}", emit_word(&cw, a.format));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(a: &CodeArgs) -> Result<ExitCode, String> {
    let code = build_code(a.k, a.t, a.base, a.mode, a.b, a.tau)?;
    let rx = parse_word(&read_stdin()?, a.format)?;
    let dec = code.decode(&rx);
    if a.json {
        println!(
            "{}",
            json!({ "info": emit_word(&dec.info, a.format), "cor": dec.cor })
        );
    } else {
        println!("{} cor={}", emit_word(&dec.info, a.format), u8::from(dec.cor));
    }
    Ok(if dec.cor {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DETECTED)
    })
}

fn cmd_simulate(a: &SimArgs) -> Result<ExitCode, String> {
    let x = parse_word(&read_stdin()?, a.format)?;
    let mut caps = x.profile().to_vec();
    let zeros: u64 = caps.iter().sum();
    if a.dels > zeros {
        return Err(format!(
            "word has only {zeros} zeros, cannot delete {}",
            a.dels
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut deltas = vec![0i64; caps.len()];
    let mut left = zeros;
    for _ in 0..a.dels {
        let mut pick = rng.gen_range(0..left);
        for (i, cap) in caps.iter_mut().enumerate() {
            if pick < *cap {
                *cap -= 1;
                deltas[i] -= 1;
                break;
            }
            pick -= *cap;
        }
        left -= 1;
    }
    for _ in 0..a.ins {
        let i = rng.gen_range(0..deltas.len());
        deltas[i] += 1;
    }
    let pattern = ErrorPattern::new(deltas);
    let y = apply_pattern(&x, &pattern).map_err(|e| e.to_string())?;
    if a.json {
        println!(
            "{}",
            json!({
                "input": emit_word(&x, a.format),
                "output": emit_word(&y, a.format),
                "pattern": pattern.deltas(),
                "seed": a.seed,
            })
        );
    } else {
        println!("{}", emit_word(&y, a.format));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode, String> {
    if a.k > 64 {
        return Err("verification enumerates information words as u64; k must be at most 64".to_string());
    }
    let code = build_code(a.k, a.t, a.base, a.mode, a.b, a.tau)?;
    let budget = match env::var("ZEROCODEC_BUDGET") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| "ZEROCODEC_BUDGET must be an unsigned integer".to_string())?,
        Err(_) => 1_000_000,
    };
    let cfg = VerifyConfig {
        horizon: a.horizon,
        max_patterns: budget,
        random_trials: a.trials,
        seed: a.seed,
        exhaustive: true,
    };
    let label = format!("{} k={} t={}", a.base.label(), a.k, a.t);
    let report = verify_code(code.as_ref(), &label, &cfg);
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("reports serialize")
        );
    } else {
        println!(
            "{}: {} patterns checked{}; {} violation(s)",
            report.code_id,
            report.patterns_checked,
            if report.truncated {
                " (budget truncated)"
            } else {
                ""
            },
            report.violations.len()
        );
        for v in report.violations.iter().take(10) {
            println!(
                "  {}: sent={} received={} expected={} got={}",
                v.condition, v.sent, v.received, v.expected, v.got
            );
        }
    }
    Ok(if report.clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn cmd_table(a: &TableArgs) -> Result<ExitCode, String> {
    let ks = match &a.ks {
        Some(spec) => parse_list(spec)?,
        None => TABLE_KS.to_vec(),
    };
    let ts = match &a.ts {
        Some(spec) => parse_list(spec)?,
        None => TABLE_TS.to_vec(),
    };
    if ks.iter().chain(&ts).any(|&v| v == 0) {
        return Err("k and t start at 1".to_string());
    }
    let cells = redundancy_table(&ks, &ts);
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&cells).expect("cells serialize")
        );
        return Ok(ExitCode::SUCCESS);
    }
    let mut grid: Vec<Vec<String>> = Vec::with_capacity(ks.len() + 1);
    let mut header = vec!["k\\t".to_string()];
    header.extend(ts.iter().map(u64::to_string));
    grid.push(header);
    for (row, &k) in ks.iter().enumerate() {
        let mut line = vec![k.to_string()];
        line.extend(
            cells[row * ts.len()..(row + 1) * ts.len()]
                .iter()
                .map(cell_text),
        );
        grid.push(line);
    }
    let widths: Vec<usize> = (0..=ts.len())
        .map(|col| grid.iter().map(|row| row[col].len()).max().unwrap_or(0))
        .collect();
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        println!("{}", line.join("  ").trim_end());
    }
    Ok(ExitCode::SUCCESS)
}

/// Renders one cell as `r^{n_tb,b,tau}_{t_b,base,k_tb}`, dropping the
/// byte split from the superscript for families without one.
fn cell_text(cell: &TableCell) -> String {
    let sup = if cell.b > 0 {
        format!("{{{},{},{}}}", cell.n_tb, cell.b, cell.tau)
    } else {
        cell.n_tb.to_string()
    };
    format!(
        "{}^{}_{{{},{},{}}}",
        cell.r, sup, cell.t_b, cell.base, cell.k_tb
    )
}

fn parse_list(spec: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u64 = lo
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start in {part:?}"))?;
                let hi: u64 = hi
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end in {part:?}"))?;
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| format!("bad value {part:?}"))?),
        }
    }
    if out.is_empty() {
        return Err("empty list".to_string());
    }
    Ok(out)
}

fn read_stdin() -> Result<String, String> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| e.to_string())?;
    Ok(buf)
}

fn parse_word(s: &str, format: Format) -> Result<Word, String> {
    let s = s.trim();
    match format {
        Format::BitsText => Word::from_bit_str(s).map_err(|e| e.to_string()),
        Format::HexPacked => unpack_hex(s),
    }
}

fn emit_word(w: &Word, format: Format) -> String {
    match format {
        Format::BitsText => w.to_bit_string(),
        Format::HexPacked => pack_hex(w),
    }
}

/// Packs bit `i` into byte `i / 8` at position `7 - i % 8`; the header
/// keeps the exact bit length since codewords rarely fill whole bytes.
fn pack_hex(w: &Word) -> String {
    let bits = w.to_bits();
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, bit) in bits.iter().enumerate() {
        if *bit == 1 {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    format!("{}:{}", bits.len(), hex)
}

fn unpack_hex(s: &str) -> Result<Word, String> {
    let (len, hex) = s
        .split_once(':')
        .ok_or_else(|| "hex-packed words read <bits>:<hex>".to_string())?;
    let len: usize = len
        .trim()
        .parse()
        .map_err(|_| "bad length header".to_string())?;
    let hex = hex.trim();
    if hex.len() != len.div_ceil(8) * 2 {
        return Err(format!("{} hex digits do not hold {len} bits", hex.len()));
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    for pair in hex.as_bytes().chunks(2) {
        let digits = std::str::from_utf8(pair).map_err(|_| "bad hex digits".to_string())?;
        bytes.push(
            u8::from_str_radix(digits, 16).map_err(|_| format!("bad hex digits {digits:?}"))?,
        );
    }
    let mut bits = String::with_capacity(len);
    for i in 0..len {
        bits.push(if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
            '1'
        } else {
            '0'
        });
    }
    for i in len..bytes.len() * 8 {
        if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
            return Err("nonzero padding bits after the word".to_string());
        }
    }
    Word::from_bit_str(&bits).map_err(|e| e.to_string())
}
