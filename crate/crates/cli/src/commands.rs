//! Subcommand bodies. Each returns the text for stdout and an exit code;
//! failures carry their exit code and a message for stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use permcodec::cache::CacheStore;
use permcodec::enumeration::{self, ConjectureReport, SweepConfig, VerificationReport};
use permcodec::wordcount::{self, BoundRecord};
use permcodec::{decode_m, encode_m, CodePair, Error, Parity, Permutation, Word, WordFamily};

use crate::{Cli, Command, Format};

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONTAINS_PATTERN: u8 = 3;
pub const EXIT_NOT_IN_IMAGE: u8 = 4;
pub const EXIT_SCALE_REFUSED: u8 = 5;
pub const EXIT_CACHE_IO: u8 = 6;

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
    pub stdout: Option<String>,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let (code, stdout) = match &err {
            Error::PreconditionViolated { .. } => (EXIT_CONTAINS_PATTERN, None),
            Error::NotInImage(_) => (EXIT_NOT_IN_IMAGE, Some("NOT-IN-IMAGE".to_string())),
            Error::ScaleRefused { .. } => (EXIT_SCALE_REFUSED, None),
            Error::CacheIo { .. } => (EXIT_CACHE_IO, None),
            _ => (EXIT_USAGE, None),
        };
        let message = match &err {
            Error::PreconditionViolated { pattern, witness } => format!("contains M_k = {pattern} at {witness}"),
            other => other.to_string(),
        };
        Failure { code, message, stdout }
    }
}

type CmdResult = Result<Output, Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    let config = SweepConfig {
        node_budget: cli.budget,
        jobs: cli.jobs.map(|j| j as usize),
    };
    match &cli.command {
        Command::Encode { perm, k } => encode(perm, *k, cli.format),
        Command::Decode { w, wp, k } => decode(w, wp, *k, cli.format),
        Command::Count { pattern, n } => {
            let q: Permutation = pattern.parse()?;
            let mut cache = CacheStore::load(&cli.cache)?;
            let count = enumeration::count_avoiders(&q, *n, &mut cache, &config)?;
            Ok(Output::ok(render_count(&q, *n, &count, cli.format)))
        }
        Command::Words { m, parity, n } => {
            let family = WordFamily::new(*m, parity.parse::<Parity>()?)?;
            let count = wordcount::count_words(family, *n);
            Ok(Output::ok(render_words(family, *n, &count, cli.format)))
        }
        Command::Bounds { k, nmax } => bounds(*k, *nmax, cli, &config),
        Command::Verify { k, n } => {
            let report = enumeration::verify_encoder(*k, *n, &config)?;
            let code = if report.passed { 0 } else { EXIT_VERIFY_FAILED };
            Ok(Output {
                text: render_verify(&report, cli.format),
                code,
            })
        }
        Command::Scan { k, n } => {
            let mut cache = CacheStore::load(&cli.cache)?;
            let report = enumeration::conjecture_scan(*k, *n, &mut cache, &config)?;
            Ok(Output::ok(render_scan(&report, cli.format)))
        }
    }
}

fn encode(perm: &str, k: usize, format: Format) -> CmdResult {
    let p: Permutation = perm.parse()?;
    let pair = encode_m(&p, k)?;
    Ok(Output::ok(match format {
        Format::Csv => format!("w,wp\n{},{}", csv_field(&pair.w), csv_field(&pair.wp)),
        Format::Json | Format::Plain => json(&pair),
    }))
}

fn decode(w: &str, wp: &str, k: usize, format: Format) -> CmdResult {
    let pair = CodePair::new(w.parse::<Word>()?, wp.parse::<Word>()?)?;
    let p = decode_m(&pair, k)?;
    Ok(Output::ok(match format {
        Format::Json => json(&serde_json::json!({ "permutation": p })),
        Format::Csv => format!("permutation\n{}", csv_field(&p)),
        Format::Plain => p.to_string(),
    }))
}

fn bounds(k: usize, nmax: usize, cli: &Cli, config: &SweepConfig) -> CmdResult {
    let pattern = Permutation::classical_m(k)?;
    WordFamily::for_pattern(k)?;
    let mut cache = CacheStore::load(&cli.cache)?;
    let mut counts = BTreeMap::new();
    for n in 0..=nmax {
        counts.insert(n, enumeration::count_avoiders(&pattern, n, &mut cache, config)?);
    }
    let rows = wordcount::bound_table(k, nmax, &counts)?;
    Ok(Output::ok(render_bounds(&rows, cli.format)))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serializes")
}

/// Quotes fields that contain commas (long permutations and words).
fn csv_field(value: &impl ToString) -> String {
    let text = value.to_string();
    if text.contains(',') {
        format!("\"{text}\"")
    } else {
        text
    }
}

fn render_count(q: &Permutation, n: usize, count: &BigUint, format: Format) -> String {
    match format {
        Format::Plain => count.to_string(),
        Format::Json => json(&serde_json::json!({
            "pattern": q,
            "n": n,
            "count": count.to_string(),
        })),
        Format::Csv => format!("pattern,n,count\n{},{n},{count}", csv_field(q)),
    }
}

fn render_words(family: WordFamily, n: usize, count: &BigUint, format: Format) -> String {
    match format {
        Format::Plain => count.to_string(),
        Format::Json => json(&serde_json::json!({
            "m": family.m(),
            "parity": family.parity(),
            "n": n,
            "count": count.to_string(),
        })),
        Format::Csv => format!("m,parity,n,count\n{},{},{n},{count}", family.m(), family.parity()),
    }
}

#[derive(Serialize)]
struct BoundRow<'a> {
    #[serde(flatten)]
    record: &'a BoundRecord,
    cap: String,
}

fn render_bounds(rows: &[BoundRecord], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(BoundRecord::csv_header());
            for row in rows {
                out.push('\n');
                out.push_str(&row.csv_row());
            }
            out
        }
        Format::Json => json(
            &rows
                .iter()
                .map(|record| BoundRow {
                    record,
                    cap: record.cap_decimal(),
                })
                .collect::<Vec<_>>(),
        ),
        Format::Plain => {
            let mut out = String::new();
            for row in rows {
                let _ = writeln!(
                    out,
                    "k={} n={:<3} S_n={:<12} |W(n-1)|^2={:<16} cap={:<24} word:{} cap:{}",
                    row.k,
                    row.n,
                    row.exact_count,
                    row.word_bound,
                    row.cap_decimal(),
                    ok(row.ok_word),
                    ok(row.ok_cap)
                );
            }
            out
        }
    }
}

fn ok(flag: bool) -> &'static str {
    if flag {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn render_verify(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => format!(
            "k,n,total,round_trip_failures,image_violations,first_letter_violations,duplicate_images,passed\n{},{},{},{},{},{},{},{}",
            report.k,
            report.n,
            report.total,
            report.round_trip_failures.count,
            report.image_violations.count,
            report.first_letter_violations.count,
            report.duplicate_images.count,
            report.passed
        ),
        Format::Plain => {
            let mut out = format!(
                "k={} n={} total={} {}\n",
                report.k,
                report.n,
                report.total,
                if report.passed { "PASS" } else { "FAIL" }
            );
            for (name, failures) in [
                ("round_trip_failures", &report.round_trip_failures),
                ("image_violations", &report.image_violations),
                ("first_letter_violations", &report.first_letter_violations),
                ("duplicate_images", &report.duplicate_images),
            ] {
                let _ = writeln!(out, "  {name}: {}", failures.count);
                for example in &failures.examples {
                    let _ = writeln!(out, "    {example}");
                }
            }
            out
        }
    }
}

fn render_scan(report: &ConjectureReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut out = String::from("k,n,representative,members,layered_members,count,growth_ratio");
            for c in &report.classes {
                let _ = write!(
                    out,
                    "\n{},{},{},{},{},{},{}",
                    report.k,
                    report.n,
                    c.representative,
                    c.members,
                    c.layered_members,
                    c.count,
                    c.growth_ratio.map(|r| r.to_string()).unwrap_or_default()
                );
            }
            out
        }
        Format::Plain => {
            let mut out = format!("k={} n={}\n", report.k, report.n);
            for c in &report.classes {
                let _ = writeln!(
                    out,
                    "  {:<8} members={} layered={} S_n={}{}",
                    c.representative.to_string(),
                    c.members,
                    c.layered_members,
                    c.count,
                    c.growth_ratio.map(|r| format!(" ratio={r:.4}")).unwrap_or_default()
                );
            }
            let argmax: Vec<String> = report.argmax.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "argmax: {}", argmax.join(" "));
            let _ = writeln!(out, "layered_dominates: {}", report.layered_dominates);
            let _ = writeln!(out, "m_k_is_max: {}", report.m_k_is_max);
            out
        }
    }
}
