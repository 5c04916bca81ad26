//! Acceptance suite: one PASS/FAIL line per criterion, with sub-checks
//! indented underneath. Runs as a plain binary (no libtest harness) so the
//! lines always appear in `cargo test` output.
//!
//! A criterion listed in `KNOWN_FAILURES` is still checked in full and still
//! prints FAIL; the run only aborts if the set of failures differs from that
//! list, in either direction.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use num_bigint::BigUint;
use permcodec::cache::CacheStore;
use permcodec::codec::{encode_extremal, merge_pair, ExtremalVariant};
use permcodec::enumeration::{conjecture_scan, count_avoiders, verify_encoder, SweepConfig};
use permcodec::wordcount::{bound_table, closed_form, count_words, generating_function_residue, RecurrenceCounter};
use permcodec::{
    canonical_coloring, encode_m, ColoringParams, CodePair, EntryMask, Parity, Permutation, Word, WordFamily,
};

/// Criterion number and the only sub-check allowed to fail within it.
///
/// Criterion 1 asks for f4(3612745) = (1212234, 1213424). The encoder yields
/// w' = 1213422; the stated w' has letter multiset {1,1,2,2,3,4,4}, which
/// cannot equal that of w = 1212234 ({1,1,2,2,2,3,4}), and every encoded pair
/// must share one multiset. The check is kept verbatim and fails.
const KNOWN_FAILURES: &[(usize, &str)] = &[(1, "f4(3612745) = (1212234, 1213424)")];

/// Inclusive upper bounds on n per k, shared by criteria 2, 3 and 6.
const RANGES: [(usize, usize); 4] = [(3, 10), (4, 8), (5, 7), (6, 7)];

type Check = (String, Result<(), String>);
type Criterion = (usize, &'static str, fn() -> Vec<Check>);

fn check(label: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Check {
    (label.into(), if ok { Ok(()) } else { Err(detail()) })
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(label: impl Into<String>, got: T, want: T) -> Check {
    let ok = got == want;
    check(label, ok, || format!("got {got:?}, want {want:?}"))
}

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn pair(w: &str, wp: &str) -> CodePair {
    CodePair::new(w.parse::<Word>().unwrap(), wp.parse::<Word>().unwrap()).unwrap()
}

fn sweep() -> SweepConfig {
    SweepConfig::default()
}

fn worked_examples() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(expect_eq(
        "f3(35412) = (01101, 01011)",
        encode_m(&p("35412"), 3).ok(),
        Some(pair("01101", "01011")),
    ));
    out.push(expect_eq(
        "f3 agrees with the right-to-left-maximum encoder",
        encode_extremal(&p("35412"), ExtremalVariant::RightToLeftMax).ok(),
        Some(pair("01101", "01011")),
    ));

    let q = p("3612745");
    let mask = canonical_coloring(&q, &ColoringParams::for_even_pattern(4).unwrap());
    out.push(expect_eq(
        "coloring of 3612745: red {3,6,1,2,7} / blue {4,5}",
        (mask.marked_values(&q), mask.unmarked_values(&q)),
        (vec![3, 6, 1, 2, 7], vec![4, 5]),
    ));
    out.push(expect_eq(
        "f4(3612745) = (1212234, 1213424)",
        encode_m(&q, 4).ok(),
        Some(pair("1212234", "1213424")),
    ));

    let q = p("178942365");
    let mask = EntryMask(q.values().iter().map(|&v| v <= 2).collect());
    out.push(expect_eq(
        "merge for 178942365 = (122221233, 112233222)",
        merge_pair(&mask, &q, &pair("11", "11"), &pair("2222233", "2233222")).ok(),
        Some(pair("122221233", "112233222")),
    ));
    out.push(expect_eq(
        "f5(687912435) = (011200112, 001120112)",
        encode_m(&p("687912435"), 5).ok(),
        Some(pair("011200112", "001120112")),
    ));
    out
}

fn injection() -> Vec<Check> {
    let mut out = Vec::new();
    for (k, n_max) in RANGES {
        let mut bad = Vec::new();
        let mut total = 0;
        for n in 0..=n_max {
            let report = verify_encoder(k, n, &sweep()).unwrap();
            total += report.total;
            let failures = report.round_trip_failures.count + report.image_violations.count + report.duplicate_images.count;
            if failures > 0 {
                bad.push(format!("n={n}: {failures} failures"));
            }
        }
        out.push(check(format!("k={k}, n<={n_max}: {total} permutations"), bad.is_empty(), || bad.join("; ")));
    }
    out
}

fn first_letter() -> Vec<Check> {
    let mut out = Vec::new();
    for (k, n_max) in RANGES.into_iter().filter(|(k, _)| k % 2 == 0) {
        let mut violations = 0;
        let mut example = None;
        for n in 1..=n_max {
            let report = verify_encoder(k, n, &sweep()).unwrap();
            violations += report.first_letter_violations.count;
            example = example.or(report.first_letter_violations.examples.first().cloned());
        }
        out.push(check(format!("k={k}, n<={n_max}"), violations == 0, || {
            format!("{violations} violations, e.g. {}", example.unwrap_or_default())
        }));
    }
    out
}

/// All permutations of 1..=n in lexicographic order, generated independently
/// of the library.
fn for_each_perm(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut a: Vec<u32> = (1..=n as u32).collect();
    loop {
        visit(&a);
        let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
            return;
        };
        let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
        a.swap(i - 1, j);
        a[i..].reverse();
    }
}

/// Brute-force containment: every index subset of size |q|.
fn contains(host: &[u32], q: &[u32]) -> bool {
    fn go(host: &[u32], q: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == q.len() {
            let k = q.len();
            return (0..k).all(|a| (0..k).all(|b| (chosen[a] < chosen[b]) == (q[a] < q[b])));
        }
        let need = q.len() - chosen.len();
        for i in start..=host.len().saturating_sub(need) {
            if host.len() < need {
                break;
            }
            chosen.push(host[i]);
            let found = go(host, q, i + 1, chosen);
            chosen.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(host, q, 0, &mut Vec::new())
}

fn brute_count(q: &[u32], n: usize) -> u64 {
    let mut count = 0;
    for_each_perm(n, |a| count += u64::from(!contains(a, q)));
    count
}

fn catalan(n_max: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for n in 0..n_max {
        c.push((0..=n).map(|i| c[i] * c[n - i]).sum());
    }
    c
}

fn counting_oracle() -> Vec<Check> {
    let mut cache = CacheStore::in_memory();
    let mut out = Vec::new();
    let stated_213 = [1u64, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
    let c = catalan(10);
    out.push(expect_eq("stated S_n(213) match the Catalan recurrence", stated_213.to_vec(), c[1..].to_vec()));
    let stated_1324 = [1u64, 2, 6, 23, 103, 513, 2762, 15793];
    for (q, stated) in [("213", &stated_213[..]), ("1324", &stated_1324[..])] {
        let pattern = p(q);
        let library: Vec<u64> = (1..=stated.len())
            .map(|n| count_avoiders(&pattern, n, &mut cache, &sweep()).unwrap().try_into().unwrap())
            .collect();
        let brute: Vec<u64> = (1..=stated.len()).map(|n| brute_count(pattern.values(), n)).collect();
        out.push(expect_eq(format!("brute force S_n({q}), n=1..{}", stated.len()), brute.clone(), stated.to_vec()));
        out.push(expect_eq(format!("enumerator S_n({q}) = brute force"), library, brute));
    }
    out
}

fn enumerate_words(family: &WordFamily, n: usize) -> u64 {
    let alphabet: Vec<u8> = family.alphabet().collect();
    let forbidden = family.forbidden_factors();
    // Count by last letter, extending one position at a time.
    let mut by_last: BTreeMap<u8, u64> = alphabet.iter().map(|&l| (l, 1)).collect();
    if n == 0 {
        return 1;
    }
    for _ in 1..n {
        by_last = alphabet
            .iter()
            .map(|&l| {
                let total = by_last
                    .iter()
                    .filter(|(&prev, _)| !forbidden.contains(&(prev, l)))
                    .map(|(_, c)| c)
                    .sum();
                (l, total)
            })
            .collect();
    }
    by_last.values().sum()
}

fn word_counts() -> Vec<Check> {
    let mut out = Vec::new();
    for m in 2..=4 {
        for parity in [Parity::Odd, Parity::Even] {
            let family = WordFamily::new(m, parity).unwrap();
            let exact: Vec<BigUint> = (0..=8).map(|n| count_words(family, n)).collect();
            let direct: Vec<BigUint> = (0..=8).map(|n| enumerate_words(&family, n).into()).collect();
            out.push(expect_eq(format!("{family}: recurrence = enumeration, n<=8"), exact, direct));

            let form = closed_form(family);
            let mut counter = RecurrenceCounter::new(family);
            let worst = (0..=30)
                .map(|n| {
                    let exact: f64 = counter.count(n).to_string().parse().unwrap();
                    (form.evaluate(n) - exact).abs() / exact
                })
                .fold(0.0, f64::max);
            out.push(check(format!("{family}: closed form, n<=30"), worst < 1e-9, || {
                format!("max relative error {worst:e}")
            }));

            let residue = generating_function_residue(family, 20);
            let ok = residue[0] == 1 && residue[1..].iter().all(|&c| c == 0);
            out.push(check(format!("{family}: generating function through x^20"), ok, || format!("{residue:?}")));
        }
    }
    out
}

fn bound_chain() -> Vec<Check> {
    let mut cache = CacheStore::in_memory();
    let mut out = Vec::new();
    for (k, n_max) in RANGES {
        let pattern = Permutation::classical_m(k).unwrap();
        let counts: BTreeMap<usize, BigUint> = (0..=n_max)
            .map(|n| (n, count_avoiders(&pattern, n, &mut cache, &sweep()).unwrap()))
            .collect();
        let rows = bound_table(k, n_max, &counts).unwrap();
        let word: Vec<usize> = rows.iter().filter(|r| !r.ok_word).map(|r| r.n).collect();
        let cap: Vec<usize> = rows.iter().filter(|r| !r.ok_cap).map(|r| r.n).collect();
        if k % 2 == 1 {
            println!("      k={k}: word-bound violations at n = {word:?}");
        }
        out.push(check(format!("k={k}, n<={n_max}: S_n <= |family(n-1)|^2"), word.is_empty(), || {
            format!("violated at n = {word:?}")
        }));
        out.push(check(format!("k={k}, n<={n_max}: 4^n S_n <= (9k^2)^n"), cap.is_empty(), || {
            format!("violated at n = {cap:?}")
        }));
    }
    out
}

fn conjecture_evidence() -> Vec<Check> {
    let mut cache = CacheStore::in_memory();
    let mut out = Vec::new();
    let m4 = p("1324").symmetry_class();
    for n in 1..=7 {
        let report = conjecture_scan(4, n, &mut cache, &sweep()).unwrap();
        let ok = report.argmax.contains(&m4) && report.layered_dominates;
        out.push(check(format!("k=4, n={n}: 1324 in argmax, layered dominates"), ok, || {
            let argmax: Vec<String> = report.argmax.iter().map(|q| q.to_string()).collect();
            format!("argmax {argmax:?}, layered_dominates={}", report.layered_dominates)
        }));
    }
    for n in 1..=10 {
        let report = conjecture_scan(3, n, &mut cache, &sweep()).unwrap();
        let first = &report.classes[0].count;
        let ok = report.classes.iter().all(|c| &c.count == first);
        out.push(check(format!("k=3, n={n}: all classes equal"), ok, || format!("{:?}", report.classes)));
    }
    out
}

fn run_cli(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permcodec"))
        .args(args)
        .env_remove("PERMCODEC_CACHE")
        .arg("--cache")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn determinism_and_plumbing() -> Vec<Check> {
    let dir = tempfile::tempdir().unwrap();
    let mut out = Vec::new();

    let commands: [&[&str]; 4] = [
        &["count", "-q", "1324", "-n", "9"],
        &["verify", "--k", "4", "-n", "8", "--format", "json"],
        &["scan", "--k", "4", "-n", "7", "--format", "json"],
        &["bounds", "--k", "5", "--nmax", "7", "--format", "csv"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let runs: Vec<Output> = ["1", "8"]
            .iter()
            .map(|jobs| {
                let cache = dir.path().join(format!("det-{i}-{jobs}.jsonl"));
                let mut full = args.to_vec();
                full.extend(["--jobs", jobs]);
                run_cli(&full, &cache)
            })
            .collect();
        let ok = runs[0].status.success() && runs[0].stdout == runs[1].stdout && runs[0].status == runs[1].status;
        out.push(check(format!("jobs=1 vs jobs=8 bytes: {}", args.join(" ")), ok, || {
            format!("{:?} / {:?}", String::from_utf8_lossy(&runs[0].stdout), String::from_utf8_lossy(&runs[1].stdout))
        }));
    }

    let cache = dir.path().join("roundtrip.jsonl");
    let first = run_cli(&["count", "-q", "4231", "-n", "8"], &cache);
    let loaded = CacheStore::load(&cache).unwrap();
    let stored = loaded.get(&p("1324"), 8).cloned();
    let second = run_cli(&["count", "-q", "1324", "-n", "8"], &cache);
    let lines = std::fs::read_to_string(&cache).unwrap_or_default().lines().count();
    out.push(check(
        "cache round trip",
        first.stdout == b"15793\n" && second.stdout == first.stdout && stored == Some(BigUint::from(15793u32)) && lines == 1,
        || format!("stored={stored:?}, lines={lines}"),
    ));

    let scratch = dir.path().join("codes.jsonl");
    let expectations: [(&[&str], i32); 8] = [
        (&["encode", "35412", "--k", "3"], 0),
        (&["verify", "--k", "3", "-n", "6"], 0),
        (&["encode", "12x", "--k", "3"], 2),
        (&["encode", "1324", "--k", "4"], 3),
        (&["decode", "10", "10", "--k", "3"], 4),
        (&["decode", "19", "11", "--k", "4"], 2),
        (&["count", "-q", "1324", "-n", "14"], 5),
        (&["count", "-q", "1324", "-n", "5"], 6),
    ];
    for (args, want) in expectations {
        // The last case points the cache at a directory.
        let cache = if args == ["count", "-q", "1324", "-n", "5"] { dir.path() } else { scratch.as_path() };
        let got = run_cli(args, cache).status.code();
        out.push(expect_eq(format!("exit code: {}", args.join(" ")), got, Some(want)));
    }
    out
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "worked examples", worked_examples),
        (2, "injection verification", injection),
        (3, "first-letter property", first_letter),
        (4, "counting oracle", counting_oracle),
        (5, "word-count consistency", word_counts),
        (6, "bound chain", bound_chain),
        (7, "conjecture evidence", conjecture_evidence),
        (8, "determinism and plumbing", determinism_and_plumbing),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let checks = run();
        let failed: Vec<&Check> = checks.iter().filter(|c| c.1.is_err()).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id} {verdict}: {name} ({:.2?})", start.elapsed());
        for (label, result) in &checks {
            match result {
                Ok(()) => println!("    ok    {label}"),
                Err(why) => println!("    FAIL  {label}: {why}"),
            }
        }
        let known: Vec<&str> = KNOWN_FAILURES.iter().filter(|(k, _)| *k == id).map(|(_, l)| *l).collect();
        let failed_labels: Vec<&str> = failed.iter().map(|c| c.0.as_str()).collect();
        if failed_labels != known {
            unexpected.push(format!("criterion {id}: failing {failed_labels:?}, expected {known:?}"));
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: results match expectations ({} known failure)", KNOWN_FAILURES.len());
    } else {
        for line in &unexpected {
            println!("acceptance: UNEXPECTED {line}");
        }
        std::process::exit(1);
    }
}
