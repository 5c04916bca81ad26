//! Exhaustive generation of `Av_n(q)`, counts, encoder sweeps and the
//! pattern-class scanner.
//!
//! Work is sharded by the first entry of the permutation. Shards are
//! independent and their results are combined in shard order, so output does
//! not depend on the number of workers.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use crate::cache::CacheStore;
use crate::codec::{decode_m, encode_m, CodePair, WordFamily};
use crate::error::{Error, Result};
use crate::perm::{PatternMatcher, Permutation};

pub const DEFAULT_NODE_BUDGET: u128 = 1_000_000_000;

/// How many witnesses each failure counter keeps.
const MAX_EXAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    /// Refuse any run whose estimated node count exceeds this.
    pub node_budget: u128,
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            jobs: None,
        }
    }
}

impl SweepConfig {
    pub fn with_jobs(jobs: usize) -> Self {
        SweepConfig {
            jobs: Some(jobs),
            ..SweepConfig::default()
        }
    }

    fn admit(&self, estimate: u128) -> Result<()> {
        if estimate > self.node_budget {
            Err(Error::ScaleRefused {
                estimate,
                budget: self.node_budget,
            })
        } else {
            Ok(())
        }
    }
}

/// Number of prefixes an unpruned search over `S_n` visits,
/// `sum_{j <= n} n! / (n - j)!`. Saturates.
pub fn estimate_nodes(n: usize) -> u128 {
    let mut total: u128 = 1;
    let mut term: u128 = 1;
    for j in 0..n {
        term = term.saturating_mul((n - j) as u128);
        total = total.saturating_add(term);
    }
    total
}

/// Lexicographic stream of the permutations of length `n` avoiding `q`.
///
/// Built by extending prefixes one entry at a time; a prefix is abandoned as
/// soon as it contains `q`, and only occurrences that use the newly appended
/// entry need checking.
pub struct Avoiders {
    matcher: PatternMatcher,
    n: usize,
    prefix: Vec<u32>,
    used: Vec<bool>,
    cursor: Vec<u32>,
    first_max: u32,
    done: bool,
}

impl Avoiders {
    pub fn new(q: &Permutation, n: usize) -> Self {
        Avoiders::starting_with(q, n, 1, n as u32)
    }

    /// Only the avoiders whose first entry lies in `first_min..=first_max`.
    pub fn starting_with(q: &Permutation, n: usize, first_min: u32, first_max: u32) -> Self {
        let mut cursor = vec![1; n + 1];
        cursor[0] = first_min.max(1);
        Avoiders {
            matcher: PatternMatcher::new(q),
            n,
            prefix: Vec::with_capacity(n),
            used: vec![false; n + 1],
            cursor,
            first_max: first_max.min(n as u32),
            done: false,
        }
    }

    fn pop(&mut self) {
        match self.prefix.pop() {
            Some(v) => self.used[v as usize] = false,
            None => self.done = true,
        }
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        while !self.done {
            let depth = self.prefix.len();
            if depth == self.n {
                let out = Permutation::from_vec_unchecked(self.prefix.clone());
                self.pop();
                // The empty pattern is contained in every prefix.
                if self.matcher.pattern_len() == 0 {
                    continue;
                }
                return Some(out);
            }
            let limit = if depth == 0 { self.first_max } else { self.n as u32 };
            let mut extended = false;
            while self.cursor[depth] <= limit {
                let v = self.cursor[depth];
                self.cursor[depth] += 1;
                if self.used[v as usize] {
                    continue;
                }
                self.prefix.push(v);
                if self.matcher.pattern_len() <= self.prefix.len()
                    && self.matcher.occurs_ending_at_last(&self.prefix)
                {
                    self.prefix.pop();
                    continue;
                }
                self.used[v as usize] = true;
                self.cursor[depth + 1] = 1;
                extended = true;
                break;
            }
            if !extended {
                if depth == 0 {
                    self.done = true;
                } else {
                    self.pop();
                }
            }
        }
        None
    }
}

pub fn enumerate_avoiders(q: &Permutation, n: usize) -> Avoiders {
    Avoiders::new(q, n)
}

/// Runs `work` once per first entry `1..=n` (or once with `None` when
/// `n = 0`) and returns the results in shard order.
fn sharded<T, F>(n: usize, config: &SweepConfig, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(Option<u32>) -> T + Sync,
{
    if n == 0 {
        return vec![work(None)];
    }
    #[cfg(feature = "parallel")]
    {
        if config.jobs != Some(1) {
            use rayon::prelude::*;
            let run = || (1..=n as u32).into_par_iter().map(|v| work(Some(v))).collect();
            return match config.jobs {
                Some(jobs) => rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .expect("thread pool")
                    .install(run),
                None => run(),
            };
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = config;
    (1..=n as u32).map(|v| work(Some(v))).collect()
}

fn shard(q: &Permutation, n: usize, first: Option<u32>) -> Avoiders {
    match first {
        Some(v) => Avoiders::starting_with(q, n, v, v),
        None => Avoiders::new(q, n),
    }
}

/// All of `Av_n(q)` in lexicographic order, generated in parallel shards.
pub fn collect_avoiders(q: &Permutation, n: usize, config: &SweepConfig) -> Result<Vec<Permutation>> {
    config.admit(estimate_nodes(n))?;
    Ok(sharded(n, config, |first| shard(q, n, first).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect())
}

/// `|Av_n(q)|` without consulting any cache.
pub fn count_avoiders_uncached(q: &Permutation, n: usize, config: &SweepConfig) -> Result<BigUint> {
    config.admit(estimate_nodes(n))?;
    let per_shard = sharded(n, config, |first| shard(q, n, first).count() as u64);
    Ok(per_shard.into_iter().map(BigUint::from).sum())
}

/// `|Av_n(q)|`, served from `cache` when present and recorded there otherwise.
pub fn count_avoiders(q: &Permutation, n: usize, cache: &mut CacheStore, config: &SweepConfig) -> Result<BigUint> {
    if let Some(count) = cache.get(q, n) {
        return Ok(count.clone());
    }
    let count = count_avoiders_uncached(q, n, config)?;
    cache.insert(q, n, count.clone())?;
    Ok(count)
}

/// A failure tally with a few witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Failures {
    pub count: u64,
    pub examples: Vec<String>,
}

impl Failures {
    fn record(&mut self, witness: impl FnOnce() -> String) {
        self.count += 1;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(witness());
        }
    }

    fn absorb(&mut self, other: Failures) {
        self.count += other.count;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub k: usize,
    pub n: usize,
    pub total: u64,
    pub round_trip_failures: Failures,
    pub image_violations: Failures,
    pub first_letter_violations: Failures,
    pub duplicate_images: Failures,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failure_count(&self) -> u64 {
        self.round_trip_failures.count
            + self.image_violations.count
            + self.first_letter_violations.count
            + self.duplicate_images.count
    }
}

/// Per-shard partial result of [`verify_encoder`].
#[derive(Default)]
struct ShardCheck {
    images: Vec<(CodePair, Permutation)>,
    round_trip: Failures,
    image: Failures,
    first_letter: Failures,
}

/// Encodes every `p` in `Av_n(M_k)` and checks family membership of both
/// words, the decode round trip, the leading letter `1` for even `k`, and
/// that no two permutations share an image.
pub fn verify_encoder(k: usize, n: usize, config: &SweepConfig) -> Result<VerificationReport> {
    if !(3..=8).contains(&k) {
        return Err(Error::Domain(format!("verify_encoder supports 3 <= k <= 8, got {k}")));
    }
    config.admit(estimate_nodes(n))?;
    let pattern = Permutation::classical_m(k)?;
    let family = WordFamily::for_pattern(k)?;
    let even = k.is_multiple_of(2);

    let shards = sharded(n, config, |first| {
        let mut check = ShardCheck::default();
        for p in shard(&pattern, n, first) {
            let pair = encode_m(&p, k).expect("enumerated permutations avoid M_k");
            if !(family.validate(&pair.w) && family.validate(&pair.wp) && pair.letters_agree()) {
                check.image.record(|| format!("{p} -> {pair}"));
            }
            match decode_m(&pair, k) {
                Ok(back) if back == p => {}
                Ok(back) => check.round_trip.record(|| format!("{p} -> {pair} -> {back}")),
                Err(e) => check.round_trip.record(|| format!("{p} -> {pair}: {e}")),
            }
            if even && n > 0 && (pair.w.first() != Some(1) || pair.wp.first() != Some(1)) {
                check.first_letter.record(|| format!("{p} -> {pair}"));
            }
            check.images.push((pair, p));
        }
        check
    });

    let mut report = VerificationReport {
        k,
        n,
        total: 0,
        round_trip_failures: Failures::default(),
        image_violations: Failures::default(),
        first_letter_violations: Failures::default(),
        duplicate_images: Failures::default(),
        passed: false,
    };
    let mut seen: HashMap<CodePair, Permutation> = HashMap::new();
    for check in shards {
        report.round_trip_failures.absorb(check.round_trip);
        report.image_violations.absorb(check.image);
        report.first_letter_violations.absorb(check.first_letter);
        for (pair, p) in check.images {
            report.total += 1;
            if let Some(prev) = seen.get(&pair) {
                report
                    .duplicate_images
                    .record(|| format!("{prev} and {p} -> {pair}"));
            } else {
                seen.insert(pair, p);
            }
        }
    }
    report.passed = report.failure_count() == 0;
    Ok(report)
}

/// Counts for one symmetry class of patterns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCount {
    pub representative: Permutation,
    pub members: usize,
    pub layered_members: usize,
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
    /// `S_n / S_{n-1}`, absent for `n = 0`.
    pub growth_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub n: usize,
    pub classes: Vec<ClassCount>,
    pub argmax: Vec<Permutation>,
    /// No class without a layered member beats any class with one. Counts are
    /// constant on classes, so a class containing a layered pattern counts as
    /// layered even if some of its members (4231 next to 1324) are not.
    pub layered_dominates: bool,
    /// `M_k`'s class attains the maximum count.
    pub m_k_is_max: bool,
}

fn as_decimal<S: serde::Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Counts `S_n(q)` for one representative of every symmetry class of
/// length-`k` patterns and evaluates the layered-domination and
/// `M_k`-maximality flags.
pub fn conjecture_scan(k: usize, n: usize, cache: &mut CacheStore, config: &SweepConfig) -> Result<ConjectureReport> {
    if !(3..=5).contains(&k) {
        return Err(Error::Domain(format!("conjecture_scan supports 3 <= k <= 5, got {k}")));
    }
    let patterns = Permutation::all(k);
    let estimate = estimate_nodes(n).saturating_mul(patterns.len() as u128);
    config.admit(estimate)?;

    let mut members: BTreeMap<Permutation, Vec<Permutation>> = BTreeMap::new();
    for q in patterns {
        members.entry(q.symmetry_class()).or_default().push(q);
    }

    let mut classes = Vec::with_capacity(members.len());
    let mut min_layered: Option<BigUint> = None;
    let mut max_other: Option<BigUint> = None;
    for (rep, group) in &members {
        let count = count_avoiders(rep, n, cache, config)?;
        let growth_ratio = if n == 0 {
            None
        } else {
            let prev = count_avoiders(rep, n - 1, cache, config)?;
            Some(ratio(&count, &prev))
        };
        let layered_members = group.iter().filter(|q| q.is_layered()).count();
        if layered_members > 0 {
            min_layered = Some(min_layered.map_or(count.clone(), |m| m.min(count.clone())));
        }
        if layered_members == 0 {
            max_other = Some(max_other.map_or(count.clone(), |m| m.max(count.clone())));
        }
        classes.push(ClassCount {
            representative: rep.clone(),
            members: group.len(),
            layered_members,
            count,
            growth_ratio,
        });
    }

    let max = classes.iter().map(|c| &c.count).max().cloned().unwrap_or_default();
    let argmax = classes
        .iter()
        .filter(|c| c.count == max)
        .map(|c| c.representative.clone())
        .collect::<Vec<_>>();
    let m_k_class = Permutation::classical_m(k)?.symmetry_class();
    let layered_dominates = match (&max_other, &min_layered) {
        (Some(other), Some(layered)) => other <= layered,
        _ => true,
    };
    Ok(ConjectureReport {
        k,
        n,
        m_k_is_max: argmax.contains(&m_k_class),
        classes,
        argmax,
        layered_dominates,
    })
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn texts(perms: impl IntoIterator<Item = Permutation>) -> Vec<String> {
        perms.into_iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(texts(enumerate_avoiders(&p("213"), 3)), ["123", "132", "231", "312", "321"]);
        assert_eq!(texts(enumerate_avoiders(&p("12"), 3)), ["321"]);
        assert_eq!(enumerate_avoiders(&p("1234"), 3).count(), 6);
        assert_eq!(texts(enumerate_avoiders(&p("1"), 0)), [""]);
        assert_eq!(texts(enumerate_avoiders(&p("12"), 0)), [""]);
        assert_eq!(enumerate_avoiders(&Permutation::default(), 3).count(), 0);
    }

    #[test]
    fn shards_cover_everything() {
        let q = p("1324");
        let whole: Vec<_> = enumerate_avoiders(&q, 6).collect();
        let cfg = SweepConfig::with_jobs(1);
        assert_eq!(collect_avoiders(&q, 6, &cfg).unwrap(), whole);
        let cfg = SweepConfig::with_jobs(4);
        assert_eq!(collect_avoiders(&q, 6, &cfg).unwrap(), whole);
    }

    #[test]
    fn counts() {
        let cfg = SweepConfig::default();
        let mut cache = CacheStore::in_memory();
        let catalan = [1u32, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in catalan.iter().enumerate() {
            assert_eq!(count_avoiders(&p("213"), n, &mut cache, &cfg).unwrap(), BigUint::from(c));
        }
        assert_eq!(count_avoiders(&p("1324"), 8, &mut cache, &cfg).unwrap(), BigUint::from(15793u32));
        assert_eq!(count_avoiders(&p("4231"), 0, &mut cache, &cfg).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn budget_guard() {
        assert_eq!(estimate_nodes(0), 1);
        assert_eq!(estimate_nodes(3), 1 + 3 + 6 + 6);
        let tight = SweepConfig {
            node_budget: 100,
            jobs: Some(1),
        };
        assert!(matches!(
            count_avoiders_uncached(&p("123"), 8, &tight),
            Err(Error::ScaleRefused { .. })
        ));
        assert!(matches!(verify_encoder(4, 8, &tight), Err(Error::ScaleRefused { .. })));
        assert!(matches!(verify_encoder(9, 3, &tight), Err(Error::Domain(_))));
        assert_eq!(estimate_nodes(200), u128::MAX);
    }

    #[test]
    fn tiny_verification() {
        let report = verify_encoder(3, 1, &SweepConfig::default()).unwrap();
        assert!(report.passed);
        assert_eq!(report.total, 1);
        let report = verify_encoder(4, 0, &SweepConfig::default()).unwrap();
        assert!(report.passed);
        assert_eq!(report.total, 1);
    }

    #[test]
    fn failure_examples_are_capped() {
        let mut f = Failures::default();
        for i in 0..25 {
            f.record(|| i.to_string());
        }
        let mut g = Failures::default();
        g.record(|| "x".into());
        g.absorb(f);
        assert_eq!(g.count, 26);
        assert_eq!(g.examples.len(), MAX_EXAMPLES);
    }

    #[test]
    fn scan_small() {
        let cfg = SweepConfig::default();
        let mut cache = CacheStore::in_memory();
        let report = conjecture_scan(4, 4, &mut cache, &cfg).unwrap();
        assert_eq!(report.classes.iter().map(|c| c.members).sum::<usize>(), 24);
        assert!(report.classes.iter().all(|c| c.count == BigUint::from(23u32)));
        assert!(report.m_k_is_max && report.layered_dominates);
        assert!(conjecture_scan(6, 3, &mut cache, &cfg).is_err());
    }

    #[test]
    fn mixed_classes_count_as_layered() {
        let cfg = SweepConfig::default();
        let mut cache = CacheStore::in_memory();
        let report = conjecture_scan(4, 7, &mut cache, &cfg).unwrap();
        // 4231 is not layered and beats 1234 (2762 > 2761), but shares 1324's class.
        let m4 = report.classes.iter().find(|c| c.representative.to_string() == "1324").unwrap();
        assert_eq!((m4.members, m4.layered_members), (2, 1));
        assert_eq!(m4.count, BigUint::from(2762u32));
        assert!(report.layered_dominates && report.m_k_is_max);
    }
}
