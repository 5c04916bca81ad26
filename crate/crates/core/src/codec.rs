//! Word-pair encodings of `M_k`-avoiding permutations.
//!
//! Every encoding is a pair `(w, w')` of words of length `n`: `w` lists one
//! letter per entry in position order, `w'` lists the same letters in value
//! order (entry `1` first). The recursion on `k` is:
//!
//! * `k = 3`: right-to-left maxima become `1`, everything else `0`.
//! * odd `k = 2m + 1`: entries that start an `M_{2m}` occurrence ("green")
//!   become `0`; the remaining entries avoid `M_{2m}` and are encoded one
//!   level down.
//! * even `k = 2m + 2`: the canonical coloring with `σ = τ = 1`,
//!   `ρ = M_{2m-1}` splits `p` into a 132-avoiding red part (left-to-right
//!   minima `1`, others `2`) and an `M_{2m+1}`-avoiding blue part, encoded one
//!   level down and shifted up by three.
//!
//! The two parts are combined by [`merge_pair`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coloring::{canonical_coloring, green_mask, ColoringParams};
use crate::error::{Error, Result};
use crate::perm::{EntryMask, Extremal, PatternMatcher, Permutation};

/// A word over small non-negative letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn shifted_up(&self, by: u8) -> Word {
        Word(self.0.iter().map(|&l| l + by).collect())
    }

    /// `None` if some letter is smaller than `by`.
    pub fn shifted_down(&self, by: u8) -> Option<Word> {
        self.0.iter().map(|&l| l.checked_sub(by)).collect::<Option<_>>().map(Word)
    }

    /// Sorted letter multiset.
    pub fn letter_multiset(&self) -> Vec<u8> {
        let mut letters = self.0.clone();
        letters.sort_unstable();
        letters
    }

    fn has_factor(&self, x: u8, y: u8) -> bool {
        self.0.windows(2).any(|pair| pair[0] == x && pair[1] == y)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::MalformedInput(format!("not a letter: {part:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::MalformedInput(format!("not a letter: {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A position-indexed word `w` and a value-indexed word `w'`, serialized as
/// `{"w": "...", "wp": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodePair {
    pub w: Word,
    pub wp: Word,
}

impl CodePair {
    pub fn new(w: Word, wp: Word) -> Result<Self> {
        if w.len() != wp.len() {
            return Err(Error::LengthMismatch {
                expected: w.len(),
                found: wp.len(),
            });
        }
        Ok(CodePair { w, wp })
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Both words carry the same letters, which holds for every encoder
    /// output since `w'` is `w` rearranged by the inverse permutation.
    pub fn letters_agree(&self) -> bool {
        self.w.letter_multiset() == self.wp.letter_multiset()
    }

    pub fn shifted_up(&self, by: u8) -> CodePair {
        CodePair {
            w: self.w.shifted_up(by),
            wp: self.wp.shifted_up(by),
        }
    }

    fn constant(letter: u8, len: usize) -> CodePair {
        CodePair {
            w: Word(vec![letter; len]),
            wp: Word(vec![letter; len]),
        }
    }
}

impl fmt::Display for CodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.w, self.wp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(Error::MalformedInput(format!("parity must be odd or even, got {other:?}"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Words with no `(3i)(3i-1)` factor over `{0, ..., 3m-5}` (odd family, the
/// codomain for `M_{2m-1}`) or `{1, ..., 3m-2}` (even family, for `M_{2m}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordFamily {
    m: usize,
    parity: Parity,
}

impl WordFamily {
    pub fn new(m: usize, parity: Parity) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("word families need m >= 2, got {m}")));
        }
        if 3 * m > u8::MAX as usize {
            return Err(Error::Domain(format!("m = {m} is too large for byte letters")));
        }
        Ok(WordFamily { m, parity })
    }

    /// The codomain family of the encoder for `M_k`.
    pub fn for_pattern(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Domain(format!("M_k is defined for k >= 3, got {k}")));
        }
        if k % 2 == 1 {
            WordFamily::new(k.div_ceil(2), Parity::Odd)
        } else {
            WordFamily::new(k / 2, Parity::Even)
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn pattern_length(&self) -> usize {
        match self.parity {
            Parity::Odd => 2 * self.m - 1,
            Parity::Even => 2 * self.m,
        }
    }

    pub fn alphabet(&self) -> RangeInclusive<u8> {
        let m = self.m as u8;
        match self.parity {
            Parity::Odd => 0..=3 * m - 5,
            Parity::Even => 1..=3 * m - 2,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet().count()
    }

    /// Forbidden adjacent pairs `(3i, 3i-1)` with both letters in the alphabet.
    pub fn forbidden_factors(&self) -> Vec<(u8, u8)> {
        let alphabet = self.alphabet();
        (1..)
            .map(|i: u8| (3 * i, 3 * i - 1))
            .take_while(|&(x, _)| x <= *alphabet.end())
            .filter(|&(_, y)| alphabet.contains(&y))
            .collect()
    }

    pub fn validate(&self, word: &Word) -> bool {
        let alphabet = self.alphabet();
        word.letters().iter().all(|l| alphabet.contains(l))
            && self
                .forbidden_factors()
                .iter()
                .all(|&(x, y)| !word.has_factor(x, y))
    }

    fn check_letters(&self, word: &Word) -> Result<()> {
        let alphabet = self.alphabet();
        match word.letters().iter().find(|l| !alphabet.contains(l)) {
            Some(&letter) => Err(Error::LetterOutOfAlphabet {
                letter,
                alphabet: format!("{}..={}", alphabet.start(), alphabet.end()),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for WordFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Odd => write!(f, "V_{}", 3 * self.m - 4),
            Parity::Even => write!(f, "W_{}", 3 * self.m - 2),
        }
    }
}

/// Which base encoding to use for a 213- or 132-avoider.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalVariant {
    /// 213-avoiders: right-to-left maxima `1`, others `0`.
    RightToLeftMax,
    /// 132-avoiders: left-to-right minima `1`, others `2`.
    LeftToRightMin,
}

pub fn encode_extremal(p: &Permutation, variant: ExtremalVariant) -> Result<CodePair> {
    let forbidden = match variant {
        ExtremalVariant::RightToLeftMax => Permutation::classical_m(3)?,
        ExtremalVariant::LeftToRightMin => Permutation::from_vec_unchecked(vec![1, 3, 2]),
    };
    check_avoids(p, &forbidden)?;
    Ok(extremal_pair(p, variant))
}

fn extremal_pair(p: &Permutation, variant: ExtremalVariant) -> CodePair {
    let (kind, marked, other) = match variant {
        ExtremalVariant::RightToLeftMax => (Extremal::RightToLeftMax, 1, 0),
        ExtremalVariant::LeftToRightMin => (Extremal::LeftToRightMin, 1, 2),
    };
    let mask = p.extremal_mask(kind);
    let w: Vec<u8> = mask.0.iter().map(|&b| if b { marked } else { other }).collect();
    let wp = value_order(p, &w);
    CodePair {
        w: Word(w),
        wp: Word(wp),
    }
}

/// Rearranges a position-indexed word into value order.
fn value_order(p: &Permutation, w: &[u8]) -> Vec<u8> {
    let mut out = vec![0; w.len()];
    for (&v, &letter) in p.values().iter().zip(w) {
        out[v as usize - 1] = letter;
    }
    out
}

fn check_avoids(p: &Permutation, q: &Permutation) -> Result<()> {
    match PatternMatcher::new(q).find_first(p.values()) {
        Some(witness) => Err(Error::PreconditionViolated {
            pattern: q.to_string(),
            witness: witness.to_string(),
        }),
        None => Ok(()),
    }
}

/// Merges a pair encoding the marked entries of `p` with a pair encoding the
/// unmarked ones. In `w`, position `i` takes the next letter of the word of
/// its class; in `w'`, value `i` takes the next letter of the value-word of
/// its class.
pub fn merge_pair(
    mask: &EntryMask,
    p: &Permutation,
    marked: &CodePair,
    unmarked: &CodePair,
) -> Result<CodePair> {
    let n = p.len();
    if mask.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: mask.len(),
        });
    }
    let marked_count = mask.count_marked();
    for (pair, expected) in [(marked, marked_count), (unmarked, n - marked_count)] {
        for word in [&pair.w, &pair.wp] {
            if word.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    found: word.len(),
                });
            }
        }
    }
    let marked_letters: BTreeSet<u8> = marked.w.0.iter().chain(&marked.wp.0).copied().collect();
    if let Some(&letter) = unmarked
        .w
        .0
        .iter()
        .chain(&unmarked.wp.0)
        .find(|l| marked_letters.contains(l))
    {
        return Err(Error::AlphabetOverlap(letter));
    }

    let mut w = Vec::with_capacity(n);
    let (mut a, mut b) = (marked.w.0.iter(), unmarked.w.0.iter());
    for &is_marked in &mask.0 {
        let next = if is_marked { a.next() } else { b.next() };
        w.push(*next.expect("lengths checked"));
    }

    let inverse = p.inverse();
    let mut wp = Vec::with_capacity(n);
    let (mut a, mut b) = (marked.wp.0.iter(), unmarked.wp.0.iter());
    for &pos in inverse.values() {
        let next = if mask.marked(pos as usize - 1) { a.next() } else { b.next() };
        wp.push(*next.expect("lengths checked"));
    }

    Ok(CodePair {
        w: Word(w),
        wp: Word(wp),
    })
}

/// Encodes an `M_k`-avoiding permutation. Fails with
/// [`Error::PreconditionViolated`] (carrying a witness) if `p` contains `M_k`.
pub fn encode_m(p: &Permutation, k: usize) -> Result<CodePair> {
    let pattern = Permutation::classical_m(k)?;
    WordFamily::for_pattern(k)?;
    check_avoids(p, &pattern)?;
    Ok(encode_unchecked(p, k))
}

fn encode_unchecked(p: &Permutation, k: usize) -> CodePair {
    if k == 3 {
        return extremal_pair(p, ExtremalVariant::RightToLeftMax);
    }
    if k % 2 == 1 {
        let mask = green_mask(p, (k - 1) / 2).expect("k >= 5");
        let (green, yellow) = mask.split(p);
        let yellow_pair = encode_unchecked(&yellow, k - 1);
        merge_pair(&mask, p, &CodePair::constant(0, green.len()), &yellow_pair)
            .expect("green letters are 0, yellow letters are positive")
    } else {
        let params = ColoringParams::for_even_pattern(k).expect("k >= 4 and even");
        let mask = canonical_coloring(p, &params);
        let (red, blue) = mask.split(p);
        let red_pair = extremal_pair(&red, ExtremalVariant::LeftToRightMin);
        let blue_pair = encode_unchecked(&blue, k - 1).shifted_up(3);
        merge_pair(&mask, p, &red_pair, &blue_pair)
            .expect("red letters are 1 and 2, blue letters are at least 3")
    }
}

/// Recovers the `M_k`-avoider whose encoding is `pair`.
///
/// The greedy reconstruction is always confirmed by re-encoding; any pair that
/// does not survive the round trip is reported as [`Error::NotInImage`].
pub fn decode_m(pair: &CodePair, k: usize) -> Result<Permutation> {
    let family = WordFamily::for_pattern(k)?;
    if pair.w.len() != pair.wp.len() {
        return Err(Error::LengthMismatch {
            expected: pair.w.len(),
            found: pair.wp.len(),
        });
    }
    family.check_letters(&pair.w)?;
    family.check_letters(&pair.wp)?;

    let p = decode_greedy(&pair.w.0, &pair.wp.0, k).map_err(Error::NotInImage)?;
    let pattern = Permutation::classical_m(k)?;
    if !crate::perm::avoids(&p, &pattern) {
        return Err(Error::NotInImage(format!("reconstruction {p} contains {pattern}")));
    }
    if encode_unchecked(&p, k) != *pair {
        return Err(Error::NotInImage(format!(
            "reconstruction {p} does not re-encode to the given pair"
        )));
    }
    Ok(p)
}

type Decoded = std::result::Result<Permutation, String>;

fn decode_greedy(w: &[u8], wp: &[u8], k: usize) -> Decoded {
    if k == 3 {
        return decode_rl_max(w, wp);
    }
    if k % 2 == 1 {
        let (green, yellow) = Split::new(w, wp, |l| l == 0)?;
        let yellow_perm = decode_greedy(&yellow.w, &yellow.wp, k - 1)?;
        let mut values = vec![0; w.len()];
        yellow.place(&yellow_perm, &mut values);
        fill_green(&mut values, &green, k - 1)?;
        Ok(Permutation::from_vec_unchecked(values))
    } else {
        let (red, blue) = Split::new(w, wp, |l| l <= 2)?;
        let red_perm = decode_lr_min(&red.w, &red.wp)?;
        let shift = |word: &[u8]| word.iter().map(|&l| l - 3).collect::<Vec<u8>>();
        let blue_perm = decode_greedy(&shift(&blue.w), &shift(&blue.wp), k - 1)?;
        let mut values = vec![0; w.len()];
        red.place(&red_perm, &mut values);
        blue.place(&blue_perm, &mut values);
        Ok(Permutation::from_vec_unchecked(values))
    }
}

/// One class of entries read off a word pair: where they sit, which values
/// they take, and their sub-words.
struct Split {
    positions: Vec<usize>,
    values: Vec<u32>,
    w: Vec<u8>,
    wp: Vec<u8>,
}

impl Split {
    fn new(w: &[u8], wp: &[u8], in_first: impl Fn(u8) -> bool) -> std::result::Result<(Split, Split), String> {
        let mut first = Split::empty();
        let mut second = Split::empty();
        for (i, &l) in w.iter().enumerate() {
            let class = if in_first(l) { &mut first } else { &mut second };
            class.positions.push(i);
            class.w.push(l);
        }
        for (i, &l) in wp.iter().enumerate() {
            let class = if in_first(l) { &mut first } else { &mut second };
            class.values.push(i as u32 + 1);
            class.wp.push(l);
        }
        if first.positions.len() != first.values.len() {
            return Err(format!(
                "{} entries of one class by position but {} by value",
                first.positions.len(),
                first.values.len()
            ));
        }
        Ok((first, second))
    }

    fn empty() -> Split {
        Split {
            positions: Vec::new(),
            values: Vec::new(),
            w: Vec::new(),
            wp: Vec::new(),
        }
    }

    /// Writes a decoded sub-permutation into its positions and values.
    fn place(&self, sub: &Permutation, out: &mut [u32]) {
        for (&pos, &rank) in self.positions.iter().zip(sub.values()) {
            out[pos] = self.values[rank as usize - 1];
        }
    }
}

/// 213-avoider from its right-to-left-maxima pair (letters `1` marked, `0`
/// unmarked). The marked values are placed decreasingly; the remaining slots,
/// right to left, take the largest unused value below the nearest maximum on
/// their right.
fn decode_rl_max(w: &[u8], wp: &[u8]) -> Decoded {
    let n = w.len();
    if n == 0 {
        return Ok(Permutation::default());
    }
    if w[n - 1] != 1 || wp[n - 1] != 1 {
        return Err("the last entry and the largest entry are always right-to-left maxima".into());
    }
    let (marked, rest) = Split::new(w, wp, |l| l == 1)?;
    let mut values = vec![0; n];
    for (&pos, &v) in marked.positions.iter().zip(marked.values.iter().rev()) {
        values[pos] = v;
    }
    let mut unused: BTreeSet<u32> = rest.values.into_iter().collect();
    let mut ceiling = 0;
    for i in (0..n).rev() {
        if w[i] == 1 {
            ceiling = values[i];
            continue;
        }
        let v = *unused
            .range(..ceiling)
            .next_back()
            .ok_or_else(|| format!("no value fits below {ceiling} at position {}", i + 1))?;
        unused.remove(&v);
        values[i] = v;
    }
    Ok(Permutation::from_vec_unchecked(values))
}

/// 132-avoider from its left-to-right-minima pair (letters `1` marked, `2`
/// unmarked). Mirror image of [`decode_rl_max`]: slots are filled left to
/// right with the smallest unused value above the nearest minimum on their
/// left.
fn decode_lr_min(w: &[u8], wp: &[u8]) -> Decoded {
    let n = w.len();
    if n == 0 {
        return Ok(Permutation::default());
    }
    if w[0] != 1 || wp[0] != 1 {
        return Err("the first entry and the entry 1 are always left-to-right minima".into());
    }
    let (marked, rest) = Split::new(w, wp, |l| l == 1)?;
    let mut values = vec![0; n];
    for (&pos, &v) in marked.positions.iter().zip(marked.values.iter().rev()) {
        values[pos] = v;
    }
    let mut unused: BTreeSet<u32> = rest.values.into_iter().collect();
    let mut floor = 0;
    for i in 0..n {
        if w[i] == 1 {
            floor = values[i];
            continue;
        }
        let v = *unused
            .range(floor + 1..)
            .next()
            .ok_or_else(|| format!("no value fits above {floor} at position {}", i + 1))?;
        unused.remove(&v);
        values[i] = v;
    }
    Ok(Permutation::from_vec_unchecked(values))
}

/// Inserts the green entries right to left. Each slot takes the largest
/// remaining green value that would start an occurrence of `M_{even_k}` with
/// the entries already placed to its right.
fn fill_green(values: &mut [u32], green: &Split, even_k: usize) -> std::result::Result<(), String> {
    let matcher = PatternMatcher::new(&Permutation::classical_m(even_k).expect("even_k >= 4"));
    let mut unused: BTreeSet<u32> = green.values.iter().copied().collect();
    let mut host = Vec::with_capacity(values.len());
    for &pos in green.positions.iter().rev() {
        host.clear();
        host.push(0);
        host.extend_from_slice(&values[pos + 1..]);
        let chosen = unused.iter().rev().copied().find(|&candidate| {
            host[0] = candidate;
            matcher.occurs_starting_at_first(&host)
        });
        let v = chosen.ok_or_else(|| format!("no eligible green value for position {}", pos + 1))?;
        unused.remove(&v);
        values[pos] = v;
    }
    Ok(())
}
