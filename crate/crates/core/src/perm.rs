//! Permutations in one-line notation and classical pattern containment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `{1, ..., n}` in one-line notation. The empty permutation
/// is allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation, rejecting anything that is not a bijection on
    /// `{1, ..., n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(Error::MalformedInput(format!(
                    "value {v} is out of range 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[idx - 1], true) {
                return Err(Error::MalformedInput(format!("value {v} appears twice")));
            }
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    /// The pattern formed by a sequence of distinct integers, i.e. the
    /// permutation order-isomorphic to it.
    pub fn standardize(seq: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_unstable_by_key(|&i| seq[i]);
        let mut values = vec![0; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation { values: inv }
    }

    pub fn reverse(&self) -> Self {
        Permutation {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let n = self.len() as u32 + 1;
        Permutation {
            values: self.values.iter().map(|&v| n - v).collect(),
        }
    }

    /// All eight images under the group generated by reverse, complement and
    /// inverse (with repetitions when the permutation has symmetries).
    pub fn symmetries(&self) -> [Permutation; 8] {
        let r = self.reverse();
        let c = self.complement();
        let rc = r.complement();
        let i = self.inverse();
        let ri = i.reverse();
        let ci = i.complement();
        let rci = ri.complement();
        [self.clone(), r, c, rc, i, ri, ci, rci]
    }

    /// Lexicographically smallest member of the symmetry class.
    pub fn symmetry_class(&self) -> Permutation {
        self.symmetries()
            .into_iter()
            .min()
            .expect("symmetry group is nonempty")
    }

    /// `self ⊕ other`: `other` is appended with every entry raised by `|self|`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.len() as u32;
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|&v| v + shift));
        Permutation { values }
    }

    /// `self ⊖ other`: every entry of `self` is raised by `|other|`, then
    /// `other` is appended.
    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let shift = other.len() as u32;
        let mut values: Vec<u32> = self.values.iter().map(|&v| v + shift).collect();
        values.extend_from_slice(&other.values);
        Permutation { values }
    }

    /// The pattern `M_k`.
    ///
    /// `M_{2m} = 1 3 2 5 4 ... (2m-1)(2m-2) 2m` and `M_{2m-1}` is `M_{2m}` with
    /// its first entry removed and the rest relabelled, which gives
    /// `2 1 4 3 ... (2m-2)(2m-3)(2m-1)`: a pairwise-swapped increasing run
    /// followed by the maximum.
    pub fn classical_m(k: usize) -> Result<Permutation> {
        if k < 3 {
            return Err(Error::Domain(format!("M_k is defined for k >= 3, got {k}")));
        }
        let m = k.div_ceil(2);
        let mut values = Vec::with_capacity(2 * m);
        values.push(1);
        for j in 1..m as u32 {
            values.push(2 * j + 1);
            values.push(2 * j);
        }
        values.push(2 * m as u32);
        if k % 2 == 1 {
            values.remove(0);
            values.iter_mut().for_each(|v| *v -= 1);
        }
        Ok(Permutation { values })
    }

    pub fn extremal_mask(&self, kind: Extremal) -> EntryMask {
        let n = self.len();
        let mut marks = vec![false; n];
        match kind {
            Extremal::RightToLeftMax => {
                let mut best = 0;
                for i in (0..n).rev() {
                    if self.values[i] > best {
                        best = self.values[i];
                        marks[i] = true;
                    }
                }
            }
            Extremal::LeftToRightMin => {
                let mut best = u32::MAX;
                for (mark, &v) in marks.iter_mut().zip(&self.values) {
                    if v < best {
                        best = v;
                        *mark = true;
                    }
                }
            }
        }
        EntryMask(marks)
    }

    /// A permutation is layered iff it avoids both 231 and 312.
    pub fn is_layered(&self) -> bool {
        let p231 = Permutation::from_vec_unchecked(vec![2, 3, 1]);
        let p312 = Permutation::from_vec_unchecked(vec![3, 1, 2]);
        avoids(self, &p231) && avoids(self, &p312)
    }

    /// Every permutation of length `n`, in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Permutation::identity(n).values;
        loop {
            out.push(Permutation {
                values: current.clone(),
            });
            if !next_permutation(&mut current) {
                return out;
            }
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Compact digits when every value fits in one digit (`n <= 9`), otherwise
/// comma-separated.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::MalformedInput(format!("not a number: {part:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::MalformedInput(format!("not a digit: {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    /// Larger than every entry to its right; the last entry always qualifies.
    RightToLeftMax,
    /// Smaller than every entry to its left; the first entry always qualifies.
    LeftToRightMin,
}

/// One boolean tag per entry of a permutation. What `true` means depends on
/// the producer: extremal, red, or green.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EntryMask(pub Vec<bool>);

impl EntryMask {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn marked(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn count_marked(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// The values of `p` at marked positions, left to right.
    pub fn marked_values(&self, p: &Permutation) -> Vec<u32> {
        self.select(p, true)
    }

    pub fn unmarked_values(&self, p: &Permutation) -> Vec<u32> {
        self.select(p, false)
    }

    fn select(&self, p: &Permutation, wanted: bool) -> Vec<u32> {
        debug_assert_eq!(self.len(), p.len());
        p.values()
            .iter()
            .zip(&self.0)
            .filter(|(_, &m)| m == wanted)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Standardized patterns of the marked and unmarked substrings.
    pub fn split(&self, p: &Permutation) -> (Permutation, Permutation) {
        (
            Permutation::standardize(&self.marked_values(p)),
            Permutation::standardize(&self.unmarked_values(p)),
        )
    }
}

impl fmt::Display for EntryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Strictly increasing 0-based host indices of one pattern occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence(pub Vec<usize>);

impl fmt::Display for Occurrence {
    /// 1-based, e.g. `(1,2,3,4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Up to `limit` occurrences of `q` in `p`, in lexicographic index order.
pub fn occurrences(p: &Permutation, q: &Permutation, limit: usize) -> Vec<Occurrence> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    PatternMatcher::new(q).for_each(p.values(), Anchor::Free, |idx| {
        out.push(Occurrence(idx.to_vec()));
        out.len() < limit
    });
    out
}

/// `p` avoids `q` iff it has no occurrence of `q`. A nonempty `q` is avoided
/// by the empty permutation; the empty pattern is contained in everything.
pub fn avoids(p: &Permutation, q: &Permutation) -> bool {
    !PatternMatcher::new(q).occurs_in(p.values())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Anchor {
    Free,
    /// The first pattern entry sits at host index 0.
    Start,
    /// The last pattern entry sits at the last host index.
    End,
}

/// Bounds for one step of the backtracking search, as pattern indices of
/// entries assigned in earlier steps.
#[derive(Clone, Copy, Debug, Default)]
struct Step {
    index: usize,
    left: Option<usize>,
    right: Option<usize>,
    below: Option<usize>,
    above: Option<usize>,
}

#[derive(Clone, Debug)]
struct Plan {
    steps: Vec<Step>,
}

impl Plan {
    fn new(pattern: &[u32], order: &[usize]) -> Plan {
        let steps = order
            .iter()
            .enumerate()
            .map(|(s, &j)| {
                let done = &order[..s];
                Step {
                    index: j,
                    left: done.iter().copied().filter(|&a| a < j).max(),
                    right: done.iter().copied().filter(|&a| a > j).min(),
                    below: done
                        .iter()
                        .copied()
                        .filter(|&a| pattern[a] < pattern[j])
                        .max_by_key(|&a| pattern[a]),
                    above: done
                        .iter()
                        .copied()
                        .filter(|&a| pattern[a] > pattern[j])
                        .min_by_key(|&a| pattern[a]),
                }
            })
            .collect();
        Plan { steps }
    }
}

/// Backtracking occurrence search for a fixed pattern. Each step narrows the
/// candidate host positions to the window between already-placed neighbours
/// (leaving room for the pattern entries still to come) and the candidate
/// values to the window between already-placed value neighbours.
#[derive(Clone, Debug)]
pub struct PatternMatcher {
    pattern: Vec<u32>,
    forward: Plan,
    last_first: Plan,
}

impl PatternMatcher {
    pub fn new(q: &Permutation) -> Self {
        let k = q.len();
        let forward: Vec<usize> = (0..k).collect();
        let last_first: Vec<usize> = if k == 0 {
            Vec::new()
        } else {
            std::iter::once(k - 1).chain(0..k - 1).collect()
        };
        PatternMatcher {
            pattern: q.values().to_vec(),
            forward: Plan::new(q.values(), &forward),
            last_first: Plan::new(q.values(), &last_first),
        }
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    /// Whether `host` (distinct values, not necessarily `1..=n`) contains the
    /// pattern.
    pub fn occurs_in(&self, host: &[u32]) -> bool {
        self.any(host, Anchor::Free)
    }

    /// Whether some occurrence uses `host[0]` as its first entry.
    pub fn occurs_starting_at_first(&self, host: &[u32]) -> bool {
        self.any(host, Anchor::Start)
    }

    /// Whether some occurrence uses the last entry of `host` as its last entry.
    pub fn occurs_ending_at_last(&self, host: &[u32]) -> bool {
        self.any(host, Anchor::End)
    }

    /// First occurrence in lexicographic order, if any.
    pub fn find_first(&self, host: &[u32]) -> Option<Occurrence> {
        let mut found = None;
        self.for_each(host, Anchor::Free, |idx| {
            found = Some(Occurrence(idx.to_vec()));
            false
        });
        found
    }

    fn any(&self, host: &[u32], anchor: Anchor) -> bool {
        let mut found = false;
        self.for_each(host, anchor, |_| {
            found = true;
            false
        });
        found
    }

    /// Calls `visit` with each occurrence until it returns `false`.
    fn for_each<F: FnMut(&[usize]) -> bool>(&self, host: &[u32], anchor: Anchor, mut visit: F) {
        let k = self.pattern.len();
        if k == 0 {
            visit(&[]);
            return;
        }
        if k > host.len() {
            return;
        }
        let plan = match anchor {
            Anchor::End => &self.last_first,
            _ => &self.forward,
        };
        let mut chosen = vec![usize::MAX; k];
        let mut ordered = vec![0; k];
        let mut search = Search {
            host,
            k,
            plan,
            anchor,
            chosen: &mut chosen,
            ordered: &mut ordered,
        };
        search.step(0, &mut visit);
    }
}

struct Search<'a> {
    host: &'a [u32],
    k: usize,
    plan: &'a Plan,
    anchor: Anchor,
    chosen: &'a mut [usize],
    ordered: &'a mut [usize],
}

impl Search<'_> {
    /// Returns `false` once the visitor asked to stop.
    fn step<F: FnMut(&[usize]) -> bool>(&mut self, s: usize, visit: &mut F) -> bool {
        if s == self.k {
            self.ordered.copy_from_slice(self.chosen);
            return visit(self.ordered);
        }
        let st = self.plan.steps[s];
        let j = st.index;
        let n = self.host.len();

        let (lo, hi) = if s == 0 && self.anchor != Anchor::Free {
            let at = if self.anchor == Anchor::Start { 0 } else { n - 1 };
            (at, at + 1)
        } else {
            let lo = match st.left {
                Some(a) => self.chosen[a] + (j - a),
                None => j,
            };
            let hi = match st.right {
                Some(b) => (self.chosen[b] + 1).saturating_sub(b - j),
                None => n - (self.k - 1 - j),
            };
            (lo, hi)
        };
        let vmin = st.below.map(|a| self.host[self.chosen[a]]);
        let vmax = st.above.map(|a| self.host[self.chosen[a]]);

        for i in lo..hi {
            let v = self.host[i];
            if vmin.is_some_and(|m| v <= m) || vmax.is_some_and(|m| v >= m) {
                continue;
            }
            self.chosen[j] = i;
            if !self.step(s + 1, visit) {
                return false;
            }
        }
        self.chosen[j] = usize::MAX;
        true
    }
}
