//! Exact sizes of the word families and the bound tables built from them.
//!
//! A word in a family stays valid when any letter is appended, except when
//! the last two letters form one of the forbidden factors. No forbidden factor
//! starts with a letter that can end one, so the count satisfies
//! `c_n = A c_{n-1} - B c_{n-2}` with `A` the alphabet size and `B` the number
//! of forbidden factors.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::codec::{Parity, WordFamily};
use crate::error::{Error, Result};

/// Memoized exact counts for one family.
#[derive(Clone, Debug)]
pub struct RecurrenceCounter {
    family: WordFamily,
    a: u64,
    b: u64,
    memo: Vec<BigUint>,
}

impl RecurrenceCounter {
    pub fn new(family: WordFamily) -> Self {
        let (a, b) = coefficients(&family);
        RecurrenceCounter {
            family,
            a,
            b,
            memo: vec![BigUint::one(), BigUint::from(a)],
        }
    }

    pub fn family(&self) -> WordFamily {
        self.family
    }

    /// `(A, B)` in `c_n = A c_{n-1} - B c_{n-2}`.
    pub fn coefficients(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn count(&mut self, n: usize) -> BigUint {
        while self.memo.len() <= n {
            let len = self.memo.len();
            let next = &self.memo[len - 1] * self.a - &self.memo[len - 2] * self.b;
            self.memo.push(next);
        }
        self.memo[n].clone()
    }
}

fn coefficients(family: &WordFamily) -> (u64, u64) {
    let m = family.m() as u64;
    match family.parity() {
        Parity::Even => (3 * m - 2, m - 1),
        Parity::Odd => (3 * m - 4, m - 2),
    }
}

/// Number of length-`n` words in `family`.
pub fn count_words(family: WordFamily, n: usize) -> BigUint {
    RecurrenceCounter::new(family).count(n)
}

/// `c_n = coef1 * root1^n + coef2 * root2^n`, in floating point. Diagnostic
/// only; the exact recurrence is authoritative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedForm {
    pub root1: f64,
    pub root2: f64,
    pub coef1: f64,
    pub coef2: f64,
}

impl ClosedForm {
    pub fn evaluate(&self, n: usize) -> f64 {
        let n = n as i32;
        self.coef1 * self.root1.powi(n) + self.coef2 * self.root2.powi(n)
    }
}

/// Roots of `x^2 - A x + B` and the matching coefficients. The discriminant is
/// `9m^2 - 16m + 8` for the even family and `9m^2 - 28m + 24` for the odd one.
pub fn closed_form(family: WordFamily) -> ClosedForm {
    let (a, b) = coefficients(&family);
    let (a, b) = (a as f64, b as f64);
    let sqrt_disc = (a * a - 4.0 * b).sqrt();
    let root1 = (a + sqrt_disc) / 2.0;
    let root2 = (a - sqrt_disc) / 2.0;
    ClosedForm {
        root1,
        root2,
        coef1: root1 / (root1 - root2),
        coef2: root2 / (root2 - root1),
    }
}

/// One row of a bound table: `S_n(M_k)`, the squared family size at `n - 1`
/// and the cap `(2.25 k^2)^n`, held exactly as `(9k^2)^n / 4^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub k: usize,
    pub n: usize,
    #[serde(serialize_with = "as_decimal")]
    pub exact_count: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub word_bound: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub cap_numerator: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub cap_denominator: BigUint,
    pub ok_word: bool,
    pub ok_cap: bool,
}

fn as_decimal<S: serde::Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl BoundRecord {
    pub fn new(k: usize, n: usize, exact_count: BigUint, counter: &mut RecurrenceCounter) -> Self {
        // The empty permutation encodes to the empty pair; there is no first
        // letter to drop, so the bound at n = 0 is taken to be 1.
        let word_bound = if n == 0 {
            BigUint::one()
        } else {
            let size = counter.count(n - 1);
            &size * &size
        };
        let cap_numerator = BigUint::from(9 * k as u64 * k as u64).pow(n as u32);
        let cap_denominator = BigUint::from(4u32).pow(n as u32);
        let ok_word = exact_count <= word_bound;
        let ok_cap = &cap_denominator * &exact_count <= cap_numerator;
        BoundRecord {
            k,
            n,
            exact_count,
            word_bound,
            cap_numerator,
            cap_denominator,
            ok_word,
            ok_cap,
        }
    }

    /// The cap `(2.25 k^2)^n` as an exact decimal string.
    pub fn cap_decimal(&self) -> String {
        exact_decimal(&self.cap_numerator, self.n)
    }

    pub fn csv_header() -> &'static str {
        "k,n,count,word_bound_sq,cap,ok_word,ok_cap"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.exact_count,
            self.word_bound,
            self.cap_decimal(),
            self.ok_word,
            self.ok_cap
        )
    }
}

/// `numerator / 4^n` written out exactly; `1 / 4^n = 25^n / 100^n` so `2n`
/// fractional digits always suffice.
fn exact_decimal(numerator: &BigUint, n: usize) -> String {
    if n == 0 {
        return numerator.to_string();
    }
    let scaled = numerator * BigUint::from(25u32).pow(n as u32);
    let digits = scaled.to_string();
    let frac_len = 2 * n;
    let padded = format!("{digits:0>width$}", width = frac_len + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - frac_len);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part}")
    }
}

/// Bound rows for `n = 0..=n_max` from supplied avoider counts.
pub fn bound_table(k: usize, n_max: usize, counts: &BTreeMap<usize, BigUint>) -> Result<Vec<BoundRecord>> {
    let mut counter = RecurrenceCounter::new(WordFamily::for_pattern(k)?);
    (0..=n_max)
        .map(|n| {
            let count = counts.get(&n).ok_or(Error::MissingCount(n))?;
            Ok(BoundRecord::new(k, n, count.clone(), &mut counter))
        })
        .collect()
}

/// Coefficients of `(1 - A x + B x^2) * sum_{n <= n_max} c_n x^n` up to
/// `x^n_max`. Every coefficient but the constant term vanishes.
pub fn generating_function_residue(family: WordFamily, n_max: usize) -> Vec<i128> {
    let mut counter = RecurrenceCounter::new(family);
    let (a, b) = counter.coefficients();
    let counts: Vec<BigUint> = (0..=n_max).map(|n| counter.count(n)).collect();
    (0..=n_max)
        .map(|n| {
            let mut positive = counts[n].clone();
            let mut negative = BigUint::zero();
            if n >= 1 {
                negative += &counts[n - 1] * a;
            }
            if n >= 2 {
                positive += &counts[n - 2] * b;
            }
            if positive >= negative {
                i128::try_from(positive - negative).expect("residue fits")
            } else {
                -i128::try_from(negative - positive).expect("residue fits")
            }
        })
        .collect()
}
