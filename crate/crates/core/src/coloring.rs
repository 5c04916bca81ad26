//! Entry colorings that split a permutation into two simpler avoiders.

use crate::error::{Error, Result};
use crate::perm::{EntryMask, PatternMatcher, Permutation};

/// The three patterns `σ`, `τ`, `ρ` of a canonical coloring. A permutation
/// avoiding `σ ⊕ (τ ⊖ 1) ⊕ ρ` is split into red entries avoiding
/// `σ ⊕ (τ ⊖ 1)` and blue entries avoiding `(τ ⊖ 1) ⊕ ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringParams {
    sigma: Permutation,
    tau: Permutation,
    rho: Permutation,
}

impl ColoringParams {
    pub fn new(sigma: Permutation, tau: Permutation, rho: Permutation) -> Result<Self> {
        if sigma.is_empty() || tau.is_empty() || rho.is_empty() {
            return Err(Error::Domain("coloring patterns must be nonempty".into()));
        }
        Ok(ColoringParams { sigma, tau, rho })
    }

    /// `σ = τ = ρ = 1`: splits a 1324-avoider into a 132-avoider and a
    /// 213-avoider.
    pub fn trivial() -> Self {
        let one = Permutation::identity(1);
        ColoringParams {
            sigma: one.clone(),
            tau: one.clone(),
            rho: one,
        }
    }

    /// Parameters used when encoding `M_k`-avoiders for even `k >= 4`:
    /// `σ = τ = 1` and `ρ = M_{k-3}`, with `M_1 = 1`.
    pub fn for_even_pattern(k: usize) -> Result<Self> {
        if k < 4 || !k.is_multiple_of(2) {
            return Err(Error::Domain(format!("expected an even k >= 4, got {k}")));
        }
        let rho = if k == 4 {
            Permutation::identity(1)
        } else {
            Permutation::classical_m(k - 3)?
        };
        Ok(ColoringParams {
            rho,
            ..ColoringParams::trivial()
        })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn rho(&self) -> &Permutation {
        &self.rho
    }

    /// `σ ⊕ (τ ⊖ 1)`, avoided by the red entries.
    pub fn red_pattern(&self) -> Permutation {
        self.sigma.direct_sum(&self.tau_minus_one())
    }

    /// `(τ ⊖ 1) ⊕ ρ`, avoided by the blue entries.
    pub fn blue_pattern(&self) -> Permutation {
        self.tau_minus_one().direct_sum(&self.rho)
    }

    /// `σ ⊕ (τ ⊖ 1) ⊕ ρ`.
    pub fn avoided_pattern(&self) -> Permutation {
        self.red_pattern().direct_sum(&self.rho)
    }

    fn tau_minus_one(&self) -> Permutation {
        self.tau.skew_sum(&Permutation::identity(1))
    }
}

/// Canonical red/blue coloring, `true` meaning red.
///
/// Entries are colored left to right: blue if making it red would complete a
/// red copy of `σ ⊕ (τ ⊖ 1)`, blue if it exceeds some blue entry to its left,
/// red otherwise. `ρ` does not enter the procedure; it only determines what
/// the blue entries are guaranteed to avoid.
pub fn canonical_coloring(p: &Permutation, params: &ColoringParams) -> EntryMask {
    let matcher = PatternMatcher::new(&params.red_pattern());
    let mut red = Vec::with_capacity(p.len());
    let mut min_blue = u32::MAX;
    let mut mask = Vec::with_capacity(p.len());
    for &v in p.values() {
        red.push(v);
        let is_red = v < min_blue && !matcher.occurs_ending_at_last(&red);
        if is_red {
            mask.push(true);
        } else {
            red.pop();
            min_blue = min_blue.min(v);
            mask.push(false);
        }
    }
    EntryMask(mask)
}

/// Green/yellow split used for odd patterns, `true` meaning green: an entry is
/// green iff it is the first entry of some occurrence of `M_{2m}`.
pub fn green_mask(p: &Permutation, m: usize) -> Result<EntryMask> {
    if m < 2 {
        return Err(Error::Domain(format!("green mask needs m >= 2, got {m}")));
    }
    let matcher = PatternMatcher::new(&Permutation::classical_m(2 * m)?);
    let values = p.values();
    Ok(EntryMask(
        (0..values.len())
            .map(|i| matcher.occurs_starting_at_first(&values[i..]))
            .collect(),
    ))
}
