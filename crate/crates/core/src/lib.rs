//! Injective encodings of permutations that avoid the patterns
//! `M_3 = 213`, `M_4 = 1324`, `M_5 = 21435`, `M_6 = 132546`, ... into pairs of
//! words over small alphabets with forbidden factors, together with the
//! greedy decoders, exact word counting and exhaustive verification sweeps.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, pattern containment, sums, `M_k`, symmetries.
//! * [`coloring`]: the canonical red/blue coloring and the green/yellow split.
//! * [`codec`]: words, word families, merges, `encode_m` / `decode_m`.
//! * [`wordcount`]: exact counts of the word families and bound tables.
//! * [`enumeration`]: avoider generation, counting, encoder sweeps and the
//!   pattern-class scanner.
//! * [`cache`]: the JSON-lines count cache used by [`enumeration`].

pub mod cache;
pub mod codec;
pub mod coloring;
pub mod enumeration;
mod error;
pub mod perm;
pub mod wordcount;

pub use codec::{decode_m, encode_m, CodePair, Parity, Word, WordFamily};
pub use coloring::{canonical_coloring, green_mask, ColoringParams};
pub use error::{Error, Result};
pub use perm::{avoids, occurrences, EntryMask, Extremal, Occurrence, Permutation};
