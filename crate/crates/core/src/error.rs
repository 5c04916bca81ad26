use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The input contains a pattern it was required to avoid.
    #[error("contains {pattern} at {witness}")]
    PreconditionViolated { pattern: String, witness: String },

    #[error("word pair is not in the image of the encoder: {0}")]
    NotInImage(String),

    #[error("letter {letter} is outside the alphabet {alphabet}")]
    LetterOutOfAlphabet { letter: u8, alphabet: String },

    #[error("merged alphabets overlap on letter {0}")]
    AlphabetOverlap(u8),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("no count supplied for n = {0}")]
    MissingCount(usize),

    #[error("estimated work of {estimate} nodes exceeds the budget of {budget}")]
    ScaleRefused { estimate: u128, budget: u128 },

    #[error("cache file {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
