//! The common shape of every code in this crate.

use std::fmt;

use crate::algebra::FieldError;
use crate::words::Word;

/// Errors from building a code instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// A required field could not be built.
    Field(FieldError),
    /// A byte codebook would need more words enumerated than the
    /// construction budget allows.
    ByteBookTooLarge { nbits: u64, weight: u64 },
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::Field(e) => e.fmt(f),
            BuildError::ByteBookTooLarge { nbits, weight } => write!(
                f,
                "byte codebook over {nbits}-bit words of weight {weight} is too large to enumerate"
            ),
        }
    }
}

impl std::error::Error for BuildError {}

impl From<FieldError> for BuildError {
    fn from(e: FieldError) -> BuildError {
        BuildError::Field(e)
    }
}

/// Outcome of a decode: the recovered information word and whether the
/// decoder certifies it. Uncertified results carry the all-zero
/// information word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub info: Word,
    pub cor: bool,
}

impl Decoded {
    /// An uncertified result for `k` information bits.
    pub fn failure(k: u64) -> Decoded {
        Decoded {
            info: Word::zeros(k),
            cor: false,
        }
    }
}

/// A block code over binary words whose channel deletes and inserts only
/// zeros.
///
/// Contract, for strength `t`: a received word within distance `t` of a
/// codeword decodes to that codeword's information with `cor` set; at
/// distance exactly `t + 1`, a certified result is always the right one;
/// and when every error runs in one direction (pure deletions or pure
/// insertions), a certified result is right at any distance.
pub trait ZeroCode {
    /// Information length in bits.
    fn info_bits(&self) -> u64;

    /// Number of zero errors corrected; one more is detected.
    fn strength(&self) -> u64;

    /// Block length in bits.
    fn length(&self) -> u64;

    /// Encodes an information word of exactly `info_bits` bits.
    fn encode(&self, x: &Word) -> Word;

    /// Decodes a received word of any length and weight.
    fn decode(&self, y: &Word) -> Decoded;
}
