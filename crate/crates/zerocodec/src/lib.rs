//! Systematic binary block codes that correct deletions and insertions of
//! the symbol zero.
//!
//! Zero errors never touch ones, so a received word keeps the weight of the
//! sent word and differs from it only in the lengths of its zero runs. The
//! crate exploits that throughout: words live as zero-run profiles
//! ([`Word`]), distances are L1 computations on small integer sequences, and
//! decoding reduces to solving a polynomial key equation over a small field.

pub mod algebra;
pub mod base;
pub mod channel;
pub mod code;
pub mod recursive;
pub mod sigma_code;
pub mod words;

pub use algebra::Field;
pub use base::rs_balanced::RsMode;
pub use base::{
    DistinctWeightCode, IdentityCode, LimitedMagnitudeCode, RepetitionCode, RsBalancedCode,
};
pub use channel::{
    apply_pattern, enumerate_patterns, verify_code, ErrorPattern, PatternError, VerifyConfig,
    VerifyReport,
};
pub use code::{BuildError, Decoded, ZeroCode};
pub use recursive::{redundancy_table, table_cell, RecursiveCode, TableCell, TABLE_KS, TABLE_TS};
pub use sigma_code::{construct_cw_code, decode_asymmetric, SigmaScheme};
pub use words::{d0di, d0di_bfs, dist_as, dist_h, dist_linf, dist_sy, Dist, Word};
