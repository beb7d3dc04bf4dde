//! Base code families: the non-recursive codes that terminate a code plan.

pub mod distinct_weight;
pub mod limited_magnitude;
pub mod repetition;
pub mod rs_balanced;

pub use distinct_weight::DistinctWeightCode;
pub use limited_magnitude::LimitedMagnitudeCode;
pub use repetition::RepetitionCode;
pub use rs_balanced::RsBalancedCode;

use crate::code::{Decoded, ZeroCode};
use crate::words::Word;

/// The unique multiple of `d` a received run of `r` zeros can have been
/// sent as, given that up to `tau_neg` zeros were deleted and up to
/// `d - 1 - tau_neg` inserted. The window `[r - tau_pos, r + tau_neg]`
/// spans exactly `d` consecutive integers, so the multiple is unique.
pub(crate) fn sent_run(r: u64, tau_neg: i64, d: u64) -> u64 {
    let shifted = r as i64 + tau_neg;
    (shifted - shifted.rem_euclid(d as i64)) as u64
}

/// The trivial strength-0 code: codewords are the information words
/// themselves, and any change of length is detected.
#[derive(Clone, Debug)]
pub struct IdentityCode {
    k: u64,
}

impl IdentityCode {
    pub fn new(k: u64) -> IdentityCode {
        IdentityCode { k }
    }
}

impl ZeroCode for IdentityCode {
    fn info_bits(&self) -> u64 {
        self.k
    }

    fn strength(&self) -> u64 {
        0
    }

    fn length(&self) -> u64 {
        self.k
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.k, "information word must have {} bits", self.k);
        x.clone()
    }

    fn decode(&self, y: &Word) -> Decoded {
        if y.len() == self.k {
            Decoded {
                info: y.clone(),
                cor: true,
            }
        } else {
            Decoded::failure(self.k)
        }
    }
}
