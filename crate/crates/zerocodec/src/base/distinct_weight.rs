//! Distinct-weight code: every codeword has a different weight.
//!
//! The information word is read as a number `d` and padded to weight
//! exactly `d`. Zero errors never change the weight, so the weight of a
//! received word always identifies the sent codeword, at any error
//! magnitude.

use crate::code::{Decoded, ZeroCode};
use crate::words::Word;

#[derive(Clone, Debug)]
pub struct DistinctWeightCode {
    k: u64,
}

impl DistinctWeightCode {
    pub fn new(k: u64) -> DistinctWeightCode {
        assert!((1..=63).contains(&k), "distinct-weight length 2^k - 1 must fit in u64");
        DistinctWeightCode { k }
    }
}

impl ZeroCode for DistinctWeightCode {
    fn info_bits(&self) -> u64 {
        self.k
    }

    /// Strength is nominal: any number of zero errors is corrected.
    fn strength(&self) -> u64 {
        u64::MAX
    }

    fn length(&self) -> u64 {
        (1 << self.k) - 1
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.k, "information word must have {} bits", self.k);
        let value = x.to_value();
        let ones = value - x.weight();
        let zeros = self.length() - self.k - ones;
        x.concat(&Word::zeros(zeros)).concat(&Word::ones(ones))
    }

    fn decode(&self, y: &Word) -> Decoded {
        let value = y.weight();
        if value >= 1 << self.k {
            return Decoded::failure(self.k);
        }
        Decoded {
            info: Word::from_value(value, self.k),
            cor: true,
        }
    }
}
