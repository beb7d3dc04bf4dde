//! Repetition code: every information bit is written `t + 1` times.
//!
//! Zero runs of a codeword all have lengths divisible by `t + 1`, and the
//! runs between copies of the same one bit are empty, so a received run
//! determines its sent run as the unique multiple of `t + 1` within the
//! error window.

use crate::base::sent_run;
use crate::code::{Decoded, ZeroCode};
use crate::words::{d0di, Word};

#[derive(Clone, Debug)]
pub struct RepetitionCode {
    k: u64,
    t: u64,
}

impl RepetitionCode {
    pub fn new(k: u64, t: u64) -> RepetitionCode {
        assert!(k >= 1, "repetition code needs at least one information bit");
        RepetitionCode { k, t }
    }
}

impl ZeroCode for RepetitionCode {
    fn info_bits(&self) -> u64 {
        self.k
    }

    fn strength(&self) -> u64 {
        self.t
    }

    fn length(&self) -> u64 {
        (self.t + 1) * self.k
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.k, "information word must have {} bits", self.k);
        let d = self.t + 1;
        let head = x.profile_head();
        let tail = x.profile()[head.len()];
        let mut out = Vec::with_capacity(d as usize * head.len() + 1);
        for &v in head {
            out.push(d * v);
            out.extend(std::iter::repeat(0).take(self.t as usize));
        }
        out.push(d * tail);
        Word::from_profile(out)
    }

    fn decode(&self, y: &Word) -> Decoded {
        let d = self.t + 1;
        let n = self.length();
        if y.weight() % d != 0 {
            return Decoded::failure(self.k);
        }
        let w = y.weight() / d;
        if w > self.k {
            return Decoded::failure(self.k);
        }
        let delta = y.len() as i64 - n as i64;
        if delta.unsigned_abs() > self.t {
            return Decoded::failure(self.k);
        }
        let tau_neg = (self.t as i64 - delta) / 2;

        let mut info = Vec::with_capacity(w as usize + 1);
        let mut zeros = 0u64;
        for (j, &r) in y.profile().iter().enumerate() {
            let sent = sent_run(r, tau_neg, d);
            if j as u64 % d == 0 {
                info.push(sent / d);
                zeros += sent / d;
            } else if sent != 0 {
                return Decoded::failure(self.k);
            }
        }
        if zeros + w != self.k {
            return Decoded::failure(self.k);
        }

        let x = Word::from_profile(info);
        if !d0di(&self.encode(&x), y).within(self.t) {
            return Decoded::failure(self.k);
        }
        Decoded { info: x, cor: true }
    }
}
