//! Limited-magnitude runs code: every zero run except the trailing one has
//! a length divisible by `t + 1`.
//!
//! Within the error window of a strength-`t` channel each received run
//! then determines its sent run uniquely, like the repetition code, but
//! the codebook is the full set of such words, indexed enumeratively, so
//! the block length is far shorter. Information lengths above 32 bits are
//! split into chunks joined by marker runs.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::base::sent_run;
use crate::code::{Decoded, ZeroCode};
use crate::words::{binomial, d0di, extract, Word};

/// Largest information length a single enumerative block covers.
const BLOCK_BITS: u64 = 32;

/// `C(budget + parts, parts)` saturating at `u128::MAX`: the number of
/// ways to distribute at most `budget` units over `parts` runs.
fn comps_sat(budget: u64, parts: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=parts.min(budget) {
        match acc.checked_mul((budget + parts - i + 1) as u128) {
            Some(v) => acc = v / i as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// Number of valid blocks of length `n` for run divisor `d`.
fn count_sat(n: u64, d: u64) -> u128 {
    let mut total: u128 = 0;
    for w in 0..=n {
        total = total.saturating_add(comps_sat((n - w) / d, w));
    }
    total
}

/// Shortest block length holding `k` information bits at strength `t`,
/// for `k` at most 32.
pub fn block_length(t: u64, k: u64) -> u64 {
    assert!(t >= 1 && (1..=BLOCK_BITS).contains(&k));
    let d = t + 1;
    let need = 1u128 << k;
    let mut hi = k;
    while count_sat(hi, d) < need {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if count_sat(mid, d) < need {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Code length for `k` information bits at strength `t`: one block for
/// `k` at most 32, otherwise 32-bit chunks plus a leftover, joined by
/// `t + 1`-bit markers.
pub fn total_length(t: u64, k: u64) -> u64 {
    let chunks = chunk_bits(k);
    let blocks: u64 = chunks.iter().map(|&b| block_length(t, b)).sum();
    blocks + (chunks.len() as u64 - 1) * (t + 1)
}

fn chunk_bits(k: u64) -> Vec<u64> {
    assert!(k >= 1);
    let mut out = vec![BLOCK_BITS; (k / BLOCK_BITS) as usize];
    if k % BLOCK_BITS != 0 {
        out.push(k % BLOCK_BITS);
    }
    out
}

/// Builds the block codeword of index `value`. Blocks are ordered by
/// weight, then lexicographically by their scaled run lengths.
fn block_encode(n: u64, t: u64, value: u64) -> Word {
    let d = t + 1;
    let mut rem = BigUint::from(value);
    let mut w = 0u64;
    loop {
        let sector = binomial((n - w) / d + w, w);
        if rem < sector {
            break;
        }
        rem -= sector;
        w += 1;
        assert!(w <= n, "index {value} exceeds the block's codebook");
    }
    let m = (n - w) / d;
    let mut used = 0u64;
    let mut prof = Vec::with_capacity(w as usize + 1);
    for i in 0..w {
        let parts = w - i - 1;
        let mut c = 0u64;
        loop {
            let cnt = binomial(m - used - c + parts, parts);
            if rem < cnt {
                break;
            }
            rem -= cnt;
            c += 1;
        }
        prof.push(d * c);
        used += c;
    }
    prof.push(n - w - d * used);
    Word::from_profile(prof)
}

/// Decodes one block back to its index, or `None` when the errors exceed
/// the strength or the corrected word falls outside the first `2^bits`
/// blocks.
fn block_decode(bits: u64, n: u64, t: u64, y: &Word) -> Option<u64> {
    let d = t + 1;
    let w = y.weight();
    if w > n {
        return None;
    }
    let delta = y.len() as i64 - n as i64;
    if delta.unsigned_abs() > t {
        return None;
    }
    let tau_neg = (t as i64 - delta) / 2;

    let mut used = 0u64;
    let mut prof = Vec::with_capacity(w as usize + 1);
    for &r in y.profile_head() {
        let sent = sent_run(r, tau_neg, d);
        prof.push(sent);
        used += sent / d;
    }
    if used * d + w > n {
        return None;
    }
    prof.push(n - w - d * used);
    let cand = Word::from_profile(prof);
    if !d0di(&cand, y).within(t) {
        return None;
    }

    let mut value = BigUint::zero();
    for w2 in 0..w {
        value += binomial((n - w2) / d + w2, w2);
    }
    let m = (n - w) / d;
    let mut acc = 0u64;
    for (i, &run) in cand.profile_head().iter().enumerate() {
        let c = run / d;
        let parts = w - i as u64 - 1;
        let budget = m - acc;
        value += binomial(budget + parts + 1, parts + 1) - binomial(budget - c + parts + 1, parts + 1);
        acc += c;
    }
    if value >= BigUint::one() << bits {
        return None;
    }
    value.to_u64()
}

#[derive(Clone, Debug)]
struct Chunk {
    bits: u64,
    n: u64,
}

#[derive(Clone, Debug)]
pub struct LimitedMagnitudeCode {
    k: u64,
    t: u64,
    chunks: Vec<Chunk>,
}

impl LimitedMagnitudeCode {
    pub fn new(k: u64, t: u64) -> LimitedMagnitudeCode {
        assert!(t >= 1, "strength 0 has no run constraint to offer");
        let chunks = chunk_bits(k)
            .into_iter()
            .map(|bits| Chunk {
                bits,
                n: block_length(t, bits),
            })
            .collect();
        LimitedMagnitudeCode { k, t, chunks }
    }
}

impl ZeroCode for LimitedMagnitudeCode {
    fn info_bits(&self) -> u64 {
        self.k
    }

    fn strength(&self) -> u64 {
        self.t
    }

    fn length(&self) -> u64 {
        let blocks: u64 = self.chunks.iter().map(|c| c.n).sum();
        blocks + (self.chunks.len() as u64 - 1) * (self.t + 1)
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.k, "information word must have {} bits", self.k);
        let bits = x.to_bits();
        let marker = Word::from_profile(vec![self.t, 0]);
        let mut out = Word::empty();
        let mut at = 0usize;
        for (i, chunk) in self.chunks.iter().enumerate() {
            let value = bits[at..at + chunk.bits as usize]
                .iter()
                .fold(0u64, |acc, &b| acc << 1 | b as u64);
            at += chunk.bits as usize;
            if i > 0 {
                out = out.concat(&marker);
            }
            out = out.concat(&block_encode(chunk.n, self.t, value));
        }
        out
    }

    fn decode(&self, y: &Word) -> Decoded {
        let delta = y.len() as i64 - self.length() as i64;
        if delta.unsigned_abs() > self.t {
            return Decoded::failure(self.k);
        }
        let tau_neg = (self.t as i64 - delta) / 2;
        let tau_pos = (self.t as i64 - tau_neg) as u64;

        let mut rem = y.clone();
        let mut info = Word::empty();
        for (i, chunk) in self.chunks.iter().enumerate() {
            let z = if i + 1 < self.chunks.len() {
                let (z, rest) = extract(&rem, self.t, chunk.n + tau_pos + 1);
                rem = rest;
                z
            } else {
                rem.clone()
            };
            match block_decode(chunk.bits, chunk.n, self.t, &z) {
                Some(value) => info = info.concat(&Word::from_value(value, chunk.bits)),
                None => return Decoded::failure(self.k),
            }
        }
        if !d0di(&self.encode(&info), y).within(self.t) {
            return Decoded::failure(self.k);
        }
        Decoded { info, cor: true }
    }
}
