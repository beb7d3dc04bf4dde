//! Binary words viewed through their zero-run profiles, plus the L1-metric
//! machinery on natural-number sequences that the codecs are built on.
//!
//! A binary word of Hamming weight `w` is stored as its profile
//! `(v_1, ..., v_{w+1})`: `v_i` counts the zeros strictly between the
//! `(i-1)`-th and the `i`-th one, with `v_1` the leading and `v_{w+1}` the
//! trailing run. Deleting or inserting a single zero changes exactly one
//! profile entry by one, and ones are never touched, so two words at finite
//! zero-edit distance have equal weight and their distance is the symmetric
//! L1 distance between their profiles. That reduction is what makes every
//! decoder in this crate run on small integer sequences instead of raw bits.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Errors from parsing a bit string into a [`Word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWordError {
    /// The input contained a character other than '0' or '1'.
    BadSymbol(char),
}

impl fmt::Display for ParseWordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWordError::BadSymbol(c) => write!(f, "invalid bit symbol {c:?}"),
        }
    }
}

impl std::error::Error for ParseWordError {}

/// A binary word, stored as its zero-run profile.
///
/// The profile always has `weight + 1` entries, so the empty word is the
/// single bucket `[0]`. Length and weight are O(1) reads and never require
/// materializing bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    v: Vec<u64>,
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word { v: vec![0] }
    }

    /// The all-zero word of the given length.
    pub fn zeros(len: u64) -> Self {
        Word { v: vec![len] }
    }

    /// The all-one word of the given length.
    pub fn ones(len: u64) -> Self {
        Word {
            v: vec![0; len as usize + 1],
        }
    }

    /// Builds a word from its zero-run profile. Panics on an empty profile,
    /// which does not describe any word.
    pub fn from_profile(v: Vec<u64>) -> Self {
        assert!(!v.is_empty(), "a profile has at least one bucket");
        Word { v }
    }

    /// Builds a word from bits, most significant (leftmost) first.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = vec![0u64];
        for &b in bits {
            if b == 0 {
                *v.last_mut().unwrap() += 1;
            } else {
                v.push(0);
            }
        }
        Word { v }
    }

    /// Builds the `len`-bit word whose bits spell `value`, most significant
    /// first. Panics if the value does not fit.
    pub fn from_value(value: u64, len: u64) -> Self {
        assert!(
            len >= 64 || value < 1 << len,
            "value {value} does not fit in {len} bits"
        );
        let mut v = vec![0u64];
        for i in (0..len).rev() {
            if value >> i & 1 == 0 {
                *v.last_mut().unwrap() += 1;
            } else {
                v.push(0);
            }
        }
        Word { v }
    }

    /// Reads the bits, most significant first, as a number. Panics on words
    /// too long for the result to fit.
    pub fn to_value(&self) -> u64 {
        assert!(self.len() <= 64, "word too long to read as a u64");
        self.to_bits().iter().fold(0, |acc, &b| acc << 1 | b as u64)
    }

    /// Parses a string of '0' and '1' characters.
    pub fn from_bit_str(s: &str) -> Result<Self, ParseWordError> {
        let mut v = vec![0u64];
        for c in s.chars() {
            match c {
                '0' => *v.last_mut().unwrap() += 1,
                '1' => v.push(0),
                other => return Err(ParseWordError::BadSymbol(other)),
            }
        }
        Ok(Word { v })
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> u64 {
        (self.v.len() - 1) as u64
    }

    /// Total length in bits.
    #[inline]
    pub fn len(&self) -> u64 {
        self.v.iter().sum::<u64>() + self.weight()
    }

    /// True for the empty word.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.v.len() == 1 && self.v[0] == 0
    }

    /// The full profile `(v_1, ..., v_{w+1})`.
    #[inline]
    pub fn profile(&self) -> &[u64] {
        &self.v
    }

    /// The truncated profile `(v_1, ..., v_w)`, dropping the trailing run.
    /// For a fixed length the trailing run is redundant, so most codecs
    /// operate on this view.
    #[inline]
    pub fn profile_head(&self) -> &[u64] {
        &self.v[..self.v.len() - 1]
    }

    /// Materializes the bits, most significant first.
    pub fn to_bits(&self) -> Vec<u8> {
        let mut bits = Vec::with_capacity(self.len() as usize);
        for (i, &run) in self.v.iter().enumerate() {
            bits.extend(std::iter::repeat(0).take(run as usize));
            if i + 1 < self.v.len() {
                bits.push(1);
            }
        }
        bits
    }

    /// Renders the bits as a '0'/'1' string.
    pub fn to_bit_string(&self) -> String {
        self.to_bits().iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
    }

    /// Concatenation: the trailing run of `self` merges with the leading run
    /// of `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.v.clone();
        let tail = v.pop().unwrap();
        v.push(tail + other.v[0]);
        v.extend_from_slice(&other.v[1..]);
        Word { v }
    }
}

impl fmt::Debug for Word {
    /// Shows the bits for short words and the shape for long ones, which is
    /// what you want when a test fails.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 96 {
            write!(f, "Word({})", self.to_bit_string())
        } else {
            write!(f, "Word(len={}, w={})", self.len(), self.weight())
        }
    }
}

/// A zero-edit distance: finite, or infinite when no sequence of zero
/// deletions and insertions connects the two words (their weights differ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dist {
    Finite(u64),
    Infinite,
}

impl Dist {
    /// True when the distance is finite and at most `t`.
    #[inline]
    pub fn within(self, t: u64) -> bool {
        matches!(self, Dist::Finite(d) if d <= t)
    }

    /// The finite value, if any.
    #[inline]
    pub fn finite(self) -> Option<u64> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinite) => std::cmp::Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => std::cmp::Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl std::ops::Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        match (self, rhs) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinite,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

/// Digitwise truncated subtraction `x - y`, padded with zeros to the longer
/// length.
pub fn monus(x: &[u64], y: &[u64]) -> Vec<u64> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| {
            let a = x.get(i).copied().unwrap_or(0);
            let b = y.get(i).copied().unwrap_or(0);
            a.saturating_sub(b)
        })
        .collect()
}

/// Digitwise minimum (multiset intersection).
pub fn seq_min(x: &[u64], y: &[u64]) -> Vec<u64> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| x.get(i).copied().unwrap_or(0).min(y.get(i).copied().unwrap_or(0)))
        .collect()
}

/// Digitwise maximum (multiset union).
pub fn seq_max(x: &[u64], y: &[u64]) -> Vec<u64> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| x.get(i).copied().unwrap_or(0).max(y.get(i).copied().unwrap_or(0)))
        .collect()
}

/// Digitwise sum (multiset union with multiplicities added).
pub fn seq_add(x: &[u64], y: &[u64]) -> Vec<u64> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| x.get(i).copied().unwrap_or(0) + y.get(i).copied().unwrap_or(0))
        .collect()
}

/// Sum of all digits, the size of the multiset.
#[inline]
pub fn seq_size(x: &[u64]) -> u64 {
    x.iter().sum()
}

#[inline]
fn fold_diffs(x: &[u64], y: &[u64]) -> (u64, u64, u64, u64, u64) {
    let n = x.len().max(y.len());
    let (mut up, mut down, mut up_sup, mut down_sup, mut linf) = (0, 0, 0, 0, 0);
    for i in 0..n {
        let a = x.get(i).copied().unwrap_or(0);
        let b = y.get(i).copied().unwrap_or(0);
        if b > a {
            up += b - a;
            up_sup += 1;
            linf = linf.max(b - a);
        } else if a > b {
            down += a - b;
            down_sup += 1;
            linf = linf.max(a - b);
        }
    }
    (up, down, up_sup, down_sup, linf)
}

/// Symmetric L1 distance: total magnitude of all digit changes.
#[inline]
pub fn dist_sy(x: &[u64], y: &[u64]) -> u64 {
    let (up, down, ..) = fold_diffs(x, y);
    up + down
}

/// Asymmetric L1 distance: the larger of the upward and downward change
/// magnitudes.
#[inline]
pub fn dist_as(x: &[u64], y: &[u64]) -> u64 {
    let (up, down, ..) = fold_diffs(x, y);
    up.max(down)
}

/// Hamming distance between the change supports: how many digits moved up
/// plus how many moved down.
#[inline]
pub fn dist_h(x: &[u64], y: &[u64]) -> u64 {
    let (_, _, up_sup, down_sup, _) = fold_diffs(x, y);
    up_sup + down_sup
}

/// L-infinity distance: the largest single-digit change.
#[inline]
pub fn dist_linf(x: &[u64], y: &[u64]) -> u64 {
    fold_diffs(x, y).4
}

/// Zero-edit distance between two words: the minimal number of zero
/// deletions plus zero insertions transforming one into the other.
///
/// Infinite exactly when the weights differ; otherwise it equals the
/// symmetric L1 distance between the profiles.
#[inline]
pub fn d0di(x: &Word, y: &Word) -> Dist {
    if x.weight() != y.weight() {
        return Dist::Infinite;
    }
    Dist::Finite(dist_sy(x.profile(), y.profile()))
}

/// Breadth-first-search reference for [`d0di`], operating directly on bit
/// vectors so it shares nothing with the profile formula.
///
/// Intermediate words are capped at `max(len(x), len(y))`: any shortest edit
/// sequence can interleave deletions and insertions so its intermediate
/// lengths never exceed the longer endpoint. Exact for small words; returns
/// [`Dist::Infinite`] once the reachable state space is exhausted.
pub fn d0di_bfs(x: &Word, y: &Word) -> Dist {
    let start = x.to_bits();
    let goal = y.to_bits();
    if start == goal {
        return Dist::Finite(0);
    }
    let cap = start.len().max(goal.len());
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut frontier: VecDeque<(Vec<u8>, u64)> = VecDeque::new();
    seen.insert(start.clone());
    frontier.push_back((start, 0));
    while let Some((cur, d)) = frontier.pop_front() {
        let push = |next: Vec<u8>, seen: &mut HashSet<Vec<u8>>,
                        frontier: &mut VecDeque<(Vec<u8>, u64)>|
         -> bool {
            if next == goal {
                return true;
            }
            if seen.insert(next.clone()) {
                frontier.push_back((next, d + 1));
            }
            false
        };
        for i in 0..cur.len() {
            if cur[i] == 0 {
                let mut next = cur.clone();
                next.remove(i);
                if push(next, &mut seen, &mut frontier) {
                    return Dist::Finite(d + 1);
                }
            }
        }
        if cur.len() < cap {
            for i in 0..=cur.len() {
                let mut next = cur.clone();
                next.insert(i, 0);
                if push(next, &mut seen, &mut frontier) {
                    return Dist::Finite(d + 1);
                }
            }
        }
    }
    Dist::Infinite
}

/// Binomial coefficient, exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of sequences of `n` digits summing to `w`, each digit below `m`
/// (`None` leaves the digits unbounded). The unbounded count is the
/// composition number `C(n + w - 1, w)`; `m = Some(2)` recovers the binomial.
pub fn mnomial(n: u64, w: u64, m: Option<u64>) -> BigUint {
    match m {
        None => {
            if n == 0 {
                return if w == 0 { BigUint::one() } else { BigUint::zero() };
            }
            binomial(n + w - 1, w)
        }
        Some(0) => {
            // No digit value is allowed, so only the empty sequence counts.
            if n == 0 && w == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        }
        Some(m) => {
            // One row of the DP over positions; w + 1 partial sums.
            let mut row = vec![BigUint::zero(); w as usize + 1];
            row[0] = BigUint::one();
            for _ in 0..n {
                let mut next = vec![BigUint::zero(); w as usize + 1];
                for s in 0..=w as usize {
                    if row[s].is_zero() {
                        continue;
                    }
                    for v in 0..m as usize {
                        if s + v > w as usize {
                            break;
                        }
                        next[s + v] += &row[s];
                    }
                }
                row = next;
            }
            row[w as usize].clone()
        }
    }
}

/// Splits a received word at a marker one: the first one at 1-based
/// position at least `i`. The prefix keeps everything before that one,
/// with up to `strip` trailing zeros removed as the marker's own zeros;
/// the suffix is everything after it. Without such a one the whole word
/// becomes the prefix and the suffix is empty.
pub fn extract(y: &Word, strip: u64, i: u64) -> (Word, Word) {
    let prof = y.profile();
    let mut pos = 0u64;
    for (l, &v) in prof[..prof.len() - 1].iter().enumerate() {
        pos += v + 1;
        if pos >= i {
            let mut z = prof[..=l].to_vec();
            let tail = z.last_mut().unwrap();
            *tail = tail.saturating_sub(strip);
            return (
                Word::from_profile(z),
                Word::from_profile(prof[l + 1..].to_vec()),
            );
        }
    }
    let mut z = prof.to_vec();
    let tail = z.last_mut().unwrap();
    *tail = tail.saturating_sub(strip);
    (Word::from_profile(z), Word::empty())
}

/// The concatenation defect: for words with `w(a) = w(c)` and `w(b) = w(d)`,
/// `d0di(a.b, c.d) = d0di(a, c) + d0di(b, d) - Q`, where `Q` measures how
/// much the merged boundary run hides. `Q = 0` whenever a one separates the
/// parts, which is why marker-delimited sections accumulate distance
/// additively.
pub fn concat_defect(a: &Word, b: &Word, c: &Word, d: &Word) -> Option<u64> {
    if a.weight() != c.weight() || b.weight() != d.weight() {
        return None;
    }
    let parts = d0di(a, c).finite()? + d0di(b, d).finite()?;
    let whole = d0di(&a.concat(b), &c.concat(d)).finite()?;
    Some(parts - whole)
}
