//! The 0-error channel: bucket-level patterns of zero deletions and zero
//! insertions, exhaustive and randomized injection, and a verification
//! harness that exercises a code's decoding contract.
//!
//! A pattern lives on the zero-run profile of the sent word: one signed
//! delta per bucket. Deletions remove zeros from a bucket, insertions add
//! them; ones are never touched, so the received word always keeps the
//! Hamming weight of the sent one. Two different position-level edit
//! histories that land in the same buckets are indistinguishable on the
//! wire, which is why patterns are enumerated per distinct received word.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::ZeroCode;
use crate::words::Word;

/// Why an error pattern cannot be applied to a given word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    /// The pattern has a different bucket count than the word's profile.
    BucketMismatch { word: u64, pattern: u64 },
    /// A delta drives some zero run below zero.
    NegativeBucket { bucket: u64 },
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::BucketMismatch { word, pattern } => write!(
                f,
                "pattern has {pattern} buckets but the word has {word}"
            ),
            PatternError::NegativeBucket { bucket } => {
                write!(f, "pattern deletes more zeros than bucket {bucket} holds")
            }
        }
    }
}

impl std::error::Error for PatternError {}

/// A bucket-level 0-error pattern: one signed zero-count delta per bucket
/// of the sent word's profile. Negative entries delete zeros, positive
/// entries insert them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorPattern {
    deltas: Vec<i64>,
}

impl ErrorPattern {
    /// Wraps raw per-bucket deltas.
    pub fn new(deltas: Vec<i64>) -> ErrorPattern {
        ErrorPattern { deltas }
    }

    /// The pattern that changes nothing.
    pub fn identity(buckets: u64) -> ErrorPattern {
        ErrorPattern {
            deltas: vec![0; buckets as usize],
        }
    }

    /// Per-bucket deltas.
    pub fn deltas(&self) -> &[i64] {
        &self.deltas
    }

    /// Total zeros deleted.
    #[inline]
    pub fn deletions(&self) -> u64 {
        self.deltas
            .iter()
            .filter(|&&d| d < 0)
            .map(|&d| d.unsigned_abs())
            .sum()
    }

    /// Total zeros inserted.
    #[inline]
    pub fn insertions(&self) -> u64 {
        self.deltas
            .iter()
            .filter(|&&d| d > 0)
            .map(|&d| d as u64)
            .sum()
    }

    /// Deletions plus insertions: the 0-error distance this pattern puts
    /// between sent and received.
    #[inline]
    pub fn magnitude(&self) -> u64 {
        self.deltas.iter().map(|&d| d.unsigned_abs()).sum()
    }
}

/// Applies `p` to `x` by adding each delta to the matching zero-run
/// bucket. The result keeps the Hamming weight of `x` and sits at
/// 0-error distance `p.magnitude()` from it.
pub fn apply_pattern(x: &Word, p: &ErrorPattern) -> Result<Word, PatternError> {
    let prof = x.profile();
    if prof.len() != p.deltas.len() {
        return Err(PatternError::BucketMismatch {
            word: prof.len() as u64,
            pattern: p.deltas.len() as u64,
        });
    }
    let mut moved = Vec::with_capacity(prof.len());
    for (bucket, (&v, &d)) in prof.iter().zip(&p.deltas).enumerate() {
        match v.checked_add_signed(d) {
            Some(nv) => moved.push(nv),
            None => {
                return Err(PatternError::NegativeBucket {
                    bucket: bucket as u64,
                })
            }
        }
    }
    Ok(Word::from_profile(moved))
}

/// Visits every pattern that realizes exactly `e` deletions and `f`
/// insertions of zeros on `x`, one per distinct received word. Edits that
/// cancel inside one bucket leave no trace on the wire, so patterns of
/// net magnitude `e + f - 2c` appear for every feasible `c` cancelled
/// pairs. The visitor returns whether to keep going; the function returns
/// false when a visitor stopped the walk early.
pub fn for_each_pattern(
    x: &Word,
    e: u64,
    f: u64,
    mut visit: impl FnMut(&ErrorPattern) -> bool,
) -> bool {
    let prof = x.profile();
    for net_del in e.saturating_sub(f)..=e {
        let net_ins = net_del + f - e;
        let mut cur = Vec::with_capacity(prof.len());
        if !split_exact(prof, net_del, net_ins, &mut cur, &mut visit) {
            return false;
        }
    }
    true
}

fn split_exact(
    rest: &[u64],
    del: u64,
    ins: u64,
    cur: &mut Vec<i64>,
    visit: &mut impl FnMut(&ErrorPattern) -> bool,
) -> bool {
    let Some((&cap, tail)) = rest.split_first() else {
        if del == 0 && ins == 0 {
            return visit(&ErrorPattern {
                deltas: cur.clone(),
            });
        }
        return true;
    };
    cur.push(0);
    let mut alive = split_exact(tail, del, ins, cur, visit);
    cur.pop();
    for d in 1..=del.min(cap) {
        if !alive {
            return false;
        }
        cur.push(-(d as i64));
        alive = split_exact(tail, del - d, ins, cur, visit);
        cur.pop();
    }
    for i in 1..=ins {
        if !alive {
            return false;
        }
        cur.push(i as i64);
        alive = split_exact(tail, del, ins - i, cur, visit);
        cur.pop();
    }
    alive
}

/// Visits every pattern whose magnitude is at most `budget`, one per
/// distinct received word, the identity pattern included. The visitor
/// returns whether to keep going; the function returns false when a
/// visitor stopped the walk early.
pub fn for_each_pattern_within(
    x: &Word,
    budget: u64,
    mut visit: impl FnMut(&ErrorPattern) -> bool,
) -> bool {
    let prof = x.profile();
    let mut cur = Vec::with_capacity(prof.len());
    split_within(prof, budget, &mut cur, &mut visit)
}

fn split_within(
    rest: &[u64],
    left: u64,
    cur: &mut Vec<i64>,
    visit: &mut impl FnMut(&ErrorPattern) -> bool,
) -> bool {
    let Some((&cap, tail)) = rest.split_first() else {
        return visit(&ErrorPattern {
            deltas: cur.clone(),
        });
    };
    let lo = -(left.min(cap) as i64);
    for d in lo..=left as i64 {
        cur.push(d);
        let alive = split_within(tail, left - d.unsigned_abs(), cur, visit);
        cur.pop();
        if !alive {
            return false;
        }
    }
    true
}

/// All patterns of exactly `e` deletions and `f` insertions on `x`, one
/// per distinct received word.
pub fn enumerate_patterns(x: &Word, e: u64, f: u64) -> Vec<ErrorPattern> {
    let mut out = Vec::new();
    for_each_pattern(x, e, f, |p| {
        out.push(p.clone());
        true
    });
    out
}

/// Number of distinct received words reachable from `x` with exactly `e`
/// deletions and `f` insertions.
pub fn pattern_count(x: &Word, e: u64, f: u64) -> u64 {
    let mut count = 0u64;
    for_each_pattern(x, e, f, |_| {
        count += 1;
        true
    });
    count
}

/// Tuning for [`verify_code`]: how far past the guarantee the sweeps
/// reach and how much work the run may spend.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    /// Largest unidirectional magnitude swept exhaustively past `t + 1`.
    pub horizon: u64,
    /// Decode budget: the run stops, marking itself truncated, once this
    /// many patterns have been checked.
    pub max_patterns: u64,
    /// Randomized probes appended after the exhaustive sweeps.
    pub random_trials: u64,
    /// Seed for the randomized probes.
    pub seed: u64,
    /// When false, the exhaustive sweeps are skipped and only the
    /// randomized probes run; for codes too large to enumerate.
    pub exhaustive: bool,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig {
            horizon: 8,
            max_patterns: 100_000_000,
            random_trials: 0,
            seed: 0xC0DEC,
            exhaustive: true,
        }
    }
}

/// One broken decoding witnessed by the harness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which clause of the decoding contract broke: `C1` (deletion-only
    /// pattern miscorrected), `C2` (insertion-only pattern miscorrected),
    /// `C3` (pattern within `t + 1` miscorrected), or `C4` (pattern
    /// within `t` not corrected).
    pub condition: String,
    /// Sent codeword bits.
    pub sent: String,
    /// Received word bits.
    pub received: String,
    /// Information bits that should come back.
    pub expected: String,
    /// What the decoder produced: bits when it corrected, `detected`
    /// when it only flagged the error.
    pub got: String,
}

/// Code parameters echoed into a verification report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyParams {
    /// Information bits.
    pub k: u64,
    /// Correction strength.
    pub t: u64,
    /// Block length.
    pub n: u64,
}

/// The outcome of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// Label for the code under test.
    pub code_id: String,
    /// Parameters of the code under test.
    pub params: VerifyParams,
    /// Decodes performed across all sweeps.
    pub patterns_checked: u64,
    /// True when the run stopped early on the pattern budget.
    pub truncated: bool,
    /// Seed used by the randomized probes.
    pub seed: u64,
    /// Every contract breach found, with witnesses.
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    /// True when no violation was found.
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Run<'a, C: ?Sized> {
    code: &'a C,
    t: u64,
    max_patterns: u64,
    checked: u64,
    truncated: bool,
    violations: Vec<Violation>,
}

impl<C: ZeroCode + ?Sized> Run<'_, C> {
    fn budget_left(&mut self) -> bool {
        if self.checked >= self.max_patterns {
            self.truncated = true;
            return false;
        }
        true
    }

    /// Decodes one received word and records any contract breach. The
    /// contract says nothing about mixed patterns larger than `t + 1`,
    /// so those decode without judgment.
    fn check(&mut self, x: &Word, info: &Word, p: &ErrorPattern) -> bool {
        if !self.budget_left() {
            return false;
        }
        self.checked += 1;
        let y = apply_pattern(x, p).expect("enumerated patterns stay within capacity");
        let dec = self.code.decode(&y);
        let d = p.magnitude();
        if d <= self.t && !dec.cor {
            self.record("C4", x, &y, info, None);
            return true;
        }
        if dec.cor && dec.info != *info {
            let condition = if d <= self.t.saturating_add(1) {
                "C3"
            } else if p.insertions() == 0 {
                "C1"
            } else if p.deletions() == 0 {
                "C2"
            } else {
                return true;
            };
            self.record(condition, x, &y, info, Some(&dec.info));
        }
        true
    }

    fn record(&mut self, condition: &str, x: &Word, y: &Word, info: &Word, got: Option<&Word>) {
        self.violations.push(Violation {
            condition: condition.to_string(),
            sent: x.to_bit_string(),
            received: y.to_bit_string(),
            expected: info.to_bit_string(),
            got: got.map_or_else(|| "detected".to_string(), Word::to_bit_string),
        });
    }
}

/// Exercises `code` against the 0-error channel and reports every breach
/// of its decoding contract, with witnesses.
///
/// Three sweeps run in order, all counted against the pattern budget:
/// every pattern within magnitude `t + 1` of every codeword; every
/// deletion-only and insertion-only pattern of magnitude `t + 2` up to
/// the horizon; then randomized probes alternating mixed patterns within
/// `t` and unidirectional ones reaching past the horizon.
pub fn verify_code<C: ZeroCode + ?Sized>(
    code: &C,
    code_id: &str,
    cfg: &VerifyConfig,
) -> VerifyReport {
    let k = code.info_bits();
    let t = code.strength();
    assert!(k <= 64, "verification enumerates information words as u64");
    // A code may claim unbounded strength; all enumeration bounds then
    // fall back to the horizon while the contract checks keep the real t.
    let sweep_t = t.min(cfg.horizon);
    let mut run = Run {
        code,
        t,
        max_patterns: cfg.max_patterns,
        checked: 0,
        truncated: false,
        violations: Vec::new(),
    };

    if cfg.exhaustive {
        'words: for v in 0..(1u128 << k) {
            let info = Word::from_value(v as u64, k);
            let x = code.encode(&info);
            if !for_each_pattern_within(&x, sweep_t + 1, |p| run.check(&x, &info, p)) {
                break 'words;
            }
            for m in sweep_t + 2..=cfg.horizon {
                if !for_each_pattern(&x, m, 0, |p| run.check(&x, &info, p))
                    || !for_each_pattern(&x, 0, m, |p| run.check(&x, &info, p))
                {
                    break 'words;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.random_trials {
        if !run.budget_left() {
            break;
        }
        let v = if k == 64 {
            rng.gen::<u64>()
        } else {
            rng.gen_range(0..1u64 << k)
        };
        let info = Word::from_value(v, k);
        let x = code.encode(&info);
        let p = if trial % 2 == 0 {
            random_mixed_pattern(&mut rng, x.profile(), sweep_t)
        } else {
            let deleting = trial % 4 == 1;
            let reach = sweep_t + cfg.horizon + 8;
            random_unidirectional_pattern(&mut rng, x.profile(), reach, deleting)
        };
        run.check(&x, &info, &p);
    }

    VerifyReport {
        code_id: code_id.to_string(),
        params: VerifyParams {
            k,
            t,
            n: code.length(),
        },
        patterns_checked: run.checked,
        truncated: run.truncated,
        seed: cfg.seed,
        violations: run.violations,
    }
}

/// A random net pattern of magnitude at most `t`: each unit lands in a
/// uniform bucket with a uniform sign, falling back to an insertion when
/// the bucket has no zero left to delete.
fn random_mixed_pattern(rng: &mut ChaCha8Rng, prof: &[u64], t: u64) -> ErrorPattern {
    let mut deltas = vec![0i64; prof.len()];
    for _ in 0..rng.gen_range(0..=t) {
        let b = rng.gen_range(0..prof.len());
        let can_delete = (prof[b] as i64 + deltas[b]) > 0;
        if can_delete && rng.gen_bool(0.5) {
            deltas[b] -= 1;
        } else {
            deltas[b] += 1;
        }
    }
    ErrorPattern { deltas }
}

/// A random pure-deletion or pure-insertion pattern of magnitude up to
/// `reach`, capped for deletions by the zeros actually available.
fn random_unidirectional_pattern(
    rng: &mut ChaCha8Rng,
    prof: &[u64],
    reach: u64,
    deleting: bool,
) -> ErrorPattern {
    let mut deltas = vec![0i64; prof.len()];
    let mut m = rng.gen_range(1..=reach);
    if deleting {
        m = m.min(prof.iter().sum());
        let mut placed = 0;
        while placed < m {
            let b = rng.gen_range(0..prof.len());
            if (prof[b] as i64 + deltas[b]) > 0 {
                deltas[b] -= 1;
                placed += 1;
            }
        }
    } else {
        for _ in 0..m {
            deltas[rng.gen_range(0..prof.len())] += 1;
        }
    }
    ErrorPattern { deltas }
}
