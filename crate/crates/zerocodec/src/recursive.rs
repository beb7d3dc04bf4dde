//! The recursive marker construction and its length planner.
//!
//! A message is protected by appending a marker run and a shorter code
//! that carries just enough to pin the message down inside its sector:
//! the packed sigma datum, protected at one strength less. The recursion
//! bottoms out in whichever base family gives the shortest block, so a
//! single planner search yields both the redundancy table and a buildable
//! code plan.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{next_prime_power, FIELD_LIMIT};
use crate::base::limited_magnitude::total_length;
use crate::base::rs_balanced::{byte_book_fits, layout_pruned, nbal, RsMode};
use crate::base::{
    DistinctWeightCode, IdentityCode, LimitedMagnitudeCode, RepetitionCode, RsBalancedCode,
};
use crate::code::{BuildError, Decoded, ZeroCode};
use crate::sigma_code::{decode_sector, SigmaScheme};
use crate::words::{d0di, extract, Word};

/// Length sentinel for plans that cannot exist, such as a distinct-weight
/// code on more than 63 bits.
const INF: u64 = u64::MAX;

/// Message lengths of the default redundancy-table grid.
pub const TABLE_KS: &[u64] = &[
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 18, 20, 22, 24, 26, 28, 30, 31, 32, 36,
    40, 44, 48, 52, 56, 60, 63, 64, 127, 128, 255, 256, 511, 512, 1024, 2048, 4096, 8192, 16384,
    32768, 65536, 131072, 262144, 524288, 1048576, 2097152, 4194304, 8388608, 16777216, 33554432,
    67108864, 134217728, 268435456,
];

/// Strength columns of the default redundancy-table grid.
pub const TABLE_TS: &[u64] = &[1, 2, 3, 4, 5, 6, 7, 8, 16, 32, 64, 128, 256];

/// One redundancy-table cell: the best block length found for `k`
/// information bits at strength `t`, reported as redundancy `r`, together
/// with the plan that achieves it. `t_b` is the strength left when the
/// recursion stops, `base` the family letter it stops in, `k_tb`/`n_tb`
/// that base code's dimensions, and `b`/`tau` its byte split (the chunk
/// split for family M, zero for families without one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub k: u64,
    pub t: u64,
    pub r: u64,
    pub t_b: u64,
    pub base: char,
    pub k_tb: u64,
    pub n_tb: u64,
    pub b: u64,
    pub tau: u64,
}

/// Best plan found for one strength and message length.
#[derive(Clone, Copy, Debug)]
struct Entry {
    len: u64,
    choice: Choice,
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    Identity,
    Repetition,
    DistinctWeight,
    LimitedMagnitude,
    RsBalanced { b: u64, tau: u64 },
    Recurse { k_next: u64 },
}

/// Bits needed to pack the sector datum of a `k`-bit message at strength
/// `s`: the checksum residue at strength one, `s` field coefficients
/// beyond that.
fn datum_bits(s: u64, k: u64) -> u64 {
    if s == 1 {
        64 - k.leading_zeros() as u64
    } else {
        (BigUint::from(next_prime_power(k)).pow(s as u32) - 1u32).bits()
    }
}

/// Information bits handed to the inner code: the packed datum when that
/// is shorter than the message, the message itself otherwise.
fn next_info(s: u64, k: u64) -> u64 {
    k.min(datum_bits(s, k))
}

/// Memoized planner over (strength, message length) pairs. The table
/// flavor prices balanced-byte codes at their conjectured parity and
/// unbumped field; the codec flavor prices only what the builder can
/// actually construct.
struct Planner {
    mode: RsMode,
    strict: bool,
    buildable: bool,
    memo: HashMap<(u64, u64), Entry>,
    nbal_cache: HashMap<(u64, u64), u64>,
}

impl Planner {
    fn table() -> Planner {
        Planner {
            mode: RsMode::Conjecture,
            strict: false,
            buildable: false,
            memo: HashMap::new(),
            nbal_cache: HashMap::new(),
        }
    }

    fn codec(mode: RsMode) -> Planner {
        Planner {
            mode,
            strict: true,
            buildable: true,
            memo: HashMap::new(),
            nbal_cache: HashMap::new(),
        }
    }

    /// Shortest balanced-byte plan for the inner search, with its split.
    /// Ties keep the smallest `(b, tau)`.
    fn balanced_best(&mut self, s: u64, k: u64) -> (u64, u64, u64) {
        let (mode, strict, buildable) = (self.mode, self.strict, self.buildable);
        let mut best = (INF, 0, 0);
        for b in 1..=k.min(32) {
            for tau in 1..=s + 1 {
                let cache = &mut self.nbal_cache;
                let lay = match layout_pruned(k, s, b, tau, mode, strict, best.0, &mut |v, g| {
                    *cache.entry((v, g)).or_insert_with(|| nbal(v, g))
                }) {
                    Some(lay) => lay,
                    None => continue,
                };
                if buildable
                    && (lay.q > FIELD_LIMIT
                        || ![lay.data_nb, lay.left_nb, lay.par_nb]
                            .into_iter()
                            .all(byte_book_fits))
                {
                    continue;
                }
                if lay.total < best.0 {
                    best = (lay.total, b, tau);
                }
            }
        }
        best
    }

    /// The best inner plan at strength `s` for `k` information bits.
    fn best(&mut self, s: u64, k: u64) -> Entry {
        if s == 0 {
            return Entry {
                len: k,
                choice: Choice::Identity,
            };
        }
        if let Some(&e) = self.memo.get(&(s, k)) {
            return e;
        }
        // Collect the recursion chain first so evaluation runs bottom-up
        // on the heap instead of deep in the call stack.
        let mut chain = vec![(s, k)];
        loop {
            let &(cs, ck) = chain.last().unwrap();
            let next = (cs - 1, next_info(cs, ck));
            if next.0 == 0 || self.memo.contains_key(&next) {
                break;
            }
            chain.push(next);
        }
        let mut entry = Entry {
            len: 0,
            choice: Choice::Identity,
        };
        for &(cs, ck) in chain.iter().rev() {
            let inner_k = next_info(cs, ck);
            let inner_len = if cs == 1 {
                inner_k
            } else {
                self.memo[&(cs - 1, inner_k)].len
            };
            entry = self.eval(cs, ck, inner_len);
            self.memo.insert((cs, ck), entry);
        }
        entry
    }

    /// Evaluates the candidate families at one level, given the already
    /// planned inner length for the recursive candidate. Ties keep the
    /// earliest candidate in the listing order.
    fn eval(&mut self, s: u64, k: u64, inner_len: u64) -> Entry {
        let rec = k.saturating_add(s + 1).saturating_add(inner_len);
        let (s_len, sb, stau) = self.balanced_best(s, k);
        let candidates = [
            (
                rec,
                Choice::Recurse {
                    k_next: next_info(s, k),
                },
            ),
            (total_length(s, k), Choice::LimitedMagnitude),
            (s_len, Choice::RsBalanced { b: sb, tau: stau }),
            ((s + 1).saturating_mul(k), Choice::Repetition),
            (
                if k <= 63 { (1u64 << k) - 1 } else { INF },
                Choice::DistinctWeight,
            ),
        ];
        let mut entry = Entry {
            len: candidates[0].0,
            choice: candidates[0].1,
        };
        for &(len, choice) in &candidates[1..] {
            if len < entry.len {
                entry = Entry { len, choice };
            }
        }
        entry
    }

    /// The top-level choice: repetition, distinct weight, or recursion,
    /// shortest first with ties going to the earliest in that order.
    fn outer(&mut self, k: u64, t: u64) -> (u64, Choice) {
        let k_next = next_info(t, k);
        let rec = k
            .saturating_add(t + 1)
            .saturating_add(self.best(t - 1, k_next).len);
        let candidates = [
            ((t + 1).saturating_mul(k), Choice::Repetition),
            (
                if k <= 63 { (1u64 << k) - 1 } else { INF },
                Choice::DistinctWeight,
            ),
            (rec, Choice::Recurse { k_next }),
        ];
        let mut best = candidates[0];
        for &c in &candidates[1..] {
            if c.0 < best.0 {
                best = c;
            }
        }
        (best.0, best.1)
    }

    /// Follows recursive choices down to the base family they stop in.
    fn terminal(&mut self, mut s: u64, mut k: u64) -> (u64, Choice, u64, u64) {
        loop {
            let e = self.best(s, k);
            match e.choice {
                Choice::Recurse { k_next } => {
                    s -= 1;
                    k = k_next;
                }
                choice => return (s, choice, k, e.len),
            }
        }
    }

    fn cell(&mut self, k: u64, t: u64) -> TableCell {
        assert!(k >= 1 && t >= 1, "table cells need k >= 1 and t >= 1");
        let (n, choice) = self.outer(k, t);
        let (t_b, base_choice, k_tb, n_tb) = match choice {
            Choice::Recurse { k_next } => self.terminal(t - 1, k_next),
            other => (t, other, k, n),
        };
        let (base, b, tau) = match base_choice {
            Choice::Identity => ('I', 0, 0),
            Choice::Repetition => ('R', 0, 0),
            Choice::DistinctWeight => ('W', 0, 0),
            Choice::LimitedMagnitude => ('M', k_tb / 32, k_tb % 32),
            Choice::RsBalanced { b, tau } => ('S', b, tau),
            Choice::Recurse { .. } => unreachable!("terminal never returns a recursion"),
        };
        TableCell {
            k,
            t,
            r: n - k,
            t_b,
            base,
            k_tb,
            n_tb,
            b,
            tau,
        }
    }
}

/// The redundancy-table cell for one message length and strength.
pub fn table_cell(k: u64, t: u64) -> TableCell {
    Planner::table().cell(k, t)
}

/// Redundancy-table cells for every requested message length and
/// strength, row-major with strengths varying fastest. One planner is
/// shared across the grid, so repeated subplans are priced once.
pub fn redundancy_table(ks: &[u64], ts: &[u64]) -> Vec<TableCell> {
    let mut planner = Planner::table();
    let mut cells = Vec::with_capacity(ks.len() * ts.len());
    for &k in ks {
        for &t in ts {
            cells.push(planner.cell(k, t));
        }
    }
    cells
}

/// How a marker level feeds its inner code.
enum Pack {
    /// The inner code carries the message itself.
    Direct,
    /// The inner code carries the packed sector datum.
    Datum { scheme: SigmaScheme, bits: u64 },
}

/// One marker level: the message, a run of `s` zeros closed by a one,
/// then the inner encoding of the packed summary.
struct MarkerNode {
    s: u64,
    k: u64,
    len: u64,
    pack: Pack,
    inner: Box<Node>,
}

enum Node {
    Base(Box<dyn ZeroCode>),
    Marker(MarkerNode),
}

impl Node {
    fn length(&self) -> u64 {
        match self {
            Node::Base(code) => code.length(),
            Node::Marker(m) => m.len,
        }
    }

    fn encode(&self, x: &Word) -> Word {
        match self {
            Node::Base(code) => code.encode(x),
            Node::Marker(m) => m.encode(x),
        }
    }

    fn decode(&self, y: &Word) -> Decoded {
        match self {
            Node::Base(code) => code.decode(y),
            Node::Marker(m) => m.decode(y),
        }
    }
}

/// Packs the datum of `x` under `scheme` into a fixed-width word,
/// mixed-radix with the first coefficient least significant.
fn pack_datum(scheme: &SigmaScheme, x: &Word, bits: u64) -> Word {
    let datum = scheme.datum(x.profile_head());
    let value = match scheme {
        SigmaScheme::Group { .. } => BigUint::from(datum[0]),
        SigmaScheme::Field { field, .. } => datum
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * field.size() + d),
        SigmaScheme::Trivial => unreachable!("strength zero never recurses"),
    };
    let msb_first: Vec<u8> = (0..bits).rev().map(|i| value.bit(i) as u8).collect();
    Word::from_bits(&msb_first)
}

/// Reads a packed datum back into its coefficients; `None` when the
/// carried value falls outside the datum space.
fn unpack_datum(scheme: &SigmaScheme, info: &Word) -> Option<Vec<u64>> {
    let mut value = BigUint::zero();
    for bit in info.to_bits() {
        value = value * 2u32 + bit;
    }
    match scheme {
        SigmaScheme::Group { m } => {
            if value < BigUint::from(*m) {
                Some(vec![value.to_u64().unwrap()])
            } else {
                None
            }
        }
        SigmaScheme::Field { field, t } => {
            let q = field.size();
            let mut digits = Vec::with_capacity(*t as usize);
            for _ in 0..*t {
                digits.push((&value % q).to_u64().unwrap());
                value /= q;
            }
            if value.is_zero() {
                Some(digits)
            } else {
                None
            }
        }
        SigmaScheme::Trivial => unreachable!("strength zero never recurses"),
    }
}

impl MarkerNode {
    fn encode(&self, x: &Word) -> Word {
        let inner_info = match &self.pack {
            Pack::Direct => x.clone(),
            Pack::Datum { scheme, bits } => pack_datum(scheme, x, *bits),
        };
        let marker = Word::from_profile(vec![self.s, 0]);
        x.concat(&marker).concat(&self.inner.encode(&inner_info))
    }

    fn decode(&self, y: &Word) -> Decoded {
        let delta = y.len() as i64 - self.len as i64;
        if delta.unsigned_abs() > self.s {
            return Decoded::failure(self.k);
        }
        let tau_neg = (self.s as i64 - delta) / 2;
        let tau_pos = (self.s as i64 - tau_neg) as u64;
        let (z, rest) = extract(y, self.s, self.k + tau_pos + 1);
        let inner = self.inner.decode(&rest);
        // A certified inner result pins the sector datum, which corrects
        // the front section; an uncertified one means every error hit the
        // inner part, leaving the front section clean as received.
        let candidate = if inner.cor {
            match &self.pack {
                Pack::Direct => inner.info,
                Pack::Datum { scheme, .. } => match unpack_datum(scheme, &inner.info) {
                    Some(datum) if z.weight() <= self.k => {
                        let sector = decode_sector(scheme, self.k, z.weight(), self.s, &datum, &z);
                        if sector.cor {
                            Word::from_profile(sector.profile)
                        } else {
                            z
                        }
                    }
                    _ => z,
                },
            }
        } else {
            z
        };
        if candidate.len() != self.k {
            return Decoded::failure(self.k);
        }
        if !d0di(&self.encode(&candidate), y).within(self.s) {
            return Decoded::failure(self.k);
        }
        Decoded {
            info: candidate,
            cor: true,
        }
    }
}

/// A code correcting `t` zero errors built from the best plan the codec
/// planner finds: a systematic marker recursion in the general case, a
/// closed-form base family when that is shorter.
pub struct RecursiveCode {
    k: u64,
    t: u64,
    root: Node,
}

impl RecursiveCode {
    /// Builds the planned code for `k` information bits at strength `t`.
    /// Balanced-byte subcodes take their parity count from `mode`.
    pub fn new(k: u64, t: u64, mode: RsMode) -> Result<RecursiveCode, BuildError> {
        assert!(k >= 1 && t >= 1, "codes need k >= 1 and t >= 1");
        let mut planner = Planner::codec(mode);
        let (_, choice) = planner.outer(k, t);
        let root = match choice {
            Choice::Repetition => Node::Base(Box::new(RepetitionCode::new(k, t))),
            Choice::DistinctWeight => Node::Base(Box::new(DistinctWeightCode::new(k))),
            Choice::Recurse { k_next } => build_chain(&mut planner, mode, t, k, k_next)?,
            _ => unreachable!("outer choices are recursion, repetition, or distinct weight"),
        };
        Ok(RecursiveCode { k, t, root })
    }
}

/// Builds the marker chain from `(t, k)` downward: marker levels while
/// the plan keeps recursing, then the terminal base code, assembled
/// bottom-up.
fn build_chain(
    planner: &mut Planner,
    mode: RsMode,
    t: u64,
    k: u64,
    k_next: u64,
) -> Result<Node, BuildError> {
    let mut levels = vec![(t, k, k_next)];
    let (mut s, mut ck) = (t - 1, k_next);
    let (term_s, term_choice, term_k) = loop {
        if s == 0 {
            break (0, Choice::Identity, ck);
        }
        match planner.best(s, ck).choice {
            Choice::Recurse { k_next } => {
                levels.push((s, ck, k_next));
                s -= 1;
                ck = k_next;
            }
            choice => break (s, choice, ck),
        }
    };
    let mut node = match term_choice {
        Choice::Identity => Node::Base(Box::new(IdentityCode::new(term_k))),
        Choice::Repetition => Node::Base(Box::new(RepetitionCode::new(term_k, term_s))),
        Choice::DistinctWeight => Node::Base(Box::new(DistinctWeightCode::new(term_k))),
        Choice::LimitedMagnitude => Node::Base(Box::new(LimitedMagnitudeCode::new(term_k, term_s))),
        Choice::RsBalanced { b, tau } => Node::Base(Box::new(RsBalancedCode::new(
            term_k,
            term_s,
            mode,
            Some((b, tau)),
        )?)),
        Choice::Recurse { .. } => unreachable!("the chain stops at a base choice"),
    };
    for &(s, k, k_next) in levels.iter().rev() {
        let pack = if k_next < k {
            Pack::Datum {
                scheme: SigmaScheme::for_sector(k, s)?,
                bits: k_next,
            }
        } else {
            Pack::Direct
        };
        let len = k + s + 1 + node.length();
        node = Node::Marker(MarkerNode {
            s,
            k,
            len,
            pack,
            inner: Box::new(node),
        });
    }
    Ok(node)
}

impl ZeroCode for RecursiveCode {
    fn info_bits(&self) -> u64 {
        self.k
    }

    fn strength(&self) -> u64 {
        self.t
    }

    fn length(&self) -> u64 {
        self.root.length()
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(x.len(), self.k, "information word must have {} bits", self.k);
        self.root.encode(x)
    }

    fn decode(&self, y: &Word) -> Decoded {
        self.root.decode(y)
    }
}
