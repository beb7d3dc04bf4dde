//! Reed-Solomon code over balanced bytes.
//!
//! Information bits are packed into symbols of a Reed-Solomon code, and
//! every symbol is written as a fixed-weight byte followed by a one. The
//! ones are immune to zero errors, so a received word always splits back
//! into exactly one segment per byte: zero errors never smear across
//! byte boundaries. Each byte is itself a small constant-weight code of
//! strength `tau - 1`; decoding tries `tau` stages that trade per-byte
//! correction against Reed-Solomon erasures.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{next_prime_power, prime_power, Field, Poly};
use crate::code::{BuildError, Decoded, ZeroCode};
use crate::sigma_code::{construct_cw_code, decode_sector, CwCode, SigmaScheme};
use crate::words::{binomial, d0di, Word};

/// How many Reed-Solomon parity symbols back a given strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsMode {
    /// Parity provably sufficient for the strength: `t` symbols when
    /// `tau` is 1, twice the conjectured count otherwise.
    Guaranteed,
    /// The conjectured minimum of `floor(t / tau)` symbols.
    Conjecture,
}

/// Parity symbol count for strength `t` at byte stage depth `tau`.
pub fn parity_symbols(mode: RsMode, t: u64, tau: u64) -> u64 {
    match mode {
        RsMode::Conjecture => t / tau,
        RsMode::Guaranteed => {
            if tau == 1 {
                t
            } else {
                2 * (t / tau)
            }
        }
    }
}

/// Shortest balanced-byte content length able to name `values` symbols:
/// the byte code is the largest datum class among words of that length
/// and half weight, whose size is at least the class-count bound.
pub fn nbal(values: u64, tau: u64) -> u64 {
    assert!(values >= 2 && tau >= 1);
    let datum_space = |w: u64| match tau - 1 {
        0 => BigUint::one(),
        1 => BigUint::from(w + 1),
        s => BigUint::from(next_prime_power(w)).pow(s as u32),
    };
    // Walk nb upward, maintaining C(nb, nb / 2) by one exact ratio step
    // per increment and refreshing the datum space when the weight moves.
    let mut nb = 1u64;
    let mut binom = BigUint::one();
    let mut space = datum_space(0);
    loop {
        if binom > &space * (values - 1) {
            return nb;
        }
        binom *= nb + 1;
        if nb % 2 == 0 {
            binom /= nb / 2 + 1;
        } else {
            let next_w = (nb + 1) / 2;
            binom /= next_w;
            space = datum_space(next_w);
        }
        nb += 1;
    }
}

/// Symbol layout of a balanced-byte code: byte sizes, field size, and
/// total block length. With `strict_classic` the field grows until the
/// symbol count fits a classic Reed-Solomon length of at most `q - 1`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub k: u64,
    pub t: u64,
    pub b: u64,
    pub tau: u64,
    pub t_rs: u64,
    pub q: u64,
    /// Number of full `b`-bit data bytes.
    pub full: u64,
    /// Bits in the leftover data byte, 0 when `b` divides `k`.
    pub left_bits: u64,
    pub data_nb: u64,
    pub left_nb: u64,
    pub par_nb: u64,
    pub total: u64,
}

impl Layout {
    pub fn symbols(&self) -> u64 {
        self.full + (self.left_bits > 0) as u64 + self.t_rs
    }

    pub fn data_symbols(&self) -> u64 {
        self.full + (self.left_bits > 0) as u64
    }
}

pub fn layout(k: u64, t: u64, b: u64, tau: u64, mode: RsMode, strict_classic: bool) -> Layout {
    layout_pruned(k, t, b, tau, mode, strict_classic, u64::MAX, &mut |v, s| nbal(v, s))
        .expect("an unbounded cutoff never prunes")
}

/// The layout computation behind [`layout`], with two search hooks: byte
/// lengths come from `nbal_at` (so sweeps can memoize them), and `None` is
/// returned as soon as a partial lower bound on the total reaches
/// `cutoff` (parity bytes are never shorter than data bytes, which makes
/// the data-only sum a valid floor).
pub(crate) fn layout_pruned(
    k: u64,
    t: u64,
    b: u64,
    tau: u64,
    mode: RsMode,
    strict_classic: bool,
    cutoff: u64,
    nbal_at: &mut impl FnMut(u64, u64) -> u64,
) -> Option<Layout> {
    assert!(k >= 1 && (1..=32).contains(&b) && (1..=t + 1).contains(&tau));
    let t_rs = parity_symbols(mode, t, tau);
    let full = k / b;
    let left_bits = k % b;
    let data_syms = full + (left_bits > 0) as u64;
    let data_nb = nbal_at(1 << b, tau);
    let floor = (full + t_rs).saturating_mul(data_nb + 1);
    if floor >= cutoff {
        return None;
    }
    let nu = (1u64 << b).max(data_syms + t_rs);
    let mut q = if prime_power(nu).is_some() {
        nu
    } else {
        next_prime_power(nu)
    };
    if strict_classic {
        while data_syms + t_rs > q - 1 {
            q = next_prime_power(q);
        }
    }
    let left_nb = if left_bits > 0 {
        nbal_at(1 << left_bits, tau)
    } else {
        0
    };
    let par_nb = nbal_at(q, tau);
    let total = full * (data_nb + 1)
        + if left_bits > 0 { left_nb + 1 } else { 0 }
        + t_rs * (par_nb + 1);
    Some(Layout {
        k,
        t,
        b,
        tau,
        t_rs,
        q,
        full,
        left_bits,
        data_nb,
        left_nb,
        par_nb,
        total,
    })
}

/// The `(b, tau)` pair minimizing the block length for a directly built
/// code, searched over byte sizes up to 32 bits and all stage depths.
/// Parameter choices whose byte codebooks would blow the construction
/// budget are skipped.
pub fn best_params(k: u64, t: u64, mode: RsMode) -> (u64, u64) {
    let mut best: Option<(u64, u64, u64)> = None;
    for b in 1..=k.min(32) {
        for tau in 1..=t + 1 {
            let lay = layout(k, t, b, tau, mode, true);
            let fits = [lay.data_nb, lay.left_nb, lay.par_nb]
                .into_iter()
                .all(byte_book_fits);
            if !fits {
                continue;
            }
            if best.map_or(true, |(_, _, bt)| lay.total < bt) {
                best = Some((b, tau, lay.total));
            }
        }
    }
    let (b, tau, _) = best.expect("some byte size always fits the budget");
    (b, tau)
}

/// A classic Reed-Solomon code in systematic form; stream position `j`
/// carries coefficient `n - 1 - j`, so information symbols come first.
#[derive(Clone, Debug)]
struct ReedSolomon {
    n: u64,
    k: u64,
    d: u64,
    gen: Poly,
}

impl ReedSolomon {
    fn new(f: &Field, n: u64, k: u64) -> ReedSolomon {
        assert!(k <= n && n <= f.size() - 1);
        let mut gen = Poly::one();
        for i in 0..n - k {
            gen = gen.mul(f, &Poly::from_coeffs(vec![f.neg(f.exp_at(i)), 1]));
        }
        ReedSolomon {
            n,
            k,
            d: n - k + 1,
            gen,
        }
    }

    fn encode(&self, f: &Field, info: &[u64]) -> Vec<u64> {
        assert_eq!(info.len() as u64, self.k);
        let mut coeffs = vec![0u64; self.n as usize];
        for (j, &v) in info.iter().enumerate() {
            coeffs[self.n as usize - 1 - j] = v;
        }
        let rem = Poly::from_coeffs(coeffs).divmod(f, &self.gen).1;
        let mut stream = info.to_vec();
        for j in self.k..self.n {
            stream.push(f.neg(rem.coeff((self.n - 1 - j) as usize)));
        }
        stream
    }

    fn syndromes_vanish(&self, f: &Field, coeffs: &[u64]) -> bool {
        let poly = Poly::from_coeffs(coeffs.to_vec());
        (0..self.d - 1).all(|j| poly.eval(f, f.exp_at(j)) == 0)
    }

    /// Errors-and-erasures decoding; `None` entries are erasures. Returns
    /// the corrected symbol stream.
    fn decode(&self, f: &Field, rx: &[Option<u64>]) -> Option<Vec<u64>> {
        assert_eq!(rx.len() as u64, self.n);
        let erased: Vec<u64> = rx
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(j, _)| self.n - 1 - j as u64)
            .collect();
        let e = erased.len() as u64;
        if e > self.d - 1 {
            return None;
        }
        let mut coeffs = vec![0u64; self.n as usize];
        for (j, s) in rx.iter().enumerate() {
            coeffs[self.n as usize - 1 - j] = s.unwrap_or(0);
        }
        if self.syndromes_vanish(f, &coeffs) {
            return Some(self.to_stream(&coeffs));
        }

        let synd: Vec<u64> = {
            let poly = Poly::from_coeffs(coeffs.clone());
            (0..self.d - 1).map(|j| poly.eval(f, f.exp_at(j))).collect()
        };
        let gamma = erased.iter().fold(Poly::one(), |acc, &c| {
            acc.mul(f, &Poly::from_coeffs(vec![1, f.neg(f.exp_at(c))]))
        });
        let xi = gamma.mul_trunc(f, &Poly::from_coeffs(synd), (self.d - 1) as usize);
        debug_assert!(!xi.is_zero());
        let stop = ((self.d - 1 + e) / 2) as i64 - 1;
        let (omega, lambda) =
            crate::algebra::eea_stop(f, &Poly::monomial((self.d - 1) as usize), &xi, stop);
        if lambda.coeff(0) == 0 {
            return None;
        }
        let psi = lambda.mul(f, &gamma);

        let mut locs = Vec::new();
        for c in 0..self.n {
            if psi.eval(f, f.inv(f.exp_at(c))) == 0 {
                locs.push(c);
            }
        }
        if locs.len() as i64 != psi.degree() {
            return None;
        }

        let psi_d = psi.derivative(f);
        for &c in &locs {
            let x = f.exp_at(c);
            let x_inv = f.inv(x);
            let den = psi_d.eval(f, x_inv);
            if den == 0 {
                return None;
            }
            let value = f.neg(f.mul(x, f.mul(omega.eval(f, x_inv), f.inv(den))));
            coeffs[c as usize] = f.sub(coeffs[c as usize], value);
        }
        if !self.syndromes_vanish(f, &coeffs) {
            return None;
        }
        Some(self.to_stream(&coeffs))
    }

    fn to_stream(&self, coeffs: &[u64]) -> Vec<u64> {
        (0..self.n as usize)
            .map(|j| coeffs[self.n as usize - 1 - j])
            .collect()
    }
}

/// Largest per-byte codebook enumeration allowed when building a code.
const BYTE_ENUM_LIMIT: u64 = 1 << 22;

/// Whether a byte of `nb` bits keeps its half-weight codebook within the
/// construction budget.
pub(crate) fn byte_book_fits(nb: u64) -> bool {
    nb <= 64 && binomial(nb, nb / 2) <= BigUint::from(BYTE_ENUM_LIMIT)
}

/// One byte position's code: the largest datum class of half-weight words
/// of length `nbits`, indexed in ascending binary order, plus reduced
/// decode tables for every stage strength.
#[derive(Clone, Debug)]
struct ByteCode {
    values: u64,
    nbits: u64,
    weight: u64,
    code: CwCode,
    index: HashMap<Word, u64>,
    /// Scheme and datum truncated to strength `s`, indexed by `s`.
    reduced: Vec<(SigmaScheme, Vec<u64>)>,
}

impl ByteCode {
    fn new(values: u64, tau: u64) -> Result<ByteCode, BuildError> {
        let nbits = nbal(values, tau);
        let weight = nbits / 2;
        if binomial(nbits, weight) > BigUint::from(BYTE_ENUM_LIMIT) {
            return Err(BuildError::ByteBookTooLarge { nbits, weight });
        }
        let code = construct_cw_code(nbits, weight, tau - 1)?;
        assert!(
            code.words.len() as u64 >= values,
            "class bound shorter than the class itself"
        );
        let index = code
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u64))
            .collect();
        let reduced = (0..tau)
            .map(|s| match &code.scheme {
                SigmaScheme::Field { field, .. } if s >= 1 => (
                    SigmaScheme::Field {
                        field: field.clone(),
                        t: s,
                    },
                    code.datum[..s as usize].to_vec(),
                ),
                _ if s == 0 => (SigmaScheme::Trivial, vec![]),
                scheme => (scheme.clone(), code.datum.clone()),
            })
            .collect();
        Ok(ByteCode {
            values,
            nbits,
            weight,
            code,
            index,
            reduced,
        })
    }

    /// The byte for symbol index `v`, including its trailing one.
    fn encode(&self, v: u64) -> Word {
        assert!(v < self.values);
        self.code.words[v as usize].concat(&Word::from_profile(vec![0, 0]))
    }

    /// Decodes a byte's content at reduced strength `s`, requiring the
    /// corrected word to be one of the `values` codewords in use.
    fn decode_at(&self, z: &Word, s: u64) -> Option<u64> {
        let (scheme, datum) = &self.reduced[s as usize];
        let dec = decode_sector(scheme, self.nbits, self.weight, s, datum, z);
        if !dec.cor {
            return None;
        }
        self.index
            .get(&Word::from_profile(dec.profile))
            .copied()
            .filter(|&i| i < self.values)
    }
}

/// The byte kinds in stream order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ByteKind {
    Data,
    Leftover,
    Parity,
}

#[derive(Clone, Debug)]
pub struct RsBalancedCode {
    layout: Layout,
    mode: RsMode,
    field: Field,
    rs: ReedSolomon,
    data_byte: ByteCode,
    left_byte: Option<ByteCode>,
    par_byte: ByteCode,
    codeword_weight: u64,
}

impl RsBalancedCode {
    /// Builds the code, picking `(b, tau)` by shortest length when not
    /// given.
    pub fn new(
        k: u64,
        t: u64,
        mode: RsMode,
        params: Option<(u64, u64)>,
    ) -> Result<RsBalancedCode, BuildError> {
        let (b, tau) = params.unwrap_or_else(|| best_params(k, t, mode));
        let lay = layout(k, t, b, tau, mode, true);
        let field = Field::new(lay.q)?;
        let rs = ReedSolomon::new(&field, lay.symbols(), lay.data_symbols());
        let data_byte = ByteCode::new(1 << b, tau)?;
        let left_byte = if lay.left_bits > 0 {
            Some(ByteCode::new(1 << lay.left_bits, tau)?)
        } else {
            None
        };
        let par_byte = ByteCode::new(lay.q, tau)?;
        let codeword_weight = lay.full * (data_byte.weight + 1)
            + left_byte.as_ref().map_or(0, |b| b.weight + 1)
            + lay.t_rs * (par_byte.weight + 1);
        Ok(RsBalancedCode {
            layout: lay,
            mode,
            field,
            rs,
            data_byte,
            left_byte,
            par_byte,
            codeword_weight,
        })
    }

    pub fn mode(&self) -> RsMode {
        self.mode
    }

    pub fn params(&self) -> (u64, u64) {
        (self.layout.b, self.layout.tau)
    }

    fn byte_at(&self, i: u64) -> (&ByteCode, ByteKind) {
        if i < self.layout.full {
            (&self.data_byte, ByteKind::Data)
        } else if i < self.layout.data_symbols() {
            (self.left_byte.as_ref().unwrap(), ByteKind::Leftover)
        } else {
            (&self.par_byte, ByteKind::Parity)
        }
    }

    /// Byte index for a parity field element: zero first, then powers of
    /// the generator in order.
    fn parity_rank(&self, element: u64) -> u64 {
        if element == 0 {
            0
        } else {
            self.field.log_at(element) + 1
        }
    }

    fn parity_element(&self, rank: u64) -> u64 {
        if rank == 0 {
            0
        } else {
            self.field.exp_at(rank - 1)
        }
    }

    /// Splits a received word into one content word per byte plus trailing
    /// garbage zeros. Requires the weight to match the codeword weight.
    fn parse_bytes(&self, y: &Word) -> Vec<Word> {
        let prof = y.profile();
        let mut bytes = Vec::with_capacity(self.layout.symbols() as usize);
        let mut at = 0usize;
        for i in 0..self.layout.symbols() {
            let (byte, _) = self.byte_at(i);
            let next = at + byte.weight as usize + 1;
            bytes.push(Word::from_profile(prof[at..next].to_vec()));
            at = next;
        }
        bytes
    }
}

impl ZeroCode for RsBalancedCode {
    fn info_bits(&self) -> u64 {
        self.layout.k
    }

    fn strength(&self) -> u64 {
        self.layout.t
    }

    fn length(&self) -> u64 {
        self.layout.total
    }

    fn encode(&self, x: &Word) -> Word {
        assert_eq!(
            x.len(),
            self.layout.k,
            "information word must have {} bits",
            self.layout.k
        );
        let bits = x.to_bits();
        let mut info = Vec::with_capacity(self.layout.data_symbols() as usize);
        let mut at = 0usize;
        for i in 0..self.layout.data_symbols() {
            let width = if i < self.layout.full {
                self.layout.b
            } else {
                self.layout.left_bits
            } as usize;
            info.push(
                bits[at..at + width]
                    .iter()
                    .fold(0u64, |acc, &b| acc << 1 | b as u64),
            );
            at += width;
        }
        let stream = self.rs.encode(&self.field, &info);
        let mut out = Word::empty();
        for (i, &sym) in stream.iter().enumerate() {
            let (byte, kind) = self.byte_at(i as u64);
            let rank = match kind {
                ByteKind::Parity => self.parity_rank(sym),
                _ => sym,
            };
            out = out.concat(&byte.encode(rank));
        }
        out
    }

    fn decode(&self, y: &Word) -> Decoded {
        let k = self.layout.k;
        let t = self.layout.t;
        let delta = y.len() as i64 - self.layout.total as i64;
        if delta.unsigned_abs() > t || y.weight() != self.codeword_weight {
            return Decoded::failure(k);
        }
        let bytes = self.parse_bytes(y);
        for xi in 1..=self.layout.tau {
            let s = self.layout.tau - xi;
            let symbols: Vec<Option<u64>> = bytes
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let (byte, kind) = self.byte_at(i as u64);
                    byte.decode_at(z, s).map(|rank| match kind {
                        ByteKind::Parity => self.parity_element(rank),
                        _ => rank,
                    })
                })
                .collect();
            let erasures = symbols.iter().filter(|s| s.is_none()).count() as u64;
            if erasures > self.rs.d - 1 {
                continue;
            }
            let Some(stream) = self.rs.decode(&self.field, &symbols) else {
                continue;
            };
            let mut info = Word::empty();
            let mut valid = true;
            for i in 0..self.layout.data_symbols() {
                let width = if i < self.layout.full {
                    self.layout.b
                } else {
                    self.layout.left_bits
                };
                if stream[i as usize] >= 1 << width {
                    valid = false;
                    break;
                }
                info = info.concat(&Word::from_value(stream[i as usize], width));
            }
            if !valid {
                continue;
            }
            if d0di(&self.encode(&info), y).within(t) {
                return Decoded { info, cor: true };
            }
        }
        Decoded::failure(k)
    }
}
