//! Sigma summaries of zero-run profiles, the key equation, and
//! constant-weight sector decoding.
//!
//! A sector is the set of binary words with one fixed length and weight.
//! Each word is summarized by a short datum computed from its truncated
//! profile: nothing at strength zero, a weighted checksum at strength one,
//! the coefficients of `prod (1 - a_i z)^{v_i} mod z^(t+1)` beyond that.
//! Words sharing a datum form a code correcting `t` zero errors: the
//! decoder recovers the insertion and deletion multisets from the received
//! profile by solving `sigma_F = S sigma_E mod z^(t+1)` with the extended
//! Euclidean algorithm and reading the multisets back off the roots.

use std::collections::HashMap;

use crate::algebra::{eea_stop, next_prime_power, Field, FieldError, Poly};
use crate::words::{dist_sy, Word};

/// How a sector computes its datum.
#[derive(Clone, Debug)]
pub enum SigmaScheme {
    /// Strength zero: no datum, every sector word is a codeword.
    Trivial,
    /// Strength one: the checksum `sum i * v_i mod m`.
    Group { m: u64 },
    /// Strength two and up: `t` sigma coefficients over a field with more
    /// nonzero elements than there are buckets.
    Field { field: Field, t: u64 },
}

impl SigmaScheme {
    /// The scheme for sectors with up to `support` summarized buckets at
    /// strength `t`.
    pub fn for_sector(support: u64, t: u64) -> Result<SigmaScheme, FieldError> {
        Ok(match t {
            0 => SigmaScheme::Trivial,
            1 => SigmaScheme::Group { m: support + 1 },
            _ => SigmaScheme::Field {
                field: Field::new(next_prime_power(support))?,
                t,
            },
        })
    }

    /// Number of datum coefficients.
    pub fn datum_len(&self) -> usize {
        match self {
            SigmaScheme::Trivial => 0,
            SigmaScheme::Group { .. } => 1,
            SigmaScheme::Field { t, .. } => *t as usize,
        }
    }

    /// The datum of a truncated profile.
    pub fn datum(&self, head: &[u64]) -> Vec<u64> {
        match self {
            SigmaScheme::Trivial => vec![],
            SigmaScheme::Group { m } => vec![group_checksum(*m, head)],
            SigmaScheme::Field { field, t } => {
                let sigma = sigma_poly(field, head, *t);
                (1..=*t as usize).map(|i| sigma.coeff(i)).collect()
            }
        }
    }
}

/// The checksum `sum (i+1) * head[i] mod m` over bucket indices 1-based.
pub fn group_checksum(m: u64, head: &[u64]) -> u64 {
    let mut acc: u64 = 0;
    for (i, &v) in head.iter().enumerate() {
        let term = ((i as u64 + 1) as u128 * v as u128 % m as u128) as u64;
        acc = ((acc as u128 + term as u128) % m as u128) as u64;
    }
    acc
}

/// `prod_i (1 - a_i z)^{head[i]} mod z^(t+1)`, where `a_i` is the field
/// element with index `i` (1-based). Needs `head.len() < field.size()`.
pub fn sigma_poly(f: &Field, head: &[u64], t: u64) -> Poly {
    assert!(
        (head.len() as u64) < f.size(),
        "support must fit among the nonzero field elements"
    );
    let s = t as usize + 1;
    let mut acc = Poly::one();
    for (i, &u) in head.iter().enumerate() {
        if u == 0 {
            continue;
        }
        let a = i as u64 + 1;
        // (1 - a z)^u truncated: coefficients C(u, j) (-a)^j by Lucas.
        let neg_a = f.neg(a);
        let mut c = Vec::with_capacity(s);
        let mut apow = 1u64;
        for j in 0..s as u64 {
            c.push(f.mul(f.binom(u, j), apow));
            apow = f.mul(apow, neg_a);
        }
        acc = acc.mul_trunc(f, &Poly::from_coeffs(c), s);
    }
    acc
}

/// Division by `(1 - a z)`; the caller has already checked divisibility by
/// evaluating at the inverse root.
fn divide_linear(f: &Field, p: &Poly, a: u64) -> Poly {
    let d = p.degree();
    debug_assert!(d >= 1);
    let d = d as usize;
    let mut q = vec![0u64; d];
    let mut prev = 0;
    for (j, cell) in q.iter_mut().enumerate() {
        *cell = f.add(p.coeff(j), f.mul(a, prev));
        prev = *cell;
    }
    debug_assert_eq!(f.add(p.coeff(d), f.mul(a, prev)), 0);
    Poly::from_coeffs(q)
}

/// Reads a multiset off a sigma polynomial by trial division: entry `i`
/// gets the multiplicity of the factor `(1 - a_i z)`. Fails when the
/// polynomial does not factor completely over the support.
pub fn unpack_sigma(f: &Field, sigma: &Poly, support: u64) -> Option<Vec<u64>> {
    assert!(support < f.size());
    if sigma.is_zero() {
        return None;
    }
    let mut mult = vec![0u64; support as usize];
    let mut p = sigma.clone();
    for i in 1..=support {
        if p.degree() <= 0 {
            break;
        }
        let ainv = f.inv(i);
        while p.degree() > 0 && p.eval(f, ainv) == 0 {
            p = divide_linear(f, &p, i);
            mult[(i - 1) as usize] += 1;
        }
    }
    if p == Poly::one() {
        Some(mult)
    } else {
        None
    }
}

/// Corrects a truncated profile against a sigma reference: finds `x` with
/// `datum(x) = datum` and `y = x + F - E` for insertion and deletion
/// multisets with `|F| <= tau_pos`, `|E| <= tau_neg`. Returns the corrected
/// profile, or `None` when no such correction exists within the bounds.
pub fn decode_asymmetric(
    f: &Field,
    y_head: &[u64],
    datum: &[u64],
    t: u64,
    tau_neg: u64,
    tau_pos: u64,
) -> Option<Vec<u64>> {
    let s = t as usize + 1;
    let support = y_head.len() as u64;
    let mut ref_c = vec![1u64];
    ref_c.extend_from_slice(datum);
    let sigma_ref = Poly::from_coeffs(ref_c);
    let sigma_y = sigma_poly(f, y_head, t);
    let ref_inv = sigma_ref
        .inv_series(f, s)
        .expect("sigma references have a unit constant term");
    let quotient = sigma_y.mul_trunc(f, &ref_inv, s);
    let (r, v) = eea_stop(f, &Poly::monomial(s), &quotient, tau_pos as i64);
    let v0 = v.coeff(0);
    if v0 == 0 {
        return None;
    }
    let scale = f.inv(v0);
    let sigma_f = r.scale(f, scale);
    let sigma_e = v.scale(f, scale);
    if sigma_e.degree() > tau_neg as i64 || sigma_f.coeff(0) != 1 {
        return None;
    }
    let ins = unpack_sigma(f, &sigma_f, support)?;
    let del = unpack_sigma(f, &sigma_e, support)?;
    let mut x = y_head.to_vec();
    for i in 0..x.len() {
        x[i] += del[i];
        x[i] = x[i].checked_sub(ins[i])?;
    }
    Some(x)
}

/// Result of a sector decode: a full candidate profile of the sector's
/// length and weight, and whether the decoder certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorDecode {
    pub profile: Vec<u64>,
    pub cor: bool,
}

fn placeholder(len: u64, w: u64) -> SectorDecode {
    let mut profile = vec![0u64; w as usize];
    profile.push(len - w);
    SectorDecode {
        profile,
        cor: false,
    }
}

/// Decodes a received word against the sector of `len`-bit words of weight
/// `w` whose datum equals `datum`, at strength `t`.
///
/// Always returns a profile of the sector's shape; `cor` is set only when
/// the candidate is a sector codeword within distance `t` of the received
/// word. Uncertified results are the fixed placeholder `1^w 0^(len-w)`.
pub fn decode_sector(
    scheme: &SigmaScheme,
    len: u64,
    w: u64,
    t: u64,
    datum: &[u64],
    y: &Word,
) -> SectorDecode {
    assert!(w <= len, "sector weight beyond its length");
    if y.weight() != w {
        return placeholder(len, w);
    }
    let delta = y.len() as i64 - len as i64;
    if delta.unsigned_abs() > t {
        return placeholder(len, w);
    }
    let head = y.profile_head();
    let cand_head: Vec<u64> = match scheme {
        SigmaScheme::Trivial => head.to_vec(),
        SigmaScheme::Group { m } => {
            debug_assert_eq!(t, 1);
            let sum = group_checksum(*m, head);
            let reference = datum[0] % m;
            let ds = (sum + m - reference) % m;
            let mut h = head.to_vec();
            match delta {
                0 => {
                    if ds != 0 {
                        return placeholder(len, w);
                    }
                    h
                }
                1 => {
                    // One extra zero; the checksum names its bucket, with
                    // zero meaning the trailing run beyond the summary.
                    if ds == 0 {
                        h
                    } else if ds <= w && h[ds as usize - 1] > 0 {
                        h[ds as usize - 1] -= 1;
                        h
                    } else {
                        return placeholder(len, w);
                    }
                }
                -1 => {
                    let j = (*m - ds) % m;
                    if j == 0 {
                        h
                    } else if j <= w {
                        h[j as usize - 1] += 1;
                        h
                    } else {
                        return placeholder(len, w);
                    }
                }
                _ => unreachable!("|delta| <= t = 1"),
            }
        }
        SigmaScheme::Field { field, .. } => {
            let tau_neg = ((t as i64 - delta) / 2) as u64;
            let tau_pos = t - tau_neg;
            match decode_asymmetric(field, head, datum, t, tau_neg, tau_pos) {
                Some(h) => h,
                None => return placeholder(len, w),
            }
        }
    };
    let used: u64 = cand_head.iter().sum::<u64>() + w;
    if used > len {
        return placeholder(len, w);
    }
    let mut profile = cand_head;
    profile.push(len - used);
    if scheme.datum(&profile[..w as usize]) != datum {
        return placeholder(len, w);
    }
    if dist_sy(y.profile(), &profile) > t {
        return placeholder(len, w);
    }
    SectorDecode { profile, cor: true }
}

/// A constant-weight sector code: the largest datum class of a sector,
/// with its words in ascending binary order.
#[derive(Clone, Debug)]
pub struct CwCode {
    pub n: u64,
    pub w: u64,
    pub t: u64,
    pub scheme: SigmaScheme,
    pub datum: Vec<u64>,
    pub words: Vec<Word>,
}

impl CwCode {
    /// Decodes a received word against this code.
    pub fn decode(&self, y: &Word) -> SectorDecode {
        decode_sector(&self.scheme, self.n, self.w, self.t, &self.datum, y)
    }
}

fn compositions(total: u64, parts: u64) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    let mut cur = vec![0u64; parts as usize];
    fn rec(out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, idx: usize, left: u64) {
        if idx + 1 == cur.len() {
            cur[idx] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[idx] = v;
            rec(out, cur, idx + 1, left - v);
        }
    }
    rec(&mut out, &mut cur, 0, total);
    out
}

/// Builds the largest strength-`t` datum class of the `(n, w)` sector,
/// breaking size ties toward the smallest datum. The class size is at
/// least the sector size divided by the number of datum values.
pub fn construct_cw_code(n: u64, w: u64, t: u64) -> Result<CwCode, FieldError> {
    assert!(w <= n);
    let scheme = SigmaScheme::for_sector(w, t)?;
    let mut classes: HashMap<Vec<u64>, Vec<Word>> = HashMap::new();
    for profile in compositions(n - w, w + 1) {
        let datum = scheme.datum(&profile[..w as usize]);
        classes
            .entry(datum)
            .or_default()
            .push(Word::from_profile(profile));
    }
    let (datum, mut words) = classes
        .into_iter()
        .max_by(|(da, wa), (db, wb)| wa.len().cmp(&wb.len()).then(db.cmp(da)))
        .expect("every sector is nonempty");
    words.sort_by_key(|x| x.to_bits());
    Ok(CwCode {
        n,
        w,
        t,
        scheme,
        datum,
        words,
    })
}
