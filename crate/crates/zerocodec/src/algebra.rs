//! Finite fields and polynomial arithmetic.
//!
//! Every decoder in this crate works over a small field: large enough to
//! give each profile bucket its own nonzero support element, and nothing
//! more. Fields are built once per code, with full exponent and logarithm
//! tables, so element operations are table lookups. Elements travel as
//! `u64` indices: the residue for a prime field, the base-`p` digit vector
//! `sum a_i p^i` for an extension field (bit pattern of the polynomial for
//! characteristic two).

use std::fmt;

/// Errors from building a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested order is not a prime power.
    NotPrimePower(u64),
    /// The requested order exceeds the table limit.
    TooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::TooLarge(q) => {
                write!(f, "field of order {q} exceeds the table limit")
            }
        }
    }
}

impl std::error::Error for FieldError {}

/// Largest field order for which tables are built.
pub const FIELD_LIMIT: u64 = 1 << 20;

/// Primality by trial division. Inputs here stay well below 2^40, where
/// this is instant.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// ascending order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5;
    while d * d <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Decomposes `n = p^m` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let fs = factor(n);
    match fs.as_slice() {
        [(p, m)] => Some((*p, *m)),
        _ => None,
    }
}

/// The smallest prime power strictly greater than `x`.
pub fn next_prime_power(x: u64) -> u64 {
    let mut n = x + 1;
    loop {
        if prime_power(n).is_some() {
            return n;
        }
        n += 1;
    }
}

/// Primitive polynomials over GF(2), one per degree: entry `b` is the bit
/// mask of a degree-`b` polynomial whose root generates the multiplicative
/// group. Degree 3 is `z^3 + z + 1`.
const PRIM_POLY_2: [u64; 17] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10001001,
    0b100011101,
    0b1000010001,
    0b10000001001,
    0b100000000101,
    0b1000001010011,
    0b10000000011011,
    0b100010001000011,
    0b1000000000000011,
    0b10001000000001011,
];

/// A finite field of order `p^m`, with exponent and logarithm tables over a
/// primitive element.
#[derive(Clone)]
pub struct Field {
    p: u64,
    m: u32,
    q: u64,
    /// Reduction polynomial coefficients, ascending, degree `m`, monic.
    modulus: Vec<u64>,
    generator: u64,
    /// `exp[i] = g^i` for `i` in `0..2(q-1)`, doubled to skip a reduction.
    exp: Vec<u64>,
    /// `log[a]` for `a` in `1..q`; `log[0]` is a sentinel.
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(q={}^{})", self.p, self.m)
    }
}

impl Field {
    /// Builds the field of order `q`.
    pub fn new(q: u64) -> Result<Field, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > FIELD_LIMIT {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else if p == 2 && (m as usize) < PRIM_POLY_2.len() {
            let mask = PRIM_POLY_2[m as usize];
            (0..=m as u64).map(|i| (mask >> i) & 1).collect()
        } else {
            smallest_irreducible(p, m)
        };
        let mut field = Field {
            p,
            m,
            q,
            modulus,
            generator: 0,
            exp: vec![],
            log: vec![],
        };
        field.generator = field.find_generator();
        field.build_tables();
        Ok(field)
    }

    /// The order `q = p^m`.
    #[inline]
    pub fn size(&self) -> u64 {
        self.q
    }

    /// The characteristic `p`.
    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// A fixed primitive element.
    #[inline]
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `generator^i`, for `i < q - 1`.
    #[inline]
    pub fn exp_at(&self, i: u64) -> u64 {
        self.exp[i as usize]
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            a ^ b
        } else if self.m == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            self.digitwise(a, b, |x, y| (x + y) % self.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            a
        } else if self.m == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            a ^ b
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] as usize) + (self.log[b as usize] as usize)]
    }

    /// Discrete log base the generator, for nonzero `a`.
    #[inline]
    pub fn log_at(&self, a: u64) -> u64 {
        assert!(a != 0, "log of zero");
        self.log[a as usize] as u64
    }

    /// Multiplicative inverse. Panics on zero: inverting zero is always a
    /// caller bug, never a data condition.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize] as u64;
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as u128 * e as u128) % (self.q - 1) as u128;
        self.exp[l as usize]
    }

    /// The binomial coefficient `C(n, j)` reduced into the prime subfield,
    /// by Lucas' theorem digit by digit in base `p`.
    pub fn binom(&self, n: u64, j: u64) -> u64 {
        if j > n {
            return 0;
        }
        let (mut n, mut j) = (n, j);
        let mut acc = 1u64;
        while j > 0 || n > 0 {
            let (nd, jd) = (n % self.p, j % self.p);
            if jd > nd {
                return 0;
            }
            acc = acc * binom_mod_p(nd, jd, self.p) % self.p;
            n /= self.p;
            j /= self.p;
        }
        acc
    }

    #[inline]
    fn digitwise(&self, a: u64, b: u64, op: impl Fn(u64, u64) -> u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut shift = 1;
        for _ in 0..self.m {
            out += op(a % self.p, b % self.p) * shift;
            a /= self.p;
            b /= self.p;
            shift *= self.p;
        }
        out
    }

    /// Table-free product, used only while the tables are being built.
    fn raw_mul(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let digits = |mut x: u64| -> Vec<u64> {
            (0..self.m)
                .map(|_| {
                    let d = x % self.p;
                    x /= self.p;
                    d
                })
                .collect()
        };
        let (da, db) = (digits(a), digits(b));
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce by the monic modulus, high coefficients first.
        for i in (m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &md) in self.modulus.iter().enumerate().take(m) {
                let cell = &mut prod[i - m + j];
                *cell = (*cell + (self.p - md % self.p) * c) % self.p;
            }
        }
        let mut out = 0;
        let mut shift = 1;
        for &d in prod.iter().take(m) {
            out += d * shift;
            shift *= self.p;
        }
        out
    }

    fn raw_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u64 {
        if self.p == 2 && self.m >= 1 && (self.m as usize) < PRIM_POLY_2.len() && self.m > 1 {
            // The reduction polynomial is primitive, so its root generates.
            return 2;
        }
        if self.q == 2 {
            return 1;
        }
        let order_factors: Vec<u64> = factor(self.q - 1).iter().map(|&(p, _)| p).collect();
        for g in 2..self.q {
            if order_factors
                .iter()
                .all(|&r| self.raw_pow(g, (self.q - 1) / r) != 1)
            {
                return g;
            }
        }
        unreachable!("every finite field has a primitive element");
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        self.exp = vec![0; 2 * n.max(1)];
        self.log = vec![u32::MAX; self.q as usize];
        let mut acc = 1u64;
        for i in 0..n.max(1) {
            self.exp[i] = acc;
            self.exp[i + n] = acc;
            self.log[acc as usize] = i as u32;
            acc = self.raw_mul(acc, self.generator);
        }
        debug_assert_eq!(acc, 1, "generator order must be q - 1");
    }
}

/// `C(n, j) mod p` for `n, j < p`, by the multiplicative formula with
/// modular inverses.
fn binom_mod_p(n: u64, j: u64, p: u64) -> u64 {
    let j = j.min(n - j);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..j {
        num = (num as u128 * ((n - i) % p) as u128 % p as u128) as u64;
        den = (den as u128 * ((i + 1) % p) as u128 % p as u128) as u64;
    }
    num * inv_mod_p(den, p) % p
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `m` over `F_p`, found by trial division. Returned as ascending
/// coefficients of length `m + 1`.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    // Candidates ordered by their low coefficients read as a base-p number.
    let total = p.pow(m as u32);
    for code in 0..total {
        let mut cand: Vec<u64> = Vec::with_capacity(m + 1);
        let mut x = code;
        for _ in 0..m {
            cand.push(x % p);
            x /= p;
        }
        cand.push(1);
        if poly_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1 through m/2. The degrees involved are tiny.
fn poly_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let total = p.pow(d as u32);
        for code in 0..total {
            let mut div: Vec<u64> = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                div.push(x % p);
                x /= p;
            }
            div.push(1);
            if poly_divides(&div, f, p) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `d` divides `f` over `F_p`.
fn poly_divides(d: &[u64], f: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dd = d.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let off = rem.len() - 1 - dd;
            for (j, &dj) in d.iter().enumerate() {
                let cell = &mut rem[off + j];
                *cell = (*cell + (p - dj % p) * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// A polynomial over some [`Field`], ascending coefficients, no trailing
/// zeros. The zero polynomial is the empty vector. The field travels as an
/// explicit parameter: polynomials are short-lived decoder scratch, not
/// long-lived values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    c: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: vec![] }
    }

    pub fn one() -> Poly {
        Poly { c: vec![1] }
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Poly {
        let mut c = vec![0; d + 1];
        c[d] = 1;
        Poly { c }
    }

    pub fn from_coeffs(c: Vec<u64>) -> Poly {
        let mut p = Poly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial at -1.
    #[inline]
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn eval(&self, f: &Field, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(f.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, f: &Field, k: u64) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&c| f.mul(c, k)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    /// Product truncated to degree below `s` (that is, modulo `z^s`).
    pub fn mul_trunc(&self, f: &Field, other: &Poly, s: usize) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; s.min(self.c.len() + other.c.len() - 1)];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 || i >= s {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if i + j >= s {
                    break;
                }
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    /// The formal derivative, with integer multiples reduced into the
    /// prime subfield.
    pub fn derivative(&self, f: &Field) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, i as u64 % f.characteristic()))
            .collect();
        Poly::from_coeffs(c)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, f: &Field, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        if self.degree() < den.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.c.clone();
        let d = den.c.len() - 1;
        let lead_inv = f.inv(den.c[d]);
        let mut quot = vec![0; rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - d] = c;
            for (j, &dj) in den.c.iter().enumerate() {
                rem[i - d + j] = f.sub(rem[i - d + j], f.mul(c, dj));
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Inverse as a power series modulo `z^s`. Requires a unit constant
    /// term.
    pub fn inv_series(&self, f: &Field, s: usize) -> Option<Poly> {
        let a0 = self.coeff(0);
        if a0 == 0 || s == 0 {
            return None;
        }
        let a0i = f.inv(a0);
        let mut b = vec![0; s];
        b[0] = a0i;
        for k in 1..s {
            let mut acc = 0;
            for i in 1..=k.min(self.c.len() - 1) {
                acc = f.add(acc, f.mul(self.coeff(i), b[k - i]));
            }
            b[k] = f.mul(f.neg(acc), a0i);
        }
        Some(Poly::from_coeffs(b))
    }
}

/// Runs the extended Euclidean algorithm on `(a, b)` and returns the first
/// remainder of degree at most `stop`, together with its cofactor `v` in
/// `r = u a + v b`.
pub fn eea_stop(f: &Field, a: &Poly, b: &Poly, stop: i64) -> (Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut v0, mut v1) = (Poly::zero(), Poly::one());
    while r1.degree() > stop {
        let (q, r) = r0.divmod(f, &r1);
        let v = v0.sub(f, &q.mul(f, &v1));
        r0 = std::mem::replace(&mut r1, r);
        v0 = std::mem::replace(&mut v1, v);
    }
    (r1, v1)
}
