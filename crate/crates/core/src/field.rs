//! Arithmetic in `F_q` for odd prime powers `q = p^ℓ`.
//!
//! Elements are stored as their index in the canonical enumeration: the
//! polynomial-basis coefficient vector `(c_0, …, c_{ℓ−1})` read as the base-`p`
//! integer `Σ c_i p^i`. The prime subfield therefore occupies indices
//! `0..p`, and iterating indices in increasing order is the lexicographic
//! order on coefficient vectors (highest degree most significant).
//!
//! Multiplication goes through discrete log/antilog tables built from a
//! primitive element; trace and the quadratic character are tabulated once.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size accepted by [`Field::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of `F_q`, identified by its canonical index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical index of the element in `0..q`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub(crate) const fn from_raw(i: u32) -> Self {
        FieldElement(i)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: enough to rebuild it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub ell: u32,
    /// Monic modulus, constant term first. Empty for prime fields.
    pub modulus: Vec<u32>,
}

/// The finite field `F_q`, `q = p^ℓ` with `p` an odd prime.
pub struct Field {
    p: u32,
    ell: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    eta: Vec<i8>,
    char_exponents: OnceLock<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("ell", &self.ell)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Built-in irreducible moduli, constant term first.
pub fn default_modulus(p: u32, ell: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, ell) {
        (3, 2) => &[1, 0, 1],
        (5, 2) => &[2, 0, 1],
        (7, 2) => &[1, 0, 1],
        (11, 2) => &[1, 0, 1],
        (13, 2) => &[6, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 3) => &[3, 3, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

/// Parses a modulus given as comma-separated coefficients, constant term first
/// (`"1,0,1"` is `t² + 1`).
pub fn parse_modulus(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad modulus coefficient {s:?}")))
        })
        .collect()
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p`, constant term first, used only while
/// building a field.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b64 = b as u64 % p as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b64 % p as u64;
            }
            b64 = b64 * b64 % p as u64;
            e >>= 1;
        }
        b = r as u32;
        b
    }

    /// Remainder of `a` modulo `f` (`f` monic or not; leading coefficient nonzero).
    pub fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p) as u64;
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                let sub = c * fi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem(&prod, f, p)
    }

    pub fn pow_poly(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn eval(f: &[u32], x: u32, p: u32) -> u32 {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = (acc * x as u64 + c as u64) % p as u64;
        }
        acc as u32
    }

    /// Irreducibility of a monic polynomial of degree `ell`: root test for
    /// `ell ≤ 3`, Ben-Or otherwise.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let ell = f.len() - 1;
        if ell <= 1 {
            return true;
        }
        if ell <= 3 {
            return (0..p).all(|x| eval(f, x, p) != 0);
        }
        let t = vec![0u32, 1];
        let mut h = t.clone();
        for _ in 1..=ell / 2 {
            h = pow_poly(&h, p as u64, f, p);
            let mut diff = h.clone();
            if diff.len() < 2 {
                diff.resize(2, 0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds `F_{p^ell}`. When `modulus` is `None` and `ell > 1`, the built-in
    /// table is consulted. The modulus is ignored for prime fields.
    pub fn new(p: u32, ell: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if p.is_multiple_of(2) {
            return Err(Error::InvalidField(format!("characteristic {p} is even")));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if ell == 0 {
            return Err(Error::InvalidField("degree ell must be at least 1".into()));
        }
        let q64 = (p as u64)
            .checked_pow(ell)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{ell} exceeds {MAX_FIELD_SIZE}")))?;
        let q = q64 as u32;

        let modulus = if ell == 1 {
            Vec::new()
        } else {
            let m = match modulus {
                Some(m) => m.to_vec(),
                None => default_modulus(p, ell).ok_or_else(|| {
                    Error::InvalidField(format!(
                        "no built-in modulus for p={p}, ell={ell}; supply one"
                    ))
                })?,
            };
            if m.len() != ell as usize + 1 {
                return Err(Error::InvalidField(format!(
                    "modulus must have {} coefficients, got {}",
                    ell + 1,
                    m.len()
                )));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidField(format!(
                    "modulus coefficients must lie in [0,{p})"
                )));
            }
            if m[ell as usize] != 1 {
                return Err(Error::InvalidField("modulus must be monic".into()));
            }
            if !poly::is_irreducible(&m, p) {
                return Err(Error::InvalidField(format!(
                    "modulus {m:?} is reducible over F_{p}"
                )));
            }
            m
        };

        let mut field = Field {
            p,
            ell,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
            eta: Vec::new(),
            char_exponents: OnceLock::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds `F_q` from `q` alone, using the built-in modulus table.
    pub fn with_order(q: u32) -> Result<Field> {
        let factors = prime_factors(q as u64);
        if factors.len() != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        let p = factors[0] as u32;
        let mut ell = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            ell += 1;
        }
        Field::new(p, ell, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let m = if spec.modulus.is_empty() { None } else { Some(spec.modulus.as_slice()) };
        Field::new(spec.p, spec.ell, m)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, ell: self.ell, modulus: self.modulus.clone() }
    }

    fn index_to_poly(&self, a: u32) -> Vec<u32> {
        let mut c = self.coeffs_of(a);
        poly::trim(&mut c);
        c
    }

    fn poly_to_index(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn coeffs_of(&self, mut a: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.ell as usize);
        for _ in 0..self.ell {
            c.push(a % self.p);
            a /= self.p;
        }
        c
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.ell == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let r = poly::mul_mod(&self.index_to_poly(a), &self.index_to_poly(b), &self.modulus, self.p);
        self.poly_to_index(&r)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        r
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..q.max(3))
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .unwrap_or(1);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp.push(x);
            log[x as usize] = i;
            x = self.slow_mul(x, generator);
        }
        debug_assert_eq!(x, 1);
        self.exp = exp;
        self.log = log;

        let trace: Vec<u32> = (0..q)
            .map(|a| {
                let mut acc = 0u32;
                let mut frob = a;
                for _ in 0..self.ell {
                    acc = self.add(FieldElement(acc), FieldElement(frob)).0;
                    frob = self.pow(FieldElement(frob), self.p as u64).0;
                }
                assert!(acc < self.p, "trace must land in the prime field");
                acc
            })
            .collect();
        self.trace = trace;

        let mut eta = vec![-1i8; q as usize];
        eta[0] = 0;
        for a in 1..q {
            let sq = self.mul(FieldElement(a), FieldElement(a));
            eta[sq.index()] = 1;
        }
        self.eta = eta;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Field size as `usize`, for indexing.
    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given canonical index.
    pub fn element(&self, index: usize) -> FieldElement {
        assert!(index < self.q as usize, "index {index} out of range for F_{}", self.q);
        FieldElement(index as u32)
    }

    /// Element with the given polynomial-basis coefficients, constant first.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.ell as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Domain(format!("{coeffs:?} is not an element of F_{}", self.q)));
        }
        Ok(FieldElement(self.poly_to_index(coeffs)))
    }

    /// Polynomial-basis coefficients of `a`, constant first, length `ell`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.coeffs_of(a.0)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// All `q` elements in canonical order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.ell == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.ell {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.ell == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.ell {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.log[a.index()] as u64 + self.log[b.index()] as u64;
        FieldElement(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let l = self.log[a.index()];
        let order = self.q - 1;
        Ok(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.index()] as u128 * e as u128;
        FieldElement(self.exp[(l % (self.q as u128 - 1)) as usize])
    }

    /// Absolute trace `Tr(a) = a + a^p + ⋯ + a^{p^{ℓ−1}}`, as a residue mod `p`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.trace[a.index()]
    }

    /// Quadratic character on `F_q^*`.
    pub fn eta(&self, a: FieldElement) -> Result<i8> {
        if a.is_zero() {
            return Err(Error::Domain("eta is defined on nonzero elements only".into()));
        }
        Ok(self.eta[a.index()])
    }

    /// `eta(−1)`, which is `+1` exactly when `q ≡ 1 (mod 4)`.
    pub fn eta_minus_one(&self) -> i8 {
        self.eta[self.neg(FieldElement::ONE).index()]
    }

    /// Dot product of two coordinate vectors.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(FieldElement::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `Tr(x·m)` for all `x, m ∈ F_q`, row-major in `x`. Computed on first use.
    pub fn char_exponents(&self) -> &[u32] {
        self.char_exponents.get_or_init(|| {
            let q = self.q as usize;
            let mut t = Vec::with_capacity(q * q);
            for x in self.elements() {
                for m in self.elements() {
                    t.push(self.trace(self.mul(x, m)));
                }
            }
            t
        })
    }
}
