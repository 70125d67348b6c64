//! Exact elements of `Q(ζ_p)`.
//!
//! A value is stored in the canonical basis `ζ^0, …, ζ^{p−2}`; the relation
//! `ζ^{p−1} = −(1 + ζ + ⋯ + ζ^{p−2})` eliminates the top power. Internally most
//! operations pass through the redundant length-`p` representation, where
//! multiplication by `ζ^k` is a cyclic shift and products are cyclic
//! convolutions, then re-canonicalize by subtracting the top coefficient.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloValue {
    p: u32,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloValue {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 3, "cyclotomic order must be an odd prime");
        CycloValue { p, coeffs: vec![BigRational::zero(); p as usize - 1] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: u32, r: BigRational) -> Self {
        let mut v = Self::zero(p);
        v.coeffs[0] = r;
        v
    }

    pub fn from_integer(p: u32, n: i64) -> Self {
        Self::from_rational(p, rat(n))
    }

    /// `ζ_p^k`.
    pub fn zeta(p: u32, k: u64) -> Self {
        let mut red = vec![BigRational::zero(); p as usize];
        red[(k % p as u64) as usize] = BigRational::one();
        Self::from_redundant(p, red)
    }

    /// Canonicalizes `Σ_{k<p} c_k ζ^k`.
    pub fn from_redundant(p: u32, mut red: Vec<BigRational>) -> Self {
        assert_eq!(red.len(), p as usize);
        let top = red.pop().expect("nonempty");
        if !top.is_zero() {
            for c in red.iter_mut() {
                *c -= &top;
            }
        }
        CycloValue { p, coeffs: red }
    }

    /// Canonicalizes `(1/denom) Σ_{k<p} c_k ζ^k` for integer numerators.
    pub fn from_int_redundant(p: u32, nums: &[i128], denom: i128) -> Self {
        assert_eq!(nums.len(), p as usize);
        assert!(denom != 0);
        let top = nums[p as usize - 1];
        let d = BigInt::from(denom);
        let coeffs = nums[..p as usize - 1]
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c) - BigInt::from(top), d.clone()))
            .collect();
        CycloValue { p, coeffs }
    }

    /// Builds a value from canonical coefficients (length `p − 1`).
    pub fn from_coeffs(p: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Contract(format!(
                "Q(ζ_{p}) needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycloValue { p, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical coefficients of `ζ^0, …, ζ^{p−2}`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn redundant(&self) -> Vec<BigRational> {
        let mut r = self.coeffs.clone();
        r.push(BigRational::zero());
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Multiplies by `ζ^k`.
    pub fn mul_zeta(&self, k: u64) -> Self {
        let p = self.p as usize;
        let shift = (k % p as u64) as usize;
        if shift == 0 {
            return self.clone();
        }
        let red = self.redundant();
        let mut out = vec![BigRational::zero(); p];
        for (j, c) in red.into_iter().enumerate() {
            out[(j + shift) % p] = c;
        }
        Self::from_redundant(self.p, out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloValue { p: self.p, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex conjugation `ζ^k ↦ ζ^{p−k}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let red = self.redundant();
        let mut out = vec![BigRational::zero(); p];
        for (j, c) in red.into_iter().enumerate() {
            out[(p - j) % p] = c;
        }
        Self::from_redundant(self.p, out)
    }

    /// `v · v̄`, the squared modulus as an element of the real subfield.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Embedding under `ζ ↦ e^{2πi/p}`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let w = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(w, 2.0 * PI * k as f64 / p)
            })
            .sum()
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing Q(ζ_{}) with Q(ζ_{})", self.p, other.p);
    }
}

impl Add for &CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.check_same(rhs);
        CycloValue {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self.check_same(rhs);
        CycloValue {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: &CycloValue) -> CycloValue {
        self.check_same(rhs);
        let p = self.p as usize;
        let mut out = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(i + j) % p] += a * b;
            }
        }
        CycloValue::from_redundant(self.p, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloValue {
            type Output = CycloValue;
            fn $m(self, rhs: CycloValue) -> CycloValue {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        -&self
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "ζ^{k}")?,
                _ => write!(f, "{mag}·ζ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer counts `Σ c_k ζ^k` accumulated during a character sum.
#[derive(Clone, Debug)]
pub struct ZetaSum {
    p: u32,
    counts: Vec<i64>,
}

impl ZetaSum {
    pub fn new(p: u32) -> Self {
        ZetaSum { p, counts: vec![0; p as usize] }
    }

    /// Adds `weight · ζ^k`.
    pub fn push(&mut self, k: u32, weight: i64) {
        self.counts[(k % self.p) as usize] += weight;
    }

    pub fn finish(&self) -> CycloValue {
        let nums: Vec<i128> = self.counts.iter().map(|&c| c as i128).collect();
        CycloValue::from_int_redundant(self.p, &nums, 1)
    }
}

impl Serialize for CycloValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u32,
            coeffs: &'a [String],
        }
        Repr { p: self.p, coeffs: &coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            p: u32,
            coeffs: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_big_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycloValue::from_coeffs(r.p, coeffs).map_err(serde::de::Error::custom)
    }
}

/// Parses `"a"` or `"a/b"` into a rational.
pub fn parse_big_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
