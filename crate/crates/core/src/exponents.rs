//! Exact exponent calculus.
//!
//! Exponents are rational functions of one formal infinitesimal `ε > 0`, so that
//! statements of the form "for all ε > 0" are carried exactly. Every value met in
//! practice has the affine-fraction form `(a + bε)/(c + dε)`; intermediate products
//! of higher degree cancel back to it after the polynomial gcd is removed.
//!
//! Order is asymptotic: `x < y` iff `y − x > 0` for all sufficiently small `ε > 0`,
//! which is comparison at `ε = 0` with ties broken by the `ε`-derivative and so on.
//!
//! A restriction estimate `R*_V(p → r) ≲ 1` is stored as the point `(1/p, 1/r)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

fn poly_neg(a: &[BigRational]) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` is nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        x.iter_mut().for_each(|c| *c /= &l);
    }
    x
}

/// An exponent as a reduced rational function of `ε`.
///
/// Canonical form: numerator and denominator are coprime integer polynomials whose
/// coefficients have no common factor, and the lowest nonzero denominator
/// coefficient is positive. Equality is identity of canonical forms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsExponent {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

impl EpsExponent {
    fn from_polys(num: Poly, den: Poly) -> Result<EpsExponent> {
        let (num, den) = (trim(num), trim(den));
        if den.is_empty() {
            return Err(Error::Domain("division by zero exponent".into()));
        }
        if num.is_empty() {
            return Ok(EpsExponent { num: Vec::new(), den: vec![BigInt::one()] });
        }
        let g = poly_gcd(&num, &den);
        let (num, _) = poly_divrem(&num, &g);
        let (den, _) = poly_divrem(&den, &g);
        let lcm = num.iter().chain(&den).fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = |p: &Poly| -> Vec<BigInt> { p.iter().map(|c| (c * &lcm).to_integer()).collect() };
        let (mut n, mut d) = (ints(&num), ints(&den));
        let content = n.iter().chain(&d).fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if lowest_int(&d).is_negative() { -BigInt::one() } else { BigInt::one() };
        let scale = content * sign;
        n.iter_mut().for_each(|c| *c /= &scale);
        d.iter_mut().for_each(|c| *c /= &scale);
        Ok(EpsExponent { num: n, den: d })
    }

    fn num_poly(&self) -> Poly {
        self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    fn den_poly(&self) -> Poly {
        self.den.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    pub fn zero() -> EpsExponent {
        EpsExponent::integer(0)
    }

    pub fn one() -> EpsExponent {
        EpsExponent::integer(1)
    }

    pub fn integer(n: i64) -> EpsExponent {
        EpsExponent::rational(n, 1)
    }

    /// `a/b`; `b ≠ 0`.
    pub fn rational(a: i64, b: i64) -> EpsExponent {
        EpsExponent::from_big(BigRational::new(a.into(), b.into()))
    }

    pub fn from_big(r: BigRational) -> EpsExponent {
        EpsExponent::from_polys(vec![r], vec![BigRational::one()]).expect("nonzero denominator")
    }

    pub fn from_ratio(r: Rational64) -> EpsExponent {
        EpsExponent::rational(*r.numer(), *r.denom())
    }

    /// The infinitesimal itself.
    pub fn eps() -> EpsExponent {
        EpsExponent { num: vec![BigInt::zero(), BigInt::one()], den: vec![BigInt::one()] }
    }

    /// `(a + bε)/(c + dε)`.
    pub fn affine(a: i64, b: i64, c: i64, d: i64) -> Result<EpsExponent> {
        let r = |x: i64| BigRational::from_integer(x.into());
        EpsExponent::from_polys(vec![r(a), r(b)], vec![r(c), r(d)])
    }

    /// Integer coefficients `(numerator, denominator)` in increasing powers of `ε`.
    pub fn coefficients(&self) -> (&[BigInt], &[BigInt]) {
        (&self.num, &self.den)
    }

    /// `[a, b, c, d]` with value `(a + bε)/(c + dε)`, when both parts have degree ≤ 1.
    pub fn affine_parts(&self) -> Option<[BigInt; 4]> {
        if self.num.len() > 2 || self.den.len() > 2 {
            return None;
        }
        let at = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        Some([at(&self.num, 0), at(&self.num, 1), at(&self.den, 0), at(&self.den, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// True when the value does not depend on `ε`.
    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1 && self.den.len() == 1
    }

    pub fn add(&self, o: &EpsExponent) -> EpsExponent {
        let n = poly_add(&poly_mul(&self.num_poly(), &o.den_poly()), &poly_mul(&o.num_poly(), &self.den_poly()));
        EpsExponent::from_polys(n, poly_mul(&self.den_poly(), &o.den_poly())).expect("nonzero denominator")
    }

    pub fn neg(&self) -> EpsExponent {
        EpsExponent::from_polys(poly_neg(&self.num_poly()), self.den_poly()).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &EpsExponent) -> EpsExponent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &EpsExponent) -> EpsExponent {
        EpsExponent::from_polys(poly_mul(&self.num_poly(), &o.num_poly()), poly_mul(&self.den_poly(), &o.den_poly()))
            .expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<EpsExponent> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        EpsExponent::from_polys(self.den_poly(), self.num_poly())
    }

    pub fn div(&self, o: &EpsExponent) -> Result<EpsExponent> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn scale(&self, a: i64, b: i64) -> EpsExponent {
        self.mul(&EpsExponent::rational(a, b))
    }

    /// Value at `ε = 0`; requires a nonzero constant denominator term.
    pub fn at_zero(&self) -> Result<BigRational> {
        let c = self.den.first().cloned().unwrap_or_default();
        if c.is_zero() {
            return Err(Error::Domain(format!("{self} has a pole at ε = 0")));
        }
        Ok(BigRational::new(self.num.first().cloned().unwrap_or_default(), c))
    }

    pub fn to_f64_at_zero(&self) -> Result<f64> {
        Ok(self.at_zero()?.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign for all sufficiently small `ε > 0`.
    pub fn signum(&self) -> Ordering {
        match lowest_int(&self.num).sign() {
            num_bigint::Sign::NoSign => Ordering::Equal,
            s => {
                let pos = (s == num_bigint::Sign::Plus) == lowest_int(&self.den).is_positive();
                if pos {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn cmp_asym(&self, o: &EpsExponent) -> Ordering {
        self.sub(o).signum()
    }

    pub fn ge(&self, o: &EpsExponent) -> bool {
        self.cmp_asym(o) != Ordering::Less
    }

    pub fn le(&self, o: &EpsExponent) -> bool {
        self.cmp_asym(o) != Ordering::Greater
    }
}

fn lowest_int(p: &[BigInt]) -> BigInt {
    p.iter().find(|c| !c.is_zero()).cloned().unwrap_or_default()
}

fn fmt_poly(p: &[BigInt]) -> String {
    let mut s = String::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push(if c.is_negative() { '-' } else { '+' });
        }
        match i {
            0 => s.push_str(&mag.to_string()),
            _ => {
                if !mag.is_one() {
                    s.push_str(&format!("{mag}*"));
                }
                s.push_str("eps");
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn is_single_term(p: &[BigInt]) -> bool {
    p.iter().filter(|c| !c.is_zero()).count() <= 1
}

impl fmt::Display for EpsExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_poly(&self.num);
        if self.den.len() == 1 && self.den[0].is_one() {
            return f.write_str(&n);
        }
        let d = fmt_poly(&self.den);
        let wrap = |s: String, single: bool| if single { s } else { format!("({s})") };
        write!(f, "{}/{}", wrap(n, is_single_term(&self.num)), wrap(d, is_single_term(&self.den)))
    }
}

impl fmt::Debug for EpsExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsExponent({self})")
    }
}

/// Recursive-descent parser for `+ - * /`, parentheses, integers, `eps` and `ε`.
struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::Parse(format!("bad exponent expression {:?}", String::from_utf8_lossy(self.s)))
    }

    fn skip(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<EpsExponent> {
        let mut v = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let t = self.term()?;
            v = if c == b'+' { v.add(&t) } else { v.sub(&t) };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<EpsExponent> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(c @ (b'*' | b'/')) => {
                    self.i += 1;
                    let t = self.factor()?;
                    v = if c == b'*' { v.mul(&t) } else { v.div(&t)? };
                }
                // Juxtaposition, as in `30eps` or `2(1+eps)`.
                Some(c) if c == b'(' || c == b'e' || c.is_ascii_digit() || c >= 0x80 => {
                    v = v.mul(&self.factor()?);
                }
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<EpsExponent> {
        match self.peek() {
            Some(b'-') => {
                self.i += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.i]).map_err(|_| self.err())?;
                let n: BigInt = digits.parse().map_err(|_| self.err())?;
                Ok(EpsExponent::from_big(BigRational::from_integer(n)))
            }
            _ => {
                let rest = &self.s[self.i..];
                for tok in ["eps".as_bytes(), "ε".as_bytes()] {
                    if rest.starts_with(tok) {
                        self.i += tok.len();
                        return Ok(EpsExponent::eps());
                    }
                }
                Err(self.err())
            }
        }
    }
}

impl FromStr for EpsExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<EpsExponent> {
        let mut p = Parser { s: s.as_bytes(), i: 0 };
        let v = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err());
        }
        Ok(v)
    }
}

impl Serialize for EpsExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EpsExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses an exponent `p ∈ [1, ∞]` and returns `1/p`; `inf` maps to zero.
pub fn parse_inverse(s: &str) -> Result<EpsExponent> {
    if matches!(s.trim(), "inf" | "infinity" | "∞") {
        return Ok(EpsExponent::zero());
    }
    s.parse::<EpsExponent>()?.recip()
}

/// The point `(1/p, 1/r)` of an `L^p → L^r` estimate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentPair {
    pub inv_p: EpsExponent,
    pub inv_r: EpsExponent,
}

fn show_exponent(inv: &EpsExponent) -> String {
    if inv.is_zero() {
        "inf".into()
    } else {
        inv.recip().expect("nonzero").to_string()
    }
}

impl ExponentPair {
    pub fn from_inverses(inv_p: EpsExponent, inv_r: EpsExponent) -> ExponentPair {
        ExponentPair { inv_p, inv_r }
    }

    /// From finite `p` and `r`.
    pub fn new(p: &EpsExponent, r: &EpsExponent) -> Result<ExponentPair> {
        Ok(ExponentPair { inv_p: p.recip()?, inv_r: r.recip()? })
    }

    /// From strings such as `"2"`, `"28/9"`, `"8/3+eps"` or `"inf"`.
    pub fn parse(p: &str, r: &str) -> Result<ExponentPair> {
        Ok(ExponentPair { inv_p: parse_inverse(p)?, inv_r: parse_inverse(r)? })
    }

    /// `p`, or `None` for `p = ∞`.
    pub fn p(&self) -> Option<EpsExponent> {
        self.inv_p.recip().ok()
    }

    pub fn r(&self) -> Option<EpsExponent> {
        self.inv_r.recip().ok()
    }

    pub fn p_string(&self) -> String {
        show_exponent(&self.inv_p)
    }

    pub fn r_string(&self) -> String {
        show_exponent(&self.inv_r)
    }

    /// `(p, r) ↦ (r′, p′)`, the exponents of the dual restriction estimate.
    pub fn dual(&self) -> ExponentPair {
        let one = EpsExponent::one();
        ExponentPair { inv_p: one.sub(&self.inv_r), inv_r: one.sub(&self.inv_p) }
    }

    /// Both coordinates lie in `[0, 1]`.
    pub fn is_valid(&self) -> bool {
        let (z, o) = (EpsExponent::zero(), EpsExponent::one());
        [&self.inv_p, &self.inv_r].iter().all(|c| c.ge(&z) && c.le(&o))
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -> {})", self.p_string(), self.r_string())
    }
}

/// `2 + 4(α − s)/k`, the `r` threshold of the Stein–Tomas argument for a variety
/// of size `q^s` in `F_q^α` whose measure decays like `q^{−k/2}` off the origin.
pub fn stein_tomas_rule(alpha: Rational64, s: Rational64, k: Rational64) -> Result<EpsExponent> {
    if k <= Rational64::zero() {
        return Err(Error::Domain(format!("decay exponent {k} must be positive")));
    }
    if s >= alpha {
        return Err(Error::Domain(format!("size exponent {s} must be below the dimension {alpha}")));
    }
    let r = Rational64::from_integer(2) + (alpha - s) * 4 / k;
    Ok(EpsExponent::from_ratio(r))
}

/// The flat-disk estimate `(2r(d−1)/(rd−r−2) → r)` obtained from a paraboloid
/// estimate `R*_P(2 → r)` in `F_q^d`; requires `r ≥ 2d/(d−1)`.
pub fn flat_from_paraboloid(d: u32, r: &EpsExponent) -> Result<ExponentPair> {
    if d < 2 {
        return Err(Error::Domain("paraboloid dimension must be at least 2".into()));
    }
    let dm1 = EpsExponent::integer(d as i64 - 1);
    let threshold = EpsExponent::rational(2 * d as i64, d as i64 - 1);
    if r.cmp_asym(&threshold) == Ordering::Less {
        return Err(Error::Domain(format!("r = {r} is below 2d/(d−1) = {threshold}")));
    }
    let den = r.mul(&dm1).sub(&EpsExponent::integer(2));
    if den.at_zero()?.is_zero() {
        return Err(Error::Domain("rd − r − 2 vanishes at ε = 0".into()));
    }
    let p = r.mul(&dm1).scale(2, 1).div(&den)?;
    ExponentPair::new(&p, r)
}

/// Riesz–Thorin: the point `(1−θ)·e0 + θ·e1`; requires `θ ∈ [0, 1]`.
pub fn interpolate(e0: &ExponentPair, e1: &ExponentPair, theta: &EpsExponent) -> Result<ExponentPair> {
    if theta.signum() == Ordering::Less || theta.cmp_asym(&EpsExponent::one()) == Ordering::Greater {
        return Err(Error::Domain(format!("interpolation parameter {theta} is outside [0, 1]")));
    }
    let w0 = EpsExponent::one().sub(theta);
    Ok(ExponentPair {
        inv_p: w0.mul(&e0.inv_p).add(&theta.mul(&e1.inv_p)),
        inv_r: w0.mul(&e0.inv_r).add(&theta.mul(&e1.inv_r)),
    })
}

/// A restriction estimate at `known` implies one at `query` when
/// `p_query ≥ p_known` and `r_query ≥ r_known`.
pub fn nesting_dominates(known: &ExponentPair, query: &ExponentPair) -> bool {
    query.inv_p.le(&known.inv_p) && query.inv_r.le(&known.inv_r)
}

/// `K(p → r)` follows from `K(d → d)` and `K(1 → ∞)` by interpolation and nesting.
///
/// Points on the segment from `(1/d, 1/d)` to `(1, 0)` are interpolants. Nesting for
/// the Kakeya operator runs opposite to restriction nesting: the input norm is over
/// counting measure and the output norm over normalized measure, so a bound at
/// `(p, r)` implies bounds for every smaller `p` and smaller `r`.
pub fn kakeya_derivable(pair: &ExponentPair, d: u32) -> bool {
    if d < 2 || !pair.is_valid() {
        return false;
    }
    let (x, y) = (&pair.inv_p, &pair.inv_r);
    let one = EpsExponent::one();
    let dm1 = EpsExponent::integer(d as i64 - 1);
    // Segment line y = (1 − x)/(d − 1) for x ∈ [1/d, 1].
    let x_cap = if x.cmp_asym(&one) == Ordering::Greater { one.clone() } else { x.clone() };
    let y_on_line = one.sub(&x_cap).div(&dm1).expect("d ≥ 2");
    x.ge(&EpsExponent::rational(1, d as i64)) && y.ge(&y_on_line)
}

/// Necessary conditions for `R*_F(p → r) ≲ 1` on the flat disk in `F_q^n`:
/// `r ≥ 2n/(n−2)` and `r ≥ p(n+2)/((p−1)(n−2))`.
pub fn necessary_ok(pair: &ExponentPair, n: u32) -> bool {
    if n < 4 {
        return false;
    }
    let n = n as i64;
    let (x, y) = (&pair.inv_p, &pair.inv_r);
    let first = y.le(&EpsExponent::rational(n - 2, 2 * n));
    // 1/r ≤ (1 − 1/p)(n−2)/(n+2)
    let bound = EpsExponent::one().sub(x).scale(n - 2, n + 2);
    first && y.le(&bound)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Inside,
    Boundary,
    Outside,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Inside => "inside",
            Region::Boundary => "boundary",
            Region::Outside => "outside",
        })
    }
}

/// Position of `(1/p, 1/r)` relative to the convex hull of `(0,0)`, `(1,0)`,
/// `(c,c)` and `(0,c)` with `c = (n−2)/(2n)`.
pub fn conjecture_region(pair: &ExponentPair, n: u32) -> Region {
    let n = n as i64;
    let c = EpsExponent::rational(n - 2, 2 * n);
    let (z, o) = (EpsExponent::zero(), EpsExponent::one());
    // Counter-clockwise.
    let hull = [(z.clone(), z.clone()), (o, z.clone()), (c.clone(), c.clone()), (z, c)];
    let (x, y) = (&pair.inv_p, &pair.inv_r);
    let mut on_edge = false;
    for i in 0..hull.len() {
        let (a, b) = (&hull[i], &hull[(i + 1) % hull.len()]);
        let cross = b.0.sub(&a.0).mul(&y.sub(&a.1)).sub(&b.1.sub(&a.1).mul(&x.sub(&a.0)));
        match cross.signum() {
            Ordering::Less => return Region::Outside,
            Ordering::Equal => on_edge = true,
            Ordering::Greater => {}
        }
    }
    if on_edge {
        Region::Boundary
    } else {
        Region::Inside
    }
}

/// Admissible dimensions `d ∈ [min, max]` with `d ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DConstraint {
    pub min: u32,
    pub max: Option<u32>,
    pub modulus: u32,
    pub residue: u32,
}

impl DConstraint {
    pub fn exactly(d: u32) -> DConstraint {
        DConstraint { min: d, max: Some(d), modulus: 1, residue: 0 }
    }

    pub fn at_least(min: u32) -> DConstraint {
        DConstraint { min, max: None, modulus: 1, residue: 0 }
    }

    pub fn congruent(min: u32, modulus: u32, residue: u32) -> DConstraint {
        DConstraint { min, max: None, modulus, residue: residue % modulus }
    }

    pub fn admits(&self, d: u32) -> bool {
        d >= self.min && self.max.is_none_or(|m| d <= m) && d % self.modulus == self.residue
    }

    /// Smallest admissible `d`.
    pub fn representative(&self) -> Option<u32> {
        let start = self.min;
        let end = self.max.unwrap_or(start + self.modulus);
        (start..=end).find(|&d| self.admits(d))
    }

    /// Admissible `d` up to `limit`.
    pub fn instances(&self, limit: u32) -> Vec<u32> {
        (self.min..=limit).filter(|&d| self.admits(d)).collect()
    }

    pub fn conjoin(&self, o: &DConstraint) -> Result<DConstraint> {
        let modulus = self.modulus.lcm(&o.modulus);
        let residue = (0..modulus).find(|&r| r % self.modulus == self.residue && r % o.modulus == o.residue);
        let max = match (self.max, o.max) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let out = residue.map(|residue| DConstraint { min: self.min.max(o.min), max, modulus, residue });
        out.filter(|c| c.representative().is_some())
            .ok_or_else(|| Error::Contract(format!("dimension constraints {self} and {o} are incompatible")))
    }
}

impl fmt::Display for DConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max == Some(self.min) {
            return write!(f, "d={}", self.min);
        }
        write!(f, "d>={}", self.min)?;
        if let Some(m) = self.max {
            write!(f, ",d<={m}")?;
        }
        match (self.modulus, self.residue) {
            (1, _) => Ok(()),
            (2, 0) => f.write_str(" even"),
            (2, 1) => f.write_str(" odd"),
            (m, r) => write!(f, ",d={r} mod {m}"),
        }
    }
}

/// Conditions on `d` and `q` under which an estimate holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypotheses {
    pub d: DConstraint,
    pub q_mod4: Option<u8>,
    pub q_prime: bool,
}

impl Hypotheses {
    pub fn new(d: DConstraint) -> Hypotheses {
        Hypotheses { d, q_mod4: None, q_prime: false }
    }

    pub fn q_mod4(mut self, r: u8) -> Hypotheses {
        self.q_mod4 = Some(r);
        self
    }

    pub fn q_prime(mut self) -> Hypotheses {
        self.q_prime = true;
        self
    }

    /// Both sets of conditions at once; never weaker than either.
    pub fn conjoin(&self, o: &Hypotheses) -> Result<Hypotheses> {
        let q_mod4 = match (self.q_mod4, o.q_mod4) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Contract(format!("q ≡ {a} and q ≡ {b} (mod 4) are incompatible")))
            }
            (a, b) => a.or(b),
        };
        Ok(Hypotheses { d: self.d.conjoin(&o.d)?, q_mod4, q_prime: self.q_prime || o.q_prime })
    }

    /// Hypotheses on `q`, as display tags.
    pub fn q_tags(&self) -> Vec<String> {
        let mut v = Vec::new();
        if let Some(r) = self.q_mod4 {
            v.push(format!("q={r} mod 4"));
        }
        if self.q_prime {
            v.push("q prime".into());
        }
        v
    }

    /// Whether a concrete `(q, d)` satisfies the hypotheses; `q_is_prime` is supplied by the caller.
    pub fn admits(&self, q: u32, d: u32, q_is_prime: bool) -> bool {
        self.d.admits(d) && self.q_mod4.is_none_or(|r| q % 4 == r as u32) && (!self.q_prime || q_is_prime)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateVariety {
    FlatDisk,
    Paraboloid,
    Kakeya,
}

impl fmt::Display for EstimateVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateVariety::FlatDisk => "flat_disk",
            EstimateVariety::Paraboloid => "paraboloid",
            EstimateVariety::Kakeya => "kakeya",
        })
    }
}

/// How an estimate was obtained; replaying the chain recomputes the pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    /// Taken as known.
    Axiom { source: String },
    /// `R*_V(2 → r)` from the Stein–Tomas rule.
    SteinTomas { alpha: String, s: String, k: String },
    /// The flat-disk consequence of a paraboloid estimate in the same `d`.
    FlatFromParaboloid { from: Box<Estimate> },
    /// Convex combination of two estimates.
    Interpolate { e0: Box<Estimate>, e1: Box<Estimate>, theta: EpsExponent },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub id: String,
    pub variety: EstimateVariety,
    /// The dimension the pair is evaluated at; the smallest admissible one for families.
    pub d: u32,
    pub hypotheses: Hypotheses,
    pub pair: ExponentPair,
    pub provenance: Provenance,
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let e: EpsExponent = s.parse()?;
    if !e.is_constant() {
        return Err(Error::Parse(format!("{s} is not a rational constant")));
    }
    let v = e.at_zero()?;
    match (v.numer().to_i64(), v.denom().to_i64()) {
        (Some(a), Some(b)) => Ok(Rational64::new(a, b)),
        _ => Err(Error::Overflow(format!("{s} does not fit in 64-bit rationals"))),
    }
}

impl Estimate {
    pub fn axiom(id: &str, variety: EstimateVariety, hyp: Hypotheses, pair: ExponentPair, source: &str) -> Result<Estimate> {
        let d = hyp.d.representative().ok_or_else(|| Error::Contract(format!("{id}: no admissible d")))?;
        Ok(Estimate { id: id.into(), variety, d, hypotheses: hyp, pair, provenance: Provenance::Axiom { source: source.into() } })
    }

    pub fn stein_tomas(id: &str, variety: EstimateVariety, hyp: Hypotheses, alpha: Rational64, s: Rational64, k: Rational64) -> Result<Estimate> {
        let d = hyp.d.representative().ok_or_else(|| Error::Contract(format!("{id}: no admissible d")))?;
        let r = stein_tomas_rule(alpha, s, k)?;
        Ok(Estimate {
            id: id.into(),
            variety,
            d,
            hypotheses: hyp,
            pair: ExponentPair::new(&EpsExponent::integer(2), &r)?,
            provenance: Provenance::SteinTomas { alpha: alpha.to_string(), s: s.to_string(), k: k.to_string() },
        })
    }

    pub fn flat_from(id: &str, from: &Estimate) -> Result<Estimate> {
        if from.variety != EstimateVariety::Paraboloid || from.pair.inv_p != EpsExponent::rational(1, 2) {
            return Err(Error::Contract(format!("{}: expected a paraboloid L²-estimate", from.id)));
        }
        let r = from.pair.r().ok_or_else(|| Error::Domain("r = ∞ carries no flat-disk information".into()))?;
        Ok(Estimate {
            id: id.into(),
            variety: EstimateVariety::FlatDisk,
            d: from.d,
            hypotheses: from.hypotheses.clone(),
            pair: flat_from_paraboloid(from.d, &r)?,
            provenance: Provenance::FlatFromParaboloid { from: Box::new(from.clone()) },
        })
    }

    pub fn interpolated(id: &str, e0: &Estimate, e1: &Estimate, theta: &EpsExponent) -> Result<Estimate> {
        if e0.variety != e1.variety || e0.d != e1.d {
            return Err(Error::Contract(format!("cannot interpolate {} with {}", e0.id, e1.id)));
        }
        Ok(Estimate {
            id: id.into(),
            variety: e0.variety,
            d: e0.d,
            hypotheses: e0.hypotheses.conjoin(&e1.hypotheses)?,
            pair: interpolate(&e0.pair, &e1.pair, theta)?,
            provenance: Provenance::Interpolate { e0: Box::new(e0.clone()), e1: Box::new(e1.clone()), theta: theta.clone() },
        })
    }

    /// Recomputes the estimate from its provenance chain.
    pub fn replay(&self) -> Result<Estimate> {
        match &self.provenance {
            Provenance::Axiom { .. } => Ok(self.clone()),
            Provenance::SteinTomas { alpha, s, k } => Estimate::stein_tomas(
                &self.id,
                self.variety,
                self.hypotheses.clone(),
                parse_rational(alpha)?,
                parse_rational(s)?,
                parse_rational(k)?,
            ),
            Provenance::FlatFromParaboloid { from } => Estimate::flat_from(&self.id, &from.replay()?),
            Provenance::Interpolate { e0, e1, theta } => Estimate::interpolated(&self.id, &e0.replay()?, &e1.replay()?, theta),
        }
    }

    /// One line per step, from the axioms up to this estimate.
    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.trace_into(&mut out);
        out
    }

    fn trace_into(&self, out: &mut Vec<String>) {
        let head = format!("{} {} d={} {}", self.id, self.variety, self.d, self.pair);
        match &self.provenance {
            Provenance::Axiom { source } => out.push(format!("{head}: axiom ({source})")),
            Provenance::SteinTomas { alpha, s, k } => {
                out.push(format!("{head}: stein_tomas(alpha={alpha}, s={s}, k={k})"))
            }
            Provenance::FlatFromParaboloid { from } => {
                from.trace_into(out);
                out.push(format!("{head}: flat_from_paraboloid({})", from.id));
            }
            Provenance::Interpolate { e0, e1, theta } => {
                e0.trace_into(out);
                e1.trace_into(out);
                out.push(format!("{head}: interpolate({}, {}, theta={theta})", e0.id, e1.id));
            }
        }
    }
}

/// Expected `(p, r)` as a function of `d`.
type Family = fn(i64) -> (EpsExponent, EpsExponent);

struct Axiom {
    id: &'static str,
    hyp: fn() -> Hypotheses,
    /// `None`: the axiom is the Stein–Tomas exponent `(2d+2)/(d−1)`.
    r: Option<fn(i64) -> EpsExponent>,
    source: &'static str,
    expected: Family,
    family: &'static str,
}

fn q(a: i64, b: i64) -> EpsExponent {
    EpsExponent::rational(a, b)
}

fn aff(a: i64, b: i64, c: i64, d: i64) -> EpsExponent {
    EpsExponent::affine(a, b, c, d).expect("nonzero denominator")
}

fn axioms() -> Vec<Axiom> {
    fn even(d: u32) -> Hypotheses {
        Hypotheses::new(DConstraint::exactly(d))
    }
    vec![
        Axiom {
            id: "d2",
            hyp: || even(2),
            r: Some(|_| q(4, 1)),
            source: "paraboloid L2 -> 4, d=2",
            expected: |_| (q(4, 1), q(4, 1)),
            family: "(4 -> 4)",
        },
        Axiom {
            id: "d4",
            hyp: || even(4),
            r: Some(|_| q(28, 9)),
            source: "paraboloid L2 -> 28/9, d=4",
            expected: |_| (q(28, 11), q(28, 9)),
            family: "(28/11 -> 28/9)",
        },
        Axiom {
            id: "d4_q_prime",
            hyp: || even(4).q_prime(),
            r: Some(|_| q(3, 1)),
            source: "paraboloid L2 -> 3, d=4, q prime",
            expected: |_| (q(18, 7), q(3, 1)),
            family: "(18/7 -> 3)",
        },
        Axiom {
            id: "d6",
            hyp: || even(6),
            r: Some(|_| aff(8, 3, 3, 0)),
            source: "paraboloid L2 -> 8/3+eps, d=6, all eps>0",
            expected: |_| (aff(80, 30, 34, 15), aff(8, 3, 3, 0)),
            family: "((80+30eps)/(34+15eps) -> 8/3+eps)",
        },
        Axiom {
            id: "even_d_ge8",
            hyp: || Hypotheses::new(DConstraint::congruent(8, 2, 0)),
            r: Some(|d| q(2 * d + 4, d)),
            source: "paraboloid L2 -> (2d+4)/d, d>=8 even",
            expected: |d| (q(2 * d * d + 2 * d - 4, d * d - 2), q(2 * d + 4, d)),
            family: "((2d^2+2d-4)/(d^2-2) -> (2d+4)/d)",
        },
        Axiom {
            id: "d3_q3",
            hyp: || Hypotheses::new(DConstraint::exactly(3)).q_mod4(3),
            r: Some(|_| aff(18, -5, 5, 0)),
            source: "paraboloid L2 -> 18/5-eps, d=3, q=3 mod 4, some eps>0",
            expected: |_| (aff(36, -10, 13, -5), aff(18, -5, 5, 0)),
            family: "((36-10eps)/(13-5eps) -> 18/5-eps)",
        },
        Axiom {
            id: "d3_q3_prime",
            hyp: || Hypotheses::new(DConstraint::exactly(3)).q_mod4(3).q_prime(),
            r: Some(|_| aff(188, 53, 53, 0)),
            source: "paraboloid L2 -> 188/53+eps, d=3, q=3 mod 4 prime, all eps>0",
            expected: |_| (aff(376, 106, 135, 53), aff(188, 53, 53, 0)),
            family: "((376+106eps)/(135+53eps) -> 188/53+eps)",
        },
        Axiom {
            id: "odd_q1",
            hyp: || Hypotheses::new(DConstraint::congruent(3, 2, 1)).q_mod4(1),
            r: None,
            source: "Stein-Tomas, d>=3 odd, q=1 mod 4",
            expected: |d| (q(2 * d + 2, d), q(2 * d + 2, d - 1)),
            family: "((2d+2)/d -> (2d+2)/(d-1))",
        },
        Axiom {
            id: "d_1mod4_q3",
            hyp: || Hypotheses::new(DConstraint::congruent(5, 4, 1)).q_mod4(3),
            r: None,
            source: "Stein-Tomas, d=4l+1 (l>=1), q=3 mod 4",
            expected: |d| (q(2 * d + 2, d), q(2 * d + 2, d - 1)),
            family: "((2d+2)/d -> (2d+2)/(d-1))",
        },
        Axiom {
            id: "d_3mod4_q3",
            hyp: || Hypotheses::new(DConstraint::congruent(7, 4, 3)).q_mod4(3),
            r: Some(|d| q(2 * d + 4, d)),
            source: "paraboloid L2 -> (2d+4)/d, d=4l+3 (l>=1), q=3 mod 4",
            expected: |d| (q(2 * d * d + 2 * d - 4, d * d - 2), q(2 * d + 4, d)),
            family: "((2d^2+2d-4)/(d^2-2) -> (2d+4)/d)",
        },
    ]
}

fn paraboloid_axiom(a: &Axiom, d: u32) -> Result<Estimate> {
    let mut hyp = (a.hyp)();
    if !hyp.d.admits(d) {
        return Err(Error::Domain(format!("{}: d={d} is not admissible", a.id)));
    }
    let fam = hyp.d.clone();
    hyp.d = DConstraint::exactly(d);
    let id = format!("paraboloid_{}", a.id);
    let mut e = match a.r {
        Some(r) => Estimate::axiom(&id, EstimateVariety::Paraboloid, hyp, ExponentPair::new(&q(2, 1), &r(d as i64))?, a.source)?,
        None => {
            let di = d as i64;
            let sd = Rational64::from_integer(di - 1);
            Estimate::stein_tomas(&id, EstimateVariety::Paraboloid, hyp, Rational64::from_integer(di), sd, sd)?
        }
    };
    e.hypotheses.d = fam;
    Ok(e)
}

/// The flat-disk estimate of each paraboloid axiom, instantiated at `d`.
fn flat_instance(a: &Axiom, d: u32) -> Result<(Estimate, ExponentPair)> {
    let p = paraboloid_axiom(a, d)?;
    let e = Estimate::flat_from(&format!("flat_{}", a.id), &p)?;
    let (ep, er) = (a.expected)(d as i64);
    Ok((e, ExponentPair::new(&ep, &er)?))
}

/// The sharp `L² → L^{(2d+2)/(d−1)}` flat-disk estimate, taken as known.
pub fn flat_sharp_l2(d: u32) -> Result<Estimate> {
    let mut e = Estimate::axiom(
        "flat_sharp_l2",
        EstimateVariety::FlatDisk,
        Hypotheses::new(DConstraint::exactly(d)),
        ExponentPair::new(&q(2, 1), &q(2 * d as i64 + 2, d as i64 - 1))?,
        "sharp flat-disk L2 -> (2n+4)/(n-2)",
    )?;
    e.hypotheses.d = DConstraint::at_least(2);
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub id: String,
    pub variety: EstimateVariety,
    pub d_constraint: String,
    pub d: u32,
    pub hypotheses: Vec<String>,
    pub p: String,
    pub r: String,
    /// Expected pair as a family in `d`, for display.
    pub family: String,
    pub expected_p: String,
    pub expected_r: String,
    /// Derived pair equals the expected one at every admissible `d` up to the check limit.
    pub family_checked_up_to: u32,
    pub necessary_ok: Option<bool>,
    pub conjecture_region: Option<Region>,
    pub replay_ok: bool,
    pub provenance: Vec<String>,
    pub pass: bool,
}

impl LedgerRow {
    fn from_estimate(e: &Estimate, expected: &ExponentPair, family: &str, family_ok: bool, limit: u32) -> LedgerRow {
        let flat = e.variety == EstimateVariety::FlatDisk;
        let n = 2 * e.d;
        let necessary = flat.then(|| necessary_ok(&e.pair, n));
        let region = flat.then(|| conjecture_region(&e.pair, n));
        let replay_ok = e.replay().is_ok_and(|r| r == *e);
        let pass = e.pair == *expected
            && family_ok
            && replay_ok
            && necessary.unwrap_or(true)
            && region.is_none_or(|r| r != Region::Outside);
        LedgerRow {
            id: e.id.clone(),
            variety: e.variety,
            d_constraint: e.hypotheses.d.to_string(),
            d: e.d,
            hypotheses: e.hypotheses.q_tags(),
            p: e.pair.p_string(),
            r: e.pair.r_string(),
            family: family.into(),
            expected_p: expected.p_string(),
            expected_r: expected.r_string(),
            family_checked_up_to: limit,
            necessary_ok: necessary,
            conjecture_region: region,
            replay_ok,
            provenance: e.trace(),
            pass,
        }
    }
}

/// The ledger, with an overall verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub rows: Vec<LedgerRow>,
    pub pass: bool,
}

/// Column order of [`Ledger::to_csv`].
pub const LEDGER_COLUMNS: [&str; 13] = [
    "id",
    "variety",
    "d_constraint",
    "d",
    "hypotheses",
    "p",
    "r",
    "expected_p",
    "expected_r",
    "necessary_ok",
    "conjecture_region",
    "provenance",
    "pass",
];

impl Ledger {
    pub fn failures(&self) -> Vec<&str> {
        self.rows.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect()
    }

    /// One row per estimate; list-valued cells are joined with `"; "`.
    pub fn to_csv(&self) -> Result<String> {
        let err = |e: csv::Error| Error::Contract(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(LEDGER_COLUMNS).map_err(err)?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.id.clone(),
                r.variety.to_string(),
                r.d_constraint.clone(),
                r.d.to_string(),
                r.hypotheses.join("; "),
                r.p.clone(),
                r.r.clone(),
                r.expected_p.clone(),
                r.expected_r.clone(),
                opt(r.necessary_ok.map(|b| b.to_string())),
                opt(r.conjecture_region.map(|x| x.to_string())),
                r.provenance.join("; "),
                r.pass.to_string(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Contract(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Contract(format!("csv: {e}")))
    }
}

/// Largest `d` at which family rows are compared with their closed forms.
///
/// Each family identity, cross-multiplied, is a polynomial identity in `d` of degree
/// at most four, so agreement at five or more admissible `d` proves it for all `d`.
pub const FAMILY_CHECK_LIMIT: u32 = 64;

fn family_ok(dc: &DConstraint, check: impl Fn(u32) -> Result<bool>) -> bool {
    let instances = dc.instances(FAMILY_CHECK_LIMIT);
    let complete = dc.max.is_some() || instances.len() >= 5;
    complete && instances.iter().all(|&d| check(d).unwrap_or(false))
}

/// Derives the flat-disk ledger from the paraboloid axioms, followed by the
/// Stein–Tomas comparison rows and the interpolation example.
pub fn derive_ledger() -> Result<Ledger> {
    let mut rows = Vec::new();
    for a in axioms() {
        let dc = (a.hyp)().d;
        let d0 = dc.representative().expect("admissible d");
        let (e, expected) = flat_instance(&a, d0)?;
        let instances = dc.instances(FAMILY_CHECK_LIMIT);
        let ok = family_ok(&dc, |d| {
            let (e, x) = flat_instance(&a, d)?;
            Ok(e.pair == x && necessary_ok(&e.pair, 2 * d) && conjecture_region(&e.pair, 2 * d) != Region::Outside)
        });
        let limit = *instances.last().unwrap_or(&d0);
        rows.push(LedgerRow::from_estimate(&e, &expected, a.family, ok, limit));
    }

    // Stein–Tomas rows: paraboloid in F_q^d, and the flat disk in F_q^n with n = 2d.
    let st_par = |d: u32| {
        let di = d as i64;
        let r = Rational64::from_integer(di - 1);
        Estimate::stein_tomas("stein_tomas_paraboloid", EstimateVariety::Paraboloid, Hypotheses::new(DConstraint::exactly(d)), Rational64::from_integer(di), r, r)
    };
    let st_flat = |d: u32| {
        let n = 2 * d as i64;
        Estimate::stein_tomas(
            "stein_tomas_flat_disk",
            EstimateVariety::FlatDisk,
            Hypotheses::new(DConstraint::exactly(d)),
            Rational64::from_integer(n),
            Rational64::from_integer(n - 2),
            Rational64::new(n - 2, 2),
        )
    };
    let st_par_expected = |d: u32| ExponentPair::new(&q(2, 1), &q(2 * d as i64 + 2, d as i64 - 1));
    let st_flat_expected = |d: u32| {
        let n = 2 * d as i64;
        ExponentPair::new(&q(2, 1), &q(2 * n + 12, n - 2))
    };
    let all_d = DConstraint::at_least(2);
    let limit = *all_d.instances(FAMILY_CHECK_LIMIT).last().expect("nonempty");
    let ok_par = family_ok(&all_d, |d| Ok(st_par(d)?.pair == st_par_expected(d)?));
    let mut e = st_par(2)?;
    e.hypotheses.d = DConstraint::at_least(2);
    rows.push(LedgerRow::from_estimate(&e, &st_par_expected(2)?, "(2 -> (2d+2)/(d-1))", ok_par, limit));
    let ok_flat = family_ok(&all_d, |d| {
        let e = st_flat(d)?;
        Ok(e.pair == st_flat_expected(d)? && necessary_ok(&e.pair, 2 * d) && conjecture_region(&e.pair, 2 * d) != Region::Outside)
    });
    let mut e = st_flat(2)?;
    e.hypotheses.d = DConstraint::at_least(2);
    rows.push(LedgerRow::from_estimate(&e, &st_flat_expected(2)?, "(2 -> (2n+12)/(n-2))", ok_flat, limit));

    // Interpolating the d = 3, q ≡ 3 (mod 4) estimate with the sharp L² estimate.
    let base = axioms().into_iter().find(|a| a.id == "d3_q3").expect("axiom present");
    let (e0, _) = flat_instance(&base, 3)?;
    let mut e1 = flat_sharp_l2(3)?;
    e1.hypotheses.d = DConstraint::exactly(3);
    let theta = aff(0, 5, 18, 0);
    let e = Estimate::interpolated("flat_d3_q3_interpolated", &e0, &e1, &theta)?;
    let expected = ExponentPair::new(&q(36, 13), &aff(72, 0, 20, 5))?;
    rows.push(LedgerRow::from_estimate(&e, &expected, "(36/13 -> 72/(20+5eps))", true, 3));

    let pass = rows.iter().all(|r| r.pass);
    Ok(Ledger { rows, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub n: u32,
    pub p: String,
    pub r: String,
    pub necessary_ok: bool,
    pub conjecture_region: Region,
    pub kakeya_derivable_d: bool,
}

/// `necessary_ok` and `conjecture_region` for one pair in `F_q^n`.
pub fn check_pair(pair: &ExponentPair, n: u32) -> Result<ExponentCheck> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("the flat disk lives in even dimension n ≥ 4, got {n}")));
    }
    Ok(ExponentCheck {
        n,
        p: pair.p_string(),
        r: pair.r_string(),
        necessary_ok: necessary_ok(pair, n),
        conjecture_region: conjecture_region(pair, n),
        kakeya_derivable_d: kakeya_derivable(pair, n / 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> EpsExponent {
        s.parse().unwrap()
    }

    fn pair(p: &str, r: &str) -> ExponentPair {
        ExponentPair::parse(p, r).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(e("8/3+eps"), aff(8, 3, 3, 0));
        assert_eq!(e("8/3+eps").to_string(), "(8+3*eps)/3");
        assert_eq!(e("(160+60*eps)/(68+30*eps)").to_string(), "(80+30*eps)/(34+15*eps)");
        assert_eq!(e("-(36-10eps)/(-13+5eps)").to_string(), "(36-10*eps)/(13-5*eps)");
        assert_eq!(e("28/11").to_string(), "28/11");
        assert_eq!(e("((2+eps)*(3+eps))/(2+eps)"), e("3+eps"));
        assert_eq!(e("0").to_string(), "0");
        assert!("1/(eps-eps)".parse::<EpsExponent>().is_err());
        assert!("3 +".parse::<EpsExponent>().is_err());
        for s in ["(80+30*eps)/(34+15*eps)", "(8+3*eps)/3", "72/(20+5*eps)", "-7/2", "eps"] {
            assert_eq!(e(s).to_string(), s);
        }
    }

    #[test]
    fn asymptotic_order() {
        assert_eq!(e("8/3+eps").cmp_asym(&e("8/3")), Ordering::Greater);
        assert_eq!(e("18/5-eps").cmp_asym(&e("18/5")), Ordering::Less);
        assert_eq!(e("3").cmp_asym(&e("3")), Ordering::Equal);
        assert_eq!(e("1/eps").cmp_asym(&e("1000")), Ordering::Greater);
        assert!(e("eps").at_zero().unwrap().is_zero());
        assert!(e("1/eps").at_zero().is_err());
    }

    #[test]
    fn stein_tomas_examples() {
        let r = |a, b| Rational64::new(a, b);
        for d in 2..10i64 {
            assert_eq!(stein_tomas_rule(r(d, 1), r(d - 1, 1), r(d - 1, 1)).unwrap(), q(2 * d + 2, d - 1));
            let n = 2 * d;
            assert_eq!(stein_tomas_rule(r(n, 1), r(n - 2, 1), r(n - 2, 2)).unwrap(), q(2 * n + 12, n - 2));
        }
        assert_eq!(stein_tomas_rule(r(4, 1), r(2, 1), r(1, 1)).unwrap(), q(10, 1));
        assert!(matches!(stein_tomas_rule(r(4, 1), r(2, 1), r(0, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn flat_from_paraboloid_examples() {
        assert_eq!(flat_from_paraboloid(2, &q(4, 1)).unwrap(), pair("4", "4"));
        assert_eq!(flat_from_paraboloid(6, &e("8/3+eps")).unwrap(), pair("(80+30eps)/(34+15eps)", "8/3+eps"));
        assert_eq!(flat_from_paraboloid(3, &q(4, 1)).unwrap(), pair("8/3", "4"));
        assert_eq!(flat_from_paraboloid(4, &q(28, 9)).unwrap(), pair("28/11", "28/9"));
        assert_eq!(flat_from_paraboloid(4, &q(3, 1)).unwrap(), pair("18/7", "3"));
        assert_eq!(flat_from_paraboloid(3, &e("188/53+eps")).unwrap(), pair("(376+106eps)/(135+53eps)", "188/53+eps"));
        for d in 3..40i64 {
            let got = flat_from_paraboloid(d as u32, &q(2 * d + 4, d)).unwrap();
            assert_eq!(got, ExponentPair::new(&q(2 * d * d + 2 * d - 4, d * d - 2), &q(2 * d + 4, d)).unwrap());
        }
        assert!(matches!(flat_from_paraboloid(3, &q(2, 1)), Err(Error::Domain(_))));
        // At the threshold r = 2d/(d−1) the pair lands on the diagonal.
        assert_eq!(flat_from_paraboloid(3, &q(3, 1)).unwrap(), pair("3", "3"));
    }

    #[test]
    fn interpolation_examples() {
        let e0 = pair("(36-10eps)/(13-5eps)", "18/5-eps");
        let e1 = pair("2", "4");
        assert_eq!(interpolate(&e0, &e1, &EpsExponent::zero()).unwrap(), e0);
        assert_eq!(interpolate(&e0, &e1, &EpsExponent::one()).unwrap(), e1);
        let got = interpolate(&e0, &e1, &e("5eps/18")).unwrap();
        assert_eq!(got, pair("36/13", "72/(20+5eps)"));
        assert_eq!(got.inv_r, e("5/18+5eps/72"));
        let mid = interpolate(&pair("1", "inf"), &pair("2", "4"), &q(1, 2)).unwrap();
        assert_eq!(mid, pair("4/3", "8"));
        assert!(interpolate(&e0, &e1, &q(3, 2)).is_err());
    }

    #[test]
    fn nesting_examples() {
        assert!(nesting_dominates(&pair("2", "6"), &pair("2", "8")));
        assert!(!nesting_dominates(&pair("2", "6"), &pair("2", "4")));
        assert!(nesting_dominates(&pair("4", "4"), &pair("4", "4")));
        assert!(nesting_dominates(&pair("2", "6"), &pair("inf", "inf")));
    }

    #[test]
    fn kakeya_examples() {
        for d in 2..8 {
            let s = d.to_string();
            assert!(kakeya_derivable(&pair(&s, &s), d));
            assert!(kakeya_derivable(&pair("1", "inf"), d));
            assert!(kakeya_derivable(&pair("1", "1"), d));
            assert!(!kakeya_derivable(&pair("inf", "inf"), d));
        }
        assert!(kakeya_derivable(&pair("2", "2"), 2));
        assert!(!kakeya_derivable(&pair("3", "3"), 2));
        // The instance used for the flat disk: K(r/(r−2) → r(d−1)/2) for r ≥ 2d/(d−1).
        for d in 2..8i64 {
            for r in [q(2 * d, d - 1), q(4, 1), q(7, 1), q(2 * d + 4, d)] {
                if r.ge(&q(2 * d, d - 1)) {
                    let k = ExponentPair::new(&r.div(&r.sub(&q(2, 1))).unwrap(), &r.scale(d - 1, 2)).unwrap();
                    assert!(kakeya_derivable(&k, d as u32), "d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn necessary_examples() {
        assert!(necessary_ok(&pair("2", "6"), 4));
        assert!(!necessary_ok(&pair("2", "5"), 4));
        assert!(necessary_ok(&pair("2", "4"), 6));
        assert!(!necessary_ok(&pair("1", "100"), 6));
        assert!(necessary_ok(&pair("1", "inf"), 6));
    }

    #[test]
    fn region_examples() {
        for n in [4u32, 6, 8, 12] {
            let ni = n as i64;
            let c = q(ni - 2, 2 * ni);
            assert_eq!(conjecture_region(&ExponentPair::from_inverses(c.clone(), c.clone()), n), Region::Boundary);
            let sharp = ExponentPair::from_inverses(q(1, 2), q(ni - 2, 2 * ni + 4));
            assert_eq!(conjecture_region(&sharp, n), Region::Boundary);
            assert_eq!(conjecture_region(&pair("inf", "inf"), n), Region::Boundary);
            assert_eq!(conjecture_region(&pair("4", "100"), n), Region::Inside);
            assert_eq!(conjecture_region(&pair("2", "2"), n), Region::Outside);
        }
        // ε pushes a boundary point inward or outward.
        assert_eq!(conjecture_region(&pair("2", "6+eps"), 4), Region::Inside);
        assert_eq!(conjecture_region(&pair("2", "6-eps"), 4), Region::Outside);
    }

    #[test]
    fn duality_is_involution() {
        for (p, r) in [("2", "6"), ("28/11", "28/9"), ("inf", "1"), ("(80+30eps)/(34+15eps)", "8/3+eps")] {
            let x = pair(p, r);
            assert_eq!(x.dual().dual(), x);
        }
        assert_eq!(pair("2", "4").dual(), pair("4/3", "2"));
    }

    #[test]
    fn hypotheses_conjoin() {
        let a = Hypotheses::new(DConstraint::congruent(3, 2, 1)).q_mod4(3);
        let b = Hypotheses::new(DConstraint::exactly(3)).q_prime();
        let c = a.conjoin(&b).unwrap();
        assert_eq!(c.d, DConstraint { min: 3, max: Some(3), modulus: 2, residue: 1 });
        assert!(c.q_prime && c.q_mod4 == Some(3));
        assert!(a.conjoin(&Hypotheses::new(DConstraint::exactly(4))).is_err());
        assert!(a.conjoin(&Hypotheses::new(DConstraint::exactly(3)).q_mod4(1)).is_err());
        assert!(c.admits(7, 3, true) && !c.admits(5, 3, true) && !c.admits(27, 3, false));
        assert_eq!(DConstraint::congruent(5, 4, 1).representative(), Some(5));
        assert_eq!(DConstraint::congruent(8, 2, 0).to_string(), "d>=8 even");
    }

    #[test]
    fn ledger_reproduces_table() {
        let l = derive_ledger().unwrap();
        assert!(l.pass, "{:?}", l.failures());
        assert_eq!(l.rows.len(), 13);
        let by = |id: &str| l.rows.iter().find(|r| r.id == id).unwrap();
        assert_eq!((by("flat_d4").p.as_str(), by("flat_d4").r.as_str()), ("28/11", "28/9"));
        assert_eq!(by("flat_d6").p, "(80+30*eps)/(34+15*eps)");
        assert_eq!(by("flat_d3_q3").p, "(36-10*eps)/(13-5*eps)");
        assert_eq!(by("flat_even_d_ge8").d, 8);
        assert_eq!(by("flat_even_d_ge8").p, "70/31");
        assert_eq!(by("flat_d_3mod4_q3").d, 7);
        assert_eq!(by("flat_odd_q1").r, "4");
        assert_eq!(by("stein_tomas_flat_disk").r, "10");
        assert_eq!(by("flat_d3_q3_interpolated").r, "72/(20+5*eps)");
        assert_eq!(by("flat_d3_q3_interpolated").hypotheses, vec!["q=3 mod 4".to_string()]);
        assert!(l.rows.iter().all(|r| r.replay_ok));
        assert!(by("flat_d_1mod4_q3").provenance[0].contains("stein_tomas"));
    }

    #[test]
    fn sharp_l2_is_on_boundary() {
        for d in 2..20u32 {
            let e = flat_sharp_l2(d).unwrap();
            assert!(necessary_ok(&e.pair, 2 * d));
            assert_eq!(conjecture_region(&e.pair, 2 * d), Region::Boundary);
        }
    }
}
