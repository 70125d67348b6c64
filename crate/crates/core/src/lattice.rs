//! Dense grids of values in `Q(ζ_p)` stored on an integer lattice.
//!
//! Point `k` holds `Σ_j data[k·p + j] ζ^j / denom` over the redundant basis
//! `ζ^0, …, ζ^{p−1}` (the all-ones vector represents zero). One positive
//! denominator is shared by the whole grid. All arithmetic is checked and
//! reports [`Error::Overflow`] instead of wrapping.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclo::CycloValue;
use crate::error::{Error, Result};

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("i128 lattice overflow in {what}"))
}

pub(crate) fn cmul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| overflow("multiplication"))
}

pub(crate) fn cadd(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(|| overflow("addition"))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Cyclic convolution of two redundant coefficient vectors: the product in `Z[ζ_p]`.
pub(crate) fn mul_point(a: &[i128], b: &[i128], out: &mut [i128]) -> Result<()> {
    let p = a.len();
    out.iter_mut().for_each(|o| *o = 0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let k = (i + j) % p;
            out[k] = cadd(out[k], cmul(x, y)?)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CycloGrid {
    p: usize,
    data: Vec<i128>,
    denom: i128,
}

impl CycloGrid {
    pub fn zeros(p: u32, len: usize) -> CycloGrid {
        CycloGrid { p: p as usize, data: vec![0; len * p as usize], denom: 1 }
    }

    /// Integer-valued grid.
    pub fn from_integers(p: u32, values: &[i64]) -> CycloGrid {
        let mut g = CycloGrid::zeros(p, values.len());
        for (k, &v) in values.iter().enumerate() {
            g.data[k * g.p] = v as i128;
        }
        g
    }

    /// Grid from raw redundant coefficients and a positive denominator.
    pub fn from_raw(p: u32, data: Vec<i128>, denom: i128) -> Result<CycloGrid> {
        if denom <= 0 || !data.len().is_multiple_of(p as usize) {
            return Err(Error::Contract("lattice data must be a multiple of p with positive denominator".into()));
        }
        Ok(CycloGrid { p: p as usize, data, denom })
    }

    /// Grid from exact values, brought to a common denominator.
    pub fn from_values(p: u32, values: &[CycloValue]) -> Result<CycloGrid> {
        let mut lcm = BigInt::from(1);
        for v in values {
            for c in v.coeffs() {
                lcm = lcm.lcm(c.denom());
            }
        }
        let denom = lcm.to_i128().ok_or_else(|| overflow("common denominator"))?;
        let pu = p as usize;
        let mut data = vec![0i128; values.len() * pu];
        for (k, v) in values.iter().enumerate() {
            if v.p() != p {
                return Err(Error::Contract(format!("value over Q(ζ_{}) in a Q(ζ_{p}) grid", v.p())));
            }
            for (j, c) in v.coeffs().iter().enumerate() {
                let scaled = c * BigRational::from_integer(lcm.clone());
                data[k * pu + j] =
                    scaled.to_integer().to_i128().ok_or_else(|| overflow("from_values"))?;
            }
        }
        Ok(CycloGrid { p: pu, data, denom })
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.p
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn raw(&self, k: usize) -> &[i128] {
        &self.data[k * self.p..(k + 1) * self.p]
    }

    pub(crate) fn raw_mut(&mut self, k: usize) -> &mut [i128] {
        &mut self.data[k * self.p..(k + 1) * self.p]
    }

    pub(crate) fn data(&self) -> &[i128] {
        &self.data
    }

    pub fn get(&self, k: usize) -> CycloValue {
        CycloValue::from_int_redundant(self.p as u32, self.raw(k), self.denom)
    }

    pub fn values(&self) -> Vec<CycloValue> {
        (0..self.len()).map(|k| self.get(k)).collect()
    }

    pub fn is_zero_at(&self, k: usize) -> bool {
        let r = self.raw(k);
        r.iter().all(|&c| c == r[0])
    }

    pub fn max_abs(&self) -> i128 {
        self.data.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Subtracts the top coefficient at every point so that the
    /// representation is canonical (top coefficient zero), then divides
    /// out the common content of data and denominator.
    pub fn canonicalize(&mut self) {
        let p = self.p;
        for chunk in self.data.chunks_mut(p) {
            let top = chunk[p - 1];
            if top != 0 {
                chunk.iter_mut().for_each(|c| *c -= top);
            }
        }
        let mut g = self.denom;
        for &c in &self.data {
            if g == 1 {
                break;
            }
            if c != 0 {
                g = gcd_i128(g, c);
            }
        }
        if g > 1 {
            self.data.iter_mut().for_each(|c| *c /= g);
            self.denom /= g;
        }
    }

    /// Exact equality of the values at `k` in `self` and `j` in `other`.
    pub fn eq_point(&self, k: usize, other: &CycloGrid, j: usize) -> Result<bool> {
        let a = self.raw(k);
        let b = other.raw(j);
        let mut first = None;
        for (&x, &y) in a.iter().zip(b) {
            let diff = cmul(x, other.denom)? - cmul(y, self.denom)?;
            match first {
                None => first = Some(diff),
                Some(f) if f != diff => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// Pointwise exact equality.
    pub fn equals(&self, other: &CycloGrid) -> Result<bool> {
        if self.p != other.p || self.len() != other.len() {
            return Ok(false);
        }
        for k in 0..self.len() {
            if !self.eq_point(k, other, k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Multiplies every value by `num/den`.
    pub fn scale(&self, num: i128, den: i128) -> Result<CycloGrid> {
        if den == 0 {
            return Err(Error::Domain("scale by a zero denominator".into()));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_i128(num, den).max(1);
        let (num, den) = (num / g, den / g);
        let data = self.data.iter().map(|&c| cmul(c, num)).collect::<Result<Vec<_>>>()?;
        let mut out = CycloGrid { p: self.p, data, denom: cmul(self.denom, den)? };
        out.canonicalize();
        Ok(out)
    }

    fn common(&self, other: &CycloGrid) -> Result<(i128, i128, i128)> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::Contract("lattice grids differ in p or length".into()));
        }
        let g = gcd_i128(self.denom, other.denom);
        let fa = other.denom / g;
        let fb = self.denom / g;
        Ok((fa, fb, cmul(self.denom, fa)?))
    }

    pub fn add(&self, other: &CycloGrid) -> Result<CycloGrid> {
        let (fa, fb, denom) = self.common(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| cadd(cmul(a, fa)?, cmul(b, fb)?))
            .collect::<Result<Vec<_>>>()?;
        let mut out = CycloGrid { p: self.p, data, denom };
        out.canonicalize();
        Ok(out)
    }

    pub fn sub(&self, other: &CycloGrid) -> Result<CycloGrid> {
        self.add(&other.scale(-1, 1)?)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &CycloGrid) -> Result<CycloGrid> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::Contract("lattice grids differ in p or length".into()));
        }
        let p = self.p;
        let mut data = vec![0i128; self.data.len()];
        for ((a, b), out) in
            self.data.chunks(p).zip(other.data.chunks(p)).zip(data.chunks_mut(p))
        {
            mul_point(a, b, out)?;
        }
        let mut out = CycloGrid { p, data, denom: cmul(self.denom, other.denom)? };
        out.canonicalize();
        Ok(out)
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> CycloGrid {
        let p = self.p;
        let mut data = vec![0i128; self.data.len()];
        for (src, dst) in self.data.chunks(p).zip(data.chunks_mut(p)) {
            for (j, &c) in src.iter().enumerate() {
                dst[(p - j) % p] = c;
            }
        }
        CycloGrid { p, data, denom: self.denom }
    }

    /// `Σ_k a(k)·conj(b(k))`, exact.
    pub fn inner(&self, other: &CycloGrid) -> Result<CycloValue> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::Contract("lattice grids differ in p or length".into()));
        }
        let p = self.p;
        let mut acc = vec![0i128; p];
        let mut tmp = vec![0i128; p];
        let conj = other.conj();
        for (a, b) in self.data.chunks(p).zip(conj.data.chunks(p)) {
            mul_point(a, b, &mut tmp)?;
            for (s, &t) in acc.iter_mut().zip(&tmp) {
                *s = cadd(*s, t)?;
            }
        }
        let denom = cmul(self.denom, other.denom)?;
        Ok(CycloValue::from_int_redundant(p as u32, &acc, denom))
    }

    /// `Σ_k |a(k)|²`, exact and rational.
    pub fn norm_sq_sum(&self) -> Result<BigRational> {
        self.inner(self)?
            .as_rational()
            .ok_or_else(|| Error::Contract("sum of squared moduli is not rational".into()))
    }

    /// `|a(k)|²`, exact.
    pub fn modulus_sq(&self, k: usize) -> Result<CycloValue> {
        let p = self.p;
        let a = self.raw(k);
        let mut c = vec![0i128; p];
        for (j, &x) in a.iter().enumerate() {
            c[(p - j) % p] = x;
        }
        let mut out = vec![0i128; p];
        mul_point(a, &c, &mut out)?;
        Ok(CycloValue::from_int_redundant(p as u32, &out, cmul(self.denom, self.denom)?))
    }

    /// `|a(k)|² · denom²` as an integer when `|a(k)|²` is rational.
    pub fn modulus_sq_numer(&self, k: usize) -> Result<Option<i128>> {
        let p = self.p;
        let a = self.raw(k);
        let mut c = vec![0i128; p];
        for (j, &x) in a.iter().enumerate() {
            c[(p - j) % p] = x;
        }
        let mut out = vec![0i128; p];
        mul_point(a, &c, &mut out)?;
        if out[1..].iter().all(|&x| x == out[1]) {
            Ok(Some(out[0] - out[1]))
        } else {
            Ok(None)
        }
    }

    /// The value at `k` as a rational, if it is one: `numerator / denom`.
    pub fn rational_numer(&self, k: usize) -> Option<i128> {
        let a = self.raw(k);
        if a[1..].iter().all(|&x| x == a[1]) {
            Some(a[0] - a[1])
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let p = self.p;
        let roots: Vec<Complex64> = (0..p)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / p as f64))
            .collect();
        let d = self.denom as f64;
        self.data
            .chunks(p)
            .map(|chunk| {
                // Exact integer centering first to avoid cancellation between large coefficients.
                let top = chunk[p - 1];
                let mut z = Complex64::zero();
                for (j, &c) in chunk.iter().enumerate() {
                    let c = c - top;
                    if c != 0 {
                        z += roots[j] * (c as f64);
                    }
                }
                z / d
            })
            .collect()
    }
}

/// Lossy conversion to `f64` that survives numerators and denominators beyond `f64` range.
pub(crate) fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let v = r.numer().to_f64().unwrap_or(f64::INFINITY) / r.denom().to_f64().unwrap_or(f64::INFINITY);
    if v.is_finite() {
        v
    } else {
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * (r.numer().abs().bits() as f64 - r.denom().bits() as f64).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i128, b: i128) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn from_values_round_trip() {
        let vals = vec![
            CycloValue::zeta(5, 2),
            CycloValue::from_rational(5, ratio(3, 4)),
            &CycloValue::zeta(5, 4) - &CycloValue::from_rational(5, ratio(1, 6)),
        ];
        let g = CycloGrid::from_values(5, &vals).unwrap();
        assert_eq!(g.values(), vals);
        assert_eq!(g.denom(), 12);
    }

    #[test]
    fn arithmetic_matches_cyclo() {
        let a = vec![CycloValue::zeta(3, 1), CycloValue::from_integer(3, 2)];
        let b = vec![CycloValue::zeta(3, 2), CycloValue::from_rational(3, ratio(-1, 3))];
        let ga = CycloGrid::from_values(3, &a).unwrap();
        let gb = CycloGrid::from_values(3, &b).unwrap();
        let sum = ga.add(&gb).unwrap();
        let prod = ga.mul(&gb).unwrap();
        for k in 0..2 {
            assert_eq!(sum.get(k), &a[k] + &b[k]);
            assert_eq!(prod.get(k), &a[k] * &b[k]);
            assert_eq!(ga.conj().get(k), a[k].conj());
        }
        let inner = ga.inner(&gb).unwrap();
        assert_eq!(inner, &(&a[0] * &b[0].conj()) + &(&a[1] * &b[1].conj()));
        assert!(ga.sub(&ga).unwrap().is_zero_at(0));
    }

    #[test]
    fn equality_ignores_representation() {
        let g1 = CycloGrid::from_raw(3, vec![1, 1, 1, 2, 0, 0], 1).unwrap();
        let g2 = CycloGrid::from_raw(3, vec![0, 0, 0, 4, 0, 0], 2).unwrap();
        assert!(g1.equals(&g2).unwrap());
        assert!(g1.is_zero_at(0));
    }

    #[test]
    fn overflow_reported() {
        let g = CycloGrid::from_raw(3, vec![i128::MAX / 2, 0, 0], 1).unwrap();
        assert!(matches!(g.scale(4, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn to_complex_matches_embedding() {
        let v = &CycloValue::zeta(7, 3) + &CycloValue::from_rational(7, ratio(2, 5));
        let g = CycloGrid::from_values(7, std::slice::from_ref(&v)).unwrap();
        assert!((g.to_complex()[0] - v.to_complex()).norm() < 1e-12);
    }
}
