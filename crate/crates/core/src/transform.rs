//! Functions on `F_q^n` under a declared measure, their Fourier transforms
//! and convolutions.
//!
//! Conventions:
//! * forward `ĝ(x) = Σ_m χ(−x·m) g(m)` takes a counting-measure function to a
//!   normalized-measure one;
//! * inverse `(f dμ)^∨(m) = Σ_x f(x) χ(x·m) μ(x)` with `μ(x) = q^{−n}` for the
//!   normalized measure and `μ = 1/|V|` on `V` for a surface measure;
//! * counting convolution is the plain sum, normalized convolution carries `q^{−n}`.
//!
//! The fast path applies the one-dimensional `q × q` character matrix along the
//! last axis and rotates that axis to the front, `n` times.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloValue;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::lattice::{cadd, mul_point, CycloGrid};
use crate::space::Space;
use crate::varieties::{Variety, VarietyKind};

/// The measure a [`GridFunction`] is integrated against.
#[derive(Clone, Debug)]
pub enum Measure {
    /// `dm`: mass 1 at every point.
    Counting,
    /// `dx`: mass `q^{−n}` at every point.
    Normalized,
    /// `dσ_V`: mass `1/|V|` at every point of `V`.
    Surface(Arc<Variety>),
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Measure::Counting, Measure::Counting) | (Measure::Normalized, Measure::Normalized) => {
                true
            }
            (Measure::Surface(a), Measure::Surface(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Counting => f.write_str("counting"),
            Measure::Normalized => f.write_str("normalized"),
            Measure::Surface(v) => write!(f, "surface({}, d={})", v.kind(), v.d()),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub enum Values {
    Exact(CycloGrid),
    Float(Vec<Complex64>),
}

/// A scalar produced by either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(CycloValue),
    Float(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(v) => v.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    /// Exact equality for two exact scalars; relative tolerance otherwise.
    pub fn agrees(&self, other: &Scalar, rel_tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_complex(), other.to_complex());
                (a - b).norm() <= rel_tol * (1.0 + a.norm().max(b.norm()))
            }
        }
    }
}

/// A dense function on `F_q^n`.
#[derive(Clone, Debug)]
pub struct GridFunction {
    field: Arc<Field>,
    space: Space,
    measure: Measure,
    values: Values,
}

impl GridFunction {
    pub fn new(field: Arc<Field>, n: usize, measure: Measure, values: Values) -> Result<GridFunction> {
        let space = Space::new(field.size(), n)?;
        let len = match &values {
            Values::Exact(g) => {
                if g.p() != field.p() {
                    return Err(Error::Contract("lattice characteristic differs from field".into()));
                }
                g.len()
            }
            Values::Float(v) => v.len(),
        };
        if len != space.size() {
            return Err(Error::Contract(format!("expected {} values, got {len}", space.size())));
        }
        if let Measure::Surface(v) = &measure {
            v.check_field(&field)?;
            if v.ambient_dim() != n {
                return Err(Error::Contract(format!(
                    "variety lives in dimension {}, function in {n}",
                    v.ambient_dim()
                )));
            }
        }
        Ok(GridFunction { field, space, measure, values })
    }

    pub fn from_integers(field: Arc<Field>, n: usize, measure: Measure, values: &[i64]) -> Result<Self> {
        let grid = CycloGrid::from_integers(field.p(), values);
        Self::new(field, n, measure, Values::Exact(grid))
    }

    pub fn from_complex(field: Arc<Field>, n: usize, measure: Measure, values: Vec<Complex64>) -> Result<Self> {
        Self::new(field, n, measure, Values::Float(values))
    }

    fn from_real_ints(field: Arc<Field>, n: usize, measure: Measure, ints: Vec<i64>, backend: Backend) -> Result<Self> {
        match backend {
            Backend::Exact => Self::from_integers(field, n, measure, &ints),
            Backend::Float => {
                let v = ints.into_iter().map(|x| Complex64::new(x as f64, 0.0)).collect();
                Self::from_complex(field, n, measure, v)
            }
        }
    }

    /// `c·1_{point}`.
    pub fn delta(field: Arc<Field>, n: usize, measure: Measure, idx: usize, c: i64, backend: Backend) -> Result<Self> {
        let size = Space::new(field.size(), n)?.size();
        let mut ints = vec![0i64; size];
        *ints
            .get_mut(idx)
            .ok_or_else(|| Error::Domain(format!("point index {idx} out of range")))? = c;
        Self::from_real_ints(field, n, measure, ints, backend)
    }

    pub fn constant(field: Arc<Field>, n: usize, measure: Measure, c: i64, backend: Backend) -> Result<Self> {
        let size = Space::new(field.size(), n)?.size();
        Self::from_real_ints(field, n, measure, vec![c; size], backend)
    }

    /// `1_W` for a variety `W` (which need not be the measure's variety).
    pub fn indicator(field: Arc<Field>, w: &Variety, measure: Measure, backend: Backend) -> Result<Self> {
        w.check_field(&field)?;
        let ints = w.membership().iter().map(|&b| b as i64).collect();
        Self::from_real_ints(field, w.ambient_dim(), measure, ints, backend)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.space.size()
    }

    pub fn is_empty(&self) -> bool {
        self.space.size() == 0
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn backend(&self) -> Backend {
        match self.values {
            Values::Exact(_) => Backend::Exact,
            Values::Float(_) => Backend::Float,
        }
    }

    pub fn exact(&self) -> Result<&CycloGrid> {
        match &self.values {
            Values::Exact(g) => Ok(g),
            Values::Float(_) => Err(Error::Contract("exact values requested from a float function".into())),
        }
    }

    /// Values as complex floats (converting exact values by the embedding).
    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        match &self.values {
            Values::Exact(g) => g.to_complex(),
            Values::Float(v) => v.clone(),
        }
    }

    pub fn to_float(&self) -> GridFunction {
        GridFunction { values: Values::Float(self.to_complex_vec()), ..self.clone() }
    }

    pub fn with_measure(mut self, measure: Measure) -> Result<GridFunction> {
        let field = self.field.clone();
        let n = self.n();
        self.measure = measure;
        Self::new(field, n, self.measure, self.values)
    }

    pub fn value(&self, k: usize) -> Scalar {
        match &self.values {
            Values::Exact(g) => Scalar::Exact(g.get(k)),
            Values::Float(v) => Scalar::Float(v[k]),
        }
    }

    fn same_shape(&self, other: &GridFunction) -> Result<()> {
        if *self.field != *other.field || self.space != other.space {
            return Err(Error::Contract("functions live on different grids".into()));
        }
        if self.backend() != other.backend() {
            return Err(Error::Contract("functions use different backends".into()));
        }
        Ok(())
    }

    /// Pointwise `self − other`.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_shape(other)?;
        let values = match (&self.values, &other.values) {
            (Values::Exact(a), Values::Exact(b)) => Values::Exact(a.sub(b)?),
            (Values::Float(a), Values::Float(b)) => {
                Values::Float(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => unreachable!(),
        };
        Ok(GridFunction { values, ..self.clone() })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_shape(other)?;
        let values = match (&self.values, &other.values) {
            (Values::Exact(a), Values::Exact(b)) => Values::Exact(a.mul(b)?),
            (Values::Float(a), Values::Float(b)) => {
                Values::Float(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => unreachable!(),
        };
        Ok(GridFunction { values, ..self.clone() })
    }

    /// `a·self + b·other` for small integers `a, b`.
    pub fn lin_comb(&self, a: i64, other: &GridFunction, b: i64) -> Result<GridFunction> {
        self.same_shape(other)?;
        let values = match (&self.values, &other.values) {
            (Values::Exact(x), Values::Exact(y)) => {
                Values::Exact(x.scale(a as i128, 1)?.add(&y.scale(b as i128, 1)?)?)
            }
            (Values::Float(x), Values::Float(y)) => Values::Float(
                x.iter().zip(y).map(|(u, v)| u * a as f64 + v * b as f64).collect(),
            ),
            _ => unreachable!(),
        };
        Ok(GridFunction { values, ..self.clone() })
    }

    /// Unweighted `Σ_k self(k)·conj(other(k))`.
    pub fn inner_sum(&self, other: &GridFunction) -> Result<Scalar> {
        self.same_shape(other)?;
        Ok(match (&self.values, &other.values) {
            (Values::Exact(a), Values::Exact(b)) => Scalar::Exact(a.inner(b)?),
            (Values::Float(a), Values::Float(b)) => {
                Scalar::Float(a.iter().zip(b).map(|(x, y)| x * y.conj()).sum())
            }
            _ => unreachable!(),
        })
    }

    /// `⟨self, other⟩` against this function's measure.
    pub fn inner(&self, other: &GridFunction) -> Result<Scalar> {
        if self.measure != other.measure {
            return Err(Error::Contract(format!(
                "inner product of functions under {} and {}",
                self.measure, other.measure
            )));
        }
        match &self.measure {
            Measure::Counting => self.inner_sum(other),
            Measure::Normalized => {
                let s = self.inner_sum(other)?;
                Ok(scale_scalar(s, 1, self.space.size() as i128))
            }
            Measure::Surface(v) => {
                let mask = self.restricted_to(v)?;
                let s = mask.inner_sum(other)?;
                Ok(scale_scalar(s, 1, v.len() as i128))
            }
        }
    }

    /// Copy with values outside `V` set to zero.
    pub fn restricted_to(&self, v: &Variety) -> Result<GridFunction> {
        let values = match &self.values {
            Values::Exact(g) => {
                let mut g = g.clone();
                for (k, &inside) in v.membership().iter().enumerate() {
                    if !inside {
                        g.raw_mut(k).iter_mut().for_each(|c| *c = 0);
                    }
                }
                Values::Exact(g)
            }
            Values::Float(x) => Values::Float(
                x.iter().zip(v.membership()).map(|(z, &b)| if b { *z } else { Complex64::zero() }).collect(),
            ),
        };
        Ok(GridFunction { values, ..self.clone() })
    }
}

fn scale_scalar(s: Scalar, num: i128, den: i128) -> Scalar {
    match s {
        Scalar::Exact(v) => Scalar::Exact(v.scale(&BigRational::new(num.into(), den.into()))),
        Scalar::Float(z) => Scalar::Float(z * (num as f64 / den as f64)),
    }
}

/// Character exponent `Tr(x·m) mod p` as a function of element indices.
fn exps(field: &Field) -> &[u32] {
    field.char_exponents()
}

fn roots(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / p as f64))
        .collect()
}

/// Applies `v ↦ Σ_x ζ^{sign·Tr(x·m)} v(x)` along every axis.
fn transform_exact(field: &Field, space: Space, grid: &CycloGrid, sign: i64) -> Result<CycloGrid> {
    let q = space.q();
    let p = field.p() as usize;
    let bound = (space.size() as i128).checked_mul(grid.max_abs()).and_then(|b| b.checked_mul(2));
    if bound.is_none() {
        return Err(Error::Overflow(format!(
            "transform of a grid with coefficients up to {} over {} points",
            grid.max_abs(),
            space.size()
        )));
    }
    let e = exps(field);
    let lines = space.size() / q;
    let mut src: Vec<i128> = grid.data().to_vec();
    let mut dst = vec![0i128; src.len()];
    let shift = |x: usize, m: usize| -> usize {
        let t = e[x * q + m] as i64 * sign;
        t.rem_euclid(p as i64) as usize
    };
    for _ in 0..space.dim() {
        dst.iter_mut().for_each(|c| *c = 0);
        for r in 0..lines {
            let line = &src[r * q * p..(r + 1) * q * p];
            for x in 0..q {
                let v = &line[x * p..(x + 1) * p];
                if v.iter().all(|&c| c == 0) {
                    continue;
                }
                for m in 0..q {
                    let s = shift(x, m);
                    let out = &mut dst[(m * lines + r) * p..(m * lines + r + 1) * p];
                    for (j, &c) in v.iter().enumerate() {
                        let k = if j + s >= p { j + s - p } else { j + s };
                        out[k] += c;
                    }
                }
            }
        }
        std::mem::swap(&mut src, &mut dst);
    }
    let mut out = CycloGrid::from_raw(field.p(), src, grid.denom())?;
    out.canonicalize();
    Ok(out)
}

/// `Σ_x ζ^{sign·Tr(x·m)} v(x)` on raw float values, fast path.
pub(crate) fn transform_float(field: &Field, space: Space, v: &[Complex64], sign: i64) -> Vec<Complex64> {
    let q = space.q();
    let p = field.p() as i64;
    let rt = roots(field.p());
    let e = exps(field);
    let w: Vec<Complex64> = e.iter().map(|&t| rt[(t as i64 * sign).rem_euclid(p) as usize]).collect();
    let lines = space.size() / q;
    let mut src = v.to_vec();
    let mut dst = vec![Complex64::zero(); src.len()];
    for _ in 0..space.dim() {
        for r in 0..lines {
            let line = &src[r * q..(r + 1) * q];
            for m in 0..q {
                let mut acc = Complex64::zero();
                for (x, &val) in line.iter().enumerate() {
                    acc += w[x * q + m] * val;
                }
                dst[m * lines + r] = acc;
            }
        }
        std::mem::swap(&mut src, &mut dst);
    }
    src
}

/// Naive `O(q^{2n})` evaluation of `Σ_x ζ^{sign·Tr(x·m)} v(x)`.
fn transform_exact_naive(field: &Field, space: Space, grid: &CycloGrid, sign: i64) -> Result<CycloGrid> {
    let q = space.q();
    let p = field.p() as usize;
    let e = exps(field);
    let n = space.dim();
    let mut out = vec![0i128; grid.len() * p];
    let mut dx = vec![0; n];
    let mut dm = vec![0; n];
    for m in 0..space.size() {
        space.digits_into(m, &mut dm);
        for x in 0..space.size() {
            let v = grid.raw(x);
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            space.digits_into(x, &mut dx);
            let t: i64 = dx.iter().zip(&dm).map(|(&a, &b)| e[a * q + b] as i64).sum();
            let s = (t * sign).rem_euclid(p as i64) as usize;
            for (j, &c) in v.iter().enumerate() {
                let k = (j + s) % p;
                out[m * p + k] = cadd(out[m * p + k], c)?;
            }
        }
    }
    let mut g = CycloGrid::from_raw(field.p(), out, grid.denom())?;
    g.canonicalize();
    Ok(g)
}

fn transform_float_naive(field: &Field, space: Space, v: &[Complex64], sign: i64) -> Vec<Complex64> {
    let q = space.q();
    let p = field.p() as i64;
    let rt = roots(field.p());
    let e = exps(field);
    let n = space.dim();
    let mut dx = vec![0; n];
    let mut dm = vec![0; n];
    (0..space.size())
        .map(|m| {
            space.digits_into(m, &mut dm);
            let mut acc = Complex64::zero();
            for (x, &val) in v.iter().enumerate() {
                space.digits_into(x, &mut dx);
                let t: i64 = dx.iter().zip(&dm).map(|(&a, &b)| e[a * q + b] as i64).sum();
                acc += rt[(t * sign).rem_euclid(p) as usize] * val;
            }
            acc
        })
        .collect()
}

fn apply(f: &GridFunction, sign: i64, naive: bool) -> Result<Values> {
    Ok(match (&f.values, naive) {
        (Values::Exact(g), false) => Values::Exact(transform_exact(&f.field, f.space, g, sign)?),
        (Values::Exact(g), true) => Values::Exact(transform_exact_naive(&f.field, f.space, g, sign)?),
        (Values::Float(v), false) => Values::Float(transform_float(&f.field, f.space, v, sign)),
        (Values::Float(v), true) => Values::Float(transform_float_naive(&f.field, f.space, v, sign)),
    })
}

fn forward_impl(g: &GridFunction, naive: bool) -> Result<GridFunction> {
    if g.measure != Measure::Counting {
        return Err(Error::Contract(format!(
            "forward transform expects a counting-measure function, got {}",
            g.measure
        )));
    }
    let values = apply(g, -1, naive)?;
    GridFunction::new(g.field.clone(), g.n(), Measure::Normalized, values)
}

/// `ĝ(x) = Σ_m χ(−x·m) g(m)`, fast axis-wise path.
pub fn fourier_forward(g: &GridFunction) -> Result<GridFunction> {
    forward_impl(g, false)
}

/// Same as [`fourier_forward`] by the direct double sum.
pub fn fourier_forward_naive(g: &GridFunction) -> Result<GridFunction> {
    forward_impl(g, true)
}

fn scale_values(values: Values, num: i128, den: i128) -> Result<Values> {
    Ok(match values {
        Values::Exact(g) => Values::Exact(g.scale(num, den)?),
        Values::Float(v) => {
            let s = num as f64 / den as f64;
            Values::Float(v.into_iter().map(|z| z * s).collect())
        }
    })
}

fn inverse_impl(f: &GridFunction, mu: &Measure, naive: bool) -> Result<GridFunction> {
    if f.measure != *mu {
        return Err(Error::Contract(format!(
            "function carries {} but the transform was asked for {mu}",
            f.measure
        )));
    }
    let (src, den) = match mu {
        Measure::Counting => {
            return Err(Error::Contract(
                "inverse transform expects a normalized or surface measure".into(),
            ))
        }
        Measure::Normalized => (f.clone(), f.space.size() as i128),
        Measure::Surface(v) => (f.restricted_to(v)?, v.len() as i128),
    };
    let values = scale_values(apply(&src, 1, naive)?, 1, den)?;
    GridFunction::new(f.field.clone(), f.n(), Measure::Counting, values)
}

/// `(f dμ)^∨(m) = Σ_x f(x) χ(x·m) μ(x)`, fast path.
pub fn inverse_vs_measure(f: &GridFunction, mu: &Measure) -> Result<GridFunction> {
    inverse_impl(f, mu, false)
}

/// Same as [`inverse_vs_measure`] by the direct double sum.
pub fn inverse_vs_measure_naive(f: &GridFunction, mu: &Measure) -> Result<GridFunction> {
    inverse_impl(f, mu, true)
}

/// Per-axis tables `idx(a − b)` contribution for fixed `b`.
fn diff_tables(field: &Field, space: Space, b: usize) -> Vec<Vec<usize>> {
    let q = space.q();
    let n = space.dim();
    let mut digits = vec![0; n];
    space.digits_into(b, &mut digits);
    (0..n)
        .map(|i| {
            let w = q.pow((n - 1 - i) as u32);
            (0..q)
                .map(|a| field.sub(field.element(a), field.element(digits[i])).index() * w)
                .collect()
        })
        .collect()
}

fn support_size(g: &GridFunction) -> usize {
    match &g.values {
        Values::Exact(a) => (0..a.len()).filter(|&k| !a.is_zero_at(k)).count(),
        Values::Float(a) => a.iter().filter(|z| !z.is_zero()).count(),
    }
}

fn convolve_sum(g1: &GridFunction, g2: &GridFunction) -> Result<Values> {
    g1.same_shape(g2)?;
    // Convolution commutes; iterate over the smaller support.
    let (g1, g2) = if support_size(g2) > support_size(g1) { (g2, g1) } else { (g1, g2) };
    let space = g1.space;
    let n = space.dim();
    let size = space.size();
    let mut digits = vec![0; n];
    Ok(match (&g1.values, &g2.values) {
        (Values::Exact(a), Values::Exact(b)) => {
            let p = a.p() as usize;
            let mut out = vec![0i128; size * p];
            let mut tmp = vec![0i128; p];
            for mp in 0..size {
                let w = b.raw(mp);
                if w.iter().all(|&c| c == 0) {
                    continue;
                }
                let tables = diff_tables(&g1.field, space, mp);
                for m in 0..size {
                    space.digits_into(m, &mut digits);
                    let src: usize = digits.iter().zip(&tables).map(|(&dg, t)| t[dg]).sum();
                    let v = a.raw(src);
                    if v.iter().all(|&c| c == 0) {
                        continue;
                    }
                    mul_point(v, w, &mut tmp)?;
                    for (o, &t) in out[m * p..(m + 1) * p].iter_mut().zip(&tmp) {
                        *o = cadd(*o, t)?;
                    }
                }
            }
            let denom = a.denom().checked_mul(b.denom()).ok_or_else(|| {
                Error::Overflow("convolution denominator".into())
            })?;
            let mut g = CycloGrid::from_raw(a.p(), out, denom)?;
            g.canonicalize();
            Values::Exact(g)
        }
        (Values::Float(a), Values::Float(b)) => {
            let mut out = vec![Complex64::zero(); size];
            for (mp, &w) in b.iter().enumerate() {
                if w == Complex64::zero() {
                    continue;
                }
                let tables = diff_tables(&g1.field, space, mp);
                for (m, o) in out.iter_mut().enumerate() {
                    space.digits_into(m, &mut digits);
                    let src: usize = digits.iter().zip(&tables).map(|(&dg, t)| t[dg]).sum();
                    *o += a[src] * w;
                }
            }
            Values::Float(out)
        }
        _ => unreachable!(),
    })
}

/// `(g1 ∗ g2)(m) = Σ_{m'} g1(m − m') g2(m')`, by direct summation over the smaller support.
pub fn convolve_counting(g1: &GridFunction, g2: &GridFunction) -> Result<GridFunction> {
    if g1.measure != Measure::Counting || g2.measure != Measure::Counting {
        return Err(Error::Contract("counting convolution expects counting-measure functions".into()));
    }
    let values = convolve_sum(g1, g2)?;
    GridFunction::new(g1.field.clone(), g1.n(), Measure::Counting, values)
}

/// `(f1 ∗ f2)(x) = q^{−n} Σ_y f1(x − y) f2(y)`.
pub fn convolve_normalized(f1: &GridFunction, f2: &GridFunction) -> Result<GridFunction> {
    if f1.measure != Measure::Normalized || f2.measure != Measure::Normalized {
        return Err(Error::Contract("normalized convolution expects normalized-measure functions".into()));
    }
    let values = scale_values(convolve_sum(f1, f2)?, 1, f1.space.size() as i128)?;
    GridFunction::new(f1.field.clone(), f1.n(), Measure::Normalized, values)
}

/// Random exact function with integer `ζ`-coefficients in `[−range, range]`;
/// each point is nonzero with probability `density`.
pub fn random_exact<R: Rng>(
    field: Arc<Field>,
    n: usize,
    measure: Measure,
    rng: &mut R,
    range: i64,
    density: f64,
) -> Result<GridFunction> {
    let size = Space::new(field.size(), n)?.size();
    let p = field.p() as usize;
    let mut data = vec![0i128; size * p];
    for chunk in data.chunks_mut(p) {
        if rng.random_bool(density) {
            for c in chunk.iter_mut() {
                *c = rng.random_range(-range..=range) as i128;
            }
        }
    }
    let grid = CycloGrid::from_raw(field.p(), data, 1)?;
    GridFunction::new(field, n, measure, Values::Exact(grid))
}

/// Random exact function supported on exactly `k` distinct random points.
pub fn random_exact_sparse<R: Rng>(
    field: Arc<Field>,
    n: usize,
    measure: Measure,
    rng: &mut R,
    range: i64,
    k: usize,
) -> Result<GridFunction> {
    let size = Space::new(field.size(), n)?.size();
    let p = field.p() as usize;
    let mut data = vec![0i128; size * p];
    for idx in rand::seq::index::sample(rng, size, k.min(size)).iter() {
        for c in &mut data[idx * p..(idx + 1) * p] {
            *c = rng.random_range(-range..=range) as i128;
        }
    }
    let grid = CycloGrid::from_raw(field.p(), data, 1)?;
    GridFunction::new(field, n, measure, Values::Exact(grid))
}

/// Random float function with standard complex Gaussian values on exactly `k` random points.
pub fn random_float_sparse<R: Rng>(field: Arc<Field>, n: usize, measure: Measure, rng: &mut R, k: usize) -> Result<GridFunction> {
    use rand_distr::{Distribution, StandardNormal};
    let size = Space::new(field.size(), n)?.size();
    let mut v = vec![Complex64::zero(); size];
    for idx in rand::seq::index::sample(rng, size, k.min(size)).iter() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        v[idx] = Complex64::new(re, im);
    }
    GridFunction::from_complex(field, n, measure, v)
}

/// Random float function with standard complex Gaussian values.
pub fn random_float<R: Rng>(field: Arc<Field>, n: usize, measure: Measure, rng: &mut R) -> Result<GridFunction> {
    use rand_distr::{Distribution, StandardNormal};
    let size = Space::new(field.size(), n)?.size();
    let v = (0..size)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    GridFunction::from_complex(field, n, measure, v)
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
enum MeasureRepr {
    Counting,
    Normalized,
    Surface { variety: VarietyKind, d: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValuesRepr {
    Exact(Vec<CycloValue>),
    Float(Vec<[f64; 2]>),
}

#[derive(Serialize, Deserialize)]
struct GridFunctionRepr {
    field: FieldSpec,
    n: usize,
    measure: MeasureRepr,
    backend: Backend,
    values: ValuesRepr,
}

impl Serialize for GridFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let measure = match &self.measure {
            Measure::Counting => MeasureRepr::Counting,
            Measure::Normalized => MeasureRepr::Normalized,
            Measure::Surface(v) => MeasureRepr::Surface { variety: v.kind(), d: v.d() },
        };
        let values = match &self.values {
            Values::Exact(g) => ValuesRepr::Exact(g.values()),
            Values::Float(v) => ValuesRepr::Float(v.iter().map(|z| [z.re, z.im]).collect()),
        };
        GridFunctionRepr { field: self.field.spec(), n: self.n(), measure, backend: self.backend(), values }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = GridFunctionRepr::deserialize(d)?;
        let field = Arc::new(Field::from_spec(&repr.field).map_err(D::Error::custom)?);
        let measure = match repr.measure {
            MeasureRepr::Counting => Measure::Counting,
            MeasureRepr::Normalized => Measure::Normalized,
            MeasureRepr::Surface { variety, d } => {
                let v = match variety {
                    VarietyKind::FlatDisk => Variety::flat_disk(&field, d),
                    VarietyKind::Paraboloid => Variety::paraboloid(&field, d),
                    VarietyKind::SubspaceH => Variety::subspace_h(&field, d),
                }
                .map_err(D::Error::custom)?;
                Measure::Surface(Arc::new(v))
            }
        };
        let values = match (repr.backend, repr.values) {
            (Backend::Exact, ValuesRepr::Exact(v)) => {
                Values::Exact(CycloGrid::from_values(field.p(), &v).map_err(D::Error::custom)?)
            }
            (Backend::Float, ValuesRepr::Float(v)) => {
                Values::Float(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            }
            // An empty array parses as either shape.
            (Backend::Float, ValuesRepr::Exact(v)) if v.is_empty() => Values::Float(Vec::new()),
            _ => return Err(D::Error::custom("values do not match the declared backend")),
        };
        GridFunction::new(field, repr.n, measure, values).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> Arc<Field> {
        Arc::new(Field::with_order(q).unwrap())
    }

    fn exact_eq(a: &GridFunction, b: &GridFunction) -> bool {
        a.exact().unwrap().equals(b.exact().unwrap()).unwrap()
    }

    fn float_close(a: &GridFunction, b: &GridFunction, tol: f64) -> bool {
        let (x, y) = (a.to_complex_vec(), b.to_complex_vec());
        let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
        x.iter().zip(&y).all(|(u, v)| (u - v).norm() <= tol * scale)
    }

    #[test]
    fn forward_examples() {
        let f3 = f(3);
        let d0 = GridFunction::delta(f3.clone(), 2, Measure::Counting, 0, 1, Backend::Exact).unwrap();
        let hat = fourier_forward(&d0).unwrap();
        let one = GridFunction::constant(f3.clone(), 2, Measure::Normalized, 1, Backend::Exact).unwrap();
        assert!(exact_eq(&hat, &one));
        assert_eq!(*hat.measure(), Measure::Normalized);

        let c = GridFunction::constant(f3.clone(), 2, Measure::Counting, 1, Backend::Exact).unwrap();
        let hat = fourier_forward(&c).unwrap();
        let nine = GridFunction::delta(f3.clone(), 2, Measure::Normalized, 0, 9, Backend::Exact).unwrap();
        assert!(exact_eq(&hat, &nine));

        assert!(matches!(fourier_forward(&one), Err(Error::Contract(_))));
    }

    #[test]
    fn fast_equals_naive_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (q, n) in [(3, 4), (5, 2), (9, 2), (7, 1)] {
            let g = random_exact(f(q), n, Measure::Counting, &mut rng, 3, 0.7).unwrap();
            assert!(exact_eq(&fourier_forward(&g).unwrap(), &fourier_forward_naive(&g).unwrap()));
            let h = g.clone().with_measure(Measure::Normalized).unwrap();
            let a = inverse_vs_measure(&h, &Measure::Normalized).unwrap();
            let b = inverse_vs_measure_naive(&h, &Measure::Normalized).unwrap();
            assert!(exact_eq(&a, &b));
        }
    }

    #[test]
    fn fast_equals_naive_float() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_float(f(5), 3, Measure::Counting, &mut rng).unwrap();
        assert!(float_close(&fourier_forward(&g).unwrap(), &fourier_forward_naive(&g).unwrap(), 1e-10));
    }

    #[test]
    fn inverse_examples() {
        let f3 = f(3);
        let fd = Arc::new(Variety::flat_disk(&f3, 2).unwrap());
        let mu = Measure::Surface(fd.clone());
        let one = GridFunction::constant(f3.clone(), 4, mu.clone(), 1, Backend::Exact).unwrap();
        let sig = inverse_vs_measure(&one, &mu).unwrap();
        assert_eq!(sig.value(0), Scalar::Exact(CycloValue::one(3)));

        let one = GridFunction::constant(f3.clone(), 2, Measure::Normalized, 1, Backend::Exact).unwrap();
        let inv = inverse_vs_measure(&one, &Measure::Normalized).unwrap();
        assert_eq!(inv.value(0), Scalar::Exact(CycloValue::one(3)));
        assert!(matches!(inverse_vs_measure(&one, &mu), Err(Error::Contract(_))));

        let x0 = 5;
        let delta = GridFunction::delta(f3.clone(), 2, Measure::Normalized, x0, 9, Backend::Exact).unwrap();
        let inv = inverse_vs_measure(&delta, &Measure::Normalized).unwrap();
        let s = inv.space();
        for m in 0..s.size() {
            let t = f3.trace(f3.dot(&s.point(x0), &s.point(m)));
            assert_eq!(inv.value(m), Scalar::Exact(CycloValue::zeta(3, t as u64)));
        }
    }

    #[test]
    fn fourier_inversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_exact(f(5), 2, Measure::Counting, &mut rng, 4, 1.0).unwrap();
        let back = inverse_vs_measure(&fourier_forward(&g).unwrap(), &Measure::Normalized).unwrap();
        assert!(exact_eq(&back, &g));
    }

    #[test]
    fn convolution_examples() {
        let f3 = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_exact(f3.clone(), 3, Measure::Counting, &mut rng, 2, 1.0).unwrap();
        let d0 = GridFunction::delta(f3.clone(), 3, Measure::Counting, 0, 1, Backend::Exact).unwrap();
        assert!(exact_eq(&convolve_counting(&g, &d0).unwrap(), &g));

        let s = Space::new(3, 3).unwrap();
        let (a, b) = (s.point(5), s.point(22));
        let sum: Vec<_> = a.iter().zip(&b).map(|(&x, &y)| f3.add(x, y)).collect();
        let da = GridFunction::delta(f3.clone(), 3, Measure::Counting, 5, 1, Backend::Exact).unwrap();
        let db = GridFunction::delta(f3.clone(), 3, Measure::Counting, 22, 1, Backend::Exact).unwrap();
        let dab = GridFunction::delta(f3.clone(), 3, Measure::Counting, s.index(&sum), 1, Backend::Exact).unwrap();
        assert!(exact_eq(&convolve_counting(&da, &db).unwrap(), &dab));

        let h = random_exact(f3.clone(), 3, Measure::Counting, &mut rng, 2, 1.0).unwrap();
        let lhs = fourier_forward(&convolve_counting(&g, &h).unwrap()).unwrap();
        let rhs = fourier_forward(&g).unwrap().mul(&fourier_forward(&h).unwrap()).unwrap();
        assert!(exact_eq(&lhs, &rhs));
    }

    #[test]
    fn normalized_convolution_examples() {
        let f3 = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_exact(f3.clone(), 2, Measure::Normalized, &mut rng, 2, 1.0).unwrap();
        let id = GridFunction::delta(f3.clone(), 2, Measure::Normalized, 0, 9, Backend::Exact).unwrap();
        assert!(exact_eq(&convolve_normalized(&g, &id).unwrap(), &g));
        let one = GridFunction::constant(f3.clone(), 2, Measure::Normalized, 1, Backend::Exact).unwrap();
        assert!(exact_eq(&convolve_normalized(&one, &one).unwrap(), &one));
        let c = g.clone().with_measure(Measure::Counting).unwrap();
        assert!(convolve_normalized(&c, &c).is_err());
    }

    #[test]
    fn shape_mismatch_is_contract_error() {
        let a = GridFunction::constant(f(3), 2, Measure::Counting, 1, Backend::Exact).unwrap();
        let b = GridFunction::constant(f(3), 3, Measure::Counting, 1, Backend::Exact).unwrap();
        let c = GridFunction::constant(f(5), 2, Measure::Counting, 1, Backend::Exact).unwrap();
        let e = GridFunction::constant(f(3), 2, Measure::Counting, 1, Backend::Float).unwrap();
        assert!(matches!(convolve_counting(&a, &b), Err(Error::Contract(_))));
        assert!(matches!(convolve_counting(&a, &c), Err(Error::Contract(_))));
        assert!(matches!(convolve_counting(&a, &e), Err(Error::Contract(_))));
    }

    #[test]
    fn json_round_trip() {
        let f3 = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_exact(f3.clone(), 2, Measure::Counting, &mut rng, 3, 1.0).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GridFunction = serde_json::from_str(&text).unwrap();
        assert!(exact_eq(&g, &back));

        let fd = Arc::new(Variety::flat_disk(&f3, 2).unwrap());
        let h = random_float(f3, 4, Measure::Surface(fd), &mut rng).unwrap();
        let back: GridFunction = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back.measure(), h.measure());
        assert_eq!(back.to_complex_vec(), h.to_complex_vec());
    }

    #[test]
    fn backend_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_exact(f(7), 2, Measure::Counting, &mut rng, 5, 1.0).unwrap();
        let fl = g.to_float();
        for k in 0..g.len() {
            assert!((fl.value(k).to_complex() - g.value(k).to_complex()).norm() < 1e-12);
        }
    }
}
