//! Closed form of `(dσ)^∨` for the flat disk, the transforms of the Ω-classes,
//! the kernels `K_j = (dσ)^∨·1_{Ω_j}`, and brute-force checks of all of them.
//!
//! The Ω_4 branch is evaluated as `q^{1−d} η(m_d)^{d−1} G^{d−1} χ(Σ_{i<d} m_i² / (−4m_d))`
//! with `G^{d−1}` kept exact, which is well defined for every `d`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{gauss_sum, GaussSum};
use crate::cyclo::CycloValue;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::lattice::CycloGrid;
use crate::space::Space;
use crate::transform::{fourier_forward, inverse_vs_measure, Backend, GridFunction, Measure, Values};
use crate::varieties::{omega_classify_digits, omega_labels, Omega, Variety};

/// One value of `(dσ)^∨`: `sign · q^{q_exp} · G^{gauss_power} · ζ^{zeta}`, or zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaValue {
    Zero,
    Term { q: u32, q_exp: i32, sign: i8, gauss_power: u32, zeta: u32 },
}

fn q_pow(q: u32, e: i32) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

impl SigmaValue {
    pub fn to_cyclo(&self, gauss: &GaussSum) -> CycloValue {
        match *self {
            SigmaValue::Zero => CycloValue::zero(gauss.value.p()),
            SigmaValue::Term { q, q_exp, sign, gauss_power, zeta } => {
                let scale = q_pow(q, q_exp) * BigInt::from(sign);
                gauss.power(gauss_power).mul_zeta(zeta as u64).scale(&scale)
            }
        }
    }

    /// `|value|²`, exact (`|G|² = q`).
    pub fn modulus_sq(&self) -> BigRational {
        match *self {
            SigmaValue::Zero => BigRational::zero(),
            SigmaValue::Term { q, q_exp, gauss_power, .. } => q_pow(q, 2 * q_exp + gauss_power as i32),
        }
    }
}

/// Closed-form evaluator of `(dσ)^∨` on `F_q^{2d}`.
#[derive(Clone, Debug)]
pub struct SigmaTransform {
    field: Arc<Field>,
    d: usize,
    gauss: GaussSum,
    /// `G^{d−1}` as integer coefficients over `ζ^0, …, ζ^{p−1}`.
    gauss_pow: Vec<i128>,
}

impl SigmaTransform {
    pub fn new(field: Arc<Field>, d: usize) -> Result<SigmaTransform> {
        if d < 2 {
            return Err(Error::Domain(format!("d must be at least 2, got {d}")));
        }
        let gauss = gauss_sum(&field);
        let gp = gauss.power(d as u32 - 1);
        let mut gauss_pow = Vec::with_capacity(field.p() as usize);
        for c in gp.coeffs() {
            if !c.is_integer() {
                return Err(Error::Contract("G^{d−1} is not an algebraic integer".into()));
            }
            gauss_pow.push(c.to_integer().to_i128().ok_or_else(|| Error::Overflow("G^{d−1}".into()))?);
        }
        gauss_pow.push(0);
        Ok(SigmaTransform { field, d, gauss, gauss_pow })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn gauss(&self) -> &GaussSum {
        &self.gauss
    }

    pub fn space(&self) -> Result<Space> {
        Space::new(self.field.size(), 2 * self.d)
    }

    /// Branch value from the coordinate digits of `m`.
    pub fn value_digits(&self, m: &[usize]) -> SigmaValue {
        let f = &*self.field;
        let d = self.d;
        let q = f.q();
        let e = |i: usize| f.element(m[i]);
        let cross = || {
            (0..d - 1).fold(f.zero(), |acc, i| f.add(acc, f.mul(e(i), e(d + i))))
        };
        let tr = |x: FieldElement| f.trace(x);
        let term = |q_exp: i32, sign: i8, gauss_power: u32, zeta: u32| SigmaValue::Term {
            q,
            q_exp,
            sign,
            gauss_power,
            zeta: zeta % f.p(),
        };
        let low = 1 - d as i32;
        match omega_classify_digits(m, d) {
            Omega::O0 => term(0, 1, 0, 0),
            Omega::O1 | Omega::O3 => SigmaValue::Zero,
            Omega::O2 => {
                let arg = f.div(cross(), f.neg(e(2 * d - 1))).expect("m_2d is nonzero");
                term(low, 1, 0, tr(arg))
            }
            Omega::O4 => {
                let md = e(d - 1);
                let norm = (0..d - 1).fold(f.zero(), |acc, i| f.add(acc, f.mul(e(i), e(i))));
                let arg = f.div(norm, f.mul(f.from_int(-4), md)).expect("m_d is nonzero");
                let eta = f.eta(md).expect("m_d is nonzero");
                let sign = if eta < 0 && (d - 1) % 2 == 1 { -1 } else { 1 };
                term(low, sign, d as u32 - 1, tr(arg))
            }
            Omega::O5 => {
                let m2d = e(2 * d - 1);
                let beta_sq = (0..d - 1).fold(f.zero(), |acc, i| f.add(acc, f.mul(e(d + i), e(d + i))));
                let arg1 = f.div(f.mul(e(d - 1), beta_sq), f.mul(m2d, m2d)).expect("m_2d is nonzero");
                let arg2 = f.div(cross(), f.neg(m2d)).expect("m_2d is nonzero");
                term(low, 1, 0, tr(arg1) + tr(arg2))
            }
        }
    }

    pub fn value(&self, m: &[FieldElement]) -> Result<SigmaValue> {
        if m.len() != 2 * self.d {
            return Err(Error::Contract(format!("point has {} coordinates, expected {}", m.len(), 2 * self.d)));
        }
        let digits: Vec<usize> = m.iter().map(|x| x.index()).collect();
        Ok(self.value_digits(&digits))
    }

    /// All values on `F_q^{2d}` as a lattice grid with denominator `q^{2d−2}`.
    pub fn grid(&self) -> Result<CycloGrid> {
        let space = self.space()?;
        let p = self.field.p() as usize;
        let q = self.field.q() as i128;
        let half = q.pow(self.d as u32 - 1);
        let denom = half * half;
        let mut data = vec![0i128; space.size() * p];
        let mut digits = vec![0; 2 * self.d];
        for k in 0..space.size() {
            space.digits_into(k, &mut digits);
            let out = &mut data[k * p..(k + 1) * p];
            match self.value_digits(&digits) {
                SigmaValue::Zero => {}
                SigmaValue::Term { q_exp: 0, .. } => out[0] = denom,
                SigmaValue::Term { sign, gauss_power, zeta, .. } => {
                    let s = zeta as usize;
                    let c = half * sign as i128;
                    if gauss_power == 0 {
                        out[s] = c;
                    } else {
                        for (j, &g) in self.gauss_pow.iter().enumerate() {
                            out[(j + s) % p] += c * g;
                        }
                    }
                }
            }
        }
        CycloGrid::from_raw(self.field.p(), data, denom)
    }

    /// `(dσ)^∨` as a counting-measure function.
    pub fn grid_function(&self) -> Result<GridFunction> {
        GridFunction::new(self.field.clone(), 2 * self.d, Measure::Counting, Values::Exact(self.grid()?))
    }
}

/// `(dσ)^∨(m)` for a single point, exact.
pub fn sigma_ft_closed(field: Arc<Field>, m: &[FieldElement], d: usize) -> Result<CycloValue> {
    let st = SigmaTransform::new(field, d)?;
    Ok(st.value(m)?.to_cyclo(st.gauss()))
}

/// `(dσ)^∨` by direct summation over the flat disk (fast transform path).
pub fn sigma_ft_brute(field: Arc<Field>, d: usize) -> Result<GridFunction> {
    let v = Arc::new(Variety::flat_disk(&field, d)?);
    let mu = Measure::Surface(v.clone());
    let one = GridFunction::indicator(field, &v, mu.clone(), Backend::Exact)?;
    inverse_vs_measure(&one, &mu)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub point: Vec<usize>,
    pub class: Omega,
    pub closed: String,
    pub brute: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub q: u32,
    pub p: u32,
    pub ell: u32,
    pub d: usize,
    pub points_checked: usize,
    /// Largest `|closed − brute|` per Ω-class, indexed by class.
    pub per_class_max_dev: [f64; 6],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

const MAX_REPORTED_MISMATCHES: usize = 10;

/// Compares the closed form against brute force at every point of `F_q^{2d}`.
pub fn verify_sigma_ft(field: Arc<Field>, d: usize) -> Result<OracleReport> {
    let st = SigmaTransform::new(field.clone(), d)?;
    let space = st.space()?;
    let closed = st.grid()?;
    let brute_fn = sigma_ft_brute(field.clone(), d)?;
    let brute = brute_fn.exact()?;
    let mut per_class_max_dev = [0.0f64; 6];
    let mut mismatches = Vec::new();
    let mut digits = vec![0; 2 * d];
    for k in 0..space.size() {
        if closed.eq_point(k, brute, k)? {
            continue;
        }
        space.digits_into(k, &mut digits);
        let class = omega_classify_digits(&digits, d);
        let (c, b) = (closed.get(k), brute.get(k));
        let dev = (c.to_complex() - b.to_complex()).norm();
        let slot = &mut per_class_max_dev[class.index()];
        *slot = slot.max(dev).max(f64::MIN_POSITIVE);
        if mismatches.len() < MAX_REPORTED_MISMATCHES {
            mismatches.push(Mismatch {
                index: k,
                point: digits.clone(),
                class,
                closed: c.to_string(),
                brute: b.to_string(),
            });
        }
    }
    let pass = mismatches.is_empty();
    Ok(OracleReport {
        q: field.q(),
        p: field.p(),
        ell: field.ell(),
        d,
        points_checked: space.size(),
        per_class_max_dev,
        mismatches,
        pass,
    })
}

fn delta(ys: &[usize]) -> i128 {
    ys.iter().all(|&y| y == 0) as i128
}

/// Closed form of `Ω̂_j(y) = Σ_{m∈Ω_j} χ(−y·m)` for `j ∈ {2, 4, 5}`, from digits of `y`.
pub fn omega_hat_closed_digits(j: usize, y: &[usize], d: usize, q: u32) -> Result<i128> {
    let q = q as i128;
    let k = q.pow(d as u32 - 1);
    let low = delta(&y[..d - 1]);
    let mid = delta(&y[d..2 * d - 1]);
    let yd = q * delta(&y[d - 1..d]) - 1;
    let y2d = q * delta(&y[2 * d - 1..]) - 1;
    match j {
        2 => Ok(k * k * low * mid * y2d),
        4 => Ok(k * low * yd),
        5 => Ok(k * k * low * mid * yd * y2d),
        _ => Err(Error::Domain(format!(
            "no closed form for the transform of Omega_{j}; compute it by transform"
        ))),
    }
}

pub fn omega_hat_closed(j: usize, y: &[FieldElement], d: usize, q: u32) -> Result<i128> {
    if y.len() != 2 * d {
        return Err(Error::Contract(format!("point has {} coordinates, expected {}", y.len(), 2 * d)));
    }
    let digits: Vec<usize> = y.iter().map(|e| e.index()).collect();
    omega_hat_closed_digits(j, &digits, d, q)
}

/// Indicator of one Ω-class as a counting-measure function.
pub fn omega_indicator(field: Arc<Field>, d: usize, class: Omega) -> Result<GridFunction> {
    let space = Space::new(field.size(), 2 * d)?;
    let ints: Vec<i64> = omega_labels(space, d).into_iter().map(|w| (w == class) as i64).collect();
    GridFunction::from_integers(field, 2 * d, Measure::Counting, &ints)
}

/// Checks the closed forms of `Ω̂_2, Ω̂_4, Ω̂_5` against the transform of `1_{Ω_j}`.
pub fn verify_omega_hat(field: Arc<Field>, d: usize) -> Result<bool> {
    let space = Space::new(field.size(), 2 * d)?;
    let mut digits = vec![0; 2 * d];
    for (j, class) in [(2, Omega::O2), (4, Omega::O4), (5, Omega::O5)] {
        let hat = fourier_forward(&omega_indicator(field.clone(), d, class)?)?;
        let g = hat.exact()?;
        for k in 0..space.size() {
            space.digits_into(k, &mut digits);
            let expected = omega_hat_closed_digits(j, &digits, d, field.q())?;
            if g.rational_numer(k).map(|n| n != expected * g.denom()).unwrap_or(true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `K_j = (dσ)^∨·1_{Ω_j}` on `F_q^{2d}`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub j: usize,
    pub values: GridFunction,
}

impl Kernel {
    pub fn transform(&self) -> Result<GridFunction> {
        fourier_forward(&self.values)
    }
}

fn mask_grid(grid: &CycloGrid, labels: &[Omega], class: Omega) -> Result<CycloGrid> {
    let p = grid.p() as usize;
    let mut data = grid.data().to_vec();
    for (k, &w) in labels.iter().enumerate() {
        if w != class {
            data[k * p..(k + 1) * p].iter_mut().for_each(|c| *c = 0);
        }
    }
    CycloGrid::from_raw(grid.p(), data, grid.denom())
}

/// All six pieces `δ_0 = K_0, K_1, …, K_5` of the decomposition of `(dσ)^∨`.
pub fn kernels(field: Arc<Field>, d: usize) -> Result<Vec<Kernel>> {
    let st = SigmaTransform::new(field.clone(), d)?;
    let grid = st.grid()?;
    let labels = omega_labels(st.space()?, d);
    Omega::ALL
        .iter()
        .map(|&class| {
            let g = mask_grid(&grid, &labels, class)?;
            let values = GridFunction::new(field.clone(), 2 * d, Measure::Counting, Values::Exact(g))?;
            Ok(Kernel { j: class.index(), values })
        })
        .collect()
}

pub fn kernel(field: Arc<Field>, d: usize, j: usize) -> Result<Kernel> {
    let class = Omega::from_index(j).ok_or_else(|| Error::Domain(format!("no kernel K_{j}")))?;
    let st = SigmaTransform::new(field.clone(), d)?;
    let g = mask_grid(&st.grid()?, &omega_labels(st.space()?, d), class)?;
    let values = GridFunction::new(field, 2 * d, Measure::Counting, Values::Exact(g))?;
    Ok(Kernel { j, values })
}

/// Checks `δ_0 + K_1 + ⋯ + K_5 = (dσ)^∨` pointwise, against brute force.
pub fn verify_decomposition(field: Arc<Field>, d: usize) -> Result<bool> {
    let ks = kernels(field.clone(), d)?;
    let mut sum = ks[0].values.exact()?.clone();
    for k in &ks[1..] {
        sum = sum.add(k.values.exact()?)?;
    }
    let brute = sigma_ft_brute(field, d)?;
    let delta_ok = {
        let k0 = ks[0].values.exact()?;
        k0.rational_numer(0) == Some(k0.denom()) && (1..k0.len()).all(|k| k0.is_zero_at(k))
    };
    Ok(delta_ok && sum.equals(brute.exact()?)?)
}

/// Largest `|g|²` over the grid as an exact rational, or `None` if some
/// modulus is irrational.
fn sup_modulus_sq(g: &CycloGrid) -> Result<Option<BigRational>> {
    let mut best: i128 = 0;
    for k in 0..g.len() {
        match g.modulus_sq_numer(k)? {
            Some(n) => best = best.max(n),
            None => return Ok(None),
        }
    }
    let d = BigInt::from(g.denom());
    Ok(Some(BigRational::new(BigInt::from(best), &d * &d)))
}

fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn to_f64(r: &BigRational) -> f64 {
    crate::lattice::to_f64(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelStats {
    pub j: usize,
    pub q: u32,
    pub d: usize,
    /// `sup|K_j|²`, exact.
    pub sup_sq: String,
    pub sup: f64,
    /// Expected `sup|K_j|²`, exact.
    pub expected_sup_sq: String,
    /// `sup|K̂_j|²`, exact when every modulus is rational.
    pub sup_hat_sq: Option<String>,
    pub sup_hat: f64,
    /// Bound asserted for `sup|K̂_j|`: `2q` for `j = 4`, `4q²` for `j = 2, 5`, 0 for `j = 1, 3`.
    pub hat_bound: f64,
    pub pass: bool,
}

/// Exact sup-norms of `K_j` and `K̂_j`, compared with the expected values and bounds.
pub fn kernel_stats(j: usize, field: Arc<Field>, d: usize) -> Result<KernelStats> {
    if !(1..=5).contains(&j) {
        return Err(Error::Domain(format!("kernel index must be in 1..=5, got {j}")));
    }
    let k = kernel(field.clone(), d, j)?;
    let q = field.q();
    let qr = BigRational::from_integer(BigInt::from(q));
    let grid = k.values.exact()?;
    let sup_sq = sup_modulus_sq(grid)?
        .ok_or_else(|| Error::Contract(format!("|K_{j}|² is not rational")))?;
    let expected = match j {
        2 | 5 => q_pow(q, 2 - 2 * d as i32),
        4 => q_pow(q, 1 - d as i32),
        _ => BigRational::zero(),
    };
    let hat = k.transform()?;
    let hat_grid = hat.exact()?;
    let sup_hat_sq = sup_modulus_sq(hat_grid)?;
    let sup_hat = match &sup_hat_sq {
        Some(r) => to_f64(r).sqrt(),
        None => hat.to_complex_vec().iter().map(|z| z.norm()).fold(0.0, f64::max),
    };
    let (bound_sq, hat_bound) = match j {
        4 => (&qr * &qr * BigInt::from(4), 2.0 * q as f64),
        2 | 5 => (num_traits::pow(qr.clone(), 4) * BigInt::from(16), 4.0 * (q as f64).powi(2)),
        _ => (BigRational::zero(), 0.0),
    };
    let hat_ok = match &sup_hat_sq {
        Some(r) => *r <= bound_sq,
        None => sup_hat <= hat_bound,
    };
    Ok(KernelStats {
        j,
        q,
        d,
        sup: to_f64(&sup_sq).sqrt(),
        pass: sup_sq == expected && hat_ok,
        sup_sq: ratio_string(&sup_sq),
        expected_sup_sq: ratio_string(&expected),
        sup_hat_sq: sup_hat_sq.as_ref().map(ratio_string),
        sup_hat,
        hat_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub q: u32,
    pub d: usize,
    /// `max_{m≠0} |(dσ)^∨(m)|²` from brute force, exact.
    pub max_modulus_sq: String,
    /// `q^{(2−n)/2}`.
    pub expected: String,
    /// Ω-classes containing a maximizer.
    pub attained_on: Vec<Omega>,
    /// Whether every point of Ω_4 attains the maximum.
    pub attained_on_all_of_omega4: bool,
    /// Distinct values of `|(dσ)^∨|²` per Ω-class.
    pub class_moduli: Vec<Vec<String>>,
    pub pass: bool,
}

/// Decay of `(dσ)^∨` away from the origin, by brute force.
pub fn decay_profile(field: Arc<Field>, d: usize) -> Result<DecayReport> {
    let brute = sigma_ft_brute(field.clone(), d)?;
    let g = brute.exact()?;
    let space = brute.space();
    let labels = omega_labels(space, d);
    let mut numers = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        numers.push(
            g.modulus_sq_numer(k)?
                .ok_or_else(|| Error::Contract("|(dσ)^∨|² is not rational".into()))?,
        );
    }
    let best = numers[1..].iter().copied().max().unwrap_or(0);
    let den = BigInt::from(g.denom()) * BigInt::from(g.denom());
    let max = BigRational::new(BigInt::from(best), den.clone());
    let expected = q_pow(field.q(), 1 - d as i32);
    let mut attained_on: Vec<Omega> = Vec::new();
    let mut all_o4 = true;
    let mut class_values: Vec<Vec<i128>> = vec![Vec::new(); 6];
    for (k, (&n, &w)) in numers.iter().zip(&labels).enumerate() {
        let vals = &mut class_values[w.index()];
        if !vals.contains(&n) {
            vals.push(n);
        }
        if k == 0 {
            continue;
        }
        if n == best && !attained_on.contains(&w) {
            attained_on.push(w);
        }
        if w == Omega::O4 && n != best {
            all_o4 = false;
        }
    }
    attained_on.sort();
    let class_moduli = class_values
        .into_iter()
        .map(|mut v| {
            v.sort();
            v.into_iter().map(|n| ratio_string(&BigRational::new(BigInt::from(n), den.clone()))).collect()
        })
        .collect();
    let pass = max == expected && attained_on == vec![Omega::O4] && all_o4;
    Ok(DecayReport {
        q: field.q(),
        d,
        max_modulus_sq: ratio_string(&max),
        expected: ratio_string(&expected),
        attained_on,
        attained_on_all_of_omega4: all_o4,
        class_moduli,
        pass,
    })
}

/// Checks the expansions of `K̂_2` and `K̂_5` as signed counts of flat-disk points
/// on lines through `x` in the `x_d` and `x_{2d}` directions.
pub fn verify_kernel_hat_expansions(field: Arc<Field>, d: usize) -> Result<bool> {
    let fd = Variety::flat_disk(&field, d)?;
    let space = fd.space();
    let q = field.q() as i128;
    let stride_d = q.pow(d as u32) as usize;
    let qs = q as usize;
    let mut digits = vec![0; 2 * d];
    let k2 = kernel(field.clone(), d, 2)?.transform()?;
    let k5 = kernel(field.clone(), d, 5)?.transform()?;
    let (g2, g5) = (k2.exact()?, k5.exact()?);
    for x in 0..space.size() {
        space.digits_into(x, &mut digits);
        let base = x - digits[d - 1] * stride_d - digits[2 * d - 1];
        // Counts over the x_d-line, the x_{2d}-line and the (x_d, x_{2d})-plane through x.
        let mut line_d = 0i128;
        let mut line_2d = 0i128;
        let mut plane = 0i128;
        for a in 0..qs {
            for b in 0..qs {
                if fd.contains_index(base + a * stride_d + b) {
                    plane += 1;
                    if b == digits[2 * d - 1] {
                        line_d += 1;
                    }
                    if a == digits[d - 1] {
                        line_2d += 1;
                    }
                }
            }
        }
        let point = fd.contains_index(x) as i128;
        let e2 = q * line_d - plane;
        let e5 = q * q * point - q * line_d - q * line_2d + plane;
        if g2.rational_numer(x) != Some(e2 * g2.denom()) || g5.rational_numer(x) != Some(e5 * g5.denom()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn f(q: u32) -> Arc<Field> {
        Arc::new(Field::with_order(q).unwrap())
    }

    fn pt(field: &Field, v: &[usize]) -> Vec<FieldElement> {
        v.iter().map(|&i| field.element(i)).collect()
    }

    #[test]
    fn closed_form_examples() {
        let f3 = f(3);
        let zero = sigma_ft_closed(f3.clone(), &pt(&f3, &[0, 0, 0, 0]), 2).unwrap();
        assert_eq!(zero, CycloValue::one(3));
        let o1 = sigma_ft_closed(f3.clone(), &pt(&f3, &[1, 0, 0, 0]), 2).unwrap();
        assert!(o1.is_zero());
        let st = SigmaTransform::new(f3.clone(), 2).unwrap();
        let v = st.value(&pt(&f3, &[0, 1, 0, 0])).unwrap();
        assert_eq!(v.modulus_sq(), BigRational::new(1.into(), 3.into()));
        let brute = sigma_ft_brute(f3.clone(), 2).unwrap();
        let idx = brute.space().index(&pt(&f3, &[0, 1, 0, 0]));
        assert_eq!(brute.exact().unwrap().get(idx), v.to_cyclo(st.gauss()));
        assert!(sigma_ft_closed(f3, &pt(&f(3), &[0, 0, 0]), 2).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        for (q, d, n) in [(3, 2, 81), (5, 2, 625), (3, 3, 729), (9, 2, 6561)] {
            let r = verify_sigma_ft(f(q), d).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.points_checked, n);
            assert_eq!(r.per_class_max_dev, [0.0; 6]);
        }
    }

    #[test]
    fn modulus_profile() {
        for (q, d) in [(3, 2), (5, 2), (3, 3)] {
            let field = f(q);
            let st = SigmaTransform::new(field.clone(), d).unwrap();
            let space = st.space().unwrap();
            let mut digits = vec![0; 2 * d];
            for k in 0..space.size() {
                space.digits_into(k, &mut digits);
                let expected = match omega_classify_digits(&digits, d) {
                    Omega::O0 => BigRational::one(),
                    Omega::O1 | Omega::O3 => BigRational::zero(),
                    Omega::O2 | Omega::O5 => q_pow(q, 2 - 2 * d as i32),
                    Omega::O4 => q_pow(q, 1 - d as i32),
                };
                assert_eq!(st.value_digits(&digits).modulus_sq(), expected);
            }
        }
    }

    #[test]
    fn omega_hat_examples() {
        let f3 = f(3);
        assert_eq!(omega_hat_closed(2, &pt(&f3, &[0, 0, 0, 0]), 2, 3).unwrap(), 18);
        assert_eq!(omega_hat_closed(4, &pt(&f3, &[0, 0, 0, 0]), 2, 3).unwrap(), 6);
        assert_eq!(omega_hat_closed(5, &pt(&f3, &[1, 0, 0, 0]), 2, 3).unwrap(), 0);
        assert!(matches!(omega_hat_closed(1, &pt(&f3, &[0, 0, 0, 0]), 2, 3), Err(Error::Domain(_))));
        assert!(matches!(omega_hat_closed(3, &pt(&f3, &[0, 0, 0, 0]), 2, 3), Err(Error::Domain(_))));
        for (q, d) in [(3, 2), (5, 2), (3, 3)] {
            assert!(verify_omega_hat(f(q), d).unwrap());
        }
    }

    #[test]
    fn decomposition_and_expansions() {
        for (q, d) in [(3, 2), (5, 2), (3, 3)] {
            assert!(verify_decomposition(f(q), d).unwrap());
            assert!(verify_kernel_hat_expansions(f(q), d).unwrap());
        }
    }

    #[test]
    fn kernel_stats_examples() {
        let s4 = kernel_stats(4, f(3), 2).unwrap();
        assert_eq!(s4.sup_sq, "1/3");
        assert!(s4.sup_hat <= 6.0 && s4.pass);
        let s2 = kernel_stats(2, f(3), 2).unwrap();
        assert_eq!(s2.sup_sq, "1/9");
        assert!((s2.sup - 1.0 / 3.0).abs() < 1e-15 && s2.pass);
        for j in [1, 3] {
            let s = kernel_stats(j, f(3), 2).unwrap();
            assert_eq!(s.sup_sq, "0");
            assert_eq!(s.sup_hat, 0.0);
            assert!(s.pass);
        }
        assert!(kernel_stats(6, f(3), 2).is_err());
    }

    #[test]
    fn decay_examples() {
        let r = decay_profile(f(3), 2).unwrap();
        assert_eq!(r.max_modulus_sq, "1/3");
        assert!(r.pass);
        assert_eq!(decay_profile(f(5), 2).unwrap().max_modulus_sq, "1/5");
        assert_eq!(decay_profile(f(3), 3).unwrap().max_modulus_sq, "1/9");
    }
}
