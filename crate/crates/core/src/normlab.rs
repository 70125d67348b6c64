//! Norms, the extension operator `R*f = (f dσ)^∨` and restriction `Rg = ĝ|_V`,
//! the adjointness and `RR*` identities, lower bounds for `R*(2 → r)` by
//! nonlinear power iteration, closed-form probes, and the Kakeya maximal operator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::space::Space;
use crate::transform::{
    convolve_counting, fourier_forward, inverse_vs_measure, transform_float, Backend, GridFunction,
    Measure, Scalar, Values,
};
use crate::varieties::{Variety, VarietyKind};

/// An exponent in `[1, ∞]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum LpExponent {
    Finite(Rational64),
    Infinity,
}

impl LpExponent {
    pub fn int(p: i64) -> LpExponent {
        LpExponent::Finite(Rational64::from_integer(p))
    }

    pub fn ratio(a: i64, b: i64) -> LpExponent {
        LpExponent::Finite(Rational64::new(a, b))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            LpExponent::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            LpExponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Rational64 {
        match self {
            LpExponent::Finite(r) => r.recip(),
            LpExponent::Infinity => Rational64::zero(),
        }
    }

    /// Hölder conjugate `p'`, `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Result<LpExponent> {
        self.validate()?;
        let inv = Rational64::from_integer(1) - self.reciprocal();
        Ok(if inv.is_zero() { LpExponent::Infinity } else { LpExponent::Finite(inv.recip()) })
    }

    pub fn validate(self) -> Result<()> {
        match self {
            LpExponent::Finite(r) if r < Rational64::from_integer(1) => {
                Err(Error::Domain(format!("exponent {r} is below 1")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpExponent::Finite(r) => write!(f, "{r}"),
            LpExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for LpExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<LpExponent> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(LpExponent::Infinity);
        }
        let bad = || Error::Parse(format!("bad exponent {s:?}"));
        let r = match t.split_once('/') {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if b == 0 {
                    return Err(bad());
                }
                Rational64::new(a, b)
            }
            None => Rational64::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(LpExponent::Finite(r))
    }
}

impl Serialize for LpExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LpExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Compensated summation, so that norms of large grids stay accurate to a few ulps.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

fn norm_of_moduli(moduli: impl Iterator<Item = f64>, p: LpExponent, mass: f64) -> f64 {
    match p {
        LpExponent::Infinity => moduli.fold(0.0, f64::max),
        LpExponent::Finite(_) => {
            let pf = p.to_f64();
            let mut acc = Sum::default();
            for a in moduli {
                if a > 0.0 {
                    acc.add(a.powf(pf));
                }
            }
            (acc.value() * mass).powf(1.0 / pf)
        }
    }
}

/// `‖f‖_{L^p}` under the function's own measure.
pub fn lp_norm(f: &GridFunction, p: LpExponent) -> Result<f64> {
    p.validate()?;
    let vals = f.to_complex_vec();
    Ok(match f.measure() {
        Measure::Counting => norm_of_moduli(vals.iter().map(|z| z.norm()), p, 1.0),
        Measure::Normalized => norm_of_moduli(vals.iter().map(|z| z.norm()), p, 1.0 / vals.len() as f64),
        Measure::Surface(v) => {
            norm_of_moduli(v.points().iter().map(|&i| vals[i].norm()), p, 1.0 / v.len() as f64)
        }
    })
}

/// `‖f‖_{L^p}` computed from exact moduli grouped by value, for exact functions
/// whose squared moduli are all rational.
pub fn lp_norm_exact(f: &GridFunction, p: LpExponent) -> Result<f64> {
    p.validate()?;
    let g = f.exact()?;
    let support: Vec<usize> = match f.measure() {
        Measure::Surface(v) => v.points().to_vec(),
        _ => (0..g.len()).collect(),
    };
    let mass = match f.measure() {
        Measure::Counting => 1.0,
        Measure::Normalized => 1.0 / g.len() as f64,
        Measure::Surface(v) => 1.0 / v.len() as f64,
    };
    let mut counts: BTreeMap<i128, u64> = BTreeMap::new();
    for k in support {
        let n = g
            .modulus_sq_numer(k)?
            .ok_or_else(|| Error::Contract("squared modulus is not rational".into()))?;
        *counts.entry(n).or_default() += 1;
    }
    let den = (g.denom() as f64).powi(2);
    Ok(match p {
        LpExponent::Infinity => counts.keys().next_back().map_or(0.0, |&n| (n as f64 / den).sqrt()),
        LpExponent::Finite(_) => {
            let pf = p.to_f64();
            let mut acc = Sum::default();
            for (&n, &c) in &counts {
                if n > 0 {
                    acc.add(c as f64 * (n as f64 / den).powf(pf / 2.0));
                }
            }
            (acc.value() * mass).powf(1.0 / pf)
        }
    })
}

fn surface_variety(f: &GridFunction) -> Result<Arc<Variety>> {
    match f.measure() {
        Measure::Surface(v) => Ok(v.clone()),
        m => Err(Error::Contract(format!("expected a function on a variety, got measure {m}"))),
    }
}

/// `R*f = (f dσ)^∨` for `f` carried by a surface measure.
pub fn extend(f: &GridFunction) -> Result<GridFunction> {
    let v = surface_variety(f)?;
    inverse_vs_measure(f, &Measure::Surface(v))
}

/// `Rg = ĝ|_V`, as a function under `dσ_V`.
pub fn restrict(g: &GridFunction, v: &Arc<Variety>) -> Result<GridFunction> {
    v.check_field(g.field())?;
    fourier_forward(g)?.restricted_to(v)?.with_measure(Measure::Surface(v.clone()))
}

/// `⟨Rg, f⟩_{L²(σ)}` and `⟨g, R*f⟩_{L²(dm)}`.
pub fn adjointness(g: &GridFunction, f: &GridFunction) -> Result<(Scalar, Scalar)> {
    let v = surface_variety(f)?;
    let lhs = restrict(g, &v)?.inner(f)?;
    let rhs = g.inner(&extend(f)?)?;
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

fn scalar_string(s: &Scalar) -> String {
    match s {
        Scalar::Exact(v) => v.to_string(),
        Scalar::Float(z) => format!("{:.15e}{:+.15e}i", z.re, z.im),
    }
}

fn identity_report(name: &str, lhs: Scalar, rhs: Scalar, tol: f64) -> IdentityReport {
    IdentityReport {
        name: name.into(),
        pass: lhs.agrees(&rhs, tol),
        lhs: scalar_string(&lhs),
        rhs: scalar_string(&rhs),
    }
}

pub fn adjointness_check(g: &GridFunction, f: &GridFunction, tol: f64) -> Result<IdentityReport> {
    let (lhs, rhs) = adjointness(g, f)?;
    Ok(identity_report("adjointness", lhs, rhs, tol))
}

/// `‖ĝ‖²_{L²(σ)} = ⟨g, g ∗ (dσ)^∨⟩`, with `(dσ)^∨` computed by the same backend as `g`.
pub fn rr_star_check(g: &GridFunction, v: &Arc<Variety>, tol: f64) -> Result<IdentityReport> {
    let rg = restrict(g, v)?;
    let lhs = rg.inner(&rg)?;
    let mu = Measure::Surface(v.clone());
    let one = GridFunction::constant(g.field().clone(), g.n(), mu.clone(), 1, g.backend())?;
    let sigma = inverse_vs_measure(&one, &mu)?;
    let rhs = g.inner(&convolve_counting(g, &sigma)?)?;
    Ok(identity_report("rr_star", lhs, rhs, tol))
}

/// Ratio `‖(f dσ)^∨‖_{L^r(dm)} / ‖f‖_{L^2(σ)}` for a float function on `V`.
pub fn extension_ratio(f: &GridFunction, r: LpExponent) -> Result<f64> {
    let num = lp_norm(&extend(f)?, r)?;
    let den = lp_norm(f, LpExponent::int(2))?;
    if den == 0.0 {
        return Err(Error::Domain("zero function has no extension ratio".into()));
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartOutcome {
    pub label: String,
    pub ratio: f64,
    pub iterations: usize,
    pub converged: bool,
    pub monotone: bool,
}

/// Lower bound for `R*_V(2 → r)` with the witness that attains it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorEstimate {
    pub variety: VarietyKind,
    pub d: usize,
    pub q: u32,
    pub p: LpExponent,
    pub r: LpExponent,
    pub starts: Vec<StartOutcome>,
    pub best: f64,
    pub best_label: String,
    /// Objective per step for the best start.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub monotone: bool,
    #[serde(skip)]
    pub witness: Option<GridFunction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub restarts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { restarts: 16, iters: 500, tol: 1e-10, seed: 0 }
    }
}

/// Allowed relative decrease of the objective in one step before a run is flagged.
pub const MONOTONE_SLACK: f64 = 1e-12;

struct Iterator2 {
    field: Arc<Field>,
    space: Space,
    variety: Arc<Variety>,
    r: f64,
}

impl Iterator2 {
    fn l2_sigma(&self, f: &[Complex64]) -> f64 {
        let mut acc = Sum::default();
        for &i in self.variety.points() {
            acc.add(f[i].norm_sqr());
        }
        (acc.value() / self.variety.len() as f64).sqrt()
    }

    fn extend(&self, f: &[Complex64]) -> Vec<Complex64> {
        let s = 1.0 / self.variety.len() as f64;
        transform_float(&self.field, self.space, f, 1).into_iter().map(|z| z * s).collect()
    }

    fn lr(&self, u: &[Complex64]) -> f64 {
        let mut acc = Sum::default();
        for z in u {
            let a = z.norm();
            if a > 0.0 {
                acc.add(a.powf(self.r));
            }
        }
        acc.value().powf(1.0 / self.r)
    }

    fn normalize(&self, f: &mut [Complex64]) -> bool {
        let n = self.l2_sigma(f);
        if n == 0.0 || !n.is_finite() {
            return false;
        }
        f.iter_mut().for_each(|z| *z /= n);
        true
    }

    /// Runs the iteration from `f`; returns (best ratio, trace, witness, converged, monotone).
    fn run(&self, mut f: Vec<Complex64>, iters: usize, tol: f64) -> (f64, Vec<f64>, Vec<Complex64>, bool, bool) {
        let member = self.variety.membership();
        if !self.normalize(&mut f) {
            return (0.0, Vec::new(), f, true, true);
        }
        let mut u = self.extend(&f);
        let mut obj = self.lr(&u);
        let mut trace = vec![obj];
        let mut best = (obj, f.clone());
        let mut monotone = true;
        let mut converged = false;
        for _ in 0..iters {
            let w: Vec<Complex64> =
                u.iter().map(|&z| if z.is_zero() { z } else { z * z.norm().powf(self.r - 2.0) }).collect();
            let mut g = transform_float(&self.field, self.space, &w, -1);
            for (z, &inside) in g.iter_mut().zip(member) {
                if !inside {
                    *z = Complex64::zero();
                }
            }
            if !self.normalize(&mut g) {
                converged = true;
                break;
            }
            let u2 = self.extend(&g);
            let obj2 = self.lr(&u2);
            trace.push(obj2);
            if obj2 < obj * (1.0 - MONOTONE_SLACK) {
                monotone = false;
            }
            if obj2 > best.0 {
                best = (obj2, g);
            }
            let improved = obj2 - obj;
            u = u2;
            obj = obj2;
            if improved.abs() <= tol * obj {
                converged = true;
                break;
            }
        }
        (best.0, trace, best.1, converged, monotone)
    }
}

/// Lower bound for `R*_V(2 → r)` by the iteration
/// `f ← normalize(R(|R*f|^{r−2} R*f))` in `L²(σ)` from structured and random starts.
pub fn opnorm_lower(variety: Arc<Variety>, field: Arc<Field>, r: LpExponent, cfg: &EstimatorConfig) -> Result<OperatorEstimate> {
    variety.check_field(&field)?;
    let rf = match r {
        LpExponent::Finite(x) if x >= Rational64::from_integer(2) => r.to_f64(),
        _ => return Err(Error::Domain(format!("target exponent must be finite and at least 2, got {r}"))),
    };
    let space = variety.space();
    let it = Iterator2 { field: field.clone(), space, variety: variety.clone(), r: rf };
    let mut starts: Vec<(String, Vec<Complex64>)> = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    let on_v = |pred: &dyn Fn(usize) -> bool| -> Vec<Complex64> {
        (0..space.size())
            .map(|i| if variety.contains_index(i) && pred(i) { one } else { Complex64::zero() })
            .collect()
    };
    starts.push(("constant".into(), on_v(&|_| true)));
    let first = variety.points()[0];
    starts.push(("point_mass".into(), on_v(&|i| i == first)));
    if variety.kind() == VarietyKind::FlatDisk {
        let h = Variety::subspace_h(&field, variety.d())?;
        starts.push(("subspace_h".into(), on_v(&|i| h.contains_index(i))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..cfg.restarts {
        let f: Vec<Complex64> = (0..space.size())
            .map(|i| {
                if variety.contains_index(i) {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                } else {
                    Complex64::zero()
                }
            })
            .collect();
        starts.push((format!("random_{k}"), f));
    }
    let mut outcomes = Vec::new();
    // (ratio, label, trace, witness, converged) of the best start so far.
    type Best = (f64, String, Vec<f64>, Vec<Complex64>, bool);
    let mut best: Option<Best> = None;
    let mut all_monotone = true;
    for (label, f) in starts {
        let (ratio, trace, witness, converged, monotone) = it.run(f, cfg.iters, cfg.tol);
        all_monotone &= monotone;
        outcomes.push(StartOutcome { label: label.clone(), ratio, iterations: trace.len().saturating_sub(1), converged, monotone });
        if best.as_ref().is_none_or(|b| ratio > b.0) {
            best = Some((ratio, label, trace, witness, converged));
        }
    }
    let (best_ratio, best_label, trace, witness, converged) = best.expect("at least one start");
    let witness = GridFunction::from_complex(field.clone(), space.dim(), Measure::Surface(variety.clone()), witness)?;
    Ok(OperatorEstimate {
        variety: variety.kind(),
        d: variety.d(),
        q: field.q(),
        p: LpExponent::int(2),
        r,
        starts: outcomes,
        best: best_ratio,
        best_label,
        trace,
        converged,
        monotone: all_monotone,
        witness: Some(witness),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    Constant,
    SubspaceH,
    Delta,
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Probe> {
        match s {
            "constant" => Ok(Probe::Constant),
            "subspace_h" | "h" => Ok(Probe::SubspaceH),
            "delta" => Ok(Probe::Delta),
            _ => Err(Error::Parse(format!("unknown probe {s:?}"))),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Probe::Constant => "constant",
            Probe::SubspaceH => "subspace_h",
            Probe::Delta => "delta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub probe: Probe,
    pub q: u32,
    pub d: usize,
    pub p: LpExponent,
    pub r: LpExponent,
    /// Brute force: transform of the probe, exact moduli, then norms.
    pub ratio: f64,
    /// Closed form from the support and modulus of `(f dσ)^∨`.
    pub closed_form: f64,
    /// `log_q` of the closed form, exact, when it is a pure power of `q`.
    pub exponent: Option<String>,
}

/// `log_q` of the probe ratio for `1_H` and for a point mass; both are pure powers of `q`.
pub fn probe_exponent(probe: Probe, p: LpExponent, r: LpExponent, d: usize) -> Option<Rational64> {
    let d = d as i64;
    let one = Rational64::from_integer(1);
    let (ip, ir) = (p.reciprocal(), r.reciprocal());
    match probe {
        // (d+1)/r + (1−d)(1 − 1/p)
        Probe::SubspaceH => Some(ir * (d + 1) + (one - ip) * (1 - d)),
        // 2d/r + (2 − 2d)(1 − 1/p)
        Probe::Delta => Some(ir * (2 * d) + (one - ip) * (2 - 2 * d)),
        Probe::Constant => None,
    }
}

/// Closed form of the probe ratio from the known modulus profile of `(f dσ)^∨`.
pub fn probe_closed_form(probe: Probe, p: LpExponent, r: LpExponent, q: u32, d: usize) -> f64 {
    let qf = q as f64;
    match probe_exponent(probe, p, r, d) {
        Some(e) => qf.powf(e.to_f64().unwrap_or(f64::NAN)),
        None => {
            // |(dσ)^∨| is 1 at 0, q^{1−d} on Ω_2 ∪ Ω_5, q^{(1−d)/2} on Ω_4, 0 elsewhere; ‖1‖_{L^p(σ)} = 1.
            let k = qf.powi(d as i32 - 1);
            let n25 = k * k * (qf - 1.0) + (qf - 1.0).powi(2) * k * k;
            let n4 = (qf - 1.0) * k;
            let a25 = 1.0 / k;
            let a4 = 1.0 / k.sqrt();
            match r {
                LpExponent::Infinity => 1.0,
                _ => {
                    let rf = r.to_f64();
                    (1.0 + n25 * a25.powf(rf) + n4 * a4.powf(rf)).powf(1.0 / rf)
                }
            }
        }
    }
}

/// `‖(f dσ)^∨‖_{L^r(dm)} / ‖f‖_{L^p(σ)}` for a structured probe `f` on the flat disk.
pub fn probe_ratio(probe: Probe, p: LpExponent, r: LpExponent, field: Arc<Field>, d: usize) -> Result<ProbeResult> {
    p.validate()?;
    r.validate()?;
    let fd = Arc::new(Variety::flat_disk(&field, d)?);
    let mu = Measure::Surface(fd.clone());
    let f = match probe {
        Probe::Constant => GridFunction::constant(field.clone(), 2 * d, mu.clone(), 1, Backend::Exact)?,
        Probe::SubspaceH => {
            GridFunction::indicator(field.clone(), &Variety::subspace_h(&field, d)?, mu.clone(), Backend::Exact)?
        }
        Probe::Delta => GridFunction::delta(field.clone(), 2 * d, mu.clone(), fd.points()[0], 1, Backend::Exact)?,
    };
    let ext = extend(&f)?;
    let ratio = lp_norm_exact(&ext, r)? / lp_norm_exact(&f, p)?;
    Ok(ProbeResult {
        probe,
        q: field.q(),
        d,
        p,
        r,
        ratio,
        closed_form: probe_closed_form(probe, p, r, field.q(), d),
        exponent: probe_exponent(probe, p, r, d).map(|e| e.to_string()),
    })
}

/// `h*(v) = max_{z_0} Σ_t |h(z_0 + t v, t)|` on directions `v ∈ F_q^{d−1}`,
/// returned under the normalized measure `dv`.
pub fn kakeya_maximal(h: &GridFunction) -> Result<GridFunction> {
    if *h.measure() != Measure::Counting {
        return Err(Error::Contract("Kakeya maximal function expects a counting-measure function".into()));
    }
    let d = h.n();
    if d < 2 {
        return Err(Error::Domain("Kakeya maximal function needs d ≥ 2".into()));
    }
    let field = h.field().clone();
    let q = field.size();
    let abs: Vec<f64> = h.to_complex_vec().iter().map(|z| z.norm()).collect();
    let dirs = Space::new(q, d - 1)?;
    let mut out = Vec::with_capacity(dirs.size());
    let mut v = vec![0usize; d - 1];
    let mut z = vec![0usize; d - 1];
    for vi in 0..dirs.size() {
        dirs.digits_into(vi, &mut v);
        let mut best = 0.0f64;
        for zi in 0..dirs.size() {
            dirs.digits_into(zi, &mut z);
            let mut acc = Sum::default();
            for t in 0..q {
                let te = field.element(t);
                let mut idx = 0;
                for i in 0..d - 1 {
                    let c = field.add(field.element(z[i]), field.mul(te, field.element(v[i])));
                    idx = idx * q + c.index();
                }
                idx = idx * q + t;
                acc.add(abs[idx]);
            }
            best = best.max(acc.value());
        }
        out.push(Complex64::new(best, 0.0));
    }
    GridFunction::from_complex(field, d - 1, Measure::Normalized, out)
}

/// `‖h*‖_{L^r(dv)} / ‖h‖_{L^p(dm)}`, a lower bound for `K(p → r)`.
pub fn kakeya_ratio(h: &GridFunction, p: LpExponent, r: LpExponent) -> Result<f64> {
    p.validate()?;
    r.validate()?;
    let den = lp_norm(h, p)?;
    if den == 0.0 {
        return Err(Error::Domain("Kakeya ratio of the zero function".into()));
    }
    Ok(lp_norm(&kakeya_maximal(h)?, r)? / den)
}

/// Index of the point `(z_0 + t v, t)`.
fn line_point(field: &Field, z: &[usize], v: &[usize], t: usize) -> usize {
    let q = field.size();
    let te = field.element(t);
    let mut idx = 0;
    for (&zi, &vi) in z.iter().zip(v) {
        idx = idx * q + field.add(field.element(zi), field.mul(te, field.element(vi))).index();
    }
    idx * q + t
}

/// Indicator of the line `l(z_0, v)` in `F_q^d`.
pub fn line_indicator(field: Arc<Field>, d: usize, z0: usize, v: usize) -> Result<GridFunction> {
    let space = Space::new(field.size(), d)?;
    let dirs = Space::new(field.size(), d - 1)?;
    let (mut z, mut w) = (vec![0; d - 1], vec![0; d - 1]);
    dirs.digits_into(z0, &mut z);
    dirs.digits_into(v, &mut w);
    let mut ints = vec![0i64; space.size()];
    for t in 0..field.size() {
        ints[line_point(&field, &z, &w, t)] = 1;
    }
    GridFunction::from_integers(field, d, Measure::Counting, &ints)
}

/// Test functions for Kakeya ratios: constant, point mass, one line, a greedy
/// small Kakeya set (a line in every direction), and seeded random sets.
pub fn kakeya_witnesses(field: Arc<Field>, d: usize, seed: u64) -> Result<Vec<(String, GridFunction)>> {
    let space = Space::new(field.size(), d)?;
    let dirs = Space::new(field.size(), d - 1)?;
    let q = field.size();
    let mut out = vec![
        ("constant".to_string(), GridFunction::constant(field.clone(), d, Measure::Counting, 1, Backend::Float)?),
        ("point_mass".to_string(), GridFunction::delta(field.clone(), d, Measure::Counting, 0, 1, Backend::Float)?),
        ("line".to_string(), line_indicator(field.clone(), d, 0, dirs.size() - 1)?.to_float()),
    ];
    let mut set = vec![false; space.size()];
    let (mut z, mut v) = (vec![0; d - 1], vec![0; d - 1]);
    for vi in 0..dirs.size() {
        dirs.digits_into(vi, &mut v);
        let mut best = (0usize, 0usize);
        for zi in 0..dirs.size() {
            dirs.digits_into(zi, &mut z);
            let overlap = (0..q).filter(|&t| set[line_point(&field, &z, &v, t)]).count();
            if overlap > best.1 || zi == 0 {
                best = (zi, overlap);
            }
        }
        dirs.digits_into(best.0, &mut z);
        for t in 0..q {
            set[line_point(&field, &z, &v, t)] = true;
        }
    }
    let ints: Vec<i64> = set.iter().map(|&b| b as i64).collect();
    out.push(("greedy_kakeya_set".into(), GridFunction::from_integers(field.clone(), d, Measure::Counting, &ints)?.to_float()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..4 {
        let density = [0.1, 0.25, 0.5, 0.75][k];
        let mut vals: Vec<Complex64> =
            (0..space.size()).map(|_| Complex64::new(rng.random_bool(density) as u8 as f64, 0.0)).collect();
        if vals.iter().all(|z| z.is_zero()) {
            vals[0] = Complex64::new(1.0, 0.0);
        }
        out.push((format!("random_set_{k}"), GridFunction::from_complex(field.clone(), d, Measure::Counting, vals)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KakeyaReport {
    pub q: u32,
    pub d: usize,
    pub p: LpExponent,
    pub r: LpExponent,
    pub ratios: Vec<(String, f64)>,
    pub max_ratio: f64,
}

/// Largest Kakeya ratio over [`kakeya_witnesses`].
pub fn kakeya_sweep(field: Arc<Field>, d: usize, p: LpExponent, r: LpExponent, seed: u64) -> Result<KakeyaReport> {
    let mut ratios = Vec::new();
    for (label, h) in kakeya_witnesses(field.clone(), d, seed)? {
        ratios.push((label, kakeya_ratio(&h, p, r)?));
    }
    let max_ratio = ratios.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(KakeyaReport { q: field.q(), d, p, r, ratios, max_ratio })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductDiagnostic {
    pub q: u32,
    pub d: usize,
    pub p: LpExponent,
    pub r: LpExponent,
    /// Lower bound for the flat-disk constant `R*_F(p → r)` in `F_q^{2d}`.
    pub flat_lower: f64,
    /// Lower bound for the paraboloid constant `R*_P(2 → r)` in `F_q^d`.
    pub paraboloid_lower: f64,
    /// Lower bound for `K((r/2)′ → (p/2)′)` in `F_q^d`.
    pub kakeya_lower: f64,
    pub kakeya_p: LpExponent,
    pub kakeya_r: LpExponent,
    /// Set when the flat-disk lower bound exceeds `paraboloid_lower · kakeya_lower^{1/2}`.
    /// Every quantity is a lower bound, so this is never a failure.
    pub interesting: bool,
}

fn half(e: LpExponent) -> LpExponent {
    match e {
        LpExponent::Finite(x) => LpExponent::Finite(x / 2),
        LpExponent::Infinity => LpExponent::Infinity,
    }
}

/// Side-by-side lower bounds for the three constants in the product inequality
/// `R*_F(p → r) ≤ R*_P(2 → r) · K((r/2)′ → (p/2)′)^{1/2}`.
pub fn mt_product_diagnostic(d: usize, r: LpExponent, p: LpExponent, field: Arc<Field>, cfg: &EstimatorConfig) -> Result<ProductDiagnostic> {
    let two = LpExponent::int(2);
    if p.to_f64() < 2.0 || r.to_f64() < 2.0 {
        return Err(Error::Domain("the product inequality needs p, r ≥ 2".into()));
    }
    let mut flat_lower = 0.0f64;
    for probe in [Probe::Constant, Probe::SubspaceH, Probe::Delta] {
        flat_lower = flat_lower.max(probe_ratio(probe, p, r, field.clone(), d)?.ratio);
    }
    if p == two && r != LpExponent::Infinity {
        let fd = Arc::new(Variety::flat_disk(&field, d)?);
        flat_lower = flat_lower.max(opnorm_lower(fd, field.clone(), r, cfg)?.best);
    }
    let paraboloid_lower = if r == LpExponent::Infinity {
        1.0
    } else {
        let pb = Arc::new(Variety::paraboloid(&field, d)?);
        opnorm_lower(pb, field.clone(), r, cfg)?.best
    };
    let kakeya_p = half(r).conjugate()?;
    let kakeya_r = half(p).conjugate()?;
    let kakeya_lower = kakeya_sweep(field.clone(), d, kakeya_p, kakeya_r, cfg.seed)?.max_ratio;
    Ok(ProductDiagnostic {
        q: field.q(),
        d,
        p,
        r,
        flat_lower,
        paraboloid_lower,
        kakeya_lower,
        kakeya_p,
        kakeya_r,
        interesting: flat_lower > paraboloid_lower * kakeya_lower.sqrt() * (1.0 + 1e-12),
    })
}

/// Re-evaluates an estimate's witness.
pub fn witness_ratio(est: &OperatorEstimate) -> Result<f64> {
    let w = est.witness.as_ref().ok_or_else(|| Error::Contract("estimate carries no witness".into()))?;
    extension_ratio(w, est.r)
}

/// Exact-backend values of `|g|²` summed, for tests that need a rational norm.
pub fn l2_sq_exact(g: &GridFunction) -> Result<num_rational::BigRational> {
    match g.values() {
        Values::Exact(grid) => grid.norm_sq_sum(),
        Values::Float(_) => Err(Error::Contract("exact norm of a float function".into())),
    }
}
