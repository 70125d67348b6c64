//! Verification suites. Each returns a [`Report`]; all randomness comes from one
//! `ChaCha8Rng` seeded from the configuration.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characters::{gauss_square_target, gauss_sum, quad_sum, quad_sum_closed};
use crate::error::{Error, Result};
use crate::exponents::{check_pair, derive_ledger, ExponentPair, Region};
use crate::field::Field;
use crate::normlab::{
    extend, kakeya_maximal, kakeya_ratio, kakeya_witnesses, line_indicator, opnorm_lower, probe_ratio, EstimatorConfig,
    LpExponent, Probe,
};
use crate::oracle::{
    decay_profile, kernel_stats, verify_decomposition, verify_kernel_hat_expansions, verify_omega_hat, verify_sigma_ft,
};
use crate::report::{Report, Row};
use crate::space::Space;
use crate::transform::{
    convolve_counting, fourier_forward, fourier_forward_naive, inverse_vs_measure, inverse_vs_measure_naive,
    random_exact, random_exact_sparse, random_float, random_float_sparse, Backend, GridFunction, Measure, Scalar,
};
use crate::varieties::{Omega, Variety, VarietyKind};

/// Largest grid on which the quadratic-time transform is run as a cross-check.
pub const NAIVE_LIMIT: usize = 6561;

/// Largest field for the exhaustive completed-square check.
pub const QUAD_EXHAUSTIVE_MAX_Q: u32 = 27;

fn field(q: u32) -> Result<Arc<Field>> {
    Field::with_order(q).map(Arc::new).map_err(|e| Error::InvalidField(format!("q={q}: {e}")))
}

/// `(dσ)^∨` closed form against brute force at every point.
pub fn verify_oracle(field: Arc<Field>, d: usize) -> Result<Report> {
    let mut rep = Report::new("verify oracle").config("q", field.q()).config("d", d);
    let o = verify_sigma_ft(field.clone(), d)?;
    rep.push(Row::new("points_checked", o.points_checked, field.size().pow(2 * d as u32), o.points_checked == field.size().pow(2 * d as u32)).at(&field, d));
    for w in Omega::ALL {
        let dev = o.per_class_max_dev[w.index()];
        rep.push(Row::new(format!("max_dev_{w}"), dev, 0, dev == 0.0).at(&field, d));
    }
    rep.push(Row::new("mismatches", o.mismatches.len(), 0, o.pass).at(&field, d));
    rep.set_details(&o)?;
    Ok(rep)
}

/// `G² = η(−1)q` for each `q`, and the completed-square evaluation over every
/// `(a ≠ 0, b)` when `q ≤ 27`.
pub fn verify_gauss(qs: &[u32]) -> Result<Report> {
    let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
    let mut rep = Report::new("verify gauss").config("qs", list.join(","));
    for &q in qs {
        let f = field(q)?;
        let g = gauss_sum(&f);
        let sq = g.power(2);
        let target = gauss_square_target(&f);
        rep.push(Row::new("gauss_square", &sq, &target, sq == target).on(&f));
        if q <= QUAD_EXHAUSTIVE_MAX_Q {
            let mut failures = 0usize;
            let mut checked = 0usize;
            for a in f.elements().filter(|a| !a.is_zero()) {
                for b in f.elements() {
                    checked += 1;
                    if quad_sum(&f, a, b)? != quad_sum_closed(&f, &g, a, b)? {
                        failures += 1;
                    }
                }
            }
            let expected = (q as usize - 1) * q as usize;
            rep.push(Row::new("quad_identity_pairs", checked, expected, checked == expected).on(&f));
            rep.push(Row::new("quad_identity_failures", failures, 0, failures == 0).on(&f));
        }
    }
    Ok(rep)
}

/// Kernel sup-norms and bounds, the kernel and Ω̂ decompositions, and the decay profile.
pub fn verify_kernels(field: Arc<Field>, d: usize) -> Result<Report> {
    let mut rep = Report::new("verify kernels").config("q", field.q()).config("d", d);
    let mut stats = Vec::new();
    for j in 1..=5 {
        let s = kernel_stats(j, field.clone(), d)?;
        let sq_ok = s.sup_sq == s.expected_sup_sq;
        rep.push(Row::new(format!("sup_sq_K{j}"), &s.sup_sq, &s.expected_sup_sq, sq_ok).at(&field, d));
        if matches!(j, 2 | 4 | 5) {
            let ok = s.pass;
            rep.push(Row::new(format!("sup_hat_K{j}"), s.sup_hat, format!("<={}", s.hat_bound), ok).at(&field, d));
        }
        stats.push(s);
    }
    let dec = verify_decomposition(field.clone(), d)?;
    rep.push(Row::new("kernel_decomposition", dec, true, dec).at(&field, d));
    let oh = verify_omega_hat(field.clone(), d)?;
    rep.push(Row::new("omega_hat_closed_forms", oh, true, oh).at(&field, d));
    let kh = verify_kernel_hat_expansions(field.clone(), d)?;
    rep.push(Row::new("kernel_hat_line_counts", kh, true, kh).at(&field, d));
    let decay = decay_profile(field.clone(), d)?;
    rep.push(Row::new("decay_max_modulus_sq", &decay.max_modulus_sq, &decay.expected, decay.max_modulus_sq == decay.expected).at(&field, d));
    let on = decay.attained_on.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ");
    rep.push(Row::new("decay_attained_on", &on, "Omega_4", decay.attained_on == vec![Omega::O4] && decay.attained_on_all_of_omega4).at(&field, d));
    rep.set_details(&(stats, decay))?;
    Ok(rep)
}

fn max_rel_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(0.0, f64::max);
    let dev = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        dev
    } else {
        dev / scale
    }
}

fn grids_agree(a: &GridFunction, b: &GridFunction, tol: f64) -> Result<(bool, f64)> {
    match (a.backend(), b.backend()) {
        (Backend::Exact, Backend::Exact) => {
            let eq = a.exact()?.equals(b.exact()?)?;
            Ok((eq, if eq { 0.0 } else { f64::INFINITY }))
        }
        _ => {
            let dev = max_rel_dev(&a.to_complex_vec(), &b.to_complex_vec());
            Ok((dev <= tol, dev))
        }
    }
}

fn scalar_dev(a: &Scalar, b: &Scalar) -> f64 {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => {
            if x == y {
                0.0
            } else {
                f64::INFINITY
            }
        }
        _ => {
            let (x, y) = (a.to_complex(), b.to_complex());
            let s = x.norm().max(y.norm());
            if s == 0.0 {
                0.0
            } else {
                (x - y).norm() / s
            }
        }
    }
}

/// Fast transforms against the quadratic-time definitions on random inputs.
pub fn verify_transform(field: Arc<Field>, n: usize, trials: usize, seed: u64, tol: f64) -> Result<Report> {
    let mut rep = Report::new("verify transform")
        .config("q", field.q())
        .config("n", n)
        .config("trials", trials)
        .config("seed", seed)
        .config("tol", tol);
    let size = Space::new(field.size(), n)?.size();
    if size > NAIVE_LIMIT {
        return Err(Error::Domain(format!("q^n = {size} exceeds the cross-check limit {NAIVE_LIMIT}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0usize; 4];
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = random_exact(field.clone(), n, Measure::Counting, &mut rng, 3, 0.7)?;
        let h = random_exact(field.clone(), n, Measure::Normalized, &mut rng, 3, 0.7)?;
        counts[0] += grids_agree(&fourier_forward(&g)?, &fourier_forward_naive(&g)?, 0.0)?.0 as usize;
        counts[1] += grids_agree(&inverse_vs_measure(&h, &Measure::Normalized)?, &inverse_vs_measure_naive(&h, &Measure::Normalized)?, 0.0)?.0 as usize;
        let gf = random_float(field.clone(), n, Measure::Counting, &mut rng)?;
        let hf = random_float(field.clone(), n, Measure::Normalized, &mut rng)?;
        let (ok, dev) = grids_agree(&fourier_forward(&gf)?, &fourier_forward_naive(&gf)?, tol)?;
        counts[2] += ok as usize;
        worst = worst.max(dev);
        let (ok, dev) = grids_agree(&inverse_vs_measure(&hf, &Measure::Normalized)?, &inverse_vs_measure_naive(&hf, &Measure::Normalized)?, tol)?;
        counts[3] += ok as usize;
        worst = worst.max(dev);
    }
    let names = ["forward_exact", "inverse_exact", "forward_float", "inverse_float"];
    for (name, c) in names.iter().zip(counts) {
        rep.push(Row::new(format!("fast_vs_naive_{name}"), format!("{c}/{trials}"), format!("{trials}/{trials}"), c == trials).at(&field, n));
    }
    rep.push(Row::new("fast_vs_naive_float_max_rel_dev", worst, format!("<={tol}"), worst <= tol).at(&field, n));
    Ok(rep)
}

/// Per-identity tally of random trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub identity: String,
    pub backend: String,
    pub trials: usize,
    pub passed: usize,
    /// Largest relative deviation; zero on the exact backend when every trial passes.
    pub max_rel_dev: f64,
}

/// Support size of the sparse operand in convolution identities.
pub const SPARSE_SUPPORT: usize = 6;

/// Plancherel, Fourier inversion, the convolution theorem, adjointness of extension and
/// restriction, and the `RR*` identity, on the flat disk in `F_q^{2d}`.
///
/// Convolutions are computed directly, so one operand of each convolution is
/// supported on [`SPARSE_SUPPORT`] random points; the other operands are dense.
pub fn identity_suite(field: Arc<Field>, d: usize, trials: usize, seed: u64, tol: f64) -> Result<Vec<IdentityTally>> {
    let n = 2 * d;
    let fd = Arc::new(Variety::flat_disk(&field, d)?);
    let mu = Measure::Surface(fd.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["plancherel", "inversion", "convolution", "adjointness", "rr_star"];
    let mut tallies = Vec::new();
    for backend in [Backend::Exact, Backend::Float] {
        let one = GridFunction::constant(field.clone(), n, mu.clone(), 1, backend)?;
        let sigma_check = inverse_vs_measure(&one, &mu)?;
        let mut passed = [0usize; 5];
        let mut worst = [0.0f64; 5];
        let mut record = |i: usize, ok: bool, dev: f64| {
            passed[i] += ok as usize;
            worst[i] = worst[i].max(dev);
        };
        for _ in 0..trials {
            let (g1, g2, f) = match backend {
                Backend::Exact => (
                    random_exact(field.clone(), n, Measure::Counting, &mut rng, 2, 0.5)?,
                    random_exact_sparse(field.clone(), n, Measure::Counting, &mut rng, 2, SPARSE_SUPPORT)?,
                    random_exact(field.clone(), n, mu.clone(), &mut rng, 2, 1.0)?,
                ),
                Backend::Float => (
                    random_float(field.clone(), n, Measure::Counting, &mut rng)?,
                    random_float_sparse(field.clone(), n, Measure::Counting, &mut rng, SPARSE_SUPPORT)?,
                    random_float(field.clone(), n, mu.clone(), &mut rng)?,
                ),
            };
            let tol_b = if backend == Backend::Exact { 0.0 } else { tol };
            let h1 = fourier_forward(&g1)?;
            // ‖ĝ‖_{L²(dx)} = ‖g‖_{L²(dm)}
            let (a, b) = (h1.inner(&h1)?, g1.inner(&g1)?);
            let dev = scalar_dev(&a, &b);
            record(0, dev <= tol_b, dev);
            // (ĝ)^∨ = g
            let (ok, dev) = grids_agree(&inverse_vs_measure(&h1, &Measure::Normalized)?, &g1, tol_b)?;
            record(1, ok, dev);
            // (g1 ∗ g2)^ = ĝ1 ĝ2
            let h2 = fourier_forward(&g2)?;
            let lhs = fourier_forward(&convolve_counting(&g1, &g2)?)?;
            let (ok, dev) = grids_agree(&lhs, &h1.mul(&h2)?, tol_b)?;
            record(2, ok, dev);
            // ⟨Rg, f⟩_{L²(σ)} = ⟨g, R*f⟩_{L²(dm)}
            let rg1 = h1.restricted_to(&fd)?.with_measure(mu.clone())?;
            let (a, b) = (rg1.inner(&f)?, g1.inner(&extend(&f)?)?);
            let dev = scalar_dev(&a, &b);
            record(3, dev <= tol_b, dev);
            // ‖Rg‖²_{L²(σ)} = ⟨g, g ∗ (dσ)^∨⟩
            let rg2 = h2.restricted_to(&fd)?.with_measure(mu.clone())?;
            let (a, b) = (rg2.inner(&rg2)?, g2.inner(&convolve_counting(&g2, &sigma_check)?)?);
            let dev = scalar_dev(&a, &b);
            record(4, dev <= tol_b, dev);
        }
        let label = match backend {
            Backend::Exact => "exact",
            Backend::Float => "float",
        };
        for (i, name) in names.iter().enumerate() {
            tallies.push(IdentityTally {
                identity: (*name).into(),
                backend: label.into(),
                trials,
                passed: passed[i],
                max_rel_dev: worst[i],
            });
        }
    }
    Ok(tallies)
}

pub fn verify_identities(field: Arc<Field>, d: usize, trials: usize, seed: u64, tol: f64) -> Result<Report> {
    let mut rep = Report::new("verify identities")
        .config("q", field.q())
        .config("d", d)
        .config("trials", trials)
        .config("seed", seed)
        .config("tol", tol);
    let tallies = identity_suite(field.clone(), d, trials, seed, tol)?;
    for t in &tallies {
        let ok = t.passed == t.trials;
        rep.push(Row::new(format!("{}_{}", t.identity, t.backend), format!("{}/{}", t.passed, t.trials), format!("{}/{}", t.trials, t.trials), ok).at(&field, d));
        if t.backend == "float" {
            rep.push(Row::new(format!("{}_float_max_rel_dev", t.identity), t.max_rel_dev, format!("<={tol}"), t.max_rel_dev <= tol).at(&field, d));
        }
    }
    rep.set_details(&tallies)?;
    Ok(rep)
}

/// Lower bound for `R*_V(2 → r)` by nonlinear power iteration.
pub fn norms_extension(field: Arc<Field>, kind: VarietyKind, d: usize, r: LpExponent, cfg: &EstimatorConfig) -> Result<Report> {
    let mut rep = Report::new("norms extension")
        .config("q", field.q())
        .config("variety", kind)
        .config("d", d)
        .config("r", r)
        .config("seed", cfg.seed)
        .config("iters", cfg.iters)
        .config("restarts", cfg.restarts)
        .config("tol", cfg.tol);
    let v = Arc::new(match kind {
        VarietyKind::FlatDisk => Variety::flat_disk(&field, d)?,
        VarietyKind::Paraboloid => Variety::paraboloid(&field, d)?,
        VarietyKind::SubspaceH => Variety::subspace_h(&field, d)?,
    });
    let est = opnorm_lower(v, field.clone(), r, cfg)?;
    rep.push(Row::new("opnorm_lower", est.best, ">=1", est.best >= 1.0 - 1e-9).at(&field, d));
    rep.push(Row::new("monotone", est.monotone, true, est.monotone).at(&field, d));
    // Convergence is informational: the estimate is a lower bound either way.
    rep.push(Row::new("converged", est.converged, "informational", true).at(&field, d));
    rep.push(Row::new("best_start", &est.best_label, "informational", true).at(&field, d));
    rep.set_details(&est)?;
    Ok(rep)
}

/// Structured probe ratios against their closed forms.
pub fn norms_probes(field: Arc<Field>, d: usize, pairs: &[(LpExponent, LpExponent)], tol: f64) -> Result<Report> {
    let list: Vec<String> = pairs.iter().map(|(p, r)| format!("{p}->{r}")).collect();
    let mut rep = Report::new("norms probes").config("q", field.q()).config("d", d).config("pairs", list.join(";")).config("tol", tol);
    let mut results = Vec::new();
    for &(p, r) in pairs {
        for probe in [Probe::Constant, Probe::SubspaceH, Probe::Delta] {
            let res = probe_ratio(probe, p, r, field.clone(), d)?;
            let ok = (res.ratio - res.closed_form).abs() <= tol * res.closed_form.abs().max(1.0);
            rep.push(Row::new(format!("probe_{probe}_{p}_{r}"), res.ratio, res.closed_form, ok).at(&field, d));
            results.push(res);
        }
    }
    rep.set_details(&results)?;
    Ok(rep)
}

/// The `(p, r)` grid for probe checks: `p ∈ {3/2, 2, 4}` and `r ∈ {3, (2n+4)/(n−2), 10}`.
pub fn probe_grid(d: usize) -> Vec<(LpExponent, LpExponent)> {
    let n = 2 * d as i64;
    let rs = [LpExponent::int(3), LpExponent::ratio(2 * n + 4, n - 2), LpExponent::int(10)];
    let ps = [LpExponent::ratio(3, 2), LpExponent::int(2), LpExponent::int(4)];
    ps.iter().flat_map(|&p| rs.iter().map(move |&r| (p, r))).collect()
}

/// Kakeya maximal function examples and ratios over the witness family.
pub fn kakeya(field: Arc<Field>, d: usize, p: LpExponent, r: LpExponent, seed: u64) -> Result<Report> {
    let mut rep = Report::new("kakeya").config("q", field.q()).config("d", d).config("p", p).config("r", r).config("seed", seed);
    let q = field.q() as f64;
    let c = GridFunction::constant(field.clone(), d, Measure::Counting, 1, Backend::Float)?;
    let ok = kakeya_maximal(&c)?.to_complex_vec().iter().all(|z| z.re == q && z.im == 0.0);
    rep.push(Row::new("maximal_of_constant", if ok { q.to_string() } else { "mismatch".into() }, q, ok).at(&field, d));
    let size = Space::new(field.size(), d)?.size();
    let dlt = GridFunction::delta(field.clone(), d, Measure::Counting, size / 2, 1, Backend::Float)?;
    let ok = kakeya_maximal(&dlt)?.to_complex_vec().iter().all(|z| z.re == 1.0);
    rep.push(Row::new("maximal_of_point_mass", if ok { "1" } else { "mismatch" }, 1, ok).at(&field, d));
    let dirs = Space::new(field.size(), d - 1)?.size();
    let v0 = dirs - 1;
    let line = line_indicator(field.clone(), d, 0, v0)?;
    let hs = kakeya_maximal(&line)?.to_complex_vec();
    let ok = hs.iter().enumerate().all(|(v, z)| z.re == if v == v0 { q } else { 1.0 });
    rep.push(Row::new("maximal_of_line", if ok { "q on its direction, 1 elsewhere" } else { "mismatch" }, "q on its direction, 1 elsewhere", ok).at(&field, d));
    let mut ratios = Vec::new();
    for (label, h) in kakeya_witnesses(field.clone(), d, seed)? {
        let ratio = kakeya_ratio(&h, p, r)?;
        rep.push(Row::new(format!("kakeya_ratio_{label}"), ratio, "informational", true).at(&field, d));
        ratios.push(ratio);
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    rep.push(Row::new("kakeya_ratio_max", max, "informational", true).at(&field, d));
    Ok(rep)
}

/// The exponent ledger. Rows carry the representative `d`; the structured ledger is in the details.
pub fn exponents_derive() -> Result<Report> {
    let mut rep = Report::new("exponents derive");
    let ledger = derive_ledger()?;
    for row in &ledger.rows {
        rep.push(
            Row::new(
                format!("{}:{}", row.id, row.d_constraint),
                format!("({} -> {})", row.p, row.r),
                format!("({} -> {})", row.expected_p, row.expected_r),
                row.pass,
            )
            .with_d(row.d as usize),
        );
    }
    rep.set_details(&ledger)?;
    Ok(rep)
}

pub fn exponents_check(n: u32, pair: &ExponentPair) -> Result<Report> {
    let c = check_pair(pair, n)?;
    let mut rep = Report::new("exponents check").config("n", n).config("p", &c.p).config("r", &c.r);
    let d = (n / 2) as usize;
    rep.push(Row::new("necessary_ok", c.necessary_ok, true, c.necessary_ok).with_d(d));
    let inside = c.conjecture_region != Region::Outside;
    rep.push(Row::new("conjecture_region", c.conjecture_region, "inside|boundary", inside).with_d(d));
    rep.push(Row::new("kakeya_derivable", c.kakeya_derivable_d, "informational", true).with_d(d));
    rep.set_details(&c)?;
    Ok(rep)
}

/// What a sweep measures per `q`.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepKind {
    /// `opnorm_lower` on the flat disk at `(2 → r)`.
    Opnorm { r: LpExponent, cfg: EstimatorConfig },
    /// `max_{m≠0}|(dσ)^∨(m)|²` against `q^{1−d}`.
    Decay,
    /// Largest Kakeya ratio over the witness family.
    Kakeya { p: LpExponent, r: LpExponent, seed: u64 },
}

/// One row per `q`, then a summary row with `max/min` of the measured value.
/// For opnorm sweeps the summary passes iff the ratio is at most `max_spread`.
pub fn sweep(kind: &SweepKind, qs: &[u32], d: usize, max_spread: f64) -> Result<Report> {
    let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
    let mut rep = Report::new("sweep").config("qs", list.join(",")).config("d", d);
    let mut qs = qs.to_vec();
    qs.sort_unstable();
    let mut values = Vec::new();
    let quantity;
    match kind {
        SweepKind::Opnorm { r, cfg } => {
            quantity = "opnorm_lower";
            rep = rep.config("kind", "opnorm").config("r", r).config("seed", cfg.seed).config("iters", cfg.iters).config("restarts", cfg.restarts).config("tol", cfg.tol);
        }
        SweepKind::Decay => {
            quantity = "decay_max_modulus_sq";
            rep = rep.config("kind", "decay");
        }
        SweepKind::Kakeya { p, r, seed } => {
            quantity = "kakeya_ratio_max";
            rep = rep.config("kind", "kakeya").config("p", p).config("r", r).config("seed", seed);
        }
    }
    for &q in &qs {
        let f = field(q)?;
        match kind {
            SweepKind::Opnorm { r, cfg } => {
                let fd = Arc::new(Variety::flat_disk(&f, d)?);
                let est = opnorm_lower(fd, f.clone(), *r, cfg)?;
                let ok = est.best >= 1.0 - 1e-9 && est.monotone;
                rep.push(Row::new(quantity, est.best, ">=1, monotone", ok).at(&f, d));
                values.push(est.best);
            }
            SweepKind::Decay => {
                let dr = decay_profile(f.clone(), d)?;
                rep.push(Row::new(quantity, &dr.max_modulus_sq, &dr.expected, dr.pass).at(&f, d));
                values.push((f.q() as f64).powi(1 - d as i32));
            }
            SweepKind::Kakeya { p, r, seed } => {
                let mut best = 0.0f64;
                for (_, h) in kakeya_witnesses(f.clone(), d, *seed)? {
                    best = best.max(kakeya_ratio(&h, *p, *r)?);
                }
                rep.push(Row::new(quantity, best, "informational", true).at(&f, d));
                values.push(best);
            }
        }
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    let (expected, ok) = match kind {
        SweepKind::Opnorm { .. } => (format!("<={max_spread}"), spread <= max_spread),
        _ => ("informational".to_string(), true),
    };
    rep.push(Row::new(format!("{quantity}_max_over_min"), spread, expected, ok).with_d(d));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Arc<Field> {
        field(q).unwrap()
    }

    #[test]
    fn small_suites_pass() {
        assert!(verify_oracle(f(3), 2).unwrap().pass);
        assert!(verify_gauss(&[3, 5, 9]).unwrap().pass);
        assert!(verify_kernels(f(3), 2).unwrap().pass);
        assert!(verify_transform(f(3), 3, 3, 0, 1e-10).unwrap().pass);
        let r = verify_identities(f(3), 2, 5, 1, 1e-10).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert!(norms_probes(f(3), 2, &probe_grid(2), 1e-12).unwrap().pass);
        assert!(kakeya(f(3), 2, LpExponent::int(2), LpExponent::int(2), 0).unwrap().pass);
        assert!(exponents_derive().unwrap().pass);
        let pair = ExponentPair::parse("2", "6").unwrap();
        assert!(exponents_check(4, &pair).unwrap().pass);
        let bad = ExponentPair::parse("2", "5").unwrap();
        assert!(!exponents_check(4, &bad).unwrap().pass);
    }

    #[test]
    fn sweeps() {
        let r = sweep(&SweepKind::Decay, &[3, 5, 7], 2, 2.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.rows[1].value, "1/5");
        let cfg = EstimatorConfig { restarts: 1, iters: 20, tol: 1e-9, seed: 0 };
        let r = sweep(&SweepKind::Opnorm { r: LpExponent::int(6), cfg }, &[3, 5], 2, 2.0).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert!(sweep(&SweepKind::Decay, &[3, 6], 2, 2.0).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = EstimatorConfig { restarts: 2, iters: 30, tol: 1e-10, seed: 7 };
        let a = norms_extension(f(3), VarietyKind::FlatDisk, 2, LpExponent::int(6), &cfg).unwrap();
        let b = norms_extension(f(3), VarietyKind::FlatDisk, 2, LpExponent::int(6), &cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    }
}
