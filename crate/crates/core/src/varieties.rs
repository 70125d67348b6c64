//! The flat disk, the paraboloid, the subspace `H`, the Ω-partition of
//! `F_q^{2d}`, and normalized surface measures.
//!
//! Coordinates are written 1-based in docs (`m_1, …, m_{2d}`) and stored
//! 0-based, so `m_d` is `m[d − 1]` and `m_{2d}` is `m[2d − 1]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldSpec};
use crate::space::Space;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietyKind {
    FlatDisk,
    Paraboloid,
    SubspaceH,
}

impl fmt::Display for VarietyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarietyKind::FlatDisk => "flat_disk",
            VarietyKind::Paraboloid => "paraboloid",
            VarietyKind::SubspaceH => "subspace_h",
        })
    }
}

/// A variety in `F_q^n` stored as a sorted point-index list plus a
/// membership bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variety {
    kind: VarietyKind,
    d: usize,
    field: FieldSpec,
    space: Space,
    points: Vec<usize>,
    member: Vec<bool>,
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    Ok(())
}

impl Variety {
    fn from_points(
        kind: VarietyKind,
        d: usize,
        field: &Field,
        space: Space,
        mut points: Vec<usize>,
    ) -> Variety {
        points.sort_unstable();
        points.dedup();
        let mut member = vec![false; space.size()];
        for &i in &points {
            member[i] = true;
        }
        Variety { kind, d, field: field.spec(), space, points, member }
    }

    /// `{(α, α·α, β, α·β) : α, β ∈ F_q^{d−1}} ⊂ F_q^{2d}`.
    pub fn flat_disk(field: &Field, d: usize) -> Result<Variety> {
        check_d(d)?;
        let space = Space::new(field.size(), 2 * d)?;
        let half = Space::new(field.size(), d - 1)?;
        let mut points = Vec::with_capacity(half.size() * half.size());
        let mut coords = vec![FieldElement::ZERO; 2 * d];
        for a in 0..half.size() {
            let alpha = half.point(a);
            let aa = field.dot(&alpha, &alpha);
            for b in 0..half.size() {
                let beta = half.point(b);
                coords[..d - 1].copy_from_slice(&alpha);
                coords[d - 1] = aa;
                coords[d..2 * d - 1].copy_from_slice(&beta);
                coords[2 * d - 1] = field.dot(&alpha, &beta);
                points.push(space.index(&coords));
            }
        }
        Ok(Self::from_points(VarietyKind::FlatDisk, d, field, space, points))
    }

    /// `{x ∈ F_q^d : x_1² + ⋯ + x_{d−1}² = x_d}`.
    pub fn paraboloid(field: &Field, d: usize) -> Result<Variety> {
        check_d(d)?;
        let space = Space::new(field.size(), d)?;
        let base = Space::new(field.size(), d - 1)?;
        let mut coords = vec![FieldElement::ZERO; d];
        let points = (0..base.size())
            .map(|a| {
                let alpha = base.point(a);
                coords[..d - 1].copy_from_slice(&alpha);
                coords[d - 1] = field.dot(&alpha, &alpha);
                space.index(&coords)
            })
            .collect();
        Ok(Self::from_points(VarietyKind::Paraboloid, d, field, space, points))
    }

    /// `H = {0}^d × F_q^{d−1} × {0}`, a linear subspace of the flat disk.
    pub fn subspace_h(field: &Field, d: usize) -> Result<Variety> {
        check_d(d)?;
        let space = Space::new(field.size(), 2 * d)?;
        let base = Space::new(field.size(), d - 1)?;
        let mut coords = vec![FieldElement::ZERO; 2 * d];
        let points = (0..base.size())
            .map(|b| {
                coords[d..2 * d - 1].copy_from_slice(&base.point(b));
                space.index(&coords)
            })
            .collect();
        Ok(Self::from_points(VarietyKind::SubspaceH, d, field, space, points))
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn field_spec(&self) -> &FieldSpec {
        &self.field
    }

    /// Sorted point indices.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.member.get(idx).copied().unwrap_or(false)
    }

    pub fn contains(&self, coords: &[FieldElement]) -> bool {
        coords.len() == self.space.dim() && self.contains_index(self.space.index(coords))
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }

    /// Checks that `field` is the field this variety was built over.
    pub fn check_field(&self, field: &Field) -> Result<()> {
        if field.spec() != self.field {
            return Err(Error::Contract(format!(
                "variety over F_{} used with F_{}",
                self.space.q(),
                field.q()
            )));
        }
        Ok(())
    }
}

/// One of the six classes `Ω_0, …, Ω_5` of `F_q^{2d}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Omega {
    O0,
    O1,
    O2,
    O3,
    O4,
    O5,
}

impl Omega {
    pub const ALL: [Omega; 6] = [Omega::O0, Omega::O1, Omega::O2, Omega::O3, Omega::O4, Omega::O5];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(j: usize) -> Option<Omega> {
        Omega::ALL.get(j).copied()
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Omega_{}", self.index())
    }
}

/// Class of `m ∈ F_q^{2d}` from its coordinate digits (0 iff the element is zero).
pub fn omega_classify_digits(digits: &[usize], d: usize) -> Omega {
    debug_assert_eq!(digits.len(), 2 * d);
    let md = digits[d - 1] != 0;
    let m2d = digits[2 * d - 1] != 0;
    match (md, m2d) {
        (false, false) => {
            if digits.iter().all(|&c| c == 0) {
                Omega::O0
            } else {
                Omega::O1
            }
        }
        (false, true) => Omega::O2,
        (true, true) => Omega::O5,
        (true, false) => {
            if digits[d..2 * d - 1].iter().any(|&c| c != 0) {
                Omega::O3
            } else {
                Omega::O4
            }
        }
    }
}

pub fn omega_classify(m: &[FieldElement], d: usize) -> Omega {
    let digits: Vec<usize> = m.iter().map(|e| e.index()).collect();
    omega_classify_digits(&digits, d)
}

/// Class of every point of `F_q^{2d}`, in canonical point order.
pub fn omega_labels(space: Space, d: usize) -> Vec<Omega> {
    let mut digits = vec![0; 2 * d];
    (0..space.size())
        .map(|i| {
            space.digits_into(i, &mut digits);
            omega_classify_digits(&digits, d)
        })
        .collect()
}

/// Ω-class sizes by formula and by exhaustive count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaPartition {
    pub q: u64,
    pub d: usize,
    pub formula: [u64; 6],
    pub counted: [u64; 6],
}

impl OmegaPartition {
    pub fn sizes_by_formula(q: u64, d: usize) -> [u64; 6] {
        let k = q.pow(d as u32 - 1);
        [1, k * k - 1, k * k * (q - 1), (q - 1) * (k - 1) * k, (q - 1) * k, (q - 1) * (q - 1) * k * k]
    }

    /// Builds the partition and cross-checks formula against enumeration.
    pub fn new(field: &Field, d: usize) -> Result<OmegaPartition> {
        check_d(d)?;
        let space = Space::new(field.size(), 2 * d)?;
        let mut counted = [0u64; 6];
        for w in omega_labels(space, d) {
            counted[w.index()] += 1;
        }
        let q = field.q() as u64;
        let formula = Self::sizes_by_formula(q, d);
        if formula != counted {
            return Err(Error::Contract(format!(
                "Omega class sizes {counted:?} disagree with formula {formula:?}"
            )));
        }
        Ok(OmegaPartition { q, d, formula, counted })
    }
}

/// Normalized surface measure `dσ = (q^n/|V|)·1_V·dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceMeasure {
    variety: Variety,
}

impl SurfaceMeasure {
    pub fn new(variety: Variety) -> SurfaceMeasure {
        SurfaceMeasure { variety }
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    /// Density against `dx` on `V`: `q^n/|V|`.
    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::from(self.variety.space.size()), BigInt::from(self.variety.len()))
    }

    /// Density against `dx` at point `idx` (zero off `V`).
    pub fn weight_at(&self, idx: usize) -> BigRational {
        if self.variety.contains_index(idx) {
            self.weight()
        } else {
            BigRational::from_integer(BigInt::from(0))
        }
    }

    /// Total mass `q^{−n} Σ_x weight(x)`, which is 1.
    pub fn total_mass(&self) -> BigRational {
        self.weight() * BigInt::from(self.variety.len())
            / BigInt::from(self.variety.space.size())
    }

    /// The density as a dense float array.
    pub fn density(&self) -> Vec<f64> {
        let w = self.variety.space.size() as f64 / self.variety.len() as f64;
        self.variety.member.iter().map(|&b| if b { w } else { 0.0 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &Field, v: &[usize]) -> Vec<FieldElement> {
        v.iter().map(|&i| f.element(i)).collect()
    }

    #[test]
    fn flat_disk_examples() {
        let f3 = Field::prime(3).unwrap();
        let v = Variety::flat_disk(&f3, 2).unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!(v.ambient_dim(), 4);
        assert!(v.contains(&el(&f3, &[1, 1, 2, 2])));
        assert!(v.contains(&el(&f3, &[0, 0, 2, 0])));
        assert!(!v.contains(&el(&f3, &[1, 0, 0, 0])));

        let f5 = Field::prime(5).unwrap();
        let v = Variety::flat_disk(&f5, 3).unwrap();
        assert_eq!(v.len(), 625);
        for &i in v.points() {
            let x = v.space().point(i);
            assert_eq!(x[2], f5.dot(&x[..2], &x[..2]));
            assert_eq!(x[5], f5.dot(&x[..2], &x[3..5]));
        }
    }

    #[test]
    fn flat_disk_cardinality() {
        for (q, d) in [(3, 2), (5, 2), (7, 2), (9, 2), (3, 3), (5, 3)] {
            let f = Field::with_order(q).unwrap();
            assert_eq!(Variety::flat_disk(&f, d).unwrap().len(), (q as usize).pow(2 * d as u32 - 2));
        }
    }

    #[test]
    fn paraboloid_examples() {
        let f3 = Field::prime(3).unwrap();
        let p = Variety::paraboloid(&f3, 2).unwrap();
        let pts: Vec<_> = p.points().iter().map(|&i| p.space().point(i)).collect();
        assert_eq!(pts, vec![el(&f3, &[0, 0]), el(&f3, &[1, 1]), el(&f3, &[2, 1])]);
        assert_eq!(Variety::paraboloid(&Field::prime(5).unwrap(), 2).unwrap().len(), 5);
        assert_eq!(Variety::paraboloid(&f3, 3).unwrap().len(), 9);
    }

    #[test]
    fn small_d_rejected() {
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(Variety::flat_disk(&f3, 1), Err(Error::Domain(_))));
        assert!(matches!(Variety::paraboloid(&f3, 1), Err(Error::Domain(_))));
        assert!(matches!(Variety::subspace_h(&f3, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn subspace_h_inside_flat_disk() {
        for (q, d) in [(3, 2), (5, 2), (3, 3), (5, 3)] {
            let f = Field::with_order(q).unwrap();
            let h = Variety::subspace_h(&f, d).unwrap();
            let fd = Variety::flat_disk(&f, d).unwrap();
            assert_eq!(h.len(), (q as usize).pow(d as u32 - 1));
            assert!(h.points().iter().all(|&i| fd.contains_index(i)));
            let s = h.space();
            for &a in h.points() {
                for &b in h.points() {
                    let sum: Vec<_> =
                        s.point(a).iter().zip(s.point(b)).map(|(&x, y)| f.add(x, y)).collect();
                    assert!(h.contains(&sum));
                }
                let scaled: Vec<_> = s.point(a).iter().map(|&x| f.mul(f.element(2), x)).collect();
                assert!(h.contains(&scaled));
            }
        }
        let f3 = Field::prime(3).unwrap();
        let h = Variety::subspace_h(&f3, 2).unwrap();
        let pts: Vec<_> = h.points().iter().map(|&i| h.space().point(i)).collect();
        assert_eq!(pts, vec![el(&f3, &[0, 0, 0, 0]), el(&f3, &[0, 0, 1, 0]), el(&f3, &[0, 0, 2, 0])]);
    }

    #[test]
    fn omega_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(omega_classify(&el(&f7, &[0, 0, 0, 0]), 2), Omega::O0);
        assert_eq!(omega_classify(&el(&f7, &[1, 0, 0, 3]), 2), Omega::O2);
        assert_eq!(omega_classify(&el(&f7, &[0, 1, 0, 0]), 2), Omega::O4);
        assert_eq!(omega_classify(&el(&f7, &[1, 0, 0, 0]), 2), Omega::O1);
        assert_eq!(omega_classify(&el(&f7, &[0, 1, 2, 0]), 2), Omega::O3);
        assert_eq!(omega_classify(&el(&f7, &[0, 1, 0, 5]), 2), Omega::O5);
    }

    #[test]
    fn omega_partition_sizes() {
        for q in [3u32, 5, 7, 9] {
            for d in [2usize, 3] {
                if q > 5 && d == 3 {
                    continue;
                }
                let f = Field::with_order(q).unwrap();
                let part = OmegaPartition::new(&f, d).unwrap();
                let total: u64 = part.counted.iter().sum();
                assert_eq!(total, (q as u64).pow(2 * d as u32));
            }
        }
    }

    #[test]
    fn surface_weights() {
        let f3 = Field::prime(3).unwrap();
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        let fd = SurfaceMeasure::new(Variety::flat_disk(&f3, 2).unwrap());
        assert_eq!(fd.weight(), int(9));
        assert_eq!(fd.total_mass(), int(1));
        assert_eq!(fd.weight_at(1), int(0));
        let pb = SurfaceMeasure::new(Variety::paraboloid(&f3, 2).unwrap());
        assert_eq!(pb.weight(), int(3));
        let h = SurfaceMeasure::new(Variety::subspace_h(&f3, 2).unwrap());
        assert_eq!(h.weight(), int(27));
        assert_eq!(h.total_mass(), int(1));
        assert!((fd.density().iter().sum::<f64>() / 81.0 - 1.0).abs() < 1e-12);
    }
}
