//! The canonical additive character, Gauss sums and quadratic character sums.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::cyclo::{CycloValue, ZetaSum};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// `χ(a) = ζ_p^{Tr(a)}`.
pub fn chi(field: &Field, a: FieldElement) -> CycloValue {
    CycloValue::zeta(field.p(), field.trace(a) as u64)
}

/// `Σ_{t ∈ F_q} χ(a·t)`, summed term by term.
pub fn char_sum_orthogonality(field: &Field, a: FieldElement) -> CycloValue {
    let mut acc = ZetaSum::new(field.p());
    for t in field.elements() {
        acc.push(field.trace(field.mul(a, t)), 1);
    }
    acc.finish()
}

/// The standard Gauss sum `G = Σ_{t≠0} η(t) χ(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussSum {
    pub value: CycloValue,
}

impl GaussSum {
    /// `G^k`, exact.
    pub fn power(&self, k: u32) -> CycloValue {
        self.value.pow(k)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex()
    }
}

pub fn gauss_sum(field: &Field) -> GaussSum {
    let mut acc = ZetaSum::new(field.p());
    for t in field.elements().skip(1) {
        let sign = field.eta(t).expect("t is nonzero");
        acc.push(field.trace(t), sign as i64);
    }
    GaussSum { value: acc.finish() }
}

/// `η(−1)·q` as a cyclotomic value: what `G²` must equal.
pub fn gauss_square_target(field: &Field) -> CycloValue {
    CycloValue::from_integer(field.p(), field.eta_minus_one() as i64 * field.q() as i64)
}

/// `Σ_{t ∈ F_q} χ(a t² + b t)` by direct summation.
pub fn quad_sum(field: &Field, a: FieldElement, b: FieldElement) -> Result<CycloValue> {
    if a.is_zero() {
        return Err(Error::Domain(
            "quadratic coefficient must be nonzero; use char_sum_orthogonality".into(),
        ));
    }
    let mut acc = ZetaSum::new(field.p());
    for t in field.elements() {
        let v = field.add(field.mul(a, field.mul(t, t)), field.mul(b, t));
        acc.push(field.trace(v), 1);
    }
    Ok(acc.finish())
}

/// Completed-square evaluation `η(a)·G·χ(b² / (−4a))`.
pub fn quad_sum_closed(
    field: &Field,
    gauss: &GaussSum,
    a: FieldElement,
    b: FieldElement,
) -> Result<CycloValue> {
    let sign = field.eta(a)?;
    let minus_four_a = field.mul(field.from_int(-4), a);
    let arg = field.div(field.mul(b, b), minus_four_a)?;
    let phase = gauss.value.mul_zeta(field.trace(arg) as u64);
    Ok(phase.scale(&BigRational::from_integer(BigInt::from(sign))))
}

/// Embedding `ζ ↦ e^{2πi/p}` of an exact value.
pub fn to_complex(v: &CycloValue) -> Complex64 {
    v.to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn chi_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(chi(&f3, f3.zero()), CycloValue::one(3));
        assert_eq!(chi(&f3, f3.one()), CycloValue::zeta(3, 1));
        let f9 = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let t = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(chi(&f9, t), CycloValue::one(3));
    }

    #[test]
    fn chi_is_additive() {
        let f = Field::with_order(25).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(3) {
                assert_eq!(chi(&f, f.add(a, b)), &chi(&f, a) * &chi(&f, b));
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(char_sum_orthogonality(&f5, f5.zero()), CycloValue::from_integer(5, 5));
        assert!(char_sum_orthogonality(&f5, f5.element(2)).is_zero());
        let f9 = Field::with_order(9).unwrap();
        let t = f9.from_coeffs(&[0, 1]).unwrap();
        assert!(char_sum_orthogonality(&f9, t).is_zero());
    }

    #[test]
    fn gauss_examples() {
        let f3 = Field::prime(3).unwrap();
        let g = gauss_sum(&f3);
        assert_eq!(g.value, &CycloValue::zeta(3, 1) - &CycloValue::zeta(3, 2));
        assert_eq!(g.power(2), CycloValue::from_integer(3, -3));
        assert_eq!(gauss_sum(&Field::prime(5).unwrap()).power(2), CycloValue::from_integer(5, 5));
        assert_eq!(gauss_sum(&Field::prime(7).unwrap()).power(2), CycloValue::from_integer(7, -7));
    }

    #[test]
    fn quad_sum_examples() {
        let f3 = Field::prime(3).unwrap();
        let g3 = gauss_sum(&f3);
        assert_eq!(quad_sum(&f3, f3.one(), f3.zero()).unwrap(), g3.value);
        assert_eq!(
            quad_sum(&f3, f3.one(), f3.one()).unwrap(),
            quad_sum_closed(&f3, &g3, f3.one(), f3.one()).unwrap()
        );

        let f5 = Field::prime(5).unwrap();
        let direct = quad_sum(&f5, f5.element(2), f5.zero()).unwrap();
        // −(ζ + ζ⁴ − ζ² − ζ³)
        let expected = &(&CycloValue::zeta(5, 2) + &CycloValue::zeta(5, 3))
            - &(&CycloValue::zeta(5, 1) + &CycloValue::zeta(5, 4));
        assert_eq!(direct, expected);
        assert!(quad_sum(&f5, f5.zero(), f5.one()).is_err());
    }

    #[test]
    fn quad_sum_identity_small_fields() {
        for q in [3u32, 5, 7, 9] {
            let f = Field::with_order(q).unwrap();
            let g = gauss_sum(&f);
            for a in f.elements().skip(1) {
                for b in f.elements() {
                    assert_eq!(quad_sum(&f, a, b).unwrap(), quad_sum_closed(&f, &g, a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn gauss_modulus() {
        let f = Field::with_order(27).unwrap();
        let g = gauss_sum(&f);
        let n = g.value.norm_sq();
        assert_eq!(n.as_rational().unwrap(), BigRational::from_integer(27.into()));
        assert!(!BigRational::zero().eq(&n.as_rational().unwrap()));
    }
}
