use std::cmp::Ordering;

use flatdisk::exponents::{interpolate, EpsExponent, ExponentPair};
use proptest::prelude::*;

/// `(a + bε)/(c + dε)` with a nonzero constant denominator term.
fn affine() -> impl Strategy<Value = EpsExponent> {
    (-40i64..40, -20i64..20, 1i64..30, -15i64..15).prop_map(|(a, b, c, d)| EpsExponent::affine(a, b, c, d).unwrap())
}

proptest! {
    #[test]
    fn display_round_trips(x in affine()) {
        let back: EpsExponent = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_operations(x in affine(), y in affine()) {
        prop_assert_eq!(x.add(&y).sub(&y), x.clone());
        prop_assert_eq!(x.add(&y), y.add(&x));
        if !y.is_zero() {
            prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x.clone());
        }
        prop_assert_eq!(x.sub(&x), EpsExponent::zero());
    }

    #[test]
    fn asymptotic_order_is_consistent(x in affine(), y in affine()) {
        let xy = x.cmp_asym(&y);
        prop_assert_eq!(xy, y.cmp_asym(&x).reverse());
        prop_assert_eq!(xy, x.sub(&y).signum());
        // At ε = 0 the order can only be refined, never reversed.
        let (a, b) = (x.at_zero().unwrap(), y.at_zero().unwrap());
        if a != b {
            prop_assert_eq!(xy, a.cmp(&b));
        }
    }

    #[test]
    fn interpolation_endpoints_and_duality(
        (p0, r0, p1, r1) in (2i64..12, 2i64..12, 2i64..12, 2i64..12),
        theta in 0i64..=8,
    ) {
        let e0 = ExponentPair::new(&EpsExponent::integer(p0), &EpsExponent::integer(r0)).unwrap();
        let e1 = ExponentPair::new(&EpsExponent::integer(p1), &EpsExponent::integer(r1)).unwrap();
        prop_assert_eq!(interpolate(&e0, &e1, &EpsExponent::zero()).unwrap(), e0.clone());
        prop_assert_eq!(interpolate(&e0, &e1, &EpsExponent::one()).unwrap(), e1.clone());
        let t = EpsExponent::rational(theta, 8);
        let mid = interpolate(&e0, &e1, &t).unwrap();
        prop_assert!(mid.is_valid());
        prop_assert_eq!(mid.dual().dual(), mid);
    }
}

#[test]
fn eps_is_positive_and_infinitesimal() {
    let eps = EpsExponent::eps();
    assert_eq!(eps.signum(), Ordering::Greater);
    assert_eq!(eps.cmp_asym(&EpsExponent::rational(1, 1_000_000)), Ordering::Less);
    assert!(EpsExponent::rational(1, 2).recip().unwrap().ge(&EpsExponent::integer(2)));
    assert!("1/eps".parse::<EpsExponent>().unwrap().at_zero().is_err());
}
