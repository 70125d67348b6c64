use std::sync::Arc;

use flatdisk::field::Field;
use flatdisk::normlab::{extend, lp_norm, restrict, LpExponent};
use flatdisk::transform::{convolve_counting, fourier_forward, inverse_vs_measure, GridFunction, Measure};
use flatdisk::varieties::Variety;
use proptest::prelude::*;

fn f3() -> Arc<Field> {
    Arc::new(Field::with_order(3).unwrap())
}

fn counting_fn(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plancherel_and_inversion_exact(v in counting_fn(81)) {
        let g = GridFunction::from_integers(f3(), 4, Measure::Counting, &v).unwrap();
        let h = fourier_forward(&g).unwrap();
        prop_assert_eq!(h.inner(&h).unwrap(), g.inner(&g).unwrap());
        let back = inverse_vs_measure(&h, &Measure::Normalized).unwrap();
        prop_assert!(back.exact().unwrap().equals(g.exact().unwrap()).unwrap());
    }

    #[test]
    fn convolution_theorem_exact(a in counting_fn(9), b in counting_fn(9)) {
        let f = f3();
        let g1 = GridFunction::from_integers(f.clone(), 2, Measure::Counting, &a).unwrap();
        let g2 = GridFunction::from_integers(f, 2, Measure::Counting, &b).unwrap();
        let lhs = fourier_forward(&convolve_counting(&g1, &g2).unwrap()).unwrap();
        let rhs = fourier_forward(&g1).unwrap().mul(&fourier_forward(&g2).unwrap()).unwrap();
        prop_assert!(lhs.exact().unwrap().equals(rhs.exact().unwrap()).unwrap());
    }

    #[test]
    fn restriction_is_adjoint_of_extension(v in counting_fn(81), w in counting_fn(9)) {
        let f = f3();
        let disk = Arc::new(Variety::flat_disk(&f, 2).unwrap());
        let g = GridFunction::from_integers(f.clone(), 4, Measure::Counting, &v).unwrap();
        let mut on_disk = vec![0i64; 81];
        for (k, &idx) in disk.points().iter().enumerate() {
            on_disk[idx] = w[k];
        }
        let s = GridFunction::from_integers(f, 4, Measure::Surface(disk.clone()), &on_disk).unwrap();
        let lhs = restrict(&g, &disk).unwrap().inner(&s).unwrap();
        let rhs = g.inner(&extend(&s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalized_norms_increase_with_p(v in counting_fn(9)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let g = GridFunction::from_integers(f3(), 2, Measure::Normalized, &v).unwrap();
        let ps = [LpExponent::int(1), LpExponent::ratio(3, 2), LpExponent::int(2), LpExponent::int(5), LpExponent::Infinity];
        let norms: Vec<f64> = ps.iter().map(|&p| lp_norm(&g, p).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12));
        }
    }
}
