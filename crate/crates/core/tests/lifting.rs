mod common;

use common::int_matrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use robust_orbits::exactlinalg::linalg::det_int;
use robust_orbits::exactlinalg::normal_form::same_column_lattice;
use robust_orbits::exactlinalg::{Matrix, RatMatrix};
use robust_orbits::lattices::{cvp_exact_with_guard, sldp::sldp_exact_with_guard, CvpInstance};
use robust_orbits::lifting::quadratic::outer_sum;
use robust_orbits::lifting::{
    cvp_to_sldp, eutactic_check, lift_lattice, orthogonal_complete_counted, sum_of_squares, waring_decompose_detailed,
    CvpReduction, ReductionPolicy,
};

/// Inverse stereographic image of `(a, b)`: a rational point on the unit sphere in Q^3.
fn sphere_point(a: i64, b: i64, c: i64) -> Vec<BigRational> {
    let den = a * a + b * b + c * c;
    [2 * a * c, 2 * b * c, c * c - a * a - b * b]
        .iter()
        .map(|&x| BigRational::new(x.into(), den.into()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn completion_is_orthogonal((a, b, c) in (-6i64..=6, -6i64..=6, 1i64..=6)) {
        let x = RatMatrix::from_rows(vec![sphere_point(a, b, c)]).unwrap();
        let (y, reflections) = orthogonal_complete_counted(&x).unwrap();
        prop_assert!(reflections <= 1);
        prop_assert_eq!(y.row(0), x.row(0));
        prop_assert_eq!(&y * &y.transpose(), Matrix::identity(3));
    }

    #[test]
    fn lifted_basis_recovers_the_lattice(g in (1usize..=2).prop_flat_map(|m| int_matrix(m, m, 6))) {
        prop_assume!(!det_int(&g).unwrap().is_zero());
        let r = lift_lattice(&g).unwrap();
        prop_assert_eq!(&r.y * &r.y.transpose(), Matrix::identity(r.n));
        prop_assert!(eutactic_check(&g, &r.eutactic_frame(), &(&r.s * &r.f)).unwrap());
        let x = r.scaled_projection();
        prop_assert!(x.entries().iter().all(|e| e.is_integer()));
        prop_assert!(same_column_lattice(&x.map(|e| e.to_integer()), &g));
    }

    #[test]
    fn cvp_reduction_preserves_distance(g in (1usize..=2).prop_flat_map(|m| int_matrix(m, m, 4)), t in common::rat_vec(2, 5, 6)) {
        prop_assume!(!det_int(&g).unwrap().is_zero());
        let t = t[..g.rows()].to_vec();
        let inst = CvpInstance::new(g, t).unwrap();
        let exact = cvp_exact_with_guard(&inst, 8).unwrap().dist_sq;
        let CvpReduction::Reduced { s_total, instance, .. } = cvp_to_sldp(&inst, ReductionPolicy::default()).unwrap() else {
            panic!("the default policy reduces");
        };
        let (d2, _) = sldp_exact_with_guard(&instance, 8).unwrap();
        prop_assert_eq!(exact, BigRational::from_integer(&s_total * &s_total) * d2);
    }

    #[test]
    fn greedy_squares_sum_back(d in any::<u64>()) {
        let d = BigInt::from(d);
        let terms = sum_of_squares(&d).unwrap();
        prop_assert_eq!(terms.iter().map(|a| a * a).sum::<BigInt>(), d);
        prop_assert!(terms.len() <= 10);
        prop_assert!(terms.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn waring_reproduces_the_form(b in (1usize..=3).prop_flat_map(|m| int_matrix(m, m, 4)), shift in 1i64..5) {
        let m = b.rows();
        let br = robust_orbits::exactlinalg::matrix::to_rat(&b);
        let a = &(&br.transpose() * &br) + &Matrix::identity(m).scale(&BigRational::new(shift.into(), 3.into()));
        let w = waring_decompose_detailed(&a).unwrap();
        prop_assert_eq!(outer_sum(&w.vectors, m), a);
        prop_assert!(w.vectors.len() as u64 <= w.length_bound());
    }
}

#[test]
fn unit_lattice_lifts_to_dimension_four() {
    let r = lift_lattice(&Matrix::identity(1)).unwrap();
    assert_eq!((r.n, r.s_total.clone()), (4, BigInt::from(2)));
    assert!(!r.y.entries().iter().all(Zero::is_zero));
}
