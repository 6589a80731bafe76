mod common;

use common::{gaussian_vec, int_matrix, rat};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use robust_orbits::exactlinalg::linalg::rank_int;
use robust_orbits::exactlinalg::normal_form::is_saturated;
use robust_orbits::exactlinalg::GaussianRational;
use robust_orbits::torus::{act_rational, invariant_matrix, monomial_equal, orbit_equal_k, orbit_equal_t, TorusAction};

fn action(d: usize, n: usize) -> impl Strategy<Value = TorusAction> {
    int_matrix(d, n, 2).prop_map(|m| TorusAction::new(m).unwrap())
}

/// Unit-modulus Gaussian rationals from Pythagorean triples.
fn unit_gaussian() -> impl Strategy<Value = GaussianRational> {
    (1i64..5, 0i64..5, 0usize..4).prop_map(|(p, q, k)| {
        let den = p * p + q * q;
        let mut z = GaussianRational::new(rat(p * p - q * q, den), rat(2 * p * q, den));
        for _ in 0..k {
            z = &z * &GaussianRational::i();
        }
        z
    })
}

fn setup() -> impl Strategy<Value = (TorusAction, Vec<GaussianRational>, Vec<GaussianRational>)> {
    (1usize..=2, 1usize..=4)
        .prop_flat_map(|(d, n)| (action(d, n), gaussian_vec(n), gaussian_vec(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn acting_stays_in_the_orbit((a, v, t) in setup()) {
        let w = act_rational(&a, &t, &v).unwrap();
        prop_assert!(orbit_equal_t(&a, &v, &w).unwrap());
        prop_assert!(orbit_equal_t(&a, &w, &v).unwrap());
    }

    #[test]
    fn unit_elements_preserve_compact_orbits(
        (a, v, t) in (1usize..=2, 1usize..=4).prop_flat_map(|(d, n)| (action(d, n), gaussian_vec(n), prop::collection::vec(unit_gaussian(), d)))
    ) {
        let w = act_rational(&a, &t, &v).unwrap();
        prop_assert!(orbit_equal_k(&a, &v, &w).unwrap());
    }

    #[test]
    fn compact_equality_implies_complex_equality_and_moduli((a, v, w) in (1usize..=2, 1usize..=3).prop_flat_map(|(d, n)| (action(d, n), gaussian_vec(n), gaussian_vec(n)))) {
        if orbit_equal_k(&a, &v, &w).unwrap() {
            prop_assert!(orbit_equal_t(&a, &v, &w).unwrap());
            prop_assert!(v.iter().zip(&w).all(|(x, y)| x.norm_sq() == y.norm_sq()));
        }
        prop_assert!(orbit_equal_k(&a, &v, &v).unwrap());
    }

    #[test]
    fn invariant_matrix_is_a_saturated_kernel(a in (1usize..=3, 1usize..=5).prop_flat_map(|(d, n)| action(d, n))) {
        let h = invariant_matrix(&a);
        let rows = h.rows();
        prop_assert_eq!(h.k(), a.n() - rank_int(a.matrix()));
        for r in &rows {
            for i in 0..a.d() {
                let s: BigInt = (0..a.n()).map(|j| &a.matrix()[(i, j)] * &r[j]).sum();
                prop_assert!(s.is_zero());
            }
        }
        if !rows.is_empty() {
            prop_assert!(is_saturated(&robust_orbits::exactlinalg::IntMatrix::from_rows(rows).unwrap()));
        }
    }

    #[test]
    fn monomial_equality_is_closed_under_sums(
        (v, w, a, b) in (1usize..=3).prop_flat_map(|n| (gaussian_vec(n), gaussian_vec(n), prop::collection::vec(-3i64..=3, n), prop::collection::vec(-3i64..=3, n)))
    ) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
        let sum: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        if monomial_equal(&v, &w, &a).unwrap() && monomial_equal(&v, &w, &b).unwrap() {
            prop_assert!(monomial_equal(&v, &w, &sum).unwrap());
        }
        prop_assert!(monomial_equal(&v, &v, &a).unwrap());
    }
}

#[test]
fn scaling_action_separates_by_ratio() {
    let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
    let g = |re: i64| GaussianRational::from_ints(re, 0);
    assert!(orbit_equal_t(&a, &[g(1), g(1)], &[g(2), GaussianRational::real(rat(1, 2))]).unwrap());
    assert!(!orbit_equal_t(&a, &[g(1), g(1)], &[g(2), g(1)]).unwrap());
    assert!(!orbit_equal_k(&a, &[g(1), g(1)], &[g(2), GaussianRational::real(rat(1, 2))]).unwrap());
}
