mod common;

use common::{int_matrix, rat_vec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use robust_orbits::exactlinalg::json::{format_rat, parse_rat};
use robust_orbits::exactlinalg::linalg::{det_int, gram_schmidt, rank_int};
use robust_orbits::exactlinalg::matrix::dot;
use robust_orbits::exactlinalg::normal_form::{hnf, invariant_factors, is_saturated, kernel_lattice_basis, snf};
use robust_orbits::exactlinalg::spectral::{charpoly, gram, poly_eval, sigma_min_2approx, sturm_count};
use robust_orbits::exactlinalg::{GaussianRational, IntMatrix};

fn unimodular(u: &IntMatrix) -> bool {
    det_int(u).unwrap().abs().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_a_unimodular_echelon_form(a in (1usize..4, 1usize..5).prop_flat_map(|(r, c)| int_matrix(r, c, 9))) {
        let (h, u) = hnf(&a);
        prop_assert!(unimodular(&u));
        prop_assert_eq!(&u * &a, h.clone());
        let mut last_pivot: Option<usize> = None;
        for i in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) else {
                prop_assert!((i..h.rows()).all(|k| h.row(k).iter().all(Zero::is_zero)));
                break;
            };
            prop_assert!(last_pivot.is_none_or(|q| p > q));
            prop_assert!(h[(i, p)].is_positive());
            for k in 0..i {
                prop_assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
            }
            last_pivot = Some(p);
        }
    }

    #[test]
    fn snf_is_diagonal_with_dividing_factors(a in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| int_matrix(r, c, 9))) {
        let (s, u, v) = snf(&a);
        prop_assert!(unimodular(&u) && unimodular(&v));
        prop_assert_eq!(&(&u * &a) * &v, s.clone());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                prop_assert!(i == j || s[(i, j)].is_zero());
            }
        }
        let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn kernel_basis_is_saturated(m in (1usize..4, 2usize..6).prop_flat_map(|(r, c)| int_matrix(r, c, 6))) {
        let k = kernel_lattice_basis(&m);
        prop_assert_eq!(k.rows(), m.cols() - rank_int(&m));
        prop_assert!((&m * &k.transpose()).is_zero());
        if k.rows() > 0 {
            prop_assert!(is_saturated(&k));
            prop_assert!(invariant_factors(&k).iter().all(One::is_one));
        }
    }

    #[test]
    fn gram_schmidt_is_orthogonal(vs in (1usize..4).prop_flat_map(|k| prop::collection::vec(rat_vec(4, 5, 6), k))) {
        if let Ok(out) = gram_schmidt(&vs) {
            for i in 0..out.len() {
                for j in 0..i {
                    prop_assert!(dot(&out[i], &out[j]).is_zero());
                }
            }
        }
    }

    #[test]
    fn sigma_min_is_bracketed_within_two(h in (1usize..4).prop_flat_map(|k| int_matrix(k, k + 1, 5))) {
        prop_assume!(rank_int(&h) == h.rows());
        let d = sigma_min_2approx(&h).unwrap();
        let p = charpoly(&gram(&h));
        let d2 = &d * &d;
        let zero = BigRational::zero();
        // sigma_min <= D: some eigenvalue of H H^T lies in (0, D^2].
        prop_assert!(sturm_count(&p, &zero, &d2) >= 1);
        // D <= 2 sigma_min: none lies in (0, D^2/4).
        let quarter = &d2 / BigRational::from_integer(4.into());
        prop_assert!(!p.is_empty());
        let at_quarter_is_root = poly_eval(&p, &quarter).is_zero();
        prop_assert_eq!(sturm_count(&p, &zero, &quarter), usize::from(at_quarter_is_root));
    }

    #[test]
    fn rationals_round_trip_through_text(x in common::rational(1000, 97)) {
        prop_assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x.clone());
        let json = serde_json::to_string(&GaussianRational::new(x.clone(), -x.clone())).unwrap();
        let back: GaussianRational = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, GaussianRational::new(x.clone(), -x));
    }
}

#[test]
fn gaussian_accepts_several_spellings() {
    let want = GaussianRational::new(common::rat(1, 2), common::rat(-3, 1));
    for text in [r#"{"re": "1/2", "im": "-3"}"#, r#"["1/2", "-3"]"#, r#""1/2-3i""#] {
        let g: GaussianRational = serde_json::from_str(text).unwrap();
        assert_eq!(g, want, "{text}");
    }
}

#[test]
fn unit_matrix_kernel_is_empty() {
    assert_eq!(kernel_lattice_basis(&IntMatrix::identity(3)).rows(), 0);
}
