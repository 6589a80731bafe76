mod common;

use common::{int_matrix, rat_vec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use robust_orbits::exactlinalg::linalg::{det_int, project_onto_rowspace, rank_int};
use robust_orbits::exactlinalg::matrix::{dot, to_rat};
use robust_orbits::exactlinalg::normal_form::same_column_lattice;
use robust_orbits::exactlinalg::{IntMatrix, IntVector, RatVector};
use robust_orbits::lattices::lll::is_lll_reduced_gram;
use robust_orbits::lattices::sldp::{sldp_exact_with_guard, sldp_h_based, sldp_lll};
use robust_orbits::lattices::{cvp_exact_with_guard, lll_reduce, CvpInstance, SldpInstance};

/// `dist(t + U, Z^n)^2` by scanning a box that provably holds a minimizer: after
/// shifting by integer combinations of the generators, some optimal `u` has
/// coefficients in `[-1/2, 1/2)`, so `|alpha_j - t_j| <= sqrt(n)/2 + sum_i |u_ij|/2`.
fn sldp_brute_force(t: &[BigRational], u: &[IntVector]) -> BigRational {
    let n = t.len();
    let radius: Vec<f64> = (0..n)
        .map(|j| (n as f64).sqrt() / 2.0 + u.iter().map(|ui| ui[j].to_f64().unwrap().abs()).sum::<f64>() / 2.0)
        .collect();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|j| {
            let tj = t[j].to_f64().unwrap();
            ((tj - radius[j]).floor() as i64, (tj + radius[j]).ceil() as i64)
        })
        .collect();
    let rows = if u.is_empty() {
        None
    } else {
        Some(to_rat(&IntMatrix::from_rows(u.to_vec()).unwrap()))
    };
    let mut best: Option<BigRational> = None;
    let mut alpha: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let x: RatVector = t.iter().zip(&alpha).map(|(ti, a)| ti - BigRational::from_integer((*a).into())).collect();
        let along = match &rows {
            Some(r) => {
                let p = project_onto_rowspace(r, &x).unwrap();
                dot(&p, &p)
            }
            None => BigRational::zero(),
        };
        let d = dot(&x, &x) - along;
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
        let mut j = 0;
        loop {
            if j == n {
                return best.unwrap();
            }
            if alpha[j] < ranges[j].1 {
                alpha[j] += 1;
                break;
            }
            alpha[j] = ranges[j].0;
            j += 1;
        }
    }
}

fn sldp_case() -> impl Strategy<Value = SldpInstance> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), 0..n, rat_vec(n, 2, 7)))
        .prop_flat_map(|(n, k, t)| (Just(t), int_matrix(k, n, 2)))
        .prop_filter_map("independent generators", |(t, u)| {
            (rank_int(&u) == u.rows()).then(|| SldpInstance::new(t, u.to_rows()).ok()).flatten()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_sldp_matches_brute_force(inst in sldp_case()) {
        let (d2, w) = sldp_exact_with_guard(&inst, 8).unwrap();
        prop_assert_eq!(&d2, &sldp_brute_force(&inst.t, &inst.u_basis));
        prop_assert_eq!(w.residual_sq(&inst.t), d2);
    }

    #[test]
    fn approximate_backends_sandwich(inst in sldp_case()) {
        let (d2, _) = sldp_exact_with_guard(&inst, 8).unwrap();
        for (est, wit) in [sldp_h_based(&inst).unwrap(), sldp_lll(&inst).unwrap()] {
            prop_assert!(est.sandwiches_squared(&d2));
            let r2 = wit.residual_sq(&inst.t);
            prop_assert!(d2 <= r2 && r2 <= &est.gamma * &est.gamma * &d2);
        }
    }

    #[test]
    fn lll_keeps_the_lattice(g in (1usize..4).prop_flat_map(|m| int_matrix(m, m, 12))) {
        prop_assume!(!det_int(&g).unwrap().is_zero());
        let r = lll_reduce(&to_rat(&g)).unwrap();
        prop_assert!(r.entries().iter().all(|e| e.is_integer()));
        let ri = r.map(|e| e.to_integer());
        prop_assert!(same_column_lattice(&ri, &g));
        prop_assert!(is_lll_reduced_gram(&r.transpose().gram_rows()));
    }

    #[test]
    fn cvp_beats_every_nearby_point(g in (1usize..3).prop_flat_map(|m| int_matrix(m, m, 5)), t in rat_vec(2, 6, 5)) {
        prop_assume!(!det_int(&g).unwrap().is_zero());
        let m = g.rows();
        let t = t[..m].to_vec();
        let sol = cvp_exact_with_guard(&CvpInstance::new(g.clone(), t.clone()).unwrap(), 8).unwrap();
        let gr = to_rat(&g);
        for code in 0..9i64.pow(m as u32) {
            let c: RatVector = (0..m)
                .map(|i| BigRational::from_integer(&sol.coeffs[i] + BigInt::from(code / 9i64.pow(i as u32) % 9 - 4)))
                .collect();
            let p = gr.mul_vec(&c).unwrap();
            let d: BigRational = t.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
            prop_assert!(d >= sol.dist_sq);
        }
    }
}

#[test]
fn point_subspace_distance() {
    let inst = SldpInstance::new(vec![common::rat(2, 5), common::rat(3, 5)], vec![]).unwrap();
    assert_eq!(sldp_exact_with_guard(&inst, 8).unwrap().0, common::rat(8, 25));
}

#[test]
fn guard_refuses_large_rank() {
    let inst = SldpInstance::new(vec![common::rat(1, 3); 4], vec![]).unwrap();
    let err = sldp_exact_with_guard(&inst, 3).unwrap_err();
    assert!(matches!(err, robust_orbits::Error::DimensionGuard { .. }), "{err}");
}
