mod common;

use common::{rat, rat_vec};
use num_rational::BigRational;
use proptest::prelude::*;
use robust_orbits::exactlinalg::numeric::pow2;
use robust_orbits::exactlinalg::{GaussianRational, IntMatrix, Matrix};
use robust_orbits::kempfness::{kn_minimize, kn_orbit_equal, kn_value, KnProblem};
use robust_orbits::lattices::Backend;
use robust_orbits::rop::SepBound;
use robust_orbits::torus::{act_rational, TorusAction};

/// Weights `±e_i` plus extra random columns, so the origin is interior.
fn interior_action(d: usize) -> impl Strategy<Value = TorusAction> {
    common::int_matrix(d, 2, 2).prop_map(move |extra| {
        let m: IntMatrix = Matrix::from_fn(d, 2 * d + 2, |i, j| match j {
            j if j < d => (i == j).into(),
            j if j < 2 * d => (-i64::from(i + d == j)).into(),
            j => extra[(i, j - 2 * d)].clone(),
        });
        TorusAction::new(m).unwrap()
    })
}

fn problem() -> impl Strategy<Value = KnProblem> {
    (1usize..=2).prop_flat_map(|d| {
        (interior_action(d), prop::collection::vec(1i64..=12, 2 * d + 2))
            .prop_map(|(a, q)| KnProblem::new(a, q.into_iter().map(|k| rat(k, 4)).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn midpoint_convexity((p, x, y) in problem().prop_flat_map(|p| { let d = p.d(); (Just(p), rat_vec(d, 2, 4), rat_vec(d, 2, 4)) })) {
        let eps = pow2(-50);
        let mid: Vec<BigRational> = x.iter().zip(&y).map(|(a, b)| (a + b) / BigRational::from_integer(2.into())).collect();
        let fm = kn_value(&p, &mid, &eps).unwrap();
        let fx = kn_value(&p, &x, &eps).unwrap();
        let fy = kn_value(&p, &y, &eps).unwrap();
        prop_assert!(fm.lower() * BigRational::from_integer(2.into()) <= fx.upper() + fy.upper());
    }

    #[test]
    fn minimization_descends_to_tolerance(p in problem()) {
        let tol = pow2(-20);
        let s = kn_minimize(&p, &tol).unwrap();
        prop_assert!(s.grad_norm <= tol);
        prop_assert!(s.f_trace.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(s.f_value.lower() <= s.f_trace[0].clone());
    }
}

#[test]
fn closed_orbits_are_recognised() {
    let a = TorusAction::from_rows(&[&[1, -1, 1, 0], &[0, 0, 1, -1]]).unwrap();
    let g = |re: i64, im: i64| GaussianRational::from_ints(re, im);
    let v = vec![g(1, 0), g(2, 1), g(1, 1), g(3, 0)];
    let w = act_rational(&a, &[g(2, 0), GaussianRational::real(rat(1, 3))], &v).unwrap();
    let sep = SepBound::default_for(&a, &v, &w);
    assert!(kn_orbit_equal(&a, &v, &w, &sep, Backend::Exact).unwrap().equal);

    let u = vec![g(1, 0), g(1, 0), g(1, 0), g(1, 0)];
    let sep = SepBound::default_for(&a, &v, &u);
    assert!(!kn_orbit_equal(&a, &v, &u, &sep, Backend::Exact).unwrap().equal);
}
