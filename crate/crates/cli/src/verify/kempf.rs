//! Criteria on the Kempf–Ness function: the flat family and the certified
//! derivatives against floating-point central differences.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use robust_orbits::exactlinalg::numeric::pow2;
use robust_orbits::kempfness::{kn_gradient, kn_hessian, kn_value, small_hessian_family, KnProblem};
use robust_orbits::torus::{weights_span_affinely, TorusAction};

use super::{core_err, ensure, gen, tol};

pub fn flat_family() -> Result<String, String> {
    let x2_bound = BigRational::from_float(tol::FLAT_SECOND_COORD).expect("finite");
    let mut widest_bracket = 0.0f64;
    for n in 6..=30u64 {
        let r = small_hessian_family(n).map_err(core_err)?;
        let fail = |what: &str| format!("N = {n}: {what}");
        ensure(r.minimizer_bracket.holds, || fail("e^x1 is outside (2^(1/3), (1 + N 2^(-N/3)) 2^(1/3))"))?;
        let x2 = &r.second_coordinate.value;
        ensure(x2.lower().abs().max(x2.upper().abs()) <= x2_bound, || fail("|x2| > 1e-12"))?;
        ensure(r.gap.holds, || fail("gap exceeds 2^(-N/3) (e + 1/e - 2)"))?;
        ensure(r.log_lower.holds, || fail("H-matrix bound δ_log >= log 2 / (2N) fails"))?;
        ensure(r.all_hold, || fail(&format!("report checks fail: {:?}", r.notes)))?;
        let b = &r.minimizer_bracket;
        if let (Some(lo), Some(hi)) = (&b.lower, &b.upper) {
            let rel = ((b.value.value.clone() - lo.value.clone()) / (hi.value.clone() - lo.value.clone()))
                .to_f64()
                .unwrap_or(f64::NAN);
            widest_bracket = widest_bracket.max(rel);
        }
    }
    Ok(format!(
        "N = 6..30: bracket, |x2| <= 1e-12, gap and log lower bound all hold (e^x1 sits at most {:.3} of the way up its bracket)",
        widest_bracket
    ))
}

/// Floating-point oracle for `f(x) = log sum q_i exp(w_i . x)`.
struct Oracle {
    weights: Vec<Vec<f64>>,
    log_q: Vec<f64>,
}

impl Oracle {
    fn exponents(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.log_q)
            .map(|(w, lq)| lq + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let e = self.exponents(x);
        let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + e.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
    }

    /// `sum p_i w_i` with `p` the softmax of the exponents.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let e = self.exponents(x);
        let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let p: Vec<f64> = e.iter().map(|v| (v - m).exp()).collect();
        let s: f64 = p.iter().sum();
        (0..x.len())
            .map(|j| p.iter().zip(&self.weights).map(|(pi, w)| pi * w[j]).sum::<f64>() / s)
            .collect()
    }
}

fn shifted(x: &[f64], j: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[j] += h;
    y
}

/// `|a - b|_inf / max(|b|_inf, 1e-3)`.
fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|v| v.abs()).fold(1e-3, f64::max);
    diff / scale
}

fn random_problem(rng: &mut impl Rng, d: usize) -> (KnProblem, Oracle) {
    loop {
        let n = (d + 1 + rng.gen_range(0..4)).min(8);
        let m = gen::int_matrix(rng, d, n, 2);
        let act = TorusAction::new(m.clone()).expect("nonempty");
        if !weights_span_affinely(&act) {
            continue;
        }
        let q: Vec<BigRational> = (0..n).map(|_| BigRational::new(rng.gen_range(1..=16).into(), 4.into())).collect();
        let oracle = Oracle {
            weights: (0..n).map(|j| (0..d).map(|i| m[(i, j)].to_f64().expect("small")).collect()).collect(),
            log_q: q.iter().map(|v| v.to_f64().expect("small").ln()).collect(),
        };
        return (KnProblem::new(act, q).expect("validated"), oracle);
    }
}

pub fn derivatives() -> Result<String, String> {
    let mut rng = gen::rng(8);
    let eps = pow2(-60);
    let h = 1e-5;
    let (mut worst_g, mut worst_h, mut worst_f) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let d = 1 + i % 4;
        let (problem, oracle) = random_problem(&mut rng, d);
        let x: Vec<BigRational> = (0..d).map(|_| BigRational::new(rng.gen_range(-8..=8).into(), 16.into())).collect();
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64().expect("small")).collect();

        let f = kn_value(&problem, &x, &eps).map_err(core_err)?;
        worst_f = worst_f.max((f.value.to_f64().unwrap_or(f64::NAN) - oracle.value(&xf)).abs());

        let grad: Vec<f64> = kn_gradient(&problem, &x, &eps)
            .map_err(core_err)?
            .iter()
            .map(|g| g.value.to_f64().unwrap_or(f64::NAN))
            .collect();
        let fd_grad: Vec<f64> = (0..d)
            .map(|j| (oracle.value(&shifted(&xf, j, h)) - oracle.value(&shifted(&xf, j, -h))) / (2.0 * h))
            .collect();
        let eg = rel_err(&grad, &fd_grad);

        let hess: Vec<f64> = kn_hessian(&problem, &x, &eps)
            .map_err(core_err)?
            .iter()
            .flatten()
            .map(|v| v.value.to_f64().unwrap_or(f64::NAN))
            .collect();
        let mut fd_hess = vec![0.0; d * d];
        for j in 0..d {
            let (gp, gm) = (oracle.gradient(&shifted(&xf, j, h)), oracle.gradient(&shifted(&xf, j, -h)));
            for k in 0..d {
                fd_hess[k * d + j] = (gp[k] - gm[k]) / (2.0 * h);
            }
        }
        let eh = rel_err(&hess, &fd_hess);
        ensure(eg <= tol::DERIVATIVE_REL && eh <= tol::DERIVATIVE_REL, || {
            format!("problem {i}: relative errors gradient {eg:.2e}, Hessian {eh:.2e}")
        })?;
        worst_g = worst_g.max(eg);
        worst_h = worst_h.max(eh);
    }
    ensure(worst_f <= 1e-12, || format!("certified f disagrees with the float oracle by {worst_f:.2e}"))?;
    Ok(format!(
        "50 problems with d <= 4, n <= 8: max relative error gradient {worst_g:.1e}, Hessian {worst_h:.1e} (tolerance {:.0e})",
        tol::DERIVATIVE_REL
    ))
}
