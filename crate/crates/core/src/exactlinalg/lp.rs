//! Exact two-phase simplex over the rationals (Bland's rule, so it always terminates).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                if self.rows[r][j].is_zero() {
                    continue;
                }
                let v = &self.rows[i][j] - &f * &self.rows[r][j];
                self.rows[i][j] = v;
            }
            let v = &self.rhs[i] - &f * &self.rhs[r];
            self.rhs[i] = v;
        }
        self.basis[r] = c;
    }

    /// Maximises `c^T x` over the current basis. Columns with `allowed[j] == false`
    /// never enter.
    fn optimise(&mut self, c: &[BigRational], allowed: &[bool]) -> bool {
        loop {
            let ncols = c.len();
            let entering = (0..ncols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let mut red = c[j].clone();
                    for (r, &b) in self.basis.iter().enumerate() {
                        if !self.rows[r][j].is_zero() {
                            red -= &c[b] * &self.rows[r][j];
                        }
                    }
                    red.is_positive()
                }
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][j];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, j);
        }
    }
}

/// Maximise `c^T x` subject to `A x = b`, `x >= 0`.
pub fn maximize(a: &RatMatrix, b: &[BigRational], c: &[BigRational]) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || c.len() != n {
        return Err(Error::DimensionMismatch("LP shapes disagree".into()));
    }
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<BigRational> = a.row(i).iter().map(|x| if neg { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        rows.push(row);
        rhs.push(if neg { -b[i].clone() } else { b[i].clone() });
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };
    let total = n + m;
    let phase1: Vec<BigRational> = (0..total)
        .map(|j| if j < n { BigRational::zero() } else { -BigRational::one() })
        .collect();
    let all = vec![true; total];
    tab.optimise(&phase1, &all);
    let infeas: BigRational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    let mut c2 = c.to_vec();
    c2.extend((0..m).map(|_| BigRational::zero()));
    let allowed: Vec<bool> = (0..total).map(|j| j < n).collect();
    if !tab.optimise(&c2, &allowed) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs[r].clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{rat, rat_matrix};

    #[test]
    fn small_lp() {
        // max x + y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = rat_matrix(&[&[(1, 1), (2, 1), (1, 1), (0, 1)], &[(3, 1), (1, 1), (0, 1), (1, 1)]]);
        let out = maximize(&a, &[rat(4, 1), rat(6, 1)], &[rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(&x[..2], &[rat(8, 5), rat(6, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = rat_matrix(&[&[(1, 1), (1, 1)]]);
        assert_eq!(maximize(&a, &[rat(-1, 1)], &[rat(0, 1), rat(0, 1)]).unwrap(), LpOutcome::Infeasible);
        let a = rat_matrix(&[&[(1, 1), (-1, 1)]]);
        assert_eq!(maximize(&a, &[rat(0, 1)], &[rat(1, 1), rat(0, 1)]).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = rat_matrix(&[&[(1, 1), (1, 1)], &[(2, 1), (2, 1)]]);
        let out = maximize(&a, &[rat(1, 1), rat(2, 1)], &[rat(1, 1), rat(0, 1)]).unwrap();
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == rat(1, 1)));
    }
}
