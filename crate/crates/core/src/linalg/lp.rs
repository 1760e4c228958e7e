//! Small exact linear programs (dense tableau simplex, Bland's rule).
//!
//! Only used for polyhedral intersection tests, where systems have a handful
//! of variables and constraints.

use num_traits::{Signed, Zero};

use super::{QMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(Q),
}

/// Maximize `c·x` subject to `A x = b`, `x >= 0`.
pub fn maximize(a: &QMatrix, b: &[Q], c: &[Q]) -> LpOutcome {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Phase 1 on [A | I] with nonnegative right-hand side.
    let width = n + m + 1;
    let mut t = QMatrix::zeros(m, width);
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[(i, j)] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        t[(i, n + i)] = Q::from_integer(1.into());
        t[(i, width - 1)] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let phase1: Vec<Q> = (0..n + m).map(|j| if j >= n { Q::from_integer((-1).into()) } else { Q::zero() }).collect();
    let allowed1: Vec<bool> = vec![true; n + m];
    run_simplex(&mut t, &mut basis, &phase1, &allowed1);
    let infeasibility: Q = basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t[(i, width - 1)].clone())
        .fold(Q::zero(), |acc, x| acc + x);
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[(i, j)].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(Q::zero(), m));
    let allowed2: Vec<bool> = (0..n + m).map(|j| j < n).collect();
    match run_simplex(&mut t, &mut basis, &cost, &allowed2) {
        false => LpOutcome::Unbounded,
        true => {
            let value = basis
                .iter()
                .enumerate()
                .map(|(i, &bv)| &cost[bv] * &t[(i, width - 1)])
                .fold(Q::zero(), |acc, x| acc + x);
            LpOutcome::Optimal(value)
        }
    }
}

/// Maximizes `cost` over the tableau. Returns false when unbounded.
fn run_simplex(t: &mut QMatrix, basis: &mut [usize], cost: &[Q], allowed: &[bool]) -> bool {
    let m = t.rows();
    let rhs = t.cols() - 1;
    loop {
        // Reduced cost of column j: c_j - sum_i c_{B_i} t_ij. Enter the first positive one.
        let entering = (0..cost.len()).filter(|&j| allowed[j] && !basis.contains(&j)).find(|&j| {
            let z = (0..m).fold(Q::zero(), |acc, i| acc + &cost[basis[i]] * &t[(i, j)]);
            (&cost[j] - z).is_positive()
        });
        let Some(j) = entering else { return true };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[(i, j)].is_positive() {
                let ratio = &t[(i, rhs)] / &t[(i, j)];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else { return false };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut QMatrix, basis: &mut [usize], r: usize, c: usize) {
    let inv = t[(r, c)].recip();
    for j in 0..t.cols() {
        let v = &t[(r, j)] * &inv;
        t[(r, j)] = v;
    }
    for i in 0..t.rows() {
        if i == r || t[(i, c)].is_zero() {
            continue;
        }
        let f = t[(i, c)].clone();
        for j in 0..t.cols() {
            let v = &f * &t[(r, j)];
            t[(i, j)] -= v;
        }
    }
    basis[r] = c;
}
