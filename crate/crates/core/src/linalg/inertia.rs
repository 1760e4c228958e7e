//! Exact inertia of symmetric rational matrices by symmetric Gaussian
//! elimination (congruence transformations preserve inertia).

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{QMatrix, Q};
use crate::error::Error;

/// Inertia triple `(n_plus, n_zero, n_minus)` of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Self { n_plus, n_zero, n_minus }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n_zero == 0 && self.n_minus == 0
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }
}

/// Signature together with the diagonal pivots of the congruence `T^T A T = D`.
///
/// The pivots are an auditable certificate: every positive pivot contributes to
/// `n_plus`, every negative one to `n_minus`, and the remaining dimensions are null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaCertificate {
    pub signature: Signature,
    #[serde(with = "crate::formats::rational_vec")]
    pub pivots: Vec<Q>,
}

pub fn inertia(a: &QMatrix) -> Result<InertiaCertificate, Error> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let mut pivots = Vec::new();

    loop {
        if let Some(pos) = active.iter().position(|&i| !m[(i, i)].is_zero()) {
            let k = active.remove(pos);
            let d = m[(k, k)].clone();
            for &i in &active {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &d;
                for &j in &active {
                    if !m[(k, j)].is_zero() {
                        let delta = &f * &m[(k, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(d);
            continue;
        }
        // Zero diagonal: pair up a nonzero off-diagonal entry. Adding row/column j
        // to row/column i turns the (i, i) entry into 2 * a_ij.
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..].iter().find(|&&j| !m[(i, j)].is_zero()).map(|&j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        let n = m.rows();
        for c in 0..n {
            let v = m[(j, c)].clone();
            m[(i, c)] += v;
        }
        for r in 0..n {
            let v = m[(r, j)].clone();
            m[(r, i)] += v;
        }
    }

    let n_plus = pivots.iter().filter(|p| p.is_positive()).count();
    let n_minus = pivots.iter().filter(|p| p.is_negative()).count();
    Ok(InertiaCertificate {
        signature: Signature::new(n_plus, a.rows() - n_plus - n_minus, n_minus),
        pivots,
    })
}
