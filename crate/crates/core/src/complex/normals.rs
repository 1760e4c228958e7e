//! Lattice normal vectors, balancing and ℚ-smoothness in codimension one.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ValidatedComplex;
use crate::error::{Error, Result};
use crate::linalg::lattice::{primitive_integer, quotient_map, reduce_mod_lattice, saturated_lattice, QuotientMap};
use crate::linalg::{QMatrix, ZMatrix, Q};

/// Primitive generator of `(ℤⁿ ∩ Tan P) / (ℤⁿ ∩ Tan Q)`, oriented into `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalVector {
    pub q: usize,
    pub p: usize,
    /// Coordinates in `ℤⁿ / (ℤⁿ ∩ Tan Q)` for the quotient basis of `Q`.
    #[serde(with = "crate::formats::bigint_vec")]
    pub quotient: Vec<BigInt>,
    /// Canonical integer lift, reduced modulo `ℤⁿ ∩ Tan Q`.
    #[serde(with = "crate::formats::bigint_vec")]
    pub lift: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancingEntry {
    pub cell: usize,
    pub balanced: bool,
    /// `Σ m_P n_{Q,P}` in quotient coordinates.
    #[serde(with = "crate::formats::bigint_vec")]
    pub defect: Vec<BigInt>,
    /// Canonical lift of the defect.
    #[serde(with = "crate::formats::bigint_vec")]
    pub defect_lift: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancingReport {
    pub balanced: bool,
    pub entries: Vec<BalancingEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSmoothEntry {
    pub cell: usize,
    pub smooth: bool,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSmoothReport {
    pub smooth: bool,
    pub entries: Vec<QSmoothEntry>,
}

impl ValidatedComplex {
    /// Basis (rows, Hermite form) of `ℤⁿ ∩ Tan(cell)`.
    pub fn tangent_lattice(&self, id: usize) -> Result<ZMatrix> {
        let cell = self.cell(id)?;
        Ok(saturated_lattice(&self.complex.tangent_generators(cell), self.complex.ambient_dim))
    }

    pub fn quotient_by_cell(&self, id: usize) -> Result<QuotientMap> {
        Ok(quotient_map(&self.tangent_lattice(id)?, self.complex.ambient_dim))
    }

    /// Direction of the generator of `P` that is not a generator of `Q`.
    fn extra_direction(&self, q: usize, p: usize) -> Result<Vec<Q>> {
        let (cq, cp) = (self.cell(q)?, self.cell(p)?);
        if !(cp.contains(cq) && cp.generator_dim() == cq.generator_dim() + 1) {
            return Err(Error::NotAFacet { q, p });
        }
        if let Some(&v) = cp.vertices.iter().find(|v| !cq.vertices.contains(v)) {
            let v0 = cq.vertices[0];
            return Ok(crate::linalg::vec_sub(&self.complex.vertices[v], &self.complex.vertices[v0]));
        }
        let r = *cp.rays.iter().find(|r| !cq.rays.contains(r)).expect("P has one more generator than Q");
        Ok(self.complex.rays[r].iter().map(|x| Q::from_integer(x.clone())).collect())
    }

    pub fn primitive_normal(&self, q: usize, p: usize) -> Result<NormalVector> {
        let dir = self.extra_direction(q, p)?;
        let lattice = self.tangent_lattice(q)?;
        let pi = quotient_map(&lattice, self.complex.ambient_dim);
        Ok(normal_from(&pi, &lattice, &dir, q, p))
    }

    pub fn check_balancing(&self) -> Result<BalancingReport> {
        let d = self.pure_dim().ok_or(Error::NotPure)?;
        if d == 0 {
            return Ok(BalancingReport { balanced: true, entries: Vec::new() });
        }
        let entries: Vec<BalancingEntry> = self
            .cells_of_dim(d - 1)
            .par_iter()
            .map(|&q| -> Result<BalancingEntry> {
                let lattice = self.tangent_lattice(q)?;
                let pi = quotient_map(&lattice, self.complex.ambient_dim);
                let mut defect = vec![BigInt::zero(); pi.target_dim()];
                for p in self.cofacets(q) {
                    let nv = normal_from(&pi, &lattice, &self.extra_direction(q, p)?, q, p);
                    let m = BigInt::from(self.weight(p));
                    for (acc, x) in defect.iter_mut().zip(&nv.quotient) {
                        *acc += &m * x;
                    }
                }
                let defect_lift = reduce_mod_lattice(&pi.lift(&defect), &lattice);
                Ok(BalancingEntry { cell: q, balanced: defect.iter().all(Zero::is_zero), defect, defect_lift })
            })
            .collect::<Result<_>>()?;
        Ok(BalancingReport { balanced: entries.iter().all(|e| e.balanced), entries })
    }

    /// Requires a balanced complex.
    pub fn check_q_smooth_codim1(&self) -> Result<QSmoothReport> {
        let bal = self.check_balancing()?;
        if let Some(e) = bal.entries.iter().find(|e| !e.balanced) {
            return Err(Error::NotBalanced { cell: e.cell });
        }
        let d = self.pure_dim().ok_or(Error::NotPure)?;
        if d == 0 {
            return Ok(QSmoothReport { smooth: true, entries: Vec::new() });
        }
        let entries: Vec<QSmoothEntry> = self
            .cells_of_dim(d - 1)
            .par_iter()
            .map(|&q| -> Result<QSmoothEntry> {
                let lattice = self.tangent_lattice(q)?;
                let pi = quotient_map(&lattice, self.complex.ambient_dim);
                let cols: Vec<Vec<Q>> = self
                    .cofacets(q)
                    .into_iter()
                    .map(|p| {
                        let nv = normal_from(&pi, &lattice, &self.extra_direction(q, p)?, q, p);
                        Ok(nv.quotient.into_iter().map(Q::from_integer).collect())
                    })
                    .collect::<Result<_>>()?;
                let kernel_dim = QMatrix::from_columns(&cols, pi.target_dim()).kernel().cols();
                Ok(QSmoothEntry { cell: q, smooth: kernel_dim == 1, kernel_dim })
            })
            .collect::<Result<_>>()?;
        Ok(QSmoothReport { smooth: entries.iter().all(|e| e.smooth), entries })
    }
}

fn normal_from(pi: &QuotientMap, lattice: &ZMatrix, dir: &[Q], q: usize, p: usize) -> NormalVector {
    let image = pi.project_q(dir);
    let quotient = primitive_integer(&image).expect("generator of P leaves Tan Q");
    // primitive_integer keeps the direction, so the orientation is already inward.
    debug_assert!(quotient.iter().zip(&image).all(|(a, b)| a.is_zero() == b.is_zero() && (a.is_negative() == b.is_negative())));
    let lift = reduce_mod_lattice(&pi.lift(&quotient), lattice);
    NormalVector { q, p, quotient, lift }
}
