//! Fans: Bergman fans of matroids, star fans, and the canonical compactification.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Cell, ValidatedComplex, WeightedComplex};
use crate::error::{Error, Result};
use crate::linalg::lattice::{primitive_integer, quotient_map};
use crate::linalg::{vec_sub, Q};
use crate::matroid::Matroid;

/// Bergman fan in `ℝⁿ/ℝ·(1,…,1)`, written in `ℝ^{n−1}` via `x ↦ (x_i − x_{n−1})_{i<n−1}`.
///
/// Rays are indexed like the proper nonempty flats (by rank, then bitmask);
/// cells are the flags, listed by length and then lexicographically.
pub fn bergman_fan(m: &Matroid) -> Result<WeightedComplex> {
    if m.has_loops() {
        return Err(Error::LooplessRequired);
    }
    if m.n() == 0 {
        return Err(Error::InvalidParameters("empty ground set".into()));
    }
    let n = m.n();
    let flats = m.flat_lattice().proper_flats();
    let rays: Vec<Vec<BigInt>> = flats
        .iter()
        .map(|&f| {
            let last = i64::from(f >> (n - 1) & 1);
            (0..n - 1).map(|i| BigInt::from(i64::from(f >> i & 1) - last)).collect()
        })
        .collect();
    let max_len = m.rank().saturating_sub(1);
    let mut flags: Vec<Vec<usize>> = vec![Vec::new()];
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for f in &level {
            for (id, &g) in flats.iter().enumerate() {
                let extends = f.last().is_none_or(|&last| {
                    let h = flats[last];
                    h & g == h && h != g && id > last
                });
                if extends {
                    let mut e = f.clone();
                    e.push(id);
                    next.push(e);
                }
            }
        }
        next.sort();
        flags.extend(next.iter().cloned());
        level = next;
    }
    let cells = flags
        .into_iter()
        .map(|f| {
            let weight = (f.len() == max_len).then_some(1);
            Cell { vertices: vec![0], rays: f, weight, dim: None }
        })
        .collect();
    Ok(WeightedComplex::new(n - 1, vec![vec![Q::zero(); n - 1]], rays, cells))
}

impl ValidatedComplex {
    /// The fan of cones `ℝ_{≥0}·(P − R)` for cells `P ⊇ R`, in coordinates of
    /// `ℤⁿ/(ℤⁿ ∩ Tan R)`. Maximal cells keep their weights.
    pub fn star_fan(&self, r: usize) -> Result<WeightedComplex> {
        let cr = self.cell(r)?.clone();
        let c = self.complex();
        let pi = quotient_map(&self.tangent_lattice(r)?, c.ambient_dim);
        let target = pi.target_dim();
        let v0 = &c.vertices[cr.vertices[0]];
        let mut rays: Vec<Vec<BigInt>> = Vec::new();
        let mut ray_ids: HashMap<Vec<BigInt>, usize> = HashMap::new();
        let mut cells = Vec::new();
        for id in self.cells_containing(r) {
            let cell = &c.cells[id];
            let mut dirs: Vec<Vec<Q>> = Vec::new();
            for v in cell.vertices.iter().filter(|v| !cr.vertices.contains(v)) {
                dirs.push(vec_sub(&c.vertices[*v], v0));
            }
            for ray in cell.rays.iter().filter(|x| !cr.rays.contains(x)) {
                dirs.push(c.rays[*ray].iter().map(|x| Q::from_integer(x.clone())).collect());
            }
            let mut ids: Vec<usize> = dirs
                .iter()
                .map(|d| {
                    let prim = primitive_integer(&pi.project_q(d)).expect("generator outside R has nonzero image");
                    let next = rays.len();
                    *ray_ids.entry(prim.clone()).or_insert_with(|| {
                        rays.push(prim);
                        next
                    })
                })
                .collect();
            ids.sort_unstable();
            let weight = self.is_maximal(id).then(|| self.weight(id));
            cells.push(Cell { vertices: vec![0], rays: ids, weight, dim: None });
        }
        Ok(WeightedComplex::new(target, vec![vec![Q::zero(); target]], rays, cells))
    }

    /// Requires a fan: a single vertex, located at the origin.
    pub fn canonical_compactification(&self) -> Result<CompactifiedFan> {
        canonical_compactification(self)
    }
}

/// Cell `(τ, σ)` of the compactification, with `τ ⊆ σ` cones given by ray ids.
/// It is a cube of dimension `|σ| − |τ|` inside the stratum `ℝⁿ / span τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactCell {
    pub tau: Vec<usize>,
    pub sigma: Vec<usize>,
    pub dim: usize,
    /// Facets with incidence signs.
    pub faces: Vec<(usize, i64)>,
    pub weight: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactifiedFan {
    pub ambient_dim: usize,
    #[serde(with = "crate::formats::bigint_vecs")]
    pub rays: Vec<Vec<BigInt>>,
    /// Ray sets of the cones of the fan.
    pub cones: Vec<Vec<usize>>,
    /// Cones not contained in another cone, with their weights.
    pub maximal_cones: Vec<(usize, i64)>,
    pub cells: Vec<CompactCell>,
}

impl CompactifiedFan {
    pub fn num_cells_of_dim(&self, d: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == d).count()
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    /// Position of a vertex `(τ, τ)` in the bounded model with rays truncated at length one.
    pub fn vertex_position(&self, cell: usize) -> Option<Vec<BigInt>> {
        let c = &self.cells[cell];
        (c.dim == 0).then(|| {
            let mut p = vec![BigInt::zero(); self.ambient_dim];
            for &r in &c.tau {
                for (x, y) in p.iter_mut().zip(&self.rays[r]) {
                    *x += y;
                }
            }
            p
        })
    }
}

pub fn canonical_compactification(fan: &ValidatedComplex) -> Result<CompactifiedFan> {
    let c = fan.complex();
    if c.vertices.len() != 1 || c.vertices[0].iter().any(|x| !x.is_zero()) {
        return Err(Error::NotAFan);
    }
    let cones: Vec<Vec<usize>> = c.cells.iter().map(|cell| cell.rays.clone()).collect();
    let maximal_cones: Vec<(usize, i64)> = fan.maximal_cells().iter().map(|&i| (i, fan.weight(i))).collect();
    let cone_id: HashMap<&[usize], usize> = cones.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();

    let mut pairs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (si, sigma) in cones.iter().enumerate() {
        for mask in 0u64..(1 << sigma.len()) {
            let tau: Vec<usize> = sigma.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &r)| r).collect();
            debug_assert!(cone_id.contains_key(tau.as_slice()), "fan is closed under faces");
            pairs.push((sigma.len() - tau.len(), si, tau));
        }
    }
    // Dimension first, then σ, then τ.
    pairs.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    let index: HashMap<(Vec<usize>, Vec<usize>), usize> =
        pairs.iter().enumerate().map(|(i, (_, si, tau))| ((tau.clone(), cones[*si].clone()), i)).collect();
    let max_weight: HashMap<usize, i64> = maximal_cones.iter().copied().collect();

    let cells = pairs
        .iter()
        .map(|(dim, si, tau)| {
            let sigma = &cones[*si];
            let free: Vec<usize> = sigma.iter().copied().filter(|r| !tau.contains(r)).collect();
            let mut faces = Vec::with_capacity(2 * free.len());
            for (k, &rho) in free.iter().enumerate() {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let to_zero: Vec<usize> = sigma.iter().copied().filter(|&r| r != rho).collect();
                faces.push((index[&(tau.clone(), to_zero)], -sign));
                let mut to_inf = tau.clone();
                to_inf.push(rho);
                to_inf.sort_unstable();
                faces.push((index[&(to_inf, sigma.clone())], sign));
            }
            let weight = if tau.is_empty() { max_weight.get(si).copied() } else { None };
            CompactCell { tau: tau.clone(), sigma: sigma.clone(), dim: *dim, faces, weight }
        })
        .collect();
    Ok(CompactifiedFan { ambient_dim: c.ambient_dim, rays: c.rays.clone(), cones, maximal_cones, cells })
}
