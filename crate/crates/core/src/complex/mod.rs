//! Weighted rational polyhedral complexes with simplicial cells.
//!
//! A cell is the Minkowski sum of the convex hull of affinely independent
//! vertices and the cone over rays, with the vertices and rays jointly
//! independent. Faces are exactly the cells on nonempty vertex subsets and
//! arbitrary ray subsets.

mod fans;
mod normals;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::lattice::gcd_of;
use crate::linalg::lp::{maximize, LpOutcome};
use crate::linalg::{QMatrix, Q};

pub use fans::{bergman_fan, canonical_compactification, CompactCell, CompactifiedFan};
pub use normals::{BalancingEntry, BalancingReport, NormalVector, QSmoothEntry, QSmoothReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
    pub weight: Option<i64>,
    pub dim: Option<usize>,
}

impl Cell {
    pub fn new(vertices: Vec<usize>, rays: Vec<usize>) -> Self {
        Self { vertices, rays, weight: None, dim: None }
    }

    pub fn weighted(vertices: Vec<usize>, rays: Vec<usize>, weight: i64) -> Self {
        Self { vertices, rays, weight: Some(weight), dim: None }
    }

    /// Dimension implied by the generators.
    pub fn generator_dim(&self) -> usize {
        (self.vertices.len() + self.rays.len()).saturating_sub(1)
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.vertices.clone(), self.rays.clone())
    }

    /// Generators of `other` are a subset of those of `self`.
    pub fn contains(&self, other: &Cell) -> bool {
        other.vertices.iter().all(|v| self.vertices.contains(v)) && other.rays.iter().all(|r| self.rays.contains(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<BigInt>>,
    pub cells: Vec<Cell>,
}

impl WeightedComplex {
    pub fn new(ambient_dim: usize, vertices: Vec<Vec<Q>>, rays: Vec<Vec<BigInt>>, cells: Vec<Cell>) -> Self {
        let mut c = Self { ambient_dim, vertices, rays, cells };
        for cell in &mut c.cells {
            cell.vertices.sort_unstable();
            cell.rays.sort_unstable();
        }
        c
    }

    /// The tropical line in ℝ²: apex at the origin, rays `e₁`, `e₂`, `−e₁−e₂`.
    pub fn tropical_line(weights: [i64; 3]) -> Self {
        let rays = [[1, 0], [0, 1], [-1, -1]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut cells = vec![Cell::new(vec![0], vec![])];
        cells.extend((0..3).map(|i| Cell::weighted(vec![0], vec![i], weights[i])));
        Self::new(2, vec![vec![Q::zero(), Q::zero()]], rays, cells)
    }

    pub fn cell_index(&self, vertices: &[usize], rays: &[usize]) -> Option<usize> {
        self.cells.iter().position(|c| c.vertices == vertices && c.rays == rays)
    }

    /// Adds every missing face, keeping the listed cells first in their order.
    pub fn with_face_closure(&self) -> Self {
        let mut out = self.clone();
        let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = out.cells.iter().map(Cell::key).collect();
        let mut i = 0;
        while i < out.cells.len() {
            let cell = out.cells[i].clone();
            for (v, r) in facet_keys(&cell) {
                if seen.insert((v.clone(), r.clone())) {
                    out.cells.push(Cell::new(v, r));
                }
            }
            i += 1;
        }
        out
    }

    /// Rational generator vectors of the tangent space of a cell.
    pub fn tangent_generators(&self, cell: &Cell) -> Vec<Vec<Q>> {
        let mut gens = Vec::new();
        if let Some((&v0, rest)) = cell.vertices.split_first() {
            for &v in rest {
                gens.push(crate::linalg::vec_sub(&self.vertices[v], &self.vertices[v0]));
            }
        }
        for &r in &cell.rays {
            gens.push(self.rays[r].iter().map(|x| Q::from_integer(x.clone())).collect());
        }
        gens
    }

    pub fn validate(&self) -> Result<ValidatedComplex> {
        let n = self.ambient_dim;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != n {
                return Err(Error::ShapeMismatch(format!("vertex {i} has {} coordinates, expected {n}", v.len())));
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != n {
                return Err(Error::ShapeMismatch(format!("ray {i} has {} coordinates, expected {n}", r.len())));
            }
            if !gcd_of(r).is_one() {
                return Err(Error::NonPrimitiveRay { ray: i });
            }
        }
        let mut index: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            let sorted_unique = |ids: &[usize]| ids.windows(2).all(|w| w[0] < w[1]);
            if !sorted_unique(&c.vertices) || !sorted_unique(&c.rays) {
                return Err(Error::InvalidParameters(format!("cell {i} has unsorted or repeated generator ids")));
            }
            if let Some(&v) = c.vertices.iter().find(|&&v| v >= self.vertices.len()) {
                return Err(Error::IndexOutOfRange(format!("cell {i} uses vertex {v}")));
            }
            if let Some(&r) = c.rays.iter().find(|&&r| r >= self.rays.len()) {
                return Err(Error::IndexOutOfRange(format!("cell {i} uses ray {r}")));
            }
            if c.vertices.is_empty() {
                return Err(Error::InvalidParameters(format!("cell {i} has no vertices")));
            }
            if index.insert(c.key(), i).is_some() {
                return Err(Error::DuplicateCell { cell: i });
            }
            let expected = c.generator_dim();
            if let Some(d) = c.dim {
                if d != expected {
                    return Err(Error::DimensionMismatch { cell: i, declared: d, actual: expected });
                }
            }
            let rank = QMatrix::from_rows(self.tangent_generators(c), n).rank();
            if rank != expected {
                return Err(Error::DimensionMismatch { cell: i, declared: expected, actual: rank });
            }
        }
        for (i, c) in self.cells.iter().enumerate() {
            for (v, r) in facet_keys(c) {
                if !index.contains_key(&(v.clone(), r.clone())) {
                    return Err(Error::MissingFace { cell: i, vertices: v, rays: r });
                }
            }
        }
        let maximal: Vec<usize> = (0..self.cells.len())
            .filter(|&i| {
                let c = &self.cells[i];
                !self.cells.iter().enumerate().any(|(j, d)| j != i && d.contains(c))
            })
            .collect();
        for &i in &maximal {
            if self.cells[i].weight.unwrap_or(0) == 0 {
                return Err(Error::ZeroWeight { cell: i });
            }
        }
        let pairs: Vec<(usize, usize)> =
            maximal.iter().enumerate().flat_map(|(k, &a)| maximal[k + 1..].iter().map(move |&b| (a, b))).collect();
        let bad = pairs.par_iter().find_first(|&&(a, b)| !self.intersect_properly(a, b));
        if let Some(&(a, b)) = bad {
            return Err(Error::ImproperIntersection { a, b });
        }

        let dims: BTreeSet<usize> = maximal.iter().map(|&i| self.cells[i].generator_dim()).collect();
        let pure_dim = (dims.len() == 1).then(|| *dims.first().unwrap());
        let mut warnings = Vec::new();
        if pure_dim.is_none() {
            warnings.push(Error::NotPure.to_string());
        }
        Ok(ValidatedComplex { complex: self.clone(), index, maximal, pure_dim, warnings })
    }

    /// The intersection of two cells is their common face (empty if they share no vertex).
    fn intersect_properly(&self, a: usize, b: usize) -> bool {
        let (p, q) = (&self.cells[a], &self.cells[b]);
        let n = self.ambient_dim;
        let (nv1, nr1, nv2, nr2) = (p.vertices.len(), p.rays.len(), q.vertices.len(), q.rays.len());
        let vars = nv1 + nr1 + nv2 + nr2;
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); vars]; n + 2];
        let mut col = 0;
        let ray_q = |r: usize| -> Vec<Q> { self.rays[r].iter().map(|x| Q::from_integer(x.clone())).collect() };
        let put = |rows: &mut Vec<Vec<Q>>, v: Vec<Q>, sign: i64, convex_row: Option<usize>, col: usize| {
            for i in 0..n {
                rows[i][col] = &v[i] * Q::from_integer(sign.into());
            }
            if let Some(k) = convex_row {
                rows[k][col] = Q::one();
            }
        };
        let mut objective = vec![Q::zero(); vars];
        for &v in &p.vertices {
            put(&mut rows, self.vertices[v].clone(), 1, Some(n), col);
            if !q.vertices.contains(&v) {
                objective[col] = Q::one();
            }
            col += 1;
        }
        for &r in &p.rays {
            put(&mut rows, ray_q(r), 1, None, col);
            if !q.rays.contains(&r) {
                objective[col] = Q::one();
            }
            col += 1;
        }
        for &v in &q.vertices {
            put(&mut rows, self.vertices[v].clone(), -1, Some(n + 1), col);
            col += 1;
        }
        for &r in &q.rays {
            put(&mut rows, ray_q(r), -1, None, col);
            col += 1;
        }
        let a_mat = QMatrix::from_rows(rows, vars);
        let mut rhs = vec![Q::zero(); n + 2];
        rhs[n] = Q::one();
        rhs[n + 1] = Q::one();
        match maximize(&a_mat, &rhs, &objective) {
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal(v) => v.is_zero(),
        }
    }
}

/// Generator sets of the facets of a cell (faces of one dimension less).
fn facet_keys(cell: &Cell) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    if cell.vertices.len() > 1 {
        for i in 0..cell.vertices.len() {
            let mut v = cell.vertices.clone();
            v.remove(i);
            out.push((v, cell.rays.clone()));
        }
    }
    for i in 0..cell.rays.len() {
        let mut r = cell.rays.clone();
        r.remove(i);
        out.push((cell.vertices.clone(), r));
    }
    out
}

/// A complex that passed validation, with its face structure precomputed.
#[derive(Clone, Debug)]
pub struct ValidatedComplex {
    complex: WeightedComplex,
    index: HashMap<(Vec<usize>, Vec<usize>), usize>,
    maximal: Vec<usize>,
    pure_dim: Option<usize>,
    pub warnings: Vec<String>,
}

impl ValidatedComplex {
    pub fn complex(&self) -> &WeightedComplex {
        &self.complex
    }

    pub fn cell(&self, id: usize) -> Result<&Cell> {
        self.complex.cells.get(id).ok_or(Error::CellNotFound(id))
    }

    pub fn maximal_cells(&self) -> &[usize] {
        &self.maximal
    }

    pub fn is_maximal(&self, id: usize) -> bool {
        self.maximal.binary_search(&id).is_ok()
    }

    /// Common dimension of all maximal cells, if the complex is pure.
    pub fn pure_dim(&self) -> Option<usize> {
        self.pure_dim
    }

    pub fn dim(&self) -> usize {
        self.maximal.iter().map(|&i| self.complex.cells[i].generator_dim()).max().unwrap_or(0)
    }

    pub fn weight(&self, id: usize) -> i64 {
        self.complex.cells[id].weight.unwrap_or(0)
    }

    /// Same geometry with new weights on the maximal cells, given in
    /// `maximal_cells()` order. Only the weights are re-checked.
    pub fn reweighted(&self, weights: &[i64]) -> Result<Self> {
        if weights.len() != self.maximal.len() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} maximal cells", weights.len(), self.maximal.len())));
        }
        let mut out = self.clone();
        for (&id, &w) in self.maximal.iter().zip(weights) {
            if w == 0 {
                return Err(Error::ZeroWeight { cell: id });
            }
            out.complex.cells[id].weight = Some(w);
        }
        Ok(out)
    }

    /// Facets of a cell as cell ids.
    pub fn facets(&self, id: usize) -> Vec<usize> {
        facet_keys(&self.complex.cells[id]).into_iter().map(|k| self.index[&k]).collect()
    }

    /// Cells having `id` as a facet.
    pub fn cofacets(&self, id: usize) -> Vec<usize> {
        let c = &self.complex.cells[id];
        let d = c.generator_dim();
        (0..self.complex.cells.len())
            .filter(|&j| {
                let e = &self.complex.cells[j];
                e.generator_dim() == d + 1 && e.contains(c)
            })
            .collect()
    }

    /// Cells containing `id` (including itself).
    pub fn cells_containing(&self, id: usize) -> Vec<usize> {
        let c = &self.complex.cells[id];
        (0..self.complex.cells.len()).filter(|&j| self.complex.cells[j].contains(c)).collect()
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.complex.cells.len()).filter(|&j| self.complex.cells[j].generator_dim() == d).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.complex.cells.iter().all(|c| c.rays.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn tropical_line_is_valid() {
        let v = WeightedComplex::tropical_line([1, 1, 1]).validate().unwrap();
        assert_eq!(v.pure_dim(), Some(1));
        assert_eq!(v.maximal_cells(), &[1, 2, 3]);
        assert!(v.warnings.is_empty());
        assert_eq!(v.cofacets(0), vec![1, 2, 3]);
        assert_eq!(v.facets(2), vec![0]);
    }

    #[test]
    fn non_primitive_ray() {
        let mut c = WeightedComplex::tropical_line([1, 1, 1]);
        c.rays.push(bi(&[2, 2]));
        assert_eq!(c.validate().unwrap_err(), Error::NonPrimitiveRay { ray: 3 });
    }

    #[test]
    fn missing_face_and_closure() {
        let c = WeightedComplex::new(2, vec![vec![q(0), q(0)]], vec![bi(&[1, 0])], vec![Cell::weighted(vec![0], vec![0], 1)]);
        assert!(matches!(c.validate(), Err(Error::MissingFace { cell: 0, .. })));
        let closed = c.with_face_closure();
        assert_eq!(closed.cells.len(), 2);
        assert!(closed.validate().is_ok());
    }

    #[test]
    fn zero_weight_dimension_and_duplicates() {
        let c = WeightedComplex::tropical_line([1, 0, 1]);
        assert_eq!(c.validate().unwrap_err(), Error::ZeroWeight { cell: 2 });
        let mut c = WeightedComplex::tropical_line([1, 1, 1]);
        c.cells[1].dim = Some(2);
        assert!(matches!(c.validate(), Err(Error::DimensionMismatch { cell: 1, declared: 2, actual: 1 })));
        let mut c = WeightedComplex::tropical_line([1, 1, 1]);
        c.cells.push(c.cells[1].clone());
        assert_eq!(c.validate().unwrap_err(), Error::DuplicateCell { cell: 4 });
        // Dependent generators: rays (1,0) and (-1,0) spanning a "2-cell".
        let c = WeightedComplex::new(
            2,
            vec![vec![q(0), q(0)]],
            vec![bi(&[1, 0]), bi(&[-1, 0])],
            vec![Cell::new(vec![0], vec![]), Cell::new(vec![0], vec![0]), Cell::new(vec![0], vec![1]), Cell::weighted(vec![0], vec![0, 1], 1)],
        );
        assert!(matches!(c.validate(), Err(Error::DimensionMismatch { cell: 3, .. })));
    }

    #[test]
    fn improper_intersection_detected() {
        // Two segments crossing at (1,1) without a shared vertex.
        let verts = vec![vec![q(0), q(0)], vec![q(2), q(2)], vec![q(0), q(2)], vec![q(2), q(0)]];
        let cells = vec![Cell::weighted(vec![0, 1], vec![], 1), Cell::weighted(vec![2, 3], vec![], 1)];
        let c = WeightedComplex::new(2, verts, vec![], cells).with_face_closure();
        assert_eq!(c.validate().unwrap_err(), Error::ImproperIntersection { a: 0, b: 1 });
        // Overlapping rays from two different apexes.
        let verts = vec![vec![q(0), q(0)], vec![q(1), q(0)]];
        let cells = vec![Cell::weighted(vec![0], vec![0], 1), Cell::weighted(vec![1], vec![0], 1)];
        let c = WeightedComplex::new(2, verts, vec![bi(&[1, 0])], cells).with_face_closure();
        assert!(matches!(c.validate(), Err(Error::ImproperIntersection { .. })));
    }

    #[test]
    fn non_pure_warns() {
        let verts = vec![vec![q(0), q(0)], vec![q(1), q(0)], vec![q(5), q(5)]];
        let cells = vec![Cell::weighted(vec![0, 1], vec![], 1), Cell::weighted(vec![2], vec![], 1)];
        let v = WeightedComplex::new(2, verts, vec![], cells).with_face_closure().validate().unwrap();
        assert_eq!(v.pure_dim(), None);
        assert_eq!(v.warnings.len(), 1);
    }
}
