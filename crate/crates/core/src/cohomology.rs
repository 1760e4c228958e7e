//! Cellular tropical `(p,q)`-cohomology over ℚ.
//!
//! A [`TangentCellComplex`] is a finite regular cell complex whose cells carry
//! a stratum (a quotient `ℚᴺ → ℚᵏ`, given by a full-row-rank matrix) and the
//! tangent generators of every maximal cell containing them. The coefficient
//! space `F_p(c)` is the span of `Λᵖ` of those tangent spaces, projected to
//! the stratum of `c`. For a face `c ⊂ c'` the map `F_p(c') → F_p(c)` is
//! induced by the quotient between the two strata. Cochains are the duals.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::complex::{CompactifiedFan, ValidatedComplex};
use crate::error::{Error, Result};
use crate::linalg::exterior::exterior_power;
use crate::linalg::{QMatrix, Q};

/// Tangent generators (columns, ambient coordinates) of a maximal cell, with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalTangent {
    pub generators: QMatrix,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCell {
    pub dim: usize,
    pub stratum: usize,
    /// Facets with incidence signs.
    pub faces: Vec<(usize, i64)>,
    /// Maximal cells containing this cell.
    pub maximal: Vec<MaximalTangent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCellComplex {
    pub ambient_dim: usize,
    /// Stratum projections `ℚᴺ → ℚᵏ`.
    pub strata: Vec<QMatrix>,
    pub cells: Vec<TangentCell>,
}

impl TangentCellComplex {
    pub fn dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim == d).collect()
    }

    /// Bounded simplicial complex, one stratum. The facet dropping the `i`-th
    /// vertex (in increasing id order) has sign `(−1)^i`.
    pub fn from_bounded(c: &ValidatedComplex) -> Result<Self> {
        if !c.is_bounded() {
            return Err(Error::UnboundedInput);
        }
        let wc = c.complex();
        let n = wc.ambient_dim;
        let maximal: Vec<(usize, MaximalTangent)> = c
            .maximal_cells()
            .iter()
            .map(|&m| {
                let gens = wc.tangent_generators(&wc.cells[m]);
                (m, MaximalTangent { generators: QMatrix::from_columns(&gens, n), weight: c.weight(m) })
            })
            .collect();
        let cells = wc
            .cells
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                let faces = if cell.vertices.len() > 1 {
                    (0..cell.vertices.len())
                        .map(|k| {
                            let mut v = cell.vertices.clone();
                            v.remove(k);
                            let id = wc.cell_index(&v, &[]).expect("validated complex is closed under faces");
                            (id, if k % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                let maximal = maximal
                    .iter()
                    .filter(|(m, _)| wc.cells[*m].contains(&wc.cells[i]))
                    .map(|(_, t)| t.clone())
                    .collect();
                TangentCell { dim: cell.generator_dim(), stratum: 0, faces, maximal }
            })
            .collect();
        Ok(Self { ambient_dim: n, strata: vec![QMatrix::identity(n)], cells })
    }

    /// Cells `(τ, σ)` of a compactified fan live in the stratum `ℚᴺ / span τ`.
    pub fn from_compactified(cf: &CompactifiedFan) -> Self {
        let n = cf.ambient_dim;
        let ray = |r: usize| -> Vec<Q> { cf.rays[r].iter().map(|x| Q::from_integer(x.clone())).collect() };
        let mut stratum_of_cone: HashMap<&[usize], usize> = HashMap::new();
        let mut strata = Vec::new();
        for tau in &cf.cones {
            if stratum_of_cone.contains_key(tau.as_slice()) {
                continue;
            }
            let proj = if tau.is_empty() {
                QMatrix::identity(n)
            } else {
                let span = QMatrix::from_rows(tau.iter().map(|&r| ray(r)).collect(), n);
                span.kernel().transpose()
            };
            stratum_of_cone.insert(tau.as_slice(), strata.len());
            strata.push(proj);
        }
        let maximal: Vec<(&[usize], MaximalTangent)> = cf
            .maximal_cones
            .iter()
            .map(|&(cone, weight)| {
                let sigma = &cf.cones[cone];
                let cols: Vec<Vec<Q>> = sigma.iter().map(|&r| ray(r)).collect();
                (sigma.as_slice(), MaximalTangent { generators: QMatrix::from_columns(&cols, n), weight })
            })
            .collect();
        let cells = cf
            .cells
            .iter()
            .map(|c| TangentCell {
                dim: c.dim,
                stratum: stratum_of_cone[c.tau.as_slice()],
                faces: c.faces.clone(),
                maximal: maximal
                    .iter()
                    .filter(|(sigma, _)| c.sigma.iter().all(|r| sigma.contains(r)))
                    .map(|(_, t)| t.clone())
                    .collect(),
            })
            .collect();
        Self { ambient_dim: n, strata, cells }
    }

    /// Splits every edge at an interior point. Only for complexes of dimension at most one.
    pub fn subdivide_edges(&self) -> Result<Self> {
        if self.dim() > 1 {
            return Err(Error::InvalidParameters("edge subdivision needs a complex of dimension <= 1".into()));
        }
        let mut out = self.clone();
        for e in self.cells_of_dim(1) {
            let cell = self.cells[e].clone();
            let mid = out.cells.len();
            out.cells.push(TangentCell { dim: 0, stratum: cell.stratum, faces: Vec::new(), maximal: cell.maximal.clone() });
            let (first, second) = (cell.faces[0], cell.faces[1]);
            // e = second − first; e₁ runs first → mid, e₂ runs mid → second.
            out.cells[e].faces = vec![first, (mid, -first.1)];
            out.cells.push(TangentCell { dim: 1, stratum: cell.stratum, faces: vec![(mid, first.1), second], maximal: cell.maximal });
        }
        Ok(out)
    }

    /// `M` with `A_to = M · A_from`, for strata where `ker A_from ⊆ ker A_to`.
    fn stratum_map(&self, from: usize, to: usize) -> QMatrix {
        let (a_from, a_to) = (&self.strata[from], &self.strata[to]);
        let gram = a_from * &a_from.transpose();
        let inv = gram.inverse().expect("stratum projection has full row rank");
        &(a_to * &a_from.transpose()) * &inv
    }
}

/// Bases of `F_p(c)` and the facet maps `F_p(c') → F_p(c)`.
#[derive(Clone, Debug)]
pub struct MultiTangentSystem {
    pub p: usize,
    /// Columns spanning `F_p(c)` inside `Λᵖ` of the stratum of `c`.
    pub bases: Vec<QMatrix>,
    /// For each cell, `(facet, matrix of F_p(cell) → F_p(facet))`.
    pub restrictions: Vec<Vec<(usize, QMatrix)>>,
    strata_powers: HashMap<(usize, usize), QMatrix>,
}

impl MultiTangentSystem {
    pub fn dim(&self, cell: usize) -> usize {
        self.bases[cell].cols()
    }

    /// Map `F_p(from) → F_p(to)` for any face `to` of `from` (not only facets).
    pub fn restriction(&self, tc: &TangentCellComplex, from: usize, to: usize) -> QMatrix {
        let (s_from, s_to) = (tc.cells[from].stratum, tc.cells[to].stratum);
        let lp = self
            .strata_powers
            .get(&(s_from, s_to))
            .cloned()
            .unwrap_or_else(|| exterior_power(&tc.stratum_map(s_from, s_to), self.p));
        let image = &lp * &self.bases[from];
        self.bases[to].solve_matrix(&image).expect("F_p of a cell maps into F_p of its faces")
    }
}

pub fn build_multitangent(tc: &TangentCellComplex, p: usize) -> MultiTangentSystem {
    let bases: Vec<QMatrix> = tc
        .cells
        .par_iter()
        .map(|cell| {
            let a = &tc.strata[cell.stratum];
            let k = a.rows();
            let mut span = QMatrix::zeros(crate::linalg::exterior::binomial(k, p), 0);
            for m in &cell.maximal {
                span = span.hstack(&exterior_power(&(a * &m.generators), p));
            }
            span.column_space()
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = tc
        .cells
        .iter()
        .flat_map(|c| c.faces.iter().map(move |&(f, _)| (c.stratum, tc.cells[f].stratum)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let strata_powers: HashMap<(usize, usize), QMatrix> =
        pairs.par_iter().map(|&(a, b)| ((a, b), exterior_power(&tc.stratum_map(a, b), p))).collect();
    let mut system = MultiTangentSystem { p, bases, restrictions: Vec::new(), strata_powers };
    system.restrictions = (0..tc.cells.len())
        .into_par_iter()
        .map(|c| tc.cells[c].faces.iter().map(|&(f, _)| (f, system.restriction(tc, c, f))).collect())
        .collect();
    system
}

/// Finite cochain complex `0 → C⁰ → C¹ → … → 0` over ℚ; `d[q]: C^q → C^{q+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplexQ {
    dims: Vec<usize>,
    d: Vec<QMatrix>,
}

impl CochainComplexQ {
    /// `d` has one matrix per consecutive pair of degrees, of shape `dims[q+1] × dims[q]`.
    pub fn new(dims: Vec<usize>, d: Vec<QMatrix>) -> Result<Self> {
        if d.len() != dims.len().saturating_sub(1) {
            return Err(Error::ShapeMismatch(format!("{} degrees need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), d.len())));
        }
        for (q, m) in d.iter().enumerate() {
            if m.shape() != (dims[q + 1], dims[q]) {
                return Err(Error::ShapeMismatch(format!("d_{q} has shape {:?}, expected {:?}", m.shape(), (dims[q + 1], dims[q]))));
            }
        }
        for q in 1..d.len() {
            if !(&d[q] * &d[q - 1]).is_zero() {
                return Err(Error::NotACochainComplex(q - 1));
            }
        }
        Ok(Self { dims, d })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `d_q: C^q → C^{q+1}`; zero maps at the ends.
    pub fn d(&self, q: usize) -> QMatrix {
        match self.d.get(q) {
            Some(m) => m.clone(),
            None => QMatrix::zeros(0, self.dims.get(q).copied().unwrap_or(0)),
        }
    }

    /// `d_{q−1}: C^{q−1} → C^q`; zero map for `q = 0`.
    pub fn d_into(&self, q: usize) -> QMatrix {
        if q == 0 {
            QMatrix::zeros(self.dims.first().copied().unwrap_or(0), 0)
        } else {
            self.d(q - 1)
        }
    }

    pub fn differentials(&self) -> &[QMatrix] {
        &self.d
    }

    /// `dim H^q = dim C^q − rank d_q − rank d_{q−1}`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.par_iter().map(QMatrix::rank).collect();
        (0..self.dims.len())
            .map(|q| {
                let out = ranks.get(q).copied().unwrap_or(0);
                let inc = if q == 0 { 0 } else { ranks[q - 1] };
                self.dims[q] - out - inc
            })
            .collect()
    }
}

/// Cochains of `F_p`, with the per-cell block layout of each degree.
#[derive(Clone, Debug)]
pub struct CellularCochains {
    pub p: usize,
    pub complex: CochainComplexQ,
    /// `blocks[q]` lists `(cell, offset, len)` in `C^q`.
    pub blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl CellularCochains {
    /// Per-coordinate weight `Σ |m_P|` over maximal cells containing the cell.
    pub fn weights(&self, tc: &TangentCellComplex) -> Vec<Vec<Q>> {
        self.blocks
            .iter()
            .map(|bl| {
                bl.iter()
                    .flat_map(|&(c, _, len)| {
                        let w: i64 = tc.cells[c].maximal.iter().map(|m| m.weight.abs()).sum();
                        std::iter::repeat_n(Q::from_integer(w.into()), len)
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn build_cochain_complex(tc: &TangentCellComplex, p: usize) -> Result<CellularCochains> {
    let mts = build_multitangent(tc, p);
    let top = tc.dim();
    let mut blocks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); top + 1];
    let mut position = vec![(0usize, 0usize); tc.cells.len()];
    for q in 0..=top {
        let mut off = 0;
        for c in tc.cells_of_dim(q) {
            let len = mts.dim(c);
            blocks[q].push((c, off, len));
            position[c] = (off, len);
            off += len;
        }
    }
    let dims: Vec<usize> = blocks.iter().map(|b| b.iter().map(|&(_, _, l)| l).sum()).collect();
    let d: Vec<QMatrix> = (0..top)
        .map(|q| {
            // Chain boundary ∂_{q+1}: C_{q+1} → C_q; the cochain differential is its transpose.
            let mut boundary = QMatrix::zeros(dims[q], dims[q + 1]);
            for &(c, col_off, _) in &blocks[q + 1] {
                for ((f, sign), (f2, x)) in tc.cells[c].faces.iter().zip(&mts.restrictions[c]) {
                    debug_assert_eq!(f, f2);
                    let (row_off, _) = position[*f];
                    let s = Q::from_integer((*sign).into());
                    for i in 0..x.rows() {
                        for j in 0..x.cols() {
                            let v = &x[(i, j)];
                            if !v.is_zero() {
                                boundary[(row_off + i, col_off + j)] += &s * v;
                            }
                        }
                    }
                }
            }
            boundary.transpose()
        })
        .collect();
    let complex = CochainComplexQ::new(dims, d)?;
    Ok(CellularCochains { p, complex, blocks })
}

/// `dim H^{p,q}` for `q = 0..=dim`.
pub fn cohomology_dims(tc: &TangentCellComplex, p: usize) -> Result<Vec<usize>> {
    Ok(build_cochain_complex(tc, p)?.complex.cohomology_dims())
}

/// Table `H^{p,q}` indexed `[p][q]`, for `p = 0..=max_p`.
pub fn cohomology_table(tc: &TangentCellComplex, max_p: usize) -> Result<Vec<Vec<usize>>> {
    (0..=max_p).map(|p| cohomology_dims(tc, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Cell, WeightedComplex};
    use crate::linalg::q;

    fn line() -> TangentCellComplex {
        let cf = WeightedComplex::tropical_line([1, 1, 1]).validate().unwrap().canonical_compactification().unwrap();
        TangentCellComplex::from_compactified(&cf)
    }

    fn interval() -> TangentCellComplex {
        let c = WeightedComplex::new(1, vec![vec![q(0)], vec![q(1)]], vec![], vec![Cell::weighted(vec![0, 1], vec![], 1)])
            .with_face_closure()
            .validate()
            .unwrap();
        TangentCellComplex::from_bounded(&c).unwrap()
    }

    #[test]
    fn point_and_interval() {
        let pt = WeightedComplex::new(0, vec![vec![]], vec![], vec![Cell::weighted(vec![0], vec![], 1)]).validate().unwrap();
        let tc = TangentCellComplex::from_bounded(&pt).unwrap();
        assert_eq!(cohomology_dims(&tc, 0).unwrap(), vec![1]);
        assert_eq!(cohomology_dims(&interval(), 0).unwrap(), vec![1, 0]);
        assert_eq!(cohomology_dims(&interval(), 1).unwrap(), vec![1, 0]);
    }

    #[test]
    fn unbounded_input_is_rejected() {
        let v = WeightedComplex::tropical_line([1, 1, 1]).validate().unwrap();
        assert_eq!(TangentCellComplex::from_bounded(&v).unwrap_err(), Error::UnboundedInput);
    }

    #[test]
    fn multitangent_of_the_line() {
        let tc = line();
        let f0 = build_multitangent(&tc, 0);
        assert!(f0.bases.iter().all(|b| b.cols() == 1));
        let f1 = build_multitangent(&tc, 1);
        assert_eq!(f1.dim(0), 2);
        // Points at infinity sit in one-dimensional strata where the edge tangent dies.
        assert_eq!((1..4).map(|c| f1.dim(c)).collect::<Vec<_>>(), vec![0, 0, 0]);
        for e in tc.cells_of_dim(1) {
            assert_eq!(f1.dim(e), 1);
        }
    }

    #[test]
    fn line_cohomology() {
        let tc = line();
        let c0 = build_cochain_complex(&tc, 0).unwrap();
        assert_eq!(c0.complex.dims(), &[4, 3]);
        assert_eq!(cohomology_table(&tc, 1).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        let sub = tc.subdivide_edges().unwrap();
        assert_eq!(sub.cells.len(), 13);
        assert_eq!(cohomology_table(&sub, 1).unwrap(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn bad_cochain_complexes() {
        let d0 = QMatrix::from_i64_rows(&[&[1]]);
        let d1 = QMatrix::from_i64_rows(&[&[1]]);
        assert_eq!(CochainComplexQ::new(vec![1, 1, 1], vec![d0.clone(), d1]).unwrap_err(), Error::NotACochainComplex(0));
        assert!(matches!(CochainComplexQ::new(vec![1, 2], vec![d0]), Err(Error::ShapeMismatch(_))));
    }
}
