//! Chow rings of loopless matroids over ℚ and the Kähler package checks.
//!
//! `A^*(M)` is generated by one variable `x_F` per proper nonempty flat `F`,
//! modulo products of incomparable flats and the linear forms
//! `Σ_{F ∋ i} x_F − Σ_{F ∋ j} x_F`. Each graded piece is built as an explicit
//! quotient of the span of chain-supported monomials by the relation rows,
//! reduced exactly over ℚ. Pivot columns of the reduced relation matrix are
//! eliminated; the remaining monomials form the basis of `A^p`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inertia, q, InertiaCertificate, QMatrix, Signature, Q};
use crate::matroid::{elements_of, ElementSet, Matroid};

/// A monomial as a sorted multiset of generator indices.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug)]
struct GradedPiece {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Indices into `monomials` of the basis monomials.
    basis: Vec<usize>,
    /// `dim x |monomials|`: normal form of each chain monomial.
    reduction: QMatrix,
}

impl GradedPiece {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Element of a single graded piece `A^p ⊗ ℚ`, in the basis of that piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowElement {
    pub degree: usize,
    pub coords: Vec<Q>,
}

impl ChowElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self { degree: self.degree, coords: self.coords.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        Self { degree: self.degree, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct GradedChowRing {
    matroid: Matroid,
    r: usize,
    generators: Vec<ElementSet>,
    comparable: Vec<Vec<bool>>,
    pieces: Vec<GradedPiece>,
    /// Degree of each basis element of `A^r`.
    degree_functional: Vec<Q>,
}

impl GradedChowRing {
    pub fn build(m: &Matroid) -> Result<Self> {
        if m.rank() == 0 {
            return Err(Error::RankZero);
        }
        if m.has_loops() {
            return Err(Error::LooplessRequired);
        }
        let r = m.rank() - 1;
        let generators = m.flat_lattice().proper_flats();
        let g = generators.len();
        let comparable: Vec<Vec<bool>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        let (a, b) = (generators[i], generators[j]);
                        a & b == a || a & b == b
                    })
                    .collect()
            })
            .collect();

        let mut ring = Self {
            matroid: m.clone(),
            r,
            generators,
            comparable,
            pieces: Vec::with_capacity(r + 1),
            degree_functional: Vec::new(),
        };
        let mut prev_monomials: Vec<Monomial> = vec![Vec::new()];
        for p in 0..=r {
            let monomials = if p == 0 { vec![Vec::new()] } else { ring.extend_chains(&prev_monomials) };
            let piece = ring.build_piece(p, monomials.clone(), &prev_monomials);
            ring.pieces.push(piece);
            prev_monomials = monomials;
        }
        ring.degree_functional = ring.solve_degree_functional()?;
        Ok(ring)
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// Top degree `r = rank(M) - 1`.
    pub fn top_degree(&self) -> usize {
        self.r
    }

    /// Proper nonempty flats, indexed by generator id.
    pub fn generators(&self) -> &[ElementSet] {
        &self.generators
    }

    pub fn generator_index(&self, flat: &[usize]) -> Option<usize> {
        let mask = crate::matroid::mask_of(flat);
        self.generators.iter().position(|&f| f == mask)
    }

    pub fn dim(&self, p: usize) -> usize {
        self.pieces.get(p).map_or(0, GradedPiece::dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.r).map(|p| self.dim(p)).collect()
    }

    /// Basis monomials of `A^p`.
    pub fn basis_monomials(&self, p: usize) -> Vec<Monomial> {
        self.pieces.get(p).map_or_else(Vec::new, |pc| pc.basis.iter().map(|&i| pc.monomials[i].clone()).collect())
    }

    pub fn zero(&self, p: usize) -> ChowElement {
        ChowElement { degree: p, coords: vec![Q::zero(); self.dim(p)] }
    }

    pub fn one(&self) -> ChowElement {
        ChowElement { degree: 0, coords: vec![Q::one()] }
    }

    pub fn basis_element(&self, p: usize, i: usize) -> ChowElement {
        let mut e = self.zero(p);
        e.coords[i] = Q::one();
        e
    }

    /// Normal form of the monomial `∏ x_{F_i}` (generator ids, any order).
    /// Monomials of degree above `r` are zero.
    pub fn monomial(&self, gens: &[usize]) -> ChowElement {
        let mut mono = gens.to_vec();
        mono.sort_unstable();
        let p = mono.len();
        let mut out = self.zero(p);
        if p > self.r || !self.is_chain(&mono) {
            return out;
        }
        let piece = &self.pieces[p];
        let col = piece.index[&mono];
        for (i, c) in out.coords.iter_mut().enumerate() {
            *c = piece.reduction[(i, col)].clone();
        }
        out
    }

    pub fn generator(&self, id: usize) -> ChowElement {
        self.monomial(&[id])
    }

    /// Degree-one element `Σ c_F x_F`.
    pub fn linear_combination(&self, coeffs: &[Q]) -> ChowElement {
        assert_eq!(coeffs.len(), self.generators.len());
        let mut out = self.zero(1);
        for (id, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.generator(id).scale(c));
            }
        }
        out
    }

    pub fn multiply(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        if a.degree + b.degree > self.r {
            return Err(Error::DegreeOverflow { left: a.degree, right: b.degree, top: self.r });
        }
        Ok(self.multiply_truncated(a, b))
    }

    /// Product with the convention that anything above the top degree is zero.
    pub fn multiply_truncated(&self, a: &ChowElement, b: &ChowElement) -> ChowElement {
        let deg = a.degree + b.degree;
        let mut out = self.zero(deg);
        if deg > self.r {
            return out;
        }
        let ma = self.basis_monomials(a.degree);
        let mb = self.basis_monomials(b.degree);
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut mono = ma[i].clone();
                mono.extend_from_slice(&mb[j]);
                let prod = self.monomial(&mono);
                let s = x * y;
                for (o, c) in out.coords.iter_mut().zip(&prod.coords) {
                    if !c.is_zero() {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    pub fn degree(&self, a: &ChowElement) -> Result<Q> {
        if a.degree != self.r {
            return Err(Error::WrongDegree { expected: self.r, found: a.degree });
        }
        self.check_element(a)?;
        Ok(a.coords.iter().zip(&self.degree_functional).fold(Q::zero(), |acc, (x, d)| acc + x * d))
    }

    /// All complete flags `F_1 ⊊ ... ⊊ F_r` of proper nonempty flats, as generator ids.
    pub fn complete_flags(&self) -> Vec<Vec<usize>> {
        let rank_of = |id: usize| self.matroid.rank_of(self.generators[id]);
        let mut flags: Vec<Vec<usize>> = vec![Vec::new()];
        for level in 1..=self.r {
            let mut next = Vec::new();
            for f in &flags {
                for id in 0..self.generators.len() {
                    if rank_of(id) != level {
                        continue;
                    }
                    let extends = f.last().is_none_or(|&last| {
                        self.generators[last] & self.generators[id] == self.generators[last]
                    });
                    if extends {
                        let mut g = f.clone();
                        g.push(id);
                        next.push(g);
                    }
                }
            }
            flags = next;
        }
        flags
    }

    /// Flags whose monomial does not have degree exactly one (should be empty).
    pub fn inconsistent_flags(&self) -> Vec<Vec<usize>> {
        self.complete_flags()
            .into_iter()
            .filter(|f| self.degree(&self.monomial(f)).map_or(true, |d| !d.is_one()))
            .collect()
    }

    /// The ample class `Σ_F |F|(n − |F|) x_F` from a strictly submodular weighting.
    pub fn ample_default(&self) -> Result<ChowElement> {
        if self.r == 0 {
            return Err(Error::BadDegree("an ample class needs top degree r >= 1".into()));
        }
        let n = self.matroid.n() as i64;
        let coeffs: Vec<Q> = self
            .generators
            .iter()
            .map(|&f| {
                let s = f.count_ones() as i64;
                q(s * (n - s))
            })
            .collect();
        Ok(self.linear_combination(&coeffs))
    }

    /// Matrix of `a ↦ l^k · a` from `A^p` to `A^{p+k}` (zero target above `r`).
    pub fn lefschetz_matrix(&self, l: &ChowElement, k: usize, p: usize) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim(p))
            .map(|i| {
                let mut v = self.basis_element(p, i);
                for _ in 0..k {
                    v = self.multiply_truncated(l, &v);
                }
                v.coords
            })
            .collect();
        QMatrix::from_columns(&cols, self.dim(p + k))
    }

    pub fn check_hard_lefschetz(&self, l: &ChowElement, p: usize) -> Result<HardLefschetzReport> {
        self.check_kahler_args(l, p)?;
        let m = self.lefschetz_matrix(l, self.r - 2 * p, p);
        let rank = m.rank();
        Ok(HardLefschetzReport {
            p,
            source_dim: m.cols(),
            target_dim: m.rows(),
            rank,
            is_iso: m.is_square() && rank == m.cols(),
        })
    }

    /// Gram matrix of `(a, b) ↦ (−1)^p deg(l^{r−2p} · a · b)` on `A^p`.
    pub fn hodge_riemann_form(&self, l: &ChowElement, p: usize) -> Result<QMatrix> {
        self.check_kahler_args(l, p)?;
        let lef = self.lefschetz_matrix(l, self.r - 2 * p, p);
        let pairing = self.pairing_matrix(self.r - p, p);
        let sign = if p % 2 == 0 { q(1) } else { q(-1) };
        Ok((&lef.transpose() * &pairing).scale(&sign))
    }

    /// `deg(f_a · e_b)` for basis `f` of `A^{p1}` and `e` of `A^{p2}`, `p1 + p2 = r`.
    pub fn pairing_matrix(&self, p1: usize, p2: usize) -> QMatrix {
        assert_eq!(p1 + p2, self.r);
        let mut m = QMatrix::zeros(self.dim(p1), self.dim(p2));
        for a in 0..self.dim(p1) {
            for b in 0..self.dim(p2) {
                let prod = self.multiply_truncated(&self.basis_element(p1, a), &self.basis_element(p2, b));
                m[(a, b)] = self.degree(&prod).expect("product lands in top degree");
            }
        }
        m
    }

    /// Basis (columns, in `A^p` coordinates) of `ker(l^{r−2p+1}: A^p → A^{r−p+1})`.
    pub fn primitive_subspace(&self, l: &ChowElement, p: usize) -> Result<QMatrix> {
        self.check_kahler_args(l, p)?;
        Ok(self.lefschetz_matrix(l, self.r - 2 * p + 1, p).kernel())
    }

    pub fn check_hodge_riemann(&self, l: &ChowElement, p: usize) -> Result<HodgeRiemannReport> {
        let form = self.hodge_riemann_form(l, p)?;
        let prim = self.primitive_subspace(l, p)?;
        let restricted = &(&prim.transpose() * &form) * &prim;
        let InertiaCertificate { signature, pivots } = inertia(&restricted)?;
        let full = inertia(&form)?.signature;
        Ok(HodgeRiemannReport {
            p,
            holds: signature.is_positive_definite(),
            primitive_dim: prim.cols(),
            signature,
            full_signature: full,
            pivots,
        })
    }

    /// `A^{r+1}` must vanish: every chain monomial of degree `r + 1` reduces to zero.
    pub fn vanishes_above_top(&self) -> bool {
        let top = self.pieces[self.r].monomials.clone();
        let next = self.extend_chains(&top);
        let piece = self.build_piece(self.r + 1, next, &top);
        piece.dim() == 0
    }

    fn check_kahler_args(&self, l: &ChowElement, p: usize) -> Result<()> {
        if l.degree != 1 {
            return Err(Error::BadDegree(format!("Lefschetz class must have degree 1, got {}", l.degree)));
        }
        self.check_element(l)?;
        if 2 * p > self.r {
            return Err(Error::BadDegree(format!("need p <= r/2, got p={p}, r={}", self.r)));
        }
        Ok(())
    }

    fn check_element(&self, a: &ChowElement) -> Result<()> {
        if a.coords.len() != self.dim(a.degree) {
            return Err(Error::ShapeMismatch(format!(
                "element of degree {} has {} coordinates, A^{} has dimension {}",
                a.degree,
                a.coords.len(),
                a.degree,
                self.dim(a.degree)
            )));
        }
        Ok(())
    }

    fn is_chain(&self, mono: &[usize]) -> bool {
        mono.iter().enumerate().all(|(i, &a)| mono[i + 1..].iter().all(|&b| self.comparable[a][b]))
    }

    /// Chain monomials of one degree higher (sorted multisets).
    fn extend_chains(&self, prev: &[Monomial]) -> Vec<Monomial> {
        let mut out = Vec::new();
        for m in prev {
            let start = m.last().copied().unwrap_or(0);
            for id in start..self.generators.len() {
                if m.iter().all(|&a| self.comparable[a][id]) {
                    let mut next = m.clone();
                    next.push(id);
                    out.push(next);
                }
            }
        }
        out
    }

    fn build_piece(&self, p: usize, monomials: Vec<Monomial>, lower: &[Monomial]) -> GradedPiece {
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let width = monomials.len();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        if p > 0 {
            let n = self.matroid.n();
            for j in 1..n {
                // Σ_{F ∋ 0} x_F − Σ_{F ∋ j} x_F; the (i, j) relations span the same space.
                let linear: Vec<(usize, i64)> = self
                    .generators
                    .iter()
                    .enumerate()
                    .filter_map(|(id, &f)| {
                        let c = i64::from(f & 1 != 0) - i64::from(f & (1 << j) != 0);
                        (c != 0).then_some((id, c))
                    })
                    .collect();
                for m in lower {
                    let mut row = vec![Q::zero(); width];
                    let mut nonzero = false;
                    for &(id, c) in &linear {
                        let mut mono = m.clone();
                        mono.push(id);
                        mono.sort_unstable();
                        if let Some(&col) = index.get(&mono) {
                            row[col] += q(c);
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        let rel = QMatrix::from_rows(rows, width);
        let rref = rel.rref();
        let mut is_pivot = vec![false; width];
        for &c in &rref.pivots {
            is_pivot[c] = true;
        }
        let basis: Vec<usize> = (0..width).filter(|&c| !is_pivot[c]).collect();
        let mut position = vec![usize::MAX; width];
        for (b, &c) in basis.iter().enumerate() {
            position[c] = b;
        }
        let mut reduction = QMatrix::zeros(basis.len(), width);
        for (b, &c) in basis.iter().enumerate() {
            reduction[(b, c)] = Q::one();
        }
        for (row, &pc) in rref.pivots.iter().enumerate() {
            for &c in &basis {
                let v = &rref.matrix[(row, c)];
                if !v.is_zero() {
                    reduction[(position[c], pc)] = -v.clone();
                }
            }
        }
        GradedPiece { monomials, index, basis, reduction }
    }

    fn solve_degree_functional(&self) -> Result<Vec<Q>> {
        if self.dim(self.r) != 1 {
            return Err(Error::ShapeMismatch(format!("top degree piece has dimension {}", self.dim(self.r))));
        }
        let flag = self.complete_flags().into_iter().next().ok_or(Error::RankZero)?;
        let mono = self.monomial(&flag);
        let c = &mono.coords[0];
        if c.is_zero() {
            return Err(Error::ShapeMismatch("flag monomial vanishes in top degree".into()));
        }
        Ok(vec![c.recip()])
    }

    /// Generator ids rendered as flats, e.g. `{0,1}`.
    pub fn describe_generator(&self, id: usize) -> String {
        let e: Vec<String> = elements_of(self.generators[id]).iter().map(ToString::to_string).collect();
        format!("{{{}}}", e.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardLefschetzReport {
    pub p: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub is_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeRiemannReport {
    pub p: usize,
    pub holds: bool,
    pub primitive_dim: usize,
    /// Inertia of the form restricted to the primitive subspace.
    pub signature: Signature,
    /// Inertia of the form on all of `A^p`.
    pub full_signature: Signature,
    /// LDL pivots certifying `signature`.
    #[serde(with = "crate::formats::rational_vec")]
    pub pivots: Vec<Q>,
}
