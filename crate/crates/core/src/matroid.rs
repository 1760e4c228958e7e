//! Matroids on `{0, .., n-1}` stored by their bases, with flat lattices,
//! Möbius functions and characteristic polynomials.
//!
//! Subsets are bitmasks, which caps the ground set at 31 elements. The
//! exhaustive routines here are intended for ground sets of about a dozen
//! elements.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset of the ground set as a bitmask.
pub type ElementSet = u32;

const MAX_GROUND: usize = 31;

pub fn mask_of(elems: &[usize]) -> ElementSet {
    elems.iter().fold(0, |m, &e| m | (1 << e))
}

pub fn elements_of(mask: ElementSet) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

fn popcount(mask: ElementSet) -> usize {
    mask.count_ones() as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    bases: Vec<ElementSet>,
    rank: usize,
    label: Option<String>,
}

impl Matroid {
    /// Validates a bases family, including the exchange axiom.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::InvalidParameters(format!("ground set size {n} exceeds {MAX_GROUND}")));
        }
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e >= n) {
                return Err(Error::InvalidParameters(format!("element {e} outside ground set of size {n}")));
            }
            masks.push(mask_of(b));
        }
        Self::from_masks(n, masks)
    }

    fn from_masks(n: usize, mut masks: Vec<ElementSet>) -> Result<Self> {
        masks.sort_unstable();
        masks.dedup();
        let Some(&first) = masks.first() else {
            return Err(Error::EmptyBases);
        };
        let rank = popcount(first);
        if let Some(&b) = masks.iter().find(|&&b| popcount(b) != rank) {
            return Err(Error::UnequalBasisSize { expected: rank, found: popcount(b) });
        }
        let set: HashSet<ElementSet> = masks.iter().copied().collect();
        for &b1 in &masks {
            for &b2 in &masks {
                for x in elements_of(b1 & !b2) {
                    let removed = b1 & !(1 << x);
                    let ok = elements_of(b2 & !b1).into_iter().any(|y| set.contains(&(removed | (1 << y))));
                    if !ok {
                        return Err(Error::ExchangeAxiomViolated {
                            b1: elements_of(b1),
                            b2: elements_of(b2),
                            x,
                        });
                    }
                }
            }
        }
        Ok(Self { n, bases: masks, rank, label: None })
    }

    /// Uniform matroid `U_{r,n}`: every `r`-subset is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n || n > MAX_GROUND {
            return Err(Error::InvalidParameters(format!("need 0 <= r <= n <= {MAX_GROUND}, got r={r}, n={n}")));
        }
        let bases: Vec<ElementSet> = (0..(1u64 << n)).map(|m| m as ElementSet).filter(|&m| popcount(m) == r).collect();
        Ok(Self { n, bases, rank: r, label: Some(format!("U_{{{r},{n}}}")) })
    }

    /// Cycle matroid of a graph: ground set is the edge list, bases are spanning forests.
    pub fn graphic(edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidParameters("graph needs at least one edge".into()));
        }
        let n = edges.len();
        if n > MAX_GROUND {
            return Err(Error::InvalidParameters(format!("{n} edges exceeds {MAX_GROUND}")));
        }
        let verts = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) + 1;
        let acyclic = |mask: ElementSet| {
            let mut uf = UnionFind::new(verts);
            elements_of(mask).into_iter().all(|e| uf.union(edges[e].0, edges[e].1))
        };
        let mut uf = UnionFind::new(verts);
        let mut rank = 0;
        for &(a, b) in edges {
            if uf.union(a, b) {
                rank += 1;
            }
        }
        let bases: Vec<ElementSet> = (0..(1u64 << n))
            .map(|m| m as ElementSet)
            .filter(|&m| popcount(m) == rank && acyclic(m))
            .collect();
        let mut m = Self::from_masks(n, bases)?;
        m.label = Some(format!("graphic({n} edges)"));
        Ok(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Ground set size.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground(&self) -> ElementSet {
        if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 }
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| elements_of(b)).collect()
    }

    pub fn basis_masks(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn rank_of(&self, s: ElementSet) -> usize {
        self.bases.iter().map(|&b| popcount(b & s)).max().unwrap_or(0)
    }

    pub fn rank_of_elements(&self, s: &[usize]) -> usize {
        self.rank_of(mask_of(s))
    }

    pub fn closure(&self, s: ElementSet) -> ElementSet {
        let r = self.rank_of(s);
        (0..self.n).filter(|&e| self.rank_of(s | (1 << e)) == r).fold(s, |m, e| m | (1 << e))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.bases.iter().all(|&b| b & (1 << e) == 0)
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.n).filter(|&e| self.is_loop(e)).collect()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|e| self.is_loop(e))
    }

    pub fn flat_lattice(&self) -> FlatLattice {
        FlatLattice::new(self)
    }

    /// `χ_M(λ) = Σ_F μ(⊥, F) λ^{rk M - rk F}`. Zero when `M` has loops.
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        if self.has_loops() {
            return IntPolynomial::zero();
        }
        let lat = self.flat_lattice();
        let mut coeffs = vec![0i64; self.rank + 1];
        for (i, _) in lat.flats.iter().enumerate() {
            coeffs[self.rank - lat.ranks[i]] += lat.mobius[i];
        }
        IntPolynomial::new(coeffs)
    }

    /// Characteristic polynomial by deletion–contraction on the bases family.
    /// Independent of the flat lattice; used to cross-check the Möbius route.
    pub fn characteristic_polynomial_deletion_contraction(&self) -> IntPolynomial {
        deletion_contraction(self.ground(), &self.bases)
    }

    /// Absolute values of the coefficients of χ, from the leading one down.
    pub fn whitney_numbers(&self) -> Vec<u64> {
        let chi = self.characteristic_polynomial();
        (0..=self.rank).map(|k| chi.coeff(self.rank - k).unsigned_abs()).collect()
    }

    pub fn check_log_concavity(&self) -> LogConcavityReport {
        let w = self.whitney_numbers();
        let violations: Vec<usize> = (1..self.rank)
            .filter(|&k| (w[k - 1] as u128) * (w[k + 1] as u128) > (w[k] as u128) * (w[k] as u128))
            .collect();
        LogConcavityReport { holds: violations.is_empty(), whitney: w, violations }
    }
}

fn deletion_contraction(ground: ElementSet, bases: &[ElementSet]) -> IntPolynomial {
    if ground == 0 {
        return IntPolynomial::new(vec![1]);
    }
    let e = ground.trailing_zeros();
    let bit = 1 << e;
    let rest = ground & !bit;
    let with: Vec<ElementSet> = bases.iter().filter(|&&b| b & bit != 0).map(|&b| b & !bit).collect();
    if with.is_empty() {
        return IntPolynomial::zero();
    }
    if with.len() == bases.len() {
        // coloop: χ_M = (λ - 1) χ_{M/e}
        return deletion_contraction(rest, &with).mul(&IntPolynomial::new(vec![-1, 1]));
    }
    let without: Vec<ElementSet> = bases.iter().copied().filter(|&b| b & bit == 0).collect();
    deletion_contraction(rest, &without).sub(&deletion_contraction(rest, &with))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogConcavityReport {
    pub holds: bool,
    pub whitney: Vec<u64>,
    /// Indices `k` with `w_{k-1} w_{k+1} > w_k^2`.
    pub violations: Vec<usize>,
}

/// Lattice of flats ordered by (rank, mask), with Hasse diagram and `μ(⊥, ·)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    pub flats: Vec<ElementSet>,
    pub ranks: Vec<usize>,
    /// Cover relations `(lower, upper)` as indices into `flats`.
    pub covers: Vec<(usize, usize)>,
    pub mobius: Vec<i64>,
}

impl FlatLattice {
    fn new(m: &Matroid) -> Self {
        let bottom = m.closure(0);
        let mut by_rank: Vec<BTreeSet<ElementSet>> = vec![BTreeSet::from([bottom])];
        for k in 0..m.rank() {
            let mut next = BTreeSet::new();
            for &f in &by_rank[k] {
                for e in 0..m.n() {
                    if f & (1 << e) == 0 {
                        next.insert(m.closure(f | (1 << e)));
                    }
                }
            }
            by_rank.push(next);
        }
        let mut flats = Vec::new();
        let mut ranks = Vec::new();
        for (k, level) in by_rank.iter().enumerate() {
            for &f in level {
                flats.push(f);
                ranks.push(k);
            }
        }
        let mut covers = Vec::new();
        for (i, &f) in flats.iter().enumerate() {
            for (j, &g) in flats.iter().enumerate() {
                if ranks[j] == ranks[i] + 1 && f & g == f {
                    covers.push((i, j));
                }
            }
        }
        let mut mobius = vec![0i64; flats.len()];
        for j in 0..flats.len() {
            if j == 0 {
                mobius[0] = 1;
                continue;
            }
            let g = flats[j];
            let below: i64 = (0..j).filter(|&i| flats[i] & g == flats[i] && flats[i] != g).map(|i| mobius[i]).sum();
            mobius[j] = -below;
        }
        Self { flats, ranks, covers, mobius }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn index_of(&self, f: ElementSet) -> Option<usize> {
        self.flats.iter().position(|&g| g == f)
    }

    /// Flats other than `⊥` and `⊤`, in lattice order.
    pub fn proper_flats(&self) -> Vec<ElementSet> {
        let top = self.top();
        (1..top).map(|i| self.flats[i]).collect()
    }

    /// Exhaustive check of the geometric-lattice axioms and the Möbius recursion.
    pub fn verify(&self, m: &Matroid) -> bool {
        let n = self.flats.len();
        let bottom_ok = self.flats[0] == m.closure(0) && self.flats[n - 1] == m.ground();
        let mobius_ok = (1..n).all(|j| {
            let g = self.flats[j];
            (0..=j).filter(|&i| self.flats[i] & g == self.flats[i]).map(|i| self.mobius[i]).sum::<i64>() == 0
        });
        let atoms: Vec<ElementSet> = (0..n).filter(|&i| self.ranks[i] == 1).map(|i| self.flats[i]).collect();
        let atomistic = self.flats.iter().all(|&f| {
            let join = atoms.iter().filter(|&&a| a & f == a).fold(0, |acc, &a| acc | a);
            m.closure(join) == f
        });
        let semimodular = (0..n).all(|i| {
            (0..n).all(|j| {
                let (f, g) = (self.flats[i], self.flats[j]);
                self.ranks[i] + self.ranks[j] >= m.rank_of(f | g) + m.rank_of(f & g)
            })
        });
        bottom_ok && mobius_ok && atomistic && semimodular
    }
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: i64) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "λ")?,
                (1, _) => write!(f, "{a}λ")?,
                (_, 1) => write!(f, "λ^{k}")?,
                _ => write!(f, "{a}λ^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[x] = r;
        r
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Matroid {
        Matroid::graphic(&[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn constructors() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.bases(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let u0 = Matroid::uniform(0, 2).unwrap();
        assert_eq!(u0.bases(), vec![Vec::<usize>::new()]);
        assert_eq!(k3().bases().len(), 3);
        assert!(Matroid::uniform(3, 2).is_err());
        assert!(Matroid::graphic(&[]).is_err());
    }

    #[test]
    fn basis_errors() {
        assert_eq!(
            Matroid::from_bases(3, &[vec![0], vec![1, 2]]).unwrap_err(),
            Error::UnequalBasisSize { expected: 1, found: 2 }
        );
        assert_eq!(Matroid::from_bases(3, &[]).unwrap_err(), Error::EmptyBases);
        assert!(matches!(
            Matroid::from_bases(4, &[vec![0, 1], vec![2, 3]]).unwrap_err(),
            Error::ExchangeAxiomViolated { .. }
        ));
        assert!(Matroid::from_bases(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn ranks() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.rank_of(0), 0);
        assert_eq!(u.rank_of(u.ground()), 2);
        assert_eq!(k3().rank_of_elements(&[1]), 1);
    }

    #[test]
    fn lattice_of_u23() {
        let lat = Matroid::uniform(2, 3).unwrap().flat_lattice();
        assert_eq!(lat.flats, vec![0, 0b001, 0b010, 0b100, 0b111]);
        assert_eq!(lat.mobius, vec![1, -1, -1, -1, 2]);
        assert_eq!(lat.covers.len(), 6);
        let u11 = Matroid::uniform(1, 1).unwrap().flat_lattice();
        assert_eq!(u11.mobius, vec![1, -1]);
        assert_eq!(k3().flat_lattice().mobius, lat.mobius);
    }

    #[test]
    fn polynomials() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.characteristic_polynomial().coeffs(), &[2, -3, 1]);
        assert_eq!(u.characteristic_polynomial().to_string(), "λ^2 - 3λ + 2");
        assert_eq!(Matroid::uniform(1, 1).unwrap().characteristic_polynomial().coeffs(), &[-1, 1]);
        assert_eq!(k3().characteristic_polynomial_deletion_contraction().coeffs(), &[2, -3, 1]);
        assert_eq!(u.whitney_numbers(), vec![1, 3, 2]);
        assert_eq!(Matroid::uniform(1, 1).unwrap().whitney_numbers(), vec![1, 1]);
    }

    #[test]
    fn loops_give_zero_polynomial() {
        let m = Matroid::from_bases(2, &[vec![0]]).unwrap();
        assert!(m.has_loops());
        assert!(m.characteristic_polynomial().is_zero());
        assert!(m.characteristic_polynomial_deletion_contraction().is_zero());
    }

    #[test]
    fn log_concavity_small() {
        let r = Matroid::uniform(2, 3).unwrap().check_log_concavity();
        assert!(r.holds);
        let r = Matroid::uniform(1, 1).unwrap().check_log_concavity();
        assert!(r.holds && r.violations.is_empty());
    }
}
