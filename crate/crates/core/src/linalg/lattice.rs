//! Integer lattices: Hermite and Smith normal forms, saturation, quotient maps.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{QMatrix, Q};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Self { rows: r, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "integer matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += &self[(i, k)] * &rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix::from_rows(
            self.to_rows().into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect(),
            self.cols,
        )
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replace rows (a, b) by (x*a + y*b, u*a + v*b).
    fn combine_rows(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = u * &ra + v * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl Index<(usize, usize)> for ZMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ZMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form `U * A = H` with `U` unimodular.
///
/// `H` is upper echelon with positive pivots, entries above each pivot reduced
/// into `[0, pivot)`, and zero rows at the bottom.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: ZMatrix,
    pub u: ZMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

pub fn hermite(a: &ZMatrix) -> Hermite {
    let mut h = a.clone();
    let mut u = ZMatrix::identity(a.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        // Euclid on column c below row r, mirrored on U.
        for i in r + 1..h.rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let ext = h[(r, c)].extended_gcd(&h[(i, c)]);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let a_g = &h[(r, c)] / &g;
            let b_g = &h[(i, c)] / &g;
            let m = [&x, &y, &(-&b_g), &a_g];
            h.combine_rows(r, i, m);
            u.combine_rows(r, i, m);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let f = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row(i, r, &f);
            u.add_row(i, r, &f);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, pivots }
}

/// Smith normal form `P * A * Q = S` with `P`, `Q` unimodular and
/// `S` diagonal with nonnegative entries, each dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: ZMatrix,
    pub p: ZMatrix,
    pub q: ZMatrix,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith(a: &ZMatrix) -> Smith {
    let mut s = a.clone();
    let mut p = ZMatrix::identity(a.rows);
    let mut q = ZMatrix::identity(a.cols);
    let n = s.rows.min(s.cols);
    let mut t = 0;
    while t < n {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..s.rows {
            for j in t..s.cols {
                if !s[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        p.swap_rows(t, bi);
        s.swap_cols(t, bj);
        q.swap_cols(t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let ext = s[(t, t)].extended_gcd(&s[(i, t)]);
                let (g, x, y) = (ext.gcd, ext.x, ext.y);
                let a_g = &s[(t, t)] / &g;
                let b_g = &s[(i, t)] / &g;
                let m = [&x, &y, &(-&b_g), &a_g];
                s.combine_rows(t, i, m);
                p.combine_rows(t, i, m);
                dirty = true;
            }
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let ext = s[(t, t)].extended_gcd(&s[(t, j)]);
                let (g, x, y) = (ext.gcd, ext.x, ext.y);
                let a_g = &s[(t, t)] / &g;
                let b_g = &s[(t, j)] / &g;
                let m = [&x, &y, &(-&b_g), &a_g];
                s.combine_cols(t, j, m);
                q.combine_cols(t, j, m);
                dirty = true;
            }
            if dirty {
                continue;
            }
            // Divisibility: if the pivot fails to divide some trailing entry,
            // fold that row in and repeat.
            let bad = (t + 1..s.rows)
                .find(|&i| (t + 1..s.cols).any(|j| !(&s[(i, j)] % &s[(t, t)]).is_zero()));
            match bad {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    p.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    Smith { s, p, q }
}

/// Basis (as rows) of the integer kernel `{x in Z^n : A x = 0}`.
/// The returned lattice is saturated by construction.
pub fn integer_kernel(a: &ZMatrix) -> ZMatrix {
    let Hermite { h, u, pivots } = hermite(&a.transpose());
    let zero_rows: Vec<usize> = (pivots.len()..h.rows).collect();
    debug_assert!(zero_rows.iter().all(|&i| h.row(i).iter().all(Zero::is_zero)));
    u.select_rows(&zero_rows)
}

/// Canonical basis (rows, row-HNF) of the lattice generated by the given rows.
pub fn canonical_basis(gens: &ZMatrix) -> ZMatrix {
    let Hermite { h, pivots, .. } = hermite(gens);
    h.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

/// Scales a rational vector to the primitive integer vector with the same direction.
/// Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Q]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

pub fn gcd_of(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Basis of `Z^n ∩ span_Q(gens)`, gens given as rational vectors of length `n`.
/// Returned as rows in canonical Hermite form.
pub fn saturated_lattice(gens: &[Vec<Q>], n: usize) -> ZMatrix {
    if gens.is_empty() {
        return ZMatrix::zeros(0, n);
    }
    let g = QMatrix::from_rows(gens.to_vec(), n);
    // Integer annihilator of the span, then its integer kernel.
    let ann_q = g.kernel();
    let ann_rows: Vec<Vec<BigInt>> =
        ann_q.columns().iter().map(|c| primitive_integer(c).expect("kernel basis vector is nonzero")).collect();
    let ann = ZMatrix::from_rows(ann_rows, n);
    let ker = if ann.rows() == 0 { ZMatrix::identity(n) } else { integer_kernel(&ann) };
    canonical_basis(&ker)
}

/// Surjective integer projection `Z^n -> Z^(n-k)` whose kernel is the saturated
/// lattice `basis` (rows), together with an integer section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// `(n-k) x n` projection.
    pub projection: ZMatrix,
    /// `n x (n-k)` integer section: `projection * section = I`.
    pub section: ZMatrix,
}

impl QuotientMap {
    pub fn target_dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.projection.mul_vec(v)
    }

    pub fn project_q(&self, v: &[Q]) -> Vec<Q> {
        self.projection.to_rational().mul_vec(v)
    }

    pub fn lift(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.section.mul_vec(v)
    }
}

/// Quotient map for `Z^n / L` with `L` saturated, via the Smith form of the basis.
pub fn quotient_map(basis: &ZMatrix, n: usize) -> QuotientMap {
    assert_eq!(basis.cols(), n);
    let k = basis.rows();
    if k == 0 {
        return QuotientMap { projection: ZMatrix::identity(n), section: ZMatrix::identity(n) };
    }
    // Columns of B^T span L; P B^T Q = S, so rows k.. of P annihilate L.
    let Smith { s, p, .. } = smith(&basis.transpose());
    debug_assert!((0..k).all(|i| s[(i, i)].is_one()), "lattice is not saturated");
    let projection = p.select_rows(&(k..n).collect::<Vec<_>>());
    let p_inv = unimodular_inverse(&p);
    let section = p_inv.transpose().select_rows(&(k..n).collect::<Vec<_>>()).transpose();
    QuotientMap { projection, section }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &ZMatrix) -> ZMatrix {
    let inv = u.to_rational().inverse().expect("unimodular matrix is invertible");
    ZMatrix::from_rows(
        inv.to_rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| {
                        assert!(x.is_integer(), "matrix is not unimodular");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect(),
        u.cols(),
    )
}

/// Reduces `v` modulo the lattice with row-HNF basis `hnf` so that each pivot
/// coordinate lands in `[0, pivot)`. Gives a canonical coset representative.
pub fn reduce_mod_lattice(v: &[BigInt], hnf: &ZMatrix) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for i in 0..hnf.rows() {
        let Some(c) = hnf.row(i).iter().position(|x| !x.is_zero()) else { continue };
        let f = out[c].div_floor(&hnf[(i, c)]);
        if f.is_zero() {
            continue;
        }
        for (o, h) in out.iter_mut().zip(hnf.row(i)) {
            *o -= &f * h;
        }
    }
    out
}

/// Fraction-free Bareiss determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    fn z(rows: &[&[i64]]) -> ZMatrix {
        ZMatrix::from_i64_rows(rows)
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_is_unimodular_transform() {
        let a = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let Hermite { h, u, pivots } = hermite(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(pivots.len(), 3);
        assert!(unimodular_inverse(&u).mul(&u) == ZMatrix::identity(3));
        for (r, &c) in pivots.iter().enumerate() {
            assert!(h[(r, c)].is_positive());
            for i in 0..r {
                assert!(h[(i, c)] >= BigInt::zero() && h[(i, c)] < h[(r, c)]);
            }
        }
    }

    #[test]
    fn smith_invariants() {
        let a = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let sm = smith(&a);
        assert_eq!(sm.p.mul(&a).mul(&sm.q), sm.s);
        assert_eq!(sm.invariant_factors(), bi(&[2, 6, 12]));
    }

    #[test]
    fn saturation_examples() {
        // Segment from (0,0) to (1/2,1/2): saturated tangent lattice is Z(1,1).
        let l = saturated_lattice(&[vec![qf(1, 2), qf(1, 2)]], 2);
        assert_eq!(l, z(&[&[1, 1]]));
        let l = saturated_lattice(&[vec![q(2), q(2)]], 2);
        assert_eq!(l, z(&[&[1, 1]]));
        assert_eq!(saturated_lattice(&[], 3).rows(), 0);
        let full = saturated_lattice(&[vec![q(1), q(0)], vec![q(1), q(2)]], 2);
        assert_eq!(full, ZMatrix::identity(2));
    }

    #[test]
    fn quotient_map_kills_lattice() {
        let basis = z(&[&[1, 1, 0]]);
        let qm = quotient_map(&basis, 3);
        assert_eq!(qm.target_dim(), 2);
        assert!(qm.project(&bi(&[1, 1, 0])).iter().all(Zero::is_zero));
        assert_eq!(qm.projection.mul(&qm.section), ZMatrix::identity(2));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        let k = integer_kernel(&z(&[&[2, 2, 0]]));
        assert_eq!(k.rows(), 2);
        assert_eq!(gcd_of(k.row(0)), BigInt::one());
        assert!(z(&[&[2, 2, 0]]).mul(&k.transpose()).is_zero());
    }

    #[test]
    fn coset_reduction() {
        let hnf = z(&[&[1, 0]]);
        assert_eq!(reduce_mod_lattice(&bi(&[5, 1]), &hnf), bi(&[0, 1]));
        let hnf = z(&[&[2, 1]]);
        assert_eq!(reduce_mod_lattice(&bi(&[5, 1]), &hnf), bi(&[1, -1]));
    }

    #[test]
    fn bareiss_matches_rational() {
        let m = vec![bi(&[0, 2, 1]), bi(&[3, 1, 4]), bi(&[1, 5, 9])];
        assert_eq!(bareiss_det(m), BigInt::from(0 * (9 - 20) - 2 * (27 - 4) + (15 - 1)));
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive_integer(&[qf(1, 2), qf(-3, 4)]).unwrap(), bi(&[2, -3]));
        assert!(primitive_integer(&[q(0)]).is_none());
    }
}
