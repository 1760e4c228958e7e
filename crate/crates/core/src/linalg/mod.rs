//! Exact linear algebra over the rationals and the integers.
//!
//! Everything in this module is exact: matrices hold [`BigRational`] or
//! [`BigInt`] entries and no routine ever rounds. Sizes in this crate are
//! small (a few hundred rows at most), so dense row-major storage is used
//! throughout.

pub mod exterior;
pub mod inertia;
pub mod lattice;
pub mod lp;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use inertia::{inertia, InertiaCertificate, Signature};
pub use lattice::ZMatrix;

/// Arbitrary precision rational scalar.
pub type Q = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den` as a rational.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
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
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Q]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
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

    pub fn scale(&self, s: &Q) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows).map(|i| sum_of_products(self.row(i).iter().zip(v))).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols].clone_from_slice(self.row(i));
        }
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form.
    ///
    /// Rows are first scaled to primitive integer vectors, then reduced by
    /// fraction-free Gauss–Jordan elimination: after each step every entry is
    /// (up to sign) a minor of the scaled matrix, so all divisions by the
    /// previous pivot are exact and no gcds are taken until the final division.
    pub fn rref(&self) -> Rref {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| primitive_integer_row(self.row(i))).collect();
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (before, rest) = a.split_at_mut(r);
            let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
            let piv = pivot_row[c].clone();
            for row in before.iter_mut().chain(after.iter_mut()) {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if f.is_zero() || y.is_zero() {
                        if !x.is_zero() {
                            *x = &*x * &piv / &prev;
                        }
                    } else {
                        *x = (&*x * &piv - &f * y) / &prev;
                    }
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        // Every pivot entry now equals `prev`.
        a.truncate(r);
        let data = a.into_iter().flat_map(|row| row.into_iter().map(|x| Q::new(x, prev.clone()))).collect();
        Rref { matrix: QMatrix { rows: r, cols, data }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space, returned as the columns of a matrix.
    pub fn kernel(&self) -> Self {
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k[(f, col)] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, col)] = -r[(row, f)].clone();
            }
        }
        k
    }

    /// Indices of a maximal linearly independent set of columns (the pivot columns).
    pub fn column_basis_indices(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Columns forming a basis of the column space.
    pub fn column_space(&self) -> Self {
        self.select_columns(&self.column_basis_indices())
    }

    /// One solution `x` of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let rhs = Self::from_columns(&[b.to_vec()], self.rows);
        self.solve_matrix(&rhs).map(|x| x.column(0))
    }

    /// One solution `X` of `self * X = B`, or `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "solve dimension mismatch");
        let aug = self.hstack(b);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        // A singular matrix leaves a pivot in the identity block, so solving fails.
        self.solve_matrix(&Self::identity(self.rows))
    }

    /// Determinant via fraction-free (Bareiss) elimination after clearing denominators.
    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Q::one();
        }
        let mut scale = Q::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let l = self.row(i).iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            scale *= Q::from_integer(l.clone());
            a.push(self.row(i).iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect());
        }
        Q::from_integer(lattice::bareiss_det(a)) / scale
    }

    /// Exact Sylvester test: all leading principal minors are positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        // Gaussian elimination without pivoting: the k-th pivot is the ratio of
        // consecutive leading minors, so all minors are positive iff all pivots are.
        let mut m = self.clone();
        let n = m.rows;
        for k in 0..n {
            if !m[(k, k)].is_positive() {
                return false;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &m[(k, k)];
                for j in k..n {
                    let delta = &f * &m[(k, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        true
    }

}

/// `v` scaled by a nonzero rational to a primitive integer vector.
fn primitive_integer_row(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Euclidean-free dot product of two rational vectors.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    sum_of_products(a.iter().zip(b))
}

/// `Σ xᵢ yᵢ`, accumulated over the lcm of the denominators and reduced once.
/// Rows produced by elimination mostly share a denominator, so this avoids a
/// gcd per term.
pub fn sum_of_products<'a>(terms: impl Iterator<Item = (&'a Q, &'a Q)>) -> Q {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in terms {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let n = x.numer() * y.numer();
        let d = x.denom() * y.denom();
        if d == den {
            num += n;
        } else if (&den % &d).is_zero() {
            num += n * (&den / &d);
        } else {
            let g = num_integer::Integer::gcd(&den, &d);
            let dg = &d / &g;
            num = num * &dg + n * (&den / &g);
            den *= dg;
        }
    }
    Q::new(num, den)
}

/// `x^T G y` for a Gram matrix `G`.
pub fn bilinear(g: &QMatrix, x: &[Q], y: &[Q]) -> Q {
    dot(x, &g.mul_vec(y))
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let rt = rhs.transpose();
        let data = (0..self.rows)
            .flat_map(|i| (0..rhs.cols).map(move |j| (i, j)))
            .map(|(i, j)| sum_of_products(self.row(i).iter().zip(rt.row(j))))
            .collect();
        QMatrix { rows: self.rows, cols: rhs.cols, data }
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
