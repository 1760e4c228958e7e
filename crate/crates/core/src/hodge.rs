//! Finite-dimensional Hodge theory on metrized cochain complexes.
//!
//! Each `C^q` carries an inner product `⟨x, y⟩_q = xᵀ G_q y`. The
//! codifferential is the metric adjoint of `d`, and `C^q` splits
//! `G_q`-orthogonally as `im d ⊕ im δ ⊕ ker Δ`. Boundary conditions do not
//! arise in finite dimensions, so the split has exactly three summands.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chow::{ChowElement, GradedChowRing};
use crate::cohomology::CochainComplexQ;
use crate::error::{Error, Result};
use crate::linalg::{bilinear, is_zero_vec, vec_sub, QMatrix, Signature, Q};

#[derive(Clone, Debug)]
pub struct MetrizedComplex {
    complex: CochainComplexQ,
    grams: Vec<QMatrix>,
    /// `codiffs[q] = δ_q`, fixed once the Grams are.
    codiffs: Vec<QMatrix>,
    laplacians: Vec<OnceLock<QMatrix>>,
    splittings: Vec<OnceLock<Splitting>>,
}

impl PartialEq for MetrizedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.grams == other.grams
    }
}

impl Eq for MetrizedComplex {}

/// Precomputed projections onto `im d_{q−1}` and `im δ_{q+1}` inside `C^q`.
#[derive(Clone, Debug)]
struct Splitting {
    /// Pivot columns `J` of `d_{q−1}` and `B = d_{q−1}[:, J]`.
    exact_cols: Vec<usize>,
    exact_basis: QMatrix,
    /// `(Bᵀ G_q B)⁻¹ Bᵀ G_q`: coordinates of the projection in `B`.
    exact_coeffs: QMatrix,
    /// `Y = G_q⁻¹ C` where `C = d_qᵀ[:, I]` for pivot columns `I` of `d_qᵀ`.
    /// Since `δ_{q+1} = G_q⁻¹ d_qᵀ G_{q+1}`, the columns of `Y` span `im δ_{q+1}`.
    coexact_basis: QMatrix,
    /// `(Cᵀ G_q⁻¹ C)⁻¹ Cᵀ`, which equals `(Yᵀ G_q Y)⁻¹ Yᵀ G_q`.
    coexact_coeffs: QMatrix,
    /// `G_{q+1}⁻¹ E_I`, so that `δ_{q+1} (G_{q+1}⁻¹ E_I c) = Y c`.
    coexact_potential: QMatrix,
}

impl MetrizedComplex {
    /// Each `G_q` must be symmetric positive definite of size `dim C^q`.
    pub fn new(complex: CochainComplexQ, grams: Vec<QMatrix>) -> Result<Self> {
        if grams.len() != complex.len() {
            return Err(Error::ShapeMismatch(format!("{} Gram matrices for {} degrees", grams.len(), complex.len())));
        }
        for (q, g) in grams.iter().enumerate() {
            if g.shape() != (complex.dims()[q], complex.dims()[q]) {
                return Err(Error::ShapeMismatch(format!("G_{q} has shape {:?}", g.shape())));
            }
            if !g.is_positive_definite() {
                return Err(Error::NotPositiveDefinite(q));
            }
        }
        Ok(Self::assemble(complex, grams))
    }

    fn assemble(complex: CochainComplexQ, grams: Vec<QMatrix>) -> Self {
        let codiffs = (0..complex.len())
            .map(|q| {
                if q == 0 {
                    return QMatrix::zeros(0, complex.dims()[0]);
                }
                let rhs = &complex.d(q - 1).transpose() * &grams[q];
                grams[q - 1].solve_matrix(&rhs).expect("Gram matrix is invertible")
            })
            .collect();
        let n = complex.len();
        Self { complex, grams, codiffs, laplacians: vec![OnceLock::new(); n], splittings: vec![OnceLock::new(); n] }
    }

    pub fn identity(complex: CochainComplexQ) -> Self {
        let grams = complex.dims().iter().map(|&n| QMatrix::identity(n)).collect();
        Self::assemble(complex, grams)
    }

    /// Diagonal Grams from positive per-coordinate weights.
    pub fn diagonal(complex: CochainComplexQ, weights: &[Vec<Q>]) -> Result<Self> {
        let grams = weights.iter().map(|w| QMatrix::diagonal(w)).collect();
        Self::new(complex, grams)
    }

    /// Seeded symmetric, strictly diagonally dominant Grams with positive diagonal.
    pub fn seeded(complex: CochainComplexQ, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grams = complex.dims().iter().map(|&n| random_spd(&mut rng, n)).collect();
        Self::assemble(complex, grams)
    }

    pub fn complex(&self) -> &CochainComplexQ {
        &self.complex
    }

    pub fn gram(&self, q: usize) -> &QMatrix {
        &self.grams[q]
    }

    pub fn grams(&self) -> &[QMatrix] {
        &self.grams
    }

    pub fn inner(&self, q: usize, x: &[Q], y: &[Q]) -> Q {
        bilinear(&self.grams[q], x, y)
    }

    fn check_degree(&self, q: usize) -> Result<()> {
        if q >= self.complex.len() {
            return Err(Error::DegreeOutOfRange(q));
        }
        Ok(())
    }

    /// `δ_q = G_{q−1}⁻¹ d_{q−1}ᵀ G_q : C^q → C^{q−1}` (zero map for `q = 0`).
    pub fn codifferential(&self, q: usize) -> Result<QMatrix> {
        self.check_degree(q)?;
        Ok(self.codiffs[q].clone())
    }

    /// `δ_{q+1}: C^{q+1} → C^q`; zero map at the top degree.
    fn codifferential_into(&self, q: usize) -> QMatrix {
        if q + 1 < self.complex.len() {
            self.codiffs[q + 1].clone()
        } else {
            QMatrix::zeros(self.complex.dims()[q], 0)
        }
    }

    /// `Δ_q = d_{q−1} δ_q + δ_{q+1} d_q`.
    pub fn laplacian(&self, q: usize) -> Result<QMatrix> {
        Ok(self.laplacian_ref(q)?.clone())
    }

    fn laplacian_ref(&self, q: usize) -> Result<&QMatrix> {
        self.check_degree(q)?;
        Ok(self.laplacians[q].get_or_init(|| {
            let down = &self.complex.d_into(q) * &self.codiffs[q];
            let up = &self.codifferential_into(q) * &self.complex.d(q);
            &down + &up
        }))
    }

    /// Basis (columns) of `ker Δ_q`.
    ///
    /// Computed as the kernel of the symmetric form
    /// `G_q Δ_q = G_q d_{q−1} G_{q−1}⁻¹ d_{q−1}ᵀ G_q + d_qᵀ G_{q+1} d_q`, which has
    /// the same kernel because `G_q` is invertible and much smaller entries than
    /// `Δ_q` itself. Each basis vector is then checked against `Δ_q` directly.
    pub fn harmonic_space(&self, q: usize) -> Result<QMatrix> {
        self.check_degree(q)?;
        let g = &self.grams[q];
        let d_in = self.complex.d_into(q);
        let d_out = self.complex.d(q);
        let down = if q == 0 {
            QMatrix::zeros(g.rows(), g.rows())
        } else {
            let gd = g * &d_in;
            let inner = self.grams[q - 1].solve_matrix(&gd.transpose()).expect("Gram matrix is invertible");
            &gd * &inner
        };
        let up = if q + 1 < self.complex.len() {
            &(&d_out.transpose() * &self.grams[q + 1]) * &d_out
        } else {
            QMatrix::zeros(g.rows(), g.rows())
        };
        let h = (&down + &up).kernel();
        let lap = self.laplacian_ref(q)?;
        assert!(h.columns().iter().all(|v| is_zero_vec(&lap.mul_vec(v))), "kernel of G_q Δ_q lies in ker Δ_q");
        Ok(h)
    }

    /// `ker Δ_q = ker d_q ∩ ker δ_q`.
    pub fn harmonic_is_closed_and_coclosed(&self, q: usize) -> Result<bool> {
        let h = self.harmonic_space(q)?;
        Ok(self.closed_and_coclosed(q, &h))
    }

    /// `harmonic` spans `ker d_q ∩ ker δ_q`. Uses `ker δ_q = ker(d_{q−1}ᵀ G_q)`.
    fn closed_and_coclosed(&self, q: usize, harmonic: &QMatrix) -> bool {
        let closed = harmonic.columns().iter().all(|v| {
            is_zero_vec(&self.complex.d(q).mul_vec(v)) && is_zero_vec(&self.codiffs[q].mul_vec(v))
        });
        let both = self.complex.d(q).vstack(&(&self.complex.d_into(q).transpose() * &self.grams[q]));
        closed && harmonic.rank() == harmonic.cols() && harmonic.cols() == both.cols() - both.rank()
    }

    fn splitting(&self, q: usize) -> &Splitting {
        self.splittings[q].get_or_init(|| {
            let g = &self.grams[q];
            let n = g.rows();
            let d_in = self.complex.d_into(q);
            let exact_cols = d_in.column_basis_indices();
            let exact_basis = d_in.select_columns(&exact_cols);
            let gb = g * &exact_basis;
            let normal = &exact_basis.transpose() * &gb;
            let exact_coeffs = normal.solve_matrix(&gb.transpose()).expect("Gram restricted to im d is invertible");
            let (coexact_basis, coexact_coeffs, coexact_potential) = if q + 1 < self.complex.len() {
                let dt = self.complex.d(q).transpose();
                let cols = dt.column_basis_indices();
                let c = dt.select_columns(&cols);
                let y = g.solve_matrix(&c).expect("Gram matrix is invertible");
                let normal = &c.transpose() * &y;
                let coeffs = normal.solve_matrix(&c.transpose()).expect("Gram restricted to im δ is invertible");
                let next = &self.grams[q + 1];
                let mut e = QMatrix::zeros(next.rows(), cols.len());
                for (k, &i) in cols.iter().enumerate() {
                    e[(i, k)] = Q::one();
                }
                (y, coeffs, next.solve_matrix(&e).expect("Gram matrix is invertible"))
            } else {
                (QMatrix::zeros(n, 0), QMatrix::zeros(0, n), QMatrix::zeros(0, 0))
            };
            Splitting { exact_cols, exact_basis, exact_coeffs, coexact_basis, coexact_coeffs, coexact_potential }
        })
    }

    /// `⟨dω, η⟩_{q+1} − ⟨ω, δη⟩_q`, which is zero exactly.
    pub fn adjunction_defect(&self, q: usize, omega: &[Q], eta: &[Q]) -> Result<Q> {
        self.check_degree(q + 1)?;
        let lhs = self.inner(q + 1, &self.complex.d(q).mul_vec(omega), eta);
        let rhs = self.inner(q, omega, &self.codiffs[q + 1].mul_vec(eta));
        Ok(lhs - rhs)
    }

    pub fn hodge_decompose(&self, q: usize, omega: &[Q]) -> Result<HodgeDecomposition> {
        self.check_degree(q)?;
        if omega.len() != self.complex.dims()[q] {
            return Err(Error::ShapeMismatch(format!("cochain has {} entries, C^{q} has dimension {}", omega.len(), self.complex.dims()[q])));
        }
        let sp = self.splitting(q);
        let a = sp.exact_coeffs.mul_vec(omega);
        let exact = sp.exact_basis.mul_vec(&a);
        let mut alpha = vec![Q::zero(); self.complex.d_into(q).cols()];
        for (k, &j) in sp.exact_cols.iter().enumerate() {
            alpha[j] = a[k].clone();
        }
        let c = sp.coexact_coeffs.mul_vec(omega);
        let coexact = sp.coexact_basis.mul_vec(&c);
        let beta = sp.coexact_potential.mul_vec(&c);
        let harmonic = vec_sub(&vec_sub(omega, &exact), &coexact);
        Ok(HodgeDecomposition { q, omega: omega.to_vec(), exact, coexact, harmonic, alpha, beta })
    }

    pub fn verify_hodge_isomorphism(&self) -> Result<HodgeIsomorphismReport> {
        let cohomology = self.complex.cohomology_dims();
        let degrees = (0..self.complex.len())
            .map(|q| {
                let harmonic = self.harmonic_space(q)?;
                Ok(HodgeDegreeReport {
                    q,
                    harmonic_dim: harmonic.cols(),
                    cohomology_dim: cohomology[q],
                    equal: harmonic.cols() == cohomology[q],
                    harmonic_is_closed_and_coclosed: self.closed_and_coclosed(q, &harmonic),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HodgeIsomorphismReport { holds: degrees.iter().all(|d| d.equal && d.harmonic_is_closed_and_coclosed), degrees })
    }
}

/// Random rational entry `a/b` with `|a| ≤ 5`, `1 ≤ b ≤ 4`.
fn random_small<R: Rng>(rng: &mut R) -> Q {
    Q::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=4).into())
}

pub(crate) fn random_spd<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = random_small(rng);
            m[(i, j)] = x.clone();
            m[(j, i)] = x;
        }
    }
    for i in 0..n {
        let off: Q = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).fold(Q::zero(), |a, b| a + b);
        m[(i, i)] = off + Q::new(rng.random_range(1i64..=5).into(), rng.random_range(1i64..=3).into());
    }
    m
}

/// Random rational vector with small entries.
pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    (0..n).map(|_| random_small(rng)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDecomposition {
    pub q: usize,
    pub omega: Vec<Q>,
    pub exact: Vec<Q>,
    pub coexact: Vec<Q>,
    pub harmonic: Vec<Q>,
    /// `exact = d α`.
    pub alpha: Vec<Q>,
    /// `coexact = δ β`.
    pub beta: Vec<Q>,
}

impl HodgeDecomposition {
    pub fn recomposes(&self) -> bool {
        let sum: Vec<Q> = (0..self.omega.len()).map(|i| &self.exact[i] + &self.coexact[i] + &self.harmonic[i]).collect();
        sum == self.omega
    }

    /// The three pairwise inner products `(exact·coexact, exact·harmonic, coexact·harmonic)`.
    pub fn cross_inner_products(&self, mc: &MetrizedComplex) -> [Q; 3] {
        [
            mc.inner(self.q, &self.exact, &self.coexact),
            mc.inner(self.q, &self.exact, &self.harmonic),
            mc.inner(self.q, &self.coexact, &self.harmonic),
        ]
    }

    /// Recomposition, orthogonality, potentials and harmonicity all hold exactly.
    pub fn verify(&self, mc: &MetrizedComplex) -> Result<bool> {
        let c = mc.complex();
        let potentials = c.d_into(self.q).mul_vec(&self.alpha) == self.exact
            && mc.codifferential_into(self.q).mul_vec(&self.beta) == self.coexact;
        let harmonic = is_zero_vec(&mc.laplacian_ref(self.q)?.mul_vec(&self.harmonic));
        Ok(self.recomposes() && potentials && harmonic && self.cross_inner_products(mc).iter().all(Zero::is_zero))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDegreeReport {
    pub q: usize,
    pub harmonic_dim: usize,
    pub cohomology_dim: usize,
    pub equal: bool,
    pub harmonic_is_closed_and_coclosed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeIsomorphismReport {
    pub holds: bool,
    pub degrees: Vec<HodgeDegreeReport>,
}

/// `i^{p−q} (−1)^{(p+q)(p+q−1)/2}` as the exponent `k ∈ {0,1,2,3}` of `iᵏ`.
pub fn hodge_riemann_phase(p: usize, q: usize) -> u8 {
    let s = p + q;
    let from_sign = if (s * s.saturating_sub(1) / 2) % 2 == 0 { 0 } else { 2 };
    let from_i = (p as i64 - q as i64).rem_euclid(4) as u8;
    (from_i + from_sign) % 4
}

/// The real sign of the Hodge–Riemann form on `(p,p)`-classes.
pub fn hodge_riemann_sign(p: usize) -> i64 {
    match hodge_riemann_phase(p, p) {
        0 => 1,
        2 => -1,
        _ => unreachable!("the phase is real on the diagonal"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzReport {
    pub top_degree: usize,
    pub vacuous: bool,
    pub dims: Vec<usize>,
    /// Hard Lefschetz for `p = 0..=r/2`.
    pub hl: Vec<bool>,
    /// Inertia of the Hodge–Riemann form on `Prim A^p`.
    pub hr: Vec<Signature>,
    pub hr_holds: Vec<bool>,
    pub primitive_dims: Vec<usize>,
    /// Inertia of the Hodge–Riemann form on all of `A^p`.
    pub full_hr: Vec<Signature>,
    /// `dim A^p = Σ_i dim Prim A^{p−i}` for every `p ≤ r/2`.
    pub decomposition_consistent: bool,
    pub poincare_duality: bool,
}

impl LefschetzReport {
    pub fn holds(&self) -> bool {
        self.hl.iter().all(|&b| b) && self.hr_holds.iter().all(|&b| b) && self.decomposition_consistent && self.poincare_duality
    }
}

/// Hard Lefschetz and Hodge–Riemann in every degree `p ≤ r/2`, with the
/// primitive decomposition dimensions.
pub fn lefschetz_check(ring: &GradedChowRing, l: &ChowElement) -> Result<LefschetzReport> {
    let r = ring.top_degree();
    let dims = ring.dims();
    let mut report = LefschetzReport {
        top_degree: r,
        vacuous: r == 0,
        dims: dims.clone(),
        hl: Vec::new(),
        hr: Vec::new(),
        hr_holds: Vec::new(),
        primitive_dims: Vec::new(),
        full_hr: Vec::new(),
        decomposition_consistent: true,
        poincare_duality: (0..=r).all(|p| dims[p] == dims[r - p]),
    };
    for p in 0..=r / 2 {
        report.hl.push(ring.check_hard_lefschetz(l, p)?.is_iso);
        let hr = ring.check_hodge_riemann(l, p)?;
        report.hr.push(hr.signature);
        report.hr_holds.push(hr.holds);
        report.primitive_dims.push(hr.primitive_dim);
        report.full_hr.push(hr.full_signature);
    }
    report.decomposition_consistent = (0..=r / 2).all(|p| dims[p] == report.primitive_dims[..=p].iter().sum::<usize>());
    Ok(report)
}

/// The default ample class, or the zero class of degree one when `r = 0`.
pub fn default_lefschetz_class(ring: &GradedChowRing) -> ChowElement {
    ring.ample_default().unwrap_or_else(|_| ring.zero(1))
}

/// Expected inertia of the Hodge–Riemann form on all of `A^p` when the
/// Kähler package holds: `(Σ_{i even} prim_{p−i}, 0, Σ_{i odd} prim_{p−i})`.
pub fn expected_full_signature(primitive_dims: &[usize], p: usize) -> Signature {
    let (mut plus, mut minus) = (0, 0);
    for i in 0..=p {
        if i % 2 == 0 {
            plus += primitive_dims[p - i];
        } else {
            minus += primitive_dims[p - i];
        }
    }
    Signature::new(plus, 0, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::matroid::Matroid;

    fn interval() -> CochainComplexQ {
        CochainComplexQ::new(vec![2, 1], vec![QMatrix::from_i64_rows(&[&[1, -1]])]).unwrap()
    }

    #[test]
    fn interval_identity_metric() {
        let mc = MetrizedComplex::identity(interval());
        assert_eq!(mc.codifferential(1).unwrap(), QMatrix::from_i64_rows(&[&[1], &[-1]]));
        assert_eq!(mc.laplacian(0).unwrap(), QMatrix::from_i64_rows(&[&[1, -1], &[-1, 1]]));
        assert_eq!(mc.laplacian(1).unwrap(), QMatrix::from_i64_rows(&[&[2]]));
        assert_eq!(mc.harmonic_space(0).unwrap().cols(), 1);
        assert_eq!(mc.harmonic_space(1).unwrap().cols(), 0);
        let rep = mc.verify_hodge_isomorphism().unwrap();
        assert!(rep.holds);
        assert_eq!(rep.degrees.iter().map(|d| d.harmonic_dim).collect::<Vec<_>>(), vec![1, 0]);
        assert_eq!(mc.codifferential(2).unwrap_err(), Error::DegreeOutOfRange(2));
    }

    #[test]
    fn zero_complex() {
        let c = CochainComplexQ::new(vec![2, 3], vec![QMatrix::zeros(3, 2)]).unwrap();
        let mc = MetrizedComplex::seeded(c, 7);
        for q in 0..2 {
            assert!(mc.laplacian(q).unwrap().is_zero());
            assert_eq!(mc.harmonic_space(q).unwrap().cols(), mc.complex().dims()[q]);
        }
    }

    #[test]
    fn decompositions() {
        let mc = MetrizedComplex::seeded(interval(), 3);
        let exact = mc.complex().d(0).mul_vec(&[q(0), q(0)]);
        assert!(is_zero_vec(&exact));
        let omega = mc.complex().d(0).mul_vec(&[q(2), q(-1)]);
        let dec = mc.hodge_decompose(1, &omega).unwrap();
        assert_eq!(dec.exact, omega);
        assert!(is_zero_vec(&dec.harmonic) && is_zero_vec(&dec.coexact));
        let dec = mc.hodge_decompose(0, &[q(3), q(5)]).unwrap();
        assert!(dec.verify(&mc).unwrap());
        let h = mc.harmonic_space(0).unwrap().column(0);
        let dec = mc.hodge_decompose(0, &h).unwrap();
        assert_eq!(dec.harmonic, h);
    }

    #[test]
    fn non_spd_gram_rejected() {
        let bad = vec![QMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]), QMatrix::identity(1)];
        assert_eq!(MetrizedComplex::new(interval(), bad).unwrap_err(), Error::NotPositiveDefinite(0));
    }

    #[test]
    fn sign_convention_on_the_diagonal() {
        for p in 0..12 {
            assert_eq!(hodge_riemann_sign(p), if p % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(hodge_riemann_phase(1, 0), 1);
        assert_eq!(hodge_riemann_phase(2, 1), 3);
    }

    #[test]
    fn lefschetz_reports() {
        let ring = GradedChowRing::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        let rep = lefschetz_check(&ring, &default_lefschetz_class(&ring)).unwrap();
        assert_eq!(rep.hl, vec![true]);
        assert_eq!(rep.hr, vec![Signature::new(1, 0, 0)]);
        assert!(rep.holds());
        let ring = GradedChowRing::build(&Matroid::uniform(1, 2).unwrap()).unwrap();
        let rep = lefschetz_check(&ring, &default_lefschetz_class(&ring)).unwrap();
        assert!(rep.vacuous && rep.holds());
    }
}
