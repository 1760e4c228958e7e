//! Exact computations for matroids, their Chow rings, and tropical cell complexes.
//!
//! Everything is carried out over ℚ or ℤ with arbitrary precision; there is no
//! floating point anywhere in the decision procedures.
//!
//! - [`matroid`]: matroids from bases, lattices of flats, characteristic
//!   polynomials and Whitney numbers.
//! - [`chow`]: graded Chow rings with hard Lefschetz and Hodge–Riemann checks.
//! - [`complex`]: weighted simplicial polyhedral complexes, balancing, star fans,
//!   Bergman fans and their canonical compactification.
//! - [`cohomology`]: cellular `(p,q)`-cohomology with multi-tangent coefficients.
//! - [`hodge`]: metrized cochain complexes, Laplacians and Hodge decompositions.
//! - [`formats`] and [`report`]: JSON schemas and check reports.

pub mod chow;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod formats;
pub mod hodge;
pub mod linalg;
pub mod matroid;
pub mod report;

pub use chow::{ChowElement, GradedChowRing};
pub use cohomology::{build_cochain_complex, cohomology_dims, CochainComplexQ, TangentCellComplex};
pub use complex::{bergman_fan, Cell, CompactifiedFan, ValidatedComplex, WeightedComplex};
pub use error::{Error, Result};
pub use hodge::{lefschetz_check, MetrizedComplex};
pub use linalg::{QMatrix, Signature, Q};
pub use matroid::Matroid;
pub use report::{CheckResult, Report, Verdict};
