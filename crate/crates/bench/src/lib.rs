//! Shared fixtures for the benchmarks.

use tropkit::{bergman_fan, build_cochain_complex, CochainComplexQ, Matroid, TangentCellComplex};

/// The graphic matroid of the complete graph on four vertices.
pub fn k4() -> Matroid {
    Matroid::graphic(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Canonical compactification of the Bergman fan of `m`, as a tangent complex.
pub fn compactified(m: &Matroid) -> TangentCellComplex {
    let fan = bergman_fan(m).unwrap().validate().unwrap();
    TangentCellComplex::from_compactified(&fan.canonical_compactification().unwrap())
}

/// Cochains with coefficients in the `p`-th multi-tangent space of `U_{r,n}`, compactified.
pub fn uniform_cochains(r: usize, n: usize, p: usize) -> CochainComplexQ {
    build_cochain_complex(&compactified(&Matroid::uniform(r, n).unwrap()), p).unwrap().complex
}
