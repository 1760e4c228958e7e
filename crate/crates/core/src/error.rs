use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // matroids
    #[error("matroid has no bases")]
    EmptyBases,
    #[error("bases have unequal sizes ({expected} and {found})")]
    UnequalBasisSize { expected: usize, found: usize },
    #[error("basis exchange fails for bases {b1:?}, {b2:?} removing {x}")]
    ExchangeAxiomViolated { b1: Vec<usize>, b2: Vec<usize>, x: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    // Chow rings
    #[error("operation requires a loopless matroid")]
    LooplessRequired,
    #[error("operation requires a matroid of positive rank")]
    RankZero,
    #[error("product of degrees {left} and {right} exceeds top degree {top}")]
    DegreeOverflow { left: usize, right: usize, top: usize },
    #[error("expected an element of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("bad degree: {0}")]
    BadDegree(String),

    // polyhedral complexes
    #[error("cell {cell} is missing its face (vertices {vertices:?}, rays {rays:?})")]
    MissingFace { cell: usize, vertices: Vec<usize>, rays: Vec<usize> },
    #[error("cell {cell}: declared dimension {declared}, generators give {actual}")]
    DimensionMismatch { cell: usize, declared: usize, actual: usize },
    #[error("ray {ray} is not a primitive nonzero integer vector")]
    NonPrimitiveRay { ray: usize },
    #[error("maximal cell {cell} has zero or missing weight")]
    ZeroWeight { cell: usize },
    #[error("complex is not pure-dimensional")]
    NotPure,
    #[error("cell {q} is not a facet of cell {p}")]
    NotAFacet { q: usize, p: usize },
    #[error("cell {0} not found")]
    CellNotFound(usize),
    #[error("complex is not a fan (single vertex at the origin)")]
    NotAFan,
    #[error("complex is not balanced at cell {cell}")]
    NotBalanced { cell: usize },
    #[error("cells {a} and {b} intersect outside their common face")]
    ImproperIntersection { a: usize, b: usize },
    #[error("cell {cell} appears twice")]
    DuplicateCell { cell: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    // cohomology and Hodge theory
    #[error("complex has unbounded cells; compactify it first")]
    UnboundedInput,
    #[error("degree {0} is out of range")]
    DegreeOutOfRange(usize),
    #[error("Gram matrix in degree {0} is not symmetric positive definite")]
    NotPositiveDefinite(usize),
    #[error("d∘d is nonzero starting in degree {0}")]
    NotACochainComplex(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("parse error: {0}")]
    Parse(String),
}
