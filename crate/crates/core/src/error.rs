use thiserror::Error;

/// Errors raised by the numeric and algebraic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("constraint system is inconsistent (residual {residual:.3e})")]
    InconsistentConstraints { residual: f64 },

    #[error("complex result is not in the image of the quaternion embedding (mismatch {mismatch:.3e})")]
    EmbeddingMismatch { mismatch: f64 },

    #[error("result has non-negligible imaginary part ({discarded:.3e})")]
    NonRealResult { discarded: f64 },

    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("element is not in the algebra (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("element is not homogeneous for the grading")]
    NotHomogeneous,

    #[error("no sl2-triple through the element: {0}")]
    NoTriple(String),

    #[error("grading is not short: degree {degree} is nonzero")]
    NotShortGrading { degree: i32 },

    #[error("element is not nilpotent (ratio {ratio:.3e})")]
    NotNilpotent { ratio: f64 },

    #[error("element is zero")]
    ZeroElement,

    #[error("element has mass outside block ({row}, {col})")]
    UnsupportedBlock { row: usize, col: usize },

    #[error("matrix violates the required symmetry (defect {defect:.3e})")]
    SymmetryViolation { defect: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("bilinear form is degenerate")]
    DegenerateForm,

    #[error("orbit O({a},{b}) is not Moore-Penrose; minimal characteristic Hermitian defect {hermitian_defect:.3e}")]
    NotMoorePenroseOrbit { a: usize, b: usize, hermitian_defect: f64 },

    #[error("tuple is not a complex (max composition residual {residual:.3e})")]
    NotAComplex { residual: f64 },

    #[error("element is in the wrong component of the Jordan pair")]
    WrongComponent,

    #[error("Hermitian characteristic test and positive-part criterion disagree (defect {defect:.3e}, criterion residual {criterion:.3e})")]
    CriterionDisagreement { defect: f64, criterion: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
