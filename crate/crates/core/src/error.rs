use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("gram matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("not a Hermitian symplectic space: {0}")]
    InvalidSpace(String),

    #[error("basis is rank deficient: column {column} has relative residual {residual:.3e}")]
    RankDeficient { column: usize, residual: f64 },

    #[error("symplectic form does not vanish on the subspace (residual {residual:.3e})")]
    NotIsotropic { residual: f64 },

    #[error("subspaces belong to different Hermitian symplectic spaces")]
    SpaceMismatch,

    #[error("cannot separate the +i and -i eigenspaces of gamma: {0}")]
    EigenSplit(String),

    #[error("projection onto the +i eigenspace is singular on the subspace (smallest singular value {smallest:.3e})")]
    GraphSingular { smallest: f64 },

    #[error("rank decision is ill-conditioned: singular value {singular_value:.3e} is too close to the threshold")]
    IllConditioned { singular_value: f64 },

    #[error("eigenvalue {eigenvalue} lies at distance {distance:.3e} from -1, inside the ambiguity window")]
    EigenvalueAmbiguity {
        eigenvalue: Complex64,
        distance: f64,
    },

    #[error("{excluded} eigenvalues excluded at -1 but dim(V cap W) = {intersection}")]
    IntersectionMismatch {
        excluded: usize,
        intersection: usize,
    },

    #[error("triple index sum {sum} is not an integer")]
    NonIntegerSum { sum: f64 },

    #[error("reduction collapsed: expected dimension {expected}, found {found}")]
    RankCollapse { expected: usize, found: usize },

    #[error("log argument {value} lies on the branch cut")]
    BranchCut { value: Complex64 },

    #[error("eigenvalue computation failed")]
    Eigensolver,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("t = {t} lies outside the open arc (1/12, 5/12)")]
    OutOfArc { t: String },

    #[error("mapping torus condition fails for (phi, psi) = ({phi}, {psi})")]
    ConditionFailed { phi: String, psi: String },

    #[error("boundary maps do not compose to zero (residual {residual:.3e})")]
    NonComplex { residual: f64 },

    #[error("gluing matrix has determinant {det}, expected 1")]
    NotUnimodular { det: i64 },
}

impl Error {
    /// Variant name, stable for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "Shape",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::InvalidSpace(_) => "InvalidSpace",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NotIsotropic { .. } => "NotIsotropic",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::EigenSplit(_) => "EigenSplit",
            Error::GraphSingular { .. } => "GraphSingular",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::EigenvalueAmbiguity { .. } => "EigenvalueAmbiguity",
            Error::IntersectionMismatch { .. } => "IntersectionMismatch",
            Error::NonIntegerSum { .. } => "NonIntegerSum",
            Error::RankCollapse { .. } => "RankCollapse",
            Error::BranchCut { .. } => "BranchCut",
            Error::Eigensolver => "Eigensolver",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::OutOfArc { .. } => "OutOfArc",
            Error::ConditionFailed { .. } => "ConditionFailed",
            Error::NonComplex { .. } => "NonComplex",
            Error::NotUnimodular { .. } => "NotUnimodular",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
