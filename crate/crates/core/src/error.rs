use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polyhedron is unbounded in coordinate {coordinate}")]
    Unbounded { coordinate: usize },
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("polygon is not convex at vertex {vertex}")]
    NonConvex { vertex: usize },
    #[error("cone rays are linearly dependent")]
    DependentRays,
    #[error("series term cannot be expanded over the box: {0}")]
    NotExpandable(String),

    #[error("interpolation system is singular ({points} points, {monomials} monomials, rank {rank})")]
    SingularInterpolation {
        points: usize,
        monomials: usize,
        rank: usize,
    },
    #[error("interpolation points are inconsistent with a polynomial of degree <= {degree}")]
    InconsistentInterpolation { degree: u32 },
    #[error("validation mismatch at {witness:?}: expected {expected}, fitted {fitted}")]
    ValidationMismatch {
        witness: Vec<i64>,
        expected: String,
        fitted: String,
    },

    #[error("vertex count {count} exceeds bound {bound}")]
    VertexBound { count: usize, bound: usize },
    #[error("generator count {count} exceeds bound {bound}")]
    GeneratorBound { count: usize, bound: usize },
    #[error("lcm lattice size exceeds bound {bound}")]
    LcmLatticeBound { bound: usize },

    #[error("ideal is not contained in the reference ideal: generator {witness:?}")]
    NotSubideal { witness: Vec<u32> },
    #[error("filtration containment fails at t = {t}: generator {witness:?} of I*J_t is not in J_(t+1)")]
    ContainmentViolation { t: usize, witness: Vec<u32> },

    #[error("no admissible linear boundary for {side} support: {detail}")]
    NoAdmissibleSlope { side: &'static str, detail: String },
    #[error("t = {t} is below the validity threshold t0 = {t0}")]
    BelowThreshold { t: i64, t0: i64 },
    #[error("region polynomial evaluates to non-integral or negative value {value} at (mu, t) = ({mu}, {t})")]
    NonIntegral { value: String, mu: i64, t: i64 },
    #[error("Betti family lacks data for t = {0}")]
    MissingTerm(i64),
}

impl Error {
    /// Stable machine-readable code used in error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::InvalidInput(_) => "invalid_input",
            Error::Unbounded { .. } => "unbounded",
            Error::DegeneratePolygon(_) => "degenerate_polygon",
            Error::NonConvex { .. } => "non_convex",
            Error::DependentRays => "dependent_rays",
            Error::NotExpandable(_) => "not_expandable",
            Error::SingularInterpolation { .. } => "singular_interpolation",
            Error::InconsistentInterpolation { .. } => "inconsistent_interpolation",
            Error::ValidationMismatch { .. } => "validation_mismatch",
            Error::VertexBound { .. } => "vertex_bound",
            Error::GeneratorBound { .. } => "generator_bound",
            Error::LcmLatticeBound { .. } => "lcm_lattice_bound",
            Error::NotSubideal { .. } => "not_subideal",
            Error::ContainmentViolation { .. } => "containment_violation",
            Error::NoAdmissibleSlope { .. } => "no_admissible_slope",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::NonIntegral { .. } => "non_integral",
            Error::MissingTerm(_) => "missing_term",
        }
    }

    /// Offending point or generator, when the error carries one.
    pub fn witness(&self) -> Option<Vec<i64>> {
        match self {
            Error::ValidationMismatch { witness, .. } => Some(witness.clone()),
            Error::NotSubideal { witness } | Error::ContainmentViolation { witness, .. } => {
                Some(witness.iter().map(|&e| e as i64).collect())
            }
            Error::NonIntegral { mu, t, .. } => Some(vec![*mu, *t]),
            Error::BelowThreshold { t, .. } => Some(vec![*t]),
            _ => None,
        }
    }
}
