use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped by the module that produces them; the CLI maps
/// them onto exit codes (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // qfield
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(String),
    #[error("sqrt({0}) is rational, so the surd is a rational number in disguise")]
    RationalDisguised(String),
    #[error("surds live in different fields: Q(sqrt({0})) vs Q(sqrt({1}))")]
    FieldMismatch(String, String),
    #[error("expected an irrational quadratic number, got the rational {0}")]
    RationalInput(String),
    #[error("continued fraction has an empty period")]
    NotQuadratic,
    #[error("continued fraction term {0} is not a positive integer")]
    BadTerm(String),

    // forms
    #[error("the conic is singular (discriminant 0)")]
    SingularConic,
    #[error("point {0} does not lie on the conic")]
    NotOnConic(String),
    #[error("parameters ({0}, {1}) are not coprime")]
    NotPrimitiveInput(String, String),
    #[error("no rational point of height <= {0} found")]
    NotFound(i64),
    #[error("conic is anisotropic: {0}")]
    Anisotropic(String),

    // quaternion
    #[error("product g{0}*g{1} leaves the integral span of the generators")]
    NotClosed(usize, usize),
    #[error("generators do not span a rank-4 lattice")]
    RankDeficient,

    // lattices
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("invariant-lattice structure violation: {0}")]
    StructureViolation(String),

    // spectra
    #[error("binary form ({0}) is not indefinite")]
    NotIndefinite(String),
    #[error("binary form ({0}) has square discriminant and represents zero: approximability is Infinite")]
    IsotropicForm(String),

    // oracle
    #[error("point {0} lies on the polar line of Sigma")]
    TangencyHit(String),
    #[error("no conic points of height <= {0}")]
    NoPoints(i64),

    // parsing / CLI
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("invalid argument: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Anisotropic(_) | Error::NotFound(_) | Error::NoPoints(_) => 3,
            Error::StructureViolation(_) | Error::NotClosed(..) | Error::RankDeficient => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
