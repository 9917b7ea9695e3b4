use thiserror::Error;



#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^62")]
    ModulusNotPrime(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("edge does not lie on the polygon boundary")]
    EdgeNotOnPolygon,
    #[error("polygon has no two-dimensional interior")]
    DegeneratePolygon,
    #[error("polynomial is not in A_lambda")]
    NotInApl,
    #[error("series is not a unit")]
    NotAUnit,
    #[error("leading coefficient valuation differs from v0(G)")]
    BadLeadingValuation,
    #[error("initial factors are not pairwise coprime")]
    NotCoprime,
    #[error("initial factors do not multiply to F(0, y)")]
    InitMismatch,
    #[error("polynomial is not monic in y")]
    NotMonic,
    #[error("divisor is not lambda-monic")]
    NotLambdaMonic,
    #[error("lambda-initial part has a repeated irreducible factor")]
    DegenerateEdge,
    #[error("precision {sigma} is below the straightness defect {defect}")]
    PrecisionTooLow { sigma: String, defect: String },
    #[error("input polynomial is degenerate: {0}")]
    DegenerateInput(String),
    #[error("polynomial is not separable in y")]
    NotSeparable,
    #[error("polynomial is not primitive in y")]
    NotPrimitive,
    #[error("psi image is not a polynomial in x^p and y^p")]
    NotInImageSpace,
    #[error("kernel basis is not a 0/1 partition")]
    NotAPartition,
    #[error("every minimal transform yields a degenerate polynomial")]
    MinimallyDegenerate,
    #[error("polynomial has a single y-stratum")]
    SingleYStratum,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
