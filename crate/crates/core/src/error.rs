use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PqcError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("structure constants not antisymmetric at (a,b,c)=({a},{b},{c})")]
    NotAntisymmetric { a: usize, b: usize, c: usize },
    #[error("Jacobi identity fails at (d,a,b,c)=({d},{a},{b},{c}): cyclic sum {value}")]
    JacobiFailure {
        d: usize,
        a: usize,
        b: usize,
        c: usize,
        value: String,
    },
    #[error("inconsistent contact data: {0}")]
    InconsistentContact(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("no Reeb solution: {0}")]
    NoReebSolution(String),
    #[error("endomorphisms violate the paraquaternion relations: {0}")]
    NotParaquaternionic(String),
    #[error("endomorphism is not skew with respect to the metric")]
    NotSkew,
    #[error("torsion recovery from the four-form needs n >= 2 (got n = 1)")]
    RejectedForN1,
    #[error("gauge transform is not in the structure group: {0}")]
    NotInStructureGroup(String),
    #[error("model failed validation: {0}")]
    ValidationFailed(String),
    #[error("horizontal curvature vanishes but the structure is not flat: {0}")]
    FlatnessInconsistent(String),
    #[error("pqc-Einstein criteria disagree: {0}")]
    EinsteinInconsistent(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for PqcError {
    fn from(e: std::io::Error) -> Self {
        PqcError::Io(e.to_string())
    }
}
