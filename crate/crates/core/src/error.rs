use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix of dimension {0} is not supported (only 2 and 4)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("invalid subsystem index {0}; expected 1 (Alice) or 2 (Bob)")]
    Subsystem(usize),

    #[error("density matrix has trace {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("density matrix has negative eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Bell index {0} is not in 1..=4")]
    BellIndex(usize),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: String,
        value: f64,
        range: String,
    },

    #[error("no Kraus operators given")]
    EmptyKraus,

    #[error("{0} Kraus operators exceed the limit of 8")]
    TooManyKraus(usize),

    #[error("completeness violated: max |sum K^dag K - I| = {residual:e}")]
    Completeness { residual: f64 },

    #[error("map is not completely positive: Choi matrix has eigenvalue {min_eigenvalue:e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("mixing matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("unknown channel family `{0}`")]
    UnknownFamily(String),

    #[error("family `{family}` has no parameter `{param}`")]
    UnknownParam { family: String, param: String },

    #[error("family `{family}` requires parameter `{param}`")]
    MissingParam { family: String, param: String },

    #[error("predicate `{predicate}` is {value} at both ends of [{lo}, {hi}]")]
    NoBracket {
        predicate: String,
        value: bool,
        lo: f64,
        hi: f64,
    },

    #[error("invalid spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn out_of_range(name: &str, value: f64, range: &str) -> Self {
        Error::OutOfRange {
            name: name.to_string(),
            value,
            range: range.to_string(),
        }
    }

    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OutOfRange { .. }
            | Error::UnknownFamily(_)
            | Error::UnknownParam { .. }
            | Error::MissingParam { .. }
            | Error::NoBracket { .. }
            | Error::Spec(_) => 3,
            _ => 2,
        }
    }
}
