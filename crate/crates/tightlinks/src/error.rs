use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound} > tolerance {tolerance}")]
    QuadratureDidNotConverge {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    #[error("integrand returned a non-finite value at {point}")]
    NonFiniteSample { point: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("Newton iteration did not converge after {iterations} steps: residual {residual} at {last:?}")]
    NewtonDidNotConverge {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("singular Jacobian at {at:?}")]
    SingularJacobian { at: Vec<f64> },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("nonnegative least squares did not terminate after {iterations} pivot steps")]
    NnlsDidNotTerminate { iterations: usize },

    #[error("parameter out of domain: {context}")]
    Domain { context: String },

    #[error("invalid geometry: {context}")]
    InvalidGeometry { context: String },

    #[error("piece join mismatch at {join}: gap {gap}")]
    JoinMismatch { join: char, gap: f64 },

    #[error("degenerate thickness: distinct components touch or cross")]
    DegenerateThickness,

    #[error("malformed link description: {context}")]
    MalformedLink { context: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(context: impl Into<String>) -> Self {
        Error::Domain { context: context.into() }
    }

    pub fn geometry(context: impl Into<String>) -> Self {
        Error::InvalidGeometry { context: context.into() }
    }
}
