use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of the gamma function at z = {0}")]
    Pole(Complex64),

    #[error("gamma({0}) exceeds the representable range; use the log-gamma function")]
    Overflow(Complex64),

    #[error("parameter b = {0} is a non-positive integer or otherwise unsupported")]
    ParameterPole(Complex64),

    #[error("series for {function} did not converge after {terms} terms")]
    Convergence { function: &'static str, terms: usize },

    #[error("argument z = {0} lies on the branch cut of the principal branch")]
    Branch(Complex64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("root finder hit the iteration cap ({iterations}) near {best} (residual {residual:e})")]
    MaxIterations {
        iterations: usize,
        best: Complex64,
        residual: f64,
    },

    #[error("target function cannot be evaluated at the seed {0}")]
    Domain(Complex64),

    #[error("branch {branch} lost at parameter {parameter} (last root {last})")]
    LostBranch {
        branch: usize,
        parameter: f64,
        last: Complex64,
    },

    #[error("gap metric is monotone over beta in [{lo}, {hi}]; no avoided crossing")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("energy {energy} is not an eigenvalue (residual {residual:e})")]
    NonEigenvalue { energy: Complex64, residual: f64 },

    #[error("coefficient denominator vanishes at E = {0} (resonance pole)")]
    DegenerateWell(f64),

    #[error("kappa = 0; use the zero-energy scattering length")]
    ZeroKappa,

    #[error("scattering length diverges at alpha = {alpha} (bracket [{lo}, {hi}])")]
    ResonancePole { alpha: f64, lo: f64, hi: f64 },

    #[error("wavefunction has a node at the matching radius")]
    NodeAtBoundary,

    #[error("eigenvalue {0} has positive imaginary part (gain)")]
    Gain(Complex64),

    #[error("decay fit failed: {0}")]
    Fit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
