use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("pole: {0}")]
    Pole(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("smallness fails on subset {subset:?}: sum of m_ij is {sum}, needs > {bound}")]
    Smallness {
        subset: Vec<usize>,
        sum: String,
        bound: i64,
    },

    #[error(
        "series diverges: shell magnitudes grow (last shell {shell}, magnitude {magnitude:e})"
    )]
    Diverged { shell: usize, magnitude: f64 },

    #[error("shell cap {cap} reached without stabilization (value {value}, error estimate {estimate:e})")]
    ShellCap {
        cap: usize,
        value: Complex64,
        estimate: f64,
    },

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("size limit: {0}")]
    SizeLimit(String),

    #[error("rank decision ill-conditioned: singular value {value:e} within a decade of threshold {threshold:e}")]
    IllConditioned { value: f64, threshold: f64 },

    #[error("n = {n} exceeds the permutation enumeration cap {cap}")]
    FactorialLimit { n: usize, cap: usize },

    #[error("exponent {0} leaves the Laurent window")]
    WindowOverflow(String),

    #[error("not convergent: {0}")]
    NonConvergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
