use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at s=1")]
    PoleAtOne,

    #[error("accuracy not met: tail estimate {estimate:e} exceeds target {target:e}")]
    AccuracyNotMet { estimate: f64, target: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("chi(s) is singular at s = {re} + {im}i")]
    SingularChi { re: f64, im: f64 },

    #[error("vertical-leg certificate violated at gamma = {gamma}: |delta| = {delta} > {bound}")]
    CertificateViolation { gamma: f64, delta: f64, bound: f64 },

    #[error("not a zero: |zeta(1/2 + i{gamma})| = {modulus:e}")]
    NotAZero { gamma: f64, modulus: f64 },

    #[error("path endpoint 1/2 + i{t} is at a zero of zeta (|zeta| = {modulus:e})")]
    EndpointAtZero { t: f64, modulus: f64 },

    #[error("missed zero suspected in [{t_lo}, {t_hi}]: found {found}, counting function expects {expected}")]
    MissedZeroSuspected {
        t_lo: f64,
        t_hi: f64,
        found: usize,
        expected: i64,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ordinates not strictly increasing on line {line}: {prev} then {next}")]
    Monotonicity { line: usize, prev: f64, next: f64 },

    #[error("records do not cover index range [{k_lo}, {k_hi}]")]
    RangeNotCovered { k_lo: u64, k_hi: u64 },

    #[error("too few samples: {0} (need at least 2)")]
    TooFewSamples(usize),

    #[error("zeta vanishes on the contour (min |zeta| = {min_modulus:e})")]
    ZeroOnContour { min_modulus: f64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}
