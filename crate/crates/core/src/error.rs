use thiserror::Error;

/// Errors raised by the wave solvers and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate substrate (k1 = {k1}, k2 = {k2}): both stiffnesses must be positive; use limit_case for k2 -> 0 or k2 -> inf")]
    DegenerateSubstrate { k1: f64, k2: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular point of the dispersion relation at a = {a}")]
    SingularPoint { a: f64 },

    #[error("no root of the dispersion relation below a = {a_max}")]
    NoRootInRange { a_max: f64 },

    #[error("no root with branch index {branch} (only {available} found)")]
    NoRoot { branch: usize, available: usize },

    #[error("inadmissible load sign: p = {p} at alpha = {alpha} (alpha_cr = {alpha_cr})")]
    InadmissibleLoadSign { p: f64, alpha: f64, alpha_cr: f64 },

    #[error("critical alpha: {alpha} is within tolerance of alpha_cr = {alpha_cr}")]
    CriticalAlpha { alpha: f64, alpha_cr: f64 },

    #[error("unstable configuration: {0}")]
    UnstableConfig(String),

    #[error("instability detected at t = {t}: max |w| = {max_abs}")]
    InstabilityDetected { t: f64, max_abs: f64 },

    #[error("insufficient duration: need t >= {needed}, series ends at {available}")]
    InsufficientDuration { needed: f64, available: f64 },

    #[error("too few samples: {got} < {needed}")]
    TooFewSamples { got: usize, needed: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
