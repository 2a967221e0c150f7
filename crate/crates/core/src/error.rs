use thiserror::Error;

/// Errors raised by the harmonic-analysis, profile, solver and verifier layers.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar so
/// that the error type stays independent of it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({x}, {y}) is not strictly inside the strip |y| < {half_width}")]
    OutsideStrip { x: f64, y: f64, half_width: f64 },

    #[error("argument {re}{im:+}i lies on or outside the unit disc")]
    OutsideDisc { re: f64, im: f64 },

    #[error("quadrature at distance {distance:e} from the boundary needs {needed} nodes (limit {limit})")]
    Resolution {
        distance: f64,
        needed: usize,
        limit: usize,
    },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("sample count {0} must be an even power of two")]
    SampleCount(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("height {y} is outside the profile domain ({lo}, {hi}]")]
    OutsideProfile { y: f64, lo: f64, hi: f64 },

    #[error("log h is singular at height {y} (h = 0)")]
    SingularLog { y: f64 },

    #[error("no uniform stream a*h(aC) = 1 on the {branch} branch (max of a*h(aC) is {peak})")]
    NoStream { branch: &'static str, peak: f64 },

    #[error("critical stream: a*h(aC) = 1 has a double root at a = {a}; both branches coincide")]
    CriticalStream { a: f64 },

    #[error("surface height leaves the admissible range at {} sample(s), first at index {}", .indices.len(), .indices.first().copied().unwrap_or(0))]
    Range { indices: Vec<usize> },

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e}) at amplitude {amplitude}")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        amplitude: f64,
        /// Surface samples of the last iterate.
        last_iterate: Vec<f64>,
    },

    #[error("near stagnation: min h(v) = {min_h:e} below clamp {clamp:e}; refine N or reduce the amplitude")]
    NearStagnation { min_h: f64, clamp: f64 },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
