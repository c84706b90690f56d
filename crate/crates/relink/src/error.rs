use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid numeric input to a pure function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Cavity outside the stability bound `length < mirror_radius`.
    #[error("unstable cavity: length {length:.6e} m >= mirror radius {radius:.6e} m")]
    Unstable { length: f64, radius: f64 },

    /// `length_for_zr_equals_h` has no real root.
    #[error("no real waist solution: mirror radius {radius:.6e} m <= 2 * ion height {height:.6e} m")]
    NoWaistSolution { radius: f64, height: f64 },

    /// Zero round-trip loss leaves finesse and kappa undefined.
    #[error("lossless cavity: kappa undefined at zero round-trip loss")]
    LosslessCavity,

    /// The dressed-mode denominator of Eqs. r/t vanished.
    #[error("scattering denominator vanishes at the requested detuning")]
    Singular,

    /// Both herald coefficients are zero; no detection can occur.
    #[error("no herald possible: both coefficients vanish")]
    NoHerald,

    /// Integration step policy or horizon violated.
    #[error("integration config: {0}")]
    Integration(String),

    /// A construction cannot meet its specification.
    #[error("infeasible construction: {0}")]
    Infeasible(String),

    /// Bad sweep configuration (unknown keys, bad axis, ...).
    #[error("config error: {0}")]
    Config(String),

    /// Oracle deviation exceeded the configured tolerance.
    #[error("oracle tolerance exceeded: {0}")]
    Tolerance(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
