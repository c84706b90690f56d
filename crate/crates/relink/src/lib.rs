//! Design-space engine for cavity-mediated remote-entanglement links.
//!
//! The crate models trapped-ion communication qubits coupled to small
//! plano-concave optical cavities and compares three heralded
//! remote-entanglement protocols (two-photon type-II, dipole-induced
//! transparency, controlled phase-flip) under shared mirror-fabrication
//! constraints. Analytic cavity-QED quantities are verified against an
//! independent time-domain integrator in [`oracle`].
//!
//! All rates (g, kappa, gamma, Gamma) are angular frequencies in rad/s;
//! lengths are meters; times are seconds. The CLI layer converts to and
//! from MHz/2pi and micrometers for readability.

pub mod constants;
pub mod constructions;
pub mod cqed;
mod error;
pub mod geometry;
pub mod oracle;
pub mod protocols;
pub mod rates;
pub mod scattering;
pub mod sweep;
pub mod transitions;

pub use error::{Error, Result};

/// Crate version string embedded in CSV metadata headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
