//! Input-output scattering coefficients of a two-port atom-cavity system,
//! their resonant DIT/CPF limits, and mode-mismatch corrections.

use num_complex::Complex64;

use crate::cqed::CavityRates;
use crate::{Error, Result};

/// Probe detunings from the atomic and cavity resonances (rad/s).
#[derive(Debug, Clone, Copy, Default)]
pub struct Detunings {
    /// Delta_a = omega - omega_a.
    pub delta_a: f64,
    /// Delta_c = omega - omega_c.
    pub delta_c: f64,
}

/// Reflection/transmission pair at one probe frequency.
#[derive(Debug, Clone, Copy)]
pub struct ScatterCoeffs {
    pub r: Complex64,
    pub t: Complex64,
}

fn denominator(rates: &CavityRates, det: &Detunings) -> Result<Complex64> {
    let d = (Complex64::new(rates.kappa(), det.delta_c))
        * (Complex64::new(rates.gamma, det.delta_a))
        + rates.g * rates.g;
    if d.norm() == 0.0 {
        return Err(Error::Singular);
    }
    Ok(d)
}

/// r = 1 - 2 kappa_L (i Delta_a + gamma) / [(i Delta_c + kappa)(i Delta_a + gamma) + g^2].
pub fn reflection_coeff(rates: &CavityRates, det: &Detunings) -> Result<Complex64> {
    let d = denominator(rates, det)?;
    Ok(1.0 - 2.0 * rates.kappa_left * Complex64::new(rates.gamma, det.delta_a) / d)
}

/// t = 2 sqrt(kappa_L kappa_R) (i Delta_a + gamma) / [same denominator].
/// The square root is taken positive real, fixing the global phase of t.
pub fn transmission_coeff(rates: &CavityRates, det: &Detunings) -> Result<Complex64> {
    let d = denominator(rates, det)?;
    Ok(2.0 * (rates.kappa_left * rates.kappa_right).sqrt()
        * Complex64::new(rates.gamma, det.delta_a)
        / d)
}

/// Both coefficients at once.
pub fn scatter_coeffs(rates: &CavityRates, det: &Detunings) -> Result<ScatterCoeffs> {
    Ok(ScatterCoeffs {
        r: reflection_coeff(rates, det)?,
        t: transmission_coeff(rates, det)?,
    })
}

/// Resonant transmission of a balanced (kappa_L = kappa_R) cavity:
/// t_i = (2 kappa_L / kappa) / (1 + C_i) with C_u = 0, C_c = C.
/// Computed from the stated kappa_L even if the caller's cavity is not
/// balanced; balance is the caller's contract.
pub fn dit_transmission(rates: &CavityRates, coupled: bool) -> Complex64 {
    let c = if coupled { rates.cooperativity() } else { 0.0 };
    Complex64::new(2.0 * rates.kappa_left / rates.kappa() / (1.0 + c), 0.0)
}

/// Resonant reflection of an imbalanced (kappa_R ~ 0) cavity:
/// r_i = 1 - (2 kappa_L / kappa) / (1 + C_i).
pub fn cpf_reflection(rates: &CavityRates, coupled: bool) -> Complex64 {
    let c = if coupled { rates.cooperativity() } else { 0.0 };
    Complex64::new(1.0 - 2.0 * rates.kappa_left / rates.kappa() / (1.0 + c), 0.0)
}

/// Spatial mode mismatch applied at intensity level: a fraction xi of the
/// incident photon enters the cavity mode, the rest promptly reflects.
/// Returns (|r~|^2, |t~|^2).
pub fn apply_mode_mismatch(coeffs: &ScatterCoeffs, xi: f64) -> (f64, f64) {
    let r2 = coeffs.r.norm_sqr();
    let t2 = coeffs.t.norm_sqr();
    ((1.0 - xi) + xi * r2, xi * t2)
}

/// Coherent prompt-reflection mixing: r~ = w1 r_u + w2 with r_p = 1.
/// Requires w1^2 + w2^2 = 1.
pub fn mixed_reflectance(r_u: Complex64, w1: f64, w2: f64) -> Result<Complex64> {
    if (w1 * w1 + w2 * w2 - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "mixing weights must satisfy w1^2 + w2^2 = 1 (got {w1}, {w2})"
        )));
    }
    Ok(w1 * r_u + w2)
}
