//! Physical constants (CODATA 2018) and the linewidth-to-dipole conversion.

use crate::{Error, Result};

/// Fundamental constants used throughout the crate.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum (m/s).
    pub c: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Atomic dipole unit e*a0 (C m).
    pub e_a0: f64,
}

/// CODATA 2018 values, frozen so golden files stay stable.
pub const CODATA: PhysicalConstants = PhysicalConstants {
    c: 299_792_458.0,
    hbar: 1.054_571_817e-34,
    eps0: 8.854_187_8128e-12,
    // e * a0 = 1.602176634e-19 C * 5.29177210903e-11 m
    e_a0: 1.602_176_634e-19 * 5.291_772_109_03e-11,
};

/// Transition dipole matrix element from the atomic linewidth:
/// mu_eg = sqrt(3 pi eps0 hbar Gamma c^3 / omega^3 * R_br * W^2)
/// with omega = 2 pi c / lambda.
///
/// `gamma_fwhm` is the FWHM linewidth Gamma in rad/s, `branching_ratio`
/// the decay fraction into the coupled ground manifold, and
/// `dipole_overlap` the per-ground-state reduction factor W (including
/// any polarization-alignment projection). Returns the dipole in C m.
pub fn dipole_from_linewidth(
    wavelength: f64,
    gamma_fwhm: f64,
    branching_ratio: f64,
    dipole_overlap: f64,
) -> Result<f64> {
    if !(wavelength > 0.0) || !(gamma_fwhm > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength and linewidth must be positive (got {wavelength:e}, {gamma_fwhm:e})"
        )));
    }
    if !(branching_ratio > 0.0 && branching_ratio <= 1.0) {
        return Err(Error::Domain(format!(
            "branching ratio must lie in (0, 1] (got {branching_ratio})"
        )));
    }
    if !(0.0..=1.0).contains(&dipole_overlap) {
        return Err(Error::Domain(format!(
            "dipole overlap must lie in [0, 1] (got {dipole_overlap})"
        )));
    }
    let k = CODATA;
    let omega = 2.0 * std::f64::consts::PI * k.c / wavelength;
    let mu_sq = 3.0 * std::f64::consts::PI * k.eps0 * k.hbar * gamma_fwhm * k.c.powi(3)
        / omega.powi(3)
        * branching_ratio
        * dipole_overlap
        * dipole_overlap;
    Ok(mu_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_positive() {
        assert!(CODATA.c > 0.0 && CODATA.hbar > 0.0 && CODATA.eps0 > 0.0 && CODATA.e_a0 > 0.0);
    }

    #[test]
    fn dipole_493nm_full_strength() {
        // 493 nm, Gamma = 2pi*19.9 MHz, R_br = 0.735, W = 1 -> about 2.34 e*a0
        let mu = dipole_from_linewidth(493e-9, 2.0 * std::f64::consts::PI * 19.9e6, 0.735, 1.0)
            .unwrap();
        let mu_ea0 = mu / CODATA.e_a0;
        assert!((mu_ea0 - 2.34).abs() / 2.34 < 0.01, "mu = {mu_ea0} e*a0");
    }

    #[test]
    fn dipole_455nm_full_strength() {
        let mu = dipole_from_linewidth(455e-9, 2.0 * std::f64::consts::PI * 25.3e6, 0.74, 1.0)
            .unwrap();
        let mu_ea0 = mu / CODATA.e_a0;
        assert!((mu_ea0 - 2.343).abs() / 2.343 < 0.01, "mu = {mu_ea0} e*a0");
    }

    #[test]
    fn forbidden_transition_is_zero() {
        let mu = dipole_from_linewidth(493e-9, 1e8, 0.7, 0.0).unwrap();
        assert_eq!(mu, 0.0);
    }

    #[test]
    fn monotone_in_linewidth_branching_overlap_wavelength() {
        let base = dipole_from_linewidth(493e-9, 1e8, 0.5, 0.5).unwrap();
        assert!(dipole_from_linewidth(493e-9, 2e8, 0.5, 0.5).unwrap() > base);
        assert!(dipole_from_linewidth(493e-9, 1e8, 0.9, 0.5).unwrap() > base);
        assert!(dipole_from_linewidth(493e-9, 1e8, 0.5, 0.9).unwrap() > base);
        assert!(dipole_from_linewidth(600e-9, 1e8, 0.5, 0.5).unwrap() > base);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(dipole_from_linewidth(-1.0, 1e8, 0.5, 0.5).is_err());
        assert!(dipole_from_linewidth(493e-9, 0.0, 0.5, 0.5).is_err());
        assert!(dipole_from_linewidth(493e-9, 1e8, 1.5, 0.5).is_err());
        assert!(dipole_from_linewidth(493e-9, 1e8, 0.5, 1.5).is_err());
    }
}
