//! Plano-concave cavity geometry: Gaussian-mode waists, effective mode
//! volume, resonance combs, and loss -> finesse -> kappa conversions.

use std::f64::consts::PI;

use crate::constants::CODATA;
use crate::{Error, Result};

/// A single plano-concave cavity with an ion trapped a height `ion_height`
/// above the flat mirror.
#[derive(Debug, Clone, Copy)]
pub struct CavityGeometry {
    /// Curved-mirror radius of curvature R (m).
    pub mirror_radius: f64,
    /// Mirror separation l (m).
    pub length: f64,
    /// Ion height above the flat mirror h_ion (m).
    pub ion_height: f64,
    /// Operating wavelength (m).
    pub wavelength: f64,
}

impl CavityGeometry {
    /// Stability bound 0 < l < R and ion placement 0 <= h_ion < l.
    /// (h_ion = 0 puts the ion at the waist on the flat mirror; allowed
    /// as the degenerate check case.)
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || !(self.wavelength > 0.0) {
            return Err(Error::Domain(format!(
                "length and wavelength must be positive (got {:.3e}, {:.3e})",
                self.length, self.wavelength
            )));
        }
        if self.length >= self.mirror_radius {
            return Err(Error::Unstable { length: self.length, radius: self.mirror_radius });
        }
        if !(0.0..self.length).contains(&self.ion_height) {
            return Err(Error::Domain(format!(
                "ion height {:.3e} m outside [0, length)",
                self.ion_height
            )));
        }
        Ok(())
    }
}

/// A mirror fabrication process: the constraint pair (R, bad loss) plus
/// the per-mirror transmissions chosen by the designer.
#[derive(Debug, Clone, Copy)]
pub struct MirrorProcess {
    /// Minimum achievable radius of curvature (m).
    pub mirror_radius_min: f64,
    /// Non-transmissive round-trip loss L_B (fraction).
    pub bad_loss: f64,
    /// Left-mirror transmission T_L (fraction).
    pub transmission_left: f64,
    /// Right-mirror transmission T_R (fraction).
    pub transmission_right: f64,
    /// RMS surface roughness sigma (m), if known.
    pub roughness_rms: Option<f64>,
}

impl MirrorProcess {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.bad_loss, self.transmission_left, self.transmission_right];
        if parts.iter().any(|&x| !(0.0..1.0).contains(&x)) {
            return Err(Error::Domain("losses must lie in [0, 1)".into()));
        }
        if parts.iter().sum::<f64>() >= 1.0 {
            return Err(Error::Domain("total round-trip loss must stay below 1".into()));
        }
        Ok(())
    }
}

/// Gaussian-mode profile of a plano-concave cavity.
#[derive(Debug, Clone, Copy)]
pub struct ModeProfile {
    /// Rayleigh range z_R (m).
    pub rayleigh_range: f64,
    /// Waist radius w0 at the flat mirror (m).
    pub waist: f64,
    /// Beam radius at the ion plane (m).
    pub waist_at_ion: f64,
}

/// z_R = sqrt(R l - l^2), w0 = sqrt(lambda z_R / pi),
/// w_ion = w0 sqrt(1 + (h/z_R)^2).
pub fn rayleigh_and_waists(geom: &CavityGeometry) -> Result<ModeProfile> {
    geom.validate()?;
    let z_r = (geom.mirror_radius * geom.length - geom.length * geom.length).sqrt();
    let w0 = (geom.wavelength * z_r / PI).sqrt();
    let ratio = geom.ion_height / z_r;
    let w_ion = w0 * (1.0 + ratio * ratio).sqrt();
    Ok(ModeProfile { rayleigh_range: z_r, waist: w0, waist_at_ion: w_ion })
}

/// Length l_o where z_R = h_ion: the root of l^2 - R l + h^2 = 0 with
/// l > h_ion, i.e. (R + sqrt(R^2 - 4h^2))/2. Approaches R for R >> h.
pub fn length_for_zr_equals_h(mirror_radius: f64, ion_height: f64) -> Result<f64> {
    if !(mirror_radius > 0.0) || !(ion_height > 0.0) {
        return Err(Error::Domain("radius and height must be positive".into()));
    }
    let disc = mirror_radius * mirror_radius - 4.0 * ion_height * ion_height;
    if disc < 0.0 {
        return Err(Error::NoWaistSolution { radius: mirror_radius, height: ion_height });
    }
    Ok(0.5 * (mirror_radius + disc.sqrt()))
}

/// Effective mode volume V_eff = pi w_ion^2 l / 4, accounting for the
/// enlarged beam radius at the ion plane.
pub fn effective_mode_volume(geom: &CavityGeometry) -> Result<f64> {
    let mode = rayleigh_and_waists(geom)?;
    Ok(PI * mode.waist_at_ion * mode.waist_at_ion * geom.length / 4.0)
}

/// All lengths l = m * lambda/2 (integer m) inside [l_min, l_max], ascending.
pub fn resonant_lengths(wavelength: f64, l_min: f64, l_max: f64) -> Vec<f64> {
    if !(wavelength > 0.0) || !(l_min > 0.0) || l_max < l_min {
        return Vec::new();
    }
    let half = 0.5 * wavelength;
    let m_lo = (l_min / half).ceil() as i64;
    let m_hi = (l_max / half).floor() as i64;
    (m_lo.max(1)..=m_hi).map(|m| m as f64 * half).collect()
}

/// Surface-roughness scattering loss L_s = 1 - exp[-(4 pi sigma / lambda)^2].
pub fn scattering_loss(sigma: f64, wavelength: f64) -> f64 {
    let x = 4.0 * PI * sigma / wavelength;
    -(-x * x).exp_m1()
}

/// Exact finesse from round-trip loss: F = -pi / ln sqrt(1 - L).
pub fn finesse(round_trip_loss: f64) -> Result<f64> {
    if round_trip_loss <= 0.0 {
        return Err(Error::LosslessCavity);
    }
    if round_trip_loss >= 1.0 {
        return Err(Error::Domain("round-trip loss must stay below 1".into()));
    }
    Ok(-PI / (1.0 - round_trip_loss).sqrt().ln())
}

/// kappa = pi nu_F / F with nu_F = c / 2l (Hz), giving kappa in rad/s.
pub fn kappa_from_finesse(length: f64, finesse: f64) -> f64 {
    PI * CODATA.c / (2.0 * length * finesse)
}

/// Per-channel cavity field decay rates (rad/s).
#[derive(Debug, Clone, Copy)]
pub struct ChannelKappas {
    pub total: f64,
    pub left: f64,
    pub right: f64,
    pub bad: f64,
}

/// Total kappa from the exact finesse of the summed round-trip loss,
/// apportioned across channels proportionally to their loss fractions,
/// so left + right + bad = total exactly.
pub fn kappa_from_losses(
    length: f64,
    transmission_left: f64,
    transmission_right: f64,
    bad_loss: f64,
) -> Result<ChannelKappas> {
    if !(length > 0.0) {
        return Err(Error::Domain("length must be positive".into()));
    }
    let total_loss = transmission_left + transmission_right + bad_loss;
    let kappa = kappa_from_finesse(length, finesse(total_loss)?);
    let left = kappa * transmission_left / total_loss;
    let right = kappa * transmission_right / total_loss;
    Ok(ChannelKappas { total: kappa, left, right, bad: kappa - left - right })
}

/// Frequency-qubit double-resonance predicate: the free spectral range
/// nu_F = c/2l matches Delta_HF/2pi to within the cavity linewidth.
pub fn double_resonance_ok(length: f64, hf_splitting: f64, kappa: f64) -> bool {
    let two_pi = 2.0 * PI;
    (CODATA.c / (2.0 * length) - hf_splitting / two_pi).abs() < kappa / two_pi
}
