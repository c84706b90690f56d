//! Ba+ transition registry: wavelengths, linewidths, branching ratios, and
//! per-branch effective dipoles for each communication-qubit encoding.
//!
//! The registry ships as a TOML data file so users can add species without
//! recompiling; see `data/transitions.toml` for units.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::constants::{dipole_from_linewidth, CODATA};
use crate::{Error, Result};

const REGISTRY_TOML: &str = include_str!("../data/transitions.toml");

/// Orientation of the cavity axis relative to the quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CavityAxis {
    /// Cavity axis along the quantization (B-field) axis.
    Along,
    /// Cavity axis orthogonal to the quantization axis.
    Orthogonal,
}

/// One decay branch the cavity can couple to.
#[derive(Debug, Clone, Copy)]
pub struct TransitionBranch {
    /// Per-branch reduction factor W * (mu_hat . eps_hat), dimensionless.
    pub dipole_overlap: f64,
    /// Effective dipole mu.eps for this branch (C m).
    pub mu_eps: f64,
}

/// One row of the transition registry.
#[derive(Debug, Clone)]
pub struct AtomicTransition {
    pub label: String,
    pub isotope: String,
    /// Transition wavelength (m).
    pub wavelength: f64,
    /// FWHM linewidth Gamma (rad/s).
    pub gamma_fwhm: f64,
    /// Branching ratio from the excited state into the coupled manifold.
    pub branching_ratio: f64,
    /// Decay branches; the first is the receiver-coupled branch.
    pub branches: Vec<TransitionBranch>,
    /// Root-sum-square dipole over branches (C m), used for emitters.
    pub mu_eff: f64,
    /// Hyperfine qubit splitting Delta_HF (rad/s), frequency encoding only.
    pub hf_splitting: Option<f64>,
    pub cavity_axis: CavityAxis,
    pub note: Option<String>,
}

impl AtomicTransition {
    /// Half linewidth gamma = Gamma/2 (rad/s).
    pub fn gamma_half(&self) -> f64 {
        0.5 * self.gamma_fwhm
    }

    /// Carrier angular frequency omega = 2 pi c / lambda (rad/s).
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * CODATA.c / self.wavelength
    }

    /// Dipole of the branch a single-frequency receiver couples to (C m).
    pub fn coupled_branch_mu(&self) -> f64 {
        self.branches[0].mu_eps
    }

    /// Check internal consistency: mu_eff must match the root-sum-square of
    /// the branch dipoles, and each branch dipole must agree with the
    /// linewidth formula applied to its overlap factor, within 1%.
    pub fn validate(&self) -> Result<()> {
        if !(self.branching_ratio > 0.0 && self.branching_ratio <= 1.0) {
            return Err(Error::Domain(format!(
                "{}: branching ratio {} outside (0, 1]",
                self.label, self.branching_ratio
            )));
        }
        if !(self.gamma_fwhm > 0.0) {
            return Err(Error::Domain(format!("{}: non-positive linewidth", self.label)));
        }
        let rss: f64 = self
            .branches
            .iter()
            .map(|b| b.mu_eps * b.mu_eps)
            .sum::<f64>()
            .sqrt();
        if (rss - self.mu_eff).abs() / self.mu_eff > 0.01 {
            return Err(Error::Domain(format!(
                "{}: mu_eff {:.4e} inconsistent with branch RSS {:.4e}",
                self.label, self.mu_eff, rss
            )));
        }
        for (i, b) in self.branches.iter().enumerate() {
            let mu = dipole_from_linewidth(
                self.wavelength,
                self.gamma_fwhm,
                self.branching_ratio,
                b.dipole_overlap,
            )?;
            if (mu - b.mu_eps).abs() / b.mu_eps > 0.01 {
                return Err(Error::Domain(format!(
                    "{}: branch {i} dipole {:.4e} C m disagrees with linewidth formula {:.4e} C m",
                    self.label, b.mu_eps, mu
                )));
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    transition: Vec<TransitionRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionRecord {
    label: String,
    isotope: String,
    wavelength_nm: f64,
    gamma_fwhm_mhz: f64,
    branching_ratio: f64,
    hf_splitting_ghz: Option<f64>,
    cavity_axis: CavityAxis,
    mu_eff_ea0: f64,
    note: Option<String>,
    branches: Vec<BranchRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchRecord {
    dipole_overlap: f64,
    mu_eps_ea0: f64,
}

impl TransitionRecord {
    fn into_transition(self) -> AtomicTransition {
        let two_pi = 2.0 * std::f64::consts::PI;
        AtomicTransition {
            label: self.label,
            isotope: self.isotope,
            wavelength: self.wavelength_nm * 1e-9,
            gamma_fwhm: two_pi * self.gamma_fwhm_mhz * 1e6,
            branching_ratio: self.branching_ratio,
            branches: self
                .branches
                .into_iter()
                .map(|b| TransitionBranch {
                    dipole_overlap: b.dipole_overlap,
                    mu_eps: b.mu_eps_ea0 * CODATA.e_a0,
                })
                .collect(),
            mu_eff: self.mu_eff_ea0 * CODATA.e_a0,
            hf_splitting: self.hf_splitting_ghz.map(|f| two_pi * f * 1e9),
            cavity_axis: self.cavity_axis,
            note: self.note,
        }
    }
}

fn parse_registry(text: &str) -> Result<Vec<AtomicTransition>> {
    let file: RegistryFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("transition registry: {e}")))?;
    let rows: Vec<AtomicTransition> =
        file.transition.into_iter().map(|r| r.into_transition()).collect();
    for row in &rows {
        row.validate()?;
    }
    Ok(rows)
}

/// The built-in registry (six Ba+ rows). Parsed once, immutable afterwards.
pub fn registry() -> &'static [AtomicTransition] {
    static REG: OnceLock<Vec<AtomicTransition>> = OnceLock::new();
    REG.get_or_init(|| parse_registry(REGISTRY_TOML).expect("built-in registry is valid"))
}

/// Look up a registry row by label (case-insensitive).
pub fn lookup(label: &str) -> Option<&'static AtomicTransition> {
    registry().iter().find(|t| t.label.eq_ignore_ascii_case(label))
}
