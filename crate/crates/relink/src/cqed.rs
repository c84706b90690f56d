//! Damped Jaynes-Cummings core: coupling strength, cooperativity,
//! Purcell collection efficiency, and the emitted single-photon wavepacket.

use crate::constants::CODATA;
use crate::{Error, Result};

/// Parameter set of one damped Jaynes-Cummings system. All rates in rad/s.
#[derive(Debug, Clone, Copy)]
pub struct CavityRates {
    /// Coherent atom-cavity coupling g.
    pub g: f64,
    /// Left (collection) mirror decay rate.
    pub kappa_left: f64,
    /// Right mirror decay rate.
    pub kappa_right: f64,
    /// Non-collectable (scatter/absorption) decay rate.
    pub kappa_bad: f64,
    /// Atomic half linewidth gamma = Gamma/2.
    pub gamma: f64,
    /// Carrier angular frequency.
    pub omega: f64,
}

impl CavityRates {
    /// Total cavity field decay kappa = kappa_L + kappa_R + kappa_B.
    pub fn kappa(&self) -> f64 {
        self.kappa_left + self.kappa_right + self.kappa_bad
    }

    /// Cooperativity C = g^2 / (kappa gamma).
    pub fn cooperativity(&self) -> f64 {
        self.g * self.g / (self.kappa() * self.gamma)
    }

    /// Intrinsic cooperativity ceiling C_o = g^2 / (kappa_B gamma).
    pub fn intrinsic_cooperativity(&self) -> f64 {
        self.g * self.g / (self.kappa_bad * self.gamma)
    }

    /// Averaged-linewidth decay constant K = (kappa + gamma)/2.
    pub fn decay_k(&self) -> f64 {
        0.5 * (self.kappa() + self.gamma)
    }

    /// Signed square of the modified Rabi frequency:
    /// g'^2 = g^2 - (kappa - gamma)^2 / 4. Negative means overdamped.
    pub fn rabi_freq_sq(&self) -> f64 {
        let d = 0.5 * (self.kappa() - self.gamma);
        self.g * self.g - d * d
    }
}

/// Maximum coupling g0 = (mu/hbar) sqrt(hbar omega / (2 eps0 V_eff)).
/// Pass the effective mode volume to absorb the beam-divergence factor.
pub fn coupling_g0(mu: f64, omega: f64, v_eff: f64) -> f64 {
    mu / CODATA.hbar * (CODATA.hbar * omega / (2.0 * CODATA.eps0 * v_eff)).sqrt()
}

/// Root-sum-square coupling over several decay branches.
pub fn composite_g(couplings: &[f64]) -> Result<f64> {
    if couplings.is_empty() {
        return Err(Error::Domain("composite coupling needs at least one branch".into()));
    }
    Ok(couplings.iter().map(|g| g * g).sum::<f64>().sqrt())
}

/// Purcell collection efficiency factored into coupling and extraction parts.
#[derive(Debug, Clone, Copy)]
pub struct CollectionEfficiency {
    /// Total single-photon collection probability P1.
    pub p1: f64,
    /// Coupling efficiency g^2 / (g^2 + kappa gamma) = C/(C+1).
    pub coupling_eff: f64,
    /// Extraction efficiency kappa_L / (kappa + gamma).
    pub extraction_eff: f64,
    /// Cooperativity C.
    pub cooperativity: f64,
}

/// P1 = [g^2/(g^2 + kappa gamma)] * [kappa_L/(kappa + gamma)].
pub fn collection_p1(rates: &CavityRates) -> CollectionEfficiency {
    let kappa = rates.kappa();
    let g2 = rates.g * rates.g;
    let coupling_eff = g2 / (g2 + kappa * rates.gamma);
    let extraction_eff = rates.kappa_left / (kappa + rates.gamma);
    CollectionEfficiency {
        p1: coupling_eff * extraction_eff,
        coupling_eff,
        extraction_eff,
        cooperativity: rates.cooperativity(),
    }
}

/// Leaky-cavity regime margins (kappa_L / gamma, g^2/(kappa gamma)).
/// Both >> 1 indicates efficient extraction with retained cooperativity.
pub fn leaky_regime_margin(rates: &CavityRates) -> (f64, f64) {
    (rates.kappa_left / rates.gamma, rates.cooperativity())
}

/// Emitted-photon amplitude density phi(t) = sqrt(2 kappa_L) c_g1(t) with
/// c_g1(t) = (g/g') e^{-Kt} sin(g't), continued to sinh when overdamped.
/// The carrier phase is taken as zero, so the envelope is real (1/sqrt(s)).
pub fn emission_wavepacket(rates: &CavityRates, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let k = rates.decay_k();
    let gp2 = rates.rabi_freq_sq();
    let front = (2.0 * rates.kappa_left).sqrt() * (-k * t).exp();
    // The underdamped/overdamped branches share the small-argument limit
    // sin(g't)/g' -> t, used near g'^2 = 0 for numerical safety.
    let scale = rates.g.max(rates.kappa()).max(rates.gamma);
    if gp2.abs() < (1e-8 * scale) * (1e-8 * scale) {
        front * rates.g * t
    } else if gp2 > 0.0 {
        let gp = gp2.sqrt();
        front * rates.g / gp * (gp * t).sin()
    } else {
        let gp = (-gp2).sqrt();
        front * rates.g / gp * (gp * t).sinh()
    }
}

/// Normalized overlap |int f1 f2 dt| / sqrt(int |f1|^2 int |f2|^2) of two
/// real wavepacket envelopes over [0, horizon], by composite Simpson rule.
pub fn wavepacket_overlap<F1, F2>(phi1: F1, phi2: F2, horizon: f64) -> Result<f64>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    if !(horizon > 0.0) {
        return Err(Error::Domain("overlap horizon must be positive".into()));
    }
    let n = 40_000; // even
    let h = horizon / n as f64;
    let (mut cross, mut n1, mut n2) = (0.0, 0.0, 0.0);
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = i as f64 * h;
        let (a, b) = (phi1(t), phi2(t));
        cross += w * a * b;
        n1 += w * a * a;
        n2 += w * b * b;
    }
    if n1 <= 0.0 || n2 <= 0.0 {
        return Err(Error::Domain("zero-norm wavepacket in overlap".into()));
    }
    Ok((cross.abs() / (n1 * n2).sqrt()).min(1.0))
}
