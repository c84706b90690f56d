//! Attempt cycle times, detection-bin widths, success rates, and protocol
//! advantage for the two hardware scenarios.

use serde::Deserialize;

use crate::cqed::CavityRates;
use crate::protocols::Protocol;
use crate::{Error, Result};

/// Cycle-time ingredients of one hardware scenario.
#[derive(Debug, Clone, Copy)]
pub struct Timing {
    /// Microwave/RF pi-time for the mid-cycle qubit flip (s).
    pub t_pi: f64,
    /// State-preparation (pumping) time t_P (s).
    pub t_pump: f64,
    /// Half-path photon propagation time t_(L/2) (s).
    pub t_half_prop: f64,
    /// Detection-electronics/reset time t_E (s).
    pub t_elec: f64,
    /// Ion shuttling time t_S per multiplexed attempt (s).
    pub t_shuttle: f64,
    /// Detection window length in units of the emitter lifetime, N.
    pub n_lifetimes: f64,
    /// Receiver-bandwidth safety factor S.
    pub band_safety: f64,
    /// Whether attempts are multiplexed (pipelined pump/readout).
    pub multiplexed: bool,
}

/// Detection-bin widths (s).
#[derive(Debug, Clone, Copy)]
pub struct BinWidths {
    /// Minimum bin width s_o covering the emitted wavepacket.
    pub s_o: f64,
    /// DIT bin width max(s_o, S pi / g_receiver), if a receiver is given.
    pub s_dit: Option<f64>,
    /// CPF bin width max(s_o, S pi / kappa_receiver), if a receiver is given.
    pub s_cpf: Option<f64>,
}

/// Which rate sets the minimum bin width s_o.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinConvention {
    /// s_o = N / K with K the emitter's averaged-linewidth decay constant.
    EmitterK,
    /// s_o = N / Gamma with Gamma the atomic FWHM linewidth.
    AtomGamma,
}

impl BinConvention {
    pub fn metadata_tag(&self) -> &'static str {
        match self {
            BinConvention::EmitterK => "emitter-K",
            BinConvention::AtomGamma => "atom-Gamma",
        }
    }
}

/// Detection-bin widths from the emitter (and optionally receiver) rates.
pub fn bin_widths(
    emitter: &CavityRates,
    receiver: Option<&CavityRates>,
    timing: &Timing,
    convention: BinConvention,
) -> Result<BinWidths> {
    let base = match convention {
        BinConvention::EmitterK => emitter.decay_k(),
        BinConvention::AtomGamma => 2.0 * emitter.gamma,
    };
    if !(base > 0.0) {
        return Err(Error::Domain("emitter decay rate must be positive".into()));
    }
    let s_o = timing.n_lifetimes / base;
    let (s_dit, s_cpf) = match receiver {
        None => (None, None),
        Some(r) => {
            if !(r.g > 0.0) || !(r.kappa() > 0.0) {
                return Err(Error::Domain("receiver g and kappa must be positive".into()));
            }
            let pi = std::f64::consts::PI;
            (
                Some(s_o.max(timing.band_safety * pi / r.g)),
                Some(s_o.max(timing.band_safety * pi / r.kappa())),
            )
        }
    };
    Ok(BinWidths { s_o, s_dit, s_cpf })
}

/// Attempt cycle time. Non-multiplexed cycles pay pumping, readout, and
/// propagation each attempt; multiplexed cycles pay only shuttling.
/// Time-bin encodings add the mid-cycle flip and a second detection bin.
/// Propagation counts once per direction: t_tx = t_rx = t_half for the
/// meet-in-the-middle type-II arrangement and 2 t_half for the
/// single-photon protocols (full source-to-receiver distance).
pub fn cycle_time(timing: &Timing, protocol: Protocol, time_bin: bool, bin: f64) -> f64 {
    let t_prop_each = match protocol {
        Protocol::TypeIi => timing.t_half_prop,
        Protocol::Dit | Protocol::Cpf => 2.0 * timing.t_half_prop,
    };
    match (timing.multiplexed, time_bin) {
        (false, false) => timing.t_elec + timing.t_pump + 2.0 * t_prop_each + bin,
        (false, true) => {
            timing.t_elec + timing.t_pump + 2.0 * t_prop_each + 1.5 * timing.t_pi + 2.0 * bin
        }
        (true, false) => timing.t_shuttle + bin,
        (true, true) => timing.t_shuttle + timing.t_pi + 2.0 * bin,
    }
}

/// Success rate R_suc = P / tau (Hz).
pub fn success_rate(success_prob: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain("cycle time must be positive".into()));
    }
    Ok(success_prob / tau)
}

/// Relative advantage (p_alt - p_ref) / p_ref.
pub fn advantage(p_alt: f64, p_ref: f64) -> Result<f64> {
    if !(p_ref > 0.0) {
        return Err(Error::Domain("advantage undefined for zero reference".into()));
    }
    Ok((p_alt - p_ref) / p_ref)
}

/// Photonic-qubit encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Polarization,
    Frequency,
    TimeBin,
}

impl Modality {
    /// Registry label of the transition backing this encoding.
    pub fn transition_label(&self) -> &'static str {
        match self {
            Modality::Polarization => "Polarization",
            Modality::Frequency => "Frequency",
            Modality::TimeBin => "Time-Bin",
        }
    }

    pub fn is_time_bin(&self) -> bool {
        matches!(self, Modality::TimeBin)
    }
}

impl std::fmt::Display for Modality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Modality::Polarization => "polarization",
            Modality::Frequency => "frequency",
            Modality::TimeBin => "time-bin",
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    t_pi: f64,
    t_pump: f64,
    t_half_prop: f64,
    t_elec: f64,
    t_shuttle: f64,
    n_lifetimes: f64,
    band_safety: f64,
    multiplexed: bool,
}

fn load_scenario(text: &str) -> (String, Timing) {
    let f: ScenarioFile = toml::from_str(text).expect("scenario preset is valid");
    (
        f.name,
        Timing {
            t_pi: f.t_pi,
            t_pump: f.t_pump,
            t_half_prop: f.t_half_prop,
            t_elec: f.t_elec,
            t_shuttle: f.t_shuttle,
            n_lifetimes: f.n_lifetimes,
            band_safety: f.band_safety,
            multiplexed: f.multiplexed,
        },
    )
}

/// Near-term scenario preset (sequential attempts).
pub fn scenario_e1() -> Timing {
    load_scenario(include_str!("../data/scenario_e1.toml")).1
}

/// Future scenario preset (multiplexed attempts).
pub fn scenario_e2() -> Timing {
    load_scenario(include_str!("../data/scenario_e2.toml")).1
}

/// E1 variant with 1 km separation (half-path propagation 2.5 us).
pub fn scenario_reference_1km() -> Timing {
    load_scenario(include_str!("../data/scenario_ref1km.toml")).1
}

/// Resolve a scenario by name.
pub fn scenario_by_name(name: &str) -> Result<Timing> {
    match name.to_ascii_lowercase().as_str() {
        "e1" => Ok(scenario_e1()),
        "e2" => Ok(scenario_e2()),
        "reference-1km" | "ref1km" => Ok(scenario_reference_1km()),
        other => Err(Error::Config(format!(
            "unknown scenario '{other}' (expected e1, e2, or reference-1km)"
        ))),
    }
}
