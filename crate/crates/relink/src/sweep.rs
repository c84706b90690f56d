//! Configuration-driven sweep engine behind the CLI: typed TOML configs,
//! deterministic parallel grid evaluation, and CSV/JSON emission.
//!
//! All CSV output opens with '#'-prefixed metadata lines (tool version,
//! config hash, unit conventions, bin-width convention) followed by a
//! header row. Rows are ordered by grid index regardless of thread count.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::CODATA;
use crate::constructions::{
    cpf_construction, dit_construction, emitter_construction, fixed_finesse_curve, Construction,
};
use crate::cqed::{collection_p1, CavityRates};
use crate::geometry::{length_for_zr_equals_h, MirrorProcess};
use crate::oracle::{emission_p_of_s, fourier_check, IntegrationConfig, PulseSpec};
use crate::protocols::{cpf_outcome, LinkBudget, Protocol};
use crate::rates::{
    advantage, bin_widths, cycle_time, scenario_by_name, success_rate, BinConvention, Modality,
    Timing,
};
use crate::transitions::{lookup, AtomicTransition};
use crate::{Error, Result};

/// Axis scale.
#[derive(Debug, Clone, Copy, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// One sweep axis: `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::Config("axis count must be at least 2".into()));
        }
        if !(self.min < self.max) {
            return Err(Error::Config("axis requires min < max".into()));
        }
        if self.scale == Scale::Log && self.min <= 0.0 {
            return Err(Error::Config("log axis requires min > 0".into()));
        }
        let n = self.count;
        Ok((0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * f,
                    Scale::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect())
    }
}

/// Format a float for CSV: fixed scientific precision so output is
/// byte-stable; non-finite values become "nan".
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.10e}")
    } else {
        "nan".into()
    }
}

/// SHA-256 hex digest of the effective configuration text.
pub fn config_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write the standard CSV metadata header.
pub fn write_metadata(
    out: &mut dyn Write,
    command: &str,
    cfg_hash: &str,
    convention: BinConvention,
) -> std::io::Result<()> {
    writeln!(out, "# relink {}", crate::VERSION)?;
    writeln!(out, "# command: {command}")?;
    writeln!(out, "# config-sha256: {cfg_hash}")?;
    writeln!(out, "# units: rates rad/s, lengths m, times s, losses fractional")?;
    writeln!(out, "# s_o-convention: {}", convention.metadata_tag())?;
    writeln!(out, "# dephasing-model: gaussian-random-phase")
}

fn modality_transition(modality: Modality) -> &'static AtomicTransition {
    lookup(modality.transition_label()).expect("registry covers all modalities")
}

fn process(radius: f64, bad_loss: f64) -> MirrorProcess {
    MirrorProcess {
        mirror_radius_min: radius,
        bad_loss,
        transmission_left: 0.0,
        transmission_right: 0.0,
        roughness_rms: None,
    }
}

/// The emitter's process for a modality. Frequency qubits need a
/// double-resonance cavity (free spectral range matching the hyperfine
/// splitting), which forces a centimeter-scale length and hence a much
/// larger mirror radius than the nominal process point; the poor
/// collection of that long cavity is what handicaps frequency qubits.
/// Receivers interact with one component only and keep the nominal
/// small-radius process.
fn emitter_process(
    t: &AtomicTransition,
    radius: f64,
    bad_loss: f64,
    h_ion: f64,
) -> MirrorProcess {
    match t.hf_splitting {
        Some(hf) => process(
            crate::constructions::double_resonance_radius(hf, h_ion),
            bad_loss,
        ),
        None => process(radius, bad_loss),
    }
}

// ---------------------------------------------------------------------------
// collect

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CollectConfig {
    /// Registry label; alternatively give mu_ea0/wavelength_nm/gamma_fwhm_mhz.
    pub transition: Option<String>,
    pub mu_ea0: Option<f64>,
    pub wavelength_nm: Option<f64>,
    pub gamma_fwhm_mhz: Option<f64>,
    pub finesse: f64,
    pub h_ion_um: f64,
    pub mirror_radius_um: Vec<f64>,
}

impl CollectConfig {
    fn resolve(&self) -> Result<(f64, f64, f64)> {
        match (&self.transition, self.mu_ea0, self.wavelength_nm, self.gamma_fwhm_mhz) {
            (Some(label), None, None, None) => {
                let t = lookup(label)
                    .ok_or_else(|| Error::Config(format!("unknown transition '{label}'")))?;
                Ok((t.mu_eff, t.wavelength, t.gamma_half()))
            }
            (None, Some(mu), Some(wl), Some(gam)) => {
                Ok((mu * CODATA.e_a0, wl * 1e-9, 0.5 * 2.0 * PI * gam * 1e6))
            }
            _ => Err(Error::Config(
                "give either 'transition' or all of mu_ea0/wavelength_nm/gamma_fwhm_mhz".into(),
            )),
        }
    }
}

/// Fixed-finesse collection curves (one block of rows per mirror radius).
pub fn cmd_collect(cfg: &CollectConfig, cfg_text: &str, out: &mut dyn Write) -> Result<()> {
    let (mu, wavelength, gamma) = cfg.resolve()?;
    let h = cfg.h_ion_um * 1e-6;
    write_metadata(out, "collect", &config_hash(cfg_text), BinConvention::EmitterK)?;
    writeln!(out, "mirror_radius_m,length_m,p1,g_rad_per_s,kappa_rad_per_s,is_peak,l_zr_eq_h_m")?;
    let blocks: Vec<String> = cfg
        .mirror_radius_um
        .par_iter()
        .map(|&r_um| -> Result<String> {
            let r = r_um * 1e-6;
            let curve = fixed_finesse_curve(mu, wavelength, r, h, cfg.finesse, gamma)?;
            let l_o = length_for_zr_equals_h(r, h)?;
            let peak = crate::constructions::collect_peak_index(&curve).unwrap_or(0);
            let mut s = String::new();
            for (i, p) in curve.iter().enumerate() {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_f64(r),
                    fmt_f64(p.length),
                    fmt_f64(p.p1),
                    fmt_f64(p.g),
                    fmt_f64(p.kappa),
                    u8::from(i == peak),
                    fmt_f64(l_o),
                ));
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    for b in blocks {
        out.write_all(b.as_bytes())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// receiver-curves

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverCurvesConfig {
    pub cooperativity: AxisSpec,
}

/// Receiver figures of merit versus cooperativity under the kappa_L ~ kappa
/// idealization (negligible bad loss).
pub fn cmd_receiver_curves(
    cfg: &ReceiverCurvesConfig,
    cfg_text: &str,
    out: &mut dyn Write,
) -> Result<()> {
    write_metadata(out, "receiver-curves", &config_hash(cfg_text), BinConvention::EmitterK)?;
    writeln!(out, "cooperativity,p_t,dit_infidelity,p_r,cpf_infidelity")?;
    for c in cfg.cooperativity.values()? {
        let one = (1.0 + c) * (1.0 + c);
        let p_t = 1.0 + 1.0 / one;
        let dit_infid = 1.0 - one / (one + 1.0);
        // single-port kappa_L = kappa: r_u = -1, r_c = (C-1)/(C+1)
        let r_u = num_complex::Complex64::new(-1.0, 0.0);
        let r_c = num_complex::Complex64::new((c - 1.0) / (c + 1.0), 0.0);
        let o = cpf_outcome(r_u, r_c, 1.0, &LinkBudget::default());
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(c),
            fmt_f64(p_t),
            fmt_f64(dit_infid),
            fmt_f64(o.success_prob),
            fmt_f64(1.0 - o.fidelity),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// advantage

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AdvantageConfig {
    /// "dit" or "cpf".
    pub protocol: Protocol,
    pub modality: Modality,
    /// Fidelity floor; required for DIT, optional gate for CPF.
    pub f_min: Option<f64>,
    pub h_ion_um: f64,
    /// Receiver mode matching (DIT only).
    #[serde(default = "one")]
    pub xi: f64,
    pub mirror_radius_um: AxisSpec,
    pub bad_loss_ppm: AxisSpec,
}

fn one() -> f64 {
    1.0
}

/// One evaluated advantage-map grid point.
#[derive(Debug, Clone, Copy)]
pub struct AdvantagePoint {
    pub p1: f64,
    pub p_type2: f64,
    pub p_scr: f64,
    pub advantage: f64,
    pub fidelity: f64,
    pub feasible: bool,
}

/// Success-probability advantage of one SCR protocol over type-II at a
/// mirror-process grid point, using role-optimal constructions.
pub fn advantage_point(
    protocol: Protocol,
    modality: Modality,
    radius: f64,
    bad_loss: f64,
    h_ion: f64,
    f_min: Option<f64>,
    xi: f64,
) -> Result<AdvantagePoint> {
    let t = modality_transition(modality);
    let proc = process(radius, bad_loss);
    let emitter = emitter_construction(&emitter_process(t, radius, bad_loss, h_ion), t, h_ion)?;
    let p1 = emitter.figures.p1.unwrap();
    let p_type2 = 0.5 * p1 * p1;

    let receiver: Construction = match protocol {
        Protocol::Dit => {
            let f = f_min
                .ok_or_else(|| Error::Config("DIT advantage needs an f_min floor".into()))?;
            dit_construction(&proc, t, h_ion, f)?
        }
        Protocol::Cpf => match cpf_construction(&proc, t, h_ion, f_min, false) {
            Ok(c) => c,
            Err(Error::Infeasible(_)) => {
                return Ok(AdvantagePoint {
                    p1,
                    p_type2,
                    p_scr: f64::NAN,
                    advantage: f64::NAN,
                    fidelity: f64::NAN,
                    feasible: false,
                })
            }
            Err(e) => return Err(e),
        },
        Protocol::TypeIi => {
            return Err(Error::Config("advantage is defined against type-II".into()))
        }
    };

    if !receiver.feasible {
        return Ok(AdvantagePoint {
            p1,
            p_type2,
            p_scr: f64::NAN,
            advantage: f64::NAN,
            fidelity: receiver.figures.fidelity.unwrap_or(f64::NAN),
            feasible: false,
        });
    }
    let p_scr = match protocol {
        Protocol::Dit => 0.5 * p1 * xi * receiver.figures.p_transmit.unwrap(),
        Protocol::Cpf => p1 * receiver.figures.p_reflect.unwrap(),
        Protocol::TypeIi => unreachable!(),
    };
    Ok(AdvantagePoint {
        p1,
        p_type2,
        p_scr,
        advantage: advantage(p_scr, p_type2)?,
        fidelity: receiver.figures.fidelity.unwrap(),
        feasible: true,
    })
}

/// Advantage map over a (mirror radius, bad loss) grid.
pub fn cmd_advantage(cfg: &AdvantageConfig, cfg_text: &str, out: &mut dyn Write) -> Result<()> {
    let radii = cfg.mirror_radius_um.values()?;
    let losses = cfg.bad_loss_ppm.values()?;
    let h = cfg.h_ion_um * 1e-6;
    let grid: Vec<(f64, f64)> = radii
        .iter()
        .flat_map(|&r| losses.iter().map(move |&l| (r * 1e-6, l * 1e-6)))
        .collect();
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&(r, l)| -> Result<String> {
            let p = advantage_point(cfg.protocol, cfg.modality, r, l, h, cfg.f_min, cfg.xi)?;
            Ok(format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(r),
                fmt_f64(l),
                fmt_f64(p.p1),
                fmt_f64(p.p_type2),
                fmt_f64(p.p_scr),
                fmt_f64(p.advantage),
                fmt_f64(1.0 - p.fidelity),
                u8::from(p.feasible),
            ))
        })
        .collect::<Result<_>>()?;
    write_metadata(out, "advantage", &config_hash(cfg_text), BinConvention::EmitterK)?;
    writeln!(
        out,
        "mirror_radius_m,bad_loss,p1,p_type2,p_scr,advantage,infidelity,feasible"
    )?;
    for row in rows {
        out.write_all(row.as_bytes())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// rates

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    /// "e1", "e2", or "reference-1km".
    pub scenario: String,
    pub modalities: Vec<Modality>,
    pub protocols: Vec<Protocol>,
    pub f_min: f64,
    pub h_ion_um: f64,
    pub mirror_radius_um: f64,
    pub bad_loss_ppm: AxisSpec,
    /// Bandwidth padding for CPF receivers; defaults to on for scenario e2.
    pub bandwidth_pad: Option<bool>,
    #[serde(default = "default_convention")]
    pub s_o_convention: BinConvention,
}

fn default_convention() -> BinConvention {
    BinConvention::EmitterK
}

/// One evaluated rate-curve point.
#[derive(Debug, Clone, Copy)]
pub struct RatePoint {
    pub fidelity: f64,
    pub success_prob: f64,
    pub bin: f64,
    pub cycle: f64,
    pub rate: f64,
    pub feasible: bool,
}

/// Success rate of one protocol/modality at a mirror-process point under a
/// timing scenario.
#[allow(clippy::too_many_arguments)]
pub fn rate_point(
    timing: &Timing,
    protocol: Protocol,
    modality: Modality,
    radius: f64,
    bad_loss: f64,
    h_ion: f64,
    f_min: f64,
    bandwidth_pad: bool,
    convention: BinConvention,
) -> Result<RatePoint> {
    let t = modality_transition(modality);
    let proc = process(radius, bad_loss);
    let emitter = emitter_construction(&emitter_process(t, radius, bad_loss, h_ion), t, h_ion)?;
    let p1 = emitter.figures.p1.unwrap();
    let time_bin = modality.is_time_bin();

    let infeasible = |fidelity: f64| RatePoint {
        fidelity,
        success_prob: f64::NAN,
        bin: f64::NAN,
        cycle: f64::NAN,
        rate: f64::NAN,
        feasible: false,
    };

    let (receiver, fidelity, p_success) = match protocol {
        Protocol::TypeIi => (None, 1.0, 0.5 * p1 * p1),
        Protocol::Dit => {
            let c = dit_construction(&proc, t, h_ion, f_min)?;
            if !c.feasible {
                return Ok(infeasible(c.figures.fidelity.unwrap_or(f64::NAN)));
            }
            let p = 0.5 * p1 * c.figures.p_transmit.unwrap();
            (Some(c), f_min, p)
        }
        Protocol::Cpf => match cpf_construction(&proc, t, h_ion, Some(f_min), bandwidth_pad) {
            Ok(c) if c.feasible => {
                let p = p1 * c.figures.p_reflect.unwrap();
                let f = c.figures.fidelity.unwrap();
                (Some(c), f, p)
            }
            Ok(c) => return Ok(infeasible(c.figures.fidelity.unwrap_or(f64::NAN))),
            Err(Error::Infeasible(_)) => return Ok(infeasible(f64::NAN)),
            Err(e) => return Err(e),
        },
    };

    let recv_rates: Option<&CavityRates> = receiver.as_ref().map(|c| &c.rates);
    let bins = bin_widths(&emitter.rates, recv_rates, timing, convention)?;
    let bin = match protocol {
        Protocol::TypeIi => bins.s_o,
        Protocol::Dit => bins.s_dit.unwrap(),
        Protocol::Cpf => bins.s_cpf.unwrap(),
    };
    let cycle = cycle_time(timing, protocol, time_bin, bin);
    Ok(RatePoint {
        fidelity,
        success_prob: p_success,
        bin,
        cycle,
        rate: success_rate(p_success, cycle)?,
        feasible: true,
    })
}

/// Rate curves versus bad loss for each (protocol, modality) pair.
pub fn cmd_rates(cfg: &RatesConfig, cfg_text: &str, out: &mut dyn Write) -> Result<()> {
    let timing = scenario_by_name(&cfg.scenario)?;
    let pad = cfg
        .bandwidth_pad
        .unwrap_or_else(|| cfg.scenario.eq_ignore_ascii_case("e2"));
    let losses = cfg.bad_loss_ppm.values()?;
    let h = cfg.h_ion_um * 1e-6;
    let r = cfg.mirror_radius_um * 1e-6;
    let mut jobs = Vec::new();
    for &protocol in &cfg.protocols {
        for &modality in &cfg.modalities {
            for &loss_ppm in &losses {
                jobs.push((protocol, modality, loss_ppm * 1e-6));
            }
        }
    }
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|&(protocol, modality, loss)| -> Result<String> {
            let p = rate_point(
                &timing,
                protocol,
                modality,
                r,
                loss,
                h,
                cfg.f_min,
                pad,
                cfg.s_o_convention,
            )?;
            Ok(format!(
                "{protocol},{modality},{},{},{},{},{},{},{}\n",
                fmt_f64(loss),
                fmt_f64(p.fidelity),
                fmt_f64(p.success_prob),
                fmt_f64(p.bin),
                fmt_f64(p.cycle),
                fmt_f64(p.rate),
                u8::from(p.feasible),
            ))
        })
        .collect::<Result<_>>()?;
    write_metadata(out, "rates", &config_hash(cfg_text), cfg.s_o_convention)?;
    writeln!(
        out,
        "protocol,modality,bad_loss,fidelity,success_prob,bin_s,cycle_s,rate_hz,feasible"
    )?;
    for row in rows {
        out.write_all(row.as_bytes())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_emission_points")]
    pub emission_points: usize,
    #[serde(default = "default_scatter_points")]
    pub scatter_points: usize,
    #[serde(default = "default_tol_p1")]
    pub tolerance_p1: f64,
    #[serde(default = "default_tol_coeff")]
    pub tolerance_coeff: f64,
}

fn default_emission_points() -> usize {
    20
}
fn default_scatter_points() -> usize {
    5
}
fn default_tol_p1() -> f64 {
    1e-3
}
fn default_tol_coeff() -> f64 {
    1e-2
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            emission_points: default_emission_points(),
            scatter_points: default_scatter_points(),
            tolerance_p1: default_tol_p1(),
            tolerance_coeff: default_tol_coeff(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleEmissionRow {
    pub g_rad_per_s: f64,
    pub kappa_rad_per_s: f64,
    pub kappa_left_rad_per_s: f64,
    pub gamma_rad_per_s: f64,
    pub p1_analytic: f64,
    pub p1_oracle: f64,
    pub deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleScatterRow {
    pub g_rad_per_s: f64,
    pub kappa_rad_per_s: f64,
    pub gamma_rad_per_s: f64,
    pub center_detuning_rad_per_s: f64,
    pub sigma_omega_rad_per_s: f64,
    pub max_coeff_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub emission: Vec<OracleEmissionRow>,
    pub scatter: Vec<OracleScatterRow>,
    pub max_p1_deviation: f64,
    pub max_coeff_deviation: f64,
    pub tolerance_p1: f64,
    pub tolerance_coeff: f64,
    pub pass: bool,
}

/// Fixed-seed random grid in g, kappa, gamma over 2pi*[1, 100] MHz.
/// Deterministic by construction; the same config always produces the same
/// report.
pub fn oracle_report(cfg: &OracleConfig) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x52454C_494E4B);
    let two_pi_mhz = 2.0 * PI * 1e6;
    let log_uniform =
        |rng: &mut ChaCha8Rng| two_pi_mhz * 10f64.powf(rng.gen_range(0.0..=2.0));

    let mut emission_params = Vec::new();
    for _ in 0..cfg.emission_points {
        let g = log_uniform(&mut rng);
        let kappa = log_uniform(&mut rng);
        let gamma = log_uniform(&mut rng);
        let frac: f64 = rng.gen_range(0.2..=1.0);
        emission_params.push((g, kappa, gamma, frac));
    }
    let mut scatter_params = Vec::new();
    for _ in 0..cfg.scatter_points {
        let g = log_uniform(&mut rng);
        let kappa = log_uniform(&mut rng);
        let gamma = log_uniform(&mut rng);
        let v: f64 = rng.gen_range(0.3..=0.7);
        let det: f64 = rng.gen_range(-0.25..=0.25) * kappa;
        scatter_params.push((g, kappa, gamma, v, det));
    }

    let emission: Vec<OracleEmissionRow> = emission_params
        .par_iter()
        .map(|&(g, kappa, gamma, frac)| -> Result<OracleEmissionRow> {
            let rates = CavityRates {
                g,
                kappa_left: frac * kappa,
                kappa_right: 0.0,
                kappa_bad: (1.0 - frac) * kappa,
                gamma,
                omega: 1e15,
            };
            let icfg = IntegrationConfig::for_rates(&rates, 0.0, 0.0);
            let s = 12.0 / rates.decay_k();
            let p_oracle = emission_p_of_s(&rates, s, &icfg)?;
            let p_analytic = collection_p1(&rates).p1;
            Ok(OracleEmissionRow {
                g_rad_per_s: g,
                kappa_rad_per_s: kappa,
                kappa_left_rad_per_s: rates.kappa_left,
                gamma_rad_per_s: gamma,
                p1_analytic: p_analytic,
                p1_oracle: p_oracle,
                deviation: (p_oracle - p_analytic).abs(),
            })
        })
        .collect::<Result<_>>()?;

    let scatter: Vec<OracleScatterRow> = scatter_params
        .par_iter()
        .map(|&(g, kappa, gamma, v, det)| -> Result<OracleScatterRow> {
            let rates = CavityRates {
                g,
                kappa_left: v * kappa,
                kappa_right: (1.0 - v) * 0.9 * kappa,
                kappa_bad: (1.0 - v) * 0.1 * kappa,
                gamma,
                omega: 1e15,
            };
            let sigma = kappa / 20.0;
            let pulse = PulseSpec { center_detuning: det, sigma_omega: sigma };
            let horizon = 14.0 * pulse.sigma_t() + 14.0 / rates.decay_k();
            let mut icfg = IntegrationConfig::for_rates(&rates, det.abs() + 3.0 * sigma, horizon);
            icfg.horizon = icfg.horizon.max(horizon);
            let dev = fourier_check(&rates, &pulse, &icfg)?;
            Ok(OracleScatterRow {
                g_rad_per_s: g,
                kappa_rad_per_s: kappa,
                gamma_rad_per_s: gamma,
                center_detuning_rad_per_s: det,
                sigma_omega_rad_per_s: sigma,
                max_coeff_deviation: dev,
            })
        })
        .collect::<Result<_>>()?;

    let max_p1 = emission.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let max_coeff = scatter
        .iter()
        .map(|r| r.max_coeff_deviation)
        .fold(0.0, f64::max);
    Ok(OracleReport {
        pass: max_p1 <= cfg.tolerance_p1 && max_coeff <= cfg.tolerance_coeff,
        max_p1_deviation: max_p1,
        max_coeff_deviation: max_coeff,
        tolerance_p1: cfg.tolerance_p1,
        tolerance_coeff: cfg.tolerance_coeff,
        emission,
        scatter,
    })
}

/// Oracle verification report as JSON. Returns the report's pass flag.
pub fn cmd_oracle(cfg: &OracleConfig, out: &mut dyn Write) -> Result<bool> {
    let report = oracle_report(cfg)?;
    serde_json::to_writer_pretty(&mut *out, &report)
        .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
    writeln!(out)?;
    Ok(report.pass)
}
