//! Role-optimal cavity constructions over a mirror process (R, bad loss):
//! emitter (maximize P1), DIT receiver (maximize P_t at a fidelity floor),
//! CPF receiver (joint fidelity/probability optimum), plus the
//! strong-coupling finesse threshold.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::CODATA;
use crate::cqed::{collection_p1, composite_g, coupling_g0, CavityRates};
use crate::geometry::{
    effective_mode_volume, finesse, kappa_from_finesse, length_for_zr_equals_h, CavityGeometry,
    MirrorProcess,
};
use crate::transitions::AtomicTransition;
use crate::{Error, Result};

/// Which network role a cavity is being designed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CavityRole {
    Emitter,
    DitReceiver,
    CpfReceiver,
}

/// Figures of merit attached to a construction; fields not applicable to
/// the role are `None`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstructionFigures {
    /// Single-photon collection probability (emitter).
    pub p1: Option<f64>,
    /// Transmission probability ratio P_t (DIT receiver).
    pub p_transmit: Option<f64>,
    /// Reflection probability P_r (CPF receiver).
    pub p_reflect: Option<f64>,
    /// Achieved (or saturated) protocol fidelity.
    pub fidelity: Option<f64>,
    /// Cooperativity C at the operating point.
    pub cooperativity: f64,
    /// Intrinsic cooperativity ceiling C_o (infinite if bad loss is zero).
    pub intrinsic_cooperativity: f64,
}

/// One designed cavity: geometry, rates, and role figures of merit.
#[derive(Debug, Clone)]
pub struct Construction {
    pub role: CavityRole,
    pub rates: CavityRates,
    pub geometry: CavityGeometry,
    pub figures: ConstructionFigures,
    pub feasible: bool,
    /// Populated when `feasible` is false.
    pub reason: Option<String>,
}

/// Coupling strength at a resonant length, assuming perfect antinode
/// placement: g = (mu/hbar) sqrt(hbar omega / (2 eps0 V_eff)).
fn coupling_at(mu: f64, wavelength: f64, geom: &CavityGeometry) -> Result<f64> {
    let omega = 2.0 * PI * CODATA.c / wavelength;
    Ok(coupling_g0(mu, omega, effective_mode_volume(geom)?))
}

/// Bad-channel decay rate at a given length from the process bad loss.
fn kappa_bad_at(length: f64, bad_loss: f64) -> Result<f64> {
    if bad_loss == 0.0 {
        return Ok(0.0);
    }
    Ok(kappa_from_finesse(length, finesse(bad_loss)?))
}

/// Emitter g uses the root-sum-square dipole over all coupled branches.
fn emitter_mu(transition: &AtomicTransition) -> Result<f64> {
    composite_g(
        &transition.branches.iter().map(|b| b.mu_eps).collect::<Vec<_>>(),
    )
}

/// Receiver g uses the same composite dipole as the emitter: when a
/// transition has two cavity-coupled branches the interaction strength
/// follows the root-sum-square substitution.
fn receiver_mu(transition: &AtomicTransition) -> Result<f64> {
    composite_g(
        &transition.branches.iter().map(|b| b.mu_eps).collect::<Vec<_>>(),
    )
}

/// P1-optimal collection contour: kappa_L*(l) with kappa_R = 0 given g,
/// gamma, kappa_B at that length.
pub fn emitter_kappa_contour(g: f64, gamma: f64, kappa_bad: f64) -> f64 {
    (g * g + kappa_bad * (gamma + g * g / gamma + kappa_bad)).sqrt()
}

/// Resonant lengths descending from `upper` (inclusive) down to
/// `lower` (exclusive).
fn descending_resonant(wavelength: f64, lower: f64, upper: f64) -> impl Iterator<Item = f64> {
    let half = 0.5 * wavelength;
    let m_hi = (upper / half).floor() as i64;
    (1..=m_hi.max(0))
        .rev()
        .map(move |m| m as f64 * half)
        .take_while(move |&l| l > lower)
}

/// Intrinsic cooperativity at a candidate geometry, infinite for zero
/// bad loss.
fn intrinsic_c(g: f64, gamma: f64, kappa_bad: f64) -> f64 {
    if kappa_bad == 0.0 {
        f64::INFINITY
    } else {
        g * g / (kappa_bad * gamma)
    }
}

/// Design the collection-optimal emitter cavity for a process.
///
/// At each resonant length the collection-optimal one-port contour
/// kappa_L*(l) = sqrt(g^2 + kappa_B (gamma + g^2/gamma + kappa_B)) is
/// applied; the length is then picked by a local line search descending
/// from the resonant length nearest (below) the z_R = h_ion root l_o,
/// stopping at the first P1 decline. P1 has a local maximum at l_o;
/// the descent keeps the design in that basin rather than running to the
/// short-length boundary, where the mode volume argument breaks down.
/// Ties break toward shorter length (higher free spectral range).
pub fn emitter_construction(
    process: &MirrorProcess,
    transition: &AtomicTransition,
    h_ion: f64,
) -> Result<Construction> {
    process.validate()?;
    let r = process.mirror_radius_min;
    let lam = transition.wavelength;
    let gamma = transition.gamma_half();
    let mu = emitter_mu(transition)?;
    let l_o = length_for_zr_equals_h(r, h_ion)?;
    let upper = l_o.min(r - 0.5 * lam);

    let mut best: Option<(f64, CavityGeometry, CavityRates)> = None;
    for length in descending_resonant(lam, h_ion, upper) {
        let geom = CavityGeometry {
            mirror_radius: r,
            length,
            ion_height: h_ion,
            wavelength: lam,
        };
        let g = coupling_at(mu, lam, &geom)?;
        let kappa_bad = kappa_bad_at(length, process.bad_loss)?;
        let rates = CavityRates {
            g,
            kappa_left: emitter_kappa_contour(g, gamma, kappa_bad),
            kappa_right: 0.0,
            kappa_bad,
            gamma,
            omega: transition.omega(),
        };
        let p1 = collection_p1(&rates).p1;
        match &best {
            Some((best_p1, _, _)) if p1 < *best_p1 => break,
            _ => best = Some((p1, geom, rates)),
        }
    }

    let (p1, geometry, rates) = best.ok_or_else(|| {
        Error::Infeasible("no stable resonant length between h_ion and l_o".into())
    })?;
    Ok(Construction {
        role: CavityRole::Emitter,
        figures: ConstructionFigures {
            p1: Some(p1),
            fidelity: None,
            p_transmit: None,
            p_reflect: None,
            cooperativity: rates.cooperativity(),
            intrinsic_cooperativity: intrinsic_c(rates.g, rates.gamma, rates.kappa_bad),
        },
        rates,
        geometry,
        feasible: true,
        reason: None,
    })
}

/// Resonant length nearest l_o inside the stable range, erroring when the
/// comb misses the range entirely.
fn length_near_lo(process: &MirrorProcess, wavelength: f64, h_ion: f64) -> Result<f64> {
    let r = process.mirror_radius_min;
    let l_o = length_for_zr_equals_h(r, h_ion)?;
    let half = 0.5 * wavelength;
    let upper = r - half;
    let m = (l_o / half).round().max(1.0);
    let mut length = m * half;
    if length > upper {
        length -= half;
    }
    if length <= h_ion {
        return Err(Error::Infeasible("resonance comb misses the stable range".into()));
    }
    Ok(length)
}

/// Minimum cooperativity to reach a DIT fidelity floor:
/// C_min = sqrt(F_min / (1 - F_min)) - 1.
pub fn dit_min_cooperativity(f_min: f64) -> Result<f64> {
    if !(0.5 < f_min && f_min < 1.0) {
        return Err(Error::Domain(format!("DIT fidelity floor must lie in (0.5, 1), got {f_min}")));
    }
    Ok((f_min / (1.0 - f_min)).sqrt() - 1.0)
}

/// Design the balanced DIT receiver maximizing P_t at fidelity >= F_min.
///
/// The optimum saturates the floor: kappa_L = kappa_R =
/// (g^2/(C_min gamma) - kappa_B)/2 at the length l* nearest l_o, giving
/// P_t = (1 - C_min/C_o)^2 [1 + 1/(1+C_min)^2]. Feasible iff C_o > C_min.
pub fn dit_construction(
    process: &MirrorProcess,
    transition: &AtomicTransition,
    h_ion: f64,
    f_min: f64,
) -> Result<Construction> {
    process.validate()?;
    let c_min = dit_min_cooperativity(f_min)?;
    let gamma = transition.gamma_half();
    let length = length_near_lo(process, transition.wavelength, h_ion)?;
    let geometry = CavityGeometry {
        mirror_radius: process.mirror_radius_min,
        length,
        ion_height: h_ion,
        wavelength: transition.wavelength,
    };
    let g = coupling_at(receiver_mu(transition)?, transition.wavelength, &geometry)?;
    let kappa_bad = kappa_bad_at(length, process.bad_loss)?;
    let c_o = intrinsic_c(g, gamma, kappa_bad);

    if c_o <= c_min {
        return Ok(Construction {
            role: CavityRole::DitReceiver,
            rates: CavityRates {
                g,
                kappa_left: 0.0,
                kappa_right: 0.0,
                kappa_bad,
                gamma,
                omega: transition.omega(),
            },
            geometry,
            figures: ConstructionFigures {
                cooperativity: c_min,
                intrinsic_cooperativity: c_o,
                ..Default::default()
            },
            feasible: false,
            reason: Some("bad-loss-limited fidelity".into()),
        });
    }

    let kappa_l = 0.5 * (g * g / (c_min * gamma) - kappa_bad);
    let rates = CavityRates {
        g,
        kappa_left: kappa_l,
        kappa_right: kappa_l,
        kappa_bad,
        gamma,
        omega: transition.omega(),
    };
    let p_t = (1.0 - c_min / c_o) * (1.0 - c_min / c_o)
        * (1.0 + 1.0 / ((1.0 + c_min) * (1.0 + c_min)));
    Ok(Construction {
        role: CavityRole::DitReceiver,
        rates,
        geometry,
        figures: ConstructionFigures {
            p_transmit: Some(p_t),
            fidelity: Some(f_min),
            cooperativity: c_min,
            intrinsic_cooperativity: c_o,
            ..Default::default()
        },
        feasible: true,
        reason: None,
    })
}

/// CPF receiver fidelity at the joint optimum as a function of the
/// effective intrinsic cooperativity.
fn cpf_fidelity_of_co(c_o: f64) -> f64 {
    (1.0 + c_o) / (2.0 + c_o)
}

/// Design the single-port CPF receiver at its joint fidelity/probability
/// optimum C(2+C) = C_o, i.e. C = sqrt(1 + C_o) - 1, at the length
/// nearest l_o.
///
/// When `f_min` is given and the natural fidelity falls short the result
/// is marked infeasible. With `bandwidth_pad`, a natural fidelity above
/// the floor is traded for bandwidth by adding uncollected loss through
/// kappa_R until the fidelity falls to the floor (bisection, fidelity
/// tolerance 1e-6).
pub fn cpf_construction(
    process: &MirrorProcess,
    transition: &AtomicTransition,
    h_ion: f64,
    f_min: Option<f64>,
    bandwidth_pad: bool,
) -> Result<Construction> {
    process.validate()?;
    let gamma = transition.gamma_half();
    let length = length_near_lo(process, transition.wavelength, h_ion)?;
    let geometry = CavityGeometry {
        mirror_radius: process.mirror_radius_min,
        length,
        ion_height: h_ion,
        wavelength: transition.wavelength,
    };
    let g = coupling_at(receiver_mu(transition)?, transition.wavelength, &geometry)?;
    let kappa_bad = kappa_bad_at(length, process.bad_loss)?;
    if kappa_bad == 0.0 {
        return Err(Error::Infeasible(
            "zero bad loss: the CPF optimum is unbounded (kappa -> 0)".into(),
        ));
    }
    let c_o = g * g / (kappa_bad * gamma);
    let f_nat = cpf_fidelity_of_co(c_o);

    let infeasible = |fidelity: f64, reason: &str| Construction {
        role: CavityRole::CpfReceiver,
        rates: CavityRates {
            g,
            kappa_left: 0.0,
            kappa_right: 0.0,
            kappa_bad,
            gamma,
            omega: transition.omega(),
        },
        geometry,
        figures: ConstructionFigures {
            fidelity: Some(fidelity),
            cooperativity: 0.0,
            intrinsic_cooperativity: c_o,
            ..Default::default()
        },
        feasible: false,
        reason: Some(reason.into()),
    };

    if let Some(f) = f_min {
        if f_nat < f {
            return Ok(infeasible(f_nat, "bad-loss-limited fidelity"));
        }
    }

    // Extra uncollected loss routed through kappa_R for bandwidth padding.
    let mut kappa_r = 0.0;
    let mut fidelity = f_nat;
    if bandwidth_pad {
        if let Some(f) = f_min {
            if f_nat > f {
                // fidelity is monotone decreasing in kappa_R; bracket from
                // the closed-form target and bisect to the floor.
                let c_o_target = (2.0 * f - 1.0) / (1.0 - f);
                let pad_guess = g * g / (c_o_target * gamma) - kappa_bad;
                let (mut lo, mut hi) = (0.0_f64, (2.0 * pad_guess).max(kappa_bad));
                let f_of = |pad: f64| cpf_fidelity_of_co(g * g / ((kappa_bad + pad) * gamma));
                while f_of(hi) > f {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if f_of(mid) > f {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (f_of(lo) - f_of(hi)).abs() < 1e-6 {
                        break;
                    }
                }
                kappa_r = 0.5 * (lo + hi);
                fidelity = f_of(kappa_r);
            }
        }
    }

    let bad_eff = kappa_bad + kappa_r;
    let c_o_eff = g * g / (bad_eff * gamma);
    let c = (1.0 + c_o_eff).sqrt() - 1.0;
    let kappa = g * g / (c * gamma);
    let kappa_l = kappa - bad_eff;
    if kappa_l <= 0.0 {
        return Ok(infeasible(fidelity, "no positive collection rate at the optimum"));
    }
    let rates = CavityRates {
        g,
        kappa_left: kappa_l,
        kappa_right: kappa_r,
        kappa_bad,
        gamma,
        omega: transition.omega(),
    };
    let p_r = (1.0 + (1.0 + c) * (1.0 + c)) / ((2.0 + c) * (2.0 + c));
    Ok(Construction {
        role: CavityRole::CpfReceiver,
        rates,
        geometry,
        figures: ConstructionFigures {
            p_reflect: Some(p_r),
            fidelity: Some(fidelity),
            cooperativity: c,
            intrinsic_cooperativity: c_o,
            ..Default::default()
        },
        feasible: true,
        reason: None,
    })
}

/// Finesse required for the strong-coupling condition kappa = gamma at a
/// given length: F = pi nu_F / gamma.
pub fn scr_threshold(length: f64, gamma: f64) -> f64 {
    PI * CODATA.c / (2.0 * length) / gamma
}

/// One point of a fixed-finesse collection curve (figure-reproduction
/// mode: transmission split equally, no bad loss, no contour optimum).
#[derive(Debug, Clone, Copy)]
pub struct CollectPoint {
    pub length: f64,
    pub p1: f64,
    pub g: f64,
    pub kappa: f64,
}

/// P1 versus resonant length at pinned finesse, for one mirror radius.
pub fn fixed_finesse_curve(
    mu: f64,
    wavelength: f64,
    mirror_radius: f64,
    h_ion: f64,
    fin: f64,
    gamma: f64,
) -> Result<Vec<CollectPoint>> {
    let mut out = Vec::new();
    let upper = mirror_radius - 0.5 * wavelength;
    for length in crate::geometry::resonant_lengths(wavelength, h_ion * (1.0 + 1e-12), upper) {
        let geom = CavityGeometry { mirror_radius, length, ion_height: h_ion, wavelength };
        let g = coupling_at(mu, wavelength, &geom)?;
        let kappa = kappa_from_finesse(length, fin);
        let rates = CavityRates {
            g,
            kappa_left: 0.5 * kappa,
            kappa_right: 0.5 * kappa,
            kappa_bad: 0.0,
            gamma,
            omega: 2.0 * PI * CODATA.c / wavelength,
        };
        out.push(CollectPoint { length, p1: collection_p1(&rates).p1, g, kappa });
    }
    Ok(out)
}

/// Mirror radius for a double-resonance frequency-qubit emitter.
///
/// Both hyperfine components resonate only when the free spectral range
/// matches the splitting, pinning the length to l = pi c / delta_hf
/// (about 1.5 cm for a 10 GHz splitting). The radius is then chosen so
/// that z_R = h_ion at that length, i.e. R = l + h^2/l, making l the
/// collection-optimal root for the emitter search. The long cavity is
/// what makes frequency qubits collect poorly.
pub fn double_resonance_radius(hf_splitting: f64, h_ion: f64) -> f64 {
    let l = PI * CODATA.c / hf_splitting;
    l + h_ion * h_ion / l
}

/// Index of the curve maximum marked in the figure-reproduction mode.
///
/// `points` must be sorted by ascending length. The search descends from
/// the longest length and stops at the first strict P1 decline: that keeps
/// the marked point in the basin around the z_R = h_ion root. P1 also
/// rises again toward the short-length boundary (extraction saturates as
/// kappa grows with fixed finesse), but there the cavity degenerates into
/// a mirror touching the ion, so that branch is not a design candidate.
pub fn collect_peak_index(points: &[CollectPoint]) -> Option<usize> {
    let mut iter = points.iter().enumerate().rev();
    let (mut best_i, first) = iter.next()?;
    let mut best = first.p1;
    for (i, p) in iter {
        if p.p1 < best {
            break;
        }
        best = p.p1;
        best_i = i;
    }
    Some(best_i)
}

/// Flat serialization of a construction with explicit units in the field
/// names, for the `optimize` JSON output.
#[derive(Debug, Serialize)]
pub struct ConstructionRecord {
    pub role: CavityRole,
    pub feasible: bool,
    pub reason: Option<String>,
    pub mirror_radius_m: f64,
    pub length_m: f64,
    pub ion_height_m: f64,
    pub wavelength_m: f64,
    pub g_rad_per_s: f64,
    pub kappa_left_rad_per_s: f64,
    pub kappa_right_rad_per_s: f64,
    pub kappa_bad_rad_per_s: f64,
    pub gamma_rad_per_s: f64,
    pub cooperativity: f64,
    pub intrinsic_cooperativity: Option<f64>,
    pub p1: Option<f64>,
    pub p_transmit: Option<f64>,
    pub p_reflect: Option<f64>,
    pub fidelity: Option<f64>,
}

impl Construction {
    pub fn to_record(&self) -> ConstructionRecord {
        ConstructionRecord {
            role: self.role,
            feasible: self.feasible,
            reason: self.reason.clone(),
            mirror_radius_m: self.geometry.mirror_radius,
            length_m: self.geometry.length,
            ion_height_m: self.geometry.ion_height,
            wavelength_m: self.geometry.wavelength,
            g_rad_per_s: self.rates.g,
            kappa_left_rad_per_s: self.rates.kappa_left,
            kappa_right_rad_per_s: self.rates.kappa_right,
            kappa_bad_rad_per_s: self.rates.kappa_bad,
            gamma_rad_per_s: self.rates.gamma,
            cooperativity: self.figures.cooperativity,
            intrinsic_cooperativity: Some(self.figures.intrinsic_cooperativity)
                .filter(|c| c.is_finite()),
            p1: self.figures.p1,
            p_transmit: self.figures.p_transmit,
            p_reflect: self.figures.p_reflect,
            fidelity: self.figures.fidelity,
        }
    }
}
