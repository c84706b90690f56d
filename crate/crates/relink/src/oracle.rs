//! Independent time-domain verification of the analytic results: fixed-step
//! RK4 integration of the single-excitation non-Hermitian amplitude
//! equations, for both spontaneous emission (collection probability) and
//! driven pulse scattering (reflection/transmission spectra).
//!
//! Frame convention: amplitudes rotate at the probe carrier; a mode with
//! detuning Delta evolves freely as exp(-(i Delta + decay) t). Under the
//! Fourier kernel exp(+i nu t) used below, the spectral component extracted
//! at offset nu therefore sees effective detunings (Delta - nu).

use num_complex::Complex64;

use crate::cqed::CavityRates;
use crate::scattering::{reflection_coeff, transmission_coeff, Detunings};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fixed-step RK4 configuration. The step policy
/// dt * max(g, kappa, gamma, |Delta|) <= 0.02 and horizon >= 10/K are
/// enforced before integrating.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationConfig {
    /// Fixed time step (s).
    pub dt: f64,
    /// Total integration time (s).
    pub horizon: f64,
    /// Acceptance threshold for analytic-vs-oracle comparisons.
    pub tolerance: f64,
}

impl IntegrationConfig {
    /// Check the step policy against the fastest system rate.
    pub fn validate(&self, rates: &CavityRates, max_detuning: f64) -> Result<()> {
        if !(self.dt > 0.0) || !(self.horizon > 0.0) {
            return Err(Error::Integration("dt and horizon must be positive".into()));
        }
        let fastest = rates
            .g
            .max(rates.kappa())
            .max(rates.gamma)
            .max(max_detuning.abs());
        if self.dt * fastest > 0.02 {
            return Err(Error::Integration(format!(
                "step policy violated: dt*max_rate = {:.3e} > 0.02",
                self.dt * fastest
            )));
        }
        if self.horizon < 10.0 / rates.decay_k() {
            return Err(Error::Integration(format!(
                "horizon {:.3e} s below 10/K = {:.3e} s",
                self.horizon,
                10.0 / rates.decay_k()
            )));
        }
        Ok(())
    }

    /// Policy-compliant config for a parameter set: dt at the policy bound
    /// with 2x margin, horizon max(10/K, min_horizon).
    pub fn for_rates(rates: &CavityRates, max_detuning: f64, min_horizon: f64) -> Self {
        let fastest = rates
            .g
            .max(rates.kappa())
            .max(rates.gamma)
            .max(max_detuning.abs())
            .max(1.0);
        IntegrationConfig {
            dt: 0.01 / fastest,
            horizon: (10.0 / rates.decay_k()).max(min_horizon),
            tolerance: 1e-2,
        }
    }
}

/// Normalized Gaussian probe pulse.
#[derive(Debug, Clone, Copy)]
pub struct PulseSpec {
    /// Carrier detuning from the (common) atom/cavity resonance (rad/s).
    pub center_detuning: f64,
    /// Spectral standard deviation sigma_omega (rad/s).
    pub sigma_omega: f64,
}

impl PulseSpec {
    /// Temporal standard deviation sigma_t = 1/(2 sigma_omega).
    pub fn sigma_t(&self) -> f64 {
        1.0 / (2.0 * self.sigma_omega)
    }

    /// Unit-energy amplitude envelope centered at t0 (1/sqrt(s)).
    pub fn envelope(&self, t: f64, t0: f64) -> f64 {
        let st = self.sigma_t();
        let x = t - t0;
        (2.0 * std::f64::consts::PI * st * st).powf(-0.25) * (-x * x / (4.0 * st * st)).exp()
    }
}

/// Collection probability P(s) = 2 kappa_L int_0^s |c_g1|^2 dt from the
/// undriven amplitude equations with the atom excited at t = 0:
/// dc_e/dt = -gamma c_e - i g c_g1, dc_g1/dt = -kappa c_g1 - i g c_e.
pub fn emission_p_of_s(rates: &CavityRates, s: f64, cfg: &IntegrationConfig) -> Result<f64> {
    let mut local = *cfg;
    local.horizon = local.horizon.max(s);
    local.validate(rates, 0.0)?;
    let (g, kappa, gamma, kl) = (rates.g, rates.kappa(), rates.gamma, rates.kappa_left);
    // state: (c_e, c_g1, accumulated P); the accumulator rides along in the
    // RK4 stages so the quadrature is fourth order too.
    let deriv = |y: &[Complex64; 3]| -> [Complex64; 3] {
        [
            -gamma * y[0] - I * g * y[1],
            -kappa * y[1] - I * g * y[0],
            Complex64::new(2.0 * kl * y[1].norm_sqr(), 0.0),
        ]
    };
    let n = (s / cfg.dt).ceil() as usize;
    let dt = s / n as f64;
    let mut y = [Complex64::new(1.0, 0.0), Complex64::ZERO, Complex64::ZERO];
    for _ in 0..n {
        y = rk4_step(&deriv, &y, dt);
    }
    Ok(y[2].re)
}

fn rk4_step<const N: usize>(
    f: &impl Fn(&[Complex64; N]) -> [Complex64; N],
    y: &[Complex64; N],
    dt: f64,
) -> [Complex64; N] {
    let add = |a: &[Complex64; N], b: &[Complex64; N], s: f64| {
        let mut out = *a;
        for i in 0..N {
            out[i] += s * b[i];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&add(y, &k1, 0.5 * dt));
    let k3 = f(&add(y, &k2, 0.5 * dt));
    let k4 = f(&add(y, &k3, dt));
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Result of one driven-scattering integration.
#[derive(Debug, Clone)]
pub struct ScatterResult {
    /// Energy leaving through the left (input) port.
    pub reflected_energy: f64,
    /// Energy leaving through the right port.
    pub transmitted_energy: f64,
    /// Energy lost to free-space spontaneous emission.
    pub spont_energy: f64,
    /// Energy lost to the bad (scatter/absorption) channel.
    pub bad_energy: f64,
    /// Energy still inside cavity + atom at the horizon.
    pub residual_energy: f64,
    /// |overlap| of the reflected waveform with the input envelope.
    pub flat_phase_overlap: f64,
    /// Sample times (s).
    pub times: Vec<f64>,
    /// Input amplitude at the sample times.
    pub input_waveform: Vec<Complex64>,
    /// Left-port output amplitude.
    pub reflected_waveform: Vec<Complex64>,
    /// Right-port output amplitude.
    pub transmitted_waveform: Vec<Complex64>,
}

/// Integrate the driven single-excitation equations
///   da/dt = -(i Delta_c + kappa) a - i g sigma - sqrt(2 kappa_L) a_in(t)
///   dsigma/dt = -(i Delta_a + gamma) sigma - i g a
/// with input-output relations a_out,L = a_in + sqrt(2 kappa_L) a and
/// a_out,R = -sqrt(2 kappa_R) a. The drive/output signs are fixed so the
/// narrowband limit reproduces the analytic coefficients (resonant
/// overcoupled reflection = -a_in).
pub fn scatter_pulse(
    rates: &CavityRates,
    pulse: &PulseSpec,
    cfg: &IntegrationConfig,
) -> Result<ScatterResult> {
    cfg.validate(rates, pulse.center_detuning.abs() + 3.0 * pulse.sigma_omega)?;
    let st = pulse.sigma_t();
    let t0 = 6.0 * st;
    if cfg.horizon < t0 + 6.0 * st + 10.0 / rates.decay_k() {
        return Err(Error::Integration(format!(
            "horizon {:.3e} s does not cover the pulse plus 10/K ring-down",
            cfg.horizon
        )));
    }
    let (g, kappa, gamma) = (rates.g, rates.kappa(), rates.gamma);
    let (kl, kr, kb) = (rates.kappa_left, rates.kappa_right, rates.kappa_bad);
    let (dc, da) = (pulse.center_detuning, pulse.center_detuning);
    let sql = (2.0 * kl).sqrt();
    let sqr = (2.0 * kr).sqrt();

    let n = (cfg.horizon / cfg.dt).ceil() as usize;
    let dt = cfg.horizon / n as f64;
    let a_in = |t: f64| Complex64::new(pulse.envelope(t, t0), 0.0);

    // state: (a, sigma, E_L, E_R, E_spont, E_bad)
    let deriv = |t: f64, y: &[Complex64; 6]| -> [Complex64; 6] {
        let ain = a_in(t);
        let out_l = ain + sql * y[0];
        [
            -(I * dc + kappa) * y[0] - I * g * y[1] - sql * ain,
            -(I * da + gamma) * y[1] - I * g * y[0],
            Complex64::new(out_l.norm_sqr(), 0.0),
            Complex64::new(2.0 * kr * y[0].norm_sqr(), 0.0),
            Complex64::new(2.0 * gamma * y[1].norm_sqr(), 0.0),
            Complex64::new(2.0 * kb * y[0].norm_sqr(), 0.0),
        ]
    };

    let mut y = [Complex64::ZERO; 6];
    let mut times = Vec::with_capacity(n + 1);
    let mut w_in = Vec::with_capacity(n + 1);
    let mut w_l = Vec::with_capacity(n + 1);
    let mut w_r = Vec::with_capacity(n + 1);
    let mut store = |t: f64, y: &[Complex64; 6]| {
        let ain = a_in(t);
        times.push(t);
        w_in.push(ain);
        w_l.push(ain + sql * y[0]);
        w_r.push(-sqr * y[0]);
    };
    store(0.0, &y);
    for i in 0..n {
        let t = i as f64 * dt;
        // time-dependent drive: wrap the autonomous stepper with t frozen
        // per stage
        let k1 = deriv(t, &y);
        let y2 = stage(&y, &k1, 0.5 * dt);
        let k2 = deriv(t + 0.5 * dt, &y2);
        let y3 = stage(&y, &k2, 0.5 * dt);
        let k3 = deriv(t + 0.5 * dt, &y3);
        let y4 = stage(&y, &k3, dt);
        let k4 = deriv(t + dt, &y4);
        for j in 0..6 {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        store((i + 1) as f64 * dt, &y);
    }

    let residual = y[0].norm_sqr() + y[1].norm_sqr();
    let mut cross = Complex64::ZERO;
    let (mut n_l, mut n_in) = (0.0, 0.0);
    for (l, i_) in w_l.iter().zip(&w_in) {
        cross += l.conj() * i_;
        n_l += l.norm_sqr();
        n_in += i_.norm_sqr();
    }
    let flat = if n_l > 0.0 && n_in > 0.0 { cross.norm() / (n_l * n_in).sqrt() } else { 0.0 };

    Ok(ScatterResult {
        reflected_energy: y[2].re,
        transmitted_energy: y[3].re,
        spont_energy: y[4].re,
        bad_energy: y[5].re,
        residual_energy: residual,
        flat_phase_overlap: flat,
        times,
        input_waveform: w_in,
        reflected_waveform: w_l,
        transmitted_waveform: w_r,
    })
}

fn stage(y: &[Complex64; 6], k: &[Complex64; 6], s: f64) -> [Complex64; 6] {
    let mut out = *y;
    for i in 0..6 {
        out[i] += s * k[i];
    }
    out
}

/// Fourier-extract the empirical reflection/transmission coefficients from
/// a scattering run and return the maximum deviation from the analytic
/// coefficients over the band |nu| <= 2 sigma_omega.
pub fn fourier_check(
    rates: &CavityRates,
    pulse: &PulseSpec,
    cfg: &IntegrationConfig,
) -> Result<f64> {
    let res = scatter_pulse(rates, pulse, cfg)?;
    let dt = res.times[1] - res.times[0];
    let transform = |w: &[Complex64], nu: f64| -> Complex64 {
        // trapezoid; endpoints are exponentially small
        let mut acc = Complex64::ZERO;
        for (&t, &v) in res.times.iter().zip(w) {
            acc += v * (I * nu * t).exp();
        }
        acc * dt
    };
    let peak_in = transform(&res.input_waveform, 0.0).norm();
    if peak_in <= 0.0 {
        return Err(Error::Domain("input pulse has no spectral content".into()));
    }
    let mut max_dev = 0.0_f64;
    let m = 41;
    for k in 0..m {
        let nu = -2.0 * pulse.sigma_omega + 4.0 * pulse.sigma_omega * k as f64 / (m - 1) as f64;
        let ain = transform(&res.input_waveform, nu);
        if ain.norm() < 1e-6 * peak_in {
            return Err(Error::Domain(format!(
                "insufficient spectral support at offset {nu:.3e} rad/s"
            )));
        }
        let det = Detunings {
            delta_a: pulse.center_detuning - nu,
            delta_c: pulse.center_detuning - nu,
        };
        let r_hat = transform(&res.reflected_waveform, nu) / ain;
        let r_ana = reflection_coeff(rates, &det)?;
        max_dev = max_dev.max((r_hat - r_ana).norm());
        if rates.kappa_right > 0.0 {
            let t_hat = transform(&res.transmitted_waveform, nu) / ain;
            let t_ana = transmission_coeff(rates, &det)?;
            max_dev = max_dev.max((t_hat - t_ana).norm());
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cqed::collection_p1;
    use std::f64::consts::PI;

    fn mhz(f: f64) -> f64 {
        2.0 * PI * f * 1e6
    }

    fn rates(g: f64, kl: f64, kr: f64, kb: f64, gamma: f64) -> CavityRates {
        CavityRates { g, kappa_left: kl, kappa_right: kr, kappa_bad: kb, gamma, omega: 1e15 }
    }

    #[test]
    fn emission_matches_analytic_p1() {
        let r = rates(mhz(50.0), mhz(50.0), 0.0, 0.0, mhz(10.0));
        let cfg = IntegrationConfig::for_rates(&r, 0.0, 0.0);
        let s = 12.0 / r.decay_k();
        let p = emission_p_of_s(&r, s, &cfg).unwrap();
        let p1 = collection_p1(&r).p1;
        assert!((p - p1).abs() < 1e-3, "oracle {p} vs analytic {p1}");
        assert!((p - 0.694).abs() < 1e-3);
    }

    #[test]
    fn emission_trivial_zeros() {
        let cfg_for = |r: &CavityRates| IntegrationConfig::for_rates(r, 0.0, 0.0);
        let r = rates(0.0, mhz(50.0), 0.0, 0.0, mhz(10.0));
        assert!(emission_p_of_s(&r, 12.0 / r.decay_k(), &cfg_for(&r)).unwrap() < 1e-12);
        let r = rates(mhz(50.0), 0.0, mhz(30.0), 0.0, mhz(10.0));
        assert!(emission_p_of_s(&r, 12.0 / r.decay_k(), &cfg_for(&r)).unwrap() < 1e-12);
    }

    #[test]
    fn emission_nondecreasing_and_convergent() {
        let r = rates(mhz(30.0), mhz(20.0), 0.0, mhz(1.0), mhz(10.0));
        let cfg = IntegrationConfig::for_rates(&r, 0.0, 0.0);
        let k = r.decay_k();
        let mut last = 0.0;
        for s_mult in [1.0, 2.0, 4.0, 8.0, 12.0] {
            let p = emission_p_of_s(&r, s_mult / k, &cfg).unwrap();
            assert!(p >= last);
            last = p;
        }
        let p1 = collection_p1(&r).p1;
        assert!((last - p1).abs() < 1e-3);
    }

    #[test]
    fn step_policy_enforced() {
        let r = rates(mhz(50.0), mhz(50.0), 0.0, 0.0, mhz(10.0));
        let bad = IntegrationConfig { dt: 1.0 / mhz(50.0), horizon: 1e-6, tolerance: 1e-2 };
        assert!(matches!(
            emission_p_of_s(&r, 1e-7, &bad),
            Err(Error::Integration(_))
        ));
    }

    #[test]
    fn narrowband_reflection_has_pi_phase() {
        // g = 0, one-port overcoupled: reflected ~ -a_in
        let k = mhz(10.0);
        let r = rates(0.0, k, 0.0, 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: 0.0, sigma_omega: k / 100.0 };
        let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.01 / k, horizon, tolerance: 1e-2 };
        let out = scatter_pulse(&r, &pulse, &cfg).unwrap();
        assert!((out.reflected_energy - 1.0).abs() < 1e-3, "E_L = {}", out.reflected_energy);
        assert!(out.flat_phase_overlap > 0.999);
        // peak of the reflected waveform is negative real
        let peak = out
            .reflected_waveform
            .iter()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        assert!(peak.re < 0.0 && peak.im.abs() < 1e-3 * peak.re.abs());
    }

    #[test]
    fn narrowband_transmission_balanced() {
        let k = mhz(10.0);
        let r = rates(0.0, k / 2.0, k / 2.0, 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: 0.0, sigma_omega: k / 100.0 };
        let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.01 / k, horizon, tolerance: 1e-2 };
        let out = scatter_pulse(&r, &pulse, &cfg).unwrap();
        assert!(out.transmitted_energy > 0.999, "E_R = {}", out.transmitted_energy);
    }

    #[test]
    fn wideband_overlap_degrades() {
        let k = mhz(10.0);
        let r = rates(0.0, k, 0.0, 0.0, mhz(10.0));
        let mut overlaps = Vec::new();
        for frac in [0.01, 0.3, 1.0] {
            let pulse = PulseSpec { center_detuning: 0.0, sigma_omega: k * frac };
            let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
            let cfg = IntegrationConfig { dt: 0.005 / k, horizon, tolerance: 1e-2 };
            overlaps.push(scatter_pulse(&r, &pulse, &cfg).unwrap().flat_phase_overlap);
        }
        assert!(overlaps[0] > overlaps[1] && overlaps[1] > overlaps[2], "{overlaps:?}");
    }

    #[test]
    fn energy_conserved_without_bad_loss() {
        let r = rates(mhz(23.0), mhz(7.0), mhz(4.0), 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: mhz(5.0), sigma_omega: mhz(2.0) };
        let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.01 / mhz(30.0), horizon, tolerance: 1e-2 };
        let out = scatter_pulse(&r, &pulse, &cfg).unwrap();
        let total = out.reflected_energy
            + out.transmitted_energy
            + out.spont_energy
            + out.residual_energy;
        assert!((total - 1.0).abs() < 1e-3, "total = {total}");
        assert_eq!(out.bad_energy, 0.0);
    }

    #[test]
    fn fourier_matches_analytic_coefficients() {
        let r = rates(mhz(21.0), mhz(6.0), mhz(4.0), mhz(0.5), mhz(10.0));
        let pulse = PulseSpec { center_detuning: mhz(3.0), sigma_omega: mhz(1.0) };
        let horizon = 14.0 * pulse.sigma_t() + 14.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.01 / mhz(30.0), horizon, tolerance: 1e-2 };
        let dev = fourier_check(&r, &pulse, &cfg).unwrap();
        assert!(dev < 1e-2, "max deviation {dev}");
    }

    #[test]
    fn fourier_bare_cavity_lorentzian() {
        let k = mhz(10.0);
        let r = rates(0.0, k, 0.0, 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: mhz(4.0), sigma_omega: mhz(1.5) };
        let horizon = 14.0 * pulse.sigma_t() + 14.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.005 / k, horizon, tolerance: 1e-2 };
        let dev = fourier_check(&r, &pulse, &cfg).unwrap();
        assert!(dev < 1e-2, "max deviation {dev}");
    }

    #[test]
    fn one_port_transmits_nothing() {
        let r = rates(mhz(20.0), mhz(10.0), 0.0, 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: 0.0, sigma_omega: mhz(1.0) };
        let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
        let cfg = IntegrationConfig { dt: 0.01 / mhz(20.0), horizon, tolerance: 1e-2 };
        let out = scatter_pulse(&r, &pulse, &cfg).unwrap();
        assert_eq!(out.transmitted_energy, 0.0);
        assert!(out.transmitted_waveform.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn halving_dt_barely_changes_results() {
        let r = rates(mhz(17.0), mhz(6.0), mhz(6.0), 0.0, mhz(10.0));
        let pulse = PulseSpec { center_detuning: 0.0, sigma_omega: mhz(1.0) };
        let horizon = 12.0 * pulse.sigma_t() + 12.0 / r.decay_k();
        let c1 = IntegrationConfig { dt: 0.02 / mhz(17.0), horizon, tolerance: 1e-2 };
        let c2 = IntegrationConfig { dt: 0.01 / mhz(17.0), horizon, tolerance: 1e-2 };
        let o1 = scatter_pulse(&r, &pulse, &c1).unwrap();
        let o2 = scatter_pulse(&r, &pulse, &c2).unwrap();
        assert!((o1.reflected_energy - o2.reflected_energy).abs() < 1e-4);
        assert!((o1.transmitted_energy - o2.transmitted_energy).abs() < 1e-4);
    }
}
