//! Acceptance gate: one test per top-level criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them on success).

use std::f64::consts::PI;

use relink::constants::{dipole_from_linewidth, CODATA};
use relink::constructions::{
    collect_peak_index, cpf_construction, dit_construction, emitter_construction,
    fixed_finesse_curve, scr_threshold,
};
use relink::cqed::{collection_p1, coupling_g0, CavityRates};
use relink::geometry::{length_for_zr_equals_h, MirrorProcess};
use relink::oracle::{scatter_pulse, IntegrationConfig, PulseSpec};
use relink::protocols::{cpf_outcome, dit_outcome, LinkBudget, Protocol};
use relink::rates::{BinConvention, Modality};
use relink::sweep::{advantage_point, oracle_report, rate_point, OracleConfig};
use relink::transitions::{lookup, registry};

const UM: f64 = 1e-6;

fn mhz(f: f64) -> f64 {
    2.0 * PI * f * 1e6
}

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion { name, failures: Vec::new() }
    }

    fn check(&mut self, label: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{label}: {detail}"));
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("PASS {}", self.name);
        } else {
            println!("FAIL {}", self.name);
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!("{} failed: {:?}", self.name, self.failures);
        }
    }
}

fn process(radius: f64, bad_ppm: f64) -> MirrorProcess {
    MirrorProcess {
        mirror_radius_min: radius,
        bad_loss: bad_ppm * 1e-6,
        transmission_left: 0.0,
        transmission_right: 0.0,
        roughness_rms: None,
    }
}

#[test]
fn criterion_1_dipole_consistency() {
    let mut c = Criterion::new("criterion 1: dipole consistency");
    let mut recomputed = Vec::new();
    for t in registry() {
        for b in &t.branches {
            let mu = dipole_from_linewidth(
                t.wavelength,
                t.gamma_fwhm,
                t.branching_ratio,
                b.dipole_overlap,
            )
            .unwrap();
            let rel = (mu - b.mu_eps).abs() / b.mu_eps;
            c.check(
                &format!("{} branch", t.label),
                rel < 0.01,
                format!("relative error {rel:.4}"),
            );
            recomputed.push(mu / CODATA.e_a0);
        }
        let rss: f64 = t.branches.iter().map(|b| b.mu_eps.powi(2)).sum::<f64>().sqrt();
        let rel = (rss - t.mu_eff).abs() / t.mu_eff;
        c.check(&format!("{} mu_eff", t.label), rel < 0.01, format!("relative error {rel:.4}"));
    }
    for expect in [2.343, 1.907, 1.913, 1.348, 1.353] {
        let tabulated: Vec<f64> = registry()
            .iter()
            .flat_map(|t| t.branches.iter().map(|b| b.mu_eps / CODATA.e_a0))
            .chain(registry().iter().map(|t| t.mu_eff / CODATA.e_a0))
            .collect();
        let hit = tabulated.iter().any(|v| (v - expect).abs() / expect < 0.01);
        c.check("tabulated set", hit, format!("missing {expect} e*a0"));
    }
    let mu = dipole_from_linewidth(493e-9, mhz(19.9), 0.735, 1.0).unwrap() / CODATA.e_a0;
    c.check("493 nm full dipole", (mu - 2.34).abs() / 2.34 < 0.01, format!("mu = {mu:.4} e*a0"));
    c.finish();
}

#[test]
fn criterion_2_scr_numbers() {
    let mut c = Criterion::new("criterion 2: strong-coupling numbers");
    let f = scr_threshold(500.0 * UM, mhz(10.0));
    c.check("finesse threshold", (f - 15000.0).abs() / 15000.0 < 0.02, format!("F = {f:.0}"));
    let mu = 2.34 * CODATA.e_a0;
    let omega = 2.0 * PI * CODATA.c / 493e-9;
    let v = PI * (3e-6f64).powi(2) * 500e-6 / 4.0;
    let g = coupling_g0(mu, omega, v);
    c.check(
        "coupling benchmark",
        (g / mhz(65.0) - 1.0).abs() < 0.25,
        format!("g = 2pi*{:.1} MHz", g / mhz(1.0)),
    );
    let rates = CavityRates {
        g,
        kappa_left: mhz(10.0),
        kappa_right: 0.0,
        kappa_bad: 0.0,
        gamma: mhz(10.0),
        omega,
    };
    let coop = rates.cooperativity();
    c.check("cooperativity", coop >= 40.0, format!("C = {coop:.1}"));
    c.finish();
}

#[test]
fn criterion_3_collection_curves() {
    let mut c = Criterion::new("criterion 3: collection-efficiency curves");
    let mu = 2.34 * CODATA.e_a0;
    let gamma = 0.5 * mhz(19.9);
    let h = 70.0 * UM;
    let mut last_peak = 0.0;
    // descending R: peak P1 must strictly increase
    for r_mm in [5.0, 2.0, 1.0, 0.5, 0.3] {
        let r = r_mm * 1e-3;
        let curve = fixed_finesse_curve(mu, 493e-9, r, h, 4000.0, gamma).unwrap();
        let best = &curve[collect_peak_index(&curve).unwrap()];
        c.check(
            "monotone in R",
            best.p1 > last_peak,
            format!("R = {r_mm} mm: peak {:.4} !> {last_peak:.4}", best.p1),
        );
        last_peak = best.p1;
        if r_mm <= 1.0 {
            let l_o = length_for_zr_equals_h(r, h).unwrap();
            let rel = (best.length - l_o).abs() / l_o;
            c.check(
                "peak near z_R = h root",
                rel < 0.05,
                format!("R = {r_mm} mm: peak at {:.1} um vs l_o {:.1} um", best.length / UM, l_o / UM),
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_4_oracle_equivalence() {
    let mut c = Criterion::new("criterion 4: oracle equivalence");
    let report = oracle_report(&OracleConfig::default()).unwrap();
    c.check(
        "emission grid size",
        report.emission.len() == 20,
        format!("{} points", report.emission.len()),
    );
    c.check(
        "P1 deviation",
        report.max_p1_deviation <= 1e-3,
        format!("max |dP1| = {:.2e}", report.max_p1_deviation),
    );
    c.check(
        "coefficient deviation",
        report.max_coeff_deviation <= 1e-2,
        format!("max |dr/dt| = {:.2e}", report.max_coeff_deviation),
    );
    c.check("overall pass", report.pass, "report flagged fail".into());
    c.finish();
}

#[test]
fn criterion_5_fidelity_formulas() {
    let mut c = Criterion::new("criterion 5: fidelity formulas");
    let cc = 30.607;
    let o = dit_outcome(
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(1.0 / (1.0 + cc), 0.0),
        1.0,
        &LinkBudget::default(),
    )
    .unwrap();
    c.check("DIT fidelity at C_min", (o.fidelity - 0.999).abs() < 1e-6, format!("{}", o.fidelity));
    let o = cpf_outcome(
        num_complex::Complex64::new(-1.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        1.0,
        &LinkBudget::default(),
    );
    c.check("ideal CPF fidelity", o.fidelity == 1.0, format!("{}", o.fidelity));
    let f: f64 = (1.0 + 998.0) / (2.0 + 998.0);
    c.check("CPF construction fidelity", (f - 0.999).abs() < 1e-6, format!("{f}"));
    c.finish();
}

/// Bisect the bad loss (ppm) where the DIT advantage changes sign at fixed
/// mirror radius.
fn dit_crossing_ppm(f_min: f64) -> f64 {
    let adv = |ppm: f64| {
        advantage_point(
            Protocol::Dit,
            Modality::TimeBin,
            400.0 * UM,
            ppm * 1e-6,
            70.0 * UM,
            Some(f_min),
            1.0,
        )
        .unwrap()
        .advantage
    };
    let (mut lo, mut hi) = (1.0_f64, 300.0_f64);
    assert!(adv(lo) > 0.0, "no advantage at 1 ppm");
    if adv(hi) > 0.0 {
        return f64::INFINITY;
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if adv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

#[test]
fn criterion_6_dit_breakeven() {
    let mut c = Criterion::new("criterion 6: DIT breakeven loss");
    let x = dit_crossing_ppm(1.0 - 1e-3);
    c.check("floor 1-1e-3", (40.0..=90.0).contains(&x), format!("crossing {x:.1} ppm"));
    let x = dit_crossing_ppm(1.0 - 1e-4);
    c.check("floor 1-1e-4", x <= 30.0, format!("crossing {x:.1} ppm"));
    let x = dit_crossing_ppm(1.0 - 2e-3);
    c.check("floor 1-2e-3", x >= 90.0, format!("crossing {x:.1} ppm"));
    c.finish();
}

#[test]
fn criterion_7_cpf_claims() {
    let mut c = Criterion::new("criterion 7: CPF fidelity and advantage");
    // bad loss needed for natural fidelity 0.999 at R = 400 um
    let t = lookup("Time-Bin").unwrap();
    let fid = |ppm: f64| {
        cpf_construction(&process(400.0 * UM, ppm), t, 70.0 * UM, None, false)
            .unwrap()
            .figures
            .fidelity
            .unwrap()
    };
    let (mut lo, mut hi) = (0.5_f64, 100.0_f64);
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if fid(mid) > 0.999 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let need = (lo * hi).sqrt();
    c.check("loss for 0.999", need <= 15.0, format!("requires {need:.2} ppm"));

    // advantage over type-II exceeds 1 across the radius range
    for r_um in [250.0, 500.0, 1000.0, 2000.0, 5000.0] {
        for ppm in [1.0, 3.0, 10.0, 30.0, 100.0] {
            let p = advantage_point(
                Protocol::Cpf,
                Modality::TimeBin,
                r_um * UM,
                ppm * 1e-6,
                70.0 * UM,
                None,
                1.0,
            )
            .unwrap();
            if p.feasible {
                c.check(
                    "advantage > 1",
                    p.advantage > 1.0,
                    format!("R = {r_um} um, {ppm} ppm: {:.2}", p.advantage),
                );
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_8_rate_orderings() {
    let mut c = Criterion::new("criterion 8: rate orderings");
    let e1 = relink::rates::scenario_e1();
    let e2 = relink::rates::scenario_e2();
    let conv = BinConvention::EmitterK;
    let rp = |timing, proto, modality, ppm: f64, f_min, pad| {
        rate_point(timing, proto, modality, 400.0 * UM, ppm * 1e-6, 70.0 * UM, f_min, pad, conv)
            .unwrap()
    };

    // E1 time-bin near 99% fidelity: CPF > DIT > type-II
    let ppm = 80.0;
    let t2 = rp(&e1, Protocol::TypeIi, Modality::TimeBin, ppm, 0.99, false);
    let dit = rp(&e1, Protocol::Dit, Modality::TimeBin, ppm, 0.99, false);
    let cpf = rp(&e1, Protocol::Cpf, Modality::TimeBin, ppm, 0.99, false);
    c.check("E1 tb CPF feasible", cpf.feasible, format!("F = {}", cpf.fidelity));
    c.check(
        "E1 tb ordering",
        cpf.rate > dit.rate && dit.rate > t2.rate,
        format!("cpf {:.3e}, dit {:.3e}, type-ii {:.3e}", cpf.rate, dit.rate, t2.rate),
    );

    // headline: somewhere on the E1 grid an SCR protocol beats type-II
    // by 30-75% at fidelity >= 0.99
    let mut found = None;
    'outer: for f_min in [0.99, 0.995] {
        for ppm in [5.0, 10.0, 20.0, 30.0, 40.0, 60.0, 80.0] {
            let t2 = rp(&e1, Protocol::TypeIi, Modality::TimeBin, ppm, f_min, false);
            for proto in [Protocol::Dit, Protocol::Cpf] {
                let p = rp(&e1, proto, Modality::TimeBin, ppm, f_min, false);
                if p.feasible && p.fidelity >= 0.99 {
                    let gain = p.rate / t2.rate - 1.0;
                    if (0.30..=0.75).contains(&gain) {
                        found = Some((proto, ppm, gain));
                        break 'outer;
                    }
                }
            }
        }
    }
    c.check(
        "headline 30-75% gain",
        found.is_some(),
        "no grid point with SCR gain in [0.30, 0.75] at F >= 0.99".into(),
    );
    if let Some((proto, ppm, gain)) = found {
        println!("  headline: {proto} at {ppm} ppm gains {:.0}%", gain * 100.0);
    }

    // E2 at floor 0.999 and 100 ppm: type-II is the highest-rate feasible
    // protocol; frequency modality lowest within each protocol
    let mut best = (Protocol::TypeIi, Modality::Polarization, 0.0_f64);
    for modality in [Modality::Polarization, Modality::Frequency, Modality::TimeBin] {
        for proto in [Protocol::TypeIi, Protocol::Dit, Protocol::Cpf] {
            let p = rp(&e2, proto, modality, 100.0, 0.999, true);
            if p.feasible && p.rate > best.2 {
                best = (proto, modality, p.rate);
            }
        }
    }
    c.check(
        "E2 type-II on top",
        best.0 == Protocol::TypeIi,
        format!("best is {} {} at {:.3e} Hz", best.0, best.1, best.2),
    );
    for modality in [Modality::Polarization, Modality::TimeBin] {
        let t2 = rp(&e2, Protocol::TypeIi, modality, 100.0, 0.999, true);
        for proto in [Protocol::Dit, Protocol::Cpf] {
            let p = rp(&e2, proto, modality, 100.0, 0.999, true);
            if p.feasible {
                c.check(
                    "E2 type-II per modality",
                    t2.rate > p.rate,
                    format!("{modality}: {proto} {:.3e} >= type-ii {:.3e}", p.rate, t2.rate),
                );
            }
        }
    }
    for proto in [Protocol::TypeIi, Protocol::Dit, Protocol::Cpf] {
        let rates: Vec<(Modality, f64)> =
            [Modality::Polarization, Modality::Frequency, Modality::TimeBin]
                .into_iter()
                .map(|m| (m, rp(&e2, proto, m, 100.0, 0.999, true)))
                .filter(|(_, p)| p.feasible)
                .map(|(m, p)| (m, p.rate))
                .collect();
        if let Some(freq) = rates.iter().find(|(m, _)| *m == Modality::Frequency) {
            for (m, r) in &rates {
                if *m != Modality::Frequency {
                    c.check(
                        "frequency lowest",
                        freq.1 < *r,
                        format!("{proto}: frequency {:.3e} !< {m} {r:.3e}", freq.1),
                    );
                }
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_9_property_suites() {
    let mut c = Criterion::new("criterion 9: property suites");

    // energy conservation without bad loss
    let rates = CavityRates {
        g: mhz(23.0),
        kappa_left: mhz(7.0),
        kappa_right: mhz(4.0),
        kappa_bad: 0.0,
        gamma: mhz(10.0),
        omega: 1e15,
    };
    let pulse = PulseSpec { center_detuning: mhz(5.0), sigma_omega: mhz(2.0) };
    let horizon = 12.0 * pulse.sigma_t() + 12.0 / rates.decay_k();
    let cfg = IntegrationConfig { dt: 0.01 / mhz(30.0), horizon, tolerance: 1e-2 };
    let out = scatter_pulse(&rates, &pulse, &cfg).unwrap();
    let total =
        out.reflected_energy + out.transmitted_energy + out.spont_energy + out.residual_energy;
    c.check("energy conservation", (total - 1.0).abs() < 1e-3, format!("total {total:.6}"));

    // DIT fidelity invariant under mode matching
    let tu = num_complex::Complex64::new(0.9, 0.0);
    let tc = num_complex::Complex64::new(0.07, 0.0);
    let f1 = dit_outcome(tu, tc, 0.6, &LinkBudget { xi: 1.0, ..Default::default() })
        .unwrap()
        .fidelity;
    let f2 = dit_outcome(tu, tc, 0.6, &LinkBudget { xi: 0.2, ..Default::default() })
        .unwrap()
        .fidelity;
    c.check("DIT xi-invariance", f1 == f2, format!("{f1} vs {f2}"));

    // exact pi phase of the uncoupled reflection for 2 kappa_L > kappa
    let r = CavityRates {
        g: mhz(30.0),
        kappa_left: mhz(8.0),
        kappa_right: 0.0,
        kappa_bad: mhz(3.0),
        gamma: mhz(10.0),
        omega: 1e15,
    };
    let ru = relink::scattering::cpf_reflection(&r, false);
    c.check("CPF pi phase", ru.re < 0.0 && ru.im == 0.0, format!("r_u = {ru}"));

    // construction-contour local optimality under +-5% perturbation
    let t = lookup("Time-Bin").unwrap();
    let proc = process(400.0 * UM, 30.0);
    let em = emitter_construction(&proc, t, 70.0 * UM).unwrap();
    let p0 = em.figures.p1.unwrap();
    for scale in [0.95, 1.05] {
        let mut rr = em.rates;
        rr.kappa_left *= scale;
        let p = collection_p1(&rr).p1;
        c.check("emitter contour optimal", p <= p0, format!("scale {scale}: {p} > {p0}"));
    }
    let dit = dit_construction(&proc, t, 70.0 * UM, 0.999).unwrap();
    let fdit = {
        let cc = dit.rates.cooperativity();
        let one = (1.0 + cc) * (1.0 + cc);
        one / (one + 1.0)
    };
    c.check("DIT saturates floor", (fdit - 0.999).abs() < 1e-9, format!("F = {fdit}"));
    let cpf = cpf_construction(&proc, t, 70.0 * UM, None, false).unwrap();
    let fp = |rr: &CavityRates| {
        let ru = relink::scattering::cpf_reflection(rr, false);
        let rc = relink::scattering::cpf_reflection(rr, true);
        let o = cpf_outcome(ru, rc, 1.0, &LinkBudget::default());
        o.fidelity * o.success_prob
    };
    let fp0 = fp(&cpf.rates);
    for scale in [0.95, 1.05] {
        let mut rr = cpf.rates;
        rr.kappa_left *= scale;
        c.check(
            "CPF contour optimal",
            fp(&rr) < fp0,
            format!("scale {scale}: {} !< {fp0}", fp(&rr)),
        );
    }

    // determinism of CSV output across runs and thread counts
    let cfg = relink::sweep::AdvantageConfig {
        protocol: Protocol::Dit,
        modality: Modality::TimeBin,
        f_min: Some(0.999),
        h_ion_um: 70.0,
        xi: 1.0,
        mirror_radius_um: relink::sweep::AxisSpec {
            min: 300.0,
            max: 2000.0,
            count: 4,
            scale: relink::sweep::Scale::Log,
        },
        bad_loss_ppm: relink::sweep::AxisSpec {
            min: 1.0,
            max: 200.0,
            count: 5,
            scale: relink::sweep::Scale::Log,
        },
    };
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut buf = Vec::new();
            relink::sweep::cmd_advantage(&cfg, "cfg-text", &mut buf).unwrap();
            buf
        })
    };
    let a = run_with(1);
    let b = run_with(1);
    let d = run_with(4);
    c.check("CSV determinism (rerun)", a == b, "bytes differ across runs".into());
    c.check("CSV determinism (threads)", a == d, "bytes differ across thread counts".into());
    c.finish();
}
