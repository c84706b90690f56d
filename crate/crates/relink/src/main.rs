//! Command-line front end: sweep commands emitting CSV/JSON data files.
//!
//! Exit codes: 0 success, 2 configuration error, 3 oracle tolerance failure,
//! 1 any other failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relink::constants::CODATA;
use relink::constructions::{cpf_construction, dit_construction, emitter_construction};
use relink::geometry::MirrorProcess;
use relink::sweep::{
    cmd_advantage, cmd_collect, cmd_oracle, cmd_rates, cmd_receiver_curves, AdvantageConfig,
    CollectConfig, OracleConfig, RatesConfig, ReceiverCurvesConfig,
};
use relink::transitions::{lookup, registry};
use relink::{Error, Result};

#[derive(Parser)]
#[command(
    name = "relink",
    version,
    about = "Design-space engine for cavity-mediated remote-entanglement links",
    after_help = "Config files are TOML with a typed schema per subcommand; unknown keys are \
rejected. CLI --set overrides take dotted paths, e.g. --set bad_loss_ppm.count=25. \
All CSV output starts with '#' metadata lines (version, config hash, units)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Path to the TOML config file.
    #[arg(short, long)]
    config: PathBuf,
    /// Override a config key: dotted path, TOML-syntax value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Collection-efficiency curves P1 vs cavity length at fixed finesse.
    Collect(ConfigArgs),
    /// Receiver figures of merit vs cooperativity (kappa_L ~ kappa).
    ReceiverCurves(ConfigArgs),
    /// SCR-over-type-II advantage map over a (mirror R, bad loss) grid.
    Advantage(ConfigArgs),
    /// Success-rate curves vs bad loss for a timing scenario.
    Rates(ConfigArgs),
    /// Analytic-vs-time-domain verification report (JSON).
    Oracle {
        /// Optional TOML config; defaults apply when omitted.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Override a config key (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Role-optimal cavity construction at one process point (JSON).
    Optimize {
        /// Cavity role: emitter, dit-receiver, or cpf-receiver.
        #[arg(long)]
        role: String,
        /// Transition registry label, e.g. "Time-Bin".
        #[arg(long)]
        transition: String,
        /// Curved-mirror radius (um).
        #[arg(long)]
        radius_um: f64,
        /// Round-trip bad loss (ppm).
        #[arg(long)]
        bad_loss_ppm: f64,
        /// Ion height above the flat mirror (um).
        #[arg(long, default_value_t = 70.0)]
        h_ion_um: f64,
        /// Fidelity floor (required for dit-receiver).
        #[arg(long)]
        f_min: Option<f64>,
        /// Trade surplus CPF fidelity for bandwidth via kappa_R.
        #[arg(long)]
        bandwidth_pad: bool,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in transition registry.
    Transitions,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Load a TOML config, apply --set overrides, and return both the typed
/// value and the effective config text (used for the output hash).
fn load_config<T: serde::de::DeserializeOwned>(
    path: Option<&PathBuf>,
    sets: &[String],
) -> Result<(T, String)> {
    let base = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let mut table: toml::Table = base
        .parse()
        .map_err(|e| Error::Config(format!("config parse: {e}")))?;
    for set in sets {
        let (key, value) = set
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set needs KEY=VALUE, got '{set}'")))?;
        let value: toml::Value = value
            .parse()
            .unwrap_or_else(|_| toml::Value::String(value.to_string()));
        let mut node = &mut table;
        let parts: Vec<&str> = key.split('.').collect();
        for part in &parts[..parts.len() - 1] {
            node = node
                .entry(part.to_string())
                .or_insert(toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("'{part}' is not a table")))?;
        }
        node.insert(parts[parts.len() - 1].to_string(), value);
    }
    let text = toml::to_string(&table).map_err(|e| Error::Config(format!("config: {e}")))?;
    let typed: T = toml::Value::Table(table)
        .try_into()
        .map_err(|e| Error::Config(format!("config schema: {e}")))?;
    Ok((typed, text))
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Collect(a) => {
            let (cfg, text): (CollectConfig, _) = load_config(Some(&a.config), &a.sets)?;
            let mut out = open_output(a.output.as_ref())?;
            cmd_collect(&cfg, &text, &mut out)?;
        }
        Command::ReceiverCurves(a) => {
            let (cfg, text): (ReceiverCurvesConfig, _) = load_config(Some(&a.config), &a.sets)?;
            let mut out = open_output(a.output.as_ref())?;
            cmd_receiver_curves(&cfg, &text, &mut out)?;
        }
        Command::Advantage(a) => {
            let (cfg, text): (AdvantageConfig, _) = load_config(Some(&a.config), &a.sets)?;
            let mut out = open_output(a.output.as_ref())?;
            cmd_advantage(&cfg, &text, &mut out)?;
        }
        Command::Rates(a) => {
            let (cfg, text): (RatesConfig, _) = load_config(Some(&a.config), &a.sets)?;
            let mut out = open_output(a.output.as_ref())?;
            cmd_rates(&cfg, &text, &mut out)?;
        }
        Command::Oracle { config, sets, output } => {
            let (cfg, _): (OracleConfig, _) = load_config(config.as_ref(), sets)?;
            let mut out = open_output(output.as_ref())?;
            if !cmd_oracle(&cfg, &mut out)? {
                eprintln!("oracle: tolerance exceeded");
                return Ok(ExitCode::from(3));
            }
        }
        Command::Optimize {
            role,
            transition,
            radius_um,
            bad_loss_ppm,
            h_ion_um,
            f_min,
            bandwidth_pad,
            output,
        } => {
            let t = lookup(transition)
                .ok_or_else(|| Error::Config(format!("unknown transition '{transition}'")))?;
            let proc = MirrorProcess {
                mirror_radius_min: radius_um * 1e-6,
                bad_loss: bad_loss_ppm * 1e-6,
                transmission_left: 0.0,
                transmission_right: 0.0,
                roughness_rms: None,
            };
            let h = h_ion_um * 1e-6;
            let c = match role.as_str() {
                "emitter" => emitter_construction(&proc, t, h)?,
                "dit-receiver" => {
                    let f = f_min.ok_or_else(|| {
                        Error::Config("dit-receiver needs --f-min".into())
                    })?;
                    dit_construction(&proc, t, h, f)?
                }
                "cpf-receiver" => cpf_construction(&proc, t, h, *f_min, *bandwidth_pad)?,
                other => {
                    return Err(Error::Config(format!(
                        "unknown role '{other}' (emitter, dit-receiver, cpf-receiver)"
                    )))
                }
            };
            let mut out = open_output(output.as_ref())?;
            serde_json::to_writer_pretty(&mut out, &c.to_record())
                .map_err(|e| Error::Config(format!("serialization: {e}")))?;
            writeln!(out)?;
        }
        Command::Transitions => {
            let mut out = std::io::stdout().lock();
            writeln!(
                out,
                "{:<14} {:<8} {:>7} {:>12} {:>8} {:>10} {:>9}",
                "label", "isotope", "nm", "Gamma/2pi", "R_br", "mu_eff", "branches"
            )?;
            for t in registry() {
                writeln!(
                    out,
                    "{:<14} {:<8} {:>7.1} {:>9.1} MHz {:>8.3} {:>7.3}ea0 {:>9}",
                    t.label,
                    t.isotope,
                    t.wavelength * 1e9,
                    t.gamma_fwhm / (2.0 * std::f64::consts::PI * 1e6),
                    t.branching_ratio,
                    t.mu_eff / CODATA.e_a0,
                    t.branches.len(),
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
