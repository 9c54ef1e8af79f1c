//! `exciton`: command-line front end for the exciton decay library.
//!
//! Exit codes: 0 ok, 1 validation failed, 2 usage or domain error,
//! 3 numerical failure.

mod config;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use exciton_decay::{
    allowed_k, band_edges, critical_ka, dark_window, dipole_coupling, dispersion, figure_bundle,
    gamma_exciton, intensity_trace, scan, validate_grid, EvalMode, ExcitonState, LatticeParams,
    QuadratureSpec, ScanSpec,
};

use crate::config::ConfigFile;
use crate::output::{sci, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn finite(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

fn mode(s: &str) -> std::result::Result<EvalMode, String> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(
    name = "exciton",
    version,
    about = "Exciton dispersion and collective radiative decay in a 1D atomic lattice"
)]
struct Cli {
    /// Transition energy E_a in eV [default: 1]
    #[arg(long, global = true, value_parser = finite)]
    ea_ev: Option<f64>,
    /// Lattice constant a in Å [default: 1000]
    #[arg(long, global = true, value_parser = finite)]
    a_angstrom: Option<f64>,
    /// Transition dipole μ in e·Å [default: 1]
    #[arg(long, global = true, value_parser = finite)]
    mu_e_angstrom: Option<f64>,
    /// Dipole angle to the lattice axis in degrees [default: 0]
    #[arg(long, global = true, value_parser = finite)]
    theta_deg: Option<f64>,
    /// Neighbour shells in the dispersion sum [default: 1]
    #[arg(long, global = true)]
    neighbor_cutoff: Option<u32>,
    /// Rate evaluation: formula or lightcone [default: formula]
    #[arg(long, global = true, value_parser = mode)]
    mode: Option<EvalMode>,
    /// Table format [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (directory for `figures`); stdout when absent
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// key=value file with defaults for the flags above
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Damping rate of one exciton
    Gamma {
        #[arg(long, value_parser = finite)]
        ka: f64,
    },
    /// Exciton energy at one ka, on the N-site k-grid, or band summary
    Dispersion {
        #[arg(long, value_parser = finite, conflicts_with = "sites")]
        ka: Option<f64>,
        /// List the allowed wave numbers of an N-site ring (N even)
        #[arg(long)]
        sites: Option<usize>,
    },
    /// Damping rate against ka at fixed θ
    ScanKa {
        #[arg(long, value_parser = finite, default_value_t = 0.001)]
        lo: f64,
        #[arg(long, value_parser = finite, default_value_t = PI)]
        hi: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// Record the free-atom rate in the table metadata
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        atom_reference: bool,
    },
    /// Damping rate against θ (degrees) at fixed ka
    ScanTheta {
        #[arg(long, value_parser = finite)]
        ka: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, value_parser = finite, default_value_t = 180.0)]
        hi: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        atom_reference: bool,
    },
    /// Wave number beyond which the exciton stops radiating
    CriticalK,
    /// Angles at which the exciton is dark, at fixed ka
    DarkWindow {
        #[arg(long, value_parser = finite)]
        ka: f64,
    },
    /// Emitted intensity against time at a fixed observation point
    Intensity {
        #[arg(long, value_parser = finite, default_value_t = 0.01)]
        ka: f64,
        /// Distance from the chain in Å
        #[arg(long, value_parser = finite, default_value_t = 1e7)]
        rho: f64,
        /// Axial coordinate in Å
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        z: f64,
        /// First sample time in s
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        t_start: f64,
        /// Last sample time in s
        #[arg(long, value_parser = finite, default_value_t = 1e-7)]
        t_end: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Number of lattice sites N
        #[arg(long, default_value_t = 1000)]
        sites: u64,
        /// Initial exciton population ⟨B†B⟩
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        population: f64,
    },
    /// Write the six standard curves into the --output directory
    Figures,
    /// Cross-check the closed-form rate against golden-rule quadrature
    Validate {
        #[arg(long, value_parser = finite, default_value_t = 0.01)]
        ka_lo: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.45)]
        ka_hi: f64,
        #[arg(long, default_value_t = 20)]
        ka_steps: usize,
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        theta_lo: f64,
        #[arg(long, value_parser = finite, default_value_t = 90.0)]
        theta_hi: f64,
        #[arg(long, default_value_t = 20)]
        theta_steps: usize,
        #[arg(long, value_parser = finite, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, default_value_t = 200)]
        max_subdivisions: usize,
    },
}

/// Flags resolved against the config file and the built-in defaults.
struct Settings {
    params: LatticeParams,
    theta_deg: f64,
    mode: EvalMode,
    format: Format,
    output: Output,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let pick = |flag: Option<f64>, key: &str, default: f64| -> Result<f64> {
        Ok(match flag {
            Some(v) => v,
            None => file.get_finite(key)?.unwrap_or(default),
        })
    };
    let ea = pick(cli.ea_ev, "ea-ev", 1.0)?;
    let a = pick(cli.a_angstrom, "a-angstrom", 1000.0)?;
    let mu = pick(cli.mu_e_angstrom, "mu-e-angstrom", 1.0)?;
    let theta_deg = pick(cli.theta_deg, "theta-deg", 0.0)?;
    let cutoff = match cli.neighbor_cutoff {
        Some(n) => n,
        None => file.get("neighbor-cutoff")?.unwrap_or(1),
    };
    let mode = match cli.mode {
        Some(m) => m,
        None => file.get("mode")?.unwrap_or_default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match file.get::<String>("format")? {
            Some(s) => Format::from_str(&s, true).map_err(anyhow::Error::msg)?,
            None => Format::Csv,
        },
    };
    let params =
        LatticeParams::new(ea, a, mu, theta_deg.to_radians())?.with_neighbor_cutoff(cutoff)?;
    Ok(Settings {
        params,
        theta_deg,
        mode,
        format,
        output: Output::new(cli.output.clone()),
    })
}

enum Outcome {
    Done,
    ValidationFailed,
}

fn run(cli: &Cli) -> Result<Outcome> {
    let s = settings(cli)?;
    let p = &s.params;
    match &cli.command {
        Command::Gamma { ka } => {
            let d = gamma_exciton(p, *ka, s.mode)?;
            let text = match s.format {
                Format::Json => serde_json::to_string_pretty(&d)? + "\n",
                Format::Csv => format!(
                    "gamma_per_s={}\nratio={}\nregime={}\nbracket={}\nr={}\nmode={}\n",
                    sci(d.gamma),
                    sci(d.ratio),
                    d.regime,
                    sci(d.bracket),
                    sci(d.r),
                    d.mode
                ),
            };
            s.output.write(&text)?;
        }
        Command::Dispersion { ka, sites } => {
            let text = if let Some(n) = sites {
                let mut out = String::from("ka,energy_ev\n");
                for k in allowed_k(*n)? {
                    out += &format!("{},{}\n", sci(k), sci(dispersion(p, k)?.energy));
                }
                out
            } else if let Some(k) = ka {
                let m = dispersion(p, *k)?;
                format!("ka={}\nenergy_ev={}\n", sci(m.ka), sci(m.energy))
            } else {
                let j = dipole_coupling(p, p.a())?;
                let (lo, hi) = band_edges(p);
                format!(
                    "coupling_ev={}\nband_min_ev={}\nband_max_ev={}\nband_width_ev={}\n",
                    sci(j),
                    sci(lo),
                    sci(hi),
                    sci(hi - lo)
                )
            };
            s.output.write(&text)?;
        }
        Command::ScanKa {
            lo,
            hi,
            steps,
            atom_reference,
        } => {
            let spec = ScanSpec {
                include_atom_reference: *atom_reference,
                ..ScanSpec::ka(s.theta_deg, *lo, *hi, *steps).with_mode(s.mode)
            };
            let table = scan(p, &spec)?;
            s.output.write(&table_text(&table, s.format))?;
        }
        Command::ScanTheta {
            ka,
            lo,
            hi,
            steps,
            atom_reference,
        } => {
            let spec = ScanSpec {
                include_atom_reference: *atom_reference,
                ..ScanSpec::theta(*ka, *lo, *hi, *steps).with_mode(s.mode)
            };
            let table = scan(p, &spec)?;
            s.output.write(&table_text(&table, s.format))?;
        }
        Command::CriticalK => {
            let c = critical_ka(p);
            let text = match (s.format, c.ka_c) {
                (Format::Json, ka_c) => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "theta_deg": s.theta_deg,
                        "ka_c": ka_c.ok(),
                        "reason": ka_c.err().map(|r| r.to_string()),
                    }))? + "\n"
                }
                (Format::Csv, Ok(k)) => format!("ka_c={}\n", sci(k)),
                (Format::Csv, Err(reason)) => format!("none ({reason})\n"),
            };
            s.output.write(&text)?;
        }
        Command::DarkWindow { ka } => {
            let w = dark_window(p, *ka)?;
            let text = match (s.format, w) {
                (Format::Json, w) => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "ka": ka,
                        "theta_lo_deg": w.map(|w| w.lower_edge.to_degrees()),
                        "theta_hi_deg": w.map(|w| w.upper_edge.to_degrees()),
                    }))? + "\n"
                }
                (Format::Csv, Some(w)) => format!(
                    "theta_lo_deg={}\ntheta_hi_deg={}\n",
                    sci(w.lower_edge.to_degrees()),
                    sci(w.upper_edge.to_degrees())
                ),
                (Format::Csv, None) => "none (rate positive at all angles)\n".to_string(),
            };
            s.output.write(&text)?;
        }
        Command::Intensity {
            ka,
            rho,
            z,
            t_start,
            t_end,
            steps,
            sites,
            population,
        } => {
            let state = ExcitonState::coherent(*population, *ka, *sites)?;
            if *steps < 2 || t_end <= t_start {
                return Err(exciton_decay::Error::Domain {
                    name: "t_end",
                    value: *t_end,
                    reason: "need t_end > t_start and at least 2 steps",
                }
                .into());
            }
            let dt = (t_end - t_start) / (*steps - 1) as f64;
            let grid: Vec<f64> = (0..*steps).map(|i| t_start + i as f64 * dt).collect();
            let trace = intensity_trace(p, &state, *rho, *z, &grid)?;
            let text = match s.format {
                Format::Csv => trace.to_csv(),
                Format::Json => trace.to_json() + "\n",
            };
            s.output.write(&text)?;
        }
        Command::Figures => {
            let dir = cli
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from("figures"));
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let ext = match s.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            for (name, table) in figure_bundle(p)? {
                let path = dir.join(format!("{name}.{ext}"));
                std::fs::write(&path, table_text(&table, s.format))
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
        Command::Validate {
            ka_lo,
            ka_hi,
            ka_steps,
            theta_lo,
            theta_hi,
            theta_steps,
            rel_tol,
            max_subdivisions,
        } => {
            let ka = linspace(*ka_lo, *ka_hi, *ka_steps);
            let theta: Vec<f64> = linspace(*theta_lo, *theta_hi, *theta_steps)
                .into_iter()
                .map(f64::to_radians)
                .collect();
            let spec = QuadratureSpec {
                rel_tol: *rel_tol,
                abs_tol: 0.0,
                max_subdivisions: *max_subdivisions,
            };
            spec.validate()?;
            let report = validate_grid(p, &ka, &theta, &spec)?;
            let verdict = if report.summary.pass { "PASS" } else { "FAIL" };
            let line = format!(
                "{verdict} max_rel_err={} mean_rel_err={} points={} compared={} failures={}\n",
                sci(report.summary.max_rel_err),
                sci(report.summary.mean_rel_err),
                report.points.len(),
                report.summary.compared,
                report.summary.failures,
            );
            match (s.format, &cli.output) {
                (Format::Json, _) => {
                    s.output.write(&(report.to_json() + "\n"))?;
                    eprint!("{line}");
                }
                (Format::Csv, Some(_)) => {
                    s.output.write(&validation_csv(&report))?;
                    print!("{line}");
                }
                (Format::Csv, None) => print!("{line}"),
            }
            if report.summary.failures > 0 {
                let first = report.points.iter().find_map(|p| p.error.clone());
                anyhow::bail!(NumericalFailure(first.unwrap_or_default()));
            }
            if !report.summary.pass {
                return Ok(Outcome::ValidationFailed);
            }
        }
    }
    Ok(Outcome::Done)
}

#[derive(Debug)]
struct NumericalFailure(String);

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "quadrature failed: {}", self.0)
    }
}

impl std::error::Error for NumericalFailure {}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + i as f64 * (hi - lo) / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn table_text(table: &exciton_decay::ScanTable, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    }
}

fn validation_csv(report: &exciton_decay::ValidationReport) -> String {
    let mut out = String::from("ka,theta_deg,gamma_quad,gamma_formula,rel_err\n");
    let opt = |x: Option<f64>| x.map(sci).unwrap_or_default();
    for p in &report.points {
        out += &format!(
            "{},{},{},{},{}\n",
            sci(p.ka),
            sci(p.theta_deg),
            opt(p.gamma_quad),
            sci(p.gamma_formula),
            opt(p.rel_err)
        );
    }
    out
}

/// Long flag corresponding to a library parameter name.
fn flag_for(name: &str) -> Option<&'static str> {
    Some(match name {
        "ka" | "ka range" => "--ka / --lo / --hi",
        "e_a" => "--ea-ev",
        "a" => "--a-angstrom",
        "mu" => "--mu-e-angstrom",
        "theta" | "theta range (deg)" => "--theta-deg / --lo / --hi",
        "neighbor_cutoff" => "--neighbor-cutoff",
        "steps" => "--steps",
        "lo" => "--lo / --hi",
        "fixed_value" => "--ka / --theta-deg",
        "rho" => "--rho",
        "sites" => "--sites",
        "population0" => "--population",
        "t_grid" | "t_end" | "t" => "--t-start / --t-end / --steps",
        "rel_tol" => "--rel-tol",
        "max_subdivisions" => "--max-subdivisions",
        _ => return None,
    })
}

fn report(err: &anyhow::Error) -> ExitCode {
    if err.downcast_ref::<NumericalFailure>().is_some() {
        eprintln!("error: {err}");
        return ExitCode::from(3);
    }
    if let Some(lib) = err.downcast_ref::<exciton_decay::Error>() {
        if lib.is_numerical() {
            eprintln!("error: {lib}");
            return ExitCode::from(3);
        }
        let mut inner = lib;
        while let exciton_decay::Error::ScanRow { source, .. } = inner {
            inner = source;
        }
        let name = match inner {
            exciton_decay::Error::Domain { name, .. } => Some(*name),
            exciton_decay::Error::SiteCount(_) => Some("sites"),
            _ => None,
        };
        if let Some(name) = name {
            if let Some(flag) = flag_for(name) {
                eprintln!("error: {flag}: {lib}");
                return ExitCode::from(2);
            }
        }
    }
    eprintln!("error: {err:#}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(1),
        Err(e) => report(&e),
    }
}
