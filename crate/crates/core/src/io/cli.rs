//! The `lightcrystal` command line.
//!
//! Every subcommand reads an optional configuration file, applies the
//! global flag overrides and writes its results plus `manifest.json` into
//! the output directory (`--out`, else `$LIGHTCRYSTAL_OUT`, else
//! `./lightcrystal-out`). Usage errors exit with 2, runtime failures with 1
//! and a single `error: <category>: <message>` line on stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::config::Config;
use super::output::{self, RunContext, RunManifest};
use crate::coupling::Driver;
use crate::observables::{self, ObservableSample};
use crate::protocols::{self, RunOptions, ScanOptions};
use crate::{Error, Result};

pub const OUT_ENV: &str = "LIGHTCRYSTAL_OUT";
pub const DEFAULT_OUT: &str = "lightcrystal-out";

#[derive(Debug, Parser)]
#[command(name = "lightcrystal", version, about = "Self-consistent atom-light crystallisation in a 1D condensate")]
pub struct Cli {
    /// Configuration file (`key = value` lines)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides `rng_seed`
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for scans (default: all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Steps between recorded samples
    #[arg(long, global = true)]
    pub sample_stride: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Self-consistent stationary state at the configured pumps
    GroundState,
    /// Sudden switch-on from the homogeneous condensate
    Quench,
    /// Linear ramp, hold and optional ramp down
    Ramp,
    /// Symmetric-pump threshold search over `s_values`
    ThresholdScan,
    /// Threshold total power against beam asymmetry
    PhaseDiagram,
    /// Pumping from the left only
    Superradiance,
    /// Quench runs for each of `gamma_values`
    LossRun,
    /// Stationary reflectivity for scaled particle numbers
    ScalingRun,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroundState => "ground-state",
            Command::Quench => "quench",
            Command::Ramp => "ramp",
            Command::ThresholdScan => "threshold-scan",
            Command::PhaseDiagram => "phase-diagram",
            Command::Superradiance => "superradiance",
            Command::LossRun => "loss-run",
            Command::ScalingRun => "scaling-run",
        }
    }
}

/// Parses `args` (including the program name), runs and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(manifest) => {
            println!("{}: wrote {} files", manifest.subcommand, manifest.files.len());
            for (key, value) in &manifest.summary {
                println!("{key} = {value}");
            }
            0
        }
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {}", e.category(), message);
            1
        }
    }
}

pub fn output_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Loads the configuration and applies the flag overrides.
pub fn resolve_config(cli: &Cli) -> Result<(Config, String)> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut cfg = Config::parse(&text)?;
    if let Some(seed) = cli.seed {
        cfg.params.rng_seed = seed;
    }
    if let Some(w) = cli.workers {
        cfg.protocol.workers = w;
    }
    if let Some(s) = cli.sample_stride {
        if s == 0 {
            return Err(Error::Domain("--sample-stride must be >= 1".into()));
        }
        cfg.protocol.sample_stride = s;
    }
    Ok((cfg, text))
}

fn workers(cfg: &Config) -> usize {
    match cfg.protocol.workers {
        0 => protocols::default_workers(),
        w => w,
    }
}

fn run_options(cfg: &Config) -> RunOptions {
    let opt = |v: usize| (v > 0).then_some(v);
    RunOptions {
        sample_stride: cfg.protocol.sample_stride.max(1),
        spectrum_stride: opt(cfg.protocol.spectrum_stride),
        frame_stride: opt(cfg.protocol.frame_stride),
    }
}

fn scan_options(cfg: &Config) -> ScanOptions {
    ScanOptions {
        resolution: cfg.protocol.resolution,
        workers: workers(cfg),
        ..ScanOptions::default()
    }
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: impl Iterator<Item = Vec<f64>>, manifest: &mut RunManifest) -> Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    writeln!(w, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    manifest.files.push(PathBuf::from(name));
    Ok(())
}

fn scan_rows(points: &[protocols::ScanPoint]) -> impl Iterator<Item = Vec<f64>> + '_ {
    points.iter().map(|p| {
        vec![
            p.value,
            p.s_left,
            p.s_right,
            p.eta,
            p.r_abs2,
            p.delta_phi,
            p.transmitted,
            p.density_order,
            f64::from(u8::from(p.converged)),
            p.iterations as f64,
            f64::from(u8::from(p.refined)),
        ]
    })
}

const SCAN_HEADER: &str = "value,s_left,s_right,eta,r_abs2,delta_phi,transmitted,density_order,converged,iterations,refined";

/// Runs the selected subcommand.
pub fn execute(cli: &Cli) -> Result<RunManifest> {
    let (cfg, text) = resolve_config(cli)?;
    let dir = output_dir(cli);
    std::fs::create_dir_all(&dir)?;
    let context = RunContext::new(cli.command.name(), &text);
    let params = &cfg.params;
    let q = &cfg.protocol;
    match cli.command {
        Command::GroundState => {
            let mut driver = Driver::new(params)?;
            let found = driver.search_ground_state()?;
            let sample = ObservableSample::measure(driver.grid(), params, &found.state)?;
            let mut manifest = RunManifest::new(&context, params);
            output::write_state_snapshots(&dir, "", params, &found.state, &mut manifest)?;
            let energy = driver.functional_energy(&found.state)?;
            manifest.summary = vec![
                ("converged".into(), f64::from(u8::from(found.converged))),
                ("iterations".into(), found.iterations as f64),
                ("energy".into(), energy),
                ("r_abs2".into(), sample.r_abs2_left),
                ("eta".into(), sample.eta),
                ("delta_phi".into(), sample.delta_phi),
                ("transmitted".into(), observables::transmitted_fraction(&found.state)),
            ];
            let manifest = manifest.finish(&dir)?;
            if !found.converged {
                return Err(Error::NotConverged {
                    iterations: found.iterations,
                    energy_change: found.energy_change,
                    psi_change: found.psi_change,
                    state: Box::new(found),
                });
            }
            Ok(manifest)
        }
        Command::Quench => {
            let record = protocols::quench_run(params, q.t_final, run_options(&cfg))?;
            output::write_run(&record, &dir, &context)
        }
        Command::Ramp => {
            let record = match &cfg.schedule {
                Some(schedule) => {
                    let mut driver = Driver::new(params)?;
                    let start = driver.seeded_start()?;
                    let start = driver.state_for(start.wavefunction, 0.0, schedule.at(0.0))?;
                    let t_end = schedule.end_time() + q.tail;
                    protocols::run_schedule(&mut driver, start, schedule, t_end, run_options(&cfg), "ramp")?
                }
                None => protocols::ramp_run(params, q.t_ramp, q.hold, q.ramp_down, q.tail, run_options(&cfg))?,
            };
            output::write_run(&record, &dir, &context)
        }
        Command::ThresholdScan => {
            let scan = protocols::threshold_scan(params, &q.s_values, scan_options(&cfg))?;
            let mut manifest = RunManifest::new(&context, params);
            write_csv(&dir, "scan.csv", SCAN_HEADER, scan_rows(&scan.points), &mut manifest)?;
            output::write_json(&dir, "scan.json", &scan, &mut manifest)?;
            manifest.summary = vec![
                ("eta_threshold".into(), scan.eta_threshold),
                ("r_threshold".into(), scan.r_threshold),
                ("eta_floor".into(), scan.eta_floor),
                ("r_floor".into(), scan.r_floor),
            ];
            manifest.finish(&dir)
        }
        Command::PhaseDiagram => {
            let table = protocols::asymmetry_phase_diagram(params, &q.asym_values, &q.total_values, scan_options(&cfg))?;
            let mut manifest = RunManifest::new(&context, params);
            let rows = table
                .iter()
                .map(|p| vec![p.asymmetry, p.threshold_total, p.bracket.0, p.bracket.1, p.r_threshold_total]);
            write_csv(&dir, "phase_diagram.csv", "asymmetry,threshold_total,bracket_lo,bracket_hi,r_threshold_total", rows, &mut manifest)?;
            output::write_json(&dir, "phase_diagram.json", &table, &mut manifest)?;
            manifest.summary = table
                .iter()
                .map(|p| (format!("threshold_total[{}]", p.asymmetry), p.threshold_total))
                .collect();
            manifest.finish(&dir)
        }
        Command::Superradiance => {
            let record = protocols::superradiance_run(params, q.t_final, run_options(&cfg))?;
            output::write_run(&record, &dir, &context)
        }
        Command::LossRun => {
            let records = protocols::loss_run(params, &q.gamma_values, q.t_final, run_options(&cfg), workers(&cfg))?;
            let mut manifest = RunManifest::new(&context, params);
            for (i, record) in records.iter().enumerate() {
                output::write_record_files(&dir, record, &format!("gamma_{i:02}_"), &mut manifest)?;
                let gamma = record.params.gamma;
                let final_norm = record.samples.last().map_or(f64::NAN, |s| s.norm);
                manifest.summary.push((format!("final_norm[{gamma}]"), final_norm));
            }
            manifest.finish(&dir)
        }
        Command::ScalingRun => {
            let table = protocols::scaling_run(params, &q.scale_factors, &q.s_over_sc_values, q.reference_ratio, workers(&cfg))?;
            let mut manifest = RunManifest::new(&context, params);
            let rows = table
                .rows
                .iter()
                .map(|r| vec![r.factor, r.s_over_sc, r.s_per_beam, r.r_abs2, r.eta]);
            write_csv(&dir, "scaling.csv", "factor,s_over_sc,s_per_beam,r_abs2,eta", rows, &mut manifest)?;
            output::write_json(&dir, "scaling.json", &table, &mut manifest)?;
            manifest.summary = vec![
                ("slope".into(), table.fit.0),
                ("intercept".into(), table.fit.1),
                ("r_squared".into(), table.fit.2),
            ];
            manifest.finish(&dir)
        }
    }
}
