//! Run output: CSV time series, binary snapshots and a JSON manifest.
//!
//! Snapshot layout (all little endian):
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 8    | magic `LCSNAP\0\x01`                      |
//! | 8      | 4    | format version (`u32`)                    |
//! | 12     | 4    | kind (`u32`: 0 ψ, 1 left, 2 right field)  |
//! | 16     | 8    | point count `n` (`u64`)                   |
//! | 24     | 8    | grid spacing (`f64`)                      |
//! | 32     | 8    | time (`f64`)                              |
//! | 40     | 24   | zero                                      |
//! | 64     | 16n  | `re, im` pairs (`f64`)                    |

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::observables::ObservableSample;
use crate::protocols::RunRecord;
use crate::units::SimulationParams;
use crate::{Error, Result, VERSION};

/// Time-series columns, in file order.
pub const CSV_COLUMNS: [&str; 11] = [
    "t",
    "r_abs2_left",
    "r_abs2_right",
    "r_phase",
    "t_phase",
    "eta",
    "delta_phi",
    "e_kin",
    "norm",
    "density_order",
    "mean_x",
];

pub const SNAPSHOT_MAGIC: [u8; 8] = *b"LCSNAP\0\x01";
pub const SNAPSHOT_VERSION: u32 = 1;
pub const SNAPSHOT_HEADER_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnapshotKind {
    Wavefunction,
    LeftField,
    RightField,
}

impl SnapshotKind {
    fn code(self) -> u32 {
        match self {
            SnapshotKind::Wavefunction => 0,
            SnapshotKind::LeftField => 1,
            SnapshotKind::RightField => 2,
        }
    }

    fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(SnapshotKind::Wavefunction),
            1 => Some(SnapshotKind::LeftField),
            2 => Some(SnapshotKind::RightField),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub kind: SnapshotKind,
    pub dx: f64,
    pub t: f64,
    pub data: Vec<Complex64>,
}

fn sample_row(s: &ObservableSample) -> [f64; 11] {
    [
        s.t,
        s.r_abs2_left,
        s.r_abs2_right,
        s.r_phase,
        s.t_phase,
        s.eta,
        s.delta_phi,
        s.e_kin,
        s.norm,
        s.density_order,
        s.mean_x,
    ]
}

/// Writes the header and one row per sample.
pub fn write_samples_csv(mut w: impl Write, samples: &[ObservableSample]) -> std::io::Result<()> {
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for s in samples {
        let row: Vec<String> = sample_row(s).iter().map(|v| format!("{v:?}")).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Reads a file written by [`write_samples_csv`] back into rows.
pub fn read_samples_csv(path: &Path) -> Result<Vec<[f64; 11]>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_COLUMNS.join(",").as_str()) {
        return Err(Error::Domain(format!("{}: unexpected CSV header", path.display())));
    }
    lines
        .map(|line| {
            let values: Vec<f64> = line
                .split(',')
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
            values
                .try_into()
                .map_err(|_| Error::Domain(format!("{}: wrong column count", path.display())))
        })
        .collect()
}

pub fn write_snapshot(path: &Path, kind: SnapshotKind, dx: f64, t: f64, data: &[Complex64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = [0u8; SNAPSHOT_HEADER_LEN];
    header[0..8].copy_from_slice(&SNAPSHOT_MAGIC);
    header[8..12].copy_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    header[12..16].copy_from_slice(&kind.code().to_le_bytes());
    header[16..24].copy_from_slice(&(data.len() as u64).to_le_bytes());
    header[24..32].copy_from_slice(&dx.to_le_bytes());
    header[32..40].copy_from_slice(&t.to_le_bytes());
    w.write_all(&header)?;
    for c in data {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |what: &str| Error::Domain(format!("{}: {what}", path.display()));
    if bytes.len() < SNAPSHOT_HEADER_LEN || bytes[0..8] != SNAPSHOT_MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    if u32_at(8) != SNAPSHOT_VERSION {
        return Err(bad("unsupported snapshot version"));
    }
    let kind = SnapshotKind::from_code(u32_at(12)).ok_or_else(|| bad("unknown snapshot kind"))?;
    let n = u64_at(16) as usize;
    if bytes.len() != SNAPSHOT_HEADER_LEN + 16 * n {
        return Err(bad("truncated snapshot"));
    }
    let data = (0..n)
        .map(|j| {
            let o = SNAPSHOT_HEADER_LEN + 16 * j;
            Complex64::new(f64_at(o), f64_at(o + 8))
        })
        .collect();
    Ok(Snapshot {
        kind,
        dx: f64_at(24),
        t: f64_at(32),
        data,
    })
}

/// Who asked for a run and with what.
#[derive(Debug, Clone, PartialEq)]
pub struct RunContext {
    pub subcommand: String,
    pub config_text: String,
    pub started_unix: f64,
}

impl RunContext {
    pub fn new(subcommand: &str, config_text: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config_text: config_text.to_string(),
            started_unix: unix_now(),
        }
    }
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub rng_seed: u64,
    pub config: String,
    pub params: SimulationParams,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub summary: Vec<(String, f64)>,
    pub files: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(context: &RunContext, params: &SimulationParams) -> Self {
        Self {
            subcommand: context.subcommand.clone(),
            version: VERSION.to_string(),
            rng_seed: params.rng_seed,
            config: context.config_text.clone(),
            params: params.clone(),
            started_unix: context.started_unix,
            finished_unix: context.started_unix,
            summary: Vec::new(),
            files: Vec::new(),
        }
    }

    /// Stamps the finish time and writes `manifest.json` into `dir`.
    pub fn finish(mut self, dir: &Path) -> Result<Self> {
        self.finished_unix = unix_now();
        self.files.push(PathBuf::from("manifest.json"));
        let text = serde_json::to_string_pretty(&self).map_err(|e| Error::Domain(e.to_string()))?;
        fs::write(dir.join("manifest.json"), text + "\n")?;
        Ok(self)
    }
}

/// Writes `value` as pretty JSON to `dir/name` and records it.
pub fn write_json(dir: &Path, name: &str, value: &impl Serialize, manifest: &mut RunManifest) -> Result<()> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Domain(e.to_string()))?;
    fs::write(dir.join(name), text + "\n")?;
    manifest.files.push(PathBuf::from(name));
    Ok(())
}

/// Writes time series, spectra, frames and final snapshots of one run
/// under `dir`, without the manifest.
pub fn write_record_files(dir: &Path, record: &RunRecord, prefix: &str, manifest: &mut RunManifest) -> Result<()> {
    fs::create_dir_all(dir)?;
    let csv = format!("{prefix}samples.csv");
    write_samples_csv(BufWriter::new(File::create(dir.join(&csv))?), &record.samples)?;
    manifest.files.push(PathBuf::from(csv));

    if record.samples.iter().any(|s| s.momentum_spectrum.is_some()) {
        let name = format!("{prefix}spectra.csv");
        let mut w = BufWriter::new(File::create(dir.join(&name))?);
        writeln!(w, "t,spectrum...")?;
        for s in &record.samples {
            if let Some(spec) = &s.momentum_spectrum {
                let row: Vec<String> = std::iter::once(s.t).chain(spec.iter().copied()).map(|v| format!("{v:?}")).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
        w.flush()?;
        manifest.files.push(PathBuf::from(name));
    }

    let dx = record.params.dx();
    for (i, frame) in record.frames.iter().enumerate() {
        let name = format!("{prefix}frame_{i:05}.bin");
        write_snapshot(&dir.join(&name), SnapshotKind::Wavefunction, dx, frame.t, &frame.psi)?;
        manifest.files.push(PathBuf::from(name));
    }
    write_state_snapshots(dir, prefix, &record.params, &record.final_state, manifest)
}

pub fn write_state_snapshots(
    dir: &Path,
    prefix: &str,
    params: &SimulationParams,
    state: &crate::coupling::SystemState,
    manifest: &mut RunManifest,
) -> Result<()> {
    let dx = params.dx();
    for (suffix, kind, data) in [
        ("psi", SnapshotKind::Wavefunction, &state.wavefunction.psi),
        ("left", SnapshotKind::LeftField, &state.left_field.envelope),
        ("right", SnapshotKind::RightField, &state.right_field.envelope),
    ] {
        let name = format!("{prefix}final_{suffix}.bin");
        write_snapshot(&dir.join(&name), kind, dx, state.time, data)?;
        manifest.files.push(PathBuf::from(name));
    }
    Ok(())
}

/// Writes a complete single-run directory and returns its manifest.
pub fn write_run(record: &RunRecord, dir: &Path, context: &RunContext) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(context, &record.params);
    write_record_files(dir, record, "", &mut manifest)?;
    manifest.summary = record.summary.clone();
    manifest.finish(dir)
}
