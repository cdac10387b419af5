//! Recoil units and simulation parameters.
//!
//! Internally the pump wavelength `λ0`, the recoil energy
//! `E_rec = ħ²k0²/(2m)`, the recoil frequency `ω_rec = E_rec/ħ` and the
//! intensity `I0 = c E_rec/(λ0 A)` are all 1, so `k0 = 2π`. The particle
//! number is absorbed into the coupling `ζ` and the interaction `g_c N / A`.
//!
//! The dipole potential per unit intensity is fixed by requiring that the
//! symmetric-pump threshold of the homogeneous state sits at a total
//! intensity of `1/ζ²`, i.e. `1/(2ζ²)` per beam. This corresponds to the
//! intensity convention `I = ε0 c |E|²/2` for a field envelope `E`, which
//! gives `V/E_rec = -2ζ (s_l |u_L|² + s_r |u_R|²)` with `u` the envelope
//! normalised to unit incident amplitude.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Vacuum wavenumber of the pump in units of `1/λ0`.
pub const K0: f64 = 2.0 * PI;

/// Light shift per unit `ζ` and unit intensity `I/I0`, in `E_rec`.
pub const LIGHT_SHIFT_PER_INTENSITY: f64 = 2.0;

/// Coarsest admissible grid spacing in units of `λ0`.
pub const MAX_GRID_SPACING: f64 = 1.0 / 16.0;

/// The internal unit system. Every field is 1 except `k0 = 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub length_unit: f64,
    pub energy_unit: f64,
    pub time_unit: f64,
    pub intensity_unit: f64,
    pub k0: f64,
}

impl UnitSystem {
    pub const RECOIL: UnitSystem = UnitSystem {
        length_unit: 1.0,
        energy_unit: 1.0,
        time_unit: 1.0,
        intensity_unit: 1.0,
        k0: K0,
    };
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::RECOIL
    }
}

const HBAR: f64 = 1.054_571_817e-34;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// SI values of the recoil units for a concrete species and geometry.
///
/// Only used for converting inputs and outputs at the edges; nothing inside
/// the simulator sees SI values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    /// Wavelength in m.
    pub wavelength: f64,
    /// Recoil energy in J.
    pub recoil_energy: f64,
    /// `1/ω_rec` in s.
    pub recoil_time: f64,
    /// `I0` in W/m².
    pub intensity: f64,
}

impl PhysicalScales {
    /// `mass` in kg, `wavelength` in m, transverse `area` in m².
    pub fn new(mass: f64, wavelength: f64, area: f64) -> Result<Self> {
        if !(mass > 0.0 && wavelength > 0.0 && area > 0.0) {
            return Err(Error::Domain(
                "mass, wavelength and area must be positive".into(),
            ));
        }
        let k = 2.0 * PI / wavelength;
        let recoil_energy = HBAR * HBAR * k * k / (2.0 * mass);
        Ok(Self {
            wavelength,
            recoil_energy,
            recoil_time: HBAR / recoil_energy,
            intensity: SPEED_OF_LIGHT * recoil_energy / (wavelength * area),
        })
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.wavelength
    }
    pub fn length_from_si(&self, x: f64) -> f64 {
        x / self.wavelength
    }
    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * self.recoil_energy
    }
    pub fn energy_from_si(&self, e: f64) -> f64 {
        e / self.recoil_energy
    }
    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.recoil_time
    }
    pub fn time_from_si(&self, t: f64) -> f64 {
        t / self.recoil_time
    }
    pub fn intensity_to_si(&self, s: f64) -> f64 {
        s * self.intensity
    }
    pub fn intensity_from_si(&self, i: f64) -> f64 {
        i / self.intensity
    }
}

/// All model, grid and protocol knobs, in recoil units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    /// Dimensionless light-matter coupling `ζ = αN/(ε0 λ0 A)`.
    pub zeta: f64,
    /// Contact interaction `g_c N / A` in `E_rec λ0`.
    pub gcn: f64,
    /// Extent of the box trap.
    pub trap_length: f64,
    /// Extent of the periodic computational domain.
    pub box_length: f64,
    pub n_grid: usize,
    /// Real-time step.
    pub dt: f64,
    /// Imaginary-time step used by ground-state searches.
    pub dtau: f64,
    /// Pump intensities `I_l/I0`, `I_r/I0`.
    pub s_left: f64,
    pub s_right: f64,
    /// Loss rate per unit intensity, in `ω_rec`.
    pub gamma: f64,
    /// Height of the box-trap walls in `E_rec`.
    pub v_ext_height: f64,
    /// RMS of the symmetry-breaking seed relative to `max|ψ|`.
    pub noise_amplitude: f64,
    pub rng_seed: u64,
    /// Cap on imaginary-time steps per ground-state search.
    pub max_iters: usize,
}

impl Default for SimulationParams {
    fn default() -> Self {
        Self {
            zeta: 0.2,
            gcn: 1.0,
            trap_length: 24.0,
            box_length: 30.0,
            n_grid: 1024,
            dt: 1e-3,
            dtau: 1e-2,
            s_left: 0.0,
            s_right: 0.0,
            gamma: 0.0,
            v_ext_height: 1e3,
            noise_amplitude: 1e-4,
            rng_seed: 1,
            max_iters: 200_000,
        }
    }
}

impl SimulationParams {
    pub fn dx(&self) -> f64 {
        self.box_length / self.n_grid as f64
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Same as [`validate`] but as a `Result`.
    pub fn checked(&self) -> Result<&Self> {
        let report = self.validate();
        if report.passed() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(report))
        }
    }

    /// Copy with both pumps replaced.
    pub fn with_pumps(&self, s_left: f64, s_right: f64) -> Self {
        Self {
            s_left,
            s_right,
            ..self.clone()
        }
    }

    /// Particle-number scaling: `ζ` and `g_c N` scale together.
    pub fn scaled_particle_number(&self, factor: f64) -> Self {
        Self {
            zeta: self.zeta * factor,
            gcn: self.gcn * factor,
            ..self.clone()
        }
    }

    pub fn critical_intensity_per_beam(&self) -> Result<f64> {
        critical_intensity_per_beam(self.zeta)
    }

    pub fn effective_wavenumber(&self) -> Result<f64> {
        effective_wavenumber(self.zeta, self.trap_length)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub key: &'static str,
    pub message: String,
}

/// Outcome of [`validate`]. Empty means the parameters pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, key: &str) -> bool {
        self.violations.iter().any(|v| v.key == key)
    }

    fn push(&mut self, key: &'static str, message: impl Into<String>) {
        self.violations.push(Violation {
            key,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", v.key, v.message)?;
        }
        Ok(())
    }
}

/// Checks every parameter invariant and reports all violations at once.
pub fn validate(p: &SimulationParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    let finite = [
        ("zeta", p.zeta),
        ("gcn", p.gcn),
        ("trap_length", p.trap_length),
        ("box_length", p.box_length),
        ("dt", p.dt),
        ("dtau", p.dtau),
        ("s_left", p.s_left),
        ("s_right", p.s_right),
        ("gamma", p.gamma),
        ("v_ext_height", p.v_ext_height),
        ("noise_amplitude", p.noise_amplitude),
    ];
    for (key, value) in finite {
        if !value.is_finite() {
            report.push(key, "must be finite");
        }
    }
    if !(p.zeta > 0.0) {
        report.push("zeta", format!("must be > 0, got {}", p.zeta));
    }
    if !(p.trap_length > 0.0) {
        report.push("trap_length", "must be > 0");
    }
    if !(p.box_length >= p.trap_length) {
        report.push(
            "box_length",
            format!(
                "must be >= trap_length ({} < {})",
                p.box_length, p.trap_length
            ),
        );
    }
    if p.n_grid < 16 {
        report.push("n_grid", format!("must be >= 16, got {}", p.n_grid));
    } else if !p.n_grid.is_power_of_two() {
        report.push("n_grid", format!("must be a power of two, got {}", p.n_grid));
    }
    if p.n_grid > 0 && p.box_length > 0.0 && p.dx() > MAX_GRID_SPACING * (1.0 + 1e-12) {
        report.push(
            "n_grid",
            format!(
                "grid spacing {} exceeds λ0/16; increase n_grid or shrink box_length",
                p.dx()
            ),
        );
    }
    if !(p.dt > 0.0) {
        report.push("dt", "must be > 0");
    }
    if !(p.dtau > 0.0) {
        report.push("dtau", "must be > 0");
    }
    if !(p.s_left >= 0.0) {
        report.push("s_left", "must be >= 0");
    }
    if !(p.s_right >= 0.0) {
        report.push("s_right", "must be >= 0");
    }
    if !(p.gamma >= 0.0) {
        report.push("gamma", "must be >= 0");
    }
    if !(p.v_ext_height >= 0.0) {
        report.push("v_ext_height", "must be >= 0");
    }
    if !(p.noise_amplitude >= 0.0) {
        report.push("noise_amplitude", "must be >= 0");
    }
    if p.max_iters == 0 {
        report.push("max_iters", "must be >= 1");
    }
    report
}

/// Per-beam critical intensity under symmetric pumping, in `I0`.
pub fn critical_intensity_per_beam(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(format!("zeta must be > 0, got {zeta}")));
    }
    Ok(1.0 / (2.0 * zeta * zeta))
}

/// Wavenumber of the emergent lattice in units of `k0`: `√(1 + ζ/L)`.
pub fn effective_wavenumber(zeta: f64, trap_length: f64) -> Result<f64> {
    if !(trap_length > 0.0) {
        return Err(Error::Domain(format!(
            "trap_length must be > 0, got {trap_length}"
        )));
    }
    if !(zeta >= 0.0) {
        return Err(Error::Domain(format!("zeta must be >= 0, got {zeta}")));
    }
    Ok((1.0 + zeta / trap_length).sqrt())
}
