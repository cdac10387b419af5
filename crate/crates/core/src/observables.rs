//! Measurements taken from a [`SystemState`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::SystemState;
use crate::dynamics::{kinetic_energy, Wavefunction};
use crate::grid::Grid;
use crate::scattering::ScatteringSolution;
use crate::units::{effective_wavenumber, SimulationParams, K0};
use crate::{Error, Result};

/// Every observable recorded along a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSample {
    pub t: f64,
    pub r_abs2_left: f64,
    pub r_abs2_right: f64,
    /// `arg r` of the left-injected beam; NaN when `r = 0`.
    pub r_phase: f64,
    pub t_phase: f64,
    pub eta: f64,
    /// Phase-lock offset in `[0, π]`; NaN without standing waves.
    pub delta_phi: f64,
    pub e_kin: f64,
    /// `N(t)/N(0)` for runs started from a normalised state.
    pub norm: f64,
    pub density_order: f64,
    pub mean_x: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub momentum_spectrum: Option<Vec<f64>>,
}

impl ObservableSample {
    pub fn measure(grid: &Grid, params: &SimulationParams, state: &SystemState) -> Result<Self> {
        let k_eff = effective_wavenumber(params.zeta, params.trap_length)?;
        let psi = &state.wavefunction;
        let (r_abs2_left, r_phase, t_phase) = reflection_observables(&state.left_field);
        let norm = psi.norm(grid);
        Ok(Self {
            t: state.time,
            r_abs2_left,
            r_abs2_right: state.right_field.reflectivity(),
            r_phase,
            t_phase,
            eta: eta(grid, psi, k_eff)?,
            delta_phi: phase_lock_offset(
                grid,
                &state.left_field.envelope,
                &state.right_field.envelope,
                k_eff,
                params.trap_length,
            )?,
            e_kin: kinetic_energy(grid, psi)?,
            norm,
            density_order: density_order(grid, psi, k_eff)?,
            mean_x: grid.integrate(psi.psi.iter().zip(grid.x()).map(|(c, x)| x * c.norm_sqr())) / norm,
            momentum_spectrum: None,
        })
    }

    pub fn with_spectrum(mut self, grid: &Grid, psi: &Wavefunction) -> Result<Self> {
        self.momentum_spectrum = Some(momentum_spectrum(grid, psi)?);
        Ok(self)
    }

    pub fn r_abs2_mean(&self) -> f64 {
        0.5 * (self.r_abs2_left + self.r_abs2_right)
    }
}

/// Bragg ratio `|ψ(2k_eff)|² / |ψ(0)|²`, projected at exactly `2k_eff`
/// (`k_eff` in units of `k0`).
pub fn eta(grid: &Grid, psi: &Wavefunction, k_eff: f64) -> Result<f64> {
    grid.check_len(psi.len())?;
    let zero = grid.project(&psi.psi, 0.0);
    if zero.norm() < 1e-300 {
        return Err(Error::Domain("wavefunction has no zero-momentum component".into()));
    }
    let peak = grid.project(&psi.psi, 2.0 * k_eff * K0);
    Ok(peak.norm_sqr() / zero.norm_sqr())
}

/// `|∫ρ e^{-2ik_eff x} dx| / ∫ρ dx`.
pub fn density_order(grid: &Grid, psi: &Wavefunction, k_eff: f64) -> Result<f64> {
    grid.check_len(psi.len())?;
    let q = 2.0 * k_eff * K0;
    let mass: f64 = psi.psi.iter().map(|c| c.norm_sqr()).sum();
    let c: Complex64 = psi
        .psi
        .iter()
        .zip(grid.x())
        .map(|(p, &x)| Complex64::from_polar(p.norm_sqr(), -q * x))
        .sum();
    Ok(if mass > 0.0 { c.norm() / mass } else { 0.0 })
}

fn standing_wave_component(grid: &Grid, envelope: &[Complex64], q: f64, half_window: f64) -> Complex64 {
    let inside = || {
        envelope
            .iter()
            .zip(grid.x())
            .filter(move |(_, x)| x.abs() < half_window)
    };
    let count = inside().count().max(1);
    let mean = inside().map(|(u, _)| u.norm_sqr()).sum::<f64>() / count as f64;
    inside()
        .map(|(u, &x)| Complex64::from_polar(u.norm_sqr() - mean, -q * x))
        .sum()
}

/// Offset between the intensity gratings of the two beams.
///
/// `C_X = Σ (|u_X|² - mean) e^{-2ik_eff x}` over the central `L/2` of the
/// trap; returns `|arg C_L - arg C_R|` wrapped to `[0, π]`, or NaN when
/// either grating is below `1e-12 n`.
pub fn phase_lock_offset(
    grid: &Grid,
    left: &[Complex64],
    right: &[Complex64],
    k_eff: f64,
    trap_length: f64,
) -> Result<f64> {
    grid.check_len(left.len())?;
    grid.check_len(right.len())?;
    let q = 2.0 * k_eff * K0;
    let half_window = 0.25 * trap_length;
    let cl = standing_wave_component(grid, left, q, half_window);
    let cr = standing_wave_component(grid, right, q, half_window);
    let floor = 1e-12 * grid.len() as f64;
    if cl.norm() < floor || cr.norm() < floor {
        return Ok(f64::NAN);
    }
    let d = (cl * cr.conj()).arg();
    Ok(d.abs())
}

/// `(|r|², arg r, arg t)`; `arg r` is NaN when `r` vanishes.
pub fn reflection_observables(solution: &ScatteringSolution) -> (f64, f64, f64) {
    let r2 = solution.r.norm_sqr();
    let r_phase = if r2 > 0.0 { solution.r.arg() } else { f64::NAN };
    (r2, r_phase, solution.t.arg())
}

/// Fraction of the left beam transmitted through the whole system.
pub fn transmitted_fraction(state: &SystemState) -> f64 {
    state.left_field.transmissivity()
}

/// Population variance over the trailing `window` samples.
pub fn reflectivity_variance(series: &[f64], window: usize) -> Result<f64> {
    if window == 0 || series.len() < window {
        return Err(Error::ShortSeries {
            needed: window.max(1),
            got: series.len(),
        });
    }
    let tail = &series[series.len() - window..];
    let mean = tail.iter().sum::<f64>() / window as f64;
    Ok(tail.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / window as f64)
}

/// `|ψ(k)|²` in DFT order.
pub fn momentum_spectrum(grid: &Grid, psi: &Wavefunction) -> Result<Vec<f64>> {
    Ok(grid.to_momentum(&psi.psi)?.iter().map(|c| c.norm_sqr()).collect())
}

/// `Σ_{k>0} |ψ(k)|² - Σ_{k<0} |ψ(k)|²`, normalised by the total power.
pub fn directionality(grid: &Grid, spectrum: &[f64]) -> f64 {
    let total: f64 = spectrum.iter().sum();
    let signed: f64 = spectrum
        .iter()
        .zip(grid.k())
        .map(|(p, &k)| if k > 0.0 { *p } else if k < 0.0 { -*p } else { 0.0 })
        .sum();
    if total > 0.0 {
        signed / total
    } else {
        0.0
    }
}
