//! Split-step spectral integration of the Gross-Pitaevskii equation
//!
//! `i ∂t ψ = [-(1/k0²) ∂x² + V(x) + g|ψ|² - iγ I(x)] ψ`
//!
//! in recoil units, where `I(x)` is the local pump intensity. Steps are
//! Strang split: half a kinetic step in momentum space, a full pointwise
//! step for potential, contact interaction and loss, and another half
//! kinetic step. The pointwise substep is solved exactly, including the loss.

use num_complex::Complex64;

use crate::grid::Grid;
use crate::units::K0;
use crate::{Error, Result};

/// Width of the smoothed box-trap edges, in `λ0`.
pub const WALL_WIDTH: f64 = 0.25;

/// Condensate amplitude on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub psi: Vec<Complex64>,
}

impl Wavefunction {
    pub fn new(psi: Vec<Complex64>) -> Self {
        Self { psi }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn norm(&self, grid: &Grid) -> f64 {
        grid.norm_sqr(&self.psi)
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn normalize(&mut self, grid: &Grid) {
        let n = self.norm(grid);
        if n > 0.0 {
            let s = 1.0 / n.sqrt();
            self.psi.iter_mut().for_each(|c| *c *= s);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Flat profile filling the trap with soft edges, normalised to 1.
    pub fn homogeneous(grid: &Grid, trap_length: f64) -> Self {
        let psi = grid
            .x()
            .iter()
            .map(|&x| {
                let edge = 0.5 * (1.0 - ((x.abs() - 0.5 * trap_length) / WALL_WIDTH).tanh());
                Complex64::new(edge.sqrt(), 0.0)
            })
            .collect();
        let mut out = Self { psi };
        out.normalize(grid);
        out
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`.
    pub fn fidelity(&self, other: &Wavefunction, grid: &Grid) -> f64 {
        let overlap: Complex64 = self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum();
        let overlap = overlap * grid.dx();
        overlap.norm_sqr() / (self.norm(grid) * other.norm(grid))
    }
}

/// Optical plus external potential for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    /// `V(x)` in `E_rec`.
    pub v: Vec<f64>,
    /// Total pump intensity `s_l|u_L|² + s_r|u_R|²` driving the loss term.
    pub i_total: Vec<f64>,
}

impl Potential {
    /// Pure external potential with no light.
    pub fn external(v: Vec<f64>) -> Self {
        let n = v.len();
        Self {
            v,
            i_total: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// Smoothed square well: zero inside `|x| < L/2`, `height` outside.
pub fn box_trap(grid: &Grid, trap_length: f64, height: f64) -> Vec<f64> {
    let half = 0.5 * trap_length;
    grid.x()
        .iter()
        .map(|&x| {
            0.5 * height * ((x - half) / WALL_WIDTH).tanh()
                + 0.5 * height * ((-x - half) / WALL_WIDTH).tanh()
                + height
        })
        .collect()
}

/// Energy decomposition in `E_rec`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    pub total: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub interaction: f64,
}

/// Precomputed kinetic propagators for one grid and time step.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    dt: f64,
    half_kinetic: Vec<Complex64>,
    dtau: f64,
    half_kinetic_imag: Vec<f64>,
    scratch: Vec<Complex64>,
}

fn kinetic_energy_of(k: f64) -> f64 {
    let q = k / K0;
    q * q
}

impl Stepper {
    pub fn new(grid: Grid, dt: f64, dtau: f64) -> Result<Self> {
        if !(dt > 0.0) || !(dtau > 0.0) {
            return Err(Error::Domain("time steps must be > 0".into()));
        }
        let half_kinetic = grid
            .k()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -0.5 * kinetic_energy_of(k) * dt))
            .collect();
        let half_kinetic_imag = grid
            .k()
            .iter()
            .map(|&k| (-0.5 * kinetic_energy_of(k) * dtau).exp())
            .collect();
        let scratch = vec![Complex64::new(0.0, 0.0); grid.scratch_len()];
        Ok(Self {
            grid,
            dt,
            half_kinetic,
            dtau,
            half_kinetic_imag,
            scratch,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    /// Changes the imaginary-time step.
    pub fn set_dtau(&mut self, dtau: f64) -> Result<()> {
        if !(dtau > 0.0) {
            return Err(Error::Domain("time steps must be > 0".into()));
        }
        self.dtau = dtau;
        for (h, &k) in self.half_kinetic_imag.iter_mut().zip(self.grid.k()) {
            *h = (-0.5 * kinetic_energy_of(k) * dtau).exp();
        }
        Ok(())
    }

    /// `dt · max|V + g|ψ|²|` over the occupied region (`|ψ|²` above 1e-8 of
    /// its peak). Values below 0.5 keep the pointwise phase per step small.
    pub fn stability_number(&self, psi: &Wavefunction, potential: &Potential, gcn: f64) -> f64 {
        let peak = psi.psi.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max);
        psi.psi
            .iter()
            .zip(&potential.v)
            .filter(|(c, _)| c.norm_sqr() > 1e-8 * peak)
            .map(|(c, v)| (v + gcn * c.norm_sqr()).abs())
            .fold(0.0, f64::max)
            * self.dt
    }

    fn kinetic_real(&mut self, psi: &mut [Complex64]) {
        self.grid.fft_in_place(psi, &mut self.scratch);
        for (c, p) in psi.iter_mut().zip(&self.half_kinetic) {
            *c *= p;
        }
        self.grid.ifft_in_place(psi, &mut self.scratch);
    }

    fn kinetic_imag(&mut self, psi: &mut [Complex64]) {
        self.grid.fft_in_place(psi, &mut self.scratch);
        for (c, p) in psi.iter_mut().zip(&self.half_kinetic_imag) {
            *c *= p;
        }
        self.grid.ifft_in_place(psi, &mut self.scratch);
    }

    fn check(&self, psi: &Wavefunction, potential: &Potential) -> Result<()> {
        self.grid.check_len(psi.len())?;
        self.grid.check_len(potential.v.len())?;
        self.grid.check_len(potential.i_total.len())
    }

    /// One real-time step of length `dt`, including intensity-weighted loss.
    pub fn real_step(
        &mut self,
        psi: &mut Wavefunction,
        potential: &Potential,
        gcn: f64,
        gamma: f64,
    ) -> Result<()> {
        self.check(psi, potential)?;
        let dt = self.dt;
        self.kinetic_real(&mut psi.psi);
        for ((c, &v), &intensity) in psi.psi.iter_mut().zip(&potential.v).zip(&potential.i_total) {
            let rho = c.norm_sqr();
            let rate = 2.0 * gamma * intensity;
            // exact solution of the pointwise equation over dt
            let (decay, integrated_rho) = if rate * dt > 1e-12 {
                let d = (-rate * dt).exp();
                (d.sqrt(), rho * (1.0 - d) / rate)
            } else {
                (1.0 - 0.5 * rate * dt, rho * dt * (1.0 - 0.5 * rate * dt))
            };
            let phase = -(v * dt + gcn * integrated_rho);
            *c *= Complex64::from_polar(decay, phase);
        }
        self.kinetic_real(&mut psi.psi);
        if !psi.is_finite() {
            return Err(Error::NonFinite { t: f64::NAN });
        }
        Ok(())
    }

    /// One normalised imaginary-time step of length `dtau`.
    pub fn imaginary_step(
        &mut self,
        psi: &mut Wavefunction,
        potential: &Potential,
        gcn: f64,
    ) -> Result<()> {
        self.check(psi, potential)?;
        let dtau = self.dtau;
        self.kinetic_imag(&mut psi.psi);
        for (c, &v) in psi.psi.iter_mut().zip(&potential.v) {
            *c *= (-(v + gcn * c.norm_sqr()) * dtau).exp();
        }
        self.kinetic_imag(&mut psi.psi);
        if !psi.is_finite() {
            return Err(Error::NonFinite { t: f64::NAN });
        }
        psi.normalize(&self.grid);
        Ok(())
    }

    pub fn kinetic_energy(&mut self, psi: &Wavefunction) -> Result<f64> {
        kinetic_energy(&self.grid, psi)
    }
}

/// `E_kin = ∫ |∂x ψ|² dx / k0²`, evaluated spectrally.
pub fn kinetic_energy(grid: &Grid, psi: &Wavefunction) -> Result<f64> {
    let spec = grid.to_momentum(&psi.psi)?;
    Ok(grid.box_length()
        * spec
            .iter()
            .zip(grid.k())
            .map(|(c, &k)| kinetic_energy_of(k) * c.norm_sqr())
            .sum::<f64>())
}

/// Gross-Pitaevskii energy functional for a fixed potential.
pub fn energy(grid: &Grid, psi: &Wavefunction, potential: &Potential, gcn: f64) -> Result<Energy> {
    grid.check_len(potential.v.len())?;
    let kinetic = kinetic_energy(grid, psi)?;
    let potential = grid.integrate(psi.psi.iter().zip(&potential.v).map(|(c, v)| v * c.norm_sqr()));
    let interaction = 0.5 * gcn * grid.integrate(psi.psi.iter().map(|c| c.norm_sqr().powi(2)));
    Ok(Energy {
        total: kinetic + potential + interaction,
        kinetic,
        potential,
        interaction,
    })
}
