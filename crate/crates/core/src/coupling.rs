//! The self-consistent atom-light loop.
//!
//! Every step follows density → susceptibility → both Helmholtz solves →
//! optical potential → condensate step. The fields stored in a
//! [`SystemState`] always belong to its current wavefunction, so each step
//! costs exactly one pair of scattering solves.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dynamics::{self, box_trap, Energy, Potential, Stepper, Wavefunction};
use crate::grid::Grid;
use crate::scattering::{solve_pair, FieldPair, ScatteringSolution, SusceptibilityProfile};
use crate::units::{SimulationParams, K0, LIGHT_SHIFT_PER_INTENSITY};
use crate::{Error, Result};

/// One self-consistent snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub wavefunction: Wavefunction,
    pub left_field: ScatteringSolution,
    pub right_field: ScatteringSolution,
    /// Unwrapped `arg t - k0 L_box`, used by the optical energy functional.
    pub excess_phase: f64,
    pub potential: Potential,
    pub time: f64,
    /// `(s_l, s_r)` the potential was built with.
    pub pumps: (f64, f64),
}

/// `V = -2ζ (s_l|u_L|² + s_r|u_R|²) + V_ext` and the matching intensity,
/// with cell-averaged `|u|²`.
pub fn build_potential(
    left: &ScatteringSolution,
    right: &ScatteringSolution,
    s_left: f64,
    s_right: f64,
    v_ext: &[f64],
    zeta: f64,
) -> Result<Potential> {
    let n = v_ext.len();
    for len in [left.cell_intensity.len(), right.cell_intensity.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    let i_total: Vec<f64> = left
        .intensity()
        .zip(right.intensity())
        .map(|(l, r)| s_left * l + s_right * r)
        .collect();
    let v = i_total
        .iter()
        .zip(v_ext)
        .map(|(i, ext)| ext - LIGHT_SHIFT_PER_INTENSITY * zeta * i)
        .collect();
    Ok(Potential { v, i_total })
}

/// Adds complex white noise of RMS `amplitude · max|ψ|` inside the trap and
/// renormalises to the original norm.
pub fn seed_fluctuations(
    psi: &mut Wavefunction,
    grid: &Grid,
    trap_length: f64,
    amplitude: f64,
    rng_seed: u64,
) {
    if amplitude <= 0.0 {
        return;
    }
    let norm = psi.norm(grid);
    let peak = psi.psi.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let sigma = amplitude * peak / std::f64::consts::SQRT_2;
    let normal = Normal::new(0.0, sigma).expect("finite noise width");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for (c, &x) in psi.psi.iter_mut().zip(grid.x()) {
        // draw for every point so the pattern does not depend on the trap
        let kick = Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        if x.abs() < 0.5 * trap_length {
            *c += kick;
        }
    }
    let now = psi.norm(grid);
    if now > 0.0 {
        let s = (norm / now).sqrt();
        psi.psi.iter_mut().for_each(|c| *c *= s);
    }
}

/// Replaces `ψ(x)` by `(ψ(x) + ψ(-x)) / 2`; the grid is mirror symmetric
/// about `x = 0`.
pub fn mirror_symmetrize(psi: &mut Wavefunction) {
    let n = psi.psi.len();
    for j in 0..n / 2 {
        let m = 0.5 * (psi.psi[j] + psi.psi[n - 1 - j]);
        psi.psi[j] = m;
        psi.psi[n - 1 - j] = m;
    }
}

/// Largest number of times a ground-state search halves its step.
pub const MAX_STEP_HALVINGS: u32 = 6;

/// Accepted steps before a halved imaginary-time step is doubled again.
pub const STEP_RECOVERY: usize = 200;

/// Relative energy rise treated as evaluation round-off by the descent
/// check of [`Driver::relax`].
pub const DESCENT_NOISE: f64 = 2e-14;

/// Absolute energy rise always treated as round-off by the descent check.
pub const DESCENT_NOISE_ABS: f64 = 1e-12;

/// Result of an imaginary-time search.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: SystemState,
    pub iterations: usize,
    pub converged: bool,
    /// Last relative change of the energy functional.
    pub energy_change: f64,
    /// Last L2 change of the wavefunction.
    pub psi_change: f64,
}

/// Stopping rule for imaginary-time searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    pub energy_rel: f64,
    pub psi_l2: f64,
    pub max_iters: usize,
}

impl Convergence {
    pub fn from_params(params: &SimulationParams) -> Self {
        Self {
            energy_rel: 1e-10,
            psi_l2: 1e-9,
            max_iters: params.max_iters,
        }
    }
}

/// Owns the integrator and trap for one parameter set.
#[derive(Debug, Clone)]
pub struct Driver {
    params: SimulationParams,
    stepper: Stepper,
    v_ext: Vec<f64>,
    /// Extra field refreshes per step, iterating the step to a fixed point
    /// in the potential. 0 reproduces the once-per-step coupling.
    pub field_subiterations: usize,
}

impl Driver {
    pub fn new(params: &SimulationParams) -> Result<Self> {
        params.checked()?;
        let grid = Grid::new(params.n_grid, params.box_length)?;
        let v_ext = box_trap(&grid, params.trap_length, params.v_ext_height);
        let stepper = Stepper::new(grid, params.dt, params.dtau)?;
        Ok(Self {
            params: params.clone(),
            stepper,
            v_ext,
            field_subiterations: 0,
        })
    }

    pub fn params(&self) -> &SimulationParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        self.stepper.grid()
    }

    pub fn v_ext(&self) -> &[f64] {
        &self.v_ext
    }

    pub fn solve_fields(&self, psi: &Wavefunction) -> Result<FieldPair> {
        let profile = SusceptibilityProfile::from_density(self.grid(), &psi.psi, self.params.zeta)?;
        solve_pair(&profile)
    }

    /// Consistent state for `psi` at time `t` under the given pumps.
    pub fn state_for(&self, psi: Wavefunction, time: f64, pumps: (f64, f64)) -> Result<SystemState> {
        let fields = self.solve_fields(&psi)?;
        let potential = build_potential(
            &fields.left,
            &fields.right,
            pumps.0,
            pumps.1,
            &self.v_ext,
            self.params.zeta,
        )?;
        Ok(SystemState {
            wavefunction: psi,
            left_field: fields.left,
            right_field: fields.right,
            excess_phase: fields.excess_phase,
            potential,
            time,
            pumps,
        })
    }

    fn rebuild(&self, state: &mut SystemState, pumps: (f64, f64)) -> Result<()> {
        let fresh = self.state_for(
            std::mem::replace(&mut state.wavefunction, Wavefunction::new(Vec::new())),
            state.time,
            pumps,
        )?;
        *state = fresh;
        Ok(())
    }

    /// Re-evaluates the potential of `state` for new pump values. The
    /// envelopes do not depend on the pumps, so no scattering solve is needed.
    pub fn set_pumps(&self, state: &mut SystemState, pumps: (f64, f64)) -> Result<()> {
        state.potential = build_potential(
            &state.left_field,
            &state.right_field,
            pumps.0,
            pumps.1,
            &self.v_ext,
            self.params.zeta,
        )?;
        state.pumps = pumps;
        Ok(())
    }

    /// Flat in-trap state relaxed without light, unseeded.
    pub fn homogeneous_state(&mut self) -> Result<SystemState> {
        let grid = self.grid().clone();
        let mut psi = Wavefunction::homogeneous(&grid, self.params.trap_length);
        let potential = Potential::external(self.v_ext.clone());
        // no optical feedback here, so a coarse step is safe
        let mut relax = Stepper::new(grid, self.params.dt, 1e-2)?;
        for _ in 0..5_000 {
            relax.imaginary_step(&mut psi, &potential, self.params.gcn)?;
        }
        self.state_for(psi, 0.0, (0.0, 0.0))
    }

    /// One real-time step of length `dt` with the pumps held at `pumps`.
    ///
    /// On a blow-up the state is left at its last finite value.
    pub fn self_consistent_step(&mut self, state: &mut SystemState, pumps: (f64, f64)) -> Result<()> {
        if state.pumps != pumps {
            self.set_pumps(state, pumps)?;
        }
        let gcn = self.params.gcn;
        let gamma = self.params.gamma;
        let start = state.wavefunction.clone();
        let mut next = start.clone();
        if let Err(e) = self.stepper.real_step(&mut next, &state.potential, gcn, gamma) {
            return Err(match e {
                Error::NonFinite { .. } => Error::NonFinite { t: state.time },
                other => other,
            });
        }
        for _ in 0..self.field_subiterations {
            let trial = self.state_for(next, state.time, pumps)?;
            let mut mid = trial.potential.clone();
            for (m, v) in mid.v.iter_mut().zip(&state.potential.v) {
                *m = 0.5 * (*m + v);
            }
            for (m, i) in mid.i_total.iter_mut().zip(&state.potential.i_total) {
                *m = 0.5 * (*m + i);
            }
            next = start.clone();
            self.stepper.real_step(&mut next, &mid, gcn, gamma)?;
        }
        let time = state.time + self.stepper.dt();
        *state = self.state_for(next, time, pumps)?;
        Ok(())
    }

    /// One imaginary-time step with the field refreshed afterwards.
    pub fn imaginary_step(&mut self, state: &mut SystemState) -> Result<()> {
        let gcn = self.params.gcn;
        let pumps = state.pumps;
        let start = state.wavefunction.clone();
        let mut next = start.clone();
        self.stepper.imaginary_step(&mut next, &state.potential, gcn)?;
        for _ in 0..self.field_subiterations {
            let trial = self.state_for(next, state.time, pumps)?;
            next = start.clone();
            self.stepper.imaginary_step(&mut next, &trial.potential, gcn)?;
        }
        state.wavefunction = next;
        self.rebuild(state, pumps)
    }

    /// GP energy in the current (frozen) potential.
    pub fn energy(&self, state: &SystemState) -> Result<Energy> {
        dynamics::energy(self.grid(), &state.wavefunction, &state.potential, self.params.gcn)
    }

    /// Energy functional whose gradient flow is the self-consistent
    /// imaginary-time evolution:
    ///
    /// `E = E_kin + ∫V_ext|ψ|² + (g/2)∫|ψ|⁴ - (8 s̄ / k0) (arg t - k0 L_box)`,
    ///
    /// with `s̄ = (s_l + s_r)/2` and `arg t` unwrapped; the optical term
    /// vanishes for an empty box. The optical term rests
    /// on `δ arg t / δχ(x) = (k0/4)(|u_L|² + |u_R|²)`, so it is exact for
    /// symmetric pumping only.
    pub fn functional_energy(&self, state: &SystemState) -> Result<f64> {
        let grid = self.grid();
        let psi = &state.wavefunction;
        let kinetic = dynamics::kinetic_energy(grid, psi)?;
        let external = grid.integrate(psi.psi.iter().zip(&self.v_ext).map(|(c, v)| v * c.norm_sqr()));
        let interaction = 0.5 * self.params.gcn * grid.integrate(psi.psi.iter().map(|c| c.norm_sqr().powi(2)));
        let mean_pump = 0.5 * (state.pumps.0 + state.pumps.1);
        let optical = -4.0 * LIGHT_SHIFT_PER_INTENSITY * mean_pump / K0 * state.excess_phase;
        Ok(kinetic + external + interaction + optical)
    }

    /// Imaginary-time relaxation of `state` until [`Convergence`] holds.
    ///
    /// With equal pumps the functional energy is a Lyapunov function of the
    /// flow, and a step that would raise it by more than round-off
    /// ([`DESCENT_NOISE`], [`DESCENT_NOISE_ABS`]) is retried with half the imaginary-time
    /// step (kept for the rest of the search, at most
    /// [`MAX_STEP_HALVINGS`] times). The wavefunction change is reported per
    /// nominal step, scaling up changes made with a reduced step.
    ///
    /// `monitor` sees the functional energy after every accepted step.
    pub fn relax(
        &mut self,
        mut state: SystemState,
        stop: Convergence,
        mut monitor: impl FnMut(usize, f64),
    ) -> Result<GroundState> {
        let grid = self.grid().clone();
        let nominal = self.stepper.dtau();
        let descent = state.pumps.0 == state.pumps.1;
        let mut halvings = 0;
        let mut calm = 0;
        let mut energy = self.functional_energy(&state)?;
        let mut energy_change = f64::INFINITY;
        let mut psi_change = f64::INFINITY;
        let mut iterations = 0;
        let mut converged = false;
        let outcome = loop {
            if iterations >= stop.max_iters {
                break Ok(());
            }
            let before = state.clone();
            let next = loop {
                if let Err(e) = self.imaginary_step(&mut state) {
                    break Err(e);
                }
                let next = match self.functional_energy(&state) {
                    Ok(v) => v,
                    Err(e) => break Err(e),
                };
                let noise = (DESCENT_NOISE * energy.abs()).max(DESCENT_NOISE_ABS);
                if !descent || next <= energy + noise || halvings == MAX_STEP_HALVINGS {
                    break Ok(next);
                }
                halvings += 1;
                calm = 0;
                state = before.clone();
                if let Err(e) = self.stepper.set_dtau(nominal / f64::from(1u32 << halvings)) {
                    break Err(e);
                }
            };
            let next = match next {
                Ok(v) => v,
                Err(e) => break Err(e),
            };
            calm += 1;
            if halvings > 0 && calm >= STEP_RECOVERY {
                halvings -= 1;
                calm = 0;
                if let Err(e) = self.stepper.set_dtau(nominal / f64::from(1u32 << halvings)) {
                    break Err(e);
                }
            }
            iterations += 1;
            monitor(iterations, next);
            energy_change = ((next - energy) / next.abs().max(1e-300)).abs();
            let scale = nominal / self.stepper.dtau();
            psi_change = scale
                * (grid.dx()
                    * before
                        .wavefunction
                        .psi
                        .iter()
                        .zip(&state.wavefunction.psi)
                        .map(|(a, b)| (a - b).norm_sqr())
                        .sum::<f64>())
                .sqrt();
            energy = next;
            if energy_change < stop.energy_rel && psi_change < stop.psi_l2 {
                converged = true;
                break Ok(());
            }
        };
        self.stepper.set_dtau(nominal)?;
        outcome?;
        Ok(GroundState {
            state,
            iterations,
            converged,
            energy_change,
            psi_change,
        })
    }

    /// Seeded initial guess for a stationary-state search at the
    /// parameter-set pumps.
    ///
    /// With equal pumps the seed is mirror symmetrised: the stationary
    /// crystal is then centred and the nearly free sliding mode of the
    /// lattice inside the flat trap is never excited.
    pub fn seeded_start(&mut self) -> Result<SystemState> {
        let grid = self.grid().clone();
        let mut psi = Wavefunction::homogeneous(&grid, self.params.trap_length);
        seed_fluctuations(
            &mut psi,
            &grid,
            self.params.trap_length,
            self.params.noise_amplitude,
            self.params.rng_seed,
        );
        if self.params.s_left == self.params.s_right {
            mirror_symmetrize(&mut psi);
            psi.normalize(&grid);
        }
        self.state_for(psi, 0.0, (self.params.s_left, self.params.s_right))
    }

    /// Stationary state by imaginary time, returned whether or not the
    /// stopping rule was met.
    pub fn search_ground_state(&mut self) -> Result<GroundState> {
        let start = self.seeded_start()?;
        let stop = Convergence::from_params(&self.params);
        self.relax(start, stop, |_, _| {})
    }
}

/// Converged self-consistent stationary state; non-convergence is an error
/// that still carries the final state.
pub fn ground_state(params: &SimulationParams) -> Result<GroundState> {
    let mut driver = Driver::new(params)?;
    let found = driver.search_ground_state()?;
    if found.converged {
        Ok(found)
    } else {
        Err(Error::NotConverged {
            iterations: found.iterations,
            energy_change: found.energy_change,
            psi_change: found.psi_change,
            state: Box::new(found),
        })
    }
}
