//! Self-consistent simulation of an elongated Bose-Einstein condensate
//! illuminated by two counter-propagating, mutually incoherent laser beams.
//!
//! The condensate obeys a one-dimensional Gross-Pitaevskii equation whose
//! potential is the dipole light shift of the two beams. Each beam obeys a
//! Helmholtz equation whose refractive index is set by the condensate
//! density. Above a critical pump intensity the homogeneous state becomes
//! unstable and atoms and light order together into a joint crystal.
//!
//! All quantities are dimensionless, in recoil units: lengths in pump
//! wavelengths, energies in recoil energies, times in inverse recoil
//! frequencies and intensities in `I0` (see [`units`]).
//!
//! Module map:
//!
//! * [`units`]: unit system, parameters, closed-form reference values.
//! * [`grid`]: periodic grid and momentum-space transforms.
//! * [`scattering`]: transfer-matrix Helmholtz solver.
//! * [`dynamics`]: split-step condensate integrator.
//! * [`coupling`]: the self-consistent atom-light loop and ground states.
//! * [`observables`]: reflectivity, Bragg ratio, phase locking and friends.
//! * [`protocols`]: scripted experiments (quench, ramps, scans, ...).
//! * [`io`]: configuration files, run output and the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod dynamics;
pub mod grid;
pub mod io;
pub mod observables;
pub mod protocols;
pub mod scattering;
pub mod units;

pub use num_complex::Complex64;

pub use coupling::{Driver, GroundState, SystemState};
pub use dynamics::{Potential, Stepper, Wavefunction};
pub use grid::Grid;
pub use observables::ObservableSample;
pub use protocols::{RampSchedule, RunRecord};
pub use scattering::{Direction, ScatteringSolution, SusceptibilityProfile};
pub use units::{SimulationParams, ValidationReport};

/// Crate version stamped into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("non-finite wavefunction at t = {t}")]
    NonFinite { t: f64 },

    #[error(
        "imaginary-time search did not converge after {iterations} steps \
         (relative energy change {energy_change:.3e}, wavefunction change {psi_change:.3e})"
    )]
    NotConverged {
        iterations: usize,
        energy_change: f64,
        psi_change: f64,
        state: Box<GroundState>,
    },

    #[error("no ordering threshold inside the scanned range")]
    NoKnee,

    #[error("short series: need at least {needed} samples, got {got}")]
    ShortSeries { needed: usize, got: usize },

    #[error("config: {0}")]
    Config(#[from] io::config::ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable category printed by the command line.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InvalidParams(_) => "invalid-params",
            Error::NonFinite { .. } => "blow-up",
            Error::NotConverged { .. } => "not-converged",
            Error::NoKnee => "no-knee",
            Error::ShortSeries { .. } => "short-series",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
