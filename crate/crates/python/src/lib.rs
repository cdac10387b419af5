//! Python bindings for the `lightcrystal` simulator.
//!
//! Parameters are built from keyword arguments using the same keys as the
//! configuration files. Long computations release the interpreter lock.

use lightcrystal::coupling::{self, Convergence};
use lightcrystal::io::config::Config;
use lightcrystal::observables::{self, ObservableSample};
use lightcrystal::protocols::{self, RunOptions, ScanOptions};
use lightcrystal::scattering::{self, SusceptibilityProfile};
use lightcrystal::units::{self, K0};
use lightcrystal::{Complex64, Driver, SimulationParams, SystemState};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: lightcrystal::Error) -> PyErr {
    match err {
        lightcrystal::Error::Domain(_)
        | lightcrystal::Error::InvalidParams(_)
        | lightcrystal::Error::LengthMismatch { .. }
        | lightcrystal::Error::Config(_) => PyValueError::new_err(err.to_string()),
        other => PyRuntimeError::new_err(format!("{}: {other}", other.category())),
    }
}

fn format_value(value: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(b) = value.extract::<bool>() {
        return Ok(b.to_string());
    }
    if let Ok(items) = value.extract::<Vec<f64>>() {
        return Ok(items.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", "));
    }
    Ok(value.str()?.to_string())
}

/// Model, grid and protocol parameters.
#[pyclass(name = "Params", module = "lightcrystal_py", from_py_object)]
#[derive(Clone)]
pub struct PyParams {
    config: Config,
}

#[pymethods]
impl PyParams {
    /// `Params(zeta=0.1, s_left=20, s_right=20, ...)`; unknown keys and
    /// invalid values raise `ValueError`.
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut text = String::new();
        if let Some(kwargs) = kwargs {
            for (key, value) in kwargs.iter() {
                text.push_str(&format!("{} = {}\n", key.str()?, format_value(&value)?));
            }
        }
        let config = Config::parse(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { config })
    }

    /// Parses a configuration file body.
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        let config = Config::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { config })
    }

    fn to_config(&self) -> String {
        self.config.to_text()
    }

    #[getter]
    fn zeta(&self) -> f64 {
        self.config.params.zeta
    }

    #[getter]
    fn gcn(&self) -> f64 {
        self.config.params.gcn
    }

    #[getter]
    fn s_left(&self) -> f64 {
        self.config.params.s_left
    }

    #[getter]
    fn s_right(&self) -> f64 {
        self.config.params.s_right
    }

    #[getter]
    fn trap_length(&self) -> f64 {
        self.config.params.trap_length
    }

    #[getter]
    fn box_length(&self) -> f64 {
        self.config.params.box_length
    }

    #[getter]
    fn n_grid(&self) -> usize {
        self.config.params.n_grid
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.config.params.dt
    }

    #[getter]
    fn rng_seed(&self) -> u64 {
        self.config.params.rng_seed
    }

    /// Copy with the pump intensities replaced.
    fn with_pumps(&self, s_left: f64, s_right: f64) -> Self {
        let mut config = self.config.clone();
        config.params = config.params.with_pumps(s_left, s_right);
        Self { config }
    }

    fn critical_intensity(&self) -> PyResult<f64> {
        self.config.params.critical_intensity_per_beam().map_err(to_py)
    }

    fn effective_wavenumber(&self) -> PyResult<f64> {
        self.config.params.effective_wavenumber().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let p = &self.config.params;
        format!(
            "Params(zeta={}, s_left={}, s_right={}, trap_length={}, box_length={}, n_grid={})",
            p.zeta, p.s_left, p.s_right, p.trap_length, p.box_length, p.n_grid
        )
    }
}

impl PyParams {
    fn params(&self) -> &SimulationParams {
        &self.config.params
    }
}

fn sample_dict<'py>(py: Python<'py>, sample: &ObservableSample) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", sample.t)?;
    d.set_item("r_abs2_left", sample.r_abs2_left)?;
    d.set_item("r_abs2_right", sample.r_abs2_right)?;
    d.set_item("r_phase", sample.r_phase)?;
    d.set_item("t_phase", sample.t_phase)?;
    d.set_item("eta", sample.eta)?;
    d.set_item("delta_phi", sample.delta_phi)?;
    d.set_item("e_kin", sample.e_kin)?;
    d.set_item("norm", sample.norm)?;
    d.set_item("density_order", sample.density_order)?;
    d.set_item("mean_x", sample.mean_x)?;
    Ok(d)
}

/// Self-consistent atom-light state that can be relaxed or evolved.
#[pyclass(name = "Simulation", module = "lightcrystal_py")]
pub struct PySimulation {
    params: SimulationParams,
    driver: Driver,
    state: SystemState,
}

#[pymethods]
impl PySimulation {
    /// Starts from the homogeneous condensate at the configured pumps.
    #[new]
    fn new(params: &PyParams) -> PyResult<Self> {
        let p = params.params().clone();
        let mut driver = Driver::new(&p).map_err(to_py)?;
        let mut state = driver.homogeneous_state().map_err(to_py)?;
        driver.set_pumps(&mut state, (p.s_left, p.s_right)).map_err(to_py)?;
        Ok(Self { params: p, driver, state })
    }

    /// Adds the seeded density fluctuations used by the quench protocols.
    fn seed(&mut self) -> PyResult<()> {
        let mut psi = self.state.wavefunction.clone();
        let p = &self.params;
        coupling::seed_fluctuations(&mut psi, self.driver.grid(), p.trap_length, p.noise_amplitude, p.rng_seed);
        self.state = self.driver.state_for(psi, self.state.time, self.state.pumps).map_err(to_py)?;
        Ok(())
    }

    fn set_pumps(&mut self, s_left: f64, s_right: f64) -> PyResult<()> {
        self.driver.set_pumps(&mut self.state, (s_left, s_right)).map_err(to_py)
    }

    /// Advances `steps` real-time steps at the current pumps.
    fn step(&mut self, py: Python<'_>, steps: usize) -> PyResult<()> {
        let (driver, state) = (&mut self.driver, &mut self.state);
        py.detach(|| {
            let (pumps, t0, dt) = (state.pumps, state.time, driver.params().dt);
            for k in 1..=steps {
                driver.self_consistent_step(state, pumps)?;
                state.time = t0 + k as f64 * dt;
            }
            Ok(())
        })
        .map_err(to_py)
    }

    /// Replaces the state by the stationary state at the configured pumps,
    /// relaxed from a fresh seed; returns `(converged, iterations)`.
    fn relax(&mut self, py: Python<'_>) -> PyResult<(bool, usize)> {
        let params = self.params.clone();
        let driver = &mut self.driver;
        let found = py
            .detach(|| {
                let start = driver.seeded_start()?;
                driver.relax(start, Convergence::from_params(&params), |_, _| {})
            })
            .map_err(to_py)?;
        self.state = found.state;
        Ok((found.converged, found.iterations))
    }

    #[getter]
    fn time(&self) -> f64 {
        self.state.time
    }

    #[getter]
    fn pumps(&self) -> (f64, f64) {
        self.state.pumps
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.driver.grid().x().to_vec()
    }

    #[getter]
    fn psi(&self) -> Vec<Complex64> {
        self.state.wavefunction.psi.clone()
    }

    #[getter]
    fn density(&self) -> Vec<f64> {
        self.state.wavefunction.density()
    }

    /// Total light intensity `s_l|E_L|² + s_r|E_R|²` per grid cell.
    #[getter]
    fn intensity(&self) -> Vec<f64> {
        let (sl, sr) = self.state.pumps;
        self.state
            .left_field
            .intensity()
            .zip(self.state.right_field.intensity())
            .map(|(l, r)| sl * l + sr * r)
            .collect()
    }

    fn observables<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let sample = ObservableSample::measure(self.driver.grid(), &self.params, &self.state).map_err(to_py)?;
        sample_dict(py, &sample)
    }

    /// Value of the energy functional minimised by `relax`.
    fn energy(&self) -> PyResult<f64> {
        self.driver.functional_energy(&self.state).map_err(to_py)
    }

    fn transmitted_fraction(&self) -> f64 {
        observables::transmitted_fraction(&self.state)
    }
}

#[pyfunction]
fn critical_intensity_per_beam(zeta: f64) -> PyResult<f64> {
    units::critical_intensity_per_beam(zeta).map_err(to_py)
}

#[pyfunction]
fn effective_wavenumber(zeta: f64, trap_length: f64) -> PyResult<f64> {
    units::effective_wavenumber(zeta, trap_length).map_err(to_py)
}

/// Closed-form `(r, t)` of a homogeneous slab.
#[pyfunction]
fn analytic_slab(chi: f64, width: f64) -> PyResult<(Complex64, Complex64)> {
    scattering::analytic_slab(chi, width, K0).map_err(to_py)
}

/// Numerical `(r, t)` for light entering from the left through cells of
/// susceptibility `chi` and width `dx`.
#[pyfunction]
fn scatter(chi: Vec<f64>, dx: f64) -> PyResult<(Complex64, Complex64)> {
    let profile = SusceptibilityProfile::new(chi, dx).map_err(to_py)?;
    let pair = scattering::solve_pair(&profile).map_err(to_py)?;
    Ok((pair.left.r, pair.left.t))
}

/// Stationary state at the parameter-set pumps, as a dict with the
/// observables plus `x`, `density`, `converged` and `iterations`.
#[pyfunction]
fn ground_state<'py>(py: Python<'py>, params: &PyParams) -> PyResult<Bound<'py, PyDict>> {
    let p = params.params().clone();
    let (found, sample, x) = py
        .detach(|| -> lightcrystal::Result<_> {
            let mut driver = Driver::new(&p)?;
            let found = driver.search_ground_state()?;
            let sample = ObservableSample::measure(driver.grid(), &p, &found.state)?;
            Ok((found, sample, driver.grid().x().to_vec()))
        })
        .map_err(to_py)?;
    let d = sample_dict(py, &sample)?;
    d.set_item("x", x)?;
    d.set_item("density", found.state.wavefunction.density())?;
    d.set_item("converged", found.converged)?;
    d.set_item("iterations", found.iterations)?;
    d.set_item("transmitted", observables::transmitted_fraction(&found.state))?;
    Ok(d)
}

/// Symmetric-pump threshold search; returns the thresholds and the list
/// of evaluated points.
#[pyfunction]
#[pyo3(signature = (params, s_values, resolution = 0.5, workers = 0))]
fn threshold_scan<'py>(
    py: Python<'py>,
    params: &PyParams,
    s_values: Vec<f64>,
    resolution: f64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.params().clone();
    let options = ScanOptions {
        resolution,
        workers: if workers == 0 { protocols::default_workers() } else { workers },
        ..ScanOptions::default()
    };
    let scan = py.detach(|| protocols::threshold_scan(&p, &s_values, options)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("eta_threshold", scan.eta_threshold)?;
    d.set_item("eta_bracket", scan.eta_bracket)?;
    d.set_item("r_threshold", scan.r_threshold)?;
    d.set_item("r_bracket", scan.r_bracket)?;
    d.set_item("eta_floor", scan.eta_floor)?;
    d.set_item("r_floor", scan.r_floor)?;
    let points: Vec<(f64, f64, f64, f64, bool)> =
        scan.points.iter().map(|pt| (pt.value, pt.eta, pt.r_abs2, pt.delta_phi, pt.converged)).collect();
    d.set_item("points", points)?;
    Ok(d)
}

/// Sudden switch-on from the seeded homogeneous condensate; returns one
/// list per observable.
#[pyfunction]
#[pyo3(signature = (params, t_end, sample_stride = 100))]
fn quench<'py>(py: Python<'py>, params: &PyParams, t_end: f64, sample_stride: usize) -> PyResult<Bound<'py, PyDict>> {
    let p = params.params().clone();
    let options = RunOptions { sample_stride, ..RunOptions::default() };
    let record = py.detach(|| protocols::quench_run(&p, t_end, options)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("t", record.series(|s| s.t))?;
    d.set_item("r_abs2_left", record.series(|s| s.r_abs2_left))?;
    d.set_item("r_abs2_right", record.series(|s| s.r_abs2_right))?;
    d.set_item("eta", record.series(|s| s.eta))?;
    d.set_item("delta_phi", record.series(|s| s.delta_phi))?;
    d.set_item("e_kin", record.series(|s| s.e_kin))?;
    d.set_item("norm", record.series(|s| s.norm))?;
    for (key, value) in &record.summary {
        d.set_item(key, value)?;
    }
    Ok(d)
}

#[pymodule]
fn lightcrystal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", lightcrystal::VERSION)?;
    m.add("K0", K0)?;
    m.add_class::<PyParams>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(critical_intensity_per_beam, m)?)?;
    m.add_function(wrap_pyfunction!(effective_wavenumber, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_slab, m)?)?;
    m.add_function(wrap_pyfunction!(scatter, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_scan, m)?)?;
    m.add_function(wrap_pyfunction!(quench, m)?)?;
    Ok(())
}
