//! Scripted experiments: quenches, ramps, threshold scans, the asymmetry
//! phase diagram, single-side pumping, loss and particle-number scaling.
//!
//! Every protocol is a pure function of its parameters and seed. Scan
//! points run on a bounded worker pool and are merged by index.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{seed_fluctuations, Driver, GroundState, SystemState};
use crate::observables::{self, ObservableSample};
use crate::units::{critical_intensity_per_beam, SimulationParams};
use crate::{Error, Result, VERSION};

/// Piecewise-linear pump schedule `(t, s_l, s_r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampSchedule {
    breakpoints: Vec<(f64, f64, f64)>,
}

impl RampSchedule {
    pub fn new(breakpoints: Vec<(f64, f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Domain("schedule needs at least one breakpoint".into()));
        }
        for w in breakpoints.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Domain(format!(
                    "schedule times must increase strictly ({} after {})",
                    w[1].0, w[0].0
                )));
            }
        }
        if breakpoints
            .iter()
            .any(|&(t, l, r)| !t.is_finite() || !(l >= 0.0) || !(r >= 0.0))
        {
            return Err(Error::Domain("schedule intensities must be finite and >= 0".into()));
        }
        Ok(Self { breakpoints })
    }

    pub fn constant(s_left: f64, s_right: f64) -> Self {
        Self {
            breakpoints: vec![(0.0, s_left, s_right)],
        }
    }

    /// Linear ramp from zero to the target over `t_ramp`, a hold, and
    /// optionally the mirror-image ramp back down followed by `tail` of
    /// darkness. `t_ramp = 0` means a sudden switch.
    pub fn trapezoid(s_left: f64, s_right: f64, t_ramp: f64, hold: f64, down: bool, tail: f64) -> Result<Self> {
        if !(t_ramp >= 0.0) || !(hold >= 0.0) || !(tail >= 0.0) {
            return Err(Error::Domain("ramp durations must be >= 0".into()));
        }
        const SWITCH: f64 = 1e-9;
        let mut b = Vec::new();
        if t_ramp > 0.0 {
            b.push((0.0, 0.0, 0.0));
            b.push((t_ramp, s_left, s_right));
        } else {
            b.push((0.0, s_left, s_right));
        }
        if down {
            let top_end = t_ramp + hold;
            if hold > 0.0 {
                b.push((top_end, s_left, s_right));
            }
            b.push((top_end + t_ramp.max(SWITCH), 0.0, 0.0));
        }
        // keep the first breakpoint unique when hold and ramp are both zero
        b.dedup_by(|a, b| a.0 == b.0);
        Self::new(b)
    }

    pub fn breakpoints(&self) -> &[(f64, f64, f64)] {
        &self.breakpoints
    }

    /// Pumps at time `t`, clamped to the first/last breakpoint.
    pub fn at(&self, t: f64) -> (f64, f64) {
        let b = &self.breakpoints;
        if t <= b[0].0 {
            return (b[0].1, b[0].2);
        }
        for w in b.windows(2) {
            let (t0, l0, r0) = w[0];
            let (t1, l1, r1) = w[1];
            if t <= t1 {
                let f = (t - t0) / (t1 - t0);
                return (l0 + f * (l1 - l0), r0 + f * (r1 - r0));
            }
        }
        let last = b[b.len() - 1];
        (last.1, last.2)
    }

    pub fn end_time(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub version: String,
    pub rng_seed: u64,
}

/// Stored wavefunction frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub psi: Vec<Complex64>,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub label: String,
    pub params: SimulationParams,
    pub schedule: RampSchedule,
    pub samples: Vec<ObservableSample>,
    pub final_state: SystemState,
    pub run_info: RunInfo,
    /// Protocol-specific scalars, in insertion order.
    pub summary: Vec<(String, f64)>,
    pub frames: Vec<Frame>,
}

impl RunRecord {
    pub fn series(&self, f: impl Fn(&ObservableSample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// Sampling cadence for real-time runs, in steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub sample_stride: usize,
    /// Attach `|ψ(k)|²` to every n-th sample.
    pub spectrum_stride: Option<usize>,
    /// Store the wavefunction every n-th sample.
    pub frame_stride: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            sample_stride: 100,
            spectrum_stride: None,
            frame_stride: None,
        }
    }
}

/// Advances `state` under `schedule` until `t_end`, sampling on the way.
pub fn run_schedule(
    driver: &mut Driver,
    mut state: SystemState,
    schedule: &RampSchedule,
    t_end: f64,
    options: RunOptions,
    label: &str,
) -> Result<RunRecord> {
    let dt = driver.params().dt;
    let steps = (t_end / dt).round() as usize;
    let stride = options.sample_stride.max(1);
    let grid = driver.grid().clone();
    let params = driver.params().clone();
    let t0 = state.time;
    driver.set_pumps(&mut state, schedule.at(t0))?;
    let mut samples = Vec::with_capacity(steps / stride + 2);
    let mut frames = Vec::new();
    let mut record = |state: &SystemState, index: usize| -> Result<()> {
        let mut sample = ObservableSample::measure(&grid, &params, state)?;
        if options.spectrum_stride.is_some_and(|s| index.is_multiple_of(s.max(1))) {
            sample = sample.with_spectrum(&grid, &state.wavefunction)?;
        }
        if options.frame_stride.is_some_and(|s| index.is_multiple_of(s.max(1))) {
            frames.push(Frame {
                t: state.time,
                psi: state.wavefunction.psi.clone(),
            });
        }
        samples.push(sample);
        Ok(())
    };
    record(&state, 0)?;
    for step in 1..=steps {
        let t_mid = t0 + (step as f64 - 0.5) * dt;
        driver.self_consistent_step(&mut state, schedule.at(t_mid))?;
        // restate time from the step count so long runs don't drift
        state.time = t0 + step as f64 * dt;
        if step % stride == 0 {
            record(&state, step / stride)?;
        }
    }
    Ok(RunRecord {
        label: label.to_string(),
        params,
        schedule: schedule.clone(),
        samples,
        final_state: state,
        run_info: RunInfo {
            version: VERSION.to_string(),
            rng_seed: driver.params().rng_seed,
        },
        summary: Vec::new(),
        frames,
    })
}

fn seeded_homogeneous(driver: &mut Driver) -> Result<(SystemState, SystemState)> {
    let reference = driver.homogeneous_state()?;
    let p = driver.params().clone();
    let mut psi = reference.wavefunction.clone();
    seed_fluctuations(&mut psi, driver.grid(), p.trap_length, p.noise_amplitude, p.rng_seed);
    let start = driver.state_for(psi, 0.0, (0.0, 0.0))?;
    Ok((reference, start))
}

/// Sudden switch-on of both pumps at `t = 0` from a seeded homogeneous BEC.
pub fn quench_run(params: &SimulationParams, t_end: f64, options: RunOptions) -> Result<RunRecord> {
    let mut driver = Driver::new(params)?;
    let (_, start) = seeded_homogeneous(&mut driver)?;
    let schedule = RampSchedule::constant(params.s_left, params.s_right);
    let mut record = run_schedule(&mut driver, start, &schedule, t_end, options, "quench")?;
    let eta = record.series(|s| s.eta);
    let r2 = record.series(|s| s.r_abs2_left);
    record.summary.push(("final_eta".into(), *eta.last().unwrap_or(&f64::NAN)));
    record.summary.push(("final_r_abs2".into(), *r2.last().unwrap_or(&f64::NAN)));
    record.summary.push(("peak_r_abs2".into(), r2.iter().cloned().fold(0.0, f64::max)));
    Ok(record)
}

/// Samples averaged by [`reflectivity_variance`](observables::reflectivity_variance).
pub const VARIANCE_WINDOW: usize = 50;

/// Linear ramp to the parameter-set pumps, hold, and optionally back down.
pub fn ramp_run(
    params: &SimulationParams,
    t_ramp: f64,
    hold: f64,
    down: bool,
    tail: f64,
    options: RunOptions,
) -> Result<RunRecord> {
    let mut driver = Driver::new(params)?;
    let (reference, start) = seeded_homogeneous(&mut driver)?;
    let schedule = RampSchedule::trapezoid(params.s_left, params.s_right, t_ramp, hold, down, tail)?;
    let t_end = if down { schedule.end_time() + tail } else { t_ramp + hold };
    let mut record = run_schedule(&mut driver, start, &schedule, t_end, options, "ramp")?;
    let e_kin = record.series(|s| s.e_kin);
    let r2 = record.series(|s| s.r_abs2_left);
    let peak = e_kin.iter().cloned().fold(0.0, f64::max);
    record.summary.push(("t_ramp".into(), t_ramp));
    record.summary.push(("peak_e_kin".into(), peak));
    record.summary.push(("final_e_kin".into(), *e_kin.last().unwrap_or(&f64::NAN)));
    record.summary.push(("final_eta".into(), record.samples.last().map_or(f64::NAN, |s| s.eta)));
    if let Ok(v) = observables::reflectivity_variance(&r2, VARIANCE_WINDOW) {
        record.summary.push(("r_variance".into(), v));
    }
    if down {
        let fidelity = record
            .final_state
            .wavefunction
            .fidelity(&reference.wavefunction, driver.grid());
        record.summary.push(("fidelity_to_homogeneous".into(), fidelity));
    }
    Ok(record)
}

/// `|r|²` of the stationary state along a schedule, each point warm-started
/// from the previous one.
pub fn adiabatic_curve(params: &SimulationParams, schedule: &RampSchedule, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut driver = Driver::new(params)?;
    let mut state = driver.seeded_start()?;
    let stop = crate::coupling::Convergence::from_params(params);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        driver.set_pumps(&mut state, schedule.at(t))?;
        let found = driver.relax(state, stop, |_, _| {})?;
        out.push((t, found.state.left_field.reflectivity()));
        state = found.state;
    }
    Ok(out)
}

/// Settings shared by threshold searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Stop bisecting once the bracket is narrower than this.
    pub resolution: f64,
    pub workers: usize,
    /// The below-threshold floor is measured at this fraction of the
    /// predicted threshold.
    pub floor_fraction: f64,
    /// Ordered means exceeding the floor by this factor.
    pub floor_factor: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            resolution: 0.5,
            workers: default_workers(),
            floor_fraction: 0.2,
            floor_factor: 10.0,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// One stationary state of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    /// Scanned pump value (per beam or total, depending on the scan).
    pub value: f64,
    pub s_left: f64,
    pub s_right: f64,
    pub eta: f64,
    pub r_abs2: f64,
    pub delta_phi: f64,
    pub transmitted: f64,
    pub density_order: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Added during bisection rather than taken from the input list.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScan {
    pub eta_floor: f64,
    pub r_floor: f64,
    /// Threshold from the Bragg ratio, bisected to the requested resolution.
    pub eta_threshold: f64,
    pub eta_bracket: (f64, f64),
    /// Threshold from the reflectivity: the steepest rise of log |r|^2
    /// between neighbouring evaluated states.
    pub r_threshold: f64,
    pub r_bracket: (f64, f64),
    /// Every evaluated point, sorted by value.
    pub points: Vec<ScanPoint>,
}

fn stationary_point(params: &SimulationParams, value: f64, pumps: (f64, f64), refined: bool) -> Result<(ScanPoint, GroundState)> {
    let p = params.with_pumps(pumps.0, pumps.1);
    let mut driver = Driver::new(&p)?;
    let found = driver.search_ground_state()?;
    let sample = ObservableSample::measure(driver.grid(), &p, &found.state)?;
    let point = ScanPoint {
        value,
        s_left: pumps.0,
        s_right: pumps.1,
        eta: sample.eta,
        r_abs2: sample.r_abs2_left,
        delta_phi: sample.delta_phi,
        transmitted: observables::transmitted_fraction(&found.state),
        density_order: sample.density_order,
        converged: found.converged,
        iterations: found.iterations,
        refined,
    };
    Ok((point, found))
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Stationary states for every value, in input order.
pub fn stationary_sweep(
    params: &SimulationParams,
    values: &[f64],
    pumps_of: impl Fn(f64) -> (f64, f64) + Sync,
    workers: usize,
) -> Result<Vec<ScanPoint>> {
    with_workers(workers, || {
        values
            .par_iter()
            .map(|&v| stationary_point(params, v, pumps_of(v), false).map(|(p, _)| p))
            .collect()
    })
}

fn first_exceeding(points: &[ScanPoint], metric: impl Fn(&ScanPoint) -> f64, level: f64) -> Option<usize> {
    points.iter().position(|p| metric(p) > level)
}

/// Neighbouring pair of points across which `metric` grows by the largest
/// factor. The reflectivity rises smoothly below threshold, so a fixed
/// multiple of its floor fires early; the jump into the ordered phase is
/// several decades and dominates any pre-threshold growth.
fn steepest_log_rise(points: &[ScanPoint], metric: impl Fn(&ScanPoint) -> f64, floor: f64) -> Option<(f64, f64)> {
    let tiny = floor.max(f64::MIN_POSITIVE);
    points
        .windows(2)
        .map(|w| {
            let rise = metric(&w[1]).max(tiny).ln() - metric(&w[0]).max(tiny).ln();
            (rise, (w[0].value, w[1].value))
        })
        .filter(|(rise, _)| *rise > 0.0)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, bracket)| bracket)
}

fn scan_along(
    params: &SimulationParams,
    values: &[f64],
    floor_value: f64,
    pumps_of: impl Fn(f64) -> (f64, f64) + Sync,
    options: ScanOptions,
) -> Result<ThresholdScan> {
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut jobs = vec![floor_value];
    jobs.extend(&values);
    let mut evaluated = stationary_sweep(params, &jobs, &pumps_of, options.workers)?;
    let floor = evaluated.remove(0);
    let eta_level = options.floor_factor * floor.eta;
    let mut points = evaluated;

    let ordered = first_exceeding(&points, |p| p.eta, eta_level).ok_or(Error::NoKnee)?;
    if ordered == 0 {
        return Err(Error::NoKnee);
    }
    let (mut lo, mut hi) = (points[ordered - 1].value, points[ordered].value);
    while hi - lo > options.resolution {
        let mid = 0.5 * (lo + hi);
        let (point, _) = stationary_point(params, mid, pumps_of(mid), true)?;
        if point.eta > eta_level {
            hi = mid;
        } else {
            lo = mid;
        }
        points.push(point);
    }
    points.sort_by(|a, b| a.value.total_cmp(&b.value));

    let r_bracket = steepest_log_rise(&points, |p| p.r_abs2, floor.r_abs2).ok_or(Error::NoKnee)?;
    Ok(ThresholdScan {
        eta_floor: floor.eta,
        r_floor: floor.r_abs2,
        eta_threshold: 0.5 * (lo + hi),
        eta_bracket: (lo, hi),
        r_threshold: 0.5 * (r_bracket.0 + r_bracket.1),
        r_bracket,
        points,
    })
}

/// Symmetric-pump threshold search over per-beam intensities.
pub fn threshold_scan(params: &SimulationParams, s_values: &[f64], options: ScanOptions) -> Result<ThresholdScan> {
    let floor = options.floor_fraction * critical_intensity_per_beam(params.zeta)?;
    scan_along(params, s_values, floor, |s| (s, s), options)
}

/// Beam asymmetry `(I_l - I_r)/(I_l + I_r)` to pumps at total power `total`.
pub fn pumps_for_asymmetry(total: f64, asymmetry: f64) -> (f64, f64) {
    (0.5 * total * (1.0 + asymmetry), 0.5 * total * (1.0 - asymmetry))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseBoundaryPoint {
    pub asymmetry: f64,
    /// Critical total power `I_l + I_r`.
    pub threshold_total: f64,
    pub bracket: (f64, f64),
    pub r_threshold_total: f64,
    pub scan: ThresholdScan,
}

/// Stability boundary of the homogeneous phase in total power versus
/// asymmetry.
pub fn asymmetry_phase_diagram(
    params: &SimulationParams,
    asymmetries: &[f64],
    totals: &[f64],
    options: ScanOptions,
) -> Result<Vec<PhaseBoundaryPoint>> {
    if let Some(a) = asymmetries.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::Domain(format!("asymmetry must lie in [0, 1], got {a}")));
    }
    let floor = options.floor_fraction * 2.0 * critical_intensity_per_beam(params.zeta)?;
    asymmetries
        .iter()
        .map(|&a| {
            let scan = scan_along(params, totals, floor, |s| pumps_for_asymmetry(s, a), options)?;
            Ok(PhaseBoundaryPoint {
                asymmetry: a,
                threshold_total: scan.eta_threshold,
                bracket: scan.eta_bracket,
                r_threshold_total: scan.r_threshold,
                scan,
            })
        })
        .collect()
}

/// Single-side pumping from the left.
///
/// Summary keys: `flash_time`, `flash_peak`, `late_mean` (mean `|r|²` over
/// the second half of the run), `onset_time` (first sample with `|r|²` ten
/// times its initial value), `directionality_at_flash`, `final_directionality`.
pub fn superradiance_run(params: &SimulationParams, t_end: f64, options: RunOptions) -> Result<RunRecord> {
    if params.s_right != 0.0 {
        return Err(Error::Domain("single-side pumping needs s_right = 0".into()));
    }
    let options = RunOptions {
        spectrum_stride: Some(options.spectrum_stride.unwrap_or(1)),
        ..options
    };
    let mut driver = Driver::new(params)?;
    let (_, start) = seeded_homogeneous(&mut driver)?;
    let schedule = RampSchedule::constant(params.s_left, 0.0);
    let mut record = run_schedule(&mut driver, start, &schedule, t_end, options, "superradiance")?;
    let grid = driver.grid().clone();
    let r2 = record.series(|s| s.r_abs2_left);
    let (flash_index, flash_peak) = r2
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    let half = r2.len() / 2;
    let late_mean = r2[half..].iter().sum::<f64>() / (r2.len() - half).max(1) as f64;
    let onset = r2
        .iter()
        .position(|&v| v > 10.0 * r2[0])
        .map_or(f64::NAN, |i| record.samples[i].t);
    let direction_at = |i: usize| -> f64 {
        // nearest sample at or before i that carries a spectrum
        record.samples[..=i]
            .iter()
            .rev()
            .find_map(|s| s.momentum_spectrum.as_ref())
            .map_or(f64::NAN, |spec| observables::directionality(&grid, spec))
    };
    let at_flash = direction_at(flash_index);
    let at_end = direction_at(record.samples.len() - 1);
    record.summary.extend([
        ("flash_time".to_string(), record.samples[flash_index].t),
        ("flash_peak".to_string(), flash_peak),
        ("late_mean".to_string(), late_mean),
        ("onset_time".to_string(), onset),
        ("directionality_at_flash".to_string(), at_flash),
        ("final_directionality".to_string(), at_end),
    ]);
    Ok(record)
}

/// Quench runs for each loss rate, in input order.
pub fn loss_run(
    params: &SimulationParams,
    gammas: &[f64],
    t_end: f64,
    options: RunOptions,
    workers: usize,
) -> Result<Vec<RunRecord>> {
    if gammas.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::Domain("loss rates must be >= 0".into()));
    }
    with_workers(workers, || {
        gammas
            .par_iter()
            .map(|&gamma| {
                let p = SimulationParams { gamma, ..params.clone() };
                let mut record = quench_run(&p, t_end, options)?;
                record.label = "loss".into();
                record.summary.push(("gamma".into(), gamma));
                Ok(record)
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub factor: f64,
    pub s_over_sc: f64,
    pub s_per_beam: f64,
    pub r_abs2: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// `(factor, |r|²)` at `reference_ratio`.
    pub at_reference: Vec<(f64, f64)>,
    pub reference_ratio: f64,
    /// Least-squares line through `at_reference`: slope, intercept, R².
    pub fit: (f64, f64, f64),
}

/// Stationary reflectivity against rescaled intensity for scaled particle
/// numbers (`ζ` and `g_c N` scaled together).
pub fn scaling_run(
    params: &SimulationParams,
    factors: &[f64],
    ratios: &[f64],
    reference_ratio: f64,
    workers: usize,
) -> Result<ScalingTable> {
    if factors.iter().any(|f| !(*f > 0.0)) {
        return Err(Error::Domain("scale factors must be > 0".into()));
    }
    let mut ratios = ratios.to_vec();
    if !ratios.contains(&reference_ratio) {
        ratios.push(reference_ratio);
    }
    let jobs: Vec<(f64, f64)> = factors
        .iter()
        .flat_map(|&f| ratios.iter().map(move |&q| (f, q)))
        .collect();
    let rows: Vec<ScalingRow> = with_workers(workers, || {
        jobs.par_iter()
            .map(|&(factor, q)| {
                let p = params.scaled_particle_number(factor);
                let s = q * critical_intensity_per_beam(p.zeta)?;
                let (point, _) = stationary_point(&p, s, (s, s), false)?;
                Ok(ScalingRow {
                    factor,
                    s_over_sc: q,
                    s_per_beam: s,
                    r_abs2: point.r_abs2,
                    eta: point.eta,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let at_reference: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.s_over_sc == reference_ratio)
        .map(|r| (r.factor, r.r_abs2))
        .collect();
    let fit = linear_fit(&at_reference);
    Ok(ScalingTable {
        rows,
        at_reference,
        reference_ratio,
        fit,
    })
}

/// Ordinary least squares `y = a x + b`; returns `(a, b, R²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}
