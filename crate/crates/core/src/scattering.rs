//! Helmholtz scattering through a piecewise-constant susceptibility.
//!
//! Each grid cell carries a constant `χ_j`, inside which the field is an
//! exact superposition of plane waves with `k_j = k0 √(1 + χ_j)`. Amplitudes
//! are written in the vacuum basis at every point,
//! `E = a + b`, `E' = i k0 (a - b)`, so a cell maps `(a, b)` at its left
//! edge to `(a, b)` at its right edge through a unimodular 2×2 matrix.
//! Matrices are composed left to right: the total is `M_{n-1} ⋯ M_1 M_0`.
//!
//! For left injection the edge amplitudes are `(1, r)` on the left and
//! `(t, 0)` on the right; for right injection `(0, t')` and `(r', 1)`.
//! Phases of `r` and `t` are referenced to the domain edges.

use std::ops::Mul;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::units::K0;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// 2×2 transfer matrix acting on `(right-moving, left-moving)` amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[Complex64; 2]; 2]);

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix([
        [Complex64 { re: 1.0, im: 0.0 }, Complex64 { re: 0.0, im: 0.0 }],
        [Complex64 { re: 0.0, im: 0.0 }, Complex64 { re: 1.0, im: 0.0 }],
    ]);

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// `(r, t)` for a wave injected from the left.
    pub fn left_coefficients(&self) -> (Complex64, Complex64) {
        let m = &self.0;
        let r = -m[1][0] / m[1][1];
        (r, self.det() / m[1][1])
    }

    /// `(r', t')` for a wave injected from the right.
    pub fn right_coefficients(&self) -> (Complex64, Complex64) {
        let m = &self.0;
        (m[0][1] / m[1][1], 1.0 / m[1][1])
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix(out)
    }
}

/// Transfer matrix across a homogeneous layer of thickness `dx`.
///
/// `k0` is the vacuum wavenumber in `1/λ0`. The result is exact for a
/// constant susceptibility and has unit determinant.
pub fn cell_matrix(chi: f64, dx: f64, k0: f64) -> Result<TransferMatrix> {
    if !(chi > -1.0) || !chi.is_finite() {
        return Err(Error::Domain(format!("susceptibility must exceed -1, got {chi}")));
    }
    Ok(layer_matrix(chi, dx, k0))
}

#[inline]
fn layer_matrix(chi: f64, dx: f64, k0: f64) -> TransferMatrix {
    let ratio = (1.0 + chi).sqrt();
    let (s, c) = (ratio * k0 * dx).sin_cos();
    let sum = 0.5 * (ratio + 1.0 / ratio);
    let diff = 0.5 * (ratio - 1.0 / ratio);
    let diag = Complex64::new(c, sum * s);
    let off = I * (diff * s);
    TransferMatrix([[diag, off], [off.conj(), diag.conj()]])
}

/// Which side a beam enters from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Real per-cell susceptibility `χ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityProfile {
    pub chi: Vec<f64>,
    pub dx: f64,
}

impl SusceptibilityProfile {
    pub fn new(chi: Vec<f64>, dx: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::Domain("cell width must be > 0".into()));
        }
        if let Some(bad) = chi.iter().find(|c| !(**c > -1.0) || !c.is_finite()) {
            return Err(Error::Domain(format!("susceptibility must exceed -1, got {bad}")));
        }
        Ok(Self { chi, dx })
    }

    /// `χ(x) = ζ λ0 |ψ(x)|²` for a wavefunction normalised to the particle
    /// fraction that remains.
    pub fn from_density(grid: &Grid, psi: &[Complex64], zeta: f64) -> Result<Self> {
        grid.check_len(psi.len())?;
        Ok(Self {
            chi: psi.iter().map(|c| zeta * c.norm_sqr()).collect(),
            dx: grid.dx(),
        })
    }

    pub fn uniform(chi: f64, n: usize, dx: f64) -> Result<Self> {
        Self::new(vec![chi; n], dx)
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn total_matrix(&self) -> TransferMatrix {
        self.chi
            .iter()
            .fold(TransferMatrix::IDENTITY, |acc, &c| layer_matrix(c, self.dx, K0) * acc)
    }
}

/// Field of one injected beam, normalised to unit incident amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    /// Complex envelope `u(x_j)` at cell centres.
    pub envelope: Vec<Complex64>,
    /// `|u|²` averaged exactly over each cell.
    pub cell_intensity: Vec<f64>,
    pub r: Complex64,
    pub t: Complex64,
    pub direction: Direction,
}

impl ScatteringSolution {
    /// Field of a beam crossing an empty domain of `n` cells.
    pub fn vacuum(n: usize, dx: f64, direction: Direction) -> Self {
        let box_length = n as f64 * dx;
        let envelope = (0..n)
            .map(|j| {
                let from_edge = (j as f64 + 0.5) * dx;
                let path = match direction {
                    Direction::Left => from_edge,
                    Direction::Right => box_length - from_edge,
                };
                Complex64::from_polar(1.0, K0 * path)
            })
            .collect();
        Self {
            envelope,
            cell_intensity: vec![1.0; n],
            r: Complex64::new(0.0, 0.0),
            t: Complex64::from_polar(1.0, K0 * box_length),
            direction,
        }
    }

    /// Cell-averaged intensity.
    pub fn intensity(&self) -> impl Iterator<Item = f64> + '_ {
        self.cell_intensity.iter().copied()
    }

    pub fn reflectivity(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmissivity(&self) -> f64 {
        self.t.norm_sqr()
    }
}

/// Both beams for one profile, from a single left-to-right sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub left: ScatteringSolution,
    pub right: ScatteringSolution,
    /// Unwrapped transmission phase `arg t` accumulated along the sweep.
    pub transmission_phase: f64,
    /// `arg t - k0 n dx`: the phase gained over an empty domain, formed
    /// from an integer turn count so it stays accurate to round-off.
    pub excess_phase: f64,
}

/// `M_{n-1} ⋯ M_0` by pairwise reduction.
fn pairwise_product(mut mats: Vec<TransferMatrix>) -> TransferMatrix {
    if mats.is_empty() {
        return TransferMatrix::IDENTITY;
    }
    while mats.len() > 1 {
        let merged = mats
            .chunks(2)
            .map(|pair| if pair.len() == 2 { pair[1] * pair[0] } else { pair[0] })
            .collect();
        mats = merged;
    }
    mats[0]
}

/// Mean of `|E|²` over a uniform cell of width `dx` and internal
/// wavenumber `q`, given the field `e` and its derivative `d` at the centre.
fn cell_average(e: Complex64, d: Complex64, q: f64, dx: f64) -> f64 {
    let z = q * dx;
    let sinc = if z.abs() < 1e-8 { 1.0 } else { z.sin() / z };
    let (a, b) = (e.norm_sqr(), (d / q).norm_sqr());
    0.5 * (a + b) + 0.5 * sinc * (a - b)
}

/// Solves both injection directions at once.
///
/// The sweep carries the two columns of the partial product matrix through
/// half cells, recording field and slope at every cell centre; the
/// envelopes of the physical solutions are then linear combinations of the
/// two columns. Cell-averaged intensities follow in closed form from the
/// plane-wave solution inside each cell.
pub fn solve_pair(profile: &SusceptibilityProfile) -> Result<FieldPair> {
    let n = profile.len();
    let dx = profile.dx;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // columns of the running product: c1 = M (1,0)^T, c2 = M (0,1)^T
    let mut c1 = [one, zero];
    let mut c2 = [zero, one];
    let mut e1 = Vec::with_capacity(n);
    let mut e2 = Vec::with_capacity(n);
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    let mut turns: i64 = 0;
    let mut last_arg = 0.0;
    let mut cells = Vec::with_capacity(n);
    for &chi in &profile.chi {
        if !(chi > -1.0) {
            return Err(Error::Domain(format!("susceptibility must exceed -1, got {chi}")));
        }
        let half = layer_matrix(chi, 0.5 * dx, K0);
        cells.push(half * half);
        c1 = half.apply(c1);
        c2 = half.apply(c2);
        e1.push(c1[0] + c1[1]);
        e2.push(c2[0] + c2[1]);
        d1.push(I * K0 * (c1[0] - c1[1]));
        d2.push(I * K0 * (c2[0] - c2[1]));
        q.push(K0 * (1.0 + chi).sqrt());
        c1 = half.apply(c1);
        c2 = half.apply(c2);
        // |M22| >= 1 for real χ, so its phase is always well defined.
        let arg = c2[1].arg();
        let step = arg - last_arg;
        if step > std::f64::consts::PI {
            turns -= 1;
        } else if step < -std::f64::consts::PI {
            turns += 1;
        }
        last_arg = arg;
    }
    let total = TransferMatrix([[c1[0], c2[0]], [c1[1], c2[1]]]);
    if total.0[1][1].norm() < 1e-300 || !total.0[1][1].is_finite() {
        return Err(Error::Domain("singular transfer matrix".into()));
    }
    let (r, t) = total.left_coefficients();
    let (rr, tr) = total.right_coefficients();
    let left_cells = (0..n).map(|j| cell_average(e1[j] + r * e2[j], d1[j] + r * d2[j], q[j], dx));
    let right_cells = (0..n).map(|j| cell_average(tr * e2[j], tr * d2[j], q[j], dx));
    let left = ScatteringSolution {
        envelope: e1.iter().zip(&e2).map(|(a, b)| a + r * b).collect(),
        cell_intensity: left_cells.collect(),
        r,
        t,
        direction: Direction::Left,
    };
    let right = ScatteringSolution {
        envelope: e2.iter().map(|b| tr * b).collect(),
        cell_intensity: right_cells.collect(),
        r: rr,
        t: tr,
        direction: Direction::Right,
    };
    // the pairwise product rounds far less than the running one, so it
    // supplies the final phase and the sweep supplies the turn count
    let tau = 2.0 * std::f64::consts::PI;
    let mut correction = pairwise_product(cells).0[1][1].arg() - last_arg;
    correction -= tau * (correction / tau).round();
    let last_arg = last_arg + correction;
    Ok(FieldPair {
        left,
        right,
        transmission_phase: -(last_arg + tau * turns as f64),
        excess_phase: -last_arg - tau * (turns as f64 + n as f64 * dx),
    })
}

/// Field of one beam injected from `direction`.
pub fn solve_scattering(
    profile: &SusceptibilityProfile,
    direction: Direction,
) -> Result<ScatteringSolution> {
    let pair = solve_pair(profile)?;
    Ok(match direction {
        Direction::Left => pair.left,
        Direction::Right => pair.right,
    })
}

/// Closed-form reflection and transmission of a homogeneous slab in vacuum,
/// phases referenced to the slab faces.
pub fn analytic_slab(chi: f64, width: f64, k0: f64) -> Result<(Complex64, Complex64)> {
    if !(chi > -1.0) {
        return Err(Error::Domain(format!("susceptibility must exceed -1, got {chi}")));
    }
    if !(width > 0.0) {
        return Err(Error::Domain(format!("slab width must be > 0, got {width}")));
    }
    let index = (1.0 + chi).sqrt();
    let face = (1.0 - index) / (1.0 + index);
    let round_trip = Complex64::from_polar(1.0, 2.0 * index * k0 * width);
    let single = Complex64::from_polar(1.0, index * k0 * width);
    let denom = 1.0 - face * face * round_trip;
    let r = face * (1.0 - round_trip) / denom;
    let t = (1.0 - face * face) * single / denom;
    Ok((r, t))
}
