//! Uniform periodic grid and momentum-space transforms.
//!
//! Points sit at cell centres, `x_j = (j + 1/2 - n/2) dx`, so the grid is
//! exactly mirror symmetric about 0 and the domain is `[-box/2, box/2]`.
//! Spectra use the physical sign convention: a plane wave `e^{iqx}` lands on
//! momentum `+q`, with amplitude `ψ(k) = (1/box) ∫ e^{-ikx} ψ(x) dx`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::units::K0;
use crate::{Error, Result};

#[derive(Clone)]
pub struct Grid {
    n: usize,
    dx: f64,
    x: Vec<f64>,
    /// Angular wavenumbers in `1/λ0`, standard DFT ordering.
    k: Vec<f64>,
    /// `e^{-i k_m x_0}`: phase linking the raw DFT to the centred grid.
    origin_phase: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("dx", &self.dx)
            .finish()
    }
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Domain(format!(
                "grid size must be a power of two >= 2, got {n}"
            )));
        }
        if !(box_length > 0.0) {
            return Err(Error::Domain("box_length must be > 0".into()));
        }
        let dx = box_length / n as f64;
        let half = n as f64 / 2.0;
        let x: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5 - half) * dx).collect();
        let dk = 2.0 * PI / box_length;
        let k: Vec<f64> = (0..n)
            .map(|m| {
                let m = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                m * dk
            })
            .collect();
        let origin_phase = k
            .iter()
            .map(|&km| Complex64::from_polar(1.0, -km * x[0]))
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            dx,
            x,
            k,
            origin_phase,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn box_length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Angular wavenumbers in `1/λ0`; divide by [`K0`] for units of `k0`.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn k_over_k0(&self, m: usize) -> f64 {
        self.k[m] / K0
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }

    /// `ψ(k_m) = (1/box) Σ_j ψ(x_j) e^{-i k_m x_j} dx`.
    pub fn to_momentum(&self, field: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(field.len())?;
        let mut buf = field.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for (c, p) in buf.iter_mut().zip(&self.origin_phase) {
            *c *= p * scale;
        }
        Ok(buf)
    }

    /// Inverse of [`Grid::to_momentum`]: `ψ(x_j) = Σ_m ψ(k_m) e^{i k_m x_j}`.
    pub fn to_position(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(spectrum.len())?;
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .zip(&self.origin_phase)
            .map(|(c, p)| c * p.conj())
            .collect();
        self.inverse.process(&mut buf);
        Ok(buf)
    }

    /// Unnormalised in-place forward DFT, for the integrator's inner loop.
    pub(crate) fn fft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, scratch);
    }

    /// In-place inverse DFT including the `1/n` factor.
    pub(crate) fn ifft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, scratch);
        let scale = 1.0 / self.n as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
    }

    pub(crate) fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    /// `∫ |f|² dx`.
    pub fn norm_sqr(&self, field: &[Complex64]) -> f64 {
        field.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dx
    }

    /// `∫ g f dx` on the grid.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        values.into_iter().sum::<f64>() * self.dx
    }

    /// Projection onto an arbitrary, generally off-grid wavenumber `q`
    /// (in `1/λ0`): `(1/box) Σ_j f(x_j) e^{-i q x_j} dx`.
    pub fn project(&self, field: &[Complex64], q: f64) -> Complex64 {
        let sum: Complex64 = field
            .iter()
            .zip(&self.x)
            .map(|(f, &x)| f * Complex64::from_polar(1.0, -q * x))
            .sum();
        sum * self.dx / self.box_length()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn positions_are_mirror_symmetric() {
        let g = Grid::new(64, 8.0).unwrap();
        for j in 0..64 {
            assert!((g.x()[j] + g.x()[63 - j]).abs() < 1e-14);
        }
        assert!((g.box_length() - 8.0).abs() < 1e-14);
        // Nyquist appears exactly once.
        let nyquist = g.k().iter().filter(|k| (k.abs() - PI / g.dx()).abs() < 1e-9).count();
        assert_eq!(nyquist, 1);
    }

    #[test]
    fn constant_maps_to_zero_mode() {
        let g = Grid::new(128, 10.0).unwrap();
        let c = Complex64::new(0.3, -1.2);
        let spec = g.to_momentum(&vec![c; 128]).unwrap();
        assert!((spec[0] - c).norm() < 1e-14);
        assert!(spec[1..].iter().all(|s| s.norm() < 1e-14));
    }

    #[test]
    fn plane_wave_lands_on_positive_mode() {
        let g = Grid::new(128, 10.0).unwrap();
        let psi: Vec<Complex64> = g
            .x()
            .iter()
            .map(|&x| Complex64::from_polar(1.0, 2.0 * PI * x / 10.0))
            .collect();
        let spec = g.to_momentum(&psi).unwrap();
        assert!((spec[1] - 1.0).norm() < 1e-13);
        assert!((g.k()[1] - 2.0 * PI / 10.0).abs() < 1e-15);
        let rest: f64 = spec.iter().enumerate().filter(|(m, _)| *m != 1).map(|(_, s)| s.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn inverse_of_simple_spectra() {
        let g = Grid::new(32, 4.0).unwrap();
        let zero = g.to_position(&vec![Complex64::new(0.0, 0.0); 32]).unwrap();
        assert!(zero.iter().all(|c| c.norm() == 0.0));
        let mut spec = vec![Complex64::new(0.0, 0.0); 32];
        spec[0] = Complex64::new(2.0, 1.0);
        let f = g.to_position(&spec).unwrap();
        assert!(f.iter().all(|c| (c - spec[0]).norm() < 1e-14));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = Grid::new(32, 4.0).unwrap();
        assert!(matches!(
            g.to_momentum(&vec![Complex64::new(0.0, 0.0); 31]),
            Err(Error::LengthMismatch { expected: 32, got: 31 })
        ));
        assert!(g.to_position(&[]).is_err());
    }

    #[test]
    fn projection_matches_grid_bin() {
        let g = Grid::new(256, 12.0).unwrap();
        let a = random_field(256, 3);
        let spec = g.to_momentum(&a).unwrap();
        for m in [0, 1, 7, 200] {
            assert!((g.project(&a, g.k()[m]) - spec[m]).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(seed in 0u64..1000, log_n in 4u32..11) {
            let n = 1usize << log_n;
            let g = Grid::new(n, 7.5).unwrap();
            let a = random_field(n, seed);
            let spec = g.to_momentum(&a).unwrap();
            let back = g.to_position(&spec).unwrap();
            prop_assert!(max_diff(&a, &back) < 1e-12);
            let lhs = g.norm_sqr(&a);
            let rhs = g.box_length() * spec.iter().map(|c| c.norm_sqr()).sum::<f64>();
            prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        }

        #[test]
        fn linearity_and_shift(seed in 0u64..1000, shift in 0usize..64, alpha in -2.0f64..2.0) {
            let n = 64;
            let g = Grid::new(n, 5.0).unwrap();
            let a = random_field(n, seed);
            let b = random_field(n, seed + 7919);
            let combo: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * alpha + y).collect();
            let fa = g.to_momentum(&a).unwrap();
            let fb = g.to_momentum(&b).unwrap();
            let fc = g.to_momentum(&combo).unwrap();
            let expect: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * alpha + y).collect();
            prop_assert!(max_diff(&fc, &expect) < 1e-12);

            // f(x - s dx) has spectrum e^{-i k s dx} F(k)
            let shifted: Vec<Complex64> = (0..n).map(|j| a[(j + n - shift) % n]).collect();
            let fs = g.to_momentum(&shifted).unwrap();
            let expect: Vec<Complex64> = fa
                .iter()
                .zip(g.k())
                .map(|(c, &k)| c * Complex64::from_polar(1.0, -k * shift as f64 * g.dx()))
                .collect();
            prop_assert!(max_diff(&fs, &expect) < 1e-12);
        }
    }
}
