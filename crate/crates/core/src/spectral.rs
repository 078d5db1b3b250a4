//! Uniform periodic grids and Fourier differentiation on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{signed_index, Fft};

pub const MIN_GRID_POINTS: usize = 64;

/// Lower bound on the drop threshold, relative to the largest non-mean coefficient.
pub const SPECTRAL_NOISE_FLOOR: f64 = 1e-14;

/// Multiple of the top-band noise level below which coefficients are dropped.
const NOISE_FACTOR: f64 = 4.0;

/// Relative slack allowed when checking that a grid spans whole solution periods.
const PERIOD_MATCH_RTOL: f64 = 1e-9;

/// `n` equispaced nodes `x_j = j·L/n` on `[0, L)`; the endpoint `L` is not duplicated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    period: f64,
    n: usize,
}

impl PeriodicGrid {
    pub fn new(period: f64, n: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Grid(format!("period must be positive and finite, got {period}")));
        }
        if n < MIN_GRID_POINTS || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "point count must be a power of two >= {MIN_GRID_POINTS}, got {n}"
            )));
        }
        Ok(PeriodicGrid { period, n })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.period / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Angular wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI * signed_index(j, self.n) as f64 / self.period
    }

    /// Number of whole solution periods the grid spans, or a mismatch error.
    pub fn periods_spanned(&self, solution_period: f64) -> Result<usize> {
        let ratio = self.period / solution_period;
        let whole = ratio.round();
        if whole < 1.0 || (ratio - whole).abs() > PERIOD_MATCH_RTOL * ratio {
            return Err(Error::PeriodMismatch { grid: self.period, solution: solution_period });
        }
        Ok(whole as usize)
    }
}

/// Fourier differentiation for real samples on a fixed grid.
#[derive(Debug, Clone)]
pub struct Differentiator {
    grid: PeriodicGrid,
    fft: Fft,
}

/// Samples and their first and third derivatives, plus the spectrum they came from.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub u: Vec<f64>,
    pub u_x: Vec<f64>,
    pub u_xxx: Vec<f64>,
    pub spectrum: Vec<Complex64>,
}

impl Differentiator {
    pub fn new(grid: PeriodicGrid) -> Result<Self> {
        Ok(Differentiator { grid, fft: Fft::new(grid.len())? })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    /// `d^order u / dx^order`. The Nyquist bin is dropped for odd orders.
    pub fn derivative(&self, samples: &[f64], order: u32) -> Vec<f64> {
        let spectrum = self.fft.forward_real(samples);
        self.derivative_from_spectrum(&spectrum, order)
    }

    fn derivative_from_spectrum(&self, spectrum: &[Complex64], order: u32) -> Vec<f64> {
        let n = self.grid.len();
        let floor = noise_floor(spectrum);
        let mut out: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if (order % 2 == 1 && j == n / 2) || c.norm() < floor {
                    return Complex64::new(0.0, 0.0);
                }
                c * Complex64::new(0.0, self.grid.wavenumber(j)).powu(order)
            })
            .collect();
        self.fft.inverse(&mut out);
        out.into_iter().map(|c| c.re).collect()
    }

    pub fn derivatives(&self, samples: &[f64]) -> Derivatives {
        let spectrum = self.fft.forward_real(samples);
        Derivatives {
            u: samples.to_vec(),
            u_x: self.derivative_from_spectrum(&spectrum, 1),
            u_xxx: self.derivative_from_spectrum(&spectrum, 3),
            spectrum,
        }
    }
}

/// Magnitude below which Fourier coefficients are treated as roundoff: the largest
/// coefficient in the top quarter of wavenumbers (pure noise for resolved data) times
/// a safety factor, and never below `SPECTRAL_NOISE_FLOOR` times the largest non-mean
/// coefficient.
fn noise_floor(spectrum: &[Complex64]) -> f64 {
    let n = spectrum.len() as i64;
    let mut top = 0.0_f64;
    let mut largest = 0.0_f64;
    for (j, c) in spectrum.iter().enumerate() {
        let k = signed_index(j, n as usize).abs();
        if k > n / 4 {
            top = top.max(c.norm());
        }
        if k > 0 {
            largest = largest.max(c.norm());
        }
    }
    (NOISE_FACTOR * top).max(SPECTRAL_NOISE_FLOOR * largest)
}

/// Fraction of spectral energy in the top third of resolved wavenumbers.
pub fn high_band_energy_fraction(spectrum: &[Complex64]) -> f64 {
    let n = spectrum.len();
    let cutoff = n as i64 / 3;
    let mut total = 0.0;
    let mut high = 0.0;
    for (j, c) in spectrum.iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if signed_index(j, n).abs() > cutoff {
            high += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        high / total
    }
}

/// Circular lag `s` (in grid cells) maximizing `Σ_j a[j]·b[j − s]`, i.e. how far `b`
/// must be shifted forward to line up with `a`. Means are removed first.
pub fn best_circular_lag(fft: &Fft, a: &[f64], b: &[f64]) -> usize {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let a0: Vec<f64> = a.iter().map(|v| v - ma).collect();
    let b0: Vec<f64> = b.iter().map(|v| v - mb).collect();
    let fa = fft.forward_real(&a0);
    let fb = fft.forward_real(&b0);
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y.conj()).collect();
    let corr = fft.inverse_real(&prod);
    corr.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (j, &v)| if v > best.1 { (j, v) } else { best })
        .0
}

/// Trapezoidal (spectrally exact for periodic data) integral over one grid period.
pub fn periodic_integral(grid: &PeriodicGrid, samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() * grid.spacing()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(PeriodicGrid::new(1.0, 32).is_err());
        assert!(PeriodicGrid::new(1.0, 100).is_err());
        assert!(PeriodicGrid::new(0.0, 64).is_err());
        assert!(PeriodicGrid::new(f64::NAN, 64).is_err());
        let g = PeriodicGrid::new(2.0, 64).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert!((g.node(63) + g.spacing() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn period_matching() {
        let g = PeriodicGrid::new(3.0, 64).unwrap();
        assert_eq!(g.periods_spanned(1.0).unwrap(), 3);
        assert_eq!(g.periods_spanned(3.0).unwrap(), 1);
        assert!(matches!(g.periods_spanned(1.1), Err(Error::PeriodMismatch { .. })));
        assert!(g.periods_spanned(6.0).is_err());
    }

    #[test]
    fn differentiates_trig_exactly() {
        let g = PeriodicGrid::new(2.0 * PI, 64).unwrap();
        let d = Differentiator::new(g).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|x| (3.0 * x).sin()).collect();
        let du = d.derivatives(&u);
        for (j, x) in g.nodes().iter().enumerate() {
            assert!((du.u_x[j] - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
            assert!((du.u_xxx[j] + 27.0 * (3.0 * x).cos()).abs() < 1e-11);
        }
        let d2 = d.derivative(&u, 2);
        assert!(d2.iter().zip(g.nodes()).all(|(v, x)| (v + 9.0 * (3.0 * x).sin()).abs() < 1e-11));
    }

    #[test]
    fn high_band_detects_rough_data() {
        let g = PeriodicGrid::new(1.0, 64).unwrap();
        let fft = Fft::new(64).unwrap();
        let smooth: Vec<f64> = g.nodes().iter().map(|x| (2.0 * PI * x).cos()).collect();
        assert!(high_band_energy_fraction(&fft.forward_real(&smooth)) < 1e-25);
        let rough: Vec<f64> = (0..64).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(high_band_energy_fraction(&fft.forward_real(&rough)) > 0.99);
    }

    #[test]
    fn lag_recovers_shift() {
        let g = PeriodicGrid::new(1.0, 64).unwrap();
        let fft = Fft::new(64).unwrap();
        let bump = |x: f64| (4.0 * (2.0 * PI * x).cos()).exp();
        let a: Vec<f64> = g.nodes().iter().map(|&x| bump(x - 10.0 / 64.0)).collect();
        let b: Vec<f64> = g.nodes().iter().map(|&x| bump(x)).collect();
        assert_eq!(best_circular_lag(&fft, &a, &b), 10);
    }
}
