//! KdV residuals, Landen/superposition equivalence and the soliton limit.
//!
//! Spatial derivatives are taken spectrally on a periodic grid spanning whole
//! periods of the solution. The time derivative is not discretized: every family is
//! a traveling wave, so `u_t = −V·u_x` exactly.

use serde::{Deserialize, Serialize};

use crate::elliptic::ModulusParameter;
use crate::error::{Error, Result};
use crate::landen::{transform_params, LandenMap};
use crate::spectral::{high_band_energy_fraction, Derivatives, Differentiator, PeriodicGrid};
use crate::waves::{CnoidalWave, DnWaveParams, SuperposedWave, WaveFamily};

/// Energy fraction in the top third of the spectrum above which the grid is
/// considered too coarse for the sampled field.
pub const ALIASING_THRESHOLD: f64 = 1e-12;

/// L∞ norms of the three KdV terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermNorms {
    pub time: f64,
    pub nonlinear: f64,
    pub dispersive: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub linf: f64,
    pub l2: f64,
    /// Largest of the three term norms.
    pub scale: f64,
    /// `linf / scale`
    pub normalized: f64,
    pub term_breakdown: TermNorms,
    pub velocity: f64,
    pub high_band_fraction: f64,
    pub aliasing_warning: bool,
}

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Residual of `u_t − 6uu_x + u_xxx` with `u_t = −V·u_x`.
pub fn residual_from_derivatives(d: &Derivatives, grid: &PeriodicGrid, velocity: f64) -> ResidualReport {
    let n = d.u.len();
    let mut time = 0.0_f64;
    let mut nonlinear = 0.0_f64;
    let mut dispersive = 0.0_f64;
    let mut linf = 0.0_f64;
    let mut sq = 0.0;
    for j in 0..n {
        let u_t = -velocity * d.u_x[j];
        let nl = -6.0 * d.u[j] * d.u_x[j];
        let r = u_t + nl + d.u_xxx[j];
        time = time.max(u_t.abs());
        nonlinear = nonlinear.max(nl.abs());
        dispersive = dispersive.max(d.u_xxx[j].abs());
        linf = linf.max(r.abs());
        sq += r * r;
    }
    let scale = time.max(nonlinear).max(dispersive);
    let high_band_fraction = high_band_energy_fraction(&d.spectrum);
    ResidualReport {
        linf,
        l2: (sq * grid.spacing()).sqrt(),
        scale,
        normalized: if scale > 0.0 { linf / scale } else { 0.0 },
        term_breakdown: TermNorms { time, nonlinear, dispersive },
        velocity,
        high_band_fraction,
        aliasing_warning: high_band_fraction > ALIASING_THRESHOLD,
    }
}

fn derivatives_on(family: &dyn WaveFamily, grid: &PeriodicGrid, t: f64) -> Result<Derivatives> {
    let period = family.spatial_period().ok_or_else(|| {
        Error::Grid(format!("{} is not spatially periodic; no periodic grid fits it", family.name()))
    })?;
    grid.periods_spanned(period)?;
    let diff = Differentiator::new(*grid)?;
    Ok(diff.derivatives(&family.sample(grid, t)))
}

/// KdV residual of `family` on `grid` at time `t`, using the family's own velocity.
pub fn kdv_residual(family: &dyn WaveFamily, grid: &PeriodicGrid, t: f64) -> Result<ResidualReport> {
    let d = derivatives_on(family, grid, t)?;
    Ok(residual_from_derivatives(&d, grid, family.velocity()))
}

/// Least-squares velocity `V` minimizing `‖−V·u_x − 6uu_x + u_xxx‖₂`.
pub fn least_squares_velocity(d: &Derivatives) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..d.u.len() {
        num += d.u_x[j] * (d.u_xxx[j] - 6.0 * d.u[j] * d.u_x[j]);
        den += d.u_x[j] * d.u_x[j];
    }
    num / den
}

/// Finds the velocity that best zeroes the KdV residual of the sampled profile
/// (ignoring the family's own velocity) and reports the residual at that velocity.
pub fn fit_velocity(family: &dyn WaveFamily, grid: &PeriodicGrid, t: f64) -> Result<ResidualReport> {
    let d = derivatives_on(family, grid, t)?;
    if d.u_x.iter().all(|v| *v == 0.0) {
        return Err(Error::Consistency("profile is flat; velocity is undetermined".into()));
    }
    let v = least_squares_velocity(&d);
    Ok(residual_from_derivatives(&d, grid, v))
}

/// `A(p, m)` from the velocity that zeroes the residual of `u_p` with `α = 1`, `β = 0`.
pub fn velocity_constant_from_residual(map: &LandenMap, points: usize) -> Result<f64> {
    let params = DnWaveParams::with_map(1.0, 0.0, map)?;
    let wave = SuperposedWave::new(params)?;
    let period = wave.spatial_period().expect("m < 1 for a Landen map");
    let grid = PeriodicGrid::new(period, points)?;
    let report = fit_velocity(&wave, &grid, 0.0)?;
    Ok((report.velocity - (8.0 - 4.0 * map.m())) / 12.0)
}

/// Max over grid nodes and time slices of `|u_p − (−2α̃² dn²[α̃(x − c̃t), m̃] + β̃α̃²)|`.
pub fn equivalence_check(
    params: &DnWaveParams,
    map: &LandenMap,
    grid: &PeriodicGrid,
    times: &[f64],
) -> Result<f64> {
    if params.p != map.p() || params.m != map.m() {
        return Err(Error::Consistency(format!(
            "map built for (p = {}, m = {}) but wave has (p = {}, m = {})",
            map.p(),
            map.m(),
            params.p,
            params.m
        )));
    }
    if times.is_empty() {
        return Err(Error::Config("equivalence check needs at least one time slice".into()));
    }
    let wave = SuperposedWave::new(*params)?;
    let tp = transform_params(params.alpha, params.beta, map)?;
    let single = map.transformed_modulus();
    let a2 = tp.alpha_tilde * tp.alpha_tilde;
    let mut worst = 0.0_f64;
    for &t in times {
        for x in grid.nodes() {
            let dn = single.dn(tp.alpha_tilde * (x - tp.c_tilde * t));
            let reexpressed = -2.0 * a2 * dn * dn + tp.beta_tilde * a2;
            worst = worst.max((wave.value(x, t) - reexpressed).abs());
        }
    }
    Ok(worst)
}

/// Samples per unit of `|α(x − b₁α²t)|` in the soliton window.
const SOLITON_SAMPLES: usize = 2001;

/// Max deviation between `u₁` at `m = 1 − ε` and `−2α² sech²[α(x − b₁α²t)] + βα²`
/// for `|α(x − b₁α²t)| ≤ half_width`, at `t = 0` and `t = 0.25`.
pub fn soliton_limit_check(alpha: f64, beta: f64, epsilon: f64, half_width: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::domain("window half-width must be positive"));
    }
    let params = DnWaveParams::new(alpha, beta, 1.0 - epsilon, 1)?;
    let wave = CnoidalWave::new(params)?;
    let a2 = alpha * alpha;
    let b_soliton = 8.0 - 4.0 - 6.0 * beta;
    let mut worst = 0.0_f64;
    for t in [0.0, 0.25] {
        for i in 0..SOLITON_SAMPLES {
            let xi = -half_width + 2.0 * half_width * i as f64 / (SOLITON_SAMPLES - 1) as f64;
            let x = xi / alpha + b_soliton * a2 * t;
            let sech = 1.0 / (alpha * (x - b_soliton * a2 * t)).cosh();
            let soliton = -2.0 * a2 * sech * sech + beta * a2;
            worst = worst.max((wave.value(x, t) - soliton).abs());
        }
    }
    Ok(worst)
}

/// `max |sn² + cn² − 1|, |m·sn² + dn² − 1|` over the given `(x, m)` pairs.
pub fn jacobi_invariant_defect(pairs: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(x, m) in pairs {
        let t = ModulusParameter::new(m)?.jacobi(x)?;
        worst = worst.max(t.pythagorean_defect().abs()).max(t.modulus_defect(m).abs());
    }
    Ok(worst)
}

/// Max over `points` nodes spanning two periods of `dn(·, m̃)` of `|lhs − rhs|`.
fn landen_grid_deviation(map: &LandenMap, points: usize, squared: bool) -> Result<f64> {
    let single = map.transformed_modulus();
    let span = 4.0 * single.quarter_period()?;
    Ok(max_abs((0..points).map(|j| {
        let x = span * j as f64 / points as f64;
        let dn = single.dn(x);
        if squared {
            dn * dn - map.dn2_rhs(x)
        } else {
            dn - map.dn_rhs(x)
        }
    })))
}

/// Pointwise deviation of the generalized Landen identity for `dn`.
pub fn landen_dn_deviation(map: &LandenMap, points: usize) -> Result<f64> {
    landen_grid_deviation(map, points, false)
}

/// Pointwise deviation of the squared identity for `dn²`.
pub fn landen_dn2_deviation(map: &LandenMap, points: usize) -> Result<f64> {
    landen_grid_deviation(map, points, true)
}

/// Largest sample standard deviation of any `a_p(r)` over `points` values of `u`
/// spread across one period of `dn(·, m)`.
pub fn cyclic_constant_spread(map: &LandenMap, points: usize) -> Result<f64> {
    if map.p() < 2 {
        return Ok(0.0);
    }
    let span = 2.0 * map.modulus().quarter_period()?;
    let samples: Vec<Vec<f64>> = (0..points)
        .map(|j| {
            let u = span * (j as f64 + 0.371) / points as f64;
            crate::landen::cyclic_products_at(map.modulus(), map.shifts(), u)
        })
        .collect();
    let mut worst = 0.0_f64;
    for r in 0..map.p() - 1 {
        let vals: Vec<f64> = samples.iter().map(|s| s[r]).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
        worst = worst.max(var.sqrt());
    }
    Ok(worst)
}

/// `max_r |a_p(r) − a_p(p − r)|`.
pub fn cyclic_symmetry_defect(map: &LandenMap) -> f64 {
    let a = map.cyclic_constants();
    let p = map.p();
    max_abs((1..p).map(|r| a[r - 1] - a[p - r - 1]))
}
