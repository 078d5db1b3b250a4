//! Exact traveling-wave solutions of `u_t − 6u·u_x + u_xxx = 0`.
//!
//! * cnoidal: `u₁ = −2α² dn²[α(x − b₁α²t), m] + βα²`, `b₁ = 8 − 4m − 6β`
//! * superposed: `u_p = −2α² Σ_{i=1..p} dn²[α(x − b_pα²t) + 2(i−1)K/p, m] + βα²`,
//!   `b_p = 8 − 4m − 6β + 12A(p, m)`
//! * `u± = α²[m sn²(η, m) ± √m cn(η, m) dn(η, m)]`, `q₁ = −1 − m`, with the time
//!   scaling of `η` selectable (see [`VelocityScaling`]).

use serde::{Deserialize, Serialize};

use crate::elliptic::ModulusParameter;
use crate::error::{Error, Result};
use crate::landen::LandenMap;
use crate::spectral::PeriodicGrid;

/// A solution evaluable at any `(x, t)`, translating rigidly at [`WaveFamily::velocity`].
pub trait WaveFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn value(&self, x: f64, t: f64) -> f64;

    /// Translation speed `V` in `u(x, t) = f(x − Vt)`.
    fn velocity(&self) -> f64;

    /// Spatial period at fixed `t`; `None` when the profile is not periodic (`m = 1`).
    fn spatial_period(&self) -> Option<f64>;

    fn sample(&self, grid: &PeriodicGrid, t: f64) -> Vec<f64> {
        (0..grid.len()).map(|j| self.value(grid.node(j), t)).collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must be positive and finite, got {alpha}")))
    }
}

/// Parameters of the `dn²` families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DnWaveParams {
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
    pub p: usize,
    /// `b_p = 8 − 4m − 6β + 12A(p, m)`
    pub b_p: f64,
}

impl DnWaveParams {
    /// Derives `b_p`. `p = 1` accepts `0 ≤ m ≤ 1`; `p ≥ 2` needs `0 < m < 1`.
    pub fn new(alpha: f64, beta: f64, m: f64, p: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if !beta.is_finite() {
            return Err(Error::domain(format!("beta must be finite, got {beta}")));
        }
        let base = 8.0 - 4.0 * m - 6.0 * beta;
        let b_p = match p {
            0 => return Err(Error::domain("p must be at least 1")),
            1 => {
                ModulusParameter::new(m)?;
                base
            }
            _ => base + 12.0 * LandenMap::new(p, m)?.velocity_constant(),
        };
        Ok(DnWaveParams { alpha, beta, m, p, b_p })
    }

    /// Same as [`DnWaveParams::new`] but reuses an existing map for `A(p, m)`.
    pub fn with_map(alpha: f64, beta: f64, map: &LandenMap) -> Result<Self> {
        check_alpha(alpha)?;
        if !beta.is_finite() {
            return Err(Error::domain(format!("beta must be finite, got {beta}")));
        }
        let b_p = 8.0 - 4.0 * map.m() - 6.0 * beta + 12.0 * map.velocity_constant();
        Ok(DnWaveParams { alpha, beta, m: map.m(), p: map.p(), b_p })
    }

    /// Wave speed `b_p α²`.
    pub fn velocity(&self) -> f64 {
        self.b_p * self.alpha * self.alpha
    }
}

/// Phase offset of the `index`-th term of a superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedPhase {
    pub index: usize,
    pub offset: f64,
}

/// `2(i−1)K(m)/p` for `i = 1..p`.
pub fn shifted_phases(p: usize, m: f64) -> Result<Vec<ShiftedPhase>> {
    if p == 0 {
        return Err(Error::domain("p must be at least 1"));
    }
    let quarter = ModulusParameter::periodic(m)?.quarter_period()?;
    Ok((1..=p)
        .map(|index| ShiftedPhase { index, offset: 2.0 * (index - 1) as f64 * quarter / p as f64 })
        .collect())
}

/// Superposed `dn²` wave `u_p`; with `p = 1` this is the cnoidal wave `u₁`.
#[derive(Debug, Clone)]
pub struct SuperposedWave {
    params: DnWaveParams,
    modulus: ModulusParameter,
    offsets: Vec<f64>,
}

impl SuperposedWave {
    pub fn new(params: DnWaveParams) -> Result<Self> {
        let modulus = ModulusParameter::new(params.m)?;
        let offsets = if params.p == 1 {
            vec![0.0]
        } else {
            shifted_phases(params.p, params.m)?.iter().map(|s| s.offset).collect()
        };
        Ok(SuperposedWave { params, modulus, offsets })
    }

    pub fn params(&self) -> &DnWaveParams {
        &self.params
    }
}

impl WaveFamily for SuperposedWave {
    fn name(&self) -> &'static str {
        if self.params.p == 1 {
            "u1"
        } else {
            "up"
        }
    }

    fn value(&self, x: f64, t: f64) -> f64 {
        let DnWaveParams { alpha, beta, .. } = self.params;
        let a2 = alpha * alpha;
        let phase = alpha * (x - self.params.velocity() * t);
        let squares: f64 = self.offsets.iter().map(|s| self.modulus.dn(phase + s).powi(2)).sum();
        -2.0 * a2 * squares + beta * a2
    }

    fn velocity(&self) -> f64 {
        self.params.velocity()
    }

    fn spatial_period(&self) -> Option<f64> {
        let quarter = self.modulus.quarter_period().ok()?;
        Some(2.0 * quarter / (self.params.p as f64 * self.params.alpha))
    }
}

/// The single cnoidal wave `u₁`.
#[derive(Debug, Clone)]
pub struct CnoidalWave(SuperposedWave);

impl CnoidalWave {
    pub fn new(params: DnWaveParams) -> Result<Self> {
        if params.p != 1 {
            return Err(Error::domain(format!("cnoidal wave needs p = 1, got p = {}", params.p)));
        }
        Ok(CnoidalWave(SuperposedWave::new(params)?))
    }

    pub fn params(&self) -> &DnWaveParams {
        self.0.params()
    }
}

impl WaveFamily for CnoidalWave {
    fn name(&self) -> &'static str {
        "u1"
    }

    fn value(&self, x: f64, t: f64) -> f64 {
        self.0.value(x, t)
    }

    fn velocity(&self) -> f64 {
        self.0.velocity()
    }

    fn spatial_period(&self) -> Option<f64> {
        self.0.spatial_period()
    }
}

/// `u₁(x, t)`.
pub fn u1(x: f64, t: f64, params: &DnWaveParams) -> Result<f64> {
    Ok(CnoidalWave::new(*params)?.value(x, t))
}

/// `u_p(x, t)`.
pub fn u_p(x: f64, t: f64, params: &DnWaveParams) -> Result<f64> {
    Ok(SuperposedWave::new(*params)?.value(x, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How time enters the phase of `u±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityScaling {
    /// `η = α(x − q₁αt)`, speed `q₁α`.
    AsWritten,
    /// `η = α(x − q₁α²t)`, speed `q₁α²`. This is the scaling that solves KdV.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmWaveParams {
    pub alpha: f64,
    pub m: f64,
    pub sign: Sign,
    /// `q₁ = −1 − m`
    pub q1: f64,
}

impl PmWaveParams {
    pub fn new(alpha: f64, m: f64, sign: Sign) -> Result<Self> {
        check_alpha(alpha)?;
        ModulusParameter::new(m)?;
        Ok(PmWaveParams { alpha, m, sign, q1: -1.0 - m })
    }

    pub fn velocity(&self, scaling: VelocityScaling) -> f64 {
        match scaling {
            VelocityScaling::AsWritten => self.q1 * self.alpha,
            VelocityScaling::Standard => self.q1 * self.alpha * self.alpha,
        }
    }
}

/// `u±`, optionally superposed over `p` copies shifted by `4(i−1)K/p`.
///
/// The superposed variant (`p ≥ 2`) carries no known velocity law; its velocity is
/// taken from the caller (see [`crate::verify::fit_velocity`]).
#[derive(Debug, Clone)]
pub struct PlusMinusWave {
    params: PmWaveParams,
    modulus: ModulusParameter,
    velocity: f64,
    offsets: Vec<f64>,
}

impl PlusMinusWave {
    pub fn new(params: PmWaveParams, scaling: VelocityScaling) -> Result<Self> {
        Ok(PlusMinusWave {
            modulus: ModulusParameter::new(params.m)?,
            velocity: params.velocity(scaling),
            params,
            offsets: vec![0.0],
        })
    }

    /// `α² Σ_i [m sn² ± √m cn dn](η + 4(i−1)K/p)` moving at `velocity`.
    pub fn superposed(params: PmWaveParams, p: usize, velocity: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("p must be at least 1"));
        }
        if !velocity.is_finite() {
            return Err(Error::domain("velocity must be finite"));
        }
        let modulus = ModulusParameter::periodic(params.m)?;
        let quarter = modulus.quarter_period()?;
        let offsets = (0..p).map(|i| 4.0 * i as f64 * quarter / p as f64).collect();
        Ok(PlusMinusWave { params, modulus, velocity, offsets })
    }

    pub fn params(&self) -> &PmWaveParams {
        &self.params
    }

    pub fn terms(&self) -> usize {
        self.offsets.len()
    }
}

impl WaveFamily for PlusMinusWave {
    fn name(&self) -> &'static str {
        "upm"
    }

    fn value(&self, x: f64, t: f64) -> f64 {
        let PmWaveParams { alpha, m, sign, .. } = self.params;
        let eta = alpha * (x - self.velocity * t);
        let root_m = m.sqrt() * sign.factor();
        let sum: f64 = self
            .offsets
            .iter()
            .map(|s| {
                // finite by construction: eta and the offsets are finite
                let j = self.modulus.jacobi(eta + s).expect("finite phase");
                m * j.sn * j.sn + root_m * j.cn * j.dn
            })
            .sum();
        alpha * alpha * sum
    }

    fn velocity(&self) -> f64 {
        self.velocity
    }

    fn spatial_period(&self) -> Option<f64> {
        let quarter = self.modulus.quarter_period().ok()?;
        Some(4.0 * quarter / (self.offsets.len() as f64 * self.params.alpha))
    }
}

/// `u±(x, t)` under the chosen time scaling.
pub fn u_pm(x: f64, t: f64, params: &PmWaveParams, scaling: VelocityScaling) -> Result<f64> {
    Ok(PlusMinusWave::new(*params, scaling)?.value(x, t))
}

/// Spatially constant state; solves KdV for any constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantWave(pub f64);

impl WaveFamily for ConstantWave {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn value(&self, _x: f64, _t: f64) -> f64 {
        self.0
    }

    fn velocity(&self) -> f64 {
        0.0
    }

    fn spatial_period(&self) -> Option<f64> {
        None
    }
}
