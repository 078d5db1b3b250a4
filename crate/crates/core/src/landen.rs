//! Generalized Landen transformation for `dn`.
//!
//! For an integer `p ≥ 1` the sum of `p` copies of `dn(·, m)` shifted by multiples of
//! `2K(m)/p` is, up to the factor `γ`, a single `dn` at a smaller parameter `m̃`:
//!
//! ```text
//! dn(x, m̃) = γ Σ_{i=1..p} dn(γx + 2(i−1)K(m)/p, m)
//! γ        = [Σ_{i=1..p} dn(2(i−1)K(m)/p, m)]⁻¹
//! m̃        = (m − 2)γ² + 2γ³ Σ_{i=1..p} dn³(2(i−1)K(m)/p, m)
//! ```
//!
//! Squaring introduces the cyclic constants
//! `a_p(r) = Σ_i dn(u + s_i)·dn(u + s_{i+r})` (indices mod `p`), which do not depend on
//! `u`. Only `r = 1..p−1` are constants: `r = p` pairs each term with itself and gives
//! `Σ dn²`, which varies with `u`. The squared identity therefore reads
//!
//! ```text
//! dn²(x, m̃) = γ² [Σ_i dn²(γx + s_i, m) + Σ_{r=1..p−1} a_p(r)]
//! ```

use crate::elliptic::ModulusParameter;
use crate::error::{Error, Result};
use crate::verify;

/// Fractions of the `dn` period `2K` at which the cyclic constants are probed.
/// Irrational-looking on purpose: points on the shift lattice can hide `u`-dependence.
const CONSTANCY_PROBES: [f64; 9] = [
    0.0137, 0.0731, 0.1618, 0.2459, 0.3313, 0.4271, 0.5879, 0.7183, 0.8442,
];

/// Largest spread of a cyclic constant across probes before the map is rejected.
pub const CONSTANCY_TOL: f64 = 1e-9;

/// Largest disagreement allowed between the two determinations of `A(p, m)`.
pub const VELOCITY_CONSTANT_TOL: f64 = 1e-8;

/// Grid used for the residual-based determination of `A(p, m)`.
const RESIDUAL_GRID_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct LandenMap {
    p: usize,
    m: ModulusParameter,
    gamma: f64,
    m_tilde: ModulusParameter,
    shifts: Vec<f64>,
    cyclic: Vec<f64>,
    velocity_constant: f64,
}

impl LandenMap {
    pub fn new(p: usize, m: f64) -> Result<Self> {
        if p < 1 {
            return Err(Error::domain("Landen order p must be at least 1"));
        }
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::domain(format!("Landen map requires 0 < m < 1, got m = {m}")));
        }
        let modulus = ModulusParameter::periodic(m)?;
        let quarter = modulus.quarter_period()?;
        let shifts: Vec<f64> = (0..p).map(|i| 2.0 * i as f64 * quarter / p as f64).collect();

        let mut dn_sum = 0.0;
        // Σ dn·(cn² − sn²): the cubic sum in m̃ after substituting dn² = 1 − m·sn².
        // (m − 2)γ² + 2γ³Σdn³ = mγ³Σ dn(1 − 2sn²), which avoids cancelling O(1)
        // terms when m̃ is tiny (large p).
        let mut cubic = 0.0;
        for &s in &shifts {
            let t = modulus.jacobi(s)?;
            dn_sum += t.dn;
            cubic += t.dn * (t.cn * t.cn - t.sn * t.sn);
        }
        let gamma = 1.0 / dn_sum;
        let m_tilde_value = if p == 1 { m } else { m * gamma.powi(3) * cubic };
        let m_tilde = ModulusParameter::periodic(m_tilde_value).map_err(|_| {
            Error::Consistency(format!(
                "transformed parameter m~ = {m_tilde_value:e} left [0, 1) for p = {p}, m = {m}"
            ))
        })?;

        let cyclic = cyclic_constants(&modulus, &shifts, quarter)?;
        let sum_cyclic: f64 = cyclic.iter().sum();
        let velocity_constant = ((8.0 - 4.0 * m_tilde_value) / (gamma * gamma)
            - (8.0 - 4.0 * m)
            - 12.0 * sum_cyclic)
            / 12.0;

        Ok(LandenMap {
            p,
            m: modulus,
            gamma,
            m_tilde,
            shifts,
            cyclic,
            velocity_constant: if p == 1 { 0.0 } else { velocity_constant },
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> f64 {
        self.m.m()
    }

    pub fn modulus(&self) -> &ModulusParameter {
        &self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m_tilde(&self) -> f64 {
        self.m_tilde.m()
    }

    pub fn transformed_modulus(&self) -> &ModulusParameter {
        &self.m_tilde
    }

    /// Phase offsets `2(i−1)K(m)/p`, `i = 1..p`.
    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    /// `a_p(r)` for `r = 1..p−1` (empty when `p = 1`).
    pub fn cyclic_constants(&self) -> &[f64] {
        &self.cyclic
    }

    pub fn cyclic_sum(&self) -> f64 {
        self.cyclic.iter().sum()
    }

    /// `A(p, m)` from velocity consistency of the re-expressed cnoidal wave:
    /// `12A = (8 − 4m̃)/γ² − (8 − 4m) − 12 Σ_r a_p(r)`.
    pub fn velocity_constant(&self) -> f64 {
        self.velocity_constant
    }

    /// `γ Σ_i dn(γx + s_i, m)`; equals `dn(x, m̃)`.
    pub fn dn_rhs(&self, x: f64) -> f64 {
        let y = self.gamma * x;
        self.gamma * self.shifts.iter().map(|s| self.m.dn(y + s)).sum::<f64>()
    }

    /// `γ² [Σ_i dn²(γx + s_i, m) + Σ_r a_p(r)]`; equals `dn²(x, m̃)`.
    pub fn dn2_rhs(&self, x: f64) -> f64 {
        let y = self.gamma * x;
        let squares: f64 = self.shifts.iter().map(|s| self.m.dn(y + s).powi(2)).sum();
        self.gamma * self.gamma * (squares + self.cyclic_sum())
    }
}

/// Evaluates `Σ_i dn(u + s_i)·dn(u + s_{(i+r) mod p})` for `r = 1..p−1` at one point.
pub fn cyclic_products_at(modulus: &ModulusParameter, shifts: &[f64], u: f64) -> Vec<f64> {
    let p = shifts.len();
    let d: Vec<f64> = shifts.iter().map(|s| modulus.dn(u + s)).collect();
    (1..p)
        .map(|r| (0..p).map(|i| d[i] * d[(i + r) % p]).sum())
        .collect()
}

fn cyclic_constants(modulus: &ModulusParameter, shifts: &[f64], quarter: f64) -> Result<Vec<f64>> {
    let probes: Vec<f64> = CONSTANCY_PROBES.iter().map(|f| f * 2.0 * quarter).collect();
    let reference = cyclic_products_at(modulus, shifts, probes[0]);
    for &u in &probes[1..] {
        let here = cyclic_products_at(modulus, shifts, u);
        for (r, (a, b)) in reference.iter().zip(&here).enumerate() {
            if (a - b).abs() > CONSTANCY_TOL {
                return Err(Error::Consistency(format!(
                    "cyclic constant a_{}({}) varies with u: {a} at u = {} vs {b} at u = {u}",
                    shifts.len(),
                    r + 1,
                    probes[0]
                )));
            }
        }
    }
    Ok(reference)
}

/// Convenience wrapper for [`LandenMap::new`].
pub fn landen_map(p: usize, m: f64) -> Result<LandenMap> {
    LandenMap::new(p, m)
}

/// `A(p, m)`, determined twice: from velocity consistency of the re-expressed
/// cnoidal wave, and by fitting the velocity that zeroes the KdV residual of the
/// superposed wave. Fails if the two disagree by more than [`VELOCITY_CONSTANT_TOL`].
pub fn a_constant(p: usize, m: f64) -> Result<f64> {
    let map = LandenMap::new(p, m)?;
    let closed = map.velocity_constant();
    let fitted = verify::velocity_constant_from_residual(&map, RESIDUAL_GRID_POINTS)?;
    if (closed - fitted).abs() > VELOCITY_CONSTANT_TOL {
        return Err(Error::Consistency(format!(
            "A({p}, {m}) determinations disagree: consistency relation {closed}, residual fit {fitted}"
        )));
    }
    Ok(closed)
}

/// Parameters of the single cnoidal wave that reproduces a superposed wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedParams {
    pub alpha_tilde: f64,
    /// Wave speed `c̃ = b_p α²`.
    pub c_tilde: f64,
    pub beta_tilde: f64,
    pub m_tilde: f64,
}

/// `α̃ = α/γ`, `c̃ = b_p α²`, `β̃ = βγ² + 2γ² Σ_r a_p(r)`.
pub fn transform_params(alpha: f64, beta: f64, map: &LandenMap) -> Result<TransformedParams> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite, got {beta}")));
    }
    let g2 = map.gamma() * map.gamma();
    let b_p = 8.0 - 4.0 * map.m() - 6.0 * beta + 12.0 * map.velocity_constant();
    Ok(TransformedParams {
        alpha_tilde: alpha / map.gamma(),
        c_tilde: b_p * alpha * alpha,
        beta_tilde: beta * g2 + 2.0 * g2 * map.cyclic_sum(),
        m_tilde: map.m_tilde(),
    })
}
