//! Jacobi elliptic functions and the complete elliptic integral of the first kind.
//!
//! **Convention:** every function here takes the *modulus parameter* `m = k²`,
//! not the modulus `k`. `sn(x, 0.5)` is `sn(x | m = 0.5)`, i.e. `k = 1/√2`.
//!
//! `K(m)` comes from the arithmetic-geometric mean, `K(m) = π / (2·AGM(1, √(1−m)))`.
//! The functions `sn`, `cn`, `dn` use the descending Landen ladder: the parameter is
//! driven below `1e-16` by repeated Landen steps, where the trigonometric functions
//! are exact to double precision, and the values are carried back up the ladder.
//! Arguments are reduced modulo the real period `4K` before the ladder runs.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Parameter below which `sn = sin`, `cn = cos`, `dn = 1` hold to double precision.
const LADDER_FLOOR: f64 = 1e-16;
const MAX_LEVELS: usize = 16;
const MAX_AGM_ITER: usize = 64;

/// Complete elliptic integral of the first kind, `K(m)` for `0 ≤ m < 1`.
pub fn complete_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain(format!("K(m) requires 0 <= m < 1, got m = {m}")));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_AGM_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    Ok(FRAC_PI_2 / a)
}

/// One rung of the descending Landen ladder: the modulus `k` of the next, smaller
/// parameter `m' = k²`, and `1 − k` computed without cancellation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Rung {
    k: f64,
    one_minus_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ladder {
    rungs: [Rung; MAX_LEVELS],
    len: usize,
    /// Parameter at the bottom of the ladder (below `LADDER_FLOOR`).
    floor_m: f64,
}

impl Ladder {
    fn descend(m: f64) -> Self {
        let mut rungs = [Rung::default(); MAX_LEVELS];
        let mut len = 0;
        let mut m_n = m;
        // complementary modulus k' = √(1 − m)
        let mut kp = (1.0 - m).sqrt();
        while m_n >= LADDER_FLOOR && len < MAX_LEVELS {
            let one_plus_kp = 1.0 + kp;
            let k = m_n / (one_plus_kp * one_plus_kp);
            rungs[len] = Rung { k, one_minus_k: 2.0 * kp / one_plus_kp };
            len += 1;
            kp = 2.0 * kp.sqrt() / one_plus_kp;
            m_n = k * k;
        }
        Ladder { rungs, len, floor_m: m_n }
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let mut z = x;
        for rung in &self.rungs[..self.len] {
            z /= 1.0 + rung.k;
        }
        let (mut s, mut c) = z.sin_cos();
        let mut d = 1.0 - 0.5 * self.floor_m * s * s;
        for rung in self.rungs[..self.len].iter().rev() {
            let k = rung.k;
            let denom = 1.0 + k * s * s;
            let sn = (1.0 + k) * s / denom;
            let cn = c * d / denom;
            // (1 − k s²) written as c² + (1 − k) s² stays accurate for k → 1
            let dn = (c * c + rung.one_minus_k * s * s) / denom;
            s = sn;
            c = cn;
            d = dn;
        }
        (s, c, d)
    }
}

/// Modulus parameter `m ∈ [0, 1]` with its quarter period and Landen ladder cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusParameter {
    m: f64,
    quarter_period: Option<f64>,
    ladder: Ladder,
}

impl ModulusParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::domain(format!("modulus parameter must lie in [0, 1], got m = {m}")));
        }
        let quarter_period = if m < 1.0 { Some(complete_k(m)?) } else { None };
        let ladder = if m < 1.0 { Ladder::descend(m) } else { Ladder::descend(0.0) };
        Ok(ModulusParameter { m, quarter_period, ladder })
    }

    /// Like [`ModulusParameter::new`] but rejects `m = 1`, for anything that needs a finite period.
    pub fn periodic(m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::domain(format!("periodic evaluation requires 0 <= m < 1, got m = {m}")));
        }
        Self::new(m)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `K(m)`. Fails for `m = 1`, where the period is infinite.
    pub fn quarter_period(&self) -> Result<f64> {
        self.quarter_period
            .ok_or_else(|| Error::domain("K(m) diverges at m = 1"))
    }

    /// `√(1 − m)`, the value of `dn` at the quarter period.
    pub fn complementary_modulus(&self) -> f64 {
        (1.0 - self.m).sqrt()
    }

    pub fn jacobi(&self, x: f64) -> Result<JacobiTriple> {
        if !x.is_finite() {
            return Err(Error::domain(format!("argument must be finite, got x = {x}")));
        }
        let Some(quarter) = self.quarter_period else {
            let sech = 1.0 / x.cosh();
            return Ok(JacobiTriple { x, sn: x.tanh(), cn: sech, dn: sech });
        };
        let period = 4.0 * quarter;
        let turns = (x / period).round();
        if turns.abs() > 1e15 {
            return Err(Error::domain(format!(
                "argument x = {x} too large for periodic reduction"
            )));
        }
        let reduced = x - turns * period;
        let (sn, cn, dn) = self.ladder.eval(reduced);
        Ok(JacobiTriple { x, sn, cn, dn })
    }

    /// `dn(x | m)`; shorthand used on hot paths where `x` is known finite.
    pub(crate) fn dn(&self, x: f64) -> f64 {
        self.jacobi(x).map(|t| t.dn).unwrap_or(f64::NAN)
    }
}

/// `(sn, cn, dn)` evaluated at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub x: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl JacobiTriple {
    /// `sn² + cn² − 1`
    pub fn pythagorean_defect(&self) -> f64 {
        self.sn * self.sn + self.cn * self.cn - 1.0
    }

    /// `m·sn² + dn² − 1`
    pub fn modulus_defect(&self, m: f64) -> f64 {
        m * self.sn * self.sn + self.dn * self.dn - 1.0
    }
}

/// `(sn, cn, dn)(x | m)` for `0 ≤ m ≤ 1`.
pub fn jacobi(x: f64, m: f64) -> Result<JacobiTriple> {
    ModulusParameter::new(m)?.jacobi(x)
}
