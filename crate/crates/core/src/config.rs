//! Run configuration: one JSON document covering every subcommand, with defaults
//! matching the acceptance grid. Missing fields take their defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elliptic::ModulusParameter;
use crate::error::{Error, Result};
use crate::waves::{
    ConstantWave, DnWaveParams, PlusMinusWave, PmWaveParams, Sign, SuperposedWave, VelocityScaling,
    WaveFamily,
};

/// Per-check tolerances. Checks pass when `metric ≤ tol`, except the rejected `u±`
/// scaling, which must exceed `pm_rejected_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub jacobi_invariants: f64,
    pub k_reference: f64,
    pub landen_identity: f64,
    pub landen_closed_form: f64,
    pub cyclic_spread: f64,
    pub cyclic_symmetry: f64,
    pub equivalence: f64,
    pub residual: f64,
    pub residual_pm: f64,
    pub pm_rejected_min: f64,
    pub velocity_constant: f64,
    pub soliton_limit: f64,
    pub soliton_exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            jacobi_invariants: 1e-12,
            k_reference: 1e-13,
            landen_identity: 1e-10,
            landen_closed_form: 1e-12,
            cyclic_spread: 1e-10,
            cyclic_symmetry: 1e-10,
            equivalence: 1e-9,
            residual: 1e-8,
            residual_pm: 1e-7,
            pm_rejected_min: 1e-3,
            velocity_constant: 1e-8,
            soliton_limit: 1e-5,
            soliton_exact: 1e-12,
        }
    }
}

impl Tolerances {
    /// Every upper-bound tolerance set to `tol`; the lower bound is left alone.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            jacobi_invariants: tol,
            k_reference: tol,
            landen_identity: tol,
            landen_closed_form: tol,
            cyclic_spread: tol,
            cyclic_symmetry: tol,
            equivalence: tol,
            residual: tol,
            residual_pm: tol,
            pm_rejected_min: Tolerances::default().pm_rejected_min,
            velocity_constant: tol,
            soliton_limit: tol,
            soliton_exact: tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Orders and parameters for the Landen identity checks.
    pub identity_p: Vec<usize>,
    pub identity_m: Vec<f64>,
    /// Points on the two-period grid for pointwise identities.
    pub identity_points: usize,
    /// Random `(x, m)` pairs for the Jacobi invariants.
    pub random_samples: usize,
    pub seed: u64,
    /// Orders, parameters and `(α, β)` pairs for the superposition checks.
    pub wave_p: Vec<usize>,
    pub wave_m: Vec<f64>,
    pub wave_params: Vec<(f64, f64)>,
    pub times: Vec<f64>,
    /// Grid points for residuals and equivalence sweeps.
    pub grid_points: usize,
    /// Parameters for the `u±` scaling separation; `α ≠ 1` is required to tell the
    /// two scalings apart.
    pub pm_m: Vec<f64>,
    pub pm_alpha: f64,
    pub soliton_params: Vec<(f64, f64)>,
    pub soliton_epsilon: f64,
    pub soliton_half_width: f64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            identity_p: (1..=8).collect(),
            identity_m: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            identity_points: 512,
            random_samples: 10_000,
            seed: 20_040_601,
            wave_p: (1..=6).collect(),
            wave_m: vec![0.2, 0.5, 0.8, 0.9],
            wave_params: vec![(1.0, 0.0), (1.7, -0.4), (2.0, 1.0)],
            times: vec![0.0, 0.1, 0.5],
            grid_points: 256,
            pm_m: vec![0.2, 0.5, 0.8],
            pm_alpha: 1.5,
            soliton_params: vec![(1.0, 0.0), (2.0, 1.0)],
            soliton_epsilon: 1e-12,
            soliton_half_width: 5.0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    U1,
    Up,
    Upm,
    Constant,
}

/// Wave selection shared by `eval` and `evolve`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveConfig {
    pub family: Family,
    pub p: usize,
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sign: Sign,
    /// Level of the `constant` family.
    pub level: f64,
}

impl Default for WaveConfig {
    fn default() -> Self {
        WaveConfig { family: Family::U1, p: 1, m: 0.5, alpha: 1.0, beta: 0.0, sign: Sign::Plus, level: 0.0 }
    }
}

impl WaveConfig {
    pub fn build(&self, scaling: VelocityScaling) -> Result<Box<dyn WaveFamily>> {
        Ok(match self.family {
            Family::U1 => Box::new(SuperposedWave::new(DnWaveParams::new(self.alpha, self.beta, self.m, 1)?)?),
            Family::Up => Box::new(SuperposedWave::new(DnWaveParams::new(self.alpha, self.beta, self.m, self.p)?)?),
            Family::Upm => Box::new(PlusMinusWave::new(PmWaveParams::new(self.alpha, self.m, self.sign)?, scaling)?),
            Family::Constant => {
                if !self.level.is_finite() {
                    return Err(Error::Config("constant level must be finite".into()));
                }
                Box::new(ConstantWave(self.level))
            }
        })
    }

    /// Spatial period of the built wave; the `constant` family borrows `2K(m)/α`.
    pub fn period(&self, wave: &dyn WaveFamily) -> Result<f64> {
        match wave.spatial_period() {
            Some(period) => Ok(period),
            None if self.family == Family::Constant => {
                let quarter = ModulusParameter::periodic(self.m)?.quarter_period()?;
                Ok(2.0 * quarter / self.alpha)
            }
            None => Err(Error::Config(format!(
                "{} with m = {} has no finite period to sample",
                wave.name(),
                self.m
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub wave: WaveConfig,
    pub points: usize,
    /// Number of spatial periods covered by the dump.
    pub periods: usize,
    pub t: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { wave: WaveConfig::default(), points: 256, periods: 1, t: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub wave: WaveConfig,
    pub points: usize,
    /// Grid length in units of the `dn` period `2K/α` (which holds `p` periods of `u_p`).
    pub periods: usize,
    pub dt: f64,
    /// Final time; when absent, the shortest multiple of `dt` over which the wave
    /// moves at least one spatial period.
    pub final_time: Option<f64>,
    pub dealias: bool,
    pub snapshot_every: Option<usize>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            wave: WaveConfig::default(),
            points: 256,
            periods: 1,
            dt: 1e-4,
            final_time: None,
            dealias: true,
            snapshot_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub verify: VerifyConfig,
    pub eval: EvalConfig,
    pub evolve: EvolveConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }
}
