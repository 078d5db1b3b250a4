//! Generalized Landen transformations of Jacobi elliptic functions and the exact
//! periodic solutions of the KdV equation `u_t − 6uu_x + u_xxx = 0` they connect.
//!
//! A superposition of `p` phase-shifted cnoidal waves is itself a single cnoidal
//! wave at a smaller modulus parameter. This crate evaluates both sides and checks
//! the correspondence, the underlying identities, and the PDE itself.
//!
//! All elliptic functions take the modulus parameter `m = k²`.

pub mod elliptic;
pub mod error;
pub mod evolve;
pub mod fft;
pub mod landen;
pub mod spectral;
pub mod verify;
pub mod waves;

pub use elliptic::{complete_k, jacobi, JacobiTriple, ModulusParameter};
pub use error::{Error, Result};
pub use landen::{a_constant, landen_map, transform_params, LandenMap, TransformedParams};
pub use spectral::PeriodicGrid;
pub use waves::{DnWaveParams, PmWaveParams, Sign, VelocityScaling, WaveFamily};
pub mod config;
pub mod format;
pub mod suites;
