//! Exact diagonalization of the anisotropic quantum Rabi model
//!
//! ```text
//! H = ω a†a + (Ω/2) σx + g[(σ̃₋a† + σ̃₊a) + λ(σ̃₊a† + σ̃₋a)]
//! ```
//!
//! in a truncated boson basis, together with the diagnostics used to map its
//! phase diagram: parity-resolved spectra and gaps, symmetry expectations,
//! node counting of real-space spinors, the x–p duality between positive and
//! negative anisotropy, and analytic as well as numerically detected
//! transition boundaries.
//!
//! λ = 1 is the quantum Rabi model, λ = 0 the Jaynes–Cummings model.

pub mod boundaries;
pub mod eigen;
pub mod error;
pub mod model;
pub mod observables;
pub mod params;
pub mod realspace;
pub mod scan;
pub mod state;

pub use error::{Error, Result};
pub use params::{ModelParams, Truncation, TruncationPolicy};
pub use state::{Parity, Spin, SpinFockState};
