//! Real-space and momentum-space pictures of spin-Fock states.

pub mod duality;
pub mod hermite;
pub mod wave;

pub use duality::{
    dual_transform, dual_transform_real, duality_expectation, jcm_duality_phase, jcm_ground_index, strip_global_phase,
};
pub use wave::{
    count_zeros, energy_functional, momentum_wavefunction, parity_product, spinor_wavefunction, Component, GridConfig,
    Space, SpinorWave, ZeroCount, DEFAULT_ZERO_THRESHOLD,
};
