//! Model parameters and Fock-space truncation.
//!
//! Energies are measured in units of the qubit splitting unless a caller
//! chooses otherwise. The coupling splits into a longitudinal part
//! `g_z = (1+λ)g/2`, which displaces the two spin components of the
//! oscillator in opposite directions, and a momentum-coupled part
//! `g_y = (1-λ)g/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Couplings of the anisotropic Rabi Hamiltonian plus derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    qubit_splitting: f64,
    g: f64,
    lambda: f64,
}

impl ModelParams {
    /// Builds parameters, rejecting |λ| > 1.
    pub fn new(omega: f64, qubit_splitting: f64, g: f64, lambda: f64) -> Result<Self> {
        Self::build(omega, qubit_splitting, g, lambda, false)
    }

    /// Same as [`ModelParams::new`] but accepts any finite anisotropy.
    pub fn new_any_anisotropy(omega: f64, qubit_splitting: f64, g: f64, lambda: f64) -> Result<Self> {
        Self::build(omega, qubit_splitting, g, lambda, true)
    }

    /// Parameters with `g` given in units of the Rabi critical coupling `g_s`.
    pub fn in_gs_units(omega: f64, qubit_splitting: f64, g_over_gs: f64, lambda: f64) -> Result<Self> {
        let gs = (omega * qubit_splitting).sqrt() / 2.0;
        Self::new(omega, qubit_splitting, g_over_gs * gs, lambda)
    }

    fn build(omega: f64, qubit_splitting: f64, g: f64, lambda: f64, any_lambda: bool) -> Result<Self> {
        positive("omega", omega)?;
        positive("qubit_splitting", qubit_splitting)?;
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: format!("must be finite and non-negative, got {g}"),
            });
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite, got {lambda}"),
            });
        }
        if !any_lambda && lambda.abs() > 1.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("|lambda| must not exceed 1, got {lambda}"),
            });
        }
        Ok(Self { omega, qubit_splitting, g, lambda })
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::build(self.omega, self.qubit_splitting, g, self.lambda, true)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::build(self.omega, self.qubit_splitting, self.g, lambda, true)
    }

    /// Boson frequency ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Qubit splitting Ω.
    pub fn qubit_splitting(&self) -> f64 {
        self.qubit_splitting
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Momentum-coupled (spin-orbit) strength `(1-λ)g/2`.
    pub fn g_y(&self) -> f64 {
        0.5 * (1.0 - self.lambda) * self.g
    }

    /// Position-coupled strength `(1+λ)g/2`.
    pub fn g_z(&self) -> f64 {
        0.5 * (1.0 + self.lambda) * self.g
    }

    /// Critical coupling of the isotropic Rabi model, `√(ωΩ)/2`.
    pub fn g_s(&self) -> f64 {
        (self.omega * self.qubit_splitting).sqrt() / 2.0
    }

    pub fn g_over_gs(&self) -> f64 {
        self.g / self.g_s()
    }

    /// Displacement of the spin-resolved harmonic wells, `√2 g_z/ω`.
    pub fn gz_prime(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.g_z() / self.omega
    }

    /// Momentum displacement of the dual picture, `√2 g_y/ω`.
    pub fn gy_prime(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.g_y() / self.omega
    }

    /// Constant offset `-(g_y'^2 + 1)ω/2` used only for drawing the
    /// effective potentials.
    pub fn eps0_y(&self) -> f64 {
        let gy = self.gy_prime();
        -(gy * gy + 1.0) * self.omega / 2.0
    }

    /// Largest packet displacement in either quadrature.
    pub fn max_displacement(&self) -> f64 {
        self.gz_prime().abs().max(self.gy_prime().abs())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and positive, got {value}"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationPolicy {
    Fixed,
    Adaptive,
}

/// Highest retained boson occupation. The basis holds `2(n_max+1)` states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub n_max: usize,
    pub policy: TruncationPolicy,
    /// Lets a fixed truncation go below the adaptive floor.
    #[serde(default)]
    pub allow_below_floor: bool,
}

impl Truncation {
    /// Smallest cutoff that holds displaced oscillator states:
    /// `max(64, ceil(8 d^2) + 40)` with `d` the larger of the two displacements.
    pub fn floor(params: &ModelParams) -> usize {
        let d = params.max_displacement();
        // the small offset keeps exact products like 8·4.5 from rounding up
        let need = (8.0 * d * d - 1e-9).ceil().max(0.0) as usize + 40;
        need.max(64)
    }

    pub fn adaptive(params: &ModelParams) -> Self {
        Self {
            n_max: Self::floor(params),
            policy: TruncationPolicy::Adaptive,
            allow_below_floor: false,
        }
    }

    pub fn fixed(n_max: usize) -> Self {
        Self { n_max, policy: TruncationPolicy::Fixed, allow_below_floor: false }
    }

    /// Fixed cutoff that is accepted even below the adaptive floor.
    pub fn fixed_unchecked(n_max: usize) -> Self {
        Self { n_max, policy: TruncationPolicy::Fixed, allow_below_floor: true }
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let floor = Self::floor(params);
        if self.n_max < floor && !(self.policy == TruncationPolicy::Fixed && self.allow_below_floor) {
            return Err(Error::TruncationTooSmall { n_max: self.n_max, floor });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rabi_limit_at_low_frequency() {
        let p = ModelParams::new(0.01, 1.0, 0.3, 1.0).unwrap();
        assert_eq!(p.g_y(), 0.0);
        assert_eq!(p.g_z(), 0.3);
        assert_relative_eq!(p.g_s(), 0.05, epsilon = 1e-15);
    }

    #[test]
    fn jaynes_cummings_splits_coupling_evenly() {
        let p = ModelParams::new(0.7, 1.0, 0.42, 0.0).unwrap();
        assert_eq!(p.g_y(), p.g_z());
        assert_eq!(p.g_y(), 0.21);
    }

    #[test]
    fn displacement_substitution() {
        let p = ModelParams::new(0.5, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(p.g_z(), 0.75);
        assert_relative_eq!(p.gz_prime(), 2.121_320_343_559_642, epsilon = 1e-12);
        assert_relative_eq!(p.g_y() + p.g_z(), p.g(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(0.0, 1.0, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.1, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 1.5).is_err());
        assert!(ModelParams::new_any_anisotropy(1.0, 1.0, 0.1, 1.5).is_ok());
    }

    #[test]
    fn adaptive_floor() {
        let weak = ModelParams::new(1.0, 1.0, 0.1, 0.3).unwrap();
        assert_eq!(Truncation::floor(&weak), 64);
        // d = √2·(1.5/2)·1/0.5, 8d² = 36
        let p = ModelParams::new(0.5, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(Truncation::floor(&p), 76);
        // the momentum displacement governs negative anisotropy
        let n = ModelParams::new(0.5, 1.0, 1.0, -0.5).unwrap();
        assert_eq!(Truncation::floor(&n), 76);
    }

    #[test]
    fn truncation_override() {
        let p = ModelParams::new(0.5, 1.0, 1.0, 0.5).unwrap();
        assert!(Truncation::fixed(10).validate(&p).is_err());
        assert!(Truncation::fixed_unchecked(10).validate(&p).is_ok());
        assert!(Truncation::adaptive(&p).validate(&p).is_ok());
    }
}
