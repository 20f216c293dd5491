//! Spinor wavefunctions on a uniform grid, node counting and the real-space
//! energy functional.
//!
//! Components are taken in the σz basis, `|σz=±⟩ = (|+x⟩ ± |-x⟩)/√2`:
//!
//! ```text
//! ψ+(x) = Σ_n (c_{n,+x} + c_{n,-x}) φ_n(x) / √2
//! ψ-(x) = Σ_n (c_{n,-x} - c_{n,+x}) φ_n(x) / √2
//! ```
//!
//! The sign of ψ- is chosen so that a state of parity `P` obeys
//! `ψ-(x) = -P ψ+(-x)`, which makes `ψ+(x) ψ-(-x)` uniformly of sign `-P`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::duality::dual_transform_real;
use super::hermite::expand_pair;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::{Parity, Spin, SpinFockState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Plus,
    Minus,
}

/// Grid request; unset fields take the defaults
/// `L = max displacement + 8` and `h = min(0.02, 0.9 π/√(2 n_max))`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub half_width: Option<f64>,
    pub step: Option<f64>,
}

impl GridConfig {
    /// Concrete `(L, h)` for a state of the given cutoff.
    pub fn resolve(&self, params: &ModelParams, n_max: usize) -> Result<(f64, f64)> {
        let limit = std::f64::consts::PI / (2.0 * n_max.max(1) as f64).sqrt();
        let half_width = self.half_width.unwrap_or(params.max_displacement() + 8.0);
        let step = self.step.unwrap_or((0.9 * limit).min(0.02));
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter { name: "half_width", reason: format!("got {half_width}") });
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter { name: "step", reason: format!("got {step}") });
        }
        if step > limit {
            return Err(Error::GridTooCoarse { step, n_max, limit });
        }
        Ok((half_width, step))
    }
}

/// Two real spinor components sampled on `x_i = i h`, `|i| ≤ ⌈L/h⌉`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorWave {
    pub grid: Vec<f64>,
    pub step: f64,
    pub psi_plus: Vec<f64>,
    pub psi_minus: Vec<f64>,
    pub space: Space,
}

impl SpinorWave {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn component(&self, c: Component) -> &[f64] {
        match c {
            Component::Plus => &self.psi_plus,
            Component::Minus => &self.psi_minus,
        }
    }

    /// `h Σ (ψ+² + ψ-²)`.
    pub fn norm_sq(&self) -> f64 {
        self.step * self.psi_plus.iter().zip(&self.psi_minus).map(|(a, b)| a * a + b * b).sum::<f64>()
    }

    /// `max |ψ-(x) + P ψ+(-x)|`.
    pub fn parity_deviation(&self, parity: Parity) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| (self.psi_minus[i] + parity.sign() * self.psi_plus[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Three-column CSV `x,psi_plus,psi_minus` after `#` header lines.
    pub fn write_csv<W: Write>(&self, out: &mut W, header: &[(String, String)]) -> Result<()> {
        for (k, v) in header {
            writeln!(out, "# {k}: {v}")?;
        }
        let axis = match self.space {
            Space::Position => "x",
            Space::Momentum => "p",
        };
        writeln!(out, "{axis},psi_plus,psi_minus")?;
        for i in 0..self.len() {
            writeln!(out, "{},{},{}", self.grid[i], self.psi_plus[i], self.psi_minus[i])?;
        }
        Ok(())
    }
}

fn sample(state: &SpinFockState, half_width: f64, step: f64, space: Space) -> SpinorWave {
    let n_max = state.n_max();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut up = Vec::with_capacity(n_max + 1);
    let mut down = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (p, m) = (state.coeff(n, Spin::Plus), state.coeff(n, Spin::Minus));
        up.push((p + m) * s);
        down.push((m - p) * s);
    }
    // symmetric about the origin so that x ↦ -x maps grid points onto grid points
    let half = (half_width / step).ceil() as usize;
    let grid: Vec<f64> = (0..=2 * half).map(|i| (i as f64 - half as f64) * step).collect();
    let (psi_plus, psi_minus) = grid.iter().map(|&x| expand_pair(&up, &down, x)).unzip();
    SpinorWave { grid, step, psi_plus, psi_minus, space }
}

/// Position-space spinor of a real state.
pub fn spinor_wavefunction(state: &SpinFockState, params: &ModelParams, grid: &GridConfig) -> Result<SpinorWave> {
    let (l, h) = grid.resolve(params, state.n_max())?;
    Ok(sample(state, l, h, Space::Position))
}

/// Momentum-space spinor, taken in the rotated spin frame of the duality so
/// that it is real: the position spinor of `U_D|ψ⟩`.
pub fn momentum_wavefunction(state: &SpinFockState, params: &ModelParams, grid: &GridConfig) -> Result<SpinorWave> {
    let dual = dual_transform_real(state)?;
    let (l, h) = grid.resolve(params, state.n_max())?;
    Ok(sample(&dual, l, h, Space::Momentum))
}

/// Node count of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub n_z: usize,
    pub zero_locations: Vec<f64>,
    pub component: Component,
    /// Set when the count changes if the threshold moves by a factor of ten
    /// either way.
    pub ambiguous: bool,
}

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-6;

fn sign_changes(grid: &[f64], psi: &[f64], thr: f64) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &v) in psi.iter().enumerate() {
        if v.abs() <= thr {
            continue;
        }
        if let Some(j) = last {
            let u = psi[j];
            if u.signum() != v.signum() {
                let t = u / (u - v);
                zeros.push(grid[j] + t * (grid[i] - grid[j]));
            }
        }
        last = Some(i);
    }
    zeros
}

/// Sign changes of a component between consecutive samples with
/// `|ψ| > rel_threshold · max|ψ|`, located by linear interpolation.
pub fn count_zeros(wave: &SpinorWave, component: Component, rel_threshold: f64) -> ZeroCount {
    let psi = wave.component(component);
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = rel_threshold * peak;
    let zeros = sign_changes(&wave.grid, psi, thr);
    let n = zeros.len();
    let ambiguous = [0.1, 10.0].iter().any(|f| sign_changes(&wave.grid, psi, f * thr).len() != n);
    ZeroCount { n_z: n, zero_locations: zeros, component, ambiguous }
}

/// `ψ_P(x) = ψ+(x) ψ-(-x)` on the same grid.
pub fn parity_product(wave: &SpinorWave) -> Vec<f64> {
    let n = wave.len();
    (0..n).map(|i| wave.psi_plus[i] * wave.psi_minus[n - 1 - i]).collect()
}

fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let at = |i: isize| if i < 0 || i >= n as isize { 0.0 } else { f[i as usize] };
    (0..n as isize)
        .map(|i| (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h))
        .collect()
}

fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let at = |i: isize| if i < 0 || i >= n as isize { 0.0 } else { f[i as usize] };
    (0..n as isize)
        .map(|i| (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h))
        .collect()
}

/// `⟨ψ|H|ψ⟩/⟨ψ|ψ⟩` from the real-space form
///
/// ```text
/// H = ω(p² + x² - 1)/2 + (Ω/2)σx + √2 g_z σz x + √2 g_y σy p
/// ```
///
/// with fourth-order finite differences on the grid.
pub fn energy_functional(wave: &SpinorWave, params: &ModelParams) -> f64 {
    let h = wave.step;
    let u = &wave.psi_plus;
    // standard-basis lower amplitude
    let d: Vec<f64> = wave.psi_minus.iter().map(|v| -v).collect();
    let (u1, d1) = (first_derivative(u, h), first_derivative(&d, h));
    let (u2, d2) = (second_derivative(u, h), second_derivative(&d, h));
    let (w, q) = (params.omega(), params.qubit_splitting());
    let sz = std::f64::consts::SQRT_2 * params.g_z();
    let sy = std::f64::consts::SQRT_2 * params.g_y();
    let mut norm = 0.0;
    let mut e = 0.0;
    for i in 0..wave.len() {
        let x = wave.grid[i];
        let dens = u[i] * u[i] + d[i] * d[i];
        norm += dens;
        e += 0.5 * w * (-u[i] * u2[i] - d[i] * d2[i] + (x * x - 1.0) * dens);
        e += q * u[i] * d[i];
        e += sz * x * (u[i] * u[i] - d[i] * d[i]);
        e += sy * (d[i] * u1[i] - u[i] * d1[i]);
    }
    e / norm
}
