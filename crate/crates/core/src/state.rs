//! Basis conventions shared by every module.
//!
//! States live in `|n⟩ ⊗ |s⟩` where `s = ±1` is the σx eigenvalue and
//! `n = 0..=n_max` the boson number. The flat index is `2n + (1-s)/2`, so
//! `|n,+x⟩` sits at `2n` and `|n,-x⟩` at `2n+1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// σx eigenvalue of a basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Plus => 1.0,
            Spin::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }
}

/// Eigenvalue of `P = σx (-1)^{a†a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn of(n: usize, spin: Spin) -> Self {
        let even_n = n.is_multiple_of(2);
        match (spin, even_n) {
            (Spin::Plus, true) | (Spin::Minus, false) => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// The spin that basis level `n` carries inside this sector.
    pub fn spin_at(self, n: usize) -> Spin {
        if Parity::of(n, Spin::Plus) == self {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }
}

pub fn basis_index(n: usize, spin: Spin) -> usize {
    match spin {
        Spin::Plus => 2 * n,
        Spin::Minus => 2 * n + 1,
    }
}

pub fn basis_label(index: usize) -> (usize, Spin) {
    let spin = if index.is_multiple_of(2) { Spin::Plus } else { Spin::Minus };
    (index / 2, spin)
}

/// Real coefficient vector in the spin-Fock basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinFockState {
    coeffs: Vec<f64>,
}

impl SpinFockState {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(2) {
            return Err(Error::BadStateLength { len: coeffs.len() });
        }
        Ok(Self { coeffs })
    }

    /// A single basis vector `|n, s⟩`.
    pub fn basis(n_max: usize, n: usize, spin: Spin) -> Self {
        let mut coeffs = vec![0.0; 2 * (n_max + 1)];
        coeffs[basis_index(n, spin)] = 1.0;
        Self { coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() / 2 - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize, spin: Spin) -> f64 {
        self.coeffs[basis_index(n, spin)]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn check_normalized(&self, tol: f64) -> Result<()> {
        let drift = (self.norm() - 1.0).abs();
        if drift > tol {
            return Err(Error::NotNormalized { drift });
        }
        Ok(())
    }
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
