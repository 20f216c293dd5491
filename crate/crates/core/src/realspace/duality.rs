//! x–p duality between anisotropies λ and -λ.
//!
//! `U_D = R ⊗ F` with `F|n⟩ = (-i)^n |n⟩` (the Fourier transform of `φ_n`)
//! and `R = exp(-iπσx/4)`, which takes `σy → σz` and `σz → -σy`. Conjugation
//! by `U_D` maps the Hamiltonian at λ onto the one at -λ exactly, entry by
//! entry, inside any truncation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::{basis_label, fix_sign, Spin, SpinFockState};

/// Diagonal entry of `U_D` on `|n, s⟩`.
pub fn dual_phase(n: usize, spin: Spin) -> Complex64 {
    let fourier = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let spin_phase = Complex64::from_polar(1.0, -spin.sign() * std::f64::consts::FRAC_PI_4);
    fourier * spin_phase
}

/// `U_D |ψ⟩` as complex coefficients in the spin-Fock basis.
pub fn dual_transform(state: &SpinFockState) -> Vec<Complex64> {
    state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (n, spin) = basis_label(i);
            dual_phase(n, spin) * c
        })
        .collect()
}

/// Removes the global phase of a complex vector that is real up to that
/// phase; the result follows the usual sign convention.
pub fn strip_global_phase(coeffs: &[Complex64]) -> Result<SpinFockState> {
    let pivot = coeffs.iter().copied().fold(Complex64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() { z } else { m });
    if pivot.norm() == 0.0 {
        return SpinFockState::new(vec![0.0; coeffs.len()]);
    }
    let rot = pivot.conj() / pivot.norm();
    let mut residue = 0.0f64;
    let mut real: Vec<f64> = coeffs
        .iter()
        .map(|&z| {
            let w = z * rot;
            residue = residue.max(w.im.abs());
            w.re
        })
        .collect();
    if residue > 1e-10 * pivot.norm() {
        return Err(Error::NotRealUpToPhase { residue });
    }
    fix_sign(&mut real);
    SpinFockState::new(real)
}

/// Dual state of a parity eigenstate as a real vector.
pub fn dual_transform_real(state: &SpinFockState) -> Result<SpinFockState> {
    strip_global_phase(&dual_transform(state))
}

/// Excitation index of the Jaynes–Cummings ground state at the frequencies and
/// coupling of `params`: `-1` for `|0,-x⟩`, otherwise the `n` of the doublet
/// `{|n,+x⟩, |n+1,-x⟩}` whose lower level is lowest.
pub fn jcm_ground_index(params: &ModelParams) -> i64 {
    let (w, q, g) = (params.omega(), params.qubit_splitting(), params.g());
    let mut best = (-1i64, -q / 2.0);
    let n_stop = (4.0 * g * g / (w * w)).ceil() as i64 + 16;
    for n in 0..=n_stop {
        let nf = n as f64;
        let e = w * (nf + 0.5) - ((q - w).powi(2) / 4.0 + g * g * (nf + 1.0)).sqrt();
        if e < best.1 {
            best = (n, e);
        }
    }
    best.0
}

/// Eigenvalue of `U_D` on the Jaynes–Cummings ground state.
pub fn jcm_duality_phase(params: &ModelParams) -> Complex64 {
    match jcm_ground_index(params) {
        -1 => dual_phase(0, Spin::Minus),
        n => dual_phase(n as usize, Spin::Plus),
    }
}

/// `D = ⟨ψ|U_D|ψ⟩` with the phase chosen so that `D = 1` on the
/// Jaynes–Cummings ground state of the same ω, Ω, g.
pub fn duality_expectation(state: &SpinFockState, params: &ModelParams) -> Result<Complex64> {
    state.check_normalized(1e-8)?;
    let raw: Complex64 = state.coeffs().iter().zip(dual_transform(state)).map(|(&c, z)| z * c).sum();
    Ok(raw * jcm_duality_phase(params).conj())
}
