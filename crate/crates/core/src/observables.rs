//! Ground-state diagnostics.
//!
//! Ladder operators act within each σx component. Squared quadratures come
//! from `‖x̂ψ‖²` and `‖p̂ψ‖²` with the images allowed to reach `n_max + 1`,
//! so they equal the untruncated expectation values for the given vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{excitation_number, parity_operator};
use crate::params::{ModelParams, Truncation};
use crate::realspace::duality_expectation;
use crate::state::{Spin, SpinFockState};

/// Expectation values of one normalized state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSet {
    /// `⟨a†a†⟩`, real for real states.
    pub a_dag_a_dag: f64,
    /// `⟨a†a†⟩/A_0` with `A_0 = [(1+|λ|)g/(2ω)]²`; `None` at `g = 0`.
    pub a_norm: Option<f64>,
    pub sigma_x: f64,
    pub parity: f64,
    pub p_x: f64,
    pub p_sigma: f64,
    /// `⟨a†a + σx/2⟩`
    pub excitation: f64,
    pub excitation_variance: f64,
    pub duality: Complex64,
    pub x2: f64,
    pub p2: f64,
}

/// `A_0 = [(1+|λ|)g/(2ω)]²`.
pub fn a_scale(params: &ModelParams) -> f64 {
    ((1.0 + params.lambda().abs()) * params.g() / (2.0 * params.omega())).powi(2)
}

fn split(state: &SpinFockState, spin: Spin) -> Vec<f64> {
    (0..=state.n_max()).map(|n| state.coeff(n, spin)).collect()
}

/// `⟨a†a†⟩ = Σ_n √((n+1)(n+2)) c_{n+2} c_n` per spin component.
pub fn a_dag_a_dag(state: &SpinFockState) -> f64 {
    [Spin::Plus, Spin::Minus]
        .iter()
        .map(|&s| {
            let c = split(state, s);
            (0..c.len().saturating_sub(2))
                .map(|n| (((n + 1) * (n + 2)) as f64).sqrt() * c[n + 2] * c[n])
                .sum::<f64>()
        })
        .sum()
}

/// `Some(⟨a†a†⟩/A_0)`, or `None` where `A_0` vanishes.
pub fn a_norm(state: &SpinFockState, params: &ModelParams) -> Option<f64> {
    let a0 = a_scale(params);
    (a0 > 0.0).then(|| a_dag_a_dag(state) / a0)
}

/// `(‖x̂ψ‖², ‖p̂ψ‖²)` with `x̂ = (a + a†)/√2` and `p̂ = i(a† - a)/√2`.
fn quadratures(state: &SpinFockState) -> (f64, f64) {
    let mut x2 = 0.0;
    let mut p2 = 0.0;
    for s in [Spin::Plus, Spin::Minus] {
        let c = split(state, s);
        let len = c.len();
        // a c and a† c on levels 0..=len
        let mut lower = vec![0.0; len + 1];
        let mut raise = vec![0.0; len + 1];
        for n in 0..len {
            if n > 0 {
                lower[n - 1] = (n as f64).sqrt() * c[n];
            }
            raise[n + 1] = ((n + 1) as f64).sqrt() * c[n];
        }
        for m in 0..=len {
            let xs = (lower[m] + raise[m]) * std::f64::consts::FRAC_1_SQRT_2;
            let ps = (raise[m] - lower[m]) * std::f64::consts::FRAC_1_SQRT_2;
            x2 += xs * xs;
            p2 += ps * ps;
        }
    }
    (x2, p2)
}

/// Every diagnostic for one state. Rejects states whose norm drifts from one
/// by more than `1e-8`.
pub fn evaluate(state: &SpinFockState, params: &ModelParams) -> Result<ObservableSet> {
    state.check_normalized(1e-8)?;
    let trunc = Truncation::fixed_unchecked(state.n_max());
    let ops = parity_operator(&trunc);
    let exc = excitation_number(&trunc);
    let c = state.coeffs();
    let diag = |d: &[f64]| c.iter().zip(d).map(|(x, v)| x * x * v).sum::<f64>();
    let excitation = diag(&exc);
    let exc_sq: Vec<f64> = exc.iter().map(|e| e * e).collect();
    let (x2, p2) = quadratures(state);
    let a_dag_a_dag = a_dag_a_dag(state);
    let a0 = a_scale(params);
    Ok(ObservableSet {
        a_dag_a_dag,
        a_norm: (a0 > 0.0).then(|| a_dag_a_dag / a0),
        sigma_x: diag(&ops.p_sigma),
        parity: diag(&ops.parity),
        p_x: diag(&ops.p_x),
        p_sigma: diag(&ops.p_sigma),
        excitation,
        excitation_variance: (diag(&exc_sq) - excitation * excitation).max(0.0),
        duality: duality_expectation(state, params)?,
        x2,
        p2,
    })
}
