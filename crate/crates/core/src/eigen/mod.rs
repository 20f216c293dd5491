//! Low-lying eigenpairs of the full Hamiltonian and of its parity blocks.
//!
//! The full matrix is solved densely up to [`DENSE_LIMIT`] and by Lanczos
//! above it. Parity blocks are tridiagonal and go through Sturm bisection,
//! which is what the scanning and boundary code uses.

mod dd;
pub mod lanczos;
mod tridiag;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

pub use dd::{resolve_splitting, Splitting};
pub use lanczos::LanczosOptions;
pub use tridiag::SymTridiagonal;

use crate::error::{Error, Result};
use crate::model::{sector_block, SpinFockMatrix};
use crate::params::{ModelParams, Truncation};
use crate::state::{fix_sign, Parity, SpinFockState};

/// Largest dimension solved by dense diagonalization.
pub const DENSE_LIMIT: usize = 512;

/// Relative splitting below which the f64 sector comparison is re-done in
/// double-double arithmetic.
const REFINE_BELOW: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorTag {
    Full,
    Even,
    Odd,
}

impl From<Parity> for SectorTag {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => SectorTag::Even,
            Parity::Odd => SectorTag::Odd,
        }
    }
}

/// Ascending eigenvalues with full-space eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub energies: Vec<f64>,
    pub vectors: Vec<SpinFockState>,
    pub sector: SectorTag,
    pub params: ModelParams,
    pub truncation: Truncation,
}

impl EigenSolution {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn ground_state(&self) -> &SpinFockState {
        &self.vectors[0]
    }

    pub fn gap(&self) -> Option<f64> {
        (self.energies.len() >= 2).then(|| self.energies[1] - self.energies[0])
    }

    /// Largest `‖Hv - Ev‖ / max(1, |E|)` over the stored pairs.
    pub fn max_relative_residual(&self, h: &SpinFockMatrix) -> f64 {
        self.energies
            .iter()
            .zip(&self.vectors)
            .map(|(&e, v)| {
                let hv = h.apply(v.coeffs());
                let r: f64 = hv.iter().zip(v.coeffs()).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
                r / e.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - expect).abs());
            }
        }
        worst
    }
}

fn finish(vectors: Vec<Vec<f64>>) -> Result<Vec<SpinFockState>> {
    vectors
        .into_iter()
        .map(|mut v| {
            fix_sign(&mut v);
            SpinFockState::new(v)
        })
        .collect()
}

/// The `k` lowest eigenpairs of the full Hamiltonian.
pub fn lowest_k(h: &SpinFockMatrix, k: usize) -> Result<EigenSolution> {
    if h.dim() <= DENSE_LIMIT {
        lowest_k_dense(h, k)
    } else {
        lowest_k_lanczos(h, k, &LanczosOptions::default())
    }
}

pub fn lowest_k_dense(h: &SpinFockMatrix, k: usize) -> Result<EigenSolution> {
    let dim = h.dim();
    if k > dim {
        return Err(Error::TooManyEigenpairs { requested: k, dim });
    }
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(k);
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    Ok(EigenSolution {
        energies,
        vectors: finish(vectors)?,
        sector: SectorTag::Full,
        params: *h.params(),
        truncation: *h.truncation(),
    })
}

pub fn lowest_k_lanczos(h: &SpinFockMatrix, k: usize, opts: &LanczosOptions) -> Result<EigenSolution> {
    let (energies, vectors) = lanczos::lowest_eigenpairs(h.dim(), k, |x, y| h.matvec(x, y), opts)?;
    Ok(EigenSolution {
        energies,
        vectors: finish(vectors)?,
        sector: SectorTag::Full,
        params: *h.params(),
        truncation: *h.truncation(),
    })
}

/// Lowest `k` pairs of one parity block, vectors mapped to the full basis.
pub fn sector_spectrum(params: &ModelParams, truncation: &Truncation, parity: Parity, k: usize) -> Result<EigenSolution> {
    let block = sector_block(params, truncation, parity)?;
    let (energies, local) = block.matrix.lowest(k)?;
    let full_dim = truncation.dim();
    let vectors = local.iter().map(|v| block.embed(v, full_dim)).collect();
    Ok(EigenSolution {
        energies,
        vectors: finish(vectors)?,
        sector: parity.into(),
        params: *params,
        truncation: *truncation,
    })
}

/// Lowest eigenpair inside one parity block.
pub fn sector_ground(params: &ModelParams, truncation: &Truncation, parity: Parity) -> Result<(f64, SpinFockState)> {
    let mut sol = sector_spectrum(params, truncation, parity, 1)?;
    Ok((sol.energies[0], sol.vectors.swap_remove(0)))
}

/// Sector-resolved ground state with the two lowest levels of each block.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub parity: Parity,
    pub state: SpinFockState,
    /// `E0(even) - E0(odd)`, refined in extended precision when tiny.
    pub splitting: Splitting,
    pub even_levels: [f64; 2],
    pub odd_levels: [f64; 2],
}

fn two_levels(params: &ModelParams, truncation: &Truncation, parity: Parity) -> Result<[f64; 2]> {
    let block = sector_block(params, truncation, parity)?;
    let v = block.matrix.lowest_values(2)?;
    Ok([v[0], v[1]])
}

/// Compares the two block ground energies, going to double-double when the
/// f64 values are too close to order reliably.
pub fn sector_splitting(params: &ModelParams, truncation: &Truncation, e_even: f64, e_odd: f64) -> Splitting {
    let diff = e_even - e_odd;
    if diff.abs() > REFINE_BELOW * e_even.abs().max(1.0) {
        Splitting { value: diff, resolved: true }
    } else {
        resolve_splitting(params, truncation, e_even, e_odd)
    }
}

/// Ground state, first excitation and gap from the two parity blocks.
///
/// When the block grounds are closer than arithmetic can resolve, the odd
/// block is reported and `splitting.resolved` is false.
pub fn ground_state(params: &ModelParams, truncation: &Truncation) -> Result<GroundState> {
    let even_levels = two_levels(params, truncation, Parity::Even)?;
    let odd_levels = two_levels(params, truncation, Parity::Odd)?;
    let splitting = sector_splitting(params, truncation, even_levels[0], odd_levels[0]);
    let parity = if splitting.resolved && splitting.value < 0.0 { Parity::Even } else { Parity::Odd };
    let (own, other) = match parity {
        Parity::Even => (even_levels, odd_levels),
        Parity::Odd => (odd_levels, even_levels),
    };
    let e0 = own[0];
    let (e1, gap) = if other[0] <= own[1] {
        (other[0], splitting.value.abs())
    } else {
        (own[1], own[1] - own[0])
    };
    let (_, state) = sector_ground(params, truncation, parity)?;
    Ok(GroundState { e0, e1, gap, parity, state, splitting, even_levels, odd_levels })
}

/// First-excitation gap `E1 - E0`.
pub fn gap(params: &ModelParams, truncation: &Truncation) -> Result<f64> {
    let even = two_levels(params, truncation, Parity::Even)?;
    let odd = two_levels(params, truncation, Parity::Odd)?;
    let mut all = [even[0], even[1], odd[0], odd[1]];
    all.sort_by(f64::total_cmp);
    let cross_pair = (all[0] == even[0] && all[1] == odd[0]) || (all[0] == odd[0] && all[1] == even[0]);
    if cross_pair {
        Ok(sector_splitting(params, truncation, even[0], odd[0]).value.abs())
    } else {
        Ok(all[1] - all[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    #[test]
    fn decoupled_levels() {
        let p = ModelParams::new(0.3, 1.0, 0.0, 0.7).unwrap();
        let t = Truncation::adaptive(&p);
        let h = build_hamiltonian(&p, &t).unwrap();
        let sol = lowest_k(&h, 3).unwrap();
        assert_eq!(sol.energies[0], -0.5);
        assert!((sol.energies[1] - (0.3 - 0.5)).abs() < 1e-14);
        let gs = ground_state(&p, &t).unwrap();
        assert_eq!(gs.parity, Parity::Odd);
        assert!((gs.gap - 0.3).abs() < 1e-14);
    }

    #[test]
    fn sector_grounds_at_zero_coupling() {
        let p = ModelParams::new(0.4, 1.0, 0.0, 1.0).unwrap();
        let t = Truncation::adaptive(&p);
        let (e_odd, _) = sector_ground(&p, &t, Parity::Odd).unwrap();
        let (e_even, v) = sector_ground(&p, &t, Parity::Even).unwrap();
        assert_eq!(e_odd, -0.5);
        assert!((e_even - (0.4 - 0.5)).abs() < 1e-14);
        assert_eq!(v.coeff(1, crate::state::Spin::Minus), 1.0);
    }

    #[test]
    fn dense_and_lanczos_agree() {
        let p = ModelParams::new(0.5, 1.0, 0.9, 0.6).unwrap();
        let h = build_hamiltonian(&p, &Truncation::fixed(120)).unwrap();
        let a = lowest_k_dense(&h, 5).unwrap();
        let b = lowest_k_lanczos(&h, 5, &LanczosOptions::default()).unwrap();
        for (x, y) in a.energies.iter().zip(&b.energies) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        assert!(b.max_relative_residual(&h) < 1e-9);
        assert!(b.orthonormality_error() < 1e-10);
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let p = ModelParams::new(0.5, 1.0, 0.7, 0.3).unwrap();
        let t = Truncation::adaptive(&p);
        let (_, v) = sector_ground(&p, &t, Parity::Odd).unwrap();
        let big = v.coeffs().iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        assert!(big > 0.0);
        let (_, w) = sector_ground(&p, &t, Parity::Odd).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn too_many_pairs() {
        let p = ModelParams::new(0.5, 1.0, 0.1, 0.3).unwrap();
        let h = build_hamiltonian(&p, &Truncation::fixed_unchecked(3)).unwrap();
        assert!(matches!(lowest_k(&h, 9), Err(Error::TooManyEigenpairs { .. })));
    }
}
