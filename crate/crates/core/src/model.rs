//! Hamiltonian assembly in the truncated spin-Fock basis.
//!
//! With σ̃₊ = |+x⟩⟨-x| the Hamiltonian is real:
//!
//! ```text
//! ⟨n,s|H|n,s⟩         = ωn + sΩ/2
//! ⟨n+1,-x|H|n,+x⟩     = g √(n+1)        (rotating)
//! ⟨n+1,+x|H|n,-x⟩     = gλ √(n+1)       (counter-rotating)
//! ```
//!
//! Every coupling flips the spin and changes `n` by one, so `P = σx(-1)^n`
//! is conserved and each parity block is tridiagonal when ordered by `n`.

use nalgebra::DMatrix;

use crate::eigen::SymTridiagonal;
use crate::error::Result;
use crate::params::{ModelParams, Truncation};
use crate::state::{basis_index, basis_label, Parity, Spin};

/// Real symmetric Hamiltonian in compressed-row storage.
#[derive(Debug, Clone)]
pub struct SpinFockMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    params: ModelParams,
    truncation: Truncation,
}

/// Assembles `H` after checking the truncation against the adaptive floor.
pub fn build_hamiltonian(params: &ModelParams, truncation: &Truncation) -> Result<SpinFockMatrix> {
    truncation.validate(params)?;
    let n_max = truncation.n_max;
    let dim = truncation.dim();
    let (omega, qubit, g, lambda) = (params.omega(), params.qubit_splitting(), params.g(), params.lambda());

    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::with_capacity(3 * dim);
    let mut vals = Vec::with_capacity(3 * dim);
    row_ptr.push(0);
    for row in 0..dim {
        let (n, spin) = basis_label(row);
        // neighbours in ascending column order: (n-1, -s), (n, s), (n+1, -s)
        if n > 0 {
            let amp = coupling(spin.flip(), g, lambda) * (n as f64).sqrt();
            cols.push(basis_index(n - 1, spin.flip()));
            vals.push(amp);
        }
        cols.push(row);
        vals.push(omega * n as f64 + spin.sign() * qubit / 2.0);
        if n < n_max {
            let amp = coupling(spin, g, lambda) * ((n + 1) as f64).sqrt();
            cols.push(basis_index(n + 1, spin.flip()));
            vals.push(amp);
        }
        row_ptr.push(cols.len());
    }
    Ok(SpinFockMatrix { dim, row_ptr, cols, vals, params: *params, truncation: *truncation })
}

/// Amplitude for raising `n` by one starting from spin `from`.
fn coupling(from: Spin, g: f64, lambda: f64) -> f64 {
    match from {
        Spin::Plus => g,
        Spin::Minus => g * lambda,
    }
}

impl SpinFockMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or(0.0)
    }

    pub fn max_row_nnz(&self) -> usize {
        self.row_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Largest `|H_ij - H_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `max |[H, D]_ij|` for a diagonal operator `D`.
    pub fn commutator_with_diagonal(&self, diag: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v * (diag[j] - diag[i])).abs());
            }
        }
        worst
    }
}

/// Diagonal symmetry operators of the model.
#[derive(Debug, Clone)]
pub struct ParityOperators {
    /// `σx (-1)^n`
    pub parity: Vec<f64>,
    /// `(-1)^n`, spatial inversion
    pub p_x: Vec<f64>,
    /// `σx`, spin reversal
    pub p_sigma: Vec<f64>,
}

pub fn parity_operator(truncation: &Truncation) -> ParityOperators {
    let dim = truncation.dim();
    let mut out = ParityOperators {
        parity: Vec::with_capacity(dim),
        p_x: Vec::with_capacity(dim),
        p_sigma: Vec::with_capacity(dim),
    };
    for i in 0..dim {
        let (n, spin) = basis_label(i);
        let px = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.p_x.push(px);
        out.p_sigma.push(spin.sign());
        out.parity.push(px * spin.sign());
    }
    out
}

/// Diagonal of the JCM excitation number `a†a + σx/2`.
pub fn excitation_number(truncation: &Truncation) -> Vec<f64> {
    (0..truncation.dim())
        .map(|i| {
            let (n, spin) = basis_label(i);
            n as f64 + 0.5 * spin.sign()
        })
        .collect()
}

/// One parity block, stored tridiagonally with its map into the full basis.
#[derive(Debug, Clone)]
pub struct SectorBlock {
    pub parity: Parity,
    pub matrix: SymTridiagonal,
    /// `indices[k]` is the full-space index of sector state `k` (level `n = k`).
    pub indices: Vec<usize>,
}

impl SectorBlock {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Scatters a sector vector into the full basis.
    pub fn embed(&self, v: &[f64], full_dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; full_dim];
        for (&idx, &x) in self.indices.iter().zip(v) {
            out[idx] = x;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ParitySectors {
    pub even: SectorBlock,
    pub odd: SectorBlock,
}

impl ParitySectors {
    pub fn block(&self, parity: Parity) -> &SectorBlock {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

/// Splits an assembled Hamiltonian into its two parity blocks.
pub fn parity_sectors(h: &SpinFockMatrix) -> ParitySectors {
    let n_max = h.truncation().n_max;
    let extract = |parity: Parity| {
        let indices: Vec<usize> = (0..=n_max).map(|n| basis_index(n, parity.spin_at(n))).collect();
        let diag = indices.iter().map(|&i| h.get(i, i)).collect();
        let off = indices.windows(2).map(|w| h.get(w[0], w[1])).collect();
        SectorBlock { parity, matrix: SymTridiagonal::new(diag, off), indices }
    };
    ParitySectors { even: extract(Parity::Even), odd: extract(Parity::Odd) }
}

/// Builds one parity block directly from the parameters.
pub fn sector_block(params: &ModelParams, truncation: &Truncation, parity: Parity) -> Result<SectorBlock> {
    truncation.validate(params)?;
    let n_max = truncation.n_max;
    let mut diag = Vec::with_capacity(n_max + 1);
    let mut off = Vec::with_capacity(n_max);
    let mut indices = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let spin = parity.spin_at(n);
        diag.push(params.omega() * n as f64 + spin.sign() * params.qubit_splitting() / 2.0);
        if n < n_max {
            off.push(coupling(spin, params.g(), params.lambda()) * ((n + 1) as f64).sqrt());
        }
        indices.push(basis_index(n, spin));
    }
    Ok(SectorBlock { parity, matrix: SymTridiagonal::new(diag, off), indices })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(g: f64, lambda: f64, n_max: usize) -> SpinFockMatrix {
        let p = ModelParams::new(0.5, 1.0, g, lambda).unwrap();
        build_hamiltonian(&p, &Truncation::fixed_unchecked(n_max)).unwrap()
    }

    #[test]
    fn diagonal_entries() {
        let h = small(0.3, 0.4, 8);
        assert_eq!(h.get(basis_index(0, Spin::Plus), basis_index(0, Spin::Plus)), 0.5);
        assert_eq!(h.get(basis_index(0, Spin::Minus), basis_index(0, Spin::Minus)), -0.5);
        assert_eq!(h.get(basis_index(3, Spin::Minus), basis_index(3, Spin::Minus)), 1.0);
    }

    #[test]
    fn coupling_entries() {
        let (g, lambda) = (0.3, 0.4);
        let h = small(g, lambda, 8);
        assert_eq!(h.get(basis_index(1, Spin::Minus), basis_index(0, Spin::Plus)), g);
        assert_eq!(h.get(basis_index(1, Spin::Plus), basis_index(0, Spin::Minus)), g * lambda);
        assert_eq!(h.get(basis_index(4, Spin::Minus), basis_index(3, Spin::Plus)), g * 2.0);
        // no same-spin coupling
        assert_eq!(h.get(basis_index(1, Spin::Plus), basis_index(0, Spin::Plus)), 0.0);
    }

    #[test]
    fn exactly_symmetric_and_sparse() {
        let h = small(0.7, -0.35, 30);
        assert_eq!(h.max_asymmetry(), 0.0);
        assert!(h.max_row_nnz() <= 5);
        assert_eq!(h.dim(), 62);
    }

    #[test]
    fn parity_values() {
        let ops = parity_operator(&Truncation::fixed(5));
        assert_eq!(ops.parity[basis_index(0, Spin::Minus)], -1.0);
        assert_eq!(ops.parity[basis_index(3, Spin::Plus)], -1.0);
        for i in 0..12 {
            assert_eq!(ops.parity[i], ops.p_x[i] * ops.p_sigma[i]);
        }
    }

    #[test]
    fn parity_commutes() {
        for &(g, lambda) in &[(0.1, 1.0), (0.9, -0.6), (2.0, 0.0), (1.3, 0.37)] {
            let h = small(g, lambda, 40);
            let ops = parity_operator(h.truncation());
            assert_eq!(h.commutator_with_diagonal(&ops.parity), 0.0);
        }
    }

    #[test]
    fn excitation_commutes_only_at_zero_anisotropy() {
        let jc = small(0.8, 0.0, 30);
        let n = excitation_number(jc.truncation());
        assert_eq!(jc.commutator_with_diagonal(&n), 0.0);
        let ar = small(0.8, 0.2, 30);
        assert!(ar.commutator_with_diagonal(&n) > 0.1);
        // the literal a†a + σx is not conserved by the rotating-wave model
        let literal: Vec<f64> = (0..jc.dim())
            .map(|i| {
                let (n, s) = basis_label(i);
                n as f64 + s.sign()
            })
            .collect();
        assert!(jc.commutator_with_diagonal(&literal) > 0.1);
    }

    /// At λ = 0 the coupling graph links `|n,+x⟩` only to `|n+1,-x⟩`.
    #[test]
    fn jc_connectivity_by_reachability() {
        let h = small(0.6, 0.0, 12);
        let dim = h.dim();
        let mut component = vec![usize::MAX; dim];
        let mut next = 0;
        for start in 0..dim {
            if component[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            component[start] = next;
            while let Some(i) = stack.pop() {
                for (j, v) in h.row(i) {
                    if v != 0.0 && component[j] == usize::MAX {
                        component[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        for i in 0..dim {
            let (n, s) = basis_label(i);
            let members: Vec<usize> = (0..dim).filter(|&j| component[j] == component[i]).collect();
            match (s, n) {
                (Spin::Minus, 0) => assert_eq!(members, vec![i]),
                (Spin::Plus, n) if n < 12 => {
                    assert_eq!(members, vec![i, basis_index(n + 1, Spin::Minus)]);
                }
                _ => assert!(members.len() <= 2),
            }
        }
    }

    #[test]
    fn sector_dimensions_and_agreement() {
        let h = small(0.9, 0.45, 25);
        let sectors = parity_sectors(&h);
        assert_eq!(sectors.even.dim() + sectors.odd.dim(), h.dim());
        let direct = sector_block(h.params(), h.truncation(), Parity::Odd).unwrap();
        assert_eq!(direct.matrix, sectors.odd.matrix);
        assert_eq!(direct.indices, sectors.odd.indices);
        let ops = parity_operator(h.truncation());
        assert!(sectors.even.indices.iter().all(|&i| ops.parity[i] == 1.0));
        assert!(sectors.odd.indices.iter().all(|&i| ops.parity[i] == -1.0));
    }
}
