//! Symmetric tridiagonal eigenproblems: Sturm bisection for eigenvalues,
//! inverse iteration for vectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be n-1");
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Infinity norm, an upper bound on |eigenvalue|.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        sturm_count(&self.diag, &self.off, x)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (lo, hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm_inf().max(1.0);
        bisect_eigenvalue(&self.diag, &self.off, k, lo - pad, hi + pad)
    }

    /// Lowest `k` eigenvalues, counted with multiplicity.
    pub fn lowest_values(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.dim() {
            return Err(Error::TooManyEigenpairs { requested: k, dim: self.dim() });
        }
        Ok((0..k).map(|j| self.eigenvalue(j)).collect())
    }

    /// Lowest `k` eigenpairs in ascending order with orthonormal vectors.
    pub fn lowest(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.dim();
        if k > n {
            return Err(Error::TooManyEigenpairs { requested: k, dim: n });
        }
        let scale = self.norm_inf().max(1.0);

        // Split at negligible couplings so each block is unreduced and has
        // simple eigenvalues.
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 0..n.saturating_sub(1) {
            let tiny = f64::EPSILON * (self.diag[i].abs() + self.diag[i + 1].abs()).max(f64::MIN_POSITIVE);
            if self.off[i].abs() <= tiny {
                blocks.push(start..i + 1);
                start = i + 1;
            }
        }
        blocks.push(start..n);

        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::new();
        for block in blocks {
            let sub = SymTridiagonal {
                diag: self.diag[block.clone()].to_vec(),
                off: self.off[block.start..block.end - 1].to_vec(),
            };
            let take = k.min(sub.dim());
            let values: Vec<f64> = (0..take).map(|j| sub.eigenvalue(j)).collect();
            let mut local: Vec<Vec<f64>> = Vec::with_capacity(take);
            for (j, &value) in values.iter().enumerate() {
                // eigenvalues close to this one, whose vectors need explicit orthogonalization
                let cluster: Vec<&Vec<f64>> = (0..j)
                    .filter(|&i| (values[i] - value).abs() < 1e-8 * scale)
                    .map(|i| &local[i])
                    .collect();
                let v = inverse_iteration(&sub, value, &cluster, scale)?;
                local.push(v);
            }
            for (value, v) in values.into_iter().zip(local) {
                let mut full = vec![0.0; n];
                full[block.clone()].copy_from_slice(&v);
                pairs.push((value, full));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.truncate(k);
        Ok(pairs.into_iter().unzip())
    }
}

pub(crate) fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let coupling = if i > 0 { off[i - 1] * off[i - 1] / q } else { 0.0 };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -f64::MIN_POSITIVE.sqrt();
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalue(diag: &[f64], off: &[f64], k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `(T - shift) y = rhs` by Gaussian elimination with partial pivoting.
fn solve_shifted(t: &SymTridiagonal, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = t.dim();
    if n == 1 {
        let d = t.diag[0] - shift;
        let d = if d == 0.0 { f64::EPSILON } else { d };
        return vec![rhs[0] / d];
    }
    // rows stored as (sub, diag, sup, sup2) after elimination: upper triangular with two super-diagonals
    let mut dia: Vec<f64> = t.diag.iter().map(|d| d - shift).collect();
    let mut sup: Vec<f64> = t.off.clone();
    sup.push(0.0);
    let mut sup2 = vec![0.0; n];
    let mut b = rhs.to_vec();
    let tiny = f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);

    let mut sub_next: Vec<f64> = t.off.clone();
    for i in 0..n - 1 {
        let sub = sub_next[i];
        if sub.abs() > dia[i].abs() {
            // swap rows i and i+1
            let (d_i, s_i, s2_i, b_i) = (dia[i], sup[i], sup2[i], b[i]);
            dia[i] = sub;
            sup[i] = dia[i + 1];
            sup2[i] = sup[i + 1];
            b[i] = b[i + 1];
            let m = d_i / sub;
            dia[i + 1] = s_i - m * sup[i];
            sup[i + 1] = s2_i - m * sup2[i];
            b[i + 1] = b_i - m * b[i];
        } else {
            if dia[i] == 0.0 {
                dia[i] = tiny;
            }
            let m = sub / dia[i];
            dia[i + 1] -= m * sup[i];
            sup[i + 1] -= m * sup2[i];
            b[i + 1] -= m * b[i];
        }
        sub_next[i] = 0.0;
    }
    if dia[n - 1] == 0.0 {
        dia[n - 1] = tiny;
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= sup[i] * y[i + 1];
        }
        if i + 2 < n {
            acc -= sup2[i] * y[i + 2];
        }
        y[i] = acc / dia[i];
    }
    y
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn inverse_iteration(t: &SymTridiagonal, value: f64, cluster: &[&Vec<f64>], scale: f64) -> Result<Vec<f64>> {
    let n = t.dim();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    // deterministic, non-degenerate start
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract()).collect();
    normalize(&mut v);
    let target = 1e-12 * scale.max(value.abs());
    let mut residual = f64::INFINITY;
    for _ in 0..12 {
        let mut y = solve_shifted(t, value, &v);
        for _ in 0..2 {
            for u in cluster {
                let proj: f64 = y.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                y.iter_mut().zip(u.iter()).for_each(|(a, b)| *a -= proj * b);
            }
        }
        if normalize(&mut y) == 0.0 || y.iter().any(|x| !x.is_finite()) {
            break;
        }
        v = y;
        let tv = t.matvec(&v);
        residual = tv.iter().zip(&v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
        if residual <= target {
            return Ok(v);
        }
    }
    if residual <= 1e-9 * scale.max(value.abs()) {
        return Ok(v);
    }
    Err(Error::NoConvergence { iterations: 12, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense(t: &SymTridiagonal) -> DMatrix<f64> {
        let n = t.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = t.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = t.off[i];
                m[(i + 1, i)] = t.off[i];
            }
        }
        m
    }

    #[test]
    fn matches_dense_solver() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() * 3.0 + i as f64 * 0.1).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + (i as f64 * 1.3).cos()).collect();
        let t = SymTridiagonal::new(diag, off);
        let mut reference: Vec<f64> = dense(&t).symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let (vals, vecs) = t.lowest(6).unwrap();
        for (k, (v, vec)) in vals.iter().zip(&vecs).enumerate() {
            assert!((v - reference[k]).abs() < 1e-12, "{k}: {v} vs {}", reference[k]);
            let tv = t.matvec(vec);
            let res: f64 = tv.iter().zip(vec).map(|(a, b)| (a - v * b).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-10);
        }
        for i in 0..6 {
            for j in 0..6 {
                let d: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_decoupled_blocks() {
        // two identical blocks glued by a zero coupling
        let t = SymTridiagonal::new(vec![1.0, 2.0, 1.0, 2.0], vec![0.5, 0.0, 0.5]);
        let (vals, vecs) = t.lowest(2).unwrap();
        assert!((vals[0] - vals[1]).abs() < 1e-14);
        let d: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn diagonal_matrix() {
        let t = SymTridiagonal::new(vec![3.0, -1.0, 2.0], vec![0.0, 0.0]);
        let (vals, vecs) = t.lowest(3).unwrap();
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
        assert_eq!(vecs[0][1].abs(), 1.0);
    }

    #[test]
    fn sturm_counts() {
        let t = SymTridiagonal::new(vec![0.0, 0.0], vec![1.0]);
        assert_eq!(t.count_below(-1.5), 0);
        assert_eq!(t.count_below(0.0), 1);
        assert_eq!(t.count_below(1.5), 2);
    }
}
