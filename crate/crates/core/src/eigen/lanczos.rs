//! Lanczos iteration with full reorthogonalization and locking.
//!
//! Each run starts from a seeded random vector orthogonal to the already
//! locked eigenvectors, so repeated runs also pick up degenerate partners
//! that a single Krylov space cannot see.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative residual target `‖Hv - Ev‖ / max(1, |E|)`.
    pub tol: f64,
    /// Krylov dimension cap per run.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-11, max_iter: 800, seed: 0x5eed_1a2c }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for u in basis {
            let c = dot(v, u);
            axpy(-c, u, v);
        }
    }
}

struct Run {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
}

fn krylov_run<F>(dim: usize, op: &F, locked: &[Vec<f64>], opts: &LanczosOptions, rng: &mut ChaCha8Rng) -> Run
where
    F: Fn(&[f64], &mut [f64]),
{
    let room = dim - locked.len();
    let max_m = opts.max_iter.min(room).max(1);

    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut v, locked);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];

    let ritz = |alpha: &[f64], beta: &[f64]| {
        let m = alpha.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        (eig, order)
    };

    let mut last_beta;
    loop {
        let j = alpha.len();
        op(&basis[j], &mut w);
        project_out(&mut w, locked);
        let a = dot(&w, &basis[j]);
        axpy(-a, &basis[j].clone(), &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1].clone(), &mut w);
        }
        project_out(&mut w, &basis);
        project_out(&mut w, locked);
        alpha.push(a);
        let b = norm(&w);
        last_beta = b;

        let m = alpha.len();
        let exhausted = m >= max_m || b < 1e-13 * a.abs().max(1.0);
        if exhausted || m.is_multiple_of(8) {
            let (eig, order) = ritz(&alpha, &beta);
            let theta = eig.eigenvalues[order[0]];
            let est = b * eig.eigenvectors[(m - 1, order[0])].abs();
            if exhausted || est < opts.tol * theta.abs().max(1.0) {
                break;
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }

    let (eig, order) = ritz(&alpha, &beta);
    let m = alpha.len();
    let mut run = Run { values: Vec::new(), vectors: Vec::new(), residuals: Vec::new() };
    for &col in &order {
        let theta = eig.eigenvalues[col];
        let est = last_beta * eig.eigenvectors[(m - 1, col)].abs();
        let mut y = vec![0.0; dim];
        for (i, q) in basis.iter().enumerate().take(m) {
            axpy(eig.eigenvectors[(i, col)], q, &mut y);
        }
        project_out(&mut y, locked);
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        run.values.push(theta);
        run.vectors.push(y);
        run.residuals.push(est);
    }
    run
}

/// Lowest `k` eigenpairs of the symmetric operator `op` on `R^dim`.
pub fn lowest_eigenpairs<F>(dim: usize, k: usize, op: F, opts: &LanczosOptions) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    if k > dim {
        return Err(Error::TooManyEigenpairs { requested: k, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked_vals: Vec<f64> = Vec::new();
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut hv = vec![0.0; dim];

    while locked.len() < dim {
        let run = krylov_run(dim, &op, &locked, opts, &mut rng);
        if run.values.is_empty() {
            break;
        }
        let lowest = run.values[0];
        if locked.len() >= k {
            let mut sorted = locked_vals.clone();
            sorted.sort_by(f64::total_cmp);
            let kth = sorted[k - 1];
            if lowest >= kth - opts.tol * kth.abs().max(1.0) {
                break;
            }
        }
        let mut took = 0;
        for ((theta, y), est) in run.values.iter().zip(run.vectors).zip(&run.residuals) {
            if *est > 100.0 * opts.tol * theta.abs().max(1.0) {
                break;
            }
            op(&y, &mut hv);
            let res = hv.iter().zip(&y).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt();
            if res > 1e-9 * theta.abs().max(1.0) {
                break;
            }
            locked_vals.push(*theta);
            locked.push(y);
            took += 1;
        }
        if took == 0 {
            return Err(Error::NoConvergence { iterations: opts.max_iter, residual: run.residuals[0] });
        }
    }

    let mut order: Vec<usize> = (0..locked.len()).collect();
    order.sort_by(|&a, &b| locked_vals[a].total_cmp(&locked_vals[b]));
    order.truncate(k);
    let values = order.iter().map(|&i| locked_vals[i]).collect();
    let vectors = order.iter().map(|&i| locked[i].clone()).collect();
    Ok((values, vectors))
}
