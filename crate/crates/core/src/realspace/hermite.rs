//! Harmonic-oscillator eigenfunctions
//!
//! `φ_n(x) = (2^n n! √π)^{-1/2} H_n(x) e^{-x²/2}` via the normalized recurrence
//!
//! ```text
//! φ_{n+1} = √(2/(n+1)) x φ_n - √(n/(n+1)) φ_{n-1}
//! ```
//!
//! The Gaussian factor is carried as a separate exponent so that neither the
//! seed underflows far from the origin nor the polynomial part overflows for
//! large `n`.

const RESCALE_ABOVE: f64 = 1e150;

/// Streams `φ_0(x) .. φ_{n_max}(x)` to `visit(n, value)`.
pub fn for_each_hermite<F: FnMut(usize, f64)>(n_max: usize, x: f64, mut visit: F) {
    // value = mantissa * exp(log_scale)
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    visit(0, cur * log_scale.exp());
    for n in 0..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev /= RESCALE_ABOVE;
            cur /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
        visit(n + 1, cur * log_scale.exp());
    }
}

/// `φ_0(x) .. φ_{n_max}(x)` as a vector.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    for_each_hermite(n_max, x, |n, v| out[n] = v);
    out
}

/// `Σ_n c_n φ_n(x)` for two coefficient sets sharing one recurrence pass.
pub fn expand_pair(a: &[f64], b: &[f64], x: f64) -> (f64, f64) {
    let n_max = a.len().max(1) - 1;
    let (mut sa, mut sb) = (0.0, 0.0);
    for_each_hermite(n_max, x, |n, v| {
        sa += a[n] * v;
        sb += b[n] * v;
    });
    (sa, sb)
}
