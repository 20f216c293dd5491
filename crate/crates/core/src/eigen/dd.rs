//! Extended-precision comparison of the two parity-block ground energies.
//!
//! Deep in the two-packet regime the even/odd ground energies differ by
//! roughly `Ω exp(-d²)` with `d` the packet displacement, which drops below
//! f64 resolution long before the level crossings of interest. The blocks are
//! rebuilt in double-double arithmetic and their lowest eigenvalues are
//! bracketed by Sturm counts until the brackets separate.

use twofloat::TwoFloat;

use crate::params::{ModelParams, Truncation};
use crate::state::Parity;

/// Unit roundoff of double-double arithmetic, 2^-104.
const DD_EPS: f64 = 4.930_380_657_631_324e-32;

/// Sign-resolved difference `E0(even) - E0(odd)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub value: f64,
    /// False when the difference sits below the arithmetic noise floor and
    /// its sign cannot be trusted.
    pub resolved: bool,
}

/// `a / b` to full double-double accuracy. `TwoFloat` division alone is
/// only good to about f64 precision, so one residual correction is applied.
fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    let r = a - q * b;
    q + f64::from(r) / f64::from(b)
}

struct DdBlock {
    diag: Vec<TwoFloat>,
    off_sq: Vec<TwoFloat>,
    norm: f64,
}

impl DdBlock {
    fn new(params: &ModelParams, n_max: usize, parity: Parity) -> Self {
        let omega = TwoFloat::from(params.omega());
        let half_qubit = TwoFloat::from(params.qubit_splitting()) / 2.0;
        let g2 = TwoFloat::new_mul(params.g(), params.g());
        let g2l2 = g2 * TwoFloat::new_mul(params.lambda(), params.lambda());
        let mut diag = Vec::with_capacity(n_max + 1);
        let mut off_sq = Vec::with_capacity(n_max);
        let mut norm = 0.0f64;
        for n in 0..=n_max {
            let spin = parity.spin_at(n);
            let d = omega * TwoFloat::from(n as f64) + half_qubit * spin.sign();
            diag.push(d);
            if n < n_max {
                let base = match spin {
                    crate::state::Spin::Plus => g2,
                    crate::state::Spin::Minus => g2l2,
                };
                off_sq.push(base * TwoFloat::from((n + 1) as f64));
            }
            let couplings = params.g() * (((n + 1) as f64).sqrt() + (n as f64).sqrt());
            norm = norm.max(f64::from(d).abs() + couplings);
        }
        Self { diag, off_sq, norm }
    }

    fn count_below(&self, x: TwoFloat) -> usize {
        let mut count = 0;
        let mut q = TwoFloat::from(1.0);
        let tiny = TwoFloat::from(1e-150);
        for i in 0..self.diag.len() {
            q = if i > 0 { self.diag[i] - x - div(self.off_sq[i - 1], q) } else { self.diag[i] - x };
            if q == TwoFloat::from(0.0) {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Bracket `[lo, hi]` around the lowest eigenvalue starting from an f64 estimate.
    fn bracket(&self, estimate: f64) -> (TwoFloat, TwoFloat) {
        let mut delta = 64.0 * f64::EPSILON * self.norm.max(1.0);
        loop {
            let lo = TwoFloat::from(estimate) - delta;
            let hi = TwoFloat::from(estimate) + delta;
            if self.count_below(lo) == 0 && self.count_below(hi) >= 1 {
                return (lo, hi);
            }
            delta *= 16.0;
        }
    }
}

/// Resolves the sign of `E0(even) - E0(odd)` given f64 estimates of both.
pub fn resolve_splitting(params: &ModelParams, truncation: &Truncation, e_even: f64, e_odd: f64) -> Splitting {
    let even = DdBlock::new(params, truncation.n_max, Parity::Even);
    let odd = DdBlock::new(params, truncation.n_max, Parity::Odd);
    let floor = 32.0 * DD_EPS * (even.norm.max(odd.norm) + e_even.abs()).max(1.0);

    let (mut lo_e, mut hi_e) = even.bracket(e_even);
    let (mut lo_o, mut hi_o) = odd.bracket(e_odd);
    let step = |block: &DdBlock, lo: &mut TwoFloat, hi: &mut TwoFloat| {
        let mid = (*lo + *hi) / 2.0;
        if block.count_below(mid) >= 1 {
            *hi = mid;
        } else {
            *lo = mid;
        }
    };
    let width = |lo: TwoFloat, hi: TwoFloat| f64::from(hi - lo);

    let mut extra = 0;
    for _ in 0..600 {
        let separated = hi_e < lo_o || hi_o < lo_e;
        let mid_e = (lo_e + hi_e) / 2.0;
        let mid_o = (lo_o + hi_o) / 2.0;
        let diff = f64::from(mid_e - mid_o);
        let w = width(lo_e, hi_e).max(width(lo_o, hi_o));
        if separated {
            // a few more halvings pin the magnitude to better than a percent
            if w < 1e-3 * diff.abs() || extra >= 24 {
                return Splitting { value: diff, resolved: true };
            }
            extra += 1;
        } else if w < floor {
            return Splitting { value: diff, resolved: false };
        }
        if width(lo_e, hi_e) >= width(lo_o, hi_o) {
            step(&even, &mut lo_e, &mut hi_e);
        } else {
            step(&odd, &mut lo_o, &mut hi_o);
        }
    }
    Splitting { value: f64::from((lo_e + hi_e) / 2.0 - (lo_o + hi_o) / 2.0), resolved: false }
}
