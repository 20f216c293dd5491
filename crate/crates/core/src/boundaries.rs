//! Transition boundaries: closed forms, the two-packet channel energies, and
//! numerical detection from parity-sector level crossings.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{ground_state, sector_splitting, Splitting, SymTridiagonal};
use crate::error::{Error, Result};
use crate::model::sector_block;
use crate::observables::evaluate;
use crate::params::{ModelParams, Truncation};
use crate::state::Parity;

/// Coupling value that may diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    Finite(f64),
    Infinite,
}

impl Coupling {
    pub fn value(self) -> Option<f64> {
        match self {
            Coupling::Finite(v) => Some(v),
            Coupling::Infinite => None,
        }
    }
}

/// Conventional transition `g_c = 2 g_s/(1+|λ|)`.
pub fn g_c(lambda: f64, params: &ModelParams) -> f64 {
    2.0 * params.g_s() / (1.0 + lambda.abs())
}

/// First topological transition `g_T1 = 2 g_s/√(1-λ²)`, infinite at |λ| = 1.
pub fn g_t1(lambda: f64, params: &ModelParams) -> Coupling {
    let s = 1.0 - lambda * lambda;
    if s <= 0.0 {
        Coupling::Infinite
    } else {
        Coupling::Finite(2.0 * params.g_s() / s.sqrt())
    }
}

/// Inverse of [`g_t1`] on `λ ≥ 0`: `√(1 - 4g_s²/g²)`, defined for `g ≥ 2g_s`.
pub fn lambda_t1(g: f64, params: &ModelParams) -> Result<f64> {
    let gs = params.g_s();
    if g.is_nan() || g < 2.0 * gs {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: format!("lambda_T1 needs g >= 2 g_s = {}, got {g}", 2.0 * gs),
        });
    }
    Ok((1.0 - 4.0 * gs * gs / (g * g)).max(0.0).sqrt())
}

/// Spin-up component `α φ_α + β φ_β` with Gaussian packets of width `σ`
/// centred at `-d` (α) and `+d` (β).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPacketAnsatz {
    pub alpha: f64,
    pub beta: f64,
    pub displacement: f64,
    pub packet_width: f64,
}

impl TwoPacketAnsatz {
    /// Equal weights, packets at `±g_z'`, unit width, normalized.
    pub fn for_params(params: &ModelParams) -> Self {
        let mut a = Self { alpha: 1.0, beta: 1.0, displacement: params.gz_prime(), packet_width: 1.0 };
        let s = a.norm_sq().sqrt();
        a.alpha /= s;
        a.beta /= s;
        a
    }

    fn center(&self, gamma: Packet) -> f64 {
        match gamma {
            Packet::Alpha => -self.displacement,
            Packet::Beta => self.displacement,
        }
    }

    fn weight(&self, gamma: Packet) -> f64 {
        match gamma {
            Packet::Alpha => self.alpha,
            Packet::Beta => self.beta,
        }
    }

    /// `⟨φ_γ(x)|φ_γ'(x)⟩`
    pub fn overlap(&self, a: Packet, b: Packet) -> f64 {
        let d = self.center(a) - self.center(b);
        (-d * d / (4.0 * self.packet_width.powi(2))).exp()
    }

    /// `⟨φ_γ(x)|φ_γ'(-x)⟩`
    pub fn mirror_overlap(&self, a: Packet, b: Packet) -> f64 {
        let s = self.center(a) + self.center(b);
        (-s * s / (4.0 * self.packet_width.powi(2))).exp()
    }

    /// `⟨φ_γ(x)|∂x φ_γ'(-x)⟩`
    pub fn mirror_derivative(&self, a: Packet, b: Packet) -> f64 {
        let s = self.center(a) + self.center(b);
        -s / (2.0 * self.packet_width.powi(2)) * self.mirror_overlap(a, b)
    }

    /// `α² + β² + 2αβ⟨φ_α|φ_β⟩`
    pub fn norm_sq(&self) -> f64 {
        self.alpha.powi(2) + self.beta.powi(2) + 2.0 * self.alpha * self.beta * self.overlap(Packet::Alpha, Packet::Beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Packet {
    Alpha,
    Beta,
}

impl Packet {
    pub const BOTH: [Packet; 2] = [Packet::Alpha, Packet::Beta];

    fn index(self) -> usize {
        match self {
            Packet::Alpha => 0,
            Packet::Beta => 1,
        }
    }
}

/// Whether the spin-down component has been braided once (the sign of its
/// α packet reversed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Braiding {
    Before,
    After,
}

/// Tunneling and spin-orbit channel energies, indexed `[γ][γ']` with
/// α = 0, β = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelEnergies {
    /// `Ω_γγ' = -(Ω/2) γγ' ⟨φ_γ(x)|φ_γ'(-x)⟩`
    pub tunneling: [[f64; 2]; 2],
    /// `g^y_γγ' = √2 g_y γγ' ⟨φ_γ(x)|∂x φ_γ'(-x)⟩`
    pub rsoc: [[f64; 2]; 2],
    /// `Ω_αα + g^y_αα`, sign-reversed after braiding.
    pub e_omega_y: f64,
}

pub fn channel_energies(params: &ModelParams, ansatz: &TwoPacketAnsatz, braiding: Braiding) -> ChannelEnergies {
    let mut tunneling = [[0.0; 2]; 2];
    let mut rsoc = [[0.0; 2]; 2];
    let sy = std::f64::consts::SQRT_2 * params.g_y();
    for a in Packet::BOTH {
        for b in Packet::BOTH {
            let w = ansatz.weight(a) * ansatz.weight(b);
            tunneling[a.index()][b.index()] = -0.5 * params.qubit_splitting() * w * ansatz.mirror_overlap(a, b);
            rsoc[a.index()][b.index()] = sy * w * ansatz.mirror_derivative(a, b);
        }
    }
    let sign = match braiding {
        Braiding::Before => 1.0,
        Braiding::After => -1.0,
    };
    let e_omega_y = sign * (tunneling[0][0] + rsoc[0][0]);
    ChannelEnergies { tunneling, rsoc, e_omega_y }
}

/// Coupling where `E_Ωy` changes sign along fixed λ, ω, Ω, found by bisection
/// in `g` on the channel energies. `None` when there is no sign change below
/// `g_max`.
pub fn variational_t1(lambda: f64, params: &ModelParams, g_max: f64) -> Result<Option<f64>> {
    let e = |g: f64| -> Result<f64> {
        let p = params.with_g(g)?.with_lambda(lambda)?;
        Ok(channel_energies(&p, &TwoPacketAnsatz::for_params(&p), Braiding::Before).e_omega_y)
    };
    let mut lo = 0.0;
    let mut hi = g_max;
    let f_lo = e(lo)?;
    if f_lo.signum() == e(hi)?.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = e(mid)?;
        if f == 0.0 {
            return Ok(Some(mid));
        }
        if f.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// One detected level crossing of the two parity-block ground energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub g_over_gs: f64,
    /// `|E0(even) - E0(odd)|` at the returned coupling.
    pub residual: f64,
    /// False when some bisection point could not resolve the sign of the
    /// splitting.
    pub resolved: bool,
}

/// Settings of a crossing search along one λ slice. Couplings in units of `g_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingSearch {
    pub g_min: f64,
    pub g_max: f64,
    /// Spacing of the coarse sign scan.
    pub coarse_step: f64,
    /// Bracket width at which bisection stops.
    pub tol: f64,
}

impl Default for CrossingSearch {
    fn default() -> Self {
        Self { g_min: 0.0, g_max: 6.0, coarse_step: 0.02, tol: 1e-6 }
    }
}

/// `E0(even) - E0(odd)` at `(λ, g/g_s)` on the adaptive truncation.
pub fn sector_gap_at(template: &ModelParams, lambda: f64, g_over_gs: f64) -> Result<Splitting> {
    let p = ModelParams::new(template.omega(), template.qubit_splitting(), g_over_gs * template.g_s(), lambda)?;
    let t = Truncation::adaptive(&p);
    let low = |parity: Parity| -> Result<f64> {
        let block = sector_block(&p, &t, parity)?;
        Ok(lowest(&block.matrix))
    };
    Ok(sector_splitting(&p, &t, low(Parity::Even)?, low(Parity::Odd)?))
}

fn lowest(m: &SymTridiagonal) -> f64 {
    m.eigenvalue(0)
}

/// All couplings in the search window where the parity-block grounds cross,
/// ascending. The first entry is the numerical `g_T1`.
pub fn detect_crossings(template: &ModelParams, lambda: f64, search: &CrossingSearch) -> Result<Vec<Crossing>> {
    if !(search.g_max > search.g_min && search.coarse_step > 0.0 && search.tol > 0.0) {
        return Err(Error::Config(format!("bad crossing search window {search:?}")));
    }
    let steps = ((search.g_max - search.g_min) / search.coarse_step).ceil() as usize;
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let g = (search.g_min + i as f64 * search.coarse_step).min(search.g_max);
        let s = sector_gap_at(template, lambda, g)?;
        if !s.resolved || s.value == 0.0 {
            continue;
        }
        if let Some((g_prev, v_prev)) = last {
            if v_prev.signum() != s.value.signum() {
                out.push(bisect(template, lambda, g_prev, v_prev, g, search.tol)?);
            }
        }
        last = Some((g, s.value));
    }
    Ok(out)
}

fn bisect(template: &ModelParams, lambda: f64, mut lo: f64, v_lo: f64, mut hi: f64, tol: f64) -> Result<Crossing> {
    let mut resolved = true;
    let mut best = (0.5 * (lo + hi), f64::INFINITY);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let s = sector_gap_at(template, lambda, mid)?;
        resolved &= s.resolved;
        if s.value.abs() < best.1 {
            best = (mid, s.value.abs());
        }
        if s.value.signum() == v_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let s = sector_gap_at(template, lambda, mid)?;
    resolved &= s.resolved;
    let (g, residual) = if s.value.abs() <= best.1 { (mid, s.value.abs()) } else { best };
    Ok(Crossing { g_over_gs: g, residual, resolved })
}

/// Excitation-number variance threshold marking U(1) breaking.
pub const U1_VARIANCE_THRESHOLD: f64 = 1e-3;

/// Smallest coupling on the slice where the ground state's excitation-number
/// variance exceeds [`U1_VARIANCE_THRESHOLD`]. A heuristic marker: the
/// variance grows smoothly with `gλ` and has no sharp onset.
pub fn u1_breaking(template: &ModelParams, lambda: f64, search: &CrossingSearch) -> Result<Option<Crossing>> {
    let excess = |g: f64| -> Result<f64> {
        let p = ModelParams::new(template.omega(), template.qubit_splitting(), g * template.g_s(), lambda)?;
        let gs = ground_state(&p, &Truncation::adaptive(&p))?;
        Ok(evaluate(&gs.state, &p)?.excitation_variance - U1_VARIANCE_THRESHOLD)
    };
    let steps = ((search.g_max - search.g_min) / search.coarse_step).ceil() as usize;
    let mut prev = (search.g_min, excess(search.g_min)?);
    if prev.1 > 0.0 {
        return Ok(None);
    }
    for i in 1..=steps {
        let g = (search.g_min + i as f64 * search.coarse_step).min(search.g_max);
        let v = excess(g)?;
        if v > 0.0 {
            let (mut lo, mut hi) = (prev.0, g);
            while hi - lo > search.tol {
                let mid = 0.5 * (lo + hi);
                if excess(mid)? > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let g = 0.5 * (lo + hi);
            return Ok(Some(Crossing { g_over_gs: g, residual: excess(g)?.abs(), resolved: true }));
        }
        prev = (g, v);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Conventional,
    /// k-th topological transition, `k ≥ 1`.
    Topological(u32),
    U1Breaking,
}

impl BoundaryKind {
    pub fn label(self) -> String {
        match self {
            BoundaryKind::Conventional => "g_c".into(),
            BoundaryKind::Topological(k) => format!("g_T{k}"),
            BoundaryKind::U1Breaking => "u1_breaking".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Bisection,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Bisection => "bisection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub lambda: f64,
    pub g_over_gs: f64,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub kind: BoundaryKind,
    pub method: Method,
    pub points: Vec<BoundaryPoint>,
}

/// Closed-form `g_c` on the given λ values.
pub fn conventional_curve(template: &ModelParams, lambdas: &[f64]) -> BoundaryCurve {
    let gs = template.g_s();
    let points = lambdas
        .iter()
        .map(|&l| BoundaryPoint { lambda: l, g_over_gs: g_c(l, template) / gs, residual: None })
        .collect();
    BoundaryCurve { kind: BoundaryKind::Conventional, method: Method::Analytic, points }
}

/// Closed-form `g_T1`, skipping λ where it diverges.
pub fn t1_curve(template: &ModelParams, lambdas: &[f64]) -> BoundaryCurve {
    let gs = template.g_s();
    let points = lambdas
        .iter()
        .filter_map(|&l| g_t1(l, template).value().map(|g| BoundaryPoint { lambda: l, g_over_gs: g / gs, residual: None }))
        .collect();
    BoundaryCurve { kind: BoundaryKind::Topological(1), method: Method::Analytic, points }
}

/// Numerically detected crossings on every λ slice, grouped into curves by
/// their order along `g`. Slices run in parallel and merge by λ.
pub fn topological_curves(template: &ModelParams, lambdas: &[f64], search: &CrossingSearch) -> Result<Vec<BoundaryCurve>> {
    let per_slice: Vec<Vec<Crossing>> =
        lambdas.par_iter().map(|&l| detect_crossings(template, l, search)).collect::<Result<_>>()?;
    let depth = per_slice.iter().map(Vec::len).max().unwrap_or(0);
    Ok((0..depth)
        .map(|k| BoundaryCurve {
            kind: BoundaryKind::Topological(k as u32 + 1),
            method: Method::Bisection,
            points: lambdas
                .iter()
                .zip(&per_slice)
                .filter_map(|(&l, c)| {
                    c.get(k).map(|c| BoundaryPoint { lambda: l, g_over_gs: c.g_over_gs, residual: Some(c.residual) })
                })
                .collect(),
        })
        .collect())
}

/// Threshold-detected U(1) breaking on every λ slice.
pub fn u1_curve(template: &ModelParams, lambdas: &[f64], search: &CrossingSearch) -> Result<BoundaryCurve> {
    let found: Vec<Option<Crossing>> =
        lambdas.par_iter().map(|&l| u1_breaking(template, l, search)).collect::<Result<_>>()?;
    let points = lambdas
        .iter()
        .zip(found)
        .filter_map(|(&l, c)| c.map(|c| BoundaryPoint { lambda: l, g_over_gs: c.g_over_gs, residual: Some(c.residual) }))
        .collect();
    Ok(BoundaryCurve { kind: BoundaryKind::U1Breaking, method: Method::Bisection, points })
}

/// CSV with columns `kind,lambda,g_over_gs,method,residual`.
pub fn write_boundary_csv<W: Write>(out: &mut W, curves: &[BoundaryCurve]) -> Result<()> {
    writeln!(out, "kind,lambda,g_over_gs,method,residual")?;
    for c in curves {
        for p in &c.points {
            let residual = p.residual.map(|r| r.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{},{}", c.kind.label(), p.lambda, p.g_over_gs, c.method.label(), residual)?;
        }
    }
    Ok(())
}
