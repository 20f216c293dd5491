//! Two-dimensional (λ, g) scans with per-point ground-state diagnostics.

mod io;
mod presets;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use io::{read_csv, read_json, write_csv, write_json, OutputFormat};
pub use presets::{preset, PRESETS};

use crate::eigen::ground_state;
use crate::error::{Error, Result};
use crate::observables::evaluate;
use crate::params::{ModelParams, Truncation};
use crate::realspace::{count_zeros, dual_transform_real, spinor_wavefunction, Component, GridConfig};

/// Worker count variable read by [`worker_pool`].
pub const WORKERS_ENV: &str = "AQRM_WORKERS";

/// Thread pool sized by `AQRM_WORKERS`, defaulting to the available cores.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?,
        Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Error::Config(e.to_string()))
}

/// Evenly spaced axis; a single step is allowed only when `min == max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn fixed(value: f64) -> Self {
        Self { min: value, max: value, steps: 1 }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!("{name} range must be finite")));
        }
        if self.max < self.min {
            return Err(Error::Config(format!("{name} range has max < min")));
        }
        if self.steps == 0 || (self.min != self.max && self.steps < 2) {
            return Err(Error::Config(format!("{name} range needs at least 2 steps, got {}", self.steps)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| if i == last { self.max } else { self.min + (self.max - self.min) * i as f64 / last as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum TruncationChoice {
    Adaptive,
    /// Fixed cutoff; `allow_below_floor` lifts the adaptive minimum.
    Fixed {
        n_max: usize,
        #[serde(default)]
        allow_below_floor: bool,
    },
}

impl TruncationChoice {
    pub fn for_params(&self, params: &ModelParams) -> Truncation {
        match *self {
            TruncationChoice::Adaptive => Truncation::adaptive(params),
            TruncationChoice::Fixed { n_max, allow_below_floor: false } => Truncation::fixed(n_max),
            TruncationChoice::Fixed { n_max, allow_below_floor: true } => Truncation::fixed_unchecked(n_max),
        }
    }
}

/// Scan request. Couplings on the `g` axis are in units of `g_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub omega: f64,
    #[serde(default = "unit")]
    pub qubit_splitting: f64,
    pub lambda: Range,
    pub g: Range,
    #[serde(default = "adaptive")]
    pub truncation: TruncationChoice,
    /// Count nodes of ψ- at every point (the costly part of a scan).
    #[serde(default)]
    pub n_z: bool,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_threshold")]
    pub zero_threshold: f64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn unit() -> f64 {
    1.0
}

fn adaptive() -> TruncationChoice {
    TruncationChoice::Adaptive
}

fn default_threshold() -> f64 {
    crate::realspace::DEFAULT_ZERO_THRESHOLD
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("qubit_splitting", self.qubit_splitting)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        self.lambda.validate("lambda")?;
        self.g.validate("g")?;
        if self.lambda.min < -1.0 || self.lambda.max > 1.0 {
            return Err(Error::Config("lambda range must lie within [-1, 1]".into()));
        }
        if self.g.min < 0.0 {
            return Err(Error::Config("g range must be non-negative".into()));
        }
        if !(self.zero_threshold > 0.0 && self.zero_threshold < 1.0) {
            return Err(Error::Config(format!("zero_threshold must lie in (0, 1), got {}", self.zero_threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    /// Parity-block grounds closer than the arithmetic can order; the odd
    /// block is reported.
    Degenerate,
    Failed,
}

/// One grid point. Column names match the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub lambda: f64,
    pub g_over_gs: f64,
    pub omega: f64,
    #[serde(rename = "E0")]
    pub e0: Option<f64>,
    #[serde(rename = "E1")]
    pub e1: Option<f64>,
    pub gap: Option<f64>,
    pub parity: Option<i8>,
    pub sigma_x: Option<f64>,
    pub a_norm: Option<f64>,
    #[serde(rename = "AP")]
    pub ap: Option<f64>,
    pub n_z: Option<usize>,
    pub p_x: Option<f64>,
    pub p_sigma: Option<f64>,
    pub excitation: Option<f64>,
    pub duality_mod: Option<f64>,
    pub n_max_used: Option<usize>,
    pub status: PointStatus,
}

impl ScanRecord {
    fn failed(lambda: f64, g_over_gs: f64, omega: f64, n_max: Option<usize>) -> Self {
        Self {
            lambda,
            g_over_gs,
            omega,
            e0: None,
            e1: None,
            gap: None,
            parity: None,
            sigma_x: None,
            a_norm: None,
            ap: None,
            n_z: None,
            p_x: None,
            p_sigma: None,
            excitation: None,
            duality_mod: None,
            n_max_used: n_max,
            status: PointStatus::Failed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub code_version: String,
    pub config: ScanConfig,
    pub lambda_steps: usize,
    pub g_steps: usize,
    pub failed_points: usize,
    /// Cutoff of every point in row order. Omitted in CSV, where the
    /// `n_max_used` column carries it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max_per_point: Option<Vec<usize>>,
}

/// Rows in λ-major order, then g.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDataset {
    pub metadata: ScanMetadata,
    pub records: Vec<ScanRecord>,
    /// Kept apart from the metadata so that it can be ignored when
    /// comparing outputs.
    #[serde(default)]
    pub wall_time_s: Option<f64>,
}

impl ScanDataset {
    pub fn has_failures(&self) -> bool {
        self.metadata.failed_points > 0
    }

    pub fn record(&self, lambda_index: usize, g_index: usize) -> &ScanRecord {
        &self.records[lambda_index * self.metadata.g_steps + g_index]
    }
}

/// Full pipeline at one grid point.
pub fn scan_point(config: &ScanConfig, lambda: f64, g_over_gs: f64) -> ScanRecord {
    let params = match ModelParams::in_gs_units(config.omega, config.qubit_splitting, g_over_gs, lambda) {
        Ok(p) => p,
        Err(_) => return ScanRecord::failed(lambda, g_over_gs, config.omega, None),
    };
    let trunc = config.truncation.for_params(&params);
    match point_inner(config, &params, &trunc) {
        Ok(r) => r,
        Err(_) => ScanRecord::failed(lambda, g_over_gs, config.omega, Some(trunc.n_max)),
    }
}

fn point_inner(config: &ScanConfig, params: &ModelParams, trunc: &Truncation) -> Result<ScanRecord> {
    let gs = ground_state(params, trunc)?;
    let obs = evaluate(&gs.state, params)?;
    let parity = gs.parity.as_i8();
    let n_z = if config.n_z {
        // p-type states are counted in their dual picture
        let counted = if params.lambda() < 0.0 { dual_transform_real(&gs.state)? } else { gs.state.clone() };
        let wave = spinor_wavefunction(&counted, params, &config.grid)?;
        Some(count_zeros(&wave, Component::Minus, config.zero_threshold).n_z)
    } else {
        None
    };
    Ok(ScanRecord {
        lambda: params.lambda(),
        g_over_gs: params.g_over_gs(),
        omega: params.omega(),
        e0: Some(gs.e0),
        e1: Some(gs.e1),
        gap: Some(gs.gap),
        parity: Some(parity),
        sigma_x: Some(obs.sigma_x),
        a_norm: obs.a_norm,
        ap: obs.a_norm.map(|a| a * parity as f64),
        n_z,
        p_x: Some(obs.p_x),
        p_sigma: Some(obs.p_sigma),
        excitation: Some(obs.excitation),
        duality_mod: Some(obs.duality.norm()),
        n_max_used: Some(trunc.n_max),
        status: if gs.splitting.resolved { PointStatus::Ok } else { PointStatus::Degenerate },
    })
}

/// Runs every grid point on the [`worker_pool`]; row order is fixed.
pub fn scan2d(config: &ScanConfig) -> Result<ScanDataset> {
    config.validate()?;
    scan2d_on(config, &worker_pool()?)
}

/// [`scan2d`] on a caller-supplied pool.
pub fn scan2d_on(config: &ScanConfig, pool: &rayon::ThreadPool) -> Result<ScanDataset> {
    config.validate()?;
    let lambdas = config.lambda.values();
    let gs = config.g.values();
    let start = Instant::now();
    let records: Vec<ScanRecord> = pool.install(|| {
        (0..lambdas.len() * gs.len())
            .into_par_iter()
            .map(|k| scan_point(config, lambdas[k / gs.len()], gs[k % gs.len()]))
            .collect()
    });
    let wall = start.elapsed().as_secs_f64();
    // rows carry the requested axis values, not the ones recomputed from g
    let records = records
        .into_iter()
        .enumerate()
        .map(|(k, mut r)| {
            r.lambda = lambdas[k / gs.len()];
            r.g_over_gs = gs[k % gs.len()];
            r
        })
        .collect::<Vec<_>>();
    let failed_points = records.iter().filter(|r| r.status == PointStatus::Failed).count();
    let n_max_per_point = records.iter().map(|r| r.n_max_used.unwrap_or(0)).collect();
    Ok(ScanDataset {
        metadata: ScanMetadata {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            lambda_steps: lambdas.len(),
            g_steps: gs.len(),
            failed_points,
            n_max_per_point: Some(n_max_per_point),
        },
        records,
        wall_time_s: Some(wall),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Normal,
    XType,
    PType,
    /// `|A|` within 0.01 of the 0.1 threshold.
    Ambiguous,
}

/// `(regime, parity, n_z)` label of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub regime: Regime,
    pub parity: Option<i8>,
    pub n_z: Option<usize>,
}

pub const REGIME_THRESHOLD: f64 = 0.1;
const REGIME_MARGIN: f64 = 0.01;

pub fn classify_phase(record: &ScanRecord) -> PhaseLabel {
    let regime = match record.a_norm {
        None => Regime::Normal,
        Some(a) if (a.abs() - REGIME_THRESHOLD).abs() < REGIME_MARGIN => Regime::Ambiguous,
        Some(a) if a > REGIME_THRESHOLD => Regime::XType,
        Some(a) if a < -REGIME_THRESHOLD => Regime::PType,
        Some(_) => Regime::Normal,
    };
    PhaseLabel { regime, parity: record.parity, n_z: record.n_z }
}
