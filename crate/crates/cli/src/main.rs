//! `aqrm`: command-line front end for the anisotropic Rabi scanner.
//!
//! Exit codes: 0 on success, 1 on configuration or I/O errors, 2 when a scan
//! finished but some grid points failed.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use aqrm_core::boundaries::{
    conventional_curve, t1_curve, topological_curves, u1_curve, write_boundary_csv, BoundaryCurve, CrossingSearch,
};
use aqrm_core::eigen::{ground_state, lowest_k};
use aqrm_core::model::build_hamiltonian;
use aqrm_core::observables::evaluate;
use aqrm_core::realspace::{
    count_zeros, momentum_wavefunction, spinor_wavefunction, Component, GridConfig, DEFAULT_ZERO_THRESHOLD,
};
use aqrm_core::scan::{preset, scan2d_on, worker_pool, write_csv, write_json, OutputFormat, Range, ScanConfig, PRESETS};
use aqrm_core::{ModelParams, Truncation};

#[derive(Parser, Debug)]
#[command(name = "aqrm", version, about = "Exact diagonalization scans of the anisotropic quantum Rabi model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energies and observables at one parameter point.
    Spectrum(PointArgs),
    /// Two-dimensional (λ, g) scan.
    Scan(ScanArgs),
    /// Transition boundaries per λ slice.
    Boundary(BoundaryArgs),
    /// Real-space spinor of the ground state.
    Wave(WaveArgs),
    /// List the built-in scan presets.
    Presets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GUnits {
    /// Units of g_s = √(ωΩ)/2.
    Gs,
    /// Absolute units of Ω.
    Abs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Position,
    Momentum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Conventional,
    T1,
    Topological,
    U1,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Boson frequency ω.
    #[arg(long)]
    omega: f64,
    /// Qubit splitting Ω.
    #[arg(long, default_value_t = 1.0)]
    qubit_splitting: f64,
    /// Coupling strength.
    #[arg(long)]
    g: f64,
    #[arg(long, value_enum, default_value_t = GUnits::Gs)]
    g_units: GUnits,
    /// Anisotropy λ in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Fixed boson cutoff instead of the adaptive rule.
    #[arg(long)]
    n_max: Option<usize>,
    /// Accept a fixed cutoff below the adaptive floor.
    #[arg(long, requires = "n_max")]
    allow_below_floor: bool,
    /// Number of levels printed by `spectrum`.
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl PointArgs {
    fn params(&self) -> Result<ModelParams> {
        let p = match self.g_units {
            GUnits::Gs => ModelParams::in_gs_units(self.omega, self.qubit_splitting, self.g, self.lambda)?,
            GUnits::Abs => ModelParams::new(self.omega, self.qubit_splitting, self.g, self.lambda)?,
        };
        Ok(p)
    }

    fn truncation(&self, p: &ModelParams) -> Result<Truncation> {
        let t = match (self.n_max, self.allow_below_floor) {
            (None, _) => Truncation::adaptive(p),
            (Some(n), false) => Truncation::fixed(n),
            (Some(n), true) => Truncation::fixed_unchecked(n),
        };
        t.validate(p)?;
        Ok(t)
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Start from a built-in preset.
    #[arg(long)]
    preset: Option<String>,
    /// TOML or JSON file whose keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    qubit_splitting: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_steps: Option<usize>,
    /// Lower end of the coupling axis, in units of g_s.
    #[arg(long)]
    g_min: Option<f64>,
    /// Upper end of the coupling axis, in units of g_s.
    #[arg(long)]
    g_max: Option<f64>,
    #[arg(long)]
    g_steps: Option<usize>,
    /// Fixed boson cutoff instead of the adaptive rule.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, requires = "n_max")]
    allow_below_floor: bool,
    /// Count ψ- nodes at every point.
    #[arg(long)]
    n_z: bool,
    #[arg(long)]
    zero_threshold: Option<f64>,
    #[arg(long)]
    grid_half_width: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    qubit_splitting: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda_max: f64,
    #[arg(long, default_value_t = 21)]
    lambda_steps: usize,
    /// Search window start, in units of g_s.
    #[arg(long, default_value_t = 0.0)]
    g_min: f64,
    /// Search window end, in units of g_s.
    #[arg(long, default_value_t = 6.0)]
    g_max: f64,
    /// Coarse sign-scan spacing, in units of g_s.
    #[arg(long, default_value_t = 0.02)]
    coarse_step: f64,
    /// Bisection stopping width, in units of g_s.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Boundaries to compute; all when absent.
    #[arg(long, value_enum, value_delimiter = ',')]
    kind: Vec<Kind>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WaveArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value_t = Space::Position)]
    space: Space,
    /// Grid half width L.
    #[arg(long)]
    half_width: Option<f64>,
    /// Grid spacing h.
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_ZERO_THRESHOLD)]
    zero_threshold: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Spectrum(a) => spectrum(&a).map_err(Failure::from),
        Command::Scan(a) => scan(&a),
        Command::Boundary(a) => boundary(&a).map_err(Failure::from),
        Command::Wave(a) => wave(&a).map_err(Failure::from),
        Command::Presets => {
            for (name, about) in PRESETS {
                println!("{name:<6} {about}");
            }
            Ok(())
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn spectrum(a: &PointArgs) -> Result<()> {
    let p = a.params()?;
    let t = a.truncation(&p)?;
    let k = a.levels.min(t.dim());
    let levels = lowest_k(&build_hamiltonian(&p, &t)?, k)?.energies;
    let gs = ground_state(&p, &t)?;
    let obs = evaluate(&gs.state, &p)?;
    let out = json!({
        "omega": p.omega(),
        "qubit_splitting": p.qubit_splitting(),
        "g": p.g(),
        "g_over_gs": p.g_over_gs(),
        "lambda": p.lambda(),
        "n_max": t.n_max,
        "levels": levels,
        "E0": gs.e0,
        "E1": gs.e1,
        "gap": gs.gap,
        "parity": gs.parity.as_i8(),
        "splitting_resolved": gs.splitting.resolved,
        "sigma_x": obs.sigma_x,
        "a_norm": obs.a_norm,
        "p_x": obs.p_x,
        "p_sigma": obs.p_sigma,
        "excitation": obs.excitation,
        "excitation_variance": obs.excitation_variance,
        "duality_mod": obs.duality.norm(),
        "x2": obs.x2,
        "p2": obs.p2,
    });
    if a.json {
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("omega = {}  Omega = {}  g = {} ({} g_s)  lambda = {}  n_max = {}", p.omega(), p.qubit_splitting(), p.g(), p.g_over_gs(), p.lambda(), t.n_max);
    for (i, e) in levels.iter().enumerate() {
        println!("E{i:<3} {e:.15}");
    }
    for key in ["gap", "parity", "sigma_x", "a_norm", "p_x", "p_sigma", "excitation", "duality_mod", "x2", "p2"] {
        println!("{key:<12} {}", out[key]);
    }
    if !gs.splitting.resolved {
        println!("note: parity blocks degenerate to working precision; odd block reported");
    }
    Ok(())
}

/// Merges `patch` into `base`, recursing into objects.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k).or_insert(Value::Null), v);
            }
        }
        (slot, v) => *slot = v,
    }
}

fn set(root: &mut Value, path: &[&str], v: Value) {
    let mut node = root;
    for key in &path[..path.len() - 1] {
        if !node.get(*key).is_some_and(Value::is_object) {
            node[*key] = Value::Object(Map::new());
        }
        node = &mut node[*key];
    }
    node[path[path.len() - 1]] = v;
}

fn read_config_file(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
    } else {
        let table: toml::Table = toml::from_str(&text).with_context(|| format!("invalid TOML in {}", path.display()))?;
        Ok(serde_json::to_value(table)?)
    }
}

/// Preset, then flags, then the config file, later layers winning.
fn resolve_scan_config(a: &ScanArgs) -> Result<ScanConfig> {
    let mut v = match &a.preset {
        Some(name) => {
            let cfg = preset(name).ok_or_else(|| anyhow!("unknown preset {name:?}; see `aqrm presets`"))?;
            serde_json::to_value(cfg)?
        }
        None => Value::Object(Map::new()),
    };
    let flags: [(&[&str], Option<Value>); 12] = [
        (&["omega"], a.omega.map(Value::from)),
        (&["qubit_splitting"], a.qubit_splitting.map(Value::from)),
        (&["lambda", "min"], a.lambda_min.map(Value::from)),
        (&["lambda", "max"], a.lambda_max.map(Value::from)),
        (&["lambda", "steps"], a.lambda_steps.map(Value::from)),
        (&["g", "min"], a.g_min.map(Value::from)),
        (&["g", "max"], a.g_max.map(Value::from)),
        (&["g", "steps"], a.g_steps.map(Value::from)),
        (&["zero_threshold"], a.zero_threshold.map(Value::from)),
        (&["grid", "half_width"], a.grid_half_width.map(Value::from)),
        (&["grid", "step"], a.grid_step.map(Value::from)),
        (&["format"], a.format.map(|f| Value::from(f.name()))),
    ];
    for (path, value) in flags {
        if let Some(value) = value {
            set(&mut v, path, value);
        }
    }
    if let Some(n) = a.n_max {
        set(&mut v, &["truncation"], json!({ "policy": "fixed", "n_max": n, "allow_below_floor": a.allow_below_floor }));
    }
    if a.n_z {
        set(&mut v, &["n_z"], Value::Bool(true));
    }
    if let Some(o) = &a.output {
        set(&mut v, &["output"], Value::from(o.to_string_lossy().into_owned()));
    }
    if let Some(path) = &a.config {
        merge(&mut v, read_config_file(path)?);
    }
    let cfg: ScanConfig = serde_json::from_value(v).context("incomplete or invalid scan configuration")?;
    cfg.validate()?;
    Ok(cfg)
}

fn scan(a: &ScanArgs) -> std::result::Result<(), Failure> {
    let cfg = resolve_scan_config(a)?;
    if a.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).map_err(anyhow::Error::from)?);
        return Ok(());
    }
    let pool = worker_pool().map_err(anyhow::Error::from)?;
    let data = scan2d_on(&cfg, &pool).map_err(anyhow::Error::from)?;
    let mut out = sink(cfg.output.as_deref().map(Path::new))?;
    match cfg.format {
        OutputFormat::Csv => write_csv(&data, &mut out),
        OutputFormat::Json => write_json(&data, &mut out),
    }
    .map_err(anyhow::Error::from)?;
    out.flush().map_err(anyhow::Error::from)?;
    if data.has_failures() {
        return Err(Failure {
            code: 2,
            error: anyhow!("{} of {} grid points failed; see rows with status=failed", data.metadata.failed_points, data.records.len()),
        });
    }
    Ok(())
}

fn boundary(a: &BoundaryArgs) -> Result<()> {
    let lambda = Range::new(a.lambda_min, a.lambda_max, a.lambda_steps);
    lambda.validate("lambda")?;
    if a.lambda_min < -1.0 || a.lambda_max > 1.0 {
        bail!("lambda range must lie within [-1, 1]");
    }
    let lambdas = lambda.values();
    let template = ModelParams::new(a.omega, a.qubit_splitting, 0.0, 0.0)?;
    let search = CrossingSearch { g_min: a.g_min, g_max: a.g_max, coarse_step: a.coarse_step, tol: a.tol };
    let kinds = if a.kind.is_empty() { vec![Kind::Conventional, Kind::T1, Kind::Topological, Kind::U1] } else { a.kind.clone() };
    let pool = worker_pool()?;
    let mut curves: Vec<BoundaryCurve> = Vec::new();
    for kind in kinds {
        match kind {
            Kind::Conventional => curves.push(conventional_curve(&template, &lambdas)),
            Kind::T1 => curves.push(t1_curve(&template, &lambdas)),
            Kind::Topological => curves.extend(pool.install(|| topological_curves(&template, &lambdas, &search))?),
            Kind::U1 => curves.push(pool.install(|| u1_curve(&template, &lambdas, &search))?),
        }
    }
    let mut out = sink(a.output.as_deref())?;
    write_boundary_csv(&mut out, &curves)?;
    out.flush()?;
    Ok(())
}

fn wave(a: &WaveArgs) -> Result<()> {
    let p = a.point.params()?;
    let t = a.point.truncation(&p)?;
    let gs = ground_state(&p, &t)?;
    let grid = GridConfig { half_width: a.half_width, step: a.step };
    let w = match a.space {
        Space::Position => spinor_wavefunction(&gs.state, &p, &grid)?,
        Space::Momentum => momentum_wavefunction(&gs.state, &p, &grid)?,
    };
    let zeros = count_zeros(&w, Component::Minus, a.zero_threshold);
    let obs = evaluate(&gs.state, &p)?;
    let header: Vec<(String, String)> = vec![
        ("omega".into(), p.omega().to_string()),
        ("qubit_splitting".into(), p.qubit_splitting().to_string()),
        ("g_over_gs".into(), p.g_over_gs().to_string()),
        ("lambda".into(), p.lambda().to_string()),
        ("n_max".into(), t.n_max.to_string()),
        ("E0".into(), gs.e0.to_string()),
        ("parity".into(), gs.parity.as_i8().to_string()),
        ("a_norm".into(), obs.a_norm.map(|x| x.to_string()).unwrap_or_default()),
        ("space".into(), format!("{:?}", a.space).to_lowercase()),
        ("n_z".into(), zeros.n_z.to_string()),
        ("n_z_ambiguous".into(), zeros.ambiguous.to_string()),
    ];
    let mut out = sink(a.output.as_deref())?;
    w.write_csv(&mut out, &header)?;
    out.flush()?;
    Ok(())
}
