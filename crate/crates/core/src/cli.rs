//! `magnon` command line: one subcommand per computation, CSV or JSON out.

use crate::dispersion::{ChainParams, KWindow, band_bottom, dispersion_gap, dynamical_exponent, fit_u};
use crate::ed_oracle::{DEFAULT_BINDING_FLOOR, resonance_scan};
use crate::efimov_scale::{efimov_window_edge, s0_solve, s0_sweep};
use crate::error::{Error, Result};
use crate::stm::{
    BoundStateSpectrum, DEFAULT_DECADES, DEFAULT_DECADES_TWO_CHANNEL, DEFAULT_POINTS, build_grid,
    find_spectrum_default, semisuper_phase_fit,
};
use crate::two_body::{DimerBinding, EftParams, t_inverse, two_body_binding};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value, json};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable naming the directory for outputs without `--out`.
pub const OUT_DIR_ENV: &str = "MAGNON_OUT_DIR";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "magnon", version, about = "Few-magnon bound states of the long-range XY chain")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Output file; defaults to <subcommand>.<format> in $MAGNON_OUT_DIR or ".".
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// TOML file of flag values; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice dispersion ε_k and its small-k power law.
    Dispersion(DispersionArgs),
    /// Scale exponent s₀ across α.
    S0Sweep(SweepArgs),
    /// Efimov tower of the single-channel theory at resonance.
    EfimovSpectrum(EfimovArgs),
    /// Semi-super Efimov tower of the two-channel theory at α = 2.
    SemisuperSpectrum(SemisuperArgs),
    /// Two-magnon T-matrix on the negative energy axis.
    TwoBody(TwoBodyArgs),
    /// Impurity-induced two-magnon binding from exact diagonalization.
    EdResonance(EdArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dispersion(_) => "dispersion",
            Command::S0Sweep(_) => "s0-sweep",
            Command::EfimovSpectrum(_) => "efimov-spectrum",
            Command::SemisuperSpectrum(_) => "semisuper-spectrum",
            Command::TwoBody(_) => "two-body",
            Command::EdResonance(_) => "ed-resonance",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Dispersion(a) => &a.common,
            Command::S0Sweep(a) => &a.common,
            Command::EfimovSpectrum(a) => &a.common,
            Command::SemisuperSpectrum(a) => &a.common,
            Command::TwoBody(a) => &a.common,
            Command::EdResonance(a) => &a.common,
        }
    }

    fn params(&self) -> Value {
        let v = match self {
            Command::Dispersion(a) => serde_json::to_value(a),
            Command::S0Sweep(a) => serde_json::to_value(a),
            Command::EfimovSpectrum(a) => serde_json::to_value(a),
            Command::SemisuperSpectrum(a) => serde_json::to_value(a),
            Command::TwoBody(a) => serde_json::to_value(a),
            Command::EdResonance(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

#[derive(Args, Debug, Serialize)]
struct DispersionArgs {
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    #[arg(long, default_value_t = 1e-4)]
    k_min: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    k_max: f64,
    #[arg(long, default_value_t = 60)]
    points: usize,
    /// Relative tolerance of the lattice sums.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, default_value_t = 2.05)]
    from: f64,
    #[arg(long, default_value_t = 2.95)]
    to: f64,
    #[arg(long, default_value_t = 91)]
    points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct EfimovArgs {
    #[arg(long, default_value_t = 2.2)]
    alpha: f64,
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid_points: usize,
    #[arg(long, default_value_t = DEFAULT_DECADES)]
    decades: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct SemisuperArgs {
    /// Λ·R, below 1.
    #[arg(long, default_value_t = 0.5)]
    lambda_r: f64,
    #[arg(long, default_value_t = 6)]
    states: usize,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid_points: usize,
    #[arg(long, default_value_t = DEFAULT_DECADES_TWO_CHANNEL)]
    decades: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct TwoBodyArgs {
    /// α = 2 selects the two-channel theory, α ∈ (2, 3) the single channel.
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    /// 1/G (single channel).
    #[arg(long, default_value_t = 0.0)]
    inv_g: f64,
    /// 1/a (two channel).
    #[arg(long, default_value_t = 0.0)]
    inv_a: f64,
    /// Λ·R (two channel).
    #[arg(long, default_value_t = 0.5)]
    lambda_r: f64,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Smallest |E| tabulated.
    #[arg(long, default_value_t = 1e-8)]
    e_min: f64,
    /// Largest |E| tabulated.
    #[arg(long, default_value_t = 1e-1)]
    e_max: f64,
    #[arg(long, default_value_t = 57)]
    points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct EdArgs {
    #[arg(long, default_value_t = 40)]
    n_sites: usize,
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    #[arg(long, default_value_t = 0.0)]
    jz_min: f64,
    #[arg(long, default_value_t = 20.0)]
    jz_max: f64,
    #[arg(long, default_value_t = 41)]
    jz_points: usize,
    /// E_bind above this counts as bound.
    #[arg(long, default_value_t = DEFAULT_BINDING_FLOOR)]
    floor: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_sig(*x, 12),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) if x.is_finite() => json!(x),
            _ => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Real)
    }
}

/// `sig` significant digits, positional notation for moderate exponents.
pub fn format_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.prec$e}", prec = sig - 1);
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{e}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Run metadata written ahead of the table. `timestamp` is kept apart so
/// the rest of the output is reproducible.
#[derive(Clone, Debug)]
pub struct Meta {
    pub fields: Map<String, Value>,
    pub timestamp: String,
}

/// Render `table` in `format` and write it atomically to `path`.
pub fn emit_table(table: &Table, meta: &Meta, format: Format, path: &Path) -> Result<()> {
    if let Some(bad) = table.rows.iter().find(|r| r.len() != table.columns.len()) {
        return Err(Error::domain(format!(
            "row has {} cells for {} columns",
            bad.len(),
            table.columns.len()
        )));
    }
    let body = match format {
        Format::Csv => render_csv(table, meta),
        Format::Json => render_json(table, meta),
    };
    write_atomic(path, body.as_bytes())
}

fn render_csv(table: &Table, meta: &Meta) -> String {
    let mut out = String::new();
    out.push_str(&format!("# timestamp: {}\n", meta.timestamp));
    for (k, v) in &meta.fields {
        let v = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn render_json(table: &Table, meta: &Meta) -> String {
    let mut m = meta.fields.clone();
    m.insert("timestamp".into(), Value::String(meta.timestamp.clone()));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            Value::Object(
                table.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect(),
            )
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({ "meta": m, "rows": rows }))
        .expect("JSON values serialize");
    s.push('\n');
    s
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Flags from the TOML file named by `--config`, placed ahead of the
/// explicit ones so that later occurrences win.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut it = args.iter().enumerate().skip(1);
    while let Some((i, a)) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
            break;
        }
        if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
            break;
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::domain(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::domain(format!("config {} is not valid TOML: {e}", path.display())))?;

    let mut flags = Vec::new();
    for (key, val) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            continue;
        }
        let v = match val {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Boolean(true) => {
                flags.push(OsString::from(flag));
                continue;
            }
            other => {
                return Err(Error::domain(format!(
                    "config key {key} has unsupported value {other}"
                )));
            }
        };
        flags.push(OsString::from(flag));
        flags.push(OsString::from(v));
    }
    // Insert right after the subcommand name so the flags bind to it.
    let sub_at = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(args.len());
    let mut out = args[..sub_at.min(args.len())].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[sub_at.min(args.len())..]);
    Ok(out)
}

fn output_path(cmd: &Command) -> PathBuf {
    let c = cmd.common();
    if let Some(p) = &c.out {
        return p.clone();
    }
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| ".".into());
    dir.join(format!("{}.{}", cmd.name(), c.format.extension()))
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond { Ok(()) } else { Err(Error::Domain(msg())) }
}

/// Validated inputs, ready to compute.
enum Plan {
    Dispersion { params: ChainParams, ks: Vec<f64>, tol: f64 },
    Sweep { from: f64, to: f64, points: usize },
    Efimov { eft: EftParams, alpha: f64, states: usize, points: usize, decades: f64 },
    Semisuper { eft: EftParams, states: usize, points: usize, decades: f64 },
    TwoBody { eft: EftParams, energies: Vec<f64> },
    Ed { base: ChainParams, grid: Vec<f64>, floor: f64 },
}

fn plan(cmd: &Command) -> Result<Plan> {
    check(cmd.common().workers >= 1, || "--workers must be at least 1".into())?;
    Ok(match cmd {
        Command::Dispersion(a) => {
            let params = ChainParams::new(a.j, a.alpha, 0.0, 4)?;
            check(a.k_min > 0.0 && a.k_max > a.k_min && a.k_max <= std::f64::consts::PI, || {
                format!("need 0 < k-min < k-max <= pi, got {} and {}", a.k_min, a.k_max)
            })?;
            check(a.points >= 2, || "--points must be at least 2".into())?;
            check(a.tol >= 1e-14 && a.tol < 1.0, || format!("--tol must be in [1e-14, 1), got {}", a.tol))?;
            Plan::Dispersion { params, ks: log_spaced(a.k_min, a.k_max, a.points), tol: a.tol }
        }
        Command::S0Sweep(a) => {
            check(a.from > 2.0 && a.to < 3.0 && a.from <= a.to, || {
                format!("sweep range must lie inside (2, 3), got [{}, {}]", a.from, a.to)
            })?;
            check(a.points >= 2 || a.from == a.to, || "--points must be at least 2".into())?;
            Plan::Sweep { from: a.from, to: a.to, points: a.points }
        }
        Command::EfimovSpectrum(a) => {
            let z = dynamical_exponent(a.alpha)?;
            check(a.alpha > 2.0 && a.alpha < 3.0, || {
                format!("Efimov tower needs alpha in (2, 3), got {}", a.alpha)
            })?;
            let eft = EftParams::resonant_single(z, a.u, a.lambda)?;
            check(a.states >= 1, || "--states must be at least 1".into())?;
            build_grid(a.lambda, a.decades, a.grid_points)?;
            Plan::Efimov { eft, alpha: a.alpha, states: a.states, points: a.grid_points, decades: a.decades }
        }
        Command::SemisuperSpectrum(a) => {
            let eft = EftParams::resonant_two_channel(a.u, a.lambda, a.lambda_r)?;
            check(a.states >= 1, || "--states must be at least 1".into())?;
            build_grid(a.lambda, a.decades, a.grid_points)?;
            Plan::Semisuper { eft, states: a.states, points: a.grid_points, decades: a.decades }
        }
        Command::TwoBody(a) => {
            let eft = if a.alpha == 2.0 {
                EftParams::two_channel(a.u, a.lambda, a.inv_a, a.lambda_r / a.lambda)?
            } else {
                check(a.alpha > 2.0 && a.alpha < 3.0, || {
                    format!("two-body T-matrix needs alpha = 2 or alpha in (2, 3), got {}", a.alpha)
                })?;
                EftParams::single_channel(a.alpha - 1.0, a.u, a.lambda, a.inv_g)?
            };
            check(a.e_min > 0.0 && a.e_max >= a.e_min, || {
                format!("need 0 < e-min <= e-max, got {} and {}", a.e_min, a.e_max)
            })?;
            check(a.points >= 1, || "--points must be at least 1".into())?;
            let energies: Vec<f64> = log_spaced(a.e_min, a.e_max, a.points).into_iter().map(|e| -e).collect();
            if let EftParams { channel: crate::two_body::Channel::TwoChannel { range_r, .. }, u, .. } = eft {
                check(a.e_max * range_r / u < 1.0, || {
                    format!("two-channel T-matrix needs |E| R/u < 1, got {}", a.e_max * range_r / u)
                })?;
            }
            Plan::TwoBody { eft, energies }
        }
        Command::EdResonance(a) => {
            let base = ChainParams::new(a.j, a.alpha, 0.0, a.n_sites)?;
            crate::ed_oracle::build_basis(a.n_sites, 2)?;
            check(a.jz_min >= 0.0 && a.jz_max >= a.jz_min, || {
                format!("need 0 <= jz-min <= jz-max, got {} and {}", a.jz_min, a.jz_max)
            })?;
            check(a.jz_points >= 1, || "--jz-points must be at least 1".into())?;
            check(a.floor > 0.0, || format!("--floor must be positive, got {}", a.floor))?;
            let grid = if a.jz_points == 1 {
                vec![a.jz_min]
            } else {
                (0..a.jz_points)
                    .map(|i| a.jz_min + (a.jz_max - a.jz_min) * i as f64 / (a.jz_points - 1) as f64)
                    .collect()
            };
            Plan::Ed { base, grid, floor: a.floor }
        }
    })
}

fn spectrum_rows(sp: &BoundStateSpectrum) -> Vec<Vec<Cell>> {
    (0..sp.len())
        .map(|i| {
            let diff = if i == 0 { Cell::Empty } else { Cell::Real(sp.diffs[i - 1]) };
            vec![Cell::Int(i as i64 + 1), sp.ln_abs_e[i].into(), sp.phi[i].into(), diff]
        })
        .collect()
}

const SPECTRUM_COLUMNS: [&str; 4] = ["n", "ln_abs_E", "phi_n", "diff_n"];

fn execute(plan: Plan, workers: usize, meta: &mut Map<String, Value>) -> Result<Table> {
    Ok(match plan {
        Plan::Dispersion { params, ks, tol } => {
            let eps0 = band_bottom(&params);
            let fit = if params.alpha > 2.0 && params.alpha <= 3.0 {
                Some(fit_u(&params, KWindow::default())?)
            } else {
                None
            };
            meta.insert("eps0".into(), json!(eps0));
            meta.insert("z".into(), json!(dynamical_exponent(params.alpha)?));
            if let Some(f) = &fit {
                meta.insert("u".into(), json!(f.u));
                meta.insert("fit_slope".into(), json!(f.slope));
            }
            let mut rows = Vec::with_capacity(ks.len());
            for k in ks {
                let gap = dispersion_gap(k, &params, tol)?;
                let cont = fit.map(|f| f.u * k.powf(f.z));
                rows.push(vec![k.into(), (eps0 + gap).into(), gap.into(), cont.into()]);
            }
            Table { columns: vec!["k", "eps_k", "gap", "continuum_gap"], rows }
        }
        Plan::Sweep { from, to, points } => {
            let edge = efimov_window_edge()?;
            meta.insert("window_edge_alpha".into(), json!(edge + 1.0));
            let rows = s0_sweep(from, to, points)?
                .into_iter()
                .map(|p| {
                    let s = p.solution;
                    vec![
                        p.alpha.into(),
                        p.z.into(),
                        s.map(|s| s.s0).into(),
                        s.map(|s| s.z_over_s0()).into(),
                        s.map(|s| s.energy_step).into(),
                    ]
                })
                .collect();
            Table { columns: vec!["alpha", "z", "s0", "z_over_s0", "energy_step"], rows }
        }
        Plan::Efimov { eft, alpha, states, points, decades } => {
            let grid = build_grid(eft.lambda, decades, points)?;
            let sp = find_spectrum_default(&grid, &eft, states, workers)?;
            meta.insert("channel".into(), json!(eft.channel.name()));
            meta.insert("alpha".into(), json!(alpha));
            meta.insert("z".into(), json!(eft.z));
            meta.insert("grid".into(), json!({"points": points, "decades": decades, "q_min": grid.q_min}));
            if let Some(s) = s0_solve(eft.z)? {
                meta.insert("z_over_s0".into(), json!(s.z_over_s0()));
            }
            Table { columns: SPECTRUM_COLUMNS.to_vec(), rows: spectrum_rows(&sp) }
        }
        Plan::Semisuper { eft, states, points, decades } => {
            let grid = build_grid(eft.lambda, decades, points)?;
            let sp = find_spectrum_default(&grid, &eft, states, workers)?;
            meta.insert("channel".into(), json!(eft.channel.name()));
            meta.insert("alpha".into(), json!(2.0));
            meta.insert("grid".into(), json!({"points": points, "decades": decades, "q_min": grid.q_min}));
            if sp.len() >= 4 {
                let fit = semisuper_phase_fit(&sp)?;
                meta.insert("theta".into(), json!(fit.theta));
                meta.insert("extrapolated_spacing".into(), json!(fit.spacing));
            }
            Table { columns: SPECTRUM_COLUMNS.to_vec(), rows: spectrum_rows(&sp) }
        }
        Plan::TwoBody { eft, energies } => {
            meta.insert("channel".into(), json!(eft.channel.name()));
            meta.insert("z".into(), json!(eft.z));
            let binding = match two_body_binding(&eft)? {
                DimerBinding::Bound(e) => json!(-e),
                DimerBinding::NoShallowDimer => Value::Null,
            };
            meta.insert("dimer_energy".into(), binding);
            let mut rows = Vec::with_capacity(energies.len());
            for e in energies {
                let ti = t_inverse(e, &eft)?;
                let t = if ti == 0.0 { None } else { Some(1.0 / ti) };
                rows.push(vec![e.into(), ti.into(), t.into()]);
            }
            Table { columns: vec!["E", "t_inverse", "t"], rows }
        }
        Plan::Ed { base, grid, floor } => {
            let scan = resonance_scan(&base, &grid, floor, workers)?;
            meta.insert("n_sites".into(), json!(scan.n_sites));
            meta.insert("jz_star".into(), json!(scan.jz_star));
            meta.insert("note".into(), json!("jz_star drifts with the ring size"));
            let rows = scan
                .rows
                .iter()
                .map(|r| vec![r.jz.into(), r.e0.into(), r.threshold.into(), r.e_bind.into()])
                .collect();
            Table { columns: vec!["Jz", "E0_2magnon", "threshold_2eps", "E_bind"], rows }
        }
    })
}

fn report(err: &Error) -> i32 {
    eprintln!("magnon: {err}");
    if err.is_validation() { 2 } else { 1 }
}

/// Parse `argv` (program name first), run, and return the exit code:
/// 0 on success, 2 for usage or validation errors, 1 for numerical or I/O
/// failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => return report(&e),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cmd = cli.command;
    let plan = match plan(&cmd) {
        Ok(p) => p,
        Err(e) => return report(&e),
    };

    let mut meta = Map::new();
    meta.insert("tool".into(), json!("magnon"));
    meta.insert("version".into(), json!(VERSION));
    meta.insert("subcommand".into(), json!(cmd.name()));
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    meta.insert("argv".into(), json!(argv));
    meta.insert("params".into(), cmd.params());

    let common = cmd.common().clone();
    let path = output_path(&cmd);
    let table = match execute(plan, common.workers, &mut meta) {
        Ok(t) => t,
        Err(e) => return report(&e),
    };
    let meta = Meta {
        fields: meta,
        timestamp: humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string(),
    };
    match emit_table(&table, &meta, common.format, &path) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("magnon: cannot write {}: {e}", path.display());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digit_round_trip() {
        for x in [1.0 / 3.0, -2.0e-9, 123456.789012345, 6.02214076e23, 1.0, -0.5, 7.0e-300] {
            let s = format_sig(x, 12);
            let y: f64 = s.parse().unwrap();
            assert!((y - x).abs() <= 1e-11 * x.abs(), "{x} -> {s}");
        }
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(2.5, 12), "2.5");
    }

    #[test]
    fn config_flags_precede_explicit_ones() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "alpha = 2.5\nstates = 3\n").unwrap();
        let args: Vec<OsString> = ["magnon", "efimov-spectrum", "--config", cfg.to_str().unwrap(), "--alpha", "2.2"]
            .iter()
            .map(OsString::from)
            .collect();
        let out = expand_config(args).unwrap();
        let cli = Cli::try_parse_from(&out).unwrap();
        let Command::EfimovSpectrum(a) = cli.command else { panic!() };
        assert_eq!(a.alpha, 2.2);
        assert_eq!(a.states, 3);
    }
}
