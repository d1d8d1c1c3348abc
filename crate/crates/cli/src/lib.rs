//! Command-line driving: option parsing, config-file handling, output files.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for solver or
//! I/O failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sve_core::{
    manufactured_convergence, BedloadClosure, FieldState, Preset, RunConfig, RunOutput,
    StarSolver, SveError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<SveError> for CliError {
    fn from(e: SveError) -> Self {
        match e {
            SveError::ConfigError(_) | SveError::UnsupportedInput(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Solver(format!("i/o error: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "sve", about = "1D coupled shallow-water and movable-bed solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one of the named experiment presets.
    Solve(SolveArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct SolveArgs {
    /// Preset name (c_property, convergence_aeno, riemann_movable,
    /// riemann_fixed, hump_long, hump_small_near_critical,
    /// hump_small_supercritical).
    #[arg(long)]
    pub preset: Option<String>,

    /// Flat key=value config file; command-line flags win over file entries.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Scheme order, 1 or 2.
    #[arg(long)]
    pub order: Option<u8>,

    /// Interior cell count.
    #[arg(long = "M")]
    pub m: Option<usize>,

    #[arg(long)]
    pub cfl: Option<f64>,

    /// Final time override [s].
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,

    /// Star-state solver: linearized or iterative.
    #[arg(long)]
    pub star: Option<String>,

    /// Gauss points on the path integral, 1..=3.
    #[arg(long)]
    pub ngp: Option<usize>,

    /// Output directory (default out/<preset>).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Intermediate snapshot times [s]; may repeat.
    #[arg(long = "snap")]
    pub snapshots: Vec<f64>,
}

fn parse_star(s: &str) -> Result<StarSolver, CliError> {
    match s {
        "linearized" => Ok(StarSolver::Linearized),
        "iterative" => Ok(StarSolver::Iterative),
        other => Err(CliError::Config(format!(
            "key 'star': unknown solver '{other}' (expected linearized or iterative)"
        ))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("key '{key}': cannot parse value '{v}'")))
}

/// Merge a flat key=value file into the argument set. File entries fill only
/// the options not already given on the command line; unknown keys are
/// configuration errors.
pub fn merge_config_file(args: &mut SolveArgs, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("{}:{}: expected key=value", path.display(), ln + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "preset" => {
                if args.preset.is_none() {
                    args.preset = Some(value.to_string());
                }
            }
            "order" => {
                if args.order.is_none() {
                    args.order = Some(parse_num(key, value)?);
                }
            }
            "m" => {
                if args.m.is_none() {
                    args.m = Some(parse_num(key, value)?);
                }
            }
            "cfl" => {
                if args.cfl.is_none() {
                    args.cfl = Some(parse_num(key, value)?);
                }
            }
            "t_final" => {
                if args.t_final.is_none() {
                    args.t_final = Some(parse_num(key, value)?);
                }
            }
            "star" => {
                if args.star.is_none() {
                    args.star = Some(value.to_string());
                }
            }
            "ngp" => {
                if args.ngp.is_none() {
                    args.ngp = Some(parse_num(key, value)?);
                }
            }
            "out" => {
                if args.out.is_none() {
                    args.out = Some(PathBuf::from(value));
                }
            }
            "snap" => {
                if args.snapshots.is_empty() {
                    for part in value.split(',') {
                        args.snapshots.push(parse_num(key, part.trim())?);
                    }
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "{}:{}: unknown key '{other}'",
                    path.display(),
                    ln + 1
                )))
            }
        }
    }
    Ok(())
}

/// Resolve the fully expanded configuration from flags plus optional file.
pub fn resolve_config(args: &SolveArgs) -> Result<(Preset, RunConfig, PathBuf), CliError> {
    let mut args = args.clone();
    if let Some(path) = args.config.clone() {
        merge_config_file(&mut args, &path)?;
    }
    let name = args.preset.clone().ok_or_else(|| {
        CliError::Config("missing required key 'preset' (flag --preset or config file)".into())
    })?;
    let preset = Preset::from_name(&name)?;
    let mut cfg = preset.config();
    if let Some(order) = args.order {
        cfg.scheme_order = order;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    if let Some(cfl) = args.cfl {
        cfg.cfl = cfl;
    }
    if let Some(t) = args.t_final {
        cfg.t_final = t;
    }
    if let Some(s) = &args.star {
        cfg.star_solver = parse_star(s)?;
    }
    if let Some(n) = args.ngp {
        cfg.n_gp = n;
    }
    cfg.output_times = args.snapshots.clone();
    cfg.validate()?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(preset.name()));
    Ok((preset, cfg, out))
}

/// CSV snapshot: x, h, q, eta, H, u, Fr, qb with round-trip-safe digits.
pub fn snapshot_csv(f: &FieldState, g: f64, closure: &BedloadClosure) -> Result<String, CliError> {
    let mut s = String::from("x,h,q,eta,H,u,Fr,qb\n");
    for (i, c) in f.interior().iter().enumerate() {
        let p = c.primitives(g);
        let qb = closure.bedload_flux(p.u, c.h)?;
        writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            f.x_center(i),
            c.h,
            c.q,
            c.eta,
            c.surface(),
            p.u,
            p.froude,
            qb
        )
        .expect("string write cannot fail");
    }
    Ok(s)
}

fn mass_totals(f: &FieldState) -> (f64, f64) {
    let mut h = 0.0;
    let mut eta = 0.0;
    for c in f.interior() {
        h += c.h;
        eta += c.eta;
    }
    (h * f.dx, eta * f.dx)
}

/// Plain-text run summary.
pub fn summary_text(
    preset: Preset,
    cfg: &RunConfig,
    init: &FieldState,
    out: &RunOutput,
) -> String {
    let (h0, e0) = mass_totals(init);
    let (h1, e1) = mass_totals(&out.final_field);
    let (mut h_min, mut h_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut drift = 0.0f64;
    for (a, b) in init.interior().iter().zip(out.final_field.interior()) {
        h_min = h_min.min(b.h);
        h_max = h_max.max(b.h);
        drift = drift.max((b.surface() - a.surface()).abs());
    }
    let mut s = String::new();
    let _ = writeln!(s, "preset={}", preset.name());
    let _ = writeln!(s, "order={}", cfg.scheme_order);
    let _ = writeln!(s, "M={}", cfg.m);
    let _ = writeln!(s, "cfl={}", cfg.cfl);
    let _ = writeln!(s, "t_final={}", cfg.t_final);
    let _ = writeln!(s, "steps={}", out.steps);
    let _ = writeln!(s, "wall_seconds={:.3}", out.cpu_seconds);
    let _ = writeln!(s, "mass_h_initial={h0:.16e}");
    let _ = writeln!(s, "mass_h_final={h1:.16e}");
    let _ = writeln!(s, "mass_eta_initial={e0:.16e}");
    let _ = writeln!(s, "mass_eta_final={e1:.16e}");
    let _ = writeln!(s, "min_h={h_min:.16e}");
    let _ = writeln!(s, "max_h={h_max:.16e}");
    let _ = writeln!(s, "max_surface_drift={drift:.16e}");
    s
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    fs::write(dir.join(name), content)?;
    Ok(())
}

/// Doubling grid ladder from 20 up to `m_top`.
fn ladder_grids(m_top: usize) -> Result<Vec<usize>, CliError> {
    let mut ms = vec![20usize];
    while *ms.last().unwrap() < m_top {
        ms.push(ms.last().unwrap() * 2);
    }
    if *ms.last().unwrap() != m_top {
        return Err(CliError::Config(format!(
            "convergence grid M={m_top} is not 20 times a power of two"
        )));
    }
    Ok(ms)
}

/// Execute the solve command; returns the list of files written.
pub fn run_solve(args: &SolveArgs) -> Result<Vec<PathBuf>, CliError> {
    let (preset, cfg, out_dir) = resolve_config(args)?;
    fs::create_dir_all(&out_dir)?;
    let mut written = Vec::new();

    if preset == Preset::ConvergenceAeno {
        let report = manufactured_convergence(&cfg, &ladder_grids(cfg.m)?)?;
        write_file(&out_dir, "rates.csv", &report.to_csv())?;
        written.push(out_dir.join("rates.csv"));
        write_file(&out_dir, "rates.txt", &report.to_text())?;
        written.push(out_dir.join("rates.txt"));
        return Ok(written);
    }

    let init = preset.initial_field(&cfg)?;
    let out = sve_core::simulate(&cfg, init.clone())?;
    for (t, field) in &out.snapshots {
        let name = format!("snapshot_{t:.6}.csv");
        write_file(&out_dir, &name, &snapshot_csv(field, cfg.g, &cfg.closure)?)?;
        written.push(out_dir.join(name));
    }
    let name = format!("snapshot_{:.6}.csv", out.final_field.t);
    write_file(&out_dir, &name, &snapshot_csv(&out.final_field, cfg.g, &cfg.closure)?)?;
    written.push(out_dir.join(name));
    write_file(&out_dir, "summary.txt", &summary_text(preset, &cfg, &init, &out))?;
    written.push(out_dir.join("summary.txt"));
    Ok(written)
}
