//! Batch runs: flat TOML configuration, solver driver and on-disk artifacts.
//!
//! A run directory holds `profiles.csv`, `summary.json`, `convergence.csv`
//! and `manifest.json`. `summary.json` carries no wall-clock data, so
//! repeated runs of one configuration reproduce it byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::coulomb_ref::{self, ComparisonReport, ModelLevels};
use crate::error::Error;
use crate::grid::{
    self, PhysicalConstants, RadialFunction, RadialGrid, Weight, BOHR_TO_ANGSTROM, DEFAULT_R_MAX,
    DEFAULT_SPACING, HARTREE_TO_EV,
};
use crate::radial_ode::DEFAULT_ENERGY_CEILING;
use crate::scf::{
    self, Confinement, EigenstateSolution, InitialGuess, ResidualRecord, ScfConfig,
    DEFAULT_BALL_RADIUS_E, DEFAULT_BALL_RADIUS_P,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_COMPARE_NMAX: u32 = 3;

pub const PROFILES_FILE: &str = "profiles.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub const PROFILES_HEADER: &str = "r,psi_p,psi_e,phi,rho,e_field";
pub const CONVERGENCE_HEADER: &str = "iteration,phi_residual,delta_e_p,delta_e_e";

const KNOWN_KEYS: &[&str] = &[
    "mass_p",
    "grid_spacing",
    "r_max",
    "node_p",
    "node_e",
    "mixing",
    "tol_phi",
    "tol_energy",
    "max_iter",
    "initial_guess",
    "initial_phi_file",
    "ball_radius_p",
    "ball_radius_e",
    "trap_depth",
    "trap_radius",
    "energy_ceiling",
    "compare_nmax",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("invalid configuration {}:\n  {}", path.display(), errors.join("\n  "))]
    Config { path: PathBuf, errors: Vec<String> },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("malformed summary {}: {source}", path.display())]
    Summary {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error(transparent)]
    Model(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Config { .. } | CliError::Summary { .. } => 4,
            CliError::Model(e) => match e.root() {
                Error::InvalidInput(_) | Error::GridMismatch => 4,
                _ => 1,
            },
            CliError::Write { .. } => 1,
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Converged,
    NoBoundState,
    MaxIter,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Converged => 0,
            Outcome::NoBoundState => 2,
            Outcome::MaxIter => 3,
        }
    }

    /// Solver errors that are legitimate run outcomes rather than faults.
    pub fn from_error(e: &Error) -> Option<Self> {
        if e.is_no_bound_state() {
            return Some(Outcome::NoBoundState);
        }
        match (e, e.root()) {
            (Error::NonConvergence { .. }, _) | (_, Error::ConvergenceFailure { .. }) => {
                Some(Outcome::MaxIter)
            }
            _ => None,
        }
    }
}

/// Resolved configuration as echoed into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mass_p: f64,
    pub mass_e: f64,
    pub grid_spacing: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub node_p: usize,
    pub node_e: usize,
    pub mixing: f64,
    pub tol_phi: f64,
    pub tol_energy: f64,
    pub max_iter: usize,
    pub initial_guess: String,
    pub initial_phi_file: Option<String>,
    pub ball_radius_p: f64,
    pub ball_radius_e: f64,
    pub trap_depth: Option<f64>,
    pub trap_radius: Option<f64>,
    pub energy_ceiling: f64,
    pub compare_nmax: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scf: ScfConfig,
    pub compare_nmax: u32,
    pub echo: ConfigEcho,
}

impl RunConfig {
    /// Human-readable listing of the resolved parameters.
    pub fn describe(&self) -> String {
        let e = &self.echo;
        let g = &self.scf.grid;
        let mut s = String::new();
        let _ = writeln!(s, "units: Hartree atomic units (hbar = e = m_e = 1)");
        let _ = writeln!(
            s,
            "  1 bohr = {BOHR_TO_ANGSTROM} angstrom, 1 hartree = {HARTREE_TO_EV} eV"
        );
        let _ = writeln!(
            s,
            "grid: {} points, spacing {} bohr, r_max {} bohr ({:.6} angstrom)",
            g.len(),
            g.spacing(),
            g.r_max(),
            g.r_max() * BOHR_TO_ANGSTROM
        );
        let _ = writeln!(s, "mass_p = {} m_e, mass_e = {} m_e", e.mass_p, e.mass_e);
        let _ = writeln!(s, "node_p = {}, node_e = {}", e.node_p, e.node_e);
        let _ = writeln!(
            s,
            "mixing = {}, tol_phi = {:e}, tol_energy = {:e} hartree, max_iter = {}",
            e.mixing, e.tol_phi, e.tol_energy, e.max_iter
        );
        let _ = write!(s, "initial_guess = {}", e.initial_guess);
        match e.initial_guess.as_str() {
            "uniform-ball" => {
                let _ = write!(s, " (radii {} / {} bohr)", e.ball_radius_p, e.ball_radius_e);
            }
            "user" => {
                let _ = write!(s, " ({})", e.initial_phi_file.as_deref().unwrap_or("?"));
            }
            _ => {}
        }
        s.push('\n');
        match (e.trap_depth, e.trap_radius) {
            (Some(d), Some(r)) => {
                let _ = writeln!(s, "trap: depth {d} hartree, radius {r} bohr");
            }
            _ => {
                let _ = writeln!(s, "trap: none");
            }
        }
        let _ = writeln!(s, "energy_ceiling = {:e} hartree", e.energy_ceiling);
        let _ = writeln!(s, "compare_nmax = {}", e.compare_nmax);
        s
    }
}

fn float_of(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

struct Reader<'a> {
    table: &'a Table,
    errors: Vec<String>,
}

impl Reader<'_> {
    fn float(&mut self, key: &str, default: f64) -> f64 {
        self.opt_float(key).unwrap_or(default)
    }

    fn opt_float(&mut self, key: &str) -> Option<f64> {
        let v = self.table.get(key)?;
        let x = float_of(v);
        if x.is_none() {
            self.errors
                .push(format!("{key}: expected a number, got {}", v.type_str()));
        }
        x
    }

    fn count(&mut self, key: &str, default: usize) -> usize {
        match self.table.get(key) {
            None => default,
            Some(Value::Integer(i)) if *i >= 0 => *i as usize,
            Some(v) => {
                self.errors
                    .push(format!("{key}: expected a non-negative integer, got {v}"));
                default
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.table.get(key)? {
            Value::String(s) => Some(s.clone()),
            v => {
                self.errors
                    .push(format!("{key}: expected a string, got {}", v.type_str()));
                None
            }
        }
    }
}

/// Parses and checks a configuration file. Every problem is reported, each
/// prefixed with the offending key.
pub fn validate_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path.parent().unwrap_or(Path::new("."))).map_err(|errors| {
        CliError::Config {
            path: path.to_path_buf(),
            errors,
        }
    })
}

/// [`validate_config`] on text; relative file references resolve from `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<RunConfig, Vec<String>> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| vec![e.to_string()])?;
    let mut r = Reader {
        table: &table,
        errors: table
            .keys()
            .filter(|k| !KNOWN_KEYS.contains(&k.as_str()))
            .map(|k| format!("{k}: unknown key"))
            .collect(),
    };

    let mass_p = r.float("mass_p", grid::PROTON_ELECTRON_MASS_RATIO);
    let spacing = r.float("grid_spacing", DEFAULT_SPACING);
    let r_max = r.float("r_max", DEFAULT_R_MAX);
    let node_p = r.count("node_p", 0);
    let node_e = r.count("node_e", 0);
    let mixing = r.float("mixing", scf::DEFAULT_MIXING);
    let tol_phi = r.float("tol_phi", scf::DEFAULT_TOL_PHI);
    let tol_energy = r.float("tol_energy", scf::DEFAULT_TOL_ENERGY);
    let max_iter = r.count("max_iter", scf::DEFAULT_MAX_ITER);
    let guess = r
        .string("initial_guess")
        .unwrap_or_else(|| "hydrogenic".into());
    let phi_file = r.string("initial_phi_file");
    let ball_p = r.float("ball_radius_p", DEFAULT_BALL_RADIUS_P);
    let ball_e = r.float("ball_radius_e", DEFAULT_BALL_RADIUS_E);
    let trap_depth = r.opt_float("trap_depth");
    let trap_radius = r.opt_float("trap_radius");
    let energy_ceiling = r.float("energy_ceiling", DEFAULT_ENERGY_CEILING);
    let compare_nmax = r.count("compare_nmax", DEFAULT_COMPARE_NMAX as usize);
    let mut errors = r.errors;

    if !(spacing.is_finite() && spacing > 0.0) {
        errors.push(format!("grid_spacing: must be positive, got {spacing}"));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        errors.push(format!("r_max: must be positive, got {r_max}"));
    }
    let grid = if errors
        .iter()
        .any(|e| e.starts_with("grid_spacing") || e.starts_with("r_max"))
    {
        None
    } else {
        match RadialGrid::with_extent(spacing, r_max) {
            Ok(g) => Some(g),
            Err(e) => {
                errors.push(format!("grid_spacing/r_max: {e}"));
                None
            }
        }
    };
    let compare_nmax = match u32::try_from(compare_nmax) {
        Ok(n) if n >= 1 => n,
        _ => {
            errors.push(format!(
                "compare_nmax: must be in 1..=2^32-1, got {compare_nmax}"
            ));
            DEFAULT_COMPARE_NMAX
        }
    };
    let confinement = match (trap_depth, trap_radius) {
        (None, None) => None,
        (Some(depth), Some(radius)) => Some(Confinement { depth, radius }),
        _ => {
            errors.push("trap_depth/trap_radius: both or neither must be given".into());
            None
        }
    };
    if phi_file.is_some() && guess != "user" {
        errors.push("initial_phi_file: only used with initial_guess = \"user\"".into());
    }

    let grid_or_default = grid.unwrap_or_default();
    let initial_guess = match guess.as_str() {
        "hydrogenic" => InitialGuess::Hydrogenic,
        "uniform-ball" => InitialGuess::UniformBall {
            radius_p: ball_p,
            radius_e: ball_e,
        },
        "user" => match (&phi_file, grid) {
            (None, _) => {
                errors.push("initial_phi_file: required when initial_guess = \"user\"".into());
                InitialGuess::Hydrogenic
            }
            (Some(f), Some(g)) => match load_potential(&base.join(f), g) {
                Ok(phi) => InitialGuess::User(phi),
                Err(e) => {
                    errors.push(format!("initial_phi_file: {e}"));
                    InitialGuess::Hydrogenic
                }
            },
            (Some(_), None) => InitialGuess::Hydrogenic,
        },
        other => {
            errors.push(format!(
                "initial_guess: expected \"hydrogenic\", \"uniform-ball\" or \"user\", got \"{other}\""
            ));
            InitialGuess::Hydrogenic
        }
    };

    let scf_config = ScfConfig {
        constants: PhysicalConstants {
            mass_p,
            ..PhysicalConstants::default()
        },
        node_p,
        node_e,
        mixing,
        tol_phi,
        tol_energy,
        max_iter,
        initial_guess,
        confinement,
        energy_ceiling,
        ..ScfConfig::new(grid_or_default)
    };
    errors.extend(scf_config.violations());
    if !errors.is_empty() {
        return Err(errors);
    }

    let echo = ConfigEcho {
        mass_p,
        mass_e: scf_config.constants.mass_e,
        grid_spacing: spacing,
        r_max: grid_or_default.r_max(),
        n_points: grid_or_default.len(),
        node_p,
        node_e,
        mixing,
        tol_phi,
        tol_energy,
        max_iter,
        initial_guess: guess,
        initial_phi_file: phi_file,
        ball_radius_p: ball_p,
        ball_radius_e: ball_e,
        trap_depth,
        trap_radius,
        energy_ceiling,
        compare_nmax,
    };
    Ok(RunConfig {
        scf: scf_config,
        compare_nmax,
        echo,
    })
}

/// Reads a potential from a CSV file with a header row naming a `phi`
/// column (a `profiles.csv` qualifies). When an `r` column is present it
/// must match the grid.
pub fn load_potential(path: &Path, grid: RadialGrid) -> Result<RadialFunction, String> {
    let table = read_csv(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let phi = table.column("phi")?;
    if phi.len() != grid.len() {
        return Err(format!(
            "{} has {} rows, the grid has {} points",
            path.display(),
            phi.len(),
            grid.len()
        ));
    }
    if let Ok(r) = table.column("r") {
        let tol = 1e-9 * grid.spacing();
        if r.iter()
            .enumerate()
            .any(|(i, x)| (x - grid.r(i)).abs() > tol)
        {
            return Err(format!(
                "{}: r column does not match the grid",
                path.display()
            ));
        }
    }
    RadialFunction::new(grid, phi).map_err(|e| e.to_string())
}

/// Numeric CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Result<Vec<f64>, String> {
        let j = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("no column named {name:?}"))?;
        Ok(self.rows.iter().map(|row| row[j]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| e.to_string())?;
    let header = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .map(str::parse::<f64>)
            .collect::<Result<_, _>>()
            .map_err(|e| format!("row {}: {e}", k + 1))?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub final_phi_residual: Option<f64>,
    pub poisson: f64,
    pub eigen_p: f64,
    pub eigen_e: f64,
    pub norm_p: f64,
    pub norm_e: f64,
    pub total_charge: f64,
    pub current_mismatch: f64,
}

/// The sign check on the converged levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySignCheck {
    pub e_p_nonpositive: bool,
    pub e_e_nonpositive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub version: String,
    pub outcome: Outcome,
    pub message: Option<String>,
    pub failed_particle: Option<crate::error::Particle>,
    pub iterations: usize,
    pub mass_p: f64,
    pub mass_e: f64,
    #[serde(rename = "E_p")]
    pub e_p: Option<f64>,
    #[serde(rename = "E_e")]
    pub e_e: Option<f64>,
    #[serde(rename = "E_total")]
    pub e_total: Option<f64>,
    pub gauge_constant: Option<f64>,
    pub electron_r_mean: Option<f64>,
    pub electron_r2_mean: Option<f64>,
    pub energy_sign_check: Option<EnergySignCheck>,
    pub residuals: Option<Residuals>,
    pub comparison: Option<ComparisonReport>,
    pub history: Vec<ResidualRecord>,
}

impl RunSummary {
    pub fn model_levels(&self) -> Option<ModelLevels> {
        Some(ModelLevels {
            mass_p: self.mass_p,
            mass_e: self.mass_e,
            e_p: self.e_p?,
            e_e: self.e_e?,
            e_total: self.e_total?,
            electron_r_mean: self.electron_r_mean?,
            electron_r2_mean: self.electron_r2_mean?,
            converged: self.outcome == Outcome::Converged,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ConfigEcho,
    pub version: String,
    pub timestamp: String,
    pub input_sha256: String,
    pub outcome: Outcome,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunFlags {
    pub dry_run: bool,
    pub quiet: bool,
}

pub fn profiles_csv(sol: &EigenstateSolution) -> String {
    let g = sol.grid();
    let mut s = String::with_capacity(g.len() * 150);
    s.push_str(PROFILES_HEADER);
    s.push('\n');
    for i in 0..g.len() {
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            g.r(i),
            sol.psi_p.psi.values()[i],
            sol.psi_e.psi.values()[i],
            sol.phi.values()[i],
            sol.rho.rho.values()[i],
            sol.e_field.values()[i]
        );
    }
    s
}

pub fn convergence_csv(history: &[ResidualRecord]) -> String {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for h in history {
        let _ = writeln!(
            s,
            "{},{:.16e},{},{}",
            h.iteration,
            h.phi_residual,
            opt(h.delta_e_p),
            opt(h.delta_e_e)
        );
    }
    s
}

/// Quadrature norms `4π∫|ψ|²r²dr` of the two states stored in a profiles file.
pub fn profile_norms(path: &Path) -> Result<(f64, f64), String> {
    let table = read_csv(path)?;
    let r = table.column("r")?;
    if r.len() < 2 {
        return Err("too few rows".into());
    }
    let grid = RadialGrid::new(r[1] - r[0], r.len()).map_err(|e| e.to_string())?;
    let norm = |name: &str| -> Result<f64, String> {
        let f = RadialFunction::new(grid, table.column(name)?).map_err(|e| e.to_string())?;
        let sq = RadialFunction::new(grid, f.values().iter().map(|x| x * x).collect())
            .map_err(|e| e.to_string())?;
        grid::integrate_radial(&sq, Weight::Spherical).map_err(|e| e.to_string())
    };
    Ok((norm("psi_p")?, norm("psi_e")?))
}

fn summarize(
    config: &RunConfig,
    result: &Result<EigenstateSolution, Error>,
) -> Result<(Outcome, RunSummary), Error> {
    let c = &config.scf.constants;
    let mut summary = RunSummary {
        version: VERSION.into(),
        outcome: Outcome::Converged,
        message: None,
        failed_particle: None,
        iterations: 0,
        mass_p: c.mass_p,
        mass_e: c.mass_e,
        e_p: None,
        e_e: None,
        e_total: None,
        gauge_constant: None,
        electron_r_mean: None,
        electron_r2_mean: None,
        energy_sign_check: None,
        residuals: None,
        comparison: None,
        history: Vec::new(),
    };
    match result {
        Ok(sol) => {
            let d = &sol.diagnostics;
            summary.iterations = sol.iterations;
            summary.e_p = Some(sol.e_p);
            summary.e_e = Some(sol.e_e);
            summary.e_total = Some(sol.total_energy());
            summary.gauge_constant = Some(sol.gauge_constant);
            summary.electron_r_mean = Some(sol.psi_e.moment(1)?);
            summary.electron_r2_mean = Some(sol.psi_e.moment(2)?);
            summary.energy_sign_check = Some(EnergySignCheck {
                e_p_nonpositive: sol.e_p <= 0.0,
                e_e_nonpositive: sol.e_e <= 0.0,
            });
            summary.residuals = Some(Residuals {
                final_phi_residual: sol.residual_history.last().map(|h| h.phi_residual),
                poisson: d.poisson_residual,
                eigen_p: d.eigen_residual_p,
                eigen_e: d.eigen_residual_e,
                norm_p: d.norm_p,
                norm_e: d.norm_e,
                total_charge: d.total_charge,
                current_mismatch: d.current_mismatch,
            });
            summary.comparison = Some(coulomb_ref::compare_models(sol, config.compare_nmax)?);
            summary.history = sol.residual_history.clone();
            Ok((Outcome::Converged, summary))
        }
        Err(e) => {
            let outcome = Outcome::from_error(e).expect("faults are returned before summarizing");
            summary.outcome = outcome;
            summary.message = Some(e.to_string());
            summary.failed_particle = e.particle();
            summary.history = e.history().map(<[_]>::to_vec).unwrap_or_default();
            summary.iterations = match e {
                Error::ModelFailure { iteration, .. } => *iteration,
                Error::NonConvergence { iterations, .. } => *iterations,
                _ => summary.history.len(),
            };
            Ok((outcome, summary))
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Write { path, source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Validates the configuration, runs the solver and writes the artifacts.
/// Returns the run outcome; [`Outcome::exit_code`] maps it to a status.
pub fn run(config_path: &Path, out_dir: &Path, flags: RunFlags) -> Result<Outcome, CliError> {
    let config = validate_config(config_path)?;
    if flags.dry_run {
        print!("{}", config.describe());
        return Ok(Outcome::Converged);
    }
    let input = fs::read(config_path).map_err(|source| CliError::Read {
        path: config_path.to_path_buf(),
        source,
    })?;

    let result = scf::scf_solve_observed(&config.scf, |rec| {
        if !flags.quiet {
            let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3e}"));
            eprintln!(
                "iter {:4}  dphi {:.3e}  dE_p {}  dE_e {}",
                rec.iteration,
                rec.phi_residual,
                fmt(rec.delta_e_p),
                fmt(rec.delta_e_e)
            );
        }
    });
    let result = match result {
        Err(e) if Outcome::from_error(&e).is_none() => return Err(e.into()),
        r => r,
    };
    let (outcome, summary) = summarize(&config, &result)?;

    fs::create_dir_all(out_dir).map_err(|source| CliError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    if let Ok(sol) = &result {
        write_file(out_dir, PROFILES_FILE, &profiles_csv(sol))?;
        files.push(PROFILES_FILE.to_string());
    }
    write_file(out_dir, SUMMARY_FILE, &to_json(&summary))?;
    write_file(
        out_dir,
        CONVERGENCE_FILE,
        &convergence_csv(&summary.history),
    )?;
    files.push(SUMMARY_FILE.into());
    files.push(CONVERGENCE_FILE.into());
    files.push(MANIFEST_FILE.into());
    let manifest = RunManifest {
        config: config.echo.clone(),
        version: VERSION.into(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        input_sha256: hex::encode(Sha256::digest(&input)),
        outcome,
        files,
    };
    write_file(out_dir, MANIFEST_FILE, &to_json(&manifest))?;

    if !flags.quiet {
        match &summary.message {
            Some(m) => eprintln!("outcome: {outcome:?}: {m}"),
            None => eprintln!(
                "outcome: converged in {} iterations, E_p = {:.12}, E_e = {:.12}, E_total = {:.12}",
                summary.iterations,
                summary.e_p.unwrap_or(f64::NAN),
                summary.e_e.unwrap_or(f64::NAN),
                summary.e_total.unwrap_or(f64::NAN)
            ),
        }
    }
    Ok(outcome)
}

pub fn read_summary(path: &Path) -> Result<RunSummary, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Summary {
        path: path.to_path_buf(),
        source,
    })
}

/// Coulomb comparison table rebuilt from a stored summary.
pub fn compare_summary(path: &Path, n_max: u32) -> Result<ComparisonReport, CliError> {
    let summary = read_summary(path)?;
    let levels = summary.model_levels().ok_or_else(|| {
        CliError::Model(Error::InvalidInput(format!(
            "{} holds no converged levels (outcome {:?})",
            path.display(),
            summary.outcome
        )))
    })?;
    Ok(coulomb_ref::compare_levels(&levels, n_max)?)
}

/// Analytic level `n` of hydrogen with proton mass `mass_p` (in m_e).
pub fn coulomb_oracle(n: u32, mass_p: f64) -> Result<coulomb_ref::CoulombLevel, CliError> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()).into());
    }
    let mu = coulomb_ref::reduced_mass(mass_p, 1.0)?;
    Ok(coulomb_ref::coulomb_level(mu, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("", Path::new(".")).unwrap();
        assert_eq!(cfg.scf, ScfConfig::default());
        assert_eq!(cfg.compare_nmax, DEFAULT_COMPARE_NMAX);
        assert_eq!(cfg.echo.n_points, 20_000);
    }

    #[test]
    fn errors_are_aggregated() {
        let errs =
            parse_config("mixing = 0\ngrid_spacing = -1\nbogus = 3\n", Path::new(".")).unwrap_err();
        assert!(errs.iter().any(|e| e.contains("mixing must be in (0,1]")));
        assert!(errs.iter().any(|e| e.starts_with("grid_spacing")));
        assert!(errs.iter().any(|e| e.starts_with("bogus")));
    }

    #[test]
    fn type_errors_name_the_key() {
        let errs = parse_config("node_p = -1\nmixing = \"x\"", Path::new(".")).unwrap_err();
        assert!(errs.iter().any(|e| e.starts_with("node_p")));
        assert!(errs.iter().any(|e| e.starts_with("mixing")));
    }

    #[test]
    fn trap_needs_both_keys() {
        assert!(parse_config("trap_depth = 1.0", Path::new(".")).is_err());
        let cfg = parse_config("trap_depth = 2\ntrap_radius = 1", Path::new(".")).unwrap();
        assert_eq!(
            cfg.scf.confinement,
            Some(Confinement {
                depth: 2.0,
                radius: 1.0
            })
        );
    }

    #[test]
    fn outcome_classification() {
        let nb = Error::ModelFailure {
            iteration: 1,
            source: Box::new(Error::NoBoundState("x".into())),
            history: vec![],
        };
        assert_eq!(Outcome::from_error(&nb), Some(Outcome::NoBoundState));
        let nc = Error::NonConvergence {
            iterations: 3,
            history: vec![],
        };
        assert_eq!(Outcome::from_error(&nc), Some(Outcome::MaxIter));
        assert_eq!(Outcome::from_error(&Error::GridMismatch), None);
        assert_eq!(Outcome::MaxIter.exit_code(), 3);
    }
}
