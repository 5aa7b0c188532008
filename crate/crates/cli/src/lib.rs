//! Command-line front end: subcommand dispatch, CSV emission,
//! configuration echo, and the exit-code contract.
//!
//! Exit codes: 0 on success, 2 on configuration/usage errors, 3 on
//! numerical failures and I/O errors. Output is CSV with `#`-prefixed
//! comment lines, a header line, then data rows in scientific
//! notation with 16 significant digits; identical invocations produce
//! byte-identical output, including with internal parallelism.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use casimir_densities::config::{self, CavityCutoff, CavityDimensionless, RunConfig};
use casimir_densities::{boundary, cavity, point_source, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Rectangular table of finite reals with leading comment lines.
#[derive(Debug, Clone, Default)]
pub struct OutputTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    comments: Vec<String>,
}

impl OutputTable {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn add_comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    /// Append a row; rejects length mismatches and non-finite values.
    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), Error> {
        if row.len() != self.columns.len() {
            return Err(Error::domain(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite value {bad} in output row")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Scientific notation with 16 significant digits, locale-independent.
pub fn format_value(v: f64) -> String {
    format!("{v:.15e}")
}

/// Emit comments, header, and rows; `\n` line endings, no trailing
/// delimiter.
pub fn write_csv(table: &OutputTable, sink: &mut dyn Write) -> std::io::Result<()> {
    for comment in &table.comments {
        writeln!(sink, "# {comment}")?;
    }
    writeln!(sink, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let mut line = String::new();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "{}", format_value(*v));
        }
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

#[derive(Parser, Debug)]
#[command(
    name = "casimir",
    version,
    about = "Vacuum energy densities near a conducting wall, a point-like source, and in a cavity with a mobile mirror",
    disable_help_subcommand = true
)]
struct Cli {
    /// key = value configuration file; explicit flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Renormalized field fluctuations near the conducting wall
    Boundary(BoundaryArgs),
    /// Energy densities around the point-like polarizable source
    #[command(name = "point-source")]
    PointSource(PointSourceArgs),
    /// Mode sums for the cavity with a mobile mirror
    Cavity(CavityArgs),
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    /// time-splitting parameter eta in seconds (cutoff frequency 1/eta)
    #[arg(long)]
    eta: Option<f64>,
    /// lower edge of the grid, in units of c*eta
    #[arg(long)]
    z_min: Option<f64>,
    /// upper edge of the grid, in units of c*eta
    #[arg(long)]
    z_max: Option<f64>,
    /// number of grid points
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct PointSourceArgs {
    #[command(subcommand)]
    action: Option<PointSourceAction>,
    /// polarizability scale factor (linear in all SI outputs)
    #[arg(long)]
    alpha: Option<f64>,
    /// cutoff length gamma_c in meters (SI conversion only)
    #[arg(long)]
    gamma_c: Option<f64>,
    /// smallest radius, in units of gamma_c
    #[arg(long)]
    r_min: Option<f64>,
    /// largest radius, in units of gamma_c
    #[arg(long)]
    r_max: Option<f64>,
    /// number of radial samples
    #[arg(long)]
    samples: Option<usize>,
    /// logarithmic (true) or linear (false) radial grid
    #[arg(long)]
    log_spacing: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum PointSourceAction {
    /// Scalar diagnostics: far-zone coefficients, self-energies,
    /// cancellation ratio (key = value report)
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// far-zone probe radius in units of gamma_c (>= 100)
    #[arg(long, default_value_t = 1e4)]
    r_probe: f64,
}

#[derive(Args, Debug)]
struct CavityArgs {
    #[command(subcommand)]
    action: CavityAction,
}

#[derive(Subcommand, Debug)]
enum CavityAction {
    /// Dimensionless energy-density change S(x) across the cavity
    Density(CavityCommonArgs),
    /// S(x) statistically averaged over the mirror position spread
    Averaged(CavityCommonArgs),
    /// Renormalized free-field mode-sum baseline with cutoff removal
    Casimir(CasimirArgs),
}

#[derive(Args, Debug, Clone)]
struct CavityCommonArgs {
    /// equilibrium cavity length in meters
    #[arg(long)]
    l0: Option<f64>,
    /// mirror mass in kilograms
    #[arg(long)]
    mass: Option<f64>,
    /// mirror binding frequency in 1/s
    #[arg(long)]
    omega_osc: Option<f64>,
    /// frequency cutoff in 1/s (sets the mode count)
    #[arg(long, conflicts_with = "n_modes")]
    omega_cut: Option<f64>,
    /// mode count, overriding the frequency cutoff
    #[arg(long)]
    n_modes: Option<usize>,
    /// position spread sigma/L0 in (0, 0.1]; overrides the
    /// mass-derived fluctuation parameter
    #[arg(long)]
    sigma_over_l0: Option<f64>,
    /// lower edge of the position grid, in units of L0
    #[arg(long)]
    x_min: Option<f64>,
    /// upper edge of the position grid, in units of L0
    #[arg(long)]
    x_max: Option<f64>,
    /// number of position samples
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct CasimirArgs {
    /// regulator value; repeat the flag for the extrapolation
    /// sequence (strictly decreasing, each in (0, 0.5])
    #[arg(long = "epsilon", value_name = "EPS")]
    epsilons: Vec<f64>,
}

/// Entry point shared by the binary and the tests. Writes results to
/// `stdout` (or `--out`), diagnostics to `stderr`, and returns the
/// process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                ErrorKind::InvalidSubcommand => {
                    let _ = writeln!(stderr, "error: unknown subcommand");
                    let _ = write!(stderr, "{e}");
                    EXIT_CONFIG
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_CONFIG
                }
            };
        }
    };

    match execute(&cli) {
        Ok(bytes) => {
            let sink_result = match &cli.out {
                Some(path) => std::fs::write(path, &bytes),
                None => stdout.write_all(&bytes),
            };
            match sink_result {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: failed to write output: {e}");
                    EXIT_NUMERICAL
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Config { .. } => EXIT_CONFIG,
                _ => EXIT_NUMERICAL,
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    match &cli.config {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                line: 0,
                message: format!("cannot read config file {}: {e}", path.display()),
            })?;
            config::parse_config(&text)
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<u8>, Error> {
    let mut cfg = load_config(cli)?;
    let mut buffer = Vec::new();
    match &cli.command {
        Command::Boundary(args) => {
            if let Some(v) = args.eta {
                cfg.boundary.eta = v;
            }
            if let Some(v) = args.z_min {
                cfg.boundary.z_min = v;
            }
            if let Some(v) = args.z_max {
                cfg.boundary.z_max = v;
            }
            if let Some(v) = args.samples {
                cfg.boundary.samples = v;
            }
            let table = boundary_table(&cfg)?;
            write_csv(&table, &mut buffer).map_err(io_error)?;
        }
        Command::PointSource(args) => {
            if let Some(v) = args.alpha {
                cfg.source.alpha = v;
            }
            if let Some(v) = args.gamma_c {
                cfg.source.gamma_c = v;
            }
            if let Some(v) = args.r_min {
                cfg.source.r_min = v;
            }
            if let Some(v) = args.r_max {
                cfg.source.r_max = v;
            }
            if let Some(v) = args.samples {
                cfg.source.samples = v;
            }
            if let Some(v) = args.log_spacing {
                cfg.source.log_spacing = v;
            }
            match &args.action {
                None => {
                    let table = point_source_table(&cfg)?;
                    write_csv(&table, &mut buffer).map_err(io_error)?;
                }
                Some(PointSourceAction::Check(check)) => {
                    point_source_check(check.r_probe, &mut buffer)?;
                }
            }
        }
        Command::Cavity(args) => match &args.action {
            CavityAction::Density(common) => {
                apply_cavity_overrides(&mut cfg, common)?;
                let table = cavity_density_table(&cfg)?;
                write_csv(&table, &mut buffer).map_err(io_error)?;
            }
            CavityAction::Averaged(common) => {
                apply_cavity_overrides(&mut cfg, common)?;
                let table = cavity_averaged_table(&cfg)?;
                write_csv(&table, &mut buffer).map_err(io_error)?;
            }
            CavityAction::Casimir(casimir) => {
                let table = cavity_casimir_table(&casimir.epsilons)?;
                write_csv(&table, &mut buffer).map_err(io_error)?;
            }
        },
    }
    Ok(buffer)
}

fn io_error(e: std::io::Error) -> Error {
    Error::domain(format!("output error: {e}"))
}

fn apply_cavity_overrides(cfg: &mut RunConfig, args: &CavityCommonArgs) -> Result<(), Error> {
    if let Some(v) = args.l0 {
        cfg.cavity.l0 = v;
    }
    if let Some(v) = args.mass {
        cfg.cavity.mass = v;
    }
    if let Some(v) = args.omega_osc {
        cfg.cavity.omega_osc = v;
    }
    if let Some(v) = args.omega_cut {
        cfg.cavity.cutoff = CavityCutoff::OmegaCut(v);
    }
    if let Some(v) = args.n_modes {
        cfg.cavity.cutoff = CavityCutoff::NModes(v);
    }
    if let Some(v) = args.sigma_over_l0 {
        cfg.cavity.sigma_over_l0 = Some(v);
    }
    if let Some(v) = args.x_min {
        cfg.cavity.x_min = v;
    }
    if let Some(v) = args.x_max {
        cfg.cavity.x_max = v;
    }
    if let Some(v) = args.samples {
        cfg.cavity.samples = v;
    }
    cfg.cavity.validate()
}

fn boundary_table(cfg: &RunConfig) -> Result<OutputTable, Error> {
    let points = boundary::sample_profile(&cfg.boundary)?;
    let mut table = OutputTable::new(["z_over_ceta", "e2_renorm", "b2_renorm", "e2_ideal"]);
    table.add_comment(format!(
        "eta = {:e} s (cutoff frequency 1/eta = {:e} 1/s)",
        cfg.boundary.eta,
        1.0 / cfg.boundary.eta
    ));
    table.add_comment("units: z in c*eta, fluctuation values in hbar/(c^3 eta^4)".to_string());
    table.add_comment(format!(
        "si_value_unit = {} (multiply values by this for SI)",
        format_value(boundary::si_unit(cfg.boundary.eta, &cfg.constants))
    ));
    let mut omitted_origin = None;
    for p in &points {
        match p.e2_ideal {
            Some(ideal) => {
                table.push_row(vec![p.z_hat, p.e2_renorm, p.b2_renorm, ideal])?;
            }
            None => omitted_origin = Some(*p),
        }
    }
    if let Some(p) = omitted_origin {
        table.add_comment(format!(
            "row at z = 0 omitted: ideal-conductor column undefined there; e2_renorm(0) = {}, b2_renorm(0) = {}",
            format_value(p.e2_renorm),
            format_value(p.b2_renorm)
        ));
    }
    Ok(table)
}

fn point_source_table(cfg: &RunConfig) -> Result<OutputTable, Error> {
    let points = point_source::sample_profile(&cfg.source)?;
    let mut table = OutputTable::new(["r_over_gammac", "u_electric", "u_magnetic", "u_total"]);
    table.add_comment(format!(
        "alpha = {}, gamma_c = {} m",
        cfg.source.alpha, cfg.source.gamma_c
    ));
    table.add_comment("units: r in gamma_c, densities in alpha*hbar*c/gamma_c^7".to_string());
    table.add_comment(format!(
        "si_density_unit = {}",
        format_value(point_source::si_unit(
            cfg.source.alpha,
            cfg.source.gamma_c,
            &cfg.constants
        ))
    ));
    for p in &points {
        table.push_row(vec![p.r_hat, p.u_electric, p.u_magnetic, p.u_total])?;
    }
    Ok(table)
}

fn point_source_check(r_probe: f64, sink: &mut Vec<u8>) -> Result<(), Error> {
    if !(r_probe >= 100.0) {
        return Err(Error::Config {
            line: 0,
            message: format!("--r-probe must be >= 100, got {r_probe}"),
        });
    }
    let far_e = point_source::far_coefficient(point_source::FieldKind::Electric, r_probe)?;
    let far_b = point_source::far_coefficient(point_source::FieldKind::Magnetic, r_probe)?;
    let se_e = point_source::self_energy(point_source::EnergyKind::Electric)?;
    let se_b = point_source::self_energy(point_source::EnergyKind::Magnetic)?;
    let se_t = point_source::self_energy(point_source::EnergyKind::Total)?;
    let mut s = String::new();
    let _ = writeln!(s, "# far-zone coefficients probed at r = {r_probe} gamma_c");
    let _ = writeln!(s, "far_coefficient_electric = {}", format_value(far_e));
    let _ = writeln!(s, "far_coefficient_magnetic = {}", format_value(far_b));
    let _ = writeln!(s, "far_ratio = {}", format_value(far_e / far_b));
    let _ = writeln!(s, "self_energy_electric = {}", format_value(se_e));
    let _ = writeln!(s, "self_energy_magnetic = {}", format_value(se_b));
    let _ = writeln!(s, "self_energy_total = {}", format_value(se_t));
    let _ = writeln!(s, "cancellation_ratio = {}", format_value(se_t.abs() / se_e.abs()));
    sink.extend_from_slice(s.as_bytes());
    Ok(())
}

fn cavity_dimensionless(cfg: &RunConfig) -> Result<CavityDimensionless, Error> {
    config::derive_dimensionless(&cfg.cavity, &cfg.constants)
}

fn position_grid(cfg: &RunConfig) -> Vec<f64> {
    let n = cfg.cavity.samples;
    let step = (cfg.cavity.x_max - cfg.cavity.x_min) / (n - 1) as f64;
    (0..n).map(|i| cfg.cavity.x_min + i as f64 * step).collect()
}

fn add_cavity_comments(
    table: &mut OutputTable,
    cfg: &RunConfig,
    dims: &CavityDimensionless,
    state: &cavity::WallState,
) {
    table.add_comment(format!("omega_hat = {}", format_value(dims.omega_hat)));
    table.add_comment(format!("mu = {}", format_value(dims.mu)));
    table.add_comment(format!("n_modes = {}", dims.n_modes));
    table.add_comment(format!("n_b = {}", format_value(state.n_b)));
    if !state.is_perturbative() {
        table.add_comment(format!(
            "warning: n_b exceeds the perturbative threshold {}",
            cavity::PERTURBATIVE_LIMIT
        ));
    }
    table.add_comment(format!(
        "si_prefactor = {} J/m (multiply S by this for the physical density change)",
        format_value(cavity::si_energy_prefactor(&cfg.cavity, &cfg.constants))
    ));
}

fn cavity_density_table(cfg: &RunConfig) -> Result<OutputTable, Error> {
    let dims = cavity_dimensionless(cfg)?;
    let state = cavity::wall_excitation(&dims);
    let table_tp = cavity::build_inner_sum_table(&dims)?;
    let xs = position_grid(cfg);
    let values = cavity::delta_profile(&table_tp, &xs)?;
    let mut table = OutputTable::new(["x_over_L0", "S"]);
    add_cavity_comments(&mut table, cfg, &dims, &state);
    for (x, s) in xs.iter().zip(values.iter()) {
        table.push_row(vec![*x, *s])?;
    }
    Ok(table)
}

fn cavity_averaged_table(cfg: &RunConfig) -> Result<OutputTable, Error> {
    let dims = cavity_dimensionless(cfg)?;
    let state = cavity::wall_excitation(&dims);
    let inner = cavity::build_inner_sum_table(&dims)?;
    let xs = position_grid(cfg);
    let plain = cavity::delta_profile(&inner, &xs)?;
    let averaged = cavity::averaged_profile(&inner, &state, &xs)?;
    let parts = cavity::averaged_parts_profile(&inner, state.mu, &xs)?;
    let mut table = OutputTable::new([
        "x_over_L0",
        "S",
        "S_averaged",
        "S_ground",
        "S_excited",
    ]);
    add_cavity_comments(&mut table, cfg, &dims, &state);
    let min_avg = averaged.iter().cloned().fold(f64::INFINITY, f64::min);
    table.add_comment(format!(
        "min_S_averaged = {} (sign monitored, not asserted)",
        format_value(min_avg)
    ));
    for (i, x) in xs.iter().enumerate() {
        let (g0, g1) = parts[i];
        table.push_row(vec![*x, plain[i], averaged[i], g0, g1])?;
    }
    Ok(table)
}

fn cavity_casimir_table(epsilons: &[f64]) -> Result<OutputTable, Error> {
    let eps: Vec<f64> = if epsilons.is_empty() {
        vec![0.04, 0.02, 0.01]
    } else {
        epsilons.to_vec()
    };
    if eps.len() < 3 {
        return Err(Error::Config {
            line: 0,
            message: "need at least 3 --epsilon values for the extrapolation".into(),
        });
    }
    for pair in eps.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::Config {
                line: 0,
                message: "--epsilon values must be strictly decreasing".into(),
            });
        }
    }
    let mut table = OutputTable::new(["epsilon", "density"]);
    table.add_comment("renormalized mode-sum density in hbar*c/L0^2".to_string());
    let extrapolated = cavity::extrapolated_casimir(&eps)?;
    table.add_comment(format!(
        "richardson_extrapolated = {}",
        format_value(extrapolated.value)
    ));
    table.add_comment(format!(
        "richardson_residual = {}",
        format_value(extrapolated.residual)
    ));
    table.add_comment(format!(
        "closed_form_limit = {} (-pi/24)",
        format_value(-std::f64::consts::PI / 24.0)
    ));
    for &e in &eps {
        table.push_row(vec![e, cavity::free_casimir_density(e)?])?;
    }
    Ok(table)
}
