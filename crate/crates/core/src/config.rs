//! Physical constants, unit conventions, dimensionless scaling, and
//! run-configuration parsing shared by all solvers.
//!
//! Internal computation uses ħ = c = 1 with per-module length units;
//! SI values enter only through [`PhysicalConstants`] at the I/O
//! boundary. Configuration documents are line-based `key = value`
//! text with `#` comments.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

/// CODATA SI values; `c` is exact, `ħ` is the defined 2019 SI value.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
pub const C_SI: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Speed of light (m/s).
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR_SI,
            c: C_SI,
        }
    }
}

impl PhysicalConstants {
    fn validate(&self, lines: &KeyLines) -> Result<()> {
        if !(self.hbar > 0.0) {
            return Err(Error::config(lines.get("hbar"), "hbar must be positive"));
        }
        if !(self.c > 0.0) {
            return Err(Error::config(lines.get("c"), "c must be positive"));
        }
        Ok(())
    }
}

/// Wall-profile configuration. Positions are in units of cη.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConfig {
    /// Time-splitting parameter η (s); 1/η is the cutoff frequency.
    pub eta: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub samples: usize,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            eta: 5e-17,
            z_min: 0.0,
            z_max: 4.0,
            samples: 400,
        }
    }
}

impl BoundaryConfig {
    pub fn validate(&self) -> Result<()> {
        self.validate_at(&KeyLines::default())
    }

    fn validate_at(&self, lines: &KeyLines) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::config(lines.get("eta"), "eta must be positive"));
        }
        if !(self.z_min >= 0.0) {
            return Err(Error::config(lines.get("z_min"), "z_min must be >= 0"));
        }
        if !(self.z_max > self.z_min) {
            return Err(Error::config(lines.get("z_max"), "z_max must exceed z_min"));
        }
        if self.samples < 2 {
            return Err(Error::config(lines.get("z_samples"), "z_samples must be >= 2"));
        }
        Ok(())
    }
}

/// Point-source configuration. Radii are in units of the cutoff
/// length γ_c = c/ω_cutoff; α only rescales SI output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    pub alpha: f64,
    pub gamma_c: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub samples: usize,
    pub log_spacing: bool,
}

impl Default for SourceConfig {
    fn default() -> Self {
        // 257 samples = 64 points per decade over the default four
        // decades, endpoints included.
        Self {
            alpha: 1.0,
            gamma_c: 1.0,
            r_min: 0.1,
            r_max: 1e3,
            samples: 257,
            log_spacing: true,
        }
    }
}

impl SourceConfig {
    pub fn validate(&self) -> Result<()> {
        self.validate_at(&KeyLines::default())
    }

    fn validate_at(&self, lines: &KeyLines) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::config(lines.get("alpha"), "alpha must be positive"));
        }
        if !(self.gamma_c > 0.0) {
            return Err(Error::config(lines.get("gamma_c"), "gamma_c must be positive"));
        }
        if !(self.r_min >= 0.0) {
            return Err(Error::config(lines.get("r_min"), "r_min must be >= 0"));
        }
        if !(self.r_max > self.r_min) {
            return Err(Error::config(lines.get("r_max"), "r_max must exceed r_min"));
        }
        if self.samples < 2 {
            return Err(Error::config(lines.get("r_samples"), "r_samples must be >= 2"));
        }
        if self.log_spacing && self.r_min <= 0.0 {
            return Err(Error::config(
                lines.get("r_min"),
                "log spacing requires r_min > 0",
            ));
        }
        Ok(())
    }
}

/// Frequency cutoff for the cavity mode sums: either a physical
/// angular frequency or a mode count directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CavityCutoff {
    OmegaCut(f64),
    NModes(usize),
}

/// Mobile-mirror cavity configuration (SI inputs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    /// Equilibrium cavity length (m).
    pub l0: f64,
    /// Mirror mass (kg).
    pub mass: f64,
    /// Mirror binding frequency (1/s).
    pub omega_osc: f64,
    pub cutoff: CavityCutoff,
    /// Optional dimensionless position-spread override σ/L₀; when set,
    /// μ = 2(σ/L₀)² replaces the mass-derived value.
    pub sigma_over_l0: Option<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

impl Default for CavityConfig {
    fn default() -> Self {
        Self {
            l0: 1e-5,
            mass: 1e-11,
            omega_osc: 1e5,
            cutoff: CavityCutoff::OmegaCut(1e16),
            sigma_over_l0: None,
            x_min: 0.0,
            x_max: 1.0,
            samples: 201,
        }
    }
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        self.validate_at(&KeyLines::default())
    }

    fn validate_at(&self, lines: &KeyLines) -> Result<()> {
        if !(self.l0 > 0.0) {
            return Err(Error::config(lines.get("L0"), "L0 must be positive"));
        }
        if !(self.mass > 0.0) {
            return Err(Error::config(lines.get("M"), "M must be positive"));
        }
        if !(self.omega_osc > 0.0) {
            return Err(Error::config(
                lines.get("omega_osc"),
                "omega_osc must be positive",
            ));
        }
        match self.cutoff {
            CavityCutoff::OmegaCut(w) => {
                if !(w > 0.0) {
                    return Err(Error::config(
                        lines.get("omega_cut"),
                        "omega_cut must be positive",
                    ));
                }
            }
            CavityCutoff::NModes(n) => {
                if n < 1 {
                    return Err(Error::config(lines.get("n_modes"), "n_modes must be >= 1"));
                }
            }
        }
        if let Some(sigma) = self.sigma_over_l0 {
            if !(sigma > 0.0 && sigma <= 0.1) {
                return Err(Error::config(
                    lines.get("sigma_over_L0"),
                    "sigma_over_L0 must lie in (0, 0.1] (small-fluctuation regime)",
                ));
            }
        }
        if !(self.x_min >= 0.0 && self.x_min < self.x_max && self.x_max <= 1.0) {
            return Err(Error::config(
                lines.get("x_max"),
                "require 0 <= x_min < x_max <= 1",
            ));
        }
        if self.samples < 2 {
            return Err(Error::config(lines.get("x_samples"), "x_samples must be >= 2"));
        }
        Ok(())
    }
}

/// Dimensionless trio that fully determines the cavity sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityDimensionless {
    /// Ω̂ = ω_osc·L₀/(πc), the mirror frequency in mode-spacing units.
    pub omega_hat: f64,
    /// μ = ħ/(M·ω_osc·L₀²); μ/2 is the ground-state positional
    /// variance in units of L₀².
    pub mu: f64,
    pub n_modes: usize,
}

/// Full parsed configuration with one section per solver.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub boundary: BoundaryConfig,
    pub source: SourceConfig,
    pub cavity: CavityConfig,
}

/// Line numbers at which keys were assigned, for error attribution.
#[derive(Default)]
struct KeyLines(HashMap<&'static str, usize>);

impl KeyLines {
    fn set(&mut self, key: &'static str, line: usize) {
        self.0.insert(key, line);
    }

    fn get(&self, key: &str) -> usize {
        self.0.get(key).copied().unwrap_or(0)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "hbar", "c", "eta", "z_min", "z_max", "z_samples", "alpha", "gamma_c", "r_min", "r_max",
    "r_samples", "log_spacing", "L0", "M", "omega_osc", "omega_cut", "n_modes", "sigma_over_L0",
    "x_min", "x_max", "x_samples",
];

fn parse_f64(value: &str, key: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::config(line, format!("malformed number '{value}' for key '{key}'")))
}

fn parse_usize(value: &str, key: &str, line: usize) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::config(line, format!("malformed count '{value}' for key '{key}'")))
}

fn parse_bool(value: &str, key: &str, line: usize) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(
            line,
            format!("malformed flag '{value}' for key '{key}' (expected true/false)"),
        )),
    }
}

/// Parse a `key = value` document into a validated configuration.
/// Unspecified keys keep their documented defaults; `#` starts a
/// comment; keys are case-sensitive.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut lines = KeyLines::default();
    let mut omega_cut_line = None;
    let mut n_modes_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped.split_once('=').ok_or_else(|| {
            Error::config(line_no, format!("expected 'key = value', got '{stripped}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::config(line_no, format!("missing value for key '{key}'")));
        }
        let known = KNOWN_KEYS
            .iter()
            .find(|&&k| k == key)
            .copied()
            .ok_or_else(|| Error::config(line_no, format!("unknown key '{key}'")))?;
        lines.set(known, line_no);

        match known {
            "hbar" => cfg.constants.hbar = parse_f64(value, key, line_no)?,
            "c" => cfg.constants.c = parse_f64(value, key, line_no)?,
            "eta" => cfg.boundary.eta = parse_f64(value, key, line_no)?,
            "z_min" => cfg.boundary.z_min = parse_f64(value, key, line_no)?,
            "z_max" => cfg.boundary.z_max = parse_f64(value, key, line_no)?,
            "z_samples" => cfg.boundary.samples = parse_usize(value, key, line_no)?,
            "alpha" => cfg.source.alpha = parse_f64(value, key, line_no)?,
            "gamma_c" => cfg.source.gamma_c = parse_f64(value, key, line_no)?,
            "r_min" => cfg.source.r_min = parse_f64(value, key, line_no)?,
            "r_max" => cfg.source.r_max = parse_f64(value, key, line_no)?,
            "r_samples" => cfg.source.samples = parse_usize(value, key, line_no)?,
            "log_spacing" => cfg.source.log_spacing = parse_bool(value, key, line_no)?,
            "L0" => cfg.cavity.l0 = parse_f64(value, key, line_no)?,
            "M" => cfg.cavity.mass = parse_f64(value, key, line_no)?,
            "omega_osc" => cfg.cavity.omega_osc = parse_f64(value, key, line_no)?,
            "omega_cut" => {
                omega_cut_line = Some(line_no);
                cfg.cavity.cutoff = CavityCutoff::OmegaCut(parse_f64(value, key, line_no)?);
            }
            "n_modes" => {
                n_modes_line = Some(line_no);
                cfg.cavity.cutoff = CavityCutoff::NModes(parse_usize(value, key, line_no)?);
            }
            "sigma_over_L0" => {
                cfg.cavity.sigma_over_l0 = Some(parse_f64(value, key, line_no)?);
            }
            "x_min" => cfg.cavity.x_min = parse_f64(value, key, line_no)?,
            "x_max" => cfg.cavity.x_max = parse_f64(value, key, line_no)?,
            "x_samples" => cfg.cavity.samples = parse_usize(value, key, line_no)?,
            _ => unreachable!(),
        }
    }

    if let (Some(w_line), Some(n_line)) = (omega_cut_line, n_modes_line) {
        return Err(Error::config(
            w_line.max(n_line),
            "omega_cut and n_modes are mutually exclusive",
        ));
    }

    cfg.constants.validate(&lines)?;
    cfg.boundary.validate_at(&lines)?;
    cfg.source.validate_at(&lines)?;
    cfg.cavity.validate_at(&lines)?;
    Ok(cfg)
}

impl RunConfig {
    /// Serialize to the same `key = value` format accepted by
    /// [`parse_config`]; parsing the output reproduces the
    /// configuration exactly (floats use shortest round-trip form).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# physical constants");
        let _ = writeln!(s, "hbar = {}", self.constants.hbar);
        let _ = writeln!(s, "c = {}", self.constants.c);
        let _ = writeln!(s, "# wall profile");
        let _ = writeln!(s, "eta = {}", self.boundary.eta);
        let _ = writeln!(s, "z_min = {}", self.boundary.z_min);
        let _ = writeln!(s, "z_max = {}", self.boundary.z_max);
        let _ = writeln!(s, "z_samples = {}", self.boundary.samples);
        let _ = writeln!(s, "# point source");
        let _ = writeln!(s, "alpha = {}", self.source.alpha);
        let _ = writeln!(s, "gamma_c = {}", self.source.gamma_c);
        let _ = writeln!(s, "r_min = {}", self.source.r_min);
        let _ = writeln!(s, "r_max = {}", self.source.r_max);
        let _ = writeln!(s, "r_samples = {}", self.source.samples);
        let _ = writeln!(s, "log_spacing = {}", self.source.log_spacing);
        let _ = writeln!(s, "# cavity");
        let _ = writeln!(s, "L0 = {}", self.cavity.l0);
        let _ = writeln!(s, "M = {}", self.cavity.mass);
        let _ = writeln!(s, "omega_osc = {}", self.cavity.omega_osc);
        match self.cavity.cutoff {
            CavityCutoff::OmegaCut(w) => {
                let _ = writeln!(s, "omega_cut = {w}");
            }
            CavityCutoff::NModes(n) => {
                let _ = writeln!(s, "n_modes = {n}");
            }
        }
        if let Some(sigma) = self.cavity.sigma_over_l0 {
            let _ = writeln!(s, "sigma_over_L0 = {sigma}");
        }
        let _ = writeln!(s, "x_min = {}", self.cavity.x_min);
        let _ = writeln!(s, "x_max = {}", self.cavity.x_max);
        let _ = writeln!(s, "x_samples = {}", self.cavity.samples);
        s
    }
}

/// Number of cavity modes below the angular-frequency cutoff:
/// N = floor(ω_cut·L₀ / (πc)), at least 1. Mode spacing is πc/L₀, so
/// a cutoff below the fundamental is an error. Cutoffs within 1e-12
/// relative of an exact mode count round up, absorbing arithmetic
/// noise when callers pass e.g. ω_cut = πc/L₀ exactly.
pub fn n_modes_from_cutoff(omega_cut: f64, l0: f64, c: f64) -> Result<usize> {
    if !(omega_cut > 0.0 && l0 > 0.0 && c > 0.0) {
        return Err(Error::domain("n_modes_from_cutoff requires positive inputs"));
    }
    let x = omega_cut * l0 / (std::f64::consts::PI * c);
    let n = (x * (1.0 + 1e-12)).floor();
    if n < 1.0 {
        return Err(Error::domain(format!(
            "cutoff {omega_cut:e} lies below the fundamental mode frequency {:e}",
            std::f64::consts::PI * c / l0
        )));
    }
    Ok(n as usize)
}

/// Reduce a cavity configuration to its dimensionless parameters.
pub fn derive_dimensionless(
    cfg: &CavityConfig,
    constants: &PhysicalConstants,
) -> Result<CavityDimensionless> {
    cfg.validate()?;
    let omega_hat = cfg.omega_osc * cfg.l0 / (std::f64::consts::PI * constants.c);
    let mu = match cfg.sigma_over_l0 {
        Some(sigma) => 2.0 * sigma * sigma,
        None => constants.hbar / (cfg.mass * cfg.omega_osc * cfg.l0 * cfg.l0),
    };
    let n_modes = match cfg.cutoff {
        CavityCutoff::OmegaCut(w) => n_modes_from_cutoff(w, cfg.l0, constants.c)?,
        CavityCutoff::NModes(n) => n,
    };
    Ok(CavityDimensionless {
        omega_hat,
        mu,
        n_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_boundary_key() {
        let cfg = parse_config("eta = 5e-17").unwrap();
        assert_eq!(cfg.boundary.eta, 5e-17);
        assert_eq!(cfg.source, SourceConfig::default());
    }

    #[test]
    fn parses_cavity_block() {
        let cfg = parse_config("L0 = 1e-5\nM = 1e-11\nomega_osc = 1e5\nomega_cut = 1e16").unwrap();
        assert_eq!(cfg.cavity.l0, 1e-5);
        assert_eq!(cfg.cavity.mass, 1e-11);
        assert_eq!(cfg.cavity.omega_osc, 1e5);
        assert_eq!(cfg.cavity.cutoff, CavityCutoff::OmegaCut(1e16));
        let dims = derive_dimensionless(&cfg.cavity, &cfg.constants).unwrap();
        assert_eq!(dims.n_modes, 106);
    }

    #[test]
    fn rejects_negative_eta_with_line() {
        let err = parse_config("eta = -1").unwrap_err();
        match err {
            Error::Config { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("eta must be positive"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_key_and_malformed_number() {
        assert!(matches!(
            parse_config("frobnicate = 3").unwrap_err(),
            Error::Config { line: 1, .. }
        ));
        assert!(matches!(
            parse_config("\neta = abc").unwrap_err(),
            Error::Config { line: 2, .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cfg = parse_config("# header\n\neta = 1e-16  # inline\n").unwrap();
        assert_eq!(cfg.boundary.eta, 1e-16);
    }

    #[test]
    fn cutoff_keys_are_exclusive() {
        assert!(parse_config("omega_cut = 1e16\nn_modes = 10").is_err());
    }

    #[test]
    fn mode_count_at_exact_fundamental() {
        let c = C_SI;
        let l0 = 1e-5;
        let omega_cut = std::f64::consts::PI * c / l0;
        assert_eq!(n_modes_from_cutoff(omega_cut, l0, c).unwrap(), 1);
    }

    #[test]
    fn mode_count_at_figure_cutoffs() {
        assert_eq!(n_modes_from_cutoff(1e16, 1e-5, C_SI).unwrap(), 106);
        assert_eq!(n_modes_from_cutoff(8e15, 1e-5, C_SI).unwrap(), 84);
    }

    #[test]
    fn mode_count_below_fundamental_is_error() {
        let l0 = 1e-5;
        assert!(n_modes_from_cutoff(1e12, l0, C_SI).is_err());
    }

    #[test]
    fn dimensionless_formulas_match_direct_arithmetic() {
        let cfg = CavityConfig::default();
        let consts = PhysicalConstants::default();
        let dims = derive_dimensionless(&cfg, &consts).unwrap();
        let omega_hat = 1e5 * 1e-5 / (std::f64::consts::PI * C_SI);
        let mu = HBAR_SI / (1e-11 * 1e5 * 1e-10);
        assert!((dims.omega_hat - omega_hat).abs() <= 1e-15 * omega_hat);
        assert!((dims.mu - mu).abs() <= 1e-15 * mu);
        // values quoted to five digits
        assert!((dims.omega_hat - 1.0617e-9).abs() < 1e-13);
        assert!((dims.mu - 1.0546e-18).abs() < 1e-22);
    }

    #[test]
    fn sigma_override_sets_mu_independent_of_mass() {
        let mut cfg = CavityConfig {
            sigma_over_l0: Some(0.01),
            ..CavityConfig::default()
        };
        let consts = PhysicalConstants::default();
        let a = derive_dimensionless(&cfg, &consts).unwrap();
        assert_eq!(a.mu, 2e-4);
        cfg.mass *= 1e3;
        let b = derive_dimensionless(&cfg, &consts).unwrap();
        assert_eq!(b.mu, 2e-4);
    }

    #[test]
    fn doubling_mass_halves_mu_exactly() {
        let cfg = CavityConfig::default();
        let consts = PhysicalConstants::default();
        let base = derive_dimensionless(&cfg, &consts).unwrap();
        let doubled = derive_dimensionless(
            &CavityConfig {
                mass: 2.0 * cfg.mass,
                ..cfg
            },
            &consts,
        )
        .unwrap();
        assert_eq!(doubled.mu.to_bits(), (base.mu / 2.0).to_bits());
    }

    #[test]
    fn round_trip_default() {
        let cfg = RunConfig::default();
        assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn round_trip_with_overrides() {
        let cfg = RunConfig {
            cavity: CavityConfig {
                cutoff: CavityCutoff::NModes(123),
                sigma_over_l0: Some(0.0625),
                ..CavityConfig::default()
            },
            ..RunConfig::default()
        };
        assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }
}
