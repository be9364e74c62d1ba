//! Command-line front end: `design`, `sweep`, `flux` and `transient`.
//!
//! Settings come from built-in defaults, then an optional `key = value`
//! config file, then command-line flags, each layer overriding the last.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::coils::CoilTechnology;
use crate::dynamics::{parasitic_damping_from_q, ElectricalLink, OperatingPoint};
use crate::geometry::moving_mass;
use crate::optimizer::{sweep_dimensions, DesignResult, OptimizerError, QMode, SweepRow, SweepTemplate};
use crate::transient::{harmonic_distortion, simulate, FluxModel, LoadCondition, SimulationConfig, TransientError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

const MIN_DIMENSION: f64 = 0.1e-3;
const MAX_DIMENSION: f64 = 100e-3;

pub const SWEEP_HEADER: &str = "d_m,tech,q_mode,Q,N,R_c_ohm,R_l_ohm,D_p,D_e,strategy,x_amp_m,P_max_W,P_extracted_W,P_load_W,V_load_rms_V,feasible";
pub const FLUX_HEADER: &str = "x_m,flux_Wb";
pub const WAVEFORM_HEADER: &str = "t_s,x_m,v_mps,flux_Wbturns,v_load_V";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("`{key}` is out of range: {value}")]
    Range { key: &'static str, value: String },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Model(#[from] OptimizerError),
    #[error(transparent)]
    Transient(#[from] TransientError),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_INVALID,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TechSelection {
    Wirewound,
    Micro,
    Both,
}

impl TechSelection {
    pub fn technologies(self) -> Vec<CoilTechnology> {
        match self {
            TechSelection::Wirewound => vec![CoilTechnology::WireWound],
            TechSelection::Micro => vec![CoilTechnology::MicroFabricated],
            TechSelection::Both => vec![CoilTechnology::WireWound, CoilTechnology::MicroFabricated],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QModeName {
    DisplacementRule,
    Fixed,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub template: SweepTemplate,
    pub q_mode: Option<QModeName>,
    pub q: Option<f64>,
    pub tech: TechSelection,
    pub d: Option<f64>,
    pub dmin: f64,
    pub dmax: f64,
    pub steps: usize,
    pub turns: u64,
    pub load_resistance: Option<f64>,
    pub open_circuit: bool,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            template: SweepTemplate::default(),
            q_mode: None,
            q: None,
            tech: TechSelection::Both,
            d: None,
            dmin: 1e-3,
            dmax: 10e-3,
            steps: 10,
            turns: 100,
            load_resistance: None,
            open_circuit: false,
            output: None,
            plot: None,
        }
    }
}

impl RunConfig {
    /// The Q mode in effect: an explicit mode wins, otherwise a given Q value
    /// means a fixed Q, otherwise the displacement rule.
    pub fn resolved_q_mode(&self) -> Result<QMode, CliError> {
        match (self.q_mode, self.q) {
            (Some(QModeName::DisplacementRule), _) | (None, None) => Ok(QMode::DisplacementRule),
            (Some(QModeName::Fixed), Some(q)) | (None, Some(q)) => Ok(QMode::Fixed(q)),
            (Some(QModeName::Fixed), None) => Err(CliError::Usage("q-mode fixed needs a value for q".into())),
        }
    }

    pub fn dimensions(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.dmin];
        }
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / (self.steps - 1) as f64;
                self.dmin * (1.0 - f) + self.dmax * f
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.template;
        positive("frequency", t.drive.frequency)?;
        positive("acceleration", t.drive.acceleration)?;
        if let Some(q) = self.q {
            positive("q", q)?;
        }
        for (key, v) in [("dmin", Some(self.dmin)), ("dmax", Some(self.dmax)), ("d", self.d)] {
            if let Some(v) = v {
                if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&v) {
                    return Err(range(key, v));
                }
            }
        }
        if self.dmin > self.dmax {
            return Err(range("dmax", self.dmax));
        }
        if self.steps == 0 {
            return Err(CliError::Range { key: "steps", value: "0".into() });
        }
        if self.turns == 0 {
            return Err(CliError::Range { key: "turns", value: "0".into() });
        }
        if let Some(r) = self.load_resistance {
            positive("load_resistance", r)?;
        }
        positive("min_load_resistance", t.min_load_resistance)?;
        positive("min_wire_diameter", t.limits.min_wire_diameter)?;
        positive("min_feature", t.limits.min_feature)?;
        t.ratios.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        t.materials.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }
}

fn range(key: &'static str, value: f64) -> CliError {
    CliError::Range { key, value: format_number(value) }
}

fn positive(key: &'static str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(range(key, value))
    }
}

/// Reads a `key = value` file into a config on top of the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let mut cfg = RunConfig::default();
    apply_config_text(&mut cfg, &text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Applies config-file text to `cfg`. Unknown keys and malformed lines fail.
pub fn apply_config_text(cfg: &mut RunConfig, text: &str) -> Result<(), CliError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| CliError::Parse {
            line,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        set_key(cfg, key.trim(), value.trim()).map_err(|e| match e {
            CliError::Parse { message, .. } => CliError::Parse { line, message },
            other => other,
        })?;
        // range errors name the key; report them where they occur
        cfg.validate_key(key.trim())?;
    }
    Ok(())
}

impl RunConfig {
    fn validate_key(&self, key: &str) -> Result<(), CliError> {
        let t = &self.template;
        match key {
            "frequency" => positive("frequency", t.drive.frequency),
            "acceleration" => positive("acceleration", t.drive.acceleration),
            "q" => self.q.map_or(Ok(()), |q| positive("q", q)),
            "min_load_resistance" => positive("min_load_resistance", t.min_load_resistance),
            "load_resistance" => self.load_resistance.map_or(Ok(()), |r| positive("load_resistance", r)),
            _ => Ok(()),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Parse { line: 0, message: format!("`{key}` expects a number, found `{value}`") })
}

fn parse_u64(key: &str, value: &str) -> Result<u64, CliError> {
    value
        .parse::<u64>()
        .map_err(|_| CliError::Parse { line: 0, message: format!("`{key}` expects an integer, found `{value}`") })
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true)
        .map_err(|_| CliError::Parse { line: 0, message: format!("`{key}` has unknown value `{value}`") })
}

fn set_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), CliError> {
    let t = &mut cfg.template;
    let f = || parse_f64(key, value);
    match key {
        "frequency" => t.drive.frequency = f()?,
        "acceleration" => t.drive.acceleration = f()?,
        "q" => cfg.q = Some(f()?),
        "q_mode" => cfg.q_mode = Some(parse_enum(key, value)?),
        "tech" => cfg.tech = parse_enum(key, value)?,
        "d" => cfg.d = Some(f()?),
        "dmin" => cfg.dmin = f()?,
        "dmax" => cfg.dmax = f()?,
        "steps" => cfg.steps = parse_u64(key, value)? as usize,
        "turns" => cfg.turns = parse_u64(key, value)?,
        "load_resistance" => cfg.load_resistance = Some(f()?),
        "magnet_density" => t.materials.magnet_density = f()?,
        "remanence" => t.materials.remanence = f()?,
        "resistivity" => t.materials.conductor_resistivity = f()?,
        "fill_factor" => t.materials.copper_fill_factor = f()?,
        "magnet_x_fraction" => t.ratios.magnet_x_fraction = f()?,
        "magnet_z_fraction" => t.ratios.magnet_z_fraction = f()?,
        "gap_fraction" => t.ratios.gap_fraction = f()?,
        "coil_thickness_fraction" => t.ratios.coil_thickness_fraction_of_gap = f()?,
        "min_load_resistance" => t.min_load_resistance = f()?,
        "min_wire_diameter" => t.limits.min_wire_diameter = f()?,
        "min_feature" => t.limits.min_feature = f()?,
        "wire_inner_radius" => t.layout.wire_inner_radius = f()?,
        "wire_outer_radius" => t.layout.wire_outer_radius = f()?,
        "micro_inner_side" => t.layout.micro_inner_side = f()?,
        "micro_outer_side" => t.layout.micro_outer_side = f()?,
        "output" => cfg.output = Some(PathBuf::from(value)),
        "plot" => cfg.plot = Some(PathBuf::from(value)),
        _ => return Err(CliError::Parse { line: 0, message: format!("unknown key `{key}`") }),
    }
    Ok(())
}

/// Shortest round-trip decimal; scientific when the decimal exponent is 4 or more in magnitude.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if exp.abs() >= 4 {
        sci
    } else {
        format!("{v}")
    }
}

#[derive(Parser, Debug)]
#[command(name = "emharvest", version, about = "Electromagnetic vibration harvester design studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimize turns and load for one device size.
    Design(DesignArgs),
    /// Optimize over a range of device sizes and write a CSV table.
    Sweep(SweepArgs),
    /// Write the flux-linkage curve of one device.
    Flux(FluxArgs),
    /// Simulate steady-state waveforms in the time domain.
    Transient(TransientArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// key = value settings file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Vibration frequency, Hz
    #[arg(long)]
    freq: Option<f64>,
    /// Peak acceleration, m/s²
    #[arg(long)]
    accel: Option<f64>,
    /// Fixed open-circuit quality factor
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum)]
    q_mode: Option<QModeName>,
    #[arg(long, value_enum)]
    tech: Option<TechSelection>,
    /// Output CSV path
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[command(flatten)]
    common: Common,
    /// Device dimension, m
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dmin: Option<f64>,
    #[arg(long)]
    dmax: Option<f64>,
    /// Number of device sizes, evenly spaced
    #[arg(long)]
    steps: Option<usize>,
    /// SVG output path for power and voltage plots
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FluxArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Args, Debug)]
struct TransientArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    turns: Option<u64>,
    /// Load resistance, Ω (defaults to the coil resistance)
    #[arg(long)]
    load: Option<f64>,
    /// Record the open-circuit voltage instead of the loaded one
    #[arg(long)]
    open_circuit: bool,
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
            let mut cfg = RunConfig::default();
            apply_config_text(&mut cfg, &text)?;
            cfg
        }
        None => RunConfig::default(),
    };
    if let Some(v) = common.freq {
        cfg.template.drive.frequency = v;
    }
    if let Some(v) = common.accel {
        cfg.template.drive.acceleration = v;
    }
    if let Some(v) = common.q {
        cfg.q = Some(v);
        if common.q_mode.is_none() {
            cfg.q_mode = Some(QModeName::Fixed);
        }
    }
    if let Some(v) = common.q_mode {
        cfg.q_mode = Some(v);
    }
    if let Some(v) = common.tech {
        cfg.tech = v;
    }
    if let Some(v) = &common.output {
        cfg.output = Some(v.clone());
    }
    Ok(cfg)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = io::stdout().lock();
    match execute(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Design(args) => {
            let mut cfg = resolve(&args.common)?;
            cfg.d = args.d.or(cfg.d);
            cfg.validate()?;
            run_design(&cfg, out)
        }
        Command::Sweep(args) => {
            let mut cfg = resolve(&args.common)?;
            cfg.dmin = args.dmin.unwrap_or(cfg.dmin);
            cfg.dmax = args.dmax.unwrap_or(cfg.dmax);
            cfg.steps = args.steps.unwrap_or(cfg.steps);
            if args.plot.is_some() {
                cfg.plot = args.plot;
            }
            cfg.validate()?;
            run_sweep(&cfg, out)
        }
        Command::Flux(args) => {
            let mut cfg = resolve(&args.common)?;
            cfg.d = args.d.or(cfg.d);
            if args.common.tech.is_none() && cfg.tech == TechSelection::Both {
                cfg.tech = TechSelection::Wirewound;
            }
            cfg.validate()?;
            run_flux(&cfg, out)
        }
        Command::Transient(args) => {
            let mut cfg = resolve(&args.common)?;
            cfg.d = args.d.or(cfg.d);
            cfg.turns = args.turns.unwrap_or(cfg.turns);
            cfg.load_resistance = args.load.or(cfg.load_resistance);
            cfg.open_circuit |= args.open_circuit;
            if args.common.tech.is_none() && cfg.tech == TechSelection::Both {
                cfg.tech = TechSelection::Wirewound;
            }
            cfg.validate()?;
            run_transient(&cfg, out)
        }
    }
}

fn required_d(cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.d.ok_or_else(|| CliError::Usage("a device dimension is required (--d or `d` in the config)".into()))
}

fn single_tech(cfg: &RunConfig) -> Result<CoilTechnology, CliError> {
    match cfg.tech {
        TechSelection::Both => Err(CliError::Usage("choose a single technology with --tech".into())),
        t => Ok(t.technologies()[0]),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })
}

/// CSV body line for one sweep row; infeasible rows leave design columns empty.
pub fn sweep_csv_line(row: &SweepRow) -> String {
    let q = row.q_oc.map(format_number).unwrap_or_default();
    let head = format!("{},{},{},{}", format_number(row.d), row.technology.label(), q_mode_column(&row.q_mode), q);
    match &row.outcome {
        Ok(r) => format!(
            "{head},{},{},{},{},{},{},{},{},{},{},{},true",
            r.turns,
            format_number(r.coil_resistance),
            format_number(r.load_resistance),
            format_number(r.parasitic_damping),
            format_number(r.em_damping),
            r.strategy.label(),
            format_number(r.displacement),
            format_number(r.max_power),
            format_number(r.extracted_power),
            format_number(r.load_power),
            format_number(r.load_voltage_rms),
        ),
        Err(_) => format!("{head},,,,,,,,,,,,false"),
    }
}

fn q_mode_column(mode: &QMode) -> &'static str {
    match mode {
        QMode::DisplacementRule => "displacement-rule",
        QMode::Fixed(_) => "fixed",
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for row in rows {
        s.push_str(&sweep_csv_line(row));
        s.push('\n');
    }
    s
}

fn describe(r: &DesignResult) -> String {
    format!(
        "  strategy      {}\n  turns         {}\n  R_c           {} ohm\n  R_l           {} ohm\n  D_p           {} N s/m\n  D_e           {} N s/m\n  amplitude     {} m\n  P_max         {} W\n  P_extracted   {} W\n  P_load        {} W\n  V_load (rms)  {} V\n",
        r.strategy.label(),
        r.turns,
        format_number(r.coil_resistance),
        format_number(r.load_resistance),
        format_number(r.parasitic_damping),
        format_number(r.em_damping),
        format_number(r.displacement),
        format_number(r.max_power),
        format_number(r.extracted_power),
        format_number(r.load_power),
        format_number(r.load_voltage_rms),
    )
}

fn run_design(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let d = required_d(cfg)?;
    let q_mode = cfg.resolved_q_mode()?;
    let rows = sweep_dimensions(&[d], &cfg.tech.technologies(), &[q_mode], &cfg.template);
    let mut text = String::new();
    let mut code = EXIT_OK;
    for row in &rows {
        let q = row.q_oc.map(format_number).unwrap_or_else(|| "?".into());
        let _ = writeln!(text, "{} coil, d = {} m, Q = {} ({})", row.technology.label(), format_number(d), q, q_mode_column(&q_mode));
        match &row.outcome {
            Ok(r) => text.push_str(&describe(r)),
            Err(OptimizerError::NoFeasibleDesign { .. }) | Err(OptimizerError::Coil(_)) => {
                let _ = writeln!(text, "  infeasible: {}", row.outcome.as_ref().unwrap_err());
                code = EXIT_INFEASIBLE;
            }
            Err(e) => return Err(CliError::Model(e.clone())),
        }
    }
    if let Some(path) = &cfg.output {
        write_text(path, &sweep_csv(&rows))?;
    }
    emit(out, &text)?;
    Ok(code)
}

fn run_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let q_mode = cfg.resolved_q_mode()?;
    let ds = cfg.dimensions();
    let rows = sweep_dimensions(&ds, &cfg.tech.technologies(), &[q_mode], &cfg.template);
    for row in &rows {
        if let Err(e @ (OptimizerError::Geometry(_) | OptimizerError::InvalidParameter { .. })) = &row.outcome {
            return Err(CliError::Model(e.clone()));
        }
    }
    let csv = sweep_csv(&rows);
    if let Some(path) = &cfg.plot {
        write_text(path, &sweep_svg(&rows))?;
    }
    match &cfg.output {
        Some(path) => {
            write_text(path, &csv)?;
            let feasible = rows.iter().filter(|r| r.feasible()).count();
            let mut text = format!(
                "{} rows ({} feasible) for {} sizes from {} m to {} m, Q mode {}\n",
                rows.len(),
                feasible,
                ds.len(),
                format_number(cfg.dmin),
                format_number(cfg.dmax),
                q_mode_column(&q_mode)
            );
            for tech in cfg.tech.technologies() {
                if let Some(best) = rows
                    .iter()
                    .filter(|r| r.technology == tech && r.feasible())
                    .max_by(|a, b| a.load_power().total_cmp(&b.load_power()))
                {
                    let _ = writeln!(
                        text,
                        "  {}: largest load power {} W at d = {} m",
                        tech.label(),
                        format_number(best.load_power()),
                        format_number(best.d)
                    );
                }
            }
            let _ = writeln!(text, "  table written to {}", path.display());
            emit(out, &text)?;
        }
        None => emit(out, &csv)?,
    }
    Ok(EXIT_OK)
}

fn run_flux(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let d = required_d(cfg)?;
    let tech = single_tech(cfg)?;
    let curve = cfg.template.flux_curve(d, tech)?;
    let mut csv = String::from(FLUX_HEADER);
    csv.push('\n');
    for (x, phi) in curve.displacements.iter().zip(&curve.flux_per_turn) {
        let _ = writeln!(csv, "{},{}", format_number(*x), format_number(*phi));
    }
    match &cfg.output {
        Some(path) => {
            write_text(path, &csv)?;
            let text = format!(
                "{} coil, d = {} m: {} samples over ±{} m, fitted gradient {} Wb/m per turn\n  curve written to {}\n",
                tech.label(),
                format_number(d),
                curve.displacements.len(),
                format_number(curve.peak_displacement()),
                format_number(curve.fitted_gradient),
                path.display()
            );
            emit(out, &text)?;
        }
        None => emit(out, &csv)?,
    }
    Ok(EXIT_OK)
}

fn run_transient(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let d = cfg.d.unwrap_or(6e-3);
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&d) {
        return Err(range("d", d));
    }
    let tech = single_tech(cfg)?;
    let q_mode = cfg.resolved_q_mode()?;
    let t = &cfg.template;
    let mut problem = t.problem(d, tech, q_mode)?;
    let curve = t.flux_curve(d, tech)?;
    problem.flux_gradient = curve.fitted_gradient.abs();
    let model = problem.coil_model()?;
    if cfg.turns > model.max_turns() {
        return Err(CliError::Infeasible(format!(
            "{} turns exceed the {} that fit a {} m {} coil",
            cfg.turns,
            model.max_turns(),
            format_number(d),
            tech.label()
        )));
    }
    let coil = model.resistance(cfg.turns);
    let load = cfg.load_resistance.unwrap_or(coil);
    let omega = t.drive.omega();
    let mass = moving_mass(&problem.geometry, &t.materials);
    let dp = parasitic_damping_from_q(mass, omega, problem.q_oc).map_err(OptimizerError::from)?;
    let op = OperatingPoint::at_resonance(mass, omega, t.drive.acceleration, dp, 0.0);
    let link = ElectricalLink::resistive(cfg.turns, curve.fitted_gradient, coil, load);
    let condition = if cfg.open_circuit { LoadCondition::OpenCircuit } else { LoadCondition::Loaded };
    let sim = SimulationConfig::default();
    let flattened = simulate(&op, &link, &FluxModel::from_curve(&curve)?, condition, &sim)?;
    let linear = simulate(&op, &link, &FluxModel::linearised(&curve), condition, &sim)?;

    let mut csv = String::from(WAVEFORM_HEADER);
    csv.push('\n');
    for i in 0..flattened.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            format_number(flattened.time[i]),
            format_number(flattened.displacement[i]),
            format_number(flattened.velocity[i]),
            format_number(flattened.flux_linkage[i]),
            format_number(flattened.load_voltage[i]),
        );
    }
    let hd = harmonic_distortion(&flattened.load_voltage, sim.steps_per_period)?;
    let hd_linear = harmonic_distortion(&linear.load_voltage, sim.steps_per_period)?;
    match &cfg.output {
        Some(path) => {
            write_text(path, &csv)?;
            let mut text = format!(
                "{} coil, d = {} m, {} turns, {} Hz, Q = {}, {}\n",
                tech.label(),
                format_number(d),
                cfg.turns,
                format_number(t.drive.frequency),
                format_number(problem.q_oc),
                if cfg.open_circuit { "open circuit".to_string() } else { format!("R_l = {} ohm", format_number(load)) }
            );
            let _ = writeln!(text, "  displacement amplitude  {} m (sampled flux range ±{} m)", format_number(flattened.displacement_amplitude()), format_number(curve.peak_displacement()));
            let _ = writeln!(text, "  voltage distortion      {} (straight-line flux: {})", format_number(hd), format_number(hd_linear));
            if !cfg.open_circuit {
                let _ = writeln!(text, "  mean load power         {} W", format_number(flattened.mean_load_power(load)));
            }
            let _ = writeln!(text, "  waveforms written to {}", path.display());
            emit(out, &text)?;
        }
        None => emit(out, &csv)?,
    }
    Ok(EXIT_OK)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn svg_panel(svg: &mut String, x0: f64, title: &str, unit: &str, series: &[Series]) {
    const W: f64 = 420.0;
    const H: f64 = 300.0;
    const PAD: f64 = 55.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .collect();
    let _ = writeln!(svg, r#"<g transform="translate({x0},0)">"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(svg, r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - 2.0 * PAD, H - 2.0 * PAD);
    if all.is_empty() {
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">no feasible points</text>"#, W / 2.0, H / 2.0);
        svg.push_str("</g>\n");
        return;
    }
    let lx: Vec<f64> = all.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = all.iter().map(|p| p.1.log10()).collect();
    let (xmin, xmax) = (lx.iter().copied().fold(f64::INFINITY, f64::min).floor(), lx.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil());
    let (ymin, ymax) = (ly.iter().copied().fold(f64::INFINITY, f64::min).floor(), ly.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil());
    let (xmax, ymax) = (xmax.max(xmin + 1.0), ymax.max(ymin + 1.0));
    let px = |x: f64| PAD + (x.log10() - xmin) / (xmax - xmin) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y.log10() - ymin) / (ymax - ymin) * (H - 2.0 * PAD);
    for e in (xmin as i32)..=(xmax as i32) {
        let x = px(10f64.powi(e));
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{}" text-anchor="middle" font-size="10">1e{e}</text>"#, H - PAD + 15.0);
    }
    for e in (ymin as i32)..=(ymax as i32) {
        let y = py(10f64.powi(e));
        let _ = writeln!(svg, r##"<line x1="{PAD}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##, W - PAD);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="10">1e{e}</text>"#, PAD - 4.0, y + 3.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">d (m)</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(svg, r#"<text x="14" y="{}" font-size="11" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"#, H / 2.0, H / 2.0, escape(unit));
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="10" fill="{color}">{}</text>"#, PAD + 6.0, PAD + 14.0 + 13.0 * i as f64, escape(&s.label));
    }
    svg.push_str("</g>\n");
}

/// Log-log SVG with a load-power panel and a load-voltage panel, one line per
/// (technology, Q mode) series.
pub fn sweep_svg(rows: &[SweepRow]) -> String {
    let mut keys: Vec<(CoilTechnology, &'static str)> = Vec::new();
    for r in rows {
        let k = (r.technology, q_mode_column(&r.q_mode));
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let collect = |value: fn(&DesignResult) -> f64| -> Vec<Series> {
        keys.iter()
            .map(|&(tech, mode)| Series {
                label: format!("{} / {}", tech.label(), mode),
                points: rows
                    .iter()
                    .filter(|r| r.technology == tech && q_mode_column(&r.q_mode) == mode)
                    .filter_map(|r| r.outcome.as_ref().ok().map(|o| (r.d, value(o))))
                    .collect(),
            })
            .collect()
    };
    let mut svg = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"300\" font-family=\"sans-serif\">\n",
    );
    svg_panel(&mut svg, 0.0, "Power delivered to the load", "P_load (W)", &collect(|r| r.load_power));
    svg_panel(&mut svg, 430.0, "Load voltage", "V_load rms (V)", &collect(|r| r.load_voltage_rms));
    svg.push_str("</svg>\n");
    svg
}
