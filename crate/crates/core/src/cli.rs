//! Command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or
//! configuration error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bell::{bell_correlation, BellSetting, ChshPlane, TwoParticleSystem};
use crate::dirac::FourMomentum;
use crate::error::Error;
use crate::even_spin::limit_inequivalence_scan;
use crate::extended::{robinson_circle_samples, robinson_radius};
use crate::little_algebra::{contraction_scan, ScanGrid, ScanMode};
use crate::numkernel::Tolerance;
use crate::output::{self, Format, Preamble, Table};
use crate::report::Report;
use crate::suite::{point_suite, random_suite, rng_from_seed, random_unit, SuiteSizes};
use crate::vec3::Vec3;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "evenspin", version, about = "Even spin, little-group and two-electron correlation checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct Common {
    /// Mass (natural units).
    #[arg(long = "m")]
    pub mass: Option<f64>,
    /// Momentum as `x,y,z`.
    #[arg(long = "p", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub momentum: Option<[f64; 3]>,
    /// Absolute and relative tolerance for scaled checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized suites and settings.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    /// Mass sweep at fixed `|p|`.
    Mass,
    /// Momentum sweep at fixed mass.
    Momentum,
    /// Transverse `S_p` and `W` over a momentum sweep.
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    Natural,
    SiScale,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every identity at (m, p) plus the seeded randomized sweeps.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Samples per randomized sweep.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Contraction or limit scan.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "momentum")]
        mode: ScanKind,
        #[arg(long)]
        pmin: Option<f64>,
        #[arg(long)]
        pmax: Option<f64>,
        #[arg(long)]
        mmin: Option<f64>,
        #[arg(long)]
        mmax: Option<f64>,
        /// Fixed |p| for the mass sweep.
        #[arg(long)]
        pmag: Option<f64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Singlet correlations or CHSH combinations over an angle grid.
    Bell {
        #[command(flatten)]
        common: Common,
        /// Emit CHSH rows (a, b, a', b' at 0, phi, 2 phi, 3 phi).
        #[arg(long)]
        chsh: bool,
        #[arg(long, value_enum, default_value = "perp")]
        plane: ChshPlaneArg,
        /// Angle step in degrees.
        #[arg(long, default_value_t = 5.0)]
        step: f64,
        /// Extra seeded random settings appended to the correlation table.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Ring samples of radius s/|p| for a massless momentum.
    Robinson {
        #[command(flatten)]
        common: Common,
        /// Helicity.
        #[arg(long = "s", allow_hyphen_values = true)]
        helicity: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        frames: usize,
        /// Frame step (default r_s / 8).
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_enum, default_value = "natural")]
        units: Units,
        /// hbar c in the target units, applied to lengths when `--units si-scale`.
        #[arg(long)]
        hbar_c: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChshPlaneArg {
    Perp,
    Mixed,
}

impl From<ChshPlaneArg> for ChshPlane {
    fn from(p: ChshPlaneArg) -> Self {
        match p {
            ChshPlaneArg::Perp => ChshPlane::Perp,
            ChshPlaneArg::Mixed => ChshPlane::Mixed,
        }
    }
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    let mut out = [0.0f64; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("bad component `{p}`: {e}"))?;
        if !o.is_finite() {
            return Err(format!("component `{p}` is not finite"));
        }
    }
    Ok(out)
}

/// Fully resolved configuration of one run, recorded in output headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub mass: f64,
    pub momentum: [f64; 3],
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// Command-specific parameters.
    pub params: serde_json::Map<String, serde_json::Value>,
}

impl RunConfig {
    fn from_common(command: &str, common: &Common, mass: f64, momentum: [f64; 3], format: Format) -> Self {
        RunConfig {
            command: command.into(),
            mass,
            momentum,
            tolerance: common.tol,
            out: common.out.clone(),
            format,
            seed: common.seed,
            params: serde_json::Map::new(),
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.params
            .insert(key.into(), serde_json::to_value(value).expect("parameter serializes"));
        self
    }

    fn preamble(&self) -> Preamble {
        Preamble {
            version: crate::VERSION.into(),
            config: serde_json::to_value(self).expect("config serializes"),
            seed: self.seed,
        }
    }

    pub fn four_momentum(&self) -> crate::error::Result<FourMomentum> {
        FourMomentum::new(self.mass, Vec3(self.momentum))
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance.map(Tolerance::uniform).unwrap_or(Tolerance::uniform(1e-11))
    }
}

/// Failure surfaced to `main`.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn usage(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: format!("{context}: {err}"),
    }
}

fn lib_error(context: &str, err: Error) -> CliError {
    let code = match err {
        Error::CheckFailed { .. } | Error::TranscriptionSuspect(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    };
    CliError {
        code,
        message: format!("{context}: {err}"),
    }
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    output::write_output(path, content).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("cannot write output: {e}"),
    })
}

fn require_positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(name, format!("must be positive and finite, got {v}")))
    }
}

/// Runs a parsed command and returns the exit code. Diagnostics go to
/// stderr.
pub fn execute(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("evenspin: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Verify { common, samples } => cmd_verify(&common, samples),
        Command::Scan {
            common,
            mode,
            pmin,
            pmax,
            mmin,
            mmax,
            pmag,
            steps,
        } => cmd_scan(&common, mode, (pmin, pmax), (mmin, mmax), pmag, steps),
        Command::Bell {
            common,
            chsh,
            plane,
            step,
            random,
        } => cmd_bell(&common, chsh, plane, step, random),
        Command::Robinson {
            common,
            helicity,
            samples,
            frames,
            dt,
            units,
            hbar_c,
        } => cmd_robinson(&common, helicity, samples, frames, dt, units, hbar_c),
    }
}

fn cmd_verify(common: &Common, samples: usize) -> Result<i32, CliError> {
    let cfg = RunConfig::from_common(
        "verify",
        common,
        common.mass.unwrap_or(1.0),
        common.momentum.unwrap_or([0.0, 0.0, 2.0]),
        common.format.unwrap_or(Format::Json),
    )
    .with("samples", samples);
    if let Some(t) = cfg.tolerance {
        if !(t > 0.0) {
            return Err(usage("--tol", format!("must be positive, got {t}")));
        }
    }
    let fm = cfg.four_momentum().map_err(|e| usage("invalid momentum", e))?;
    let tol = cfg.tolerance();
    let mut report: Report = point_suite(&fm, tol).map_err(|e| lib_error("verify", e))?;
    report.extend(random_suite(cfg.seed, SuiteSizes::uniform(samples), tol).map_err(|e| lib_error("verify", e))?);
    emit(cfg.out.as_deref(), &output::render_report(&cfg.preamble(), &report, cfg.format))?;
    if report.passed() {
        Ok(EXIT_PASS)
    } else {
        eprint!("{}", output::failure_summary(&report));
        Ok(EXIT_CHECK_FAILED)
    }
}

fn cmd_scan(
    common: &Common,
    mode: ScanKind,
    (pmin, pmax): (Option<f64>, Option<f64>),
    (mmin, mmax): (Option<f64>, Option<f64>),
    pmag: Option<f64>,
    steps: usize,
) -> Result<i32, CliError> {
    let mass = common.mass.unwrap_or(1.0);
    let cfg = RunConfig::from_common(
        "scan",
        common,
        mass,
        common.momentum.unwrap_or([0.0, 0.0, 1.0]),
        common.format.unwrap_or(Format::Csv),
    )
    .with("mode", mode)
    .with("steps", steps);
    let table: Table = match mode {
        ScanKind::Momentum | ScanKind::Limit => {
            let lo = require_positive("--pmin", pmin.unwrap_or(0.1))?;
            let hi = require_positive("--pmax", pmax.unwrap_or(1000.0))?;
            let cfg_grid = ScanGrid::logarithmic(lo, hi, steps).map_err(|e| usage("momentum grid", e))?;
            if mode == ScanKind::Momentum {
                require_positive("--m", mass)?;
                let rows = contraction_scan(ScanMode::MomentumToInfinity { mass }, &cfg_grid)
                    .map_err(|e| lib_error("scan", e))?;
                output::contraction_table(&rows)
            } else {
                let points: Vec<(f64, f64)> = cfg_grid.values().iter().map(|&p| (mass, p)).collect();
                output::limit_table(&limit_inequivalence_scan(&points).map_err(|e| lib_error("scan", e))?)
            }
        }
        ScanKind::Mass => {
            let lo = require_positive("--mmin", mmin.unwrap_or(1e-3))?;
            let hi = require_positive("--mmax", mmax.unwrap_or(10.0))?;
            let p_mag = require_positive("--pmag", pmag.unwrap_or(1.0))?;
            let grid = ScanGrid::logarithmic(hi, lo, steps).map_err(|e| usage("mass grid", e))?;
            let rows = contraction_scan(ScanMode::MassToZero { p_mag }, &grid).map_err(|e| lib_error("scan", e))?;
            output::contraction_table(&rows)
        }
    };
    let cfg = cfg
        .with("pmin", pmin)
        .with("pmax", pmax)
        .with("mmin", mmin)
        .with("mmax", mmax)
        .with("pmag", pmag);
    emit(cfg.out.as_deref(), &output::render(&cfg.preamble(), &table, cfg.format))?;
    Ok(EXIT_PASS)
}

fn cmd_bell(common: &Common, chsh: bool, plane: ChshPlaneArg, step: f64, random: usize) -> Result<i32, CliError> {
    let cfg = RunConfig::from_common(
        "bell",
        common,
        common.mass.unwrap_or(1.0),
        common.momentum.unwrap_or([0.0, 0.0, 2.0]),
        common.format.unwrap_or(Format::Csv),
    )
    .with("chsh", chsh)
    .with("plane", plane)
    .with("step", step)
    .with("random", random);
    let fm = cfg.four_momentum().map_err(|e| usage("invalid momentum", e))?;
    let sys = TwoParticleSystem::new(fm).map_err(|e| lib_error("bell", e))?;
    let plane = ChshPlane::from(plane);
    let grid = plane.grid(&sys.triad, step).map_err(|e| usage("--step", e))?;
    let table = if chsh {
        output::chsh_table(&sys, &crate::bell::chsh_scan(&sys, &grid))
    } else {
        let mut settings: Vec<BellSetting> = grid.iter().map(|s| BellSetting { a: s.a, b: s.b }).collect();
        let mut rng = rng_from_seed(cfg.seed);
        for _ in 0..random {
            settings.push(BellSetting {
                a: random_unit(&mut rng),
                b: random_unit(&mut rng),
            });
        }
        let mut rows = Vec::new();
        for s in settings {
            match bell_correlation(&sys, &s) {
                Ok(c) => rows.push((s, c)),
                Err(Error::Domain(_)) => {}
                Err(e) => return Err(lib_error("bell", e)),
            }
        }
        output::bell_table(&sys, &rows)
    };
    emit(cfg.out.as_deref(), &output::render(&cfg.preamble(), &table, cfg.format))?;
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_robinson(
    common: &Common,
    helicity: f64,
    samples: usize,
    frames: usize,
    dt: Option<f64>,
    units: Units,
    hbar_c: Option<f64>,
) -> Result<i32, CliError> {
    let scale = match (units, hbar_c) {
        (Units::Natural, None) => 1.0,
        (Units::Natural, Some(_)) => return Err(usage("--hbar-c", "only meaningful with --units si-scale")),
        (Units::SiScale, Some(s)) => require_positive("--hbar-c", s)?,
        (Units::SiScale, None) => return Err(usage("--units si-scale", "requires --hbar-c")),
    };
    let cfg = RunConfig::from_common(
        "robinson",
        common,
        common.mass.unwrap_or(0.0),
        common.momentum.unwrap_or([0.0, 0.0, 1.0]),
        common.format.unwrap_or(Format::Csv),
    )
    .with("s", helicity)
    .with("samples", samples)
    .with("frames", frames)
    .with("dt", dt)
    .with("units", units)
    .with("hbar_c", hbar_c);
    let fm = cfg.four_momentum().map_err(|e| usage("invalid momentum", e))?;
    let points =
        robinson_circle_samples(&fm, helicity, samples, frames, dt).map_err(|e| lib_error("robinson", e))?;
    let r_s = robinson_radius(helicity, fm.p_mag()).map_err(|e| lib_error("robinson", e))?;
    let cfg = cfg.with("r_s", r_s * scale);
    let table = output::ring_table(&points, scale);
    emit(cfg.out.as_deref(), &output::render(&cfg.preamble(), &table, cfg.format))?;
    Ok(EXIT_PASS)
}
