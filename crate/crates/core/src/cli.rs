//! `bcomp`: generate manifolds, verify them, sweep families and extract plot
//! data.
//!
//! Exit codes: 0 pass, 1 violation, 2 hypotheses violated, 64 usage error,
//! 65 unreadable or malformed input, 74 output could not be written.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::currents::{classify_sequence, Family, FamilyVerdict, SequenceRecord};
use crate::error::{invalid, io_error, Error, Result};
use crate::json::{format_float, to_canonical_string};
use crate::mesh::generators::{
    cylinder_mesh, disk_mesh, saddle_mesh, sphere_jfold, sphere_minus_cap, sphere_with_wells, strip_mesh,
};
use crate::mesh::{load_field_csv, load_mesh, mesh_to_string, MeshFormat, TriangulatedSurface};
use crate::util::write_atomic;
use crate::verify::{run_suite, Manifold, MeshManifold, Outcome, VerificationReport};
use crate::warped::{WarpProfile, WarpedDescriptor};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "bcomp", version, about = "Comparison bounds on manifolds with boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated δ values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    delta_grid: Option<Vec<f64>>,
    /// Multiplies every tolerance.
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a mesh (OFF/OBJ by extension) or a warped-product descriptor (JSON).
    Generate {
        /// disk, cylinder, strip, saddle, jfold, sphere_minus_cap, wells,
        /// ball, cylinder_cap, spherical_cap, exponential, power
        family: String,
        /// Parameters as key=value.
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every check on a mesh (.off/.obj) or warped descriptor (.json).
    Verify {
        input: PathBuf,
        /// Distance field CSV replacing fast marching.
        #[arg(long)]
        field: Option<PathBuf>,
        /// Report JSON destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a family over an index range; writes PREFIX.csv and PREFIX.verdict.json.
    Sweep {
        /// cylinder_cap, jfold or wells
        family: String,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Family parameters as key=value.
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Turn a report JSON into plot-ready CSV (check, x, measured, bound).
    Report {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bcomp: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Infeasible(_) | Error::FocalPole { .. } | Error::InvalidWarp { .. } => {
            EXIT_USAGE
        }
        Error::Parse { .. } | Error::InvalidMesh(_) | Error::Serialization(_) => EXIT_INPUT,
        Error::Io { .. } => EXIT_IO,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Generate { family, params, out } => {
            cmd_generate(&family, &parse_params(&params)?, &out)?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            input,
            field,
            out,
            common,
        } => {
            let config = resolve_config(&common)?;
            let report = with_pool(config.jobs, || cmd_verify(&input, field.as_deref(), &config))??;
            if let Some(out) = out {
                write_atomic(&out, to_canonical_string(&report)?.as_bytes())?;
            }
            print!("{}", report.summary());
            Ok(match report.outcome() {
                Outcome::Pass => EXIT_PASS,
                Outcome::Violation => EXIT_VIOLATION,
                Outcome::HypothesesViolated => EXIT_HYPOTHESES,
            })
        }
        Command::Sweep {
            family,
            from,
            to,
            params,
            out,
            common,
        } => {
            let config = resolve_config(&common)?;
            let family = sweep_family(&family, &parse_params(&params)?)?;
            let (records, verdict) = with_pool(config.jobs, || cmd_sweep(&family, from, to, &config))??;
            let csv = sweep_csv(&records);
            write_atomic(&with_suffix(&out, "csv"), csv.as_bytes())?;
            let json = to_canonical_string(&serde_json::json!({ "records": records, "verdict": verdict }))?;
            write_atomic(&with_suffix(&out, "verdict.json"), json.as_bytes())?;
            print!("{}", verdict_summary(&verdict));
            Ok(EXIT_PASS)
        }
        Command::Report { report, out } => {
            let csv = cmd_report(&report)?;
            match out {
                Some(path) => write_atomic(&path, csv.as_bytes())?,
                None => print!("{csv}"),
            }
            Ok(EXIT_PASS)
        }
    }
}

fn with_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

/// Reads the config file, if any, then applies the flags.
fn resolve_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        config.verify.seed = s;
    }
    if let Some(g) = &common.delta_grid {
        config.verify.delta_grid = Some(g.clone());
        config.sweep.deltas = g.clone();
    }
    if let Some(t) = common.tol_scale {
        config.verify.tol_scale = t;
    }
    if let Some(j) = common.jobs {
        config.jobs = Some(j);
    }
    config.validate()?;
    Ok(config)
}

/// `key=value` pairs with numeric values.
pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("parameter {item:?} is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("parameter {k} has non-numeric value {v:?}")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(invalid(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

/// Reads parameters with defaults and rejects unknown keys.
struct Params<'a> {
    given: &'a BTreeMap<String, f64>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(given: &'a BTreeMap<String, f64>) -> Self {
        Self {
            given,
            used: Vec::new(),
        }
    }

    fn get(&mut self, key: &'static str, default: f64) -> f64 {
        self.used.push(key);
        self.given.get(key).copied().unwrap_or(default)
    }

    fn count(&mut self, key: &'static str, default: usize) -> Result<usize> {
        let v = self.get(key, default as f64);
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(invalid(format!("{key} must be a nonnegative integer, got {v}")));
        }
        Ok(v as usize)
    }

    fn finish(self) -> Result<()> {
        match self.given.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(invalid(format!(
                "unknown parameter {k}; expected one of {}",
                self.used.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

/// Output of the `generate` command.
#[derive(Debug, Clone)]
pub enum Generated {
    Mesh(TriangulatedSurface),
    Warped(WarpedDescriptor),
}

/// Builds the named family member from `key=value` parameters.
pub fn generate(family: &str, params: &BTreeMap<String, f64>) -> Result<Generated> {
    let mut p = Params::new(params);
    let g = match family {
        "disk" => Generated::Mesh(disk_mesh(p.get("radius", 1.0), p.get("h", 0.05))?),
        "cylinder" => Generated::Mesh(cylinder_mesh(
            p.get("radius", 1.0),
            p.get("length", 1.0),
            p.get("h", 0.05),
        )?),
        "strip" => Generated::Mesh(strip_mesh(p.get("width", 1.0), p.get("height", 1.0), p.get("h", 0.05))?),
        "saddle" => Generated::Mesh(saddle_mesh(p.get("c", 0.5), p.get("extent", 1.0), p.get("h", 0.05))?),
        "jfold" => {
            let j = p.count("j", 1)?;
            Generated::Mesh(sphere_jfold(j, p.get("h", 0.025))?)
        }
        "sphere_minus_cap" => Generated::Mesh(sphere_minus_cap(p.get("cap", 0.3), p.get("h", 0.05))?),
        "wells" => {
            let n = p.count("n", 4)?;
            Generated::Mesh(sphere_with_wells(
                n,
                p.get("radius", 0.05),
                p.get("volume", 0.01),
                p.get("h", 0.015),
            )?)
        }
        "ball" => {
            let n = p.count("n", 2)?;
            if n < 2 {
                return Err(invalid("ball dimension n must be at least 2"));
            }
            warped(
                n - 1,
                WarpProfile::Linear {
                    radius: p.get("radius", 1.0),
                },
                false,
            )?
        }
        "cylinder_cap" => {
            let k = p.count("k", 1)?;
            warped(
                k,
                WarpProfile::Constant {
                    radius: 1.0,
                    length: p.get("length", 1.0),
                },
                true,
            )?
        }
        "spherical_cap" => {
            let k = p.count("k", 1)?;
            warped(
                k,
                WarpProfile::SphericalCap {
                    radius: p.get("radius", 1.0),
                },
                false,
            )?
        }
        "exponential" => {
            let k = p.count("k", 1)?;
            let profile = WarpProfile::Exponential {
                rate: p.get("rate", 1.0),
                length: p.get("length", 1.0),
            };
            warped(k, profile, p.get("cap", 1.0) != 0.0)?
        }
        "power" => {
            let k = p.count("k", 1)?;
            warped(
                k,
                WarpProfile::Power {
                    length: p.get("length", 1.0),
                    exponent: p.get("exponent", 2.0),
                },
                false,
            )?
        }
        other => return Err(invalid(format!("unknown family {other:?}"))),
    };
    p.finish()?;
    Ok(g)
}

fn warped(k: usize, profile: WarpProfile, cap: bool) -> Result<Generated> {
    let d = WarpedDescriptor { k, profile, cap };
    d.build()?;
    Ok(Generated::Warped(d))
}

pub fn cmd_generate(family: &str, params: &BTreeMap<String, f64>, out: &Path) -> Result<()> {
    match generate(family, params)? {
        Generated::Mesh(s) => {
            let format = MeshFormat::from_path(out)
                .ok_or_else(|| invalid(format!("{} needs an .off or .obj extension", out.display())))?;
            write_atomic(out, mesh_to_string(&s, format).as_bytes())
        }
        Generated::Warped(d) => write_atomic(out, to_canonical_string(&d)?.as_bytes()),
    }
}

/// Loads `input` (mesh or warped descriptor) and runs the suite.
pub fn cmd_verify(input: &Path, field: Option<&Path>, config: &RunConfig) -> Result<VerificationReport> {
    let manifold = load_manifold(input, field)?;
    run_suite(&manifold, &config.verify)
}

pub fn load_manifold(input: &Path, field: Option<&Path>) -> Result<Manifold> {
    let label = input
        .file_name()
        .map_or_else(|| input.display().to_string(), |n| n.to_string_lossy().into_owned());
    if MeshFormat::from_path(input).is_some() {
        let surface = load_mesh(input)?;
        let m = match field {
            Some(f) => {
                let values = load_field_csv(f, surface.vertex_count())?;
                MeshManifold::with_field(surface, values)?
            }
            None => MeshManifold::new(surface)?,
        };
        return Ok(Manifold::Mesh(m.with_source(label, BTreeMap::new())));
    }
    if field.is_some() {
        return Err(invalid("--field applies to meshes only"));
    }
    let text = std::fs::read_to_string(input).map_err(|e| io_error(input, e))?;
    let d: WarpedDescriptor = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: input.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok(Manifold::Warped(d.build()?))
}

/// Family for `sweep` from its parameters.
pub fn sweep_family(name: &str, params: &BTreeMap<String, f64>) -> Result<Family> {
    let mut p = Params::new(params);
    let f = match name {
        "cylinder_cap" => Family::CylinderCap { k: p.count("k", 1)? },
        "jfold" => Family::Jfold { h: p.get("h", 0.025) },
        "wells" => Family::Wells {
            rim_ratio: p.get("rim_ratio", 0.25),
        },
        other => return Err(invalid(format!("unknown sweep family {other:?}"))),
    };
    p.finish()?;
    Ok(f)
}

pub fn cmd_sweep(
    family: &Family,
    from: usize,
    to: usize,
    config: &RunConfig,
) -> Result<(Vec<SequenceRecord>, FamilyVerdict)> {
    if from == 0 || from > to {
        return Err(invalid(format!(
            "index range {from}..={to} must start at 1 and be nonempty"
        )));
    }
    classify_sequence(family, from..=to, &config.sweep.deltas, &config.verify)
}

/// One row per index: invariants, then flat bound and tail per δ.
pub fn sweep_csv(records: &[SequenceRecord]) -> String {
    let mut out = String::from("family,j,mass,boundary_mass,diameter,boundary_diameter,h_max,ricci_nonnegative");
    if let Some(r) = records.first() {
        for b in &r.flat_bounds {
            write!(out, ",flat_upper_inner@{0},swif_tail@{0}", b.delta).expect("write to string");
        }
    }
    out.push_str(",wells_flat_bound\n");
    for r in records {
        let s = &r.summary;
        write!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family,
            r.index,
            format_float(s.mass),
            format_float(s.boundary_mass),
            format_float(s.diameter),
            format_float(s.boundary_diameter),
            format_float(s.h_max),
            s.ricci_nonnegative
        )
        .expect("write to string");
        for b in &r.flat_bounds {
            write!(
                out,
                ",{},{}",
                format_float(b.flat_upper_inner),
                format_float(b.swif_tail)
            )
            .expect("write to string");
        }
        match r.wells_flat_bound {
            Some(w) => writeln!(out, ",{}", format_float(w)),
            None => writeln!(out, ","),
        }
        .expect("write to string");
    }
    out
}

pub fn verdict_summary(v: &FamilyVerdict) -> String {
    let mut out = format!("family {} over j = {:?}\n", v.family, v.indices);
    for t in &v.trends {
        let slope = t.loglog_slope.map_or_else(|| "-".to_string(), |s| format!("{s:.3}"));
        writeln!(
            out,
            "  {:<18} max {:>12.6}  log-log slope {:>7}  {}",
            t.name,
            t.max,
            slope,
            if t.diverging { "diverges" } else { "bounded" }
        )
        .expect("write to string");
    }
    for route in [&v.bounded_diameter, &v.negative_mean_curvature] {
        writeln!(
            out,
            "  [{}] {}{}",
            route.hypotheses,
            if route.holds { "hold" } else { "fail: " },
            route.failing.join("; ")
        )
        .expect("write to string");
    }
    out
}

/// Plot-ready CSV of every measured-versus-bound series in a report.
pub fn cmd_report(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let report: VerificationReport = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok(report_csv(&report))
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("check,x,measured,bound\n");
    for c in &report.checks {
        for p in &c.series {
            writeln!(
                out,
                "{},{},{},{}",
                c.name,
                format_float(p.x),
                format_float(p.measured),
                format_float(p.bound)
            )
            .expect("write to string");
        }
    }
    out
}
