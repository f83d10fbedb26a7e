//! Command-line front end for the spherical two-center orbit engine.
//!
//! Subcommands: `classify`, `orbit`, `grid`, `closed`, `verify`.
//! Parameters come from flags or a config file (`--config`, key=value
//! lines or a JSON object; flags win). Invariants are accepted in the
//! scaled diagram chart (`--h`, `--g`) or the raw spherical chart
//! (`--omega`, `--gsep`).
//!
//! Exit codes: 0 success (allowed motion / verification passed),
//! 2 usage or configuration fault, 3 forbidden region, 4 critical
//! curve, 5 verification failure, 1 any other engine error.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{
    parse_family, parse_sign, parse_subtype, resolve_invariants, resolve_params, resolve_tol,
    ConfigError, FileConfig, Layered,
};
use dicentra::bifurcation::{
    branch_points, classify, critical_curves, ChartRegion, Classification, OrbitClass, Regime,
    Subtype,
};
use dicentra::closed::{solve, CommensurabilityProblem, FixedInvariant};
use dicentra::geometry::Sign;
use dicentra::invariants::InvariantPair;
use dicentra::oracle::{compare_to_analytic, IntegratorConfig};
use dicentra::orbit::{build_spec, build_spec_for_class, OrbitError, OrbitSpec};
use output::{emit, fmt17, samples_to_csv, samples_to_json, to_json_pretty};
use serde::Serialize;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_ENGINE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FORBIDDEN: u8 = 3;
const EXIT_CRITICAL: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "dicentra",
    version,
    about = "Orbits of the two fixed centers problem on the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an invariant pair into the orbit taxonomy.
    Classify(ClassifyArgs),
    /// Sample an analytic orbit to CSV or JSON.
    Orbit(OrbitArgs),
    /// Classify a rectangular grid of the bifurcation diagram to CSV.
    Grid(GridArgs),
    /// Solve the period commensurability equation for a closed orbit.
    Closed(ClosedArgs),
    /// Check an analytic orbit against the numerical integrators.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ProblemFlags {
    /// Sphere radius R.
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// Half-separation angle of the centers, radians, in (0, pi/2).
    #[arg(long = "theta-f", allow_negative_numbers = true)]
    theta_f: Option<f64>,
    /// Relative strength of the weaker center, gamma2/(gamma1+gamma2).
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Strength of the first (stronger) center.
    #[arg(long, allow_negative_numbers = true)]
    gamma1: Option<f64>,
    /// Strength of the second center.
    #[arg(long, allow_negative_numbers = true)]
    gamma2: Option<f64>,
    /// Config file (key=value lines, or a JSON object).
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct InvariantFlags {
    /// Planar-chart energy h = tan(theta_f) * Omega (figure convention).
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    /// Planar-chart separation constant g = cotan(theta_f) * G.
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Raw second invariant Omega (alternative chart).
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Raw separation constant G = H - Omega (alternative chart).
    #[arg(long, allow_negative_numbers = true)]
    gsep: Option<f64>,
}

#[derive(Args, Clone)]
struct OrbitShapeFlags {
    /// Initial radial phase s_u0.
    #[arg(long, allow_negative_numbers = true)]
    su0: Option<f64>,
    /// Initial angular phase s_v0.
    #[arg(long, allow_negative_numbers = true)]
    sv0: Option<f64>,
    /// Radial direction sign (+1 or -1).
    #[arg(long = "sign-u")]
    sign_u: Option<String>,
    /// Angular direction sign (+1 or -1).
    #[arg(long = "sign-v")]
    sign_v: Option<String>,
    /// Global orientation sign for Y (+1 or -1).
    #[arg(long = "sign-y")]
    sign_y: Option<String>,
    /// Satellitary zone (1 = around the stronger center, 2 = weaker).
    #[arg(long)]
    zone: Option<u8>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    #[command(flatten)]
    invariants: InvariantFlags,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    #[command(flatten)]
    invariants: InvariantFlags,
    #[command(flatten)]
    shape: OrbitShapeFlags,
    /// Window start in local time.
    #[arg(long = "zeta-min", allow_negative_numbers = true)]
    zeta_min: Option<f64>,
    /// Window end in local time.
    #[arg(long = "zeta-max", allow_negative_numbers = true)]
    zeta_max: Option<f64>,
    /// Number of samples (>= 2).
    #[arg(long)]
    samples: Option<usize>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output path ("-" for stdout).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    #[arg(long = "h-min", allow_negative_numbers = true)]
    h_min: Option<f64>,
    #[arg(long = "h-max", allow_negative_numbers = true)]
    h_max: Option<f64>,
    #[arg(long = "g-min", allow_negative_numbers = true)]
    g_min: Option<f64>,
    #[arg(long = "g-max", allow_negative_numbers = true)]
    g_max: Option<f64>,
    /// Grid columns (h direction).
    #[arg(long)]
    nx: Option<usize>,
    /// Grid rows (g direction).
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ClosedArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    /// Numerator of the resonance p*T_u = q*T_v.
    #[arg(long = "ratio-p")]
    ratio_p: Option<u32>,
    /// Denominator of the resonance.
    #[arg(long = "ratio-q")]
    ratio_q: Option<u32>,
    /// Fixed planar-chart h (solve for g).
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    /// Fixed planar-chart g (solve for h).
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Expected orbit family (t_p, t_l, t_s, t_s', t_ds, t_mp).
    #[arg(long)]
    family: Option<String>,
    /// Family subtype where applicable (1, 2, zone1, zone2).
    #[arg(long)]
    subtype: Option<String>,
    /// Search bracket for the free invariant, as LO:HI.
    #[arg(long)]
    bracket: Option<String>,
    /// Residual tolerance relative to max(T_u, T_v).
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    #[command(flatten)]
    invariants: InvariantFlags,
    #[command(flatten)]
    shape: OrbitShapeFlags,
    /// Window start in local time.
    #[arg(long = "zeta-min", allow_negative_numbers = true)]
    zeta_min: Option<f64>,
    /// Window end in local time.
    #[arg(long = "zeta-max", allow_negative_numbers = true)]
    zeta_max: Option<f64>,
    /// Comparison grid size.
    #[arg(long)]
    samples: Option<usize>,
    /// Pass threshold on the Cartesian deviation, in units of R.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    output: Option<String>,
}

enum Failure {
    Usage(String),
    Forbidden(String),
    Critical(String),
    VerifyFailed,
    Engine(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Forbidden(_) => EXIT_FORBIDDEN,
            Failure::Critical(_) => EXIT_CRITICAL,
            Failure::VerifyFailed => EXIT_VERIFY_FAILED,
            Failure::Engine(_) => EXIT_ENGINE,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Usage(m)
            | Failure::Forbidden(m)
            | Failure::Critical(m)
            | Failure::Engine(m) => Some(m),
            Failure::VerifyFailed => None,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::ForbiddenRegion(d) => Failure::Forbidden(format!("forbidden region: {d}")),
            OrbitError::CriticalCurve(d) => Failure::Critical(format!("critical curve: {d}")),
            other => Failure::Engine(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Engine(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Closed(args) => cmd_closed(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn load_file(problem: &ProblemFlags) -> Result<FileConfig, Failure> {
    match &problem.config {
        Some(path) => Ok(FileConfig::load(path)?),
        None => Ok(FileConfig::default()),
    }
}

struct ResolvedOrbit {
    params: dicentra::geometry::ProblemParams,
    spec: OrbitSpec,
}

fn resolve_orbit(
    problem: &ProblemFlags,
    invariants: &InvariantFlags,
    shape: &OrbitShapeFlags,
    file: &FileConfig,
) -> Result<ResolvedOrbit, Failure> {
    let layer = Layered { file };
    let params = resolve_params(
        &layer,
        problem.radius,
        problem.theta_f,
        problem.gamma,
        problem.gamma1,
        problem.gamma2,
    )?;
    let inv = resolve_invariants(
        &layer,
        &params,
        invariants.h,
        invariants.g,
        invariants.omega,
        invariants.gsep,
    )?;
    let su0 = layer.f64(shape.su0, "su0", 0.0)?;
    let sv0 = layer.f64(shape.sv0, "sv0", 0.0)?;
    let sign = |flag: &Option<String>, key: &str| -> Result<Sign, Failure> {
        match layer.string_opt(flag.clone(), key) {
            Some(text) => Ok(parse_sign(&text)?),
            None => Ok(Sign::Plus),
        }
    };
    let signs = (
        sign(&shape.sign_u, "sign_u")?,
        sign(&shape.sign_v, "sign_v")?,
        sign(&shape.sign_y, "sign_y")?,
    );
    let zone = shape
        .zone
        .map(|z| z.to_string())
        .or_else(|| layer.string_opt(None, "zone"));
    let spec = match zone.as_deref() {
        None | Some("1") => build_spec(&inv, &params, (su0, sv0), signs)?,
        Some("2") => {
            let class = match classify(&inv, &params).map_err(OrbitError::from)? {
                Classification::Allowed {
                    second_zone: Some(z2),
                    ..
                } => z2,
                Classification::Allowed { class, .. } => class,
                Classification::Forbidden { diagnostic, .. } => {
                    return Err(Failure::Forbidden(format!(
                        "forbidden region: {diagnostic}"
                    )))
                }
                Classification::Critical { curves } => {
                    let names: Vec<&str> = curves.iter().map(|c| c.label()).collect();
                    return Err(Failure::Critical(format!(
                        "critical curve: {}",
                        names.join(", ")
                    )));
                }
            };
            build_spec_for_class(&inv, &params, class, (su0, sv0), signs)?
        }
        Some(other) => {
            return Err(Failure::Usage(format!(
                "invalid zone '{other}' (use 1 or 2)"
            )))
        }
    };
    Ok(ResolvedOrbit { params, spec })
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let file = load_file(&args.problem)?;
    let layer = Layered { file: &file };
    let params = resolve_params(
        &layer,
        args.problem.radius,
        args.problem.theta_f,
        args.problem.gamma,
        args.problem.gamma1,
        args.problem.gamma2,
    )?;
    let inv = resolve_invariants(
        &layer,
        &params,
        args.invariants.h,
        args.invariants.g,
        args.invariants.omega,
        args.invariants.gsep,
    )?;
    let planar = inv.to_planar(&params);
    let classification = classify(&inv, &params).map_err(|e| Failure::Engine(e.to_string()))?;
    let bp = branch_points(&inv, &params);
    let curves = critical_curves(&inv, &params);

    println!(
        "invariants: h = {}, g = {} (Omega = {}, G = {})",
        fmt17(planar.h),
        fmt17(planar.g),
        fmt17(inv.omega()),
        fmt17(inv.g_const())
    );
    let describe = |pair: dicentra::RootPair| match pair {
        dicentra::RootPair::Real { lo, hi } => format!("real ({}, {})", fmt17(lo), fmt17(hi)),
        dicentra::RootPair::Complex { re, im } => {
            format!("complex ({} +/- {}i)", fmt17(re), fmt17(im))
        }
    };
    println!("radial branch points:  {}", describe(bp.radial));
    println!("angular branch points: {}", describe(bp.angular));
    for (id, residual) in curves.residuals() {
        println!("curve {:<5} residual: {}", id.label(), fmt17(residual));
    }
    match classification {
        Classification::Allowed { class, second_zone } => {
            println!("class: {class}");
            if let Some(z2) = second_zone {
                println!("second orbit at this point: {z2}");
            }
            Ok(())
        }
        Classification::Critical { curves } => {
            let names: Vec<&str> = curves.iter().map(|c| c.label()).collect();
            println!("class: critical ({})", names.join(", "));
            Err(Failure::Critical(format!(
                "invariants lie on {}",
                names.join(", ")
            )))
        }
        Classification::Forbidden { regime, diagnostic } => {
            println!("class: forbidden ({})", regime.label());
            Err(Failure::Forbidden(diagnostic))
        }
    }
}

fn cmd_orbit(args: OrbitArgs) -> Result<(), Failure> {
    let file = load_file(&args.problem)?;
    let layer = Layered { file: &file };
    let zeta_min = layer.f64(args.zeta_min, "zeta_min", 0.0)?;
    let zeta_max = layer.f64(args.zeta_max, "zeta_max", 70.0)?;
    let n = layer.usize(args.samples, "samples", 1000)?;
    let format = layer.string(args.format, "format", "csv");
    let out_path = layer.string(args.output, "output", "-");
    if zeta_max <= zeta_min {
        return Err(Failure::Usage(format!(
            "window [{zeta_min}, {zeta_max}] is empty"
        )));
    }
    let resolved = resolve_orbit(&args.problem, &args.invariants, &args.shape, &file)?;
    let samples = resolved
        .spec
        .sample((zeta_min, zeta_max), n)
        .map_err(Failure::from)?;
    let content = match format.as_str() {
        "csv" => samples_to_csv(&samples),
        "json" => samples_to_json(&resolved.spec, &samples),
        other => {
            return Err(Failure::Usage(format!(
                "invalid format '{other}' (use csv or json)"
            )))
        }
    };
    emit(&out_path, &content)?;
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<(), Failure> {
    let file = load_file(&args.problem)?;
    let layer = Layered { file: &file };
    let params = resolve_params(
        &layer,
        args.problem.radius,
        args.problem.theta_f,
        args.problem.gamma,
        args.problem.gamma1,
        args.problem.gamma2,
    )?;
    let region = ChartRegion {
        h_min: layer.f64(args.h_min, "h_min", -1.0)?,
        h_max: layer.f64(args.h_max, "h_max", 2.0)?,
        g_min: layer.f64(args.g_min, "g_min", -1.5)?,
        g_max: layer.f64(args.g_max, "g_max", 2.5)?,
    };
    let nx = layer.usize(args.nx, "nx", 200)?;
    let ny = layer.usize(args.ny, "ny", 200)?;
    let out_path = layer.string(args.output, "output", "-");
    if nx == 0 || ny == 0 {
        return Err(Failure::Usage("grid resolution must be positive".into()));
    }
    if !(region.h_min <= region.h_max && region.g_min <= region.g_max) {
        return Err(Failure::Usage("grid region is reversed".into()));
    }
    let grid = dicentra::bifurcation::classify_grid(&region, (nx, ny), &params)
        .map_err(|e| Failure::Engine(e.to_string()))?;
    let mut content = String::with_capacity(grid.len() * 64 + 32);
    content.push_str("h,g,class,subtype,flags\n");
    for cell in &grid {
        let (label, subtype, flags) = match &cell.classification {
            Classification::Allowed { class, second_zone } => (
                class.family.label(),
                class.subtype.label(),
                if second_zone.is_some() {
                    "two-orbits"
                } else {
                    ""
                },
            ),
            Classification::Critical { .. } => ("critical", "-", ""),
            Classification::Forbidden { .. } => ("forbidden", "-", ""),
        };
        content.push_str(&format!(
            "{},{},{label},{subtype},{flags}\n",
            fmt17(cell.h),
            fmt17(cell.g)
        ));
    }
    emit(&out_path, &content)?;
    Ok(())
}

#[derive(Serialize)]
struct ClosedRecord {
    p: u32,
    q: u32,
    #[serde(rename = "Omega")]
    omega: f64,
    #[serde(rename = "G")]
    g_const: f64,
    h: f64,
    g: f64,
    class: String,
    t_u: f64,
    t_v: f64,
    residual: f64,
}

fn cmd_closed(args: ClosedArgs) -> Result<(), Failure> {
    let file = load_file(&args.problem)?;
    let layer = Layered { file: &file };
    let params = resolve_params(
        &layer,
        args.problem.radius,
        args.problem.theta_f,
        args.problem.gamma,
        args.problem.gamma1,
        args.problem.gamma2,
    )?;
    let p = layer
        .u32_opt(args.ratio_p, "ratio_p")?
        .ok_or_else(|| ConfigError("missing --ratio-p".into()))?;
    let q = layer
        .u32_opt(args.ratio_q, "ratio_q")?
        .ok_or_else(|| ConfigError("missing --ratio-q".into()))?;
    let fixed_h = layer.f64_opt(args.h, "h")?;
    let fixed_g = layer.f64_opt(args.g, "g")?;
    let fixed = match (fixed_h, fixed_g) {
        (Some(h), None) => FixedInvariant::PlanarH(h),
        (None, Some(g)) => FixedInvariant::PlanarG(g),
        _ => {
            return Err(Failure::Usage(
                "fix exactly one invariant: --h (solve for g) or --g (solve for h)".into(),
            ))
        }
    };
    let bracket_text = layer
        .string_opt(args.bracket, "bracket_lo")
        .map(|lo| match layer.string_opt(None, "bracket_hi") {
            Some(hi) if !lo.contains(':') => format!("{lo}:{hi}"),
            _ => lo,
        })
        .ok_or_else(|| ConfigError("missing --bracket LO:HI".into()))?;
    let (lo, hi) = bracket_text
        .split_once(':')
        .ok_or_else(|| ConfigError(format!("invalid bracket '{bracket_text}' (use LO:HI)")))?;
    let bracket: (f64, f64) = (
        lo.trim()
            .parse()
            .map_err(|_| ConfigError(format!("invalid bracket bound '{lo}'")))?,
        hi.trim()
            .parse()
            .map_err(|_| ConfigError(format!("invalid bracket bound '{hi}'")))?,
    );
    let family = layer
        .string_opt(args.family, "family")
        .ok_or_else(|| ConfigError("missing --family".into()))?;
    let family = parse_family(&family)?;
    let subtype = match layer.string_opt(args.subtype, "subtype") {
        Some(text) => parse_subtype(&text)?,
        None => Subtype::None,
    };
    let regime = match fixed {
        FixedInvariant::PlanarH(h) if h < 0.0 => Regime::NegativeOmega,
        FixedInvariant::PlanarH(h) if h > 0.0 => Regime::PositiveOmega,
        FixedInvariant::PlanarH(_) => Regime::ZeroOmega,
        FixedInvariant::PlanarG(_) => {
            let mid = 0.5 * (bracket.0 + bracket.1);
            if mid < 0.0 {
                Regime::NegativeOmega
            } else {
                Regime::PositiveOmega
            }
        }
    };
    let class = OrbitClass {
        family,
        regime,
        subtype,
    };
    let tol = resolve_tol(&layer, args.tol, 1e-10)?;
    let out_path = layer.string(args.output, "output", "-");

    let prob = CommensurabilityProblem::new(p, q, fixed, bracket, class)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let sol = solve(&prob, &params, tol).map_err(|e| Failure::Engine(e.to_string()))?;
    let inv = InvariantPair::from_planar(sol.invariants, &params);
    let record = ClosedRecord {
        p: sol.p,
        q: sol.q,
        omega: inv.omega(),
        g_const: inv.g_const(),
        h: sol.invariants.h,
        g: sol.invariants.g,
        class: format!("{}", sol.spec.class()),
        t_u: sol.t_u,
        t_v: sol.t_v,
        residual: sol.residual,
    };
    emit(&out_path, &to_json_pretty(&record))?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let file = load_file(&args.problem)?;
    let layer = Layered { file: &file };
    let zeta_min = layer.f64(args.zeta_min, "zeta_min", 0.0)?;
    let zeta_max = layer.f64(args.zeta_max, "zeta_max", 10.0)?;
    let n = layer.usize(args.samples, "samples", 160)?;
    let tol = resolve_tol(&layer, args.tol, 1e-6)?;
    let out_path = layer.string(args.output, "output", "-");
    if zeta_max <= zeta_min {
        return Err(Failure::Usage(format!(
            "window [{zeta_min}, {zeta_max}] is empty"
        )));
    }
    let resolved = resolve_orbit(&args.problem, &args.invariants, &args.shape, &file)?;
    let report = compare_to_analytic(
        &resolved.spec,
        &resolved.params,
        (zeta_min, zeta_max),
        n,
        &IntegratorConfig::default(),
    )
    .map_err(|e| Failure::Engine(e.to_string()))?;
    let passed = report.passes(tol, resolved.params.radius());

    #[derive(Serialize)]
    struct VerifyDocument<'a> {
        passed: bool,
        tolerance: f64,
        report: &'a dicentra::oracle::DeviationReport,
    }
    emit(
        &out_path,
        &to_json_pretty(&VerifyDocument {
            passed,
            tolerance: tol,
            report: &report,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(Failure::VerifyFailed)
    }
}
