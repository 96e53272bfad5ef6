//! `trm`: command-line front end for the Teichmüller–Randers toolkit.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use randers_core::halfplane::{geodesic, hyp_dist, hyp_norm, Curve};
use randers_core::literal::{format_complex, parse_complex, parse_complex_list, parse_pair};
use randers_core::modelspace::ModelQD;
use randers_core::verify::{self, Selection};
use randers_core::{randers, torus, weakmetric};
use randers_core::{Error, FoliationVec, HPoint, HTangent, ModelSpace, RandersForm, Tolerances, WeightParam};

const SCHEMA: u32 = 1;
const ISOMETRY_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "trm", version, about = "Teichmüller–Randers weak metrics at desk scale")]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "TRM_SEED", default_value_t = 0)]
    seed: u64,

    /// JSON file overriding numerical tolerances.
    #[arg(long, global = true)]
    tolerances: Option<PathBuf>,

    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Teichmüller distance and weak distances between two points.
    Dist(DistArgs),
    /// Sample the geodesic segment between two points.
    Geodesic(GeodesicArgs),
    /// Profile δ^ω along the ray toward the boundary point of G.
    Ray(RayArgs),
    /// Compare δ^ω with the weighted half-plane through the disc chart.
    IsometryCheck(IsometryArgs),
    /// Randers cometric of a quadratic differential on a model space.
    Cometric(CometricArgs),
    /// Run property suites.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn pair_arg(s: &str) -> Result<(f64, f64), String> {
    parse_pair(s).map_err(|e| e.to_string())
}

/// Comma-separated coefficients in the model-space basis.
#[derive(Clone, Debug)]
struct Coeffs(Vec<Complex64>);

fn coeffs_arg(s: &str) -> Result<Coeffs, String> {
    parse_complex_list(s).map(Coeffs).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct DistArgs {
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    from: Complex64,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    to: Complex64,
    /// Weight t ∈ [0, 1].
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Foliation (a,b); adds δ^ω to the output.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    foliation: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
struct GeodesicArgs {
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    from: Complex64,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    to: Complex64,
    #[arg(long, default_value_t = 33)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct RayArgs {
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "i")]
    base: Complex64,
    /// Foliation (a,b) whose boundary point the ray tends to.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    g: (f64, f64),
    /// Foliation (a,b) defining ω.
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    f: (f64, f64),
    #[arg(long, default_value_t = 20.0)]
    t_max: f64,
    #[arg(long, default_value_t = 401)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct IsometryArgs {
    #[arg(long, value_parser = pair_arg, allow_hyphen_values = true)]
    f: (f64, f64),
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
}

#[derive(Args, Debug)]
struct CometricArgs {
    /// JSON model-space description.
    #[arg(long)]
    space: PathBuf,
    #[arg(long, value_parser = coeffs_arg, allow_hyphen_values = true)]
    phi: Coeffs,
    #[arg(long, value_parser = coeffs_arg, allow_hyphen_values = true)]
    psi: Coeffs,
    /// Also estimate the cometric as a dual norm by sampling.
    #[arg(long)]
    check_dual: bool,
    #[arg(long, default_value_t = 4000)]
    samples: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Selection>().map_err(|e| e.to_string()))]
    suite: Selection,
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
enum Failure {
    Assertion(String),
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::TooFewSamples(_)
            | Error::DimensionMismatch { .. }
            | Error::GridTooSmall { .. } => Failure::Usage(e.into()),
            _ => Failure::Domain(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

struct Output {
    text: String,
    /// Printed to standard error; keeps the table on stdout a clean CSV.
    summary: Option<String>,
    /// Set when the run completed but a check exceeded its tolerance.
    failed: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, summary: None, failed: None }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).context("serializing output")?;
    s.push('\n');
    Ok(s)
}

fn point(z: Complex64) -> Result<HPoint, Failure> {
    Ok(HPoint::from_complex(z)?)
}

fn foliation((a, b): (f64, f64)) -> Result<FoliationVec, Failure> {
    Ok(FoliationVec::new(a, b)?)
}

#[derive(Serialize)]
struct DistRecord {
    schema: u32,
    from: String,
    to: String,
    t: f64,
    d_teich: f64,
    delta_t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_omega: Option<f64>,
}

fn cmd_dist(args: &DistArgs) -> Result<Output, Failure> {
    let (p, q) = (point(args.from)?, point(args.to)?);
    let t = WeightParam::new(args.t)?;
    let delta_omega = match args.foliation {
        Some(f) => Some(torus::delta_omega(p, q, &foliation(f)?, t)),
        None => None,
    };
    json(&DistRecord {
        schema: SCHEMA,
        from: format_complex(p.z()),
        to: format_complex(q.z()),
        t: t.value(),
        d_teich: hyp_dist(p, q),
        delta_t: weakmetric::delta_t(p, q, t),
        delta_omega,
    })
    .map(Output::ok)
}

#[derive(Serialize)]
struct PathRow {
    s: f64,
    re: f64,
    im: f64,
    norm: f64,
}

#[derive(Serialize)]
struct GeodesicRecord {
    schema: u32,
    length: f64,
    points: Vec<PathRow>,
}

fn csv_text<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).context("writing csv")?;
    }
    let bytes = w.into_inner().context("writing csv")?;
    Ok(String::from_utf8(bytes).context("csv is utf-8")?)
}

fn cmd_geodesic(args: &GeodesicArgs) -> Result<Output, Failure> {
    if args.samples < 2 {
        return Err(Error::TooFewSamples(args.samples).into());
    }
    let g = geodesic(point(args.from)?, point(args.to)?)?;
    let rows: Vec<PathRow> = g
        .sample(args.samples)
        .into_iter()
        .map(|(s, p)| PathRow { s, re: p.re(), im: p.im(), norm: hyp_norm(&HTangent::new(p, g.velocity(s))) })
        .collect();
    match args.format {
        Format::Csv => csv_text(&rows).map(Output::ok),
        Format::Json => json(&GeodesicRecord { schema: SCHEMA, length: g.length(), points: rows }).map(Output::ok),
    }
}

#[derive(Serialize)]
struct RayRow {
    t: f64,
    delta_omega: f64,
    decay: f64,
    im: f64,
}

#[derive(Serialize)]
struct RayRecord {
    schema: u32,
    #[serde(flatten)]
    report: torus::RayReport,
    limit_rel_error: f64,
}

fn cmd_ray(args: &RayArgs) -> Result<Output, Failure> {
    let r = torus::ray_profile(point(args.base)?, &foliation(args.g)?, &foliation(args.f)?, args.t_max, args.samples)?;
    let summary = format!(
        "verdict: {:?}\nlimit_estimate: {}\nwalsh_value: {}\nlimit_rel_error: {}\n",
        r.verdict,
        r.limit_estimate,
        r.walsh_value,
        r.limit_rel_error()
    );
    match args.format {
        Format::Csv => {
            let rows: Vec<RayRow> = (0..r.t_grid.len())
                .map(|k| RayRow {
                    t: r.t_grid[k],
                    delta_omega: r.delta_values[k],
                    decay: r.decay_values[k],
                    im: r.im_values[k],
                })
                .collect();
            Ok(Output { text: csv_text(&rows)?, summary: Some(summary), failed: None })
        }
        Format::Json => {
            let limit_rel_error = r.limit_rel_error();
            json(&RayRecord { schema: SCHEMA, report: r, limit_rel_error }).map(Output::ok)
        }
    }
}

#[derive(Serialize)]
struct IsometryRecord {
    schema: u32,
    seed: u64,
    foliation: (f64, f64),
    t: f64,
    cases: usize,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

fn cmd_isometry(args: &IsometryArgs, seed: u64) -> Result<Output, Failure> {
    let f = foliation(args.f)?;
    let t = WeightParam::new(args.t)?;
    if args.pairs == 0 {
        return Err(Error::TooFewSamples(0).into());
    }
    let r = torus::isometry_check(&f, t, args.pairs, seed);
    let passed = r.max_deviation <= ISOMETRY_TOL;
    let text = json(&IsometryRecord {
        schema: SCHEMA,
        seed,
        foliation: (f.a(), f.b()),
        t: t.value(),
        cases: r.cases,
        max_deviation: r.max_deviation,
        tolerance: ISOMETRY_TOL,
        passed,
    })?;
    let failed = (!passed).then(|| format!("isometry deviation {} exceeds {ISOMETRY_TOL}", r.max_deviation));
    Ok(Output { text, summary: None, failed })
}

#[derive(Serialize)]
struct CometricRecord {
    schema: u32,
    psi_norm: f64,
    g_omega: f64,
    boundary_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_err: Option<f64>,
}

fn cmd_cometric(args: &CometricArgs, seed: u64, tol: &Tolerances) -> Result<Output, Failure> {
    let text = fs::read_to_string(&args.space)
        .with_context(|| format!("reading model space {}", args.space.display()))?;
    let space = ModelSpace::from_json(&text)?;
    let phi = ModelQD::new(args.phi.0.clone());
    let form = RandersForm::new(&space, ModelQD::new(args.psi.0.clone()))?;
    space.l1_norm(&phi)?;
    let g = randers::cometric(&space, &phi, &form, tol)?;
    let (dual_estimate, rel_err) = if args.check_dual {
        let r = randers::cometric_dual_check(&space, &phi, &form, args.samples, seed, tol)?;
        (Some(r.dual_estimate), Some(r.rel_err))
    } else {
        (None, None)
    };
    json(&CometricRecord {
        schema: SCHEMA,
        psi_norm: form.norm(),
        g_omega: g.g_omega,
        boundary_residual: g.boundary_residual,
        dual_estimate,
        rel_err,
    })
    .map(Output::ok)
}

fn cmd_verify(args: &VerifyArgs, seed: u64, tol: &Tolerances) -> Result<Output, Failure> {
    let report = verify::run(&args.suite, seed, tol)?;
    let failed = (!report.passed).then(|| {
        report.failures().map(|(s, c)| format!("{s}/{}: {} > {}", c.name, c.max_violation, c.tolerance)).collect::<Vec<_>>().join("\n")
    });
    Ok(Output { text: json(&report)?, summary: None, failed })
}

fn load_tolerances(path: Option<&PathBuf>) -> Result<Tolerances, Failure> {
    let tol = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Tolerances::default(),
    };
    tol.validate()?;
    Ok(tol)
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let tol = load_tolerances(cli.tolerances.as_ref())?;
    match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Geodesic(a) => cmd_geodesic(a),
        Command::Ray(a) => cmd_ray(a),
        Command::IsometryCheck(a) => cmd_isometry(a, cli.seed),
        Command::Cometric(a) => cmd_cometric(a, cli.seed, &tol),
        Command::Verify(a) => cmd_verify(a, cli.seed, &tol),
    }
}

fn emit(cli: &Cli, out: &Output) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(out.text.as_bytes())?,
    }
    if let Some(s) = &out.summary {
        io::stderr().lock().write_all(s.as_bytes())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|out| {
        emit(&cli, &out).map_err(Failure::Domain)?;
        match out.failed {
            Some(msg) => Err(Failure::Assertion(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Assertion(m) => eprintln!("assertion failed:\n{m}"),
                Failure::Usage(e) | Failure::Domain(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
