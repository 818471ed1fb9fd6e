//! Command-line interface: argument grammar, config echoing and output
//! serialization. All numeric work happens in the library; this module only
//! orchestrates.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qvol::error::{Error, Result};
use qvol::metrics::{
    classical_fisher, quantum_fisher, wigner_yanase, MetricTensor, QuadratureGrid,
    DEFAULT_METRIC_MARGIN,
};
use qvol::validate::{run_suite, ValidationOptions};
use qvol::volume::{
    ratio_curve, volume, Integrand, McConfig, RatioCurve, SurrogateGrid, DEFAULT_BUILD_MARGIN,
    DEFAULT_MC_MARGIN,
};
use qvol::{Region, TVector};

#[derive(Parser)]
#[command(
    name = "qvol",
    version,
    about = "Information-geometric volumes of two-qubit states with maximally disordered subsystems"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a metric tensor and its volume density at one point
    Metric(MetricArgs),
    /// Monte Carlo volume of a region under a metric
    Volume(VolumeArgs),
    /// Separable-to-total volume ratio versus purity (plot data)
    Curve(CurveArgs),
    /// Precompute the classical volume density on a lattice
    Grid(GridArgs),
    /// Run the invariant validation suite
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Classical,
    Sld,
    Wy,
}

impl KindArg {
    fn label(&self) -> &'static str {
        match self {
            KindArg::Classical => "classical",
            KindArg::Sld => "sld",
            KindArg::Wy => "wy",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegionArg {
    Tetra,
    Octa,
}

impl RegionArg {
    fn region(&self) -> Region {
        match self {
            RegionArg::Tetra => Region::Tetrahedron,
            RegionArg::Octa => Region::Octahedron,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            RegionArg::Tetra => "tetra",
            RegionArg::Octa => "octa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn label(&self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature sizes for the classical metric, as "n_theta,n_phi"
    #[arg(long, value_parser = parse_quad, default_value = "24,32")]
    quad: [usize; 2],
    /// Interior margin (Euclidean face distance); command-specific default
    #[arg(long)]
    margin: Option<f64>,
    /// Worker threads (default: QVOL_THREADS or hardware parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct MetricArgs {
    /// Metric kind
    #[arg(long, alias = "metric", value_enum, default_value = "sld")]
    kind: KindArg,
    /// Evaluation point "t11,t22,t33" (no spaces)
    #[arg(long, value_parser = parse_triple)]
    t: [f64; 3],
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VolumeArgs {
    /// Integration region
    #[arg(long, value_enum, default_value = "tetra")]
    region: RegionArg,
    /// Metric kind
    #[arg(long, alias = "metric", value_enum, default_value = "sld")]
    kind: KindArg,
    /// Sample count (scientific notation accepted, e.g. 1e7)
    #[arg(long, value_parser = parse_samples, default_value = "1e6")]
    samples: u64,
    /// Surrogate grid file for the classical metric
    #[arg(long)]
    surrogate: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CurveArgs {
    /// Metric kind
    #[arg(long, alias = "metric", value_enum, default_value = "sld")]
    kind: KindArg,
    /// Samples per purity grid point
    #[arg(long, value_parser = parse_samples, default_value = "1e6")]
    samples: u64,
    /// Surrogate grid file for the classical metric
    #[arg(long)]
    surrogate: Option<PathBuf>,
    /// Smallest purity on the grid
    #[arg(long, default_value_t = 0.26)]
    pmin: f64,
    /// Largest purity on the grid
    #[arg(long, default_value_t = 0.50)]
    pmax: f64,
    /// Number of purity grid points
    #[arg(long, default_value_t = 25)]
    steps: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GridArgs {
    /// Lattice points per axis (odd, >= 9)
    #[arg(long, default_value_t = 33)]
    resolution: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Reduced sample counts (runs in well under a minute)
    #[arg(long)]
    quick: bool,
    /// Test hook: corrupt one metric entry; the suite must catch it
    #[arg(long, hide = true)]
    inject_sign_flip: bool,
    #[command(flatten)]
    common: CommonArgs,
}

/// Resolved configuration, echoed verbatim into every output artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<[f64; 3]>,
    samples: u64,
    seed: u64,
    quad: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    surrogate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resolution: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    purity_grid: Option<PurityGridConfig>,
    margin: f64,
    threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    format: String,
    quick: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct PurityGridConfig {
    pmin: f64,
    pmax: f64,
    steps: usize,
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected \"t11,t22,t33\", got \"{s}\""));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad component \"{part}\": {e}"))?;
        if !slot.is_finite() {
            return Err(format!("non-finite component \"{part}\""));
        }
    }
    Ok(out)
}

fn parse_quad(s: &str) -> std::result::Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"n_theta,n_phi\", got \"{s}\""));
    }
    let n_theta = parts[0].trim().parse::<usize>().map_err(|e| e.to_string())?;
    let n_phi = parts[1].trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok([n_theta, n_phi])
}

fn parse_samples(s: &str) -> std::result::Result<u64, String> {
    let v = s.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if !v.is_finite() || v < 1.0 || v != v.trunc() || v > 9.0e15 {
        return Err(format!("sample count must be a positive integer, got \"{s}\""));
    }
    Ok(v as u64)
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        return Ok(n);
    }
    if let Ok(env) = std::env::var("QVOL_THREADS") {
        let n: usize = env.parse().map_err(|_| {
            Error::InvalidArgument(format!("QVOL_THREADS must be a positive integer, got \"{env}\""))
        })?;
        if n == 0 {
            return Err(Error::InvalidArgument(
                "QVOL_THREADS must be positive".into(),
            ));
        }
        return Ok(n);
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn config_line(config: &RunConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let threads = match &cli.command {
        Command::Metric(a) => thread_count(a.common.threads)?,
        Command::Volume(a) => thread_count(a.common.threads)?,
        Command::Curve(a) => thread_count(a.common.threads)?,
        Command::Grid(a) => thread_count(a.common.threads)?,
        Command::Validate(a) => thread_count(a.common.threads)?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Metric(args) => cmd_metric(args, threads),
        Command::Volume(args) => cmd_volume(args, threads),
        Command::Curve(args) => cmd_curve(args, threads),
        Command::Grid(args) => cmd_grid(args, threads),
        Command::Validate(args) => cmd_validate(args, threads),
    })
}

#[derive(Serialize)]
struct MetricOutput<'a> {
    t: [f64; 3],
    kind: &'a str,
    g: MetricTensor,
    sqrt_det: f64,
    config: &'a RunConfig,
}

fn cmd_metric(args: MetricArgs, threads: usize) -> Result<i32> {
    let margin = args.common.margin.unwrap_or(DEFAULT_METRIC_MARGIN);
    let format = args.common.format.unwrap_or(FormatArg::Json);
    let config = RunConfig {
        command: "metric".into(),
        kind: Some(args.kind.label().into()),
        region: None,
        t: Some(args.t),
        samples: 0,
        seed: args.common.seed,
        quad: args.common.quad,
        surrogate: None,
        resolution: None,
        purity_grid: None,
        margin,
        threads,
        out: args.common.out.as_ref().map(|p| p.display().to_string()),
        format: format.label().into(),
        quick: false,
    };
    let t = TVector::from(args.t);
    let g = match args.kind {
        KindArg::Sld => quantum_fisher(&t)?,
        KindArg::Wy => wigner_yanase(&t)?,
        KindArg::Classical => {
            let grid = QuadratureGrid::new(args.common.quad[0], args.common.quad[1])?;
            classical_fisher(&grid, &t, margin)?
        }
    };
    let output = MetricOutput {
        t: args.t,
        kind: args.kind.label(),
        g,
        sqrt_det: g.sqrt_det(),
        config: &config,
    };
    emit(&args.common.out, &to_json(&output))?;
    Ok(0)
}

#[derive(Serialize)]
struct VolumeOutput<'a> {
    value: f64,
    std_error: f64,
    n_samples: u64,
    seed: u64,
    config: &'a RunConfig,
}

/// Loads or constructs whatever the classical metric needs; quantum kinds
/// carry no state.
enum Backend {
    Quantum(KindArg),
    Direct(QuadratureGrid),
    Surrogate(SurrogateGrid),
}

impl Backend {
    fn new(kind: KindArg, quad: [usize; 2], surrogate: &Option<PathBuf>) -> Result<Self> {
        match kind {
            KindArg::Sld | KindArg::Wy => Ok(Backend::Quantum(kind)),
            KindArg::Classical => match surrogate {
                Some(path) => Ok(Backend::Surrogate(SurrogateGrid::read(path)?)),
                None => Ok(Backend::Direct(QuadratureGrid::new(quad[0], quad[1])?)),
            },
        }
    }

    fn integrand(&self) -> Integrand<'_> {
        match self {
            Backend::Quantum(KindArg::Sld) => Integrand::Sld,
            Backend::Quantum(KindArg::Wy) => Integrand::WignerYanase,
            Backend::Quantum(KindArg::Classical) => unreachable!(),
            Backend::Direct(grid) => Integrand::ClassicalDirect { grid },
            Backend::Surrogate(surrogate) => Integrand::ClassicalSurrogate { surrogate },
        }
    }
}

fn cmd_volume(args: VolumeArgs, threads: usize) -> Result<i32> {
    let margin = args.common.margin.unwrap_or(DEFAULT_MC_MARGIN);
    let format = args.common.format.unwrap_or(FormatArg::Json);
    let config = RunConfig {
        command: "volume".into(),
        kind: Some(args.kind.label().into()),
        region: Some(args.region.label().into()),
        t: None,
        samples: args.samples,
        seed: args.common.seed,
        quad: args.common.quad,
        surrogate: args.surrogate.as_ref().map(|p| p.display().to_string()),
        resolution: None,
        purity_grid: None,
        margin,
        threads,
        out: args.common.out.as_ref().map(|p| p.display().to_string()),
        format: format.label().into(),
        quick: false,
    };
    let backend = Backend::new(args.kind, args.common.quad, &args.surrogate)?;
    let cfg = McConfig {
        samples: args.samples,
        seed: args.common.seed,
        margin,
    };
    let estimate = volume(args.region.region(), &backend.integrand(), &cfg)?;
    let output = VolumeOutput {
        value: estimate.value,
        std_error: estimate.std_error,
        n_samples: estimate.n_samples,
        seed: estimate.seed,
        config: &config,
    };
    emit(&args.common.out, &to_json(&output))?;
    Ok(0)
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    points: &'a Vec<qvol::RatioPoint>,
    config: &'a RunConfig,
}

fn cmd_curve(args: CurveArgs, threads: usize) -> Result<i32> {
    let margin = args.common.margin.unwrap_or(DEFAULT_MC_MARGIN);
    let format = args.common.format.unwrap_or(FormatArg::Csv);
    if args.steps == 0 {
        return Err(Error::InvalidArgument("--steps must be positive".into()));
    }
    if args.pmax < args.pmin {
        return Err(Error::InvalidArgument(format!(
            "--pmax {} is below --pmin {}",
            args.pmax, args.pmin
        )));
    }
    let config = RunConfig {
        command: "curve".into(),
        kind: Some(args.kind.label().into()),
        region: None,
        t: None,
        samples: args.samples,
        seed: args.common.seed,
        quad: args.common.quad,
        surrogate: args.surrogate.as_ref().map(|p| p.display().to_string()),
        resolution: None,
        purity_grid: Some(PurityGridConfig {
            pmin: args.pmin,
            pmax: args.pmax,
            steps: args.steps,
        }),
        margin,
        threads,
        out: args.common.out.as_ref().map(|p| p.display().to_string()),
        format: format.label().into(),
        quick: false,
    };
    let p_grid: Vec<f64> = if args.steps == 1 {
        vec![args.pmin]
    } else {
        let step = (args.pmax - args.pmin) / (args.steps - 1) as f64;
        (0..args.steps)
            .map(|i| args.pmin + step * i as f64)
            .collect()
    };
    let backend = Backend::new(args.kind, args.common.quad, &args.surrogate)?;
    let cfg = McConfig {
        samples: args.samples,
        seed: args.common.seed,
        margin,
    };
    let curve = ratio_curve(&backend.integrand(), &p_grid, &cfg)?;
    let text = match format {
        FormatArg::Csv => curve_csv(&curve, &config),
        FormatArg::Json => to_json(&CurveOutput {
            points: &curve.points,
            config: &config,
        }),
    };
    emit(&args.common.out, &text)?;
    Ok(0)
}

fn curve_csv(curve: &RatioCurve, config: &RunConfig) -> String {
    let mut s = String::new();
    s.push_str(&format!("# config: {}\n", config_line(config)));
    s.push_str("P,V,V_stderr,Vs,Vs_stderr,R\n");
    for pt in &curve.points {
        let r = match pt.r {
            Some(r) => format!("{r:.16e}"),
            None => "nan".to_string(),
        };
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            pt.p, pt.v, pt.v_stderr, pt.vs, pt.vs_stderr, r
        ));
    }
    s
}

#[derive(Serialize)]
struct GridOutput<'a> {
    nodes_computed: usize,
    nodes_skipped: usize,
    wall_time_s: f64,
    path: String,
    config: &'a RunConfig,
}

fn cmd_grid(args: GridArgs, threads: usize) -> Result<i32> {
    let margin = args.common.margin.unwrap_or(DEFAULT_BUILD_MARGIN);
    let out = args.common.out.clone().ok_or_else(|| {
        Error::InvalidArgument("grid requires --out PATH for the lattice file".into())
    })?;
    let format = args.common.format.unwrap_or(FormatArg::Json);
    let config = RunConfig {
        command: "grid".into(),
        kind: Some("classical".into()),
        region: None,
        t: None,
        samples: 0,
        seed: args.common.seed,
        quad: args.common.quad,
        surrogate: None,
        resolution: Some(args.resolution),
        purity_grid: None,
        margin,
        threads,
        out: Some(out.display().to_string()),
        format: format.label().into(),
        quick: false,
    };
    let start = Instant::now();
    let grid = SurrogateGrid::build(
        args.resolution,
        args.common.quad[0],
        args.common.quad[1],
        margin,
    )?;
    grid.write(&out)?;
    let output = GridOutput {
        nodes_computed: grid.nodes_computed(),
        nodes_skipped: grid.nodes_skipped(),
        wall_time_s: start.elapsed().as_secs_f64(),
        path: out.display().to_string(),
        config: &config,
    };
    // The artifact is the lattice file; the summary goes to stdout.
    print!("{}", to_json(&output));
    Ok(0)
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    checks: &'a Vec<qvol::validate::CheckResult>,
    passed: bool,
    config: &'a RunConfig,
}

fn cmd_validate(args: ValidateArgs, threads: usize) -> Result<i32> {
    let format = args.common.format.unwrap_or(FormatArg::Json);
    let config = RunConfig {
        command: "validate".into(),
        kind: None,
        region: None,
        t: None,
        samples: 0,
        seed: args.common.seed,
        quad: args.common.quad,
        surrogate: None,
        resolution: None,
        purity_grid: None,
        margin: DEFAULT_METRIC_MARGIN,
        threads,
        out: args.common.out.as_ref().map(|p| p.display().to_string()),
        format: format.label().into(),
        quick: args.quick,
    };
    let opts = ValidationOptions {
        quick: args.quick,
        seed: args.common.seed,
        inject_sign_flip: args.inject_sign_flip,
        n_theta: args.common.quad[0],
        n_phi: args.common.quad[1],
    };
    let checks = run_suite(&opts)?;
    let all_passed = checks.iter().all(|c| c.passed);
    for check in &checks {
        println!(
            "{} {:<34} residual={:>10.3e}  threshold={:.1e}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.threshold
        );
    }
    println!(
        "{}: {}/{} checks passed",
        if all_passed { "ok" } else { "FAILED" },
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    );
    if let Some(path) = &args.common.out {
        let output = ValidateOutput {
            checks: &checks,
            passed: all_passed,
            config: &config,
        };
        std::fs::write(path, to_json(&output)).map_err(|e| Error::io(path, e))?;
    }
    Ok(if all_passed { 0 } else { 1 })
}
