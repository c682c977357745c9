//! Command-line front end. Exit codes: 0 = pass, 1 = tolerance failure,
//! 2 = usage/config error. Worker count: KGBEAM_THREADS (default: available
//! parallelism).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kgbeam::cli::{
    self, CliError, CompareEngine, GridSpec, OutputFormat, RunConfig, DEFAULT_MAX_POINTS,
};
use kgbeam::field::Beam;
use kgbeam::verify::FdSpec;

#[derive(Parser)]
#[command(
    name = "kgbeam",
    version,
    about = "Beam-like solutions of the Klein-Gordon equation from generating functions",
    after_help = "Environment:\n  KGBEAM_THREADS  worker count for grid/campaign evaluation (default: all cores)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a family onto a grid and write the field (CSV or raw doubles)
    Sample(SampleArgs),
    /// Residual campaign: certify the field against the wave operator
    Verify(VerifyArgs),
    /// Compare a construction engine against the closed form
    Compare(CompareArgs),
    /// Print a family's formula, parameters and conventions
    Info {
        /// Family id, e.g. lg, bg, g_exp
        family: String,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Family id: g_lg, lg, g_hg, hg, g_exp, exp, g_md, g_b, bessel, g_bg, bg
    #[arg(long)]
    family: String,
    /// Radial index (lg)
    #[arg(long)]
    n: Option<u32>,
    /// Angular order (lg, bessel, bg); may be negative for bessel
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    /// Hermite index in x (hg)
    #[arg(long)]
    mx: Option<u32>,
    /// Hermite index in y (hg)
    #[arg(long)]
    ny: Option<u32>,
    /// Derivative order (exp)
    #[arg(long)]
    k: Option<u32>,
    /// Longitudinal wavenumber (g_exp, exp)
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Transverse momentum (g_b, bessel)
    #[arg(long = "p-perp")]
    p_perp: Option<f64>,
    /// Longitudinal momentum (g_b, bessel)
    #[arg(long = "p-z", allow_hyphen_values = true)]
    p_z: Option<f64>,
    /// Displacement parameter (g_bg, bg)
    #[arg(long)]
    b: Option<f64>,
    /// Kernel angle parameter (g_b, g_bg)
    #[arg(long, allow_hyphen_values = true)]
    varphi: Option<f64>,
    /// Energy parameter E
    #[arg(long)]
    energy: Option<f64>,
    /// Mass m
    #[arg(long)]
    mass: Option<f64>,
    /// Waist w0
    #[arg(long)]
    waist: Option<f64>,
}

impl FamilyArgs {
    fn beam(&self) -> Result<Beam, CliError> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put("n", self.n.map(|v| v.to_string()));
        put("l", self.l.map(|v| v.to_string()));
        put("mx", self.mx.map(|v| v.to_string()));
        put("ny", self.ny.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("q", self.q.map(|v| format!("{v:?}")));
        put("p_perp", self.p_perp.map(|v| format!("{v:?}")));
        put("p_z", self.p_z.map(|v| format!("{v:?}")));
        put("b", self.b.map(|v| format!("{v:?}")));
        put("varphi", self.varphi.map(|v| format!("{v:?}")));
        put("E", self.energy.map(|v| format!("{v:?}")));
        put("m", self.mass.map(|v| format!("{v:?}")));
        put("w0", self.waist.map(|v| format!("{v:?}")));
        Beam::from_params(&self.family, &m).map_err(CliError::Eval)
    }
}

#[derive(Args)]
struct NumericsArgs {
    /// Seed for sampled points
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Finite-difference order: 2, 4, 6 or 8
    #[arg(long = "fd-order", default_value_t = 8)]
    fd_order: usize,
    /// Finite-difference step
    #[arg(long = "fd-step", default_value_t = 1e-2)]
    fd_step: f64,
    /// Angular quadrature node count
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    /// Contour radius as a fraction of the generator's natural scale
    #[arg(long = "radius-scale", default_value_t = 0.5)]
    radius_scale: f64,
    /// Pass/fail tolerance (default: 1e-6 for verify, 1e-9 for compare)
    #[arg(long)]
    threshold: Option<f64>,
    /// Grid-size guard
    #[arg(long = "max-points", default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
}

impl NumericsArgs {
    fn apply(&self, cfg: &mut RunConfig, default_threshold: f64) -> Result<(), CliError> {
        cfg.seed = self.seed;
        cfg.fd = FdSpec::new(self.fd_order, self.fd_step).map_err(CliError::Eval)?;
        cfg.quad_nodes = self.nodes;
        cfg.radius_scale = self.radius_scale;
        cfg.threshold = self.threshold.unwrap_or(default_threshold);
        cfg.max_points = self.max_points;
        Ok(())
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Swept axes, e.g. "x=-5:5:101,y=-5:5:101"
    #[arg(long)]
    grid: Option<String>,
    /// Fixed t for axes not in --grid
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    /// Fixed x
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x: f64,
    /// Fixed y
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    y: f64,
    /// Fixed z
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z: f64,
    /// Output format: csv or f64le (raw little-endian re,im doubles)
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path (stdout if omitted; required for f64le)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Number of seeded sample points
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Report path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Engine: rodrigues (lg, hg) or quadrature (bessel, bg)
    #[arg(long)]
    mode: String,
    /// Number of seeded sample points
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Report path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Sample(args) => {
            let mut cfg = RunConfig::new(args.family.beam()?);
            args.numerics.apply(&mut cfg, 1e-6)?;
            cfg.grid = GridSpec::from_cli(args.grid.as_deref(), args.t, args.x, args.y, args.z)?;
            cfg.format = OutputFormat::parse(&args.format)?;
            cfg.out = args.out;
            cli::check_out_path(&cfg.out)?;
            cli::cmd_sample(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify(args) => {
            let mut cfg = RunConfig::new(args.family.beam()?);
            args.numerics.apply(&mut cfg, 1e-6)?;
            cfg.points = args.points;
            cfg.out = args.out;
            cli::check_out_path(&cfg.out)?;
            let outcome = cli::cmd_verify(&cfg)?;
            Ok(if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Compare(args) => {
            let engine = CompareEngine::parse(&args.mode)?;
            let mut cfg = RunConfig::new(args.family.beam()?);
            args.numerics.apply(&mut cfg, 1e-9)?;
            cfg.points = args.points;
            cfg.out = args.out;
            cli::check_out_path(&cfg.out)?;
            let outcome = cli::cmd_compare(&cfg, engine)?;
            Ok(if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Info { family } => {
            let text = cli::cmd_info(&family)?;
            // tolerate a closed pipe (e.g. `kgbeam info lg | head`)
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("KGBEAM_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kgbeam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
