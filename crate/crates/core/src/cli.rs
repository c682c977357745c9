//! Command implementations behind the `kgbeam` binary: grid sampling to CSV
//! or raw little-endian doubles, verification campaigns, engine-vs-closed-form
//! comparisons, and family documentation.
//!
//! Output contract: re-running the same configuration produces byte-identical
//! files, including under data parallelism — grid points are evaluated in
//! parallel but always written in canonical `t`-major, then `x`, `y`, `z`
//! order. Every emitted file starts with (or is accompanied by) a single
//! `#`-prefixed metadata line from which the full run configuration can be
//! reconstructed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::construct::{self, ContourTuning, QuadratureSpec};
use crate::coords::SpacetimePoint;
use crate::error::Error;
use crate::field::{Beam, FAMILY_IDS};
use crate::sampling::SplitMix64;
use crate::verify::{self, CompareMode, FdSpec};

/// One axis of a sampling grid: either a scalar (count = 1) or an inclusive
/// evenly spaced range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn scalar(v: f64) -> Self {
        AxisRange {
            start: v,
            stop: v,
            count: 1,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    fn encode(&self) -> String {
        if self.count == 1 {
            format!("{:?}", self.start)
        } else {
            format!("{:?}:{:?}:{}", self.start, self.stop, self.count)
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("bad axis range `{s}`; expected START:STOP:COUNT"));
        match parts.len() {
            1 => Ok(AxisRange::scalar(parts[0].parse().map_err(|_| bad())?)),
            3 => {
                let r = AxisRange {
                    start: parts[0].parse().map_err(|_| bad())?,
                    stop: parts[1].parse().map_err(|_| bad())?,
                    count: parts[2].parse().map_err(|_| bad())?,
                };
                if r.count < 1 {
                    return Err(CliError::Usage(format!("axis `{s}`: count must be >= 1")));
                }
                if r.start > r.stop {
                    return Err(CliError::Usage(format!("axis `{s}`: start > stop")));
                }
                Ok(r)
            }
            _ => Err(bad()),
        }
    }
}

/// A sampling grid over `(t, x, y, z)`; axes not swept are fixed scalars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub t: AxisRange,
    pub x: AxisRange,
    pub y: AxisRange,
    pub z: AxisRange,
}

impl GridSpec {
    pub fn single_point(t: f64, x: f64, y: f64, z: f64) -> Self {
        GridSpec {
            t: AxisRange::scalar(t),
            x: AxisRange::scalar(x),
            y: AxisRange::scalar(y),
            z: AxisRange::scalar(z),
        }
    }

    pub fn n_points(&self) -> usize {
        self.t.count * self.x.count * self.y.count * self.z.count
    }

    /// All grid points in canonical order: `t` major, then `x`, `y`, `z`.
    pub fn points(&self) -> Vec<SpacetimePoint> {
        let mut out = Vec::with_capacity(self.n_points());
        for it in 0..self.t.count {
            let t = self.t.value(it);
            for ix in 0..self.x.count {
                let x = self.x.value(ix);
                for iy in 0..self.y.count {
                    let y = self.y.value(iy);
                    for iz in 0..self.z.count {
                        out.push(SpacetimePoint::new(t, x, y, self.z.value(iz)));
                    }
                }
            }
        }
        out
    }

    fn encode(&self) -> String {
        format!(
            "t@{};x@{};y@{};z@{}",
            self.t.encode(),
            self.x.encode(),
            self.y.encode(),
            self.z.encode()
        )
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        let mut grid = GridSpec::single_point(0.0, 0.0, 0.0, 0.0);
        for chunk in s.split(';') {
            let (axis, spec) = chunk
                .split_once('@')
                .ok_or_else(|| CliError::Usage(format!("bad grid chunk `{chunk}`")))?;
            let range = AxisRange::parse(spec)?;
            match axis {
                "t" => grid.t = range,
                "x" => grid.x = range,
                "y" => grid.y = range,
                "z" => grid.z = range,
                other => {
                    return Err(CliError::Usage(format!("unknown grid axis `{other}`")));
                }
            }
        }
        Ok(grid)
    }

    /// Parse the command-line syntax `"x=-5:5:101,y=-5:5:101"`, with the
    /// remaining axes fixed at the supplied scalar values.
    pub fn from_cli(
        grid: Option<&str>,
        t: f64,
        x: f64,
        y: f64,
        z: f64,
    ) -> Result<Self, CliError> {
        let mut out = GridSpec::single_point(t, x, y, z);
        if let Some(spec) = grid {
            for chunk in spec.split(',').filter(|c| !c.is_empty()) {
                let (axis, range) = chunk.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("bad grid chunk `{chunk}`; expected AXIS=START:STOP:COUNT"))
                })?;
                let range = AxisRange::parse(range)?;
                match axis.trim() {
                    "t" => out.t = range,
                    "x" => out.x = range,
                    "y" => out.y = range,
                    "z" => out.z = range,
                    other => {
                        return Err(CliError::Usage(format!("unknown grid axis `{other}`")));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    F64le,
}

impl OutputFormat {
    pub fn id(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::F64le => "f64le",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "f64le" => Ok(OutputFormat::F64le),
            other => Err(CliError::Usage(format!(
                "unknown format `{other}`; use csv or f64le"
            ))),
        }
    }
}

/// Everything a command run needs; serializable to and from one header line.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub beam: Beam,
    pub grid: GridSpec,
    /// Sample count for verify/compare campaigns.
    pub points: usize,
    pub seed: u64,
    pub fd: FdSpec,
    pub quad_nodes: usize,
    pub radius_scale: f64,
    pub threshold: f64,
    /// Grid-size guard.
    pub max_points: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_MAX_POINTS: usize = 10_000_000;

impl RunConfig {
    pub fn new(beam: Beam) -> Self {
        RunConfig {
            beam,
            grid: GridSpec::single_point(0.0, 0.0, 0.0, 0.0),
            points: 20,
            seed: 0,
            fd: FdSpec::default(),
            quad_nodes: 256,
            radius_scale: 0.5,
            threshold: 1e-6,
            max_points: DEFAULT_MAX_POINTS,
            format: OutputFormat::Csv,
            out: None,
        }
    }

    fn tuning(&self) -> ContourTuning {
        ContourTuning {
            radius_scale: self.radius_scale,
            nodes: None,
        }
    }

    /// The single `#`-prefixed metadata line. Floats use shortest round-trip
    /// formatting so the line reparses to the exact same configuration.
    pub fn header_line(&self, cmd: &str) -> String {
        let mut s = format!(
            "# kgbeam={} cmd={} family={}",
            env!("CARGO_PKG_VERSION"),
            cmd,
            self.beam.family_id()
        );
        for (k, v) in self.beam.param_pairs() {
            let _ = write!(s, " {k}={v}");
        }
        let _ = write!(
            s,
            " grid={} points={} seed={} fd_order={} fd_step={:?} nodes={} radius_scale={:?} threshold={:?} max_points={} format={}",
            self.grid.encode(),
            self.points,
            self.seed,
            self.fd.order,
            self.fd.step,
            self.quad_nodes,
            self.radius_scale,
            self.threshold,
            self.max_points,
            self.format.id()
        );
        s
    }

    /// Reconstruct `(command, config)` from a metadata line.
    pub fn parse_header(line: &str) -> Result<(String, RunConfig), CliError> {
        const RESERVED: &[&str] = &[
            "kgbeam",
            "cmd",
            "family",
            "grid",
            "points",
            "seed",
            "fd_order",
            "fd_step",
            "nodes",
            "radius_scale",
            "threshold",
            "max_points",
            "format",
        ];
        let body = line
            .strip_prefix('#')
            .ok_or_else(|| CliError::Usage("metadata line must start with `#`".into()))?
            .trim();
        let mut pairs = BTreeMap::new();
        for tok in body.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("bad metadata token `{tok}`")))?;
            pairs.insert(k.to_string(), v.to_string());
        }
        let get = |key: &str| -> Result<String, CliError> {
            pairs
                .get(key)
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("metadata missing `{key}`")))
        };
        let family = get("family")?;
        let beam_params: BTreeMap<String, String> = pairs
            .iter()
            .filter(|(k, _)| !RESERVED.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let beam = Beam::from_params(&family, &beam_params).map_err(CliError::Eval)?;
        let parse_num = |key: &str| -> Result<f64, CliError> {
            get(key)?
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("metadata `{key}` is not a number")))
        };
        let cfg = RunConfig {
            beam,
            grid: GridSpec::parse(&get("grid")?)?,
            points: parse_num("points")? as usize,
            seed: get("seed")?
                .parse::<u64>()
                .map_err(|_| CliError::Usage("metadata `seed` is not an integer".into()))?,
            fd: FdSpec::new(parse_num("fd_order")? as usize, parse_num("fd_step")?)
                .map_err(CliError::Eval)?,
            quad_nodes: parse_num("nodes")? as usize,
            radius_scale: parse_num("radius_scale")?,
            threshold: parse_num("threshold")?,
            max_points: parse_num("max_points")? as usize,
            format: OutputFormat::parse(&get("format")?)?,
            out: None,
        };
        Ok((get("cmd")?, cfg))
    }
}

/// Command-level failure. Usage, I/O and evaluation problems all map to exit
/// code 2; tolerance failures are not errors but a `passed = false` outcome
/// mapping to exit code 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Eval(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Eval(e) => write!(f, "evaluation error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of a verify/compare run: report text plus the pass/fail verdict.
#[derive(Clone, Debug)]
pub struct CmdOutcome {
    pub passed: bool,
    pub report: String,
}

fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::BufWriter::new(io::stdout()))),
    }
}

/// Evaluate the configured family on the configured grid and write the field.
pub fn cmd_sample(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.grid.n_points();
    if n == 0 {
        return Err(CliError::Usage("grid has no points".into()));
    }
    if n > cfg.max_points {
        return Err(CliError::Usage(format!(
            "grid has {n} points, above the cap of {} (raise --max-points to override)",
            cfg.max_points
        )));
    }
    let points = cfg.grid.points();
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|&p| cfg.beam.eval(p))
        .collect::<Result<_, _>>()
        .map_err(CliError::Eval)?;

    let header = cfg.header_line("sample");
    match cfg.format {
        OutputFormat::Csv => {
            let mut w = open_sink(&cfg.out)?;
            let io_err = |e: io::Error| CliError::Io(e.to_string());
            writeln!(w, "{header}").map_err(io_err)?;
            for (p, v) in points.iter().zip(values.iter()) {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    p.t, p.x, p.y, p.z, v.re, v.im
                )
                .map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        OutputFormat::F64le => {
            let path = cfg.out.as_ref().ok_or_else(|| {
                CliError::Usage("--out is required for the f64le format".into())
            })?;
            let mut w = open_sink(&cfg.out)?;
            let io_err = |e: io::Error| CliError::Io(e.to_string());
            for v in &values {
                w.write_all(&v.re.to_le_bytes()).map_err(io_err)?;
                w.write_all(&v.im.to_le_bytes()).map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
            // sidecar metadata
            let meta = PathBuf::from(format!("{}.meta", path.display()));
            std::fs::write(&meta, format!("{header}\n"))
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", meta.display())))?;
        }
    }
    Ok(())
}

/// Run the wave-operator residual campaign for the configured family.
pub fn cmd_verify(cfg: &RunConfig) -> Result<CmdOutcome, CliError> {
    let summary = verify::verify_family(&cfg.beam, cfg.points, cfg.seed, &cfg.fd)
        .map_err(CliError::Eval)?;
    let passed = summary.max_relative <= cfg.threshold;
    let mut report = String::new();
    let _ = writeln!(report, "{}", cfg.header_line("verify"));
    let _ = writeln!(report, "max_relative={:?}", summary.max_relative);
    let _ = writeln!(report, "mean_relative={:?}", summary.mean_relative);
    if let Some(p) = summary.worst_point {
        let _ = writeln!(report, "worst_point={:?},{:?},{:?},{:?}", p.t, p.x, p.y, p.z);
    }
    let _ = writeln!(report, "n_points={}", summary.n_points);
    let _ = writeln!(report, "status={}", if passed { "pass" } else { "fail" });

    let mut w = open_sink(&cfg.out)?;
    w.write_all(report.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(CmdOutcome { passed, report })
}

/// Which construction engine to compare against the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareEngine {
    Rodrigues,
    Quadrature,
}

impl CompareEngine {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "rodrigues" => Ok(CompareEngine::Rodrigues),
            "quadrature" => Ok(CompareEngine::Quadrature),
            other => Err(CliError::Usage(format!(
                "unknown mode `{other}`; use rodrigues or quadrature"
            ))),
        }
    }
}

/// Compare the construction engine against the closed form on seeded points.
pub fn cmd_compare(cfg: &RunConfig, engine: CompareEngine) -> Result<CmdOutcome, CliError> {
    let bx = cfg.beam.sample_box();
    let mut rng = SplitMix64::new(cfg.seed);
    let points: Vec<SpacetimePoint> = (0..cfg.points)
        .map(|_| {
            SpacetimePoint::new(
                rng.uniform(bx.t.0, bx.t.1),
                rng.uniform(bx.x.0, bx.x.1),
                rng.uniform(bx.y.0, bx.y.1),
                rng.uniform(bx.z.0, bx.z.1),
            )
        })
        .collect();

    let tuning = cfg.tuning();
    let quad = QuadratureSpec::new(cfg.quad_nodes).map_err(CliError::Eval)?;
    let report = match (&cfg.beam, engine) {
        (Beam::LaguerreGauss { idx, phys }, CompareEngine::Rodrigues) => {
            let idx = *idx;
            let phys = *phys;
            let engine_field = move |p: SpacetimePoint| {
                construct::rodrigues_lg(idx, p, &phys, &tuning)
            };
            verify::compare_fields(&cfg.beam, &engine_field, &points, CompareMode::Exact)
        }
        (Beam::HermiteGauss { idx, phys }, CompareEngine::Rodrigues) => {
            let idx = *idx;
            let phys = *phys;
            let engine_field = move |p: SpacetimePoint| {
                construct::rodrigues_hg(idx, p, &phys, &tuning)
            };
            verify::compare_fields(&cfg.beam, &engine_field, &points, CompareMode::Exact)
        }
        (Beam::BesselBeam { prm, mass }, CompareEngine::Quadrature) => {
            let prm = *prm;
            let mass = *mass;
            let engine_field = move |p: SpacetimePoint| {
                construct::bessel_from_quadrature(&prm, p, mass, &quad)
            };
            verify::compare_fields(&cfg.beam, &engine_field, &points, CompareMode::Exact)
        }
        (Beam::BesselGauss { prm, phys }, CompareEngine::Quadrature) => {
            let prm = *prm;
            let phys = *phys;
            let engine_field = move |p: SpacetimePoint| {
                construct::bg_from_quadrature(&prm, p, &phys, &quad)
            };
            verify::compare_fields(&cfg.beam, &engine_field, &points, CompareMode::Exact)
        }
        (beam, engine) => Err(Error::UnsupportedEngine {
            family: beam.family_id(),
            engine: match engine {
                CompareEngine::Rodrigues => "rodrigues",
                CompareEngine::Quadrature => "quadrature",
            },
        }),
    }
    .map_err(CliError::Eval)?;

    let passed = report.max_rel_dev <= cfg.threshold;
    let mut text = String::new();
    let _ = writeln!(text, "{}", cfg.header_line("compare"));
    let _ = writeln!(text, "max_abs_dev={:?}", report.max_abs_dev);
    let _ = writeln!(text, "max_rel_dev={:?}", report.max_rel_dev);
    if let Some(p) = report.argmax_point {
        let _ = writeln!(text, "argmax_point={:?},{:?},{:?},{:?}", p.t, p.x, p.y, p.z);
    }
    let _ = writeln!(text, "n_points={}", report.n_points);
    let _ = writeln!(text, "status={}", if passed { "pass" } else { "fail" });

    let mut w = open_sink(&cfg.out)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(CmdOutcome {
        passed,
        report: text,
    })
}

/// Family documentation: defining formula, parameters, documented ranges and
/// conventions.
pub fn cmd_info(family: &str) -> Result<String, CliError> {
    let text = match family {
        "g_lg" => "\
g_lg — Gaussian generating function
  G = exp(-iE t-/2) exp(-i m^2 t+/(2E)) exp(-x+x-/a) / a,  a(t+) = w0^2 + 2i t+/E
  (t± = t ± z, x± = x ± iy; natural units ħ = c = 1)
  Parameters: E in [1, 20], m in [0, 5], w0 in [0.5, 3]
  Sample box: |t|,|z| <= 5, |x|,|y| <= 3.5
  Repeated x± derivatives of this generator produce the `lg` family.",
        "lg" => "\
lg — Laguerre-Gauss beam (vortex charge l, radial index n)
  f = phases * (x+iy)^l / a^(n+l+1) * exp(-rho^2/a) * L_n^l(rho^2/a)
  phases = exp(-iE t-/2) exp(-i m^2 t+/(2E)),  a(t+) = w0^2 + 2i t+/E
  Equals (-1)^(n+l)/n! * d^(n+l)/dx-^(n+l) d^n/dx+^n of g_lg.
  Rotation eigenphase order: +l. Unnormalized, conventions as printed above.
  Parameters: n, l >= 0 (validated n, l <= 8); E in [1, 20], m in [0, 5], w0 in [0.5, 3]
  Residual campaigns sample a transverse extent solved from the stencil
  bandwidth (high n+l at small E*w0^2 oscillates too fast in t for the
  fixed order-8, step-0.01 verifier; see the README numerical notes)",
        "g_hg" => "\
g_hg — the Gaussian generator of g_lg viewed as a function of x and y
  Identical values to g_lg on real points; extends holomorphically to
  complex x (resp. y) for the Cartesian derivative construction.",
        "hg" => "\
hg — Hermite-Gauss beam (indices mx, ny)
  f = H_mx(x/sqrt(a)) H_ny(y/sqrt(a)) * g_hg / a^((mx+ny)/2)
  Equals (-1)^(mx+ny) d^mx/dx^mx d^ny/dy^ny of g_hg; Hermite arguments are
  complex through a(t+). Parity: f(-x, y) = (-1)^mx f(x, y).
  Parameters: mx, ny >= 0 (validated <= 8); E, m, w0 as for lg",
        "g_exp" => "\
g_exp — exponential-kernel generator
  G = e^(iqz) e^(-u)/u,  u = sqrt((w0 + i k t)^2 + k^2 x+x-),  k^2 = m^2 + q^2
  Principal square root; on real points Re u > 0 always (asserted).
  Exponential (not Gaussian) transverse fall-off.
  Parameters: q in [0.5, 3] documented, m in [0, 5], w0 in [0.5, 3]
  Sample box: |x|,|y| <= 2, |z| <= 3; |t| extent shrinks with k^(3/2) so the
  residual stencil resolves the kernel's time oscillation (<= 2)",
        "exp" => "\
exp — k-th x- derivative of g_exp (k >= 1), computed by contour
  differentiation of the off-slice generator. Convention: no factorial
  prefactor. Rotation eigenphase order: +k. On the axis (x+ = 0) the value
  is the k >= 1 limit 0, evaluated at a 1e-8 transverse offset.
  Parameters: k in {1, 2, 3} validated; q, w0 as for g_exp; residual
  campaigns keep sqrt(m^2 + q^2) <= 4 (stencil bandwidth)
  Sample box: |t| <= 1, |x|,|y| <= 2, |z| <= 3",
        "g_md" => "\
g_md — Macdonald-kernel generator (requires m > 0)
  G = m K1(m s)/s,  s = sqrt((w0 + i t)^2 + rho^2 + z^2)
  Principal square root; on real points Re s > 0 always (asserted), which
  keeps K1 on its supported Re > 0 half-plane.
  Parameters: m in [0.5, 5] documented, w0 in [0.5, 3]
  Sample box: |t| <= 2, |x|,|y| <= 2, |z| <= 3",
        "g_b" => "\
g_b — tilted plane-wave kernel of the Bessel construction
  G = exp(-i Omega t + i p_z z + i p_perp rho cos(phi - varphi)),
  Omega = sqrt(p_perp^2 + p_z^2 + m^2). Pure phase, |G| = 1; an exact
  solution for every angle parameter varphi.
  Parameters: p_perp in (0, 3], p_z in [-3, 3], m in [0, 5], varphi in [0, 2pi)",
        "bessel" => "\
bessel — Bessel beam, the angular integral of e^(il varphi) g_b
  f = 2 pi i^l e^(il phi) J_l(p_perp rho) exp(-i Omega t + i p_z z)
  Rotation eigenphase order: +l (l may be negative).
  Parameters: p_perp in (0, 3], p_z in [-3, 3], |l| <= 5 validated, m in [0, 5]",
        "g_bg" => "\
g_bg — displaced-Gaussian kernel of the Bessel-Gauss construction
  G = phases * exp(-(rho^2 - b^2 + 2 i b rho cos(phi - varphi))/a) / a
  Identical to g_lg evaluated at complex-shifted transverse coordinates;
  b = 0 reduces to g_lg exactly.
  Parameters: b in [0, 2], w0 in [0.8, 3] documented, E in [1, 20], m in [0, 5]",
        "bg" => "\
bg — Bessel-Gauss beam, the angular integral of e^(il varphi) g_bg
  f = 2 pi (-i)^l e^(il phi) / a * phases * exp(-(rho^2 - b^2)/a) * J_l(2 b rho / a)
  Complex Bessel argument 2 b rho / a. Rotation eigenphase order: +l.
  b = 0 degenerates to 2 pi g_lg (l = 0) or 0 (l >= 1).
  Parameters: b in [0, 2], l in [0, 4] validated, w0 in [0.8, 3] documented —
  the w0 floor keeps |2 b rho / a| inside bessel_j's validated |z| <= 50",
        other => {
            return Err(CliError::Usage(format!(
                "unknown family `{other}`; valid families: {}",
                FAMILY_IDS.join(", ")
            )))
        }
    };
    Ok(text.to_string())
}

/// Check that a path's parent directory exists before a run starts.
pub fn check_out_path(out: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(path) = out {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() && !Path::new(parent).is_dir() {
                return Err(CliError::Io(format!(
                    "output directory {} does not exist",
                    parent.display()
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beam(family: &str, pairs: &[(&str, &str)]) -> Beam {
        let m: BTreeMap<String, String> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Beam::from_params(family, &m).unwrap()
    }

    #[test]
    fn grid_cli_parse_and_ordering() {
        let g = GridSpec::from_cli(Some("x=-1:1:3,y=0:1:2"), 0.5, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(g.n_points(), 6);
        let pts = g.points();
        // t-major, then x, y, z; z fixed at 2.0, t at 0.5
        assert_eq!(pts[0], SpacetimePoint::new(0.5, -1.0, 0.0, 2.0));
        assert_eq!(pts[1], SpacetimePoint::new(0.5, -1.0, 1.0, 2.0));
        assert_eq!(pts[2], SpacetimePoint::new(0.5, 0.0, 0.0, 2.0));
        assert_eq!(pts[5], SpacetimePoint::new(0.5, 1.0, 1.0, 2.0));
    }

    #[test]
    fn grid_rejects_garbage() {
        assert!(GridSpec::from_cli(Some("x=1:0:5"), 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(GridSpec::from_cli(Some("x=1:2:0"), 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(GridSpec::from_cli(Some("w=1:2:3"), 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(GridSpec::from_cli(Some("x=abc"), 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn header_roundtrip() {
        let mut cfg = RunConfig::new(beam("bg", &[("b", "1.5"), ("l", "2"), ("w0", "0.875")]));
        cfg.grid = GridSpec::from_cli(Some("x=-2:2:5"), 0.25, 0.0, -1.5, 0.0).unwrap();
        cfg.seed = 99;
        cfg.threshold = 1e-10;
        cfg.fd = FdSpec::new(6, 0.02).unwrap();
        cfg.format = OutputFormat::F64le;
        let line = cfg.header_line("sample");
        let (cmd, back) = RunConfig::parse_header(&line).unwrap();
        assert_eq!(cmd, "sample");
        assert_eq!(back.header_line("sample"), line);
    }

    #[test]
    fn sample_respects_point_cap() {
        let mut cfg = RunConfig::new(beam("g_lg", &[]));
        cfg.grid = GridSpec::from_cli(Some("x=0:1:200,y=0:1:200"), 0.0, 0.0, 0.0, 0.0).unwrap();
        cfg.max_points = 1000;
        let err = cmd_sample(&cfg).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn sample_writes_expected_values_and_reparsable_header() {
        // lg n=0 l=0 with defaults: the origin cell is exactly 1 + 0i
        let mut cfg = RunConfig::new(beam("lg", &[("n", "0"), ("l", "0")]));
        cfg.grid = GridSpec::from_cli(Some("x=-1:1:3,y=-1:1:3"), 0.0, 0.0, 0.0, 0.0).unwrap();
        let path = std::env::temp_dir().join("kgbeam_test_sample_lg.csv");
        cfg.out = Some(path.clone());
        cmd_sample(&cfg).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        // emitted header reconstructs the run configuration
        let (cmd, back) = RunConfig::parse_header(header).unwrap();
        assert_eq!(cmd, "sample");
        assert_eq!(back.header_line("sample"), header);
        // 9 data rows; the center row is the origin with value 1 + 0i
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 9);
        let center: Vec<f64> = rows[4].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(&center[..4], &[0.0, 0.0, 0.0, 0.0]);
        assert_eq!(center[4], 1.0);
        assert_eq!(center[5], 0.0);
        std::fs::remove_file(&path).ok();

        // bg with l >= 1 and b = 0 vanishes identically
        let mut cfg = RunConfig::new(beam("bg", &[("b", "0.0"), ("l", "1")]));
        cfg.grid = GridSpec::from_cli(Some("x=-1:1:3,y=-1:1:3"), 0.0, 0.0, 0.0, 0.0).unwrap();
        let path = std::env::temp_dir().join("kgbeam_test_sample_bg.csv");
        cfg.out = Some(path.clone());
        cmd_sample(&cfg).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for row in text.lines().skip(1) {
            let cols: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(cols[4], 0.0);
            assert_eq!(cols[5], 0.0);
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn compare_degenerate_orders_agree_to_rounding() {
        let mut cfg = RunConfig::new(beam("lg", &[("n", "0"), ("l", "0")]));
        cfg.out = Some(std::env::temp_dir().join("kgbeam_test_cmp_00.txt"));
        cfg.points = 10;
        cfg.threshold = 1e-12;
        let outcome = cmd_compare(&cfg, CompareEngine::Rodrigues).unwrap();
        assert!(outcome.passed, "report: {}", outcome.report);
        std::fs::remove_file(cfg.out.unwrap()).ok();
    }

    #[test]
    fn verify_passes_for_exact_family_and_fails_at_absurd_threshold() {
        let mut cfg = RunConfig::new(beam("g_b", &[("p_perp", "1.5")]));
        cfg.out = Some(std::env::temp_dir().join("kgbeam_test_verify_gb.txt"));
        cfg.points = 10;
        let outcome = cmd_verify(&cfg).unwrap();
        assert!(outcome.passed);

        cfg.threshold = 1e-300;
        let outcome = cmd_verify(&cfg).unwrap();
        assert!(!outcome.passed);
        let _ = std::fs::remove_file(cfg.out.unwrap());
    }

    #[test]
    fn compare_engine_pairing_is_enforced() {
        let mut cfg = RunConfig::new(beam("lg", &[("n", "1"), ("l", "1")]));
        cfg.out = Some(std::env::temp_dir().join("kgbeam_test_cmp_pairing.txt"));
        cfg.points = 5;
        assert!(matches!(
            cmd_compare(&cfg, CompareEngine::Quadrature),
            Err(CliError::Eval(Error::UnsupportedEngine { .. }))
        ));
        cfg.threshold = 1e-9;
        let outcome = cmd_compare(&cfg, CompareEngine::Rodrigues).unwrap();
        assert!(outcome.passed, "report: {}", outcome.report);
        let _ = std::fs::remove_file(cfg.out.unwrap());
    }

    #[test]
    fn info_knows_every_family() {
        for id in FAMILY_IDS {
            let text = cmd_info(id).unwrap();
            assert!(text.contains(id), "info for {id}");
        }
        assert!(cmd_info("warp_drive").is_err());
    }
}
