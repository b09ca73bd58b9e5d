//! Command-line driver.
//!
//! Every file written carries a header with the tool version, the sha256 of
//! the curve specification (`none` without one) and the seed. Exit codes:
//! `0` success, `1` a failed check or runtime error, `2` invalid input
//! (curve spec, divisor, flags), `3` quadrature failure, `4` flow failure.
//! See [`crate::io`] for the curve specification grammar.

use crate::curve::HyperellipticCurve;
use crate::dynamics::{self, FlowOptions, LoopSample};
use crate::error::Error;
use crate::io::{self, CurveSpec};
use crate::kleinian::SigmaContext;
use crate::loops::{self, FourierLoop, PartitionMode};
use crate::periods;
use crate::relations::{self, IdentityReport, Suite, SuiteConfig};
use crate::C64;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug, Clone)]
#[command(name = "loopsoliton", version, about = "Hyperelliptic loop-soliton numerics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Curve specification file.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Branch point index, counted from 1 (default 2g+1).
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Series or Fourier truncation.
    #[arg(long = "N")]
    pub truncation: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinLoop {
    Circle,
    FigureEight,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Period matrices and their invariants.
    Periods {
        #[command(flatten)]
        common: Common,
    },
    /// Trace a loop soliton along the u_g flow.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Comma-separated points `x`, `x@+`, `x@-` or `x@y`.
        #[arg(long)]
        divisor: String,
        /// Flow parameter range `[0, span]`.
        #[arg(long, default_value_t = 1.0)]
        span: f64,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Evaluate sigma, zeta, wp and al at a point of the Jacobian.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Comma-separated coordinates of u.
        #[arg(long, conflicts_with = "divisor")]
        u: Option<String>,
        /// Divisor whose Abel image is used as u.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Fourier coefficients of a closed trace or a built-in loop.
    Fourier {
        #[command(flatten)]
        common: Common,
        /// Trace CSV of a closed arclength loop.
        #[arg(long, conflicts_with = "builtin")]
        input: Option<PathBuf>,
        #[arg(long = "loop", value_enum)]
        builtin: Option<BuiltinLoop>,
        /// Remove the translation and phase so the coefficients are real.
        #[arg(long)]
        normalize: bool,
    },
    /// Winding loop Z(ns)/n of a Fourier CSV or a built-in loop.
    Wind {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "builtin")]
        input: Option<PathBuf>,
        #[arg(long = "loop", value_enum)]
        builtin: Option<BuiltinLoop>,
        #[arg(long, default_value_t = 2)]
        winding: usize,
    },
    /// Partition sums over winding numbers in all three evaluation modes.
    Partition {
        #[command(flatten)]
        common: Common,
        /// Energy E_a; defaults to the energy of `--loop`, or π.
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long = "loop", value_enum)]
        builtin: Option<BuiltinLoop>,
        /// Complex β; without it βE sweeps [0.1, 10].
        #[arg(long)]
        beta: Option<String>,
    },
}

impl RunConfig {
    pub fn common(&self) -> &Common {
        match &self.command {
            Command::Periods { common }
            | Command::Trace { common, .. }
            | Command::Verify { common, .. }
            | Command::Eval { common, .. }
            | Command::Fourier { common, .. }
            | Command::Wind { common, .. }
            | Command::Partition { common, .. } => common,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let c = self.common();
        if !(c.tol > 0.0) {
            return Err(CliError::input("--tol must be positive"));
        }
        if c.samples == Some(0) {
            return Err(CliError::input("--samples must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError { code: 2, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::InvalidDivisor(_)
            | Error::DegenerateCurve { .. }
            | Error::BadLeadingCoefficient(_)
            | Error::BadCoefficientCount(_)
            | Error::NotPrime(_)
            | Error::DivergentSum(_) => 2,
            Error::QuadratureFailure { .. } => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

fn flow_error(e: Error) -> CliError {
    match e {
        Error::StepCollapse { .. }
        | Error::SpecialDivisor(_)
        | Error::OnThetaDivisor(_)
        | Error::ZeroSpeed(_)
        | Error::BranchPointCollision { .. } => CliError { code: 4, message: e.to_string() },
        other => other.into(),
    }
}

struct Loaded {
    curve: HyperellipticCurve,
    sha: String,
}

fn load_curve(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let spec = CurveSpec::parse(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        curve: spec.curve()?,
        sha: spec.sha256,
    })
}

fn need_curve(c: &Common) -> Result<Loaded, CliError> {
    match &c.curve {
        Some(p) => load_curve(p),
        None => Err(CliError::input("--curve is required")),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError { code: 1, message: format!("{}: {e}", dir.display()) })?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError { code: 1, message: format!("{}: {e}", path.display()) })?;
    Ok(path)
}

/// Report text: header comments, one line per check, metadata as comments.
pub fn report_text(header: &[String], reports: &[IdentityReport]) -> String {
    let mut out = io::comment_block(header);
    for r in reports {
        out.push_str(&r.line());
        out.push('\n');
        for (k, v) in &r.metadata {
            out.push_str(&format!("#   {}.{k} = {v}\n", r.id));
        }
    }
    out
}

/// What a successful command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
    pub all_pass: bool,
}

pub fn cmd_periods(common: &Common) -> Result<Outcome, CliError> {
    let c = need_curve(common)?;
    let p = periods::compute_periods(&c.curve)?;
    let header = io::header_lines(&c.sha, common.seed);
    let mut rows = Vec::new();
    for (name, m) in [("omega1", &p.omega1), ("omega2", &p.omega2), ("eta1", &p.eta1), ("eta2", &p.eta2), ("tau", &p.tau)] {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                rows.push(vec![name.to_string(), (i + 1).to_string(), (j + 1).to_string(), io::real(z.re), io::real(z.im)]);
            }
        }
    }
    let csv = io::csv(&header, &["block", "i", "j", "re", "im"], &rows);
    let (leg, sign) = p.legendre_residual();
    let reports = vec![
        IdentityReport::upper("legendre", &[leg], 1e-8).with_meta("sign", sign),
        IdentityReport::upper("tau_symmetry", &[p.tau_asymmetry], 1e-8),
        IdentityReport::lower("im_tau_min_eigenvalue", &[p.im_tau_min_eigenvalue], 1e-12),
    ];
    let report = report_text(&header, &reports);
    let files = vec![write(&common.out, "periods.csv", &csv)?, write(&common.out, "periods.report", &report)?];
    Ok(Outcome {
        files,
        all_pass: reports.iter().all(|r| r.pass),
        stdout: report,
    })
}

pub fn cmd_trace(common: &Common, divisor: &str, span: f64) -> Result<Outcome, CliError> {
    let c = need_curve(common)?;
    let d = io::parse_divisor(&c.curve, divisor)?;
    if !span.is_finite() || span < 0.0 {
        return Err(CliError::input("--span must be finite and non-negative"));
    }
    let r = common.r.unwrap_or(c.curve.degree());
    c.curve.branch_point(r)?;
    let n = if span == 0.0 { 1 } else { common.samples.unwrap_or(201).max(2) };
    let (sample, _) = dynamics::trace_soliton(&c.curve, r, &d, span, n, &FlowOptions::default()).map_err(flow_error)?;
    let header = io::header_lines(&c.sha, common.seed);
    let csv = io::trace_csv(&sample, &header);
    let svg = io::svg_polyline(&sample.z, &header);
    let speed = sample.dz.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let files = vec![write(&common.out, "trace.csv", &csv)?, write(&common.out, "trace.svg", &svg)?];
    Ok(Outcome {
        files,
        stdout: format!("samples {}\nmax ||dZ|-1| {:.6e}\n", sample.len(), speed),
        all_pass: true,
    })
}

pub fn cmd_verify(common: &Common, suite: &str) -> Result<Outcome, CliError> {
    let suite = Suite::parse(suite)?;
    let needs_curve = !matches!(suite, Suite::Fourier | Suite::Partition);
    let (reports, sha) = if needs_curve {
        let c = need_curve(common)?;
        let mut cfg = SuiteConfig::new(c.curve, common.seed);
        cfg.tol = common.tol;
        if let Some(r) = common.r {
            cfg.r = r;
        }
        if let Some(s) = common.samples {
            cfg.samples = s;
        }
        if let Some(n) = common.truncation {
            cfg.truncation = n;
        }
        (relations::run_suite(suite, &cfg)?, c.sha)
    } else {
        let sha = match &common.curve {
            Some(p) => load_curve(p)?.sha,
            None => "none".to_string(),
        };
        let curve = HyperellipticCurve::from_real(&[0.0, -1.0, 0.0, 1.0])?;
        (relations::run_suite(suite, &SuiteConfig::new(curve, common.seed))?, sha)
    };
    let mut header = io::header_lines(&sha, common.seed);
    header.push(format!("suite {}", suite.name()));
    let text = report_text(&header, &reports);
    let files = vec![write(&common.out, "verify.report", &text)?];
    Ok(Outcome {
        files,
        all_pass: reports.iter().all(|r| r.pass),
        stdout: text,
    })
}

fn parse_vector(text: &str, g: usize) -> Result<Vec<C64>, CliError> {
    let v: Result<Vec<C64>, String> = text.split(',').map(io::parse_complex).collect();
    let v = v.map_err(CliError::input)?;
    if v.len() != g {
        return Err(CliError::input(format!("expected {g} coordinates, got {}", v.len())));
    }
    Ok(v)
}

pub fn cmd_eval(common: &Common, u: Option<&str>, divisor: Option<&str>) -> Result<Outcome, CliError> {
    let c = need_curve(common)?;
    let g = c.curve.genus();
    let ctx = SigmaContext::from_curve(&c.curve)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let u = match (u, divisor) {
        (Some(t), _) => parse_vector(t, g)?,
        (None, Some(t)) => {
            let d = io::parse_divisor(&c.curve, t)?;
            for r in 1..=2 * g + 1 {
                let a = crate::kleinian::al_divisor(&c.curve, &d, r, crate::kleinian::GammaConvention::Curve)?;
                rows.push(vec![format!("al_divisor_{r}"), io::format_complex(a)]);
            }
            dynamics::abel_map_divisor(&c.curve, &d)?.u
        }
        (None, None) => return Err(CliError::input("one of --u or --divisor is required")),
    };
    let mut head = Vec::new();
    for (i, x) in u.iter().enumerate() {
        head.push(vec![format!("u_{}", i + 1), io::format_complex(*x)]);
    }
    head.push(vec!["sigma".into(), io::format_complex(ctx.sigma(&u)?)]);
    for (i, z) in ctx.zeta_all(&u)?.iter().enumerate() {
        head.push(vec![format!("zeta_{}", i + 1), io::format_complex(*z)]);
    }
    let wp = ctx.wp_all(&u)?;
    for i in 0..g {
        for j in i..g {
            head.push(vec![format!("wp_{}{}", i + 1, j + 1), io::format_complex(wp[(i, j)])]);
        }
    }
    for r in 1..=2 * g + 1 {
        head.push(vec![format!("al_{r}"), io::format_complex(ctx.al_sigma(&u, r)?)]);
    }
    head.extend(rows);
    let csv = io::csv(&io::header_lines(&c.sha, common.seed), &["quantity", "value"], &head);
    let files = vec![write(&common.out, "eval.csv", &csv)?];
    Ok(Outcome {
        files,
        stdout: csv,
        all_pass: true,
    })
}

fn builtin(kind: BuiltinLoop, n: usize) -> Result<FourierLoop, CliError> {
    Ok(match kind {
        BuiltinLoop::Circle => FourierLoop::circle(),
        BuiltinLoop::FigureEight => {
            let m = (4 * n + 4).max(256);
            loops::normalize_euclidean(&loops::fourier_coeffs(&loops::figure_eight_sample(m), n)?)?.loop_
        }
    })
}

fn curve_sha(common: &Common) -> Result<String, CliError> {
    Ok(match &common.curve {
        Some(p) => load_curve(p)?.sha,
        None => "none".to_string(),
    })
}

fn loop_summary(l: &FourierLoop) -> String {
    let mut s = format!("harmonics {}\nreality {:.6e}\ntail {:.6e}\n", l.n_max(), loops::reality_check(l), l.tail());
    if let Ok(e) = loops::loop_energy(l, 4 * l.n_max() + 64) {
        s.push_str(&format!("energy_2pi {e:.15e}\n"));
    }
    s
}

pub fn cmd_fourier(common: &Common, input: Option<&Path>, kind: Option<BuiltinLoop>, normalize: bool) -> Result<Outcome, CliError> {
    let n = common.truncation.unwrap_or(loops::DEFAULT_HARMONICS);
    let mut l = match (input, kind) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            let sample: LoopSample = io::parse_trace_csv(&text)?;
            loops::fourier_coeffs(&sample, n)?
        }
        (None, Some(k)) => builtin(k, n.min(128))?,
        (None, None) => return Err(CliError::input("one of --input or --loop is required")),
    };
    let mut extra = String::new();
    if normalize {
        let nl = loops::normalize_euclidean(&l)?;
        extra = format!("a0 {}\nc {}\ns_shift {:e}\n", io::format_complex(nl.a0), io::format_complex(nl.c), nl.s_shift);
        l = nl.loop_;
    }
    let csv = io::fourier_csv(&l, &io::header_lines(&curve_sha(common)?, common.seed));
    let files = vec![write(&common.out, "fourier.csv", &csv)?];
    Ok(Outcome {
        files,
        stdout: loop_summary(&l) + &extra,
        all_pass: true,
    })
}

pub fn cmd_wind(common: &Common, input: Option<&Path>, kind: Option<BuiltinLoop>, winding: usize) -> Result<Outcome, CliError> {
    if winding == 0 {
        return Err(CliError::input("--winding must be at least 1"));
    }
    let l = match (input, kind) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            io::parse_fourier_csv(&text)?
        }
        (None, Some(k)) => builtin(k, common.truncation.unwrap_or(64).min(128))?,
        (None, None) => return Err(CliError::input("one of --input or --loop is required")),
    };
    let w = loops::wind(&l, winding);
    let csv = io::fourier_csv(&w, &io::header_lines(&curve_sha(common)?, common.seed));
    let files = vec![write(&common.out, "wind.csv", &csv)?];
    Ok(Outcome {
        files,
        stdout: loop_summary(&w),
        all_pass: true,
    })
}

pub fn cmd_partition(common: &Common, energy: Option<f64>, kind: Option<BuiltinLoop>, beta: Option<&str>) -> Result<Outcome, CliError> {
    let e_a = match (energy, kind) {
        (Some(e), _) => e,
        (None, Some(k)) => loops::loop_energy(&builtin(k, 96)?, 512)?,
        (None, None) => PI,
    };
    if !(e_a > 0.0) || !e_a.is_finite() {
        return Err(CliError::input("--energy must be positive"));
    }
    let betas: Vec<C64> = match beta {
        Some(t) => vec![io::parse_complex(t).map_err(CliError::input)?],
        None => (0..=20).map(|k| C64::new(0.1 * 100f64.powf(k as f64 / 20.0) / e_a, 0.0)).collect(),
    };
    let mut rows = Vec::new();
    for b in betas {
        let res = loops::partition_sum(e_a, b)?;
        rows.push(vec![
            io::format_complex(b),
            io::format_complex(res.value_direct),
            io::format_complex(res.value_theta),
            io::format_complex(res.value_poisson),
            io::format_complex(loops::partition_value(e_a, b + C64::new(0.0, 2.0 * PI / e_a), PartitionMode::Theta)?),
            io::real(res.spread()),
        ]);
    }
    let mut header = io::header_lines(&curve_sha(common)?, common.seed);
    header.push(format!("energy {}", io::real(e_a)));
    let csv = io::csv(&header, &["beta", "direct", "theta", "poisson", "theta_shifted", "spread"], &rows);
    let files = vec![write(&common.out, "partition.csv", &csv)?];
    Ok(Outcome {
        files,
        stdout: csv,
        all_pass: true,
    })
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match &cfg.command {
        Command::Periods { common } => cmd_periods(common),
        Command::Trace { common, divisor, span } => cmd_trace(common, divisor, *span),
        Command::Verify { common, suite } => cmd_verify(common, suite),
        Command::Eval { common, u, divisor } => cmd_eval(common, u.as_deref(), divisor.as_deref()),
        Command::Fourier {
            common,
            input,
            builtin,
            normalize,
        } => cmd_fourier(common, input.as_deref(), *builtin, *normalize),
        Command::Wind {
            common,
            input,
            builtin,
            winding,
        } => cmd_wind(common, input.as_deref(), *builtin, *winding),
        Command::Partition {
            common,
            energy,
            builtin,
            beta,
        } => cmd_partition(common, *energy, *builtin, beta.as_deref()),
    }
}

/// Parses arguments, runs the command, prints its summary and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cfg) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.all_pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
