//! Command-line front end: profiles, `Re(a)` curves, neutral points and the
//! verification report.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::baseflow::BaseFlowSample;
use crate::critical::{self, log_grid, NeutralPoint, SearchWindow};
use crate::error::{Error, Result};
use crate::orr_evp::OrrProblem;
use crate::params::{FlowKind, Params};
use crate::spectral::{chebyshev_nodes, MAX_DEGREE, MIN_DEGREE};
use crate::verify::{self, Trial, TrialField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub const THREADS_ENV: &str = "MHDES_THREADS";

pub const PROFILE_HEADER: &str = "z,U,Uprime,Usecond,Bbar,Bprime,Bsecond";
pub const CURVE_HEADER: &str = "flow,Ha,Pm,a,Re";
pub const NEUTRAL_HEADER: &str = "flow,Ha,Pm,a_crit,Re_E,N,converged";

/// Relative tolerance for the spectral / finite-difference comparison.
pub const FD_AGREEMENT: f64 = 5e-3;
/// Relative tolerance for `energy_ratio(eigenvector) = m`.
pub const RAYLEIGH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub flow: FlowKind,
    #[serde(rename = "Ha_list")]
    pub ha_list: Vec<f64>,
    #[serde(rename = "Pm")]
    pub pm: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub a_points: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub output_path: Option<String>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            flow: FlowKind::Couette,
            ha_list: vec![0.1, 1.0, 10.0, 50.0],
            pm: 0.1,
            a_min: critical::DEFAULT_A_MIN,
            a_max: critical::DEFAULT_A_MAX,
            a_points: critical::DEFAULT_SCAN_POINTS,
            n: 60,
            seed: 42,
            output_path: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ha_list.is_empty() {
            return Err(Error::Domain("Hartmann-number list is empty".into()));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} = {v} must be positive and finite")))
            }
        };
        for &ha in &self.ha_list {
            positive("Ha", ha)?;
        }
        positive("Pm", self.pm)?;
        positive("a_min", self.a_min)?;
        positive("a_max", self.a_max)?;
        if self.a_min >= self.a_max {
            return Err(Error::Domain(format!(
                "a_min = {} must be below a_max = {}",
                self.a_min, self.a_max
            )));
        }
        if self.a_points == 0 {
            return Err(Error::Domain("a_points must be positive".into()));
        }
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&self.n) {
            return Err(Error::Domain(format!(
                "N = {} outside [{MIN_DEGREE}, {MAX_DEGREE}]",
                self.n
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        Ok(cfg)
    }

    fn params(&self, ha: f64) -> Result<Params> {
        Params::new(self.flow, ha, self.pm)
    }

    fn window(&self) -> SearchWindow {
        SearchWindow {
            a_min: self.a_min,
            a_max: self.a_max,
            scan_points: self.a_points,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mhdes", version, about = "Energy stability of MHD Couette and Hartmann flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Base-flow profile on the collocation nodes.
    Profile(RunArgs),
    /// Re(a) over a log-spaced wavenumber grid, one block per Ha.
    Curve(RunArgs),
    /// Critical wavenumber and energy Reynolds number for each Ha.
    Neutral(RunArgs),
    /// Trial-field, decay, Poincaré and finite-difference checks; JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_flow)]
    pub flow: Option<FlowKind>,
    /// Comma-separated Hartmann numbers.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub ha: Option<Vec<f64>>,
    #[arg(long)]
    pub pm: Option<f64>,
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_points: Option<usize>,
    /// Polynomial degree.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Random trial fields per Hartmann number.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Interior points of the coarse finite-difference grid.
    #[arg(long, default_value_t = 400)]
    pub fd_points: usize,
    /// Multiplies the claimed maximum before the trial-field check.
    #[arg(long, hide = true)]
    pub inject_m_scale: Option<f64>,
}

fn parse_flow(s: &str) -> std::result::Result<FlowKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    /// Config file (or defaults) with command-line overrides applied.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.flow {
            cfg.flow = v;
        }
        if let Some(v) = &self.ha {
            cfg.ha_list = v.clone();
        }
        if let Some(v) = self.pm {
            cfg.pm = v;
        }
        if let Some(v) = self.a_min {
            cfg.a_min = v;
        }
        if let Some(v) = self.a_max {
            cfg.a_max = v;
        }
        if let Some(v) = self.a_points {
            cfg.a_points = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.output_path = Some(v.to_string_lossy().into_owned());
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let outcome = match &cli.command {
        Command::Profile(args) => args.resolve().and_then(|c| cmd_profile(&c)),
        Command::Curve(args) => args.resolve().and_then(|c| cmd_curve(&c)),
        Command::Neutral(args) => args.resolve().and_then(|c| cmd_neutral(&c)),
        Command::Verify(args) => args.run.resolve().and_then(|c| cmd_verify(&c, args)),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Consistency(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Domain(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    let available = std::thread::available_parallelism().map_or(n, |p| p.get());
    // A second initialization (library use, tests) keeps the existing pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n.min(available).max(1))
        .build_global();
    Ok(())
}

/// 17 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    // -0 prints as 0 so symmetric profiles give identical columns.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output_path {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_rows<T: Serialize>(cfg: &RunConfig, header: &str, rows: &[Vec<String>], json_rows: &[T]) -> Result<()> {
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from(header);
            s.push('\n');
            for row in rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(json_rows)?;
            s.push('\n');
            s
        }
    };
    emit(cfg, &text)
}

#[derive(Serialize)]
struct ProfileRow {
    z: f64,
    #[serde(rename = "U")]
    u: f64,
    #[serde(rename = "Uprime")]
    u_prime: f64,
    #[serde(rename = "Usecond")]
    u_second: f64,
    #[serde(rename = "Bbar")]
    b: f64,
    #[serde(rename = "Bprime")]
    b_prime: f64,
    #[serde(rename = "Bsecond")]
    b_second: f64,
}

#[derive(Serialize)]
struct CurveRow {
    flow: FlowKind,
    #[serde(rename = "Ha")]
    ha: f64,
    #[serde(rename = "Pm")]
    pm: f64,
    a: f64,
    #[serde(rename = "Re")]
    re: f64,
}

#[derive(Serialize)]
struct NeutralRow {
    flow: FlowKind,
    #[serde(rename = "Ha")]
    ha: f64,
    #[serde(rename = "Pm")]
    pm: f64,
    a_crit: f64,
    #[serde(rename = "Re_E")]
    re_e: f64,
    #[serde(rename = "N")]
    n: usize,
    converged: bool,
}

pub fn cmd_profile(cfg: &RunConfig) -> Result<i32> {
    let [ha] = cfg.ha_list[..] else {
        return Err(Error::Domain("profile takes exactly one Hartmann number (--ha)".into()));
    };
    let z = chebyshev_nodes(cfg.n);
    let s = BaseFlowSample::evaluate(cfg.flow, ha, &z)?;
    let mut rows = Vec::with_capacity(z.len());
    let mut json_rows = Vec::with_capacity(z.len());
    for k in 0..z.len() {
        let v = [s.z[k], s.u[k], s.du[k], s.d2u[k], s.b[k], s.db[k], s.d2b[k]];
        rows.push(v.iter().map(|x| sci(*x)).collect());
        json_rows.push(ProfileRow {
            z: v[0],
            u: v[1],
            u_prime: v[2],
            u_second: v[3],
            b: v[4],
            b_prime: v[5],
            b_second: v[6],
        });
    }
    emit_rows(cfg, PROFILE_HEADER, &rows, &json_rows)?;
    Ok(EXIT_OK)
}

pub fn cmd_curve(cfg: &RunConfig) -> Result<i32> {
    let grid = log_grid(cfg.a_min, cfg.a_max, cfg.a_points);
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut ok = 0;
    for &ha in &cfg.ha_list {
        let problem = OrrProblem::new(cfg.params(ha)?, cfg.n)?;
        for p in problem.curve(&grid) {
            if let Some(err) = &p.error {
                eprintln!("warning: {} Ha={ha} a={}: {err}", cfg.flow, p.a);
            } else {
                ok += 1;
            }
            rows.push(vec![cfg.flow.to_string(), sci(ha), sci(cfg.pm), sci(p.a), sci(p.re)]);
            json_rows.push(CurveRow { flow: cfg.flow, ha, pm: cfg.pm, a: p.a, re: p.re });
        }
    }
    emit_rows(cfg, CURVE_HEADER, &rows, &json_rows)?;
    Ok(if ok == 0 { EXIT_NUMERICAL } else { EXIT_OK })
}

pub fn cmd_neutral(cfg: &RunConfig) -> Result<i32> {
    let points = critical::neutral_sweep(cfg.flow, &cfg.ha_list, cfg.pm, &cfg.window(), cfg.n)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for p in &points {
        if let Some(err) = &p.error {
            eprintln!("warning: {} Ha={}: {err}", p.flow, p.ha);
        } else if !p.converged {
            eprintln!(
                "warning: {} Ha={}: minimum at the edge of [{}, {}]",
                p.flow, p.ha, cfg.a_min, cfg.a_max
            );
        }
        rows.push(vec![
            p.flow.to_string(),
            sci(p.ha),
            sci(p.pm),
            sci(p.a_crit),
            sci(p.re_e),
            p.n.to_string(),
            p.converged.to_string(),
        ]);
        json_rows.push(NeutralRow {
            flow: p.flow,
            ha: p.ha,
            pm: p.pm,
            a_crit: p.a_crit,
            re_e: p.re_e,
            n: p.n,
            converged: p.converged,
        });
    }
    emit_rows(cfg, NEUTRAL_HEADER, &rows, &json_rows)?;
    let all_failed = points.iter().all(|p| p.error.is_some());
    Ok(if all_failed { EXIT_NUMERICAL } else { EXIT_OK })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyPoint {
    pub neutral: NeutralPoint,
    pub m: f64,
    pub m_claimed: f64,
    pub rayleigh_error: f64,
    pub trial_bound: verify::TrialReport,
    /// The same bound applied to the eigenvector itself.
    pub eigen_bound: verify::TrialReport,
    pub decay: DecaySummary,
    pub poincare_violations: usize,
    pub fd: verify::FdOracle,
    pub fd_relative_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecaySummary {
    pub re: f64,
    pub re_e: f64,
    pub trials: usize,
    pub violations: usize,
    pub nonnegative_rate: usize,
    pub min_margin: f64,
    /// `|dE/dt| / D` of the eigenvector at `Re = Re_E`.
    pub marginal_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub trials: usize,
    pub fd_points: usize,
    pub points: Vec<VerifyPoint>,
    pub passed: bool,
}

pub fn verify_point(cfg: &RunConfig, ha: f64, args: &VerifyArgs) -> Result<VerifyPoint> {
    let params = cfg.params(ha)?;
    let problem = OrrProblem::new(params, cfg.n)?;
    let neutral = critical::minimize(&problem, &cfg.window())?;
    let a = neutral.a_crit;
    let sol = problem.solve(a)?;
    let op = problem.operator();
    let m_claimed = sol.m * args.inject_m_scale.unwrap_or(1.0);

    let eigen = TrialField::from_solution(&sol, op)?;
    let eigen_energy = verify::energy_ratio(&eigen, &params, problem.sample(), op)?;
    let rayleigh_error = (eigen_energy.ratio - sol.m).abs() / sol.m;

    let trials = verify::random_trials(&problem, a, args.trials, cfg.seed)?;
    let trial_bound = verify::bound_check(&problem, &trials, m_claimed, cfg.seed)?;
    let eigen_bound = verify::bound_check(&problem, &[Trial::nodal(0, eigen.clone())], m_claimed, cfg.seed)?;

    let re_e = 1.0 / m_claimed;
    let re = 0.5 * re_e;
    let energies = verify::evaluate_trials(&problem, &trials)?;
    let decays: Vec<_> = energies.iter().map(|e| verify::decay_from(e, re, re_e)).collect();
    let marginal = verify::decay_from(&eigen_energy, re_e, re_e);
    let decay = DecaySummary {
        re,
        re_e,
        trials: decays.len(),
        violations: decays.iter().filter(|d| !d.holds).count(),
        nonnegative_rate: decays.iter().filter(|d| d.de_dt >= 0.0).count(),
        min_margin: decays.iter().map(|d| d.margin).fold(f64::INFINITY, f64::min),
        marginal_rate: marginal.de_dt.abs() / marginal.dissipation,
    };

    let mut poincare_violations = 0;
    for f in std::iter::once(&eigen).chain(trials.iter().map(|t| &t.field)) {
        if !verify::poincare_check(f, op)?.holds {
            poincare_violations += 1;
        }
    }

    let fd = verify::fd_oracle(&params, a, args.fd_points)?;
    let fd_relative_error = (fd.m_extrapolated - sol.m).abs() / sol.m;

    let passed = neutral.converged
        && rayleigh_error <= RAYLEIGH_TOL
        && trial_bound.passed()
        && eigen_bound.passed()
        && decay.violations == 0
        && decay.nonnegative_rate == 0
        && decay.marginal_rate <= 1e-8
        && poincare_violations == 0
        && fd_relative_error <= FD_AGREEMENT;
    Ok(VerifyPoint {
        neutral,
        m: sol.m,
        m_claimed,
        rayleigh_error,
        trial_bound,
        eigen_bound,
        decay,
        poincare_violations,
        fd,
        fd_relative_error,
        passed,
    })
}

pub fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<i32> {
    if args.trials == 0 {
        return Err(Error::Domain("--trials must be positive".into()));
    }
    if let Some(s) = args.inject_m_scale {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("--inject-m-scale {s} must be positive")));
        }
    }
    let points = cfg
        .ha_list
        .iter()
        .map(|&ha| verify_point(cfg, ha, args))
        .collect::<Result<Vec<_>>>()?;
    let passed = points.iter().all(|p| p.passed);
    for p in points.iter().filter(|p| !p.passed) {
        let mut msg = format!("verification failed: {} Ha={}", p.neutral.flow, p.neutral.ha);
        for f in [&p.trial_bound, &p.eigen_bound].iter().filter_map(|r| r.falsification.as_ref()) {
            let _ = write!(msg, "; falsification: {}", serde_json::to_string(f)?);
        }
        eprintln!("{msg}");
    }
    let report = VerifyReport {
        config: cfg.clone(),
        trials: args.trials,
        fd_points: args.fd_points,
        points,
        passed,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(cfg, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}
