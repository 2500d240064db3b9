//! Command-line front end: spectra, regime classification, wavefunction
//! samples and the verification suite, as JSON or CSV.

pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddo_core::model::{
    classify, derive_channel, energy_squared, first_n, spectrum_table, RegimeInequalities,
    SpectrumEntry,
};
use ddo_core::oracle::{verify_spectrum_on, FdOrder, GridSpec, DEFAULT_GRID};
use ddo_core::quadrature::{normalization, QuadratureSpec, DEFAULT_ORDER};
use ddo_core::suite::{default_sweep, run_suite, Scope, SuiteConfig, SweepCase};
use ddo_core::wavefunctions::{sample, RadialState};
use ddo_core::{DeformationParams, Error, Regime, Spin, VerificationReport};
use serde::Serialize;

pub const SCHEMA: u32 = 1;
pub const QUAD_ORDER_ENV: &str = "DDO_QUAD_ORDER";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_BOUND_STATE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ddo",
    version,
    about = "Deformed Dirac oscillator: spectra, wavefunctions and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Table of E^2 - 1 over channels and radial quantum numbers.
    Spectrum(SpectrumArgs),
    /// Regime of one channel with the inequality values that decide it.
    Classify(ChannelArgs),
    /// Sampled radial components of one state.
    Wavefunction(WavefunctionArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Grid eigenvalues of h0 against the closed form for one channel.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SpinArg {
    #[value(name = "+")]
    #[serde(rename = "+")]
    Plus,
    #[value(name = "-")]
    #[serde(rename = "-")]
    Minus,
}

impl From<SpinArg> for Spin {
    fn from(s: SpinArg) -> Self {
        match s {
            SpinArg::Plus => Spin::Plus,
            SpinArg::Minus => Spin::Minus,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    #[arg(long = "beta-prime", default_value_t = 0.01)]
    pub beta_prime: f64,
}

impl ParamArgs {
    fn resolve(&self) -> Result<DeformationParams, Error> {
        DeformationParams::new(self.omega, self.beta, self.beta_prime)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Twice the total angular momentum; a positive odd integer.
    #[arg(long = "two-j")]
    pub two_j: u32,
    #[arg(long, value_enum, default_value_t = SpinArg::Plus, allow_hyphen_values = true)]
    pub s: SpinArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long = "two-j-max", default_value_t = 3)]
    pub two_j_max: u32,
    #[arg(long = "n-max", default_value_t = 2)]
    pub n_max: u32,
    /// Restrict to one channel; a channel without bound states is an error.
    #[arg(long = "two-j")]
    pub two_j: Option<u32>,
    #[arg(long, value_enum, default_value_t = SpinArg::Plus, allow_hyphen_values = true)]
    pub s: SpinArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true, value_parser = parse_sigma)]
    pub sigma: i32,
    /// Number of sample points, uniform in z.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub radial: bool,
    #[arg(long)]
    pub angular: bool,
    #[arg(long)]
    pub susy: bool,
    /// Relative tolerance of grid eigenvalues against the closed form.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Verify one channel with the given parameters instead of the default sweep.
    #[arg(long = "two-j")]
    pub two_j: Option<u32>,
    #[arg(long, value_enum, default_value_t = SpinArg::Plus, allow_hyphen_values = true)]
    pub s: SpinArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FdArg {
    #[value(name = "2")]
    #[serde(rename = "2")]
    Second,
    #[value(name = "4")]
    #[serde(rename = "4")]
    Fourth,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[arg(long = "n-max", default_value_t = 5)]
    pub n_max: u32,
    /// Interior nodes of the coarse grid; the fine grid has 2N+1.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long = "fd-order", value_enum, default_value_t = FdArg::Second)]
    pub fd_order: FdArg,
    /// Truncate the z interval to [-1+delta, 1-delta].
    #[arg(long, default_value_t = 0.0)]
    pub truncation: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

fn parse_sigma(s: &str) -> Result<i32, String> {
    match s {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("sigma must be +1 or -1, got {s}")),
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(std::io::Error),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::NoBoundState { .. }) => EXIT_NO_BOUND_STATE,
            Failure::Core(
                Error::Numerical(_)
                | Error::Consistency(_)
                | Error::DivergenceSuspected { .. }
                | Error::Contract { .. },
            ) => EXIT_FAILED,
            Failure::Core(_) | Failure::Invalid(_) | Failure::Io(_) => EXIT_INVALID,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::Invalid(m) => m.clone(),
        }
    }
}

/// Resolved quadrature order: `DDO_QUAD_ORDER` if set, the default otherwise.
fn quad_order() -> Result<usize, Failure> {
    match std::env::var(QUAD_ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 2)
            .ok_or_else(|| {
                Failure::Invalid(format!(
                    "{QUAD_ORDER_ENV} must be an integer >= 2, got {v:?}"
                ))
            }),
        Err(_) => Ok(DEFAULT_ORDER),
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a C,
    quad_order: usize,
    result: R,
}

struct Rendered {
    text: String,
    code: i32,
}

fn render<C: Serialize, R: Serialize, W: Serialize>(
    command: &str,
    config: &C,
    out: &OutputArgs,
    result: R,
    csv_header: &[&str],
    csv_rows: &[W],
    code: i32,
) -> Result<Rendered, Failure> {
    let quad_order = quad_order()?;
    let text = match out.format {
        Format::Json => output::to_json(&Envelope {
            schema: SCHEMA,
            command,
            config,
            quad_order,
            result,
        }),
        Format::Csv => {
            let cfg = Envelope {
                schema: SCHEMA,
                command,
                config,
                quad_order,
                result: (),
            };
            output::to_csv(&cfg, csv_header, csv_rows)
        }
    };
    Ok(Rendered { text, code })
}

const SPECTRUM_HEADER: &[&str] = &[
    "s",
    "two_j",
    "regime",
    "n",
    "principal",
    "sigma",
    "e",
    "e2_minus_1",
    "energy",
];

fn spectrum(args: &SpectrumArgs) -> Result<Rendered, Failure> {
    let params = args.params.resolve()?;
    #[derive(Serialize)]
    struct Row {
        s: Spin,
        two_j: u32,
        regime: Regime,
        n: u32,
        principal: u32,
        sigma: i32,
        e: f64,
        e2_minus_1: f64,
        energy: f64,
    }
    let row = |e: &SpectrumEntry| Row {
        s: e.spin,
        two_j: e.two_j,
        regime: e.regime,
        n: e.n,
        principal: e.principal,
        sigma: e.sigma,
        e: e.e,
        e2_minus_1: e.e2_minus_1,
        energy: e.energy,
    };
    if let Some(two_j) = args.two_j {
        let spin: Spin = args.s.into();
        let ch = derive_channel(spin, two_j, &params)?;
        let mut entries = Vec::new();
        for sigma in [1, -1] {
            for n in first_n(ch.regime, sigma)..=args.n_max {
                let es = energy_squared(n, &ch, &params)?;
                entries.push(SpectrumEntry {
                    spin,
                    two_j,
                    regime: ch.regime,
                    n,
                    principal: ddo_core::model::principal_number(n, &ch),
                    sigma,
                    e: es.e,
                    e2_minus_1: es.e2_minus_1,
                    energy: sigma as f64 * (1.0 + es.e2_minus_1).sqrt(),
                });
            }
        }
        entries.sort_by_key(|e| (e.sigma < 0, e.n));
        let rows: Vec<_> = entries.iter().map(row).collect();
        #[derive(Serialize)]
        struct Out<'a, T> {
            entries: &'a [T],
        }
        return render(
            "spectrum",
            args,
            &args.out,
            Out { entries: &rows },
            SPECTRUM_HEADER,
            &rows,
            EXIT_OK,
        );
    }
    let table = spectrum_table(&params, args.two_j_max, args.n_max)?;
    let rows: Vec<_> = table.entries.iter().map(row).collect();
    #[derive(Serialize)]
    struct Out<'a, T> {
        entries: &'a [T],
        no_bound_state: &'a [ddo_core::model::SkippedChannel],
        boundary: &'a [ddo_core::model::SkippedChannel],
    }
    let result = Out {
        entries: &rows,
        no_bound_state: &table.no_bound_state,
        boundary: &table.boundary,
    };
    render(
        "spectrum",
        args,
        &args.out,
        result,
        SPECTRUM_HEADER,
        &rows,
        EXIT_OK,
    )
}

fn classify_cmd(args: &ChannelArgs) -> Result<Rendered, Failure> {
    let params = args.params.resolve()?;
    let spin: Spin = args.s.into();
    let regime = classify(spin, args.two_j, &params)?;
    #[derive(Serialize)]
    struct Out {
        s: Spin,
        two_j: u32,
        regime: Regime,
        two_beta_omega_j: f64,
        small_bound: f64,
        very_large_bound: f64,
    }
    let ineq = RegimeInequalities::new(args.two_j, &params);
    let out = Out {
        s: spin,
        two_j: args.two_j,
        regime,
        two_beta_omega_j: ineq.two_beta_omega_j,
        small_bound: ineq.small_bound,
        very_large_bound: ineq.very_large_bound,
    };
    let header = [
        "s",
        "two_j",
        "regime",
        "two_beta_omega_j",
        "small_bound",
        "very_large_bound",
    ];
    render(
        "classify",
        args,
        &args.out,
        &out,
        &header,
        std::slice::from_ref(&out),
        EXIT_OK,
    )
}

fn wavefunction(args: &WavefunctionArgs) -> Result<Rendered, Failure> {
    let ca = &args.channel;
    let params = ca.params.resolve()?;
    if args.points == 0 {
        return Err(Failure::Invalid("points must be positive".into()));
    }
    let ch = derive_channel(ca.s.into(), ca.two_j, &params)?;
    let state = RadialState::new(&ch, &params, args.n, args.sigma)?;
    let norm = normalization(
        &state,
        &QuadratureSpec::new(ch.beta0).with_order(quad_order()?),
    )?;
    let samples = sample(&state, args.points);
    #[derive(Serialize)]
    struct Out<'a> {
        regime: Regime,
        energy: f64,
        e2_minus_1: f64,
        a: f64,
        b: f64,
        normalization: f64,
        normalization_error: f64,
        samples: &'a [ddo_core::wavefunctions::WavefunctionSample],
    }
    let out = Out {
        regime: ch.regime,
        energy: state.energy,
        e2_minus_1: state.e2_minus_1,
        a: state.a(),
        b: state.b(),
        normalization: norm.value,
        normalization_error: norm.error,
        samples: &samples,
    };
    render(
        "wavefunction",
        args,
        &ca.out,
        out,
        &["p", "z", "r1", "r2tilde", "r2", "weight"],
        &samples,
        EXIT_OK,
    )
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    residual: f64,
    tolerance: f64,
    passed: bool,
    detail: &'a str,
}

fn render_report<C: Serialize>(
    command: &str,
    config: &C,
    out: &OutputArgs,
    report: &VerificationReport,
) -> Result<Rendered, Failure> {
    let rows: Vec<_> = report
        .checks
        .iter()
        .map(|c| CheckRow {
            name: &c.name,
            residual: c.residual,
            tolerance: c.tolerance,
            passed: c.passed,
            detail: c.detail.as_deref().unwrap_or(""),
        })
        .collect();
    let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
    render(
        command,
        config,
        out,
        report,
        &["name", "residual", "tolerance", "passed", "detail"],
        &rows,
        code,
    )
}

fn verify(args: &VerifyArgs) -> Result<Rendered, Failure> {
    let mut scopes = Vec::new();
    if args.all || args.radial {
        scopes.push(Scope::Radial);
    }
    if args.all || args.susy {
        scopes.push(Scope::Susy);
    }
    if args.all || args.angular {
        scopes.push(Scope::Angular);
    }
    if scopes.is_empty() {
        scopes = vec![Scope::Radial, Scope::Susy, Scope::Angular];
    }
    if !(args.tol > 0.0) {
        return Err(Failure::Invalid(format!(
            "tol must be positive, got {}",
            args.tol
        )));
    }
    let cases = match args.two_j {
        Some(two_j) => {
            let params = args.params.resolve()?;
            vec![SweepCase {
                params,
                spin: args.s.into(),
                two_j,
            }]
        }
        None => default_sweep(),
    };
    let cfg = SuiteConfig {
        oracle_tol: args.tol,
        quad_order: quad_order()?,
        ..SuiteConfig::default()
    };
    #[derive(Serialize)]
    struct Resolved<'a> {
        #[serde(flatten)]
        args: &'a VerifyArgs,
        scopes: &'a [Scope],
        cases: &'a [SweepCase],
        suite: &'a SuiteConfig,
    }
    let resolved = Resolved {
        args,
        scopes: &scopes,
        cases: &cases,
        suite: &cfg,
    };
    let report = run_suite(&cases, &scopes, &cfg)?;
    render_report("verify", &resolved, &args.out, &report)
}

fn oracle(args: &OracleArgs) -> Result<Rendered, Failure> {
    let ca = &args.channel;
    let params = ca.params.resolve()?;
    let ch = derive_channel(ca.s.into(), ca.two_j, &params)?;
    let fd = match args.fd_order {
        FdArg::Second => FdOrder::Second,
        FdArg::Fourth => FdOrder::Fourth,
    };
    let grid = GridSpec::default()
        .with_size(args.grid)
        .with_fd_order(fd)
        .with_truncation(args.truncation);
    let report = verify_spectrum_on(&ch, &params, args.n_max, args.tol, &grid)?;
    render_report("oracle", args, &ca.out, &report)
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Output goes to `stdout` unless `--output` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let (result, out) = match &cli.command {
        Command::Spectrum(a) => (spectrum(a), &a.out),
        Command::Classify(a) => (classify_cmd(a), &a.out),
        Command::Wavefunction(a) => (wavefunction(a), &a.channel.out),
        Command::Verify(a) => (verify(a), &a.out),
        Command::Oracle(a) => (oracle(a), &a.channel.out),
    };
    let emitted = result.and_then(|r| {
        match &out.output {
            Some(path) => std::fs::write(path, &r.text)?,
            None => stdout.write_all(r.text.as_bytes())?,
        }
        Ok(r.code)
    });
    match emitted {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}
