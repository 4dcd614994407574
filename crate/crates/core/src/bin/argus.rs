use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use argus_core::factory::FactorySpec;
use argus_core::suite::{self, Builtin, Command, FunctionSource, RunConfig, SCHEMA_VERSION};
use argus_core::{Error, Region};

#[derive(Parser)]
#[command(name = "argus", version, about = "Index profiles, Blaschke certificates and cusp envelopes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Semicircle index I(r) on a radius grid.
    IndexProfile(Common),
    /// Jump of I across each zero radius against the zero ledger.
    JumpCheck(Common),
    /// Telescoped jump relation over consecutive zero radii.
    SummationCheck(Common),
    /// Logarithmic average J(r) of the index profile.
    JProfile(Common),
    /// Evaluate the cusp-example Blaschke product on a disc grid.
    BlaschkeEval(Common),
    /// Exact pointwise and tail certificate for the cusp-example zeros.
    BlaschkeCert(Common),
    /// Riemann-map envelope for the cusp profile given by --alpha.
    CuspEnvelope(Common),
    /// Vanishing order at the origin along the radial approach.
    VanishingOrder(Common),
    /// Certify that boundary values on an interval lie in a region.
    ConeCertify(Common),
    /// Run every verification check.
    VerifyAll(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// `counterexample` or `cusp-example-product`.
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// JSON factory spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// `geometric:start:end:count`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long = "M", default_value_t = 20)]
    m: u64,
    #[arg(long = "N", default_value_t = 20)]
    n: u64,
    #[arg(long, default_value = "cone-infinity")]
    region: String,
    /// `lo:hi` on the real axis.
    #[arg(long, default_value = "-0.99:0.99")]
    interval: String,
    #[arg(long, default_value_t = 2001)]
    samples: usize,
    #[arg(long, default_value_t = 40)]
    n_max: u32,
    /// Comma-separated Taylor coefficients a_0, a_1, ... of the cusp profile.
    #[arg(long, default_value = "0,0,1")]
    alpha: String,
    #[arg(long, default_value_t = 0.5)]
    endpoint: f64,
    /// Append a fixture with a deliberately wrong zero ledger.
    #[arg(long)]
    inject_failure: bool,
}

impl Cmd {
    fn split(self) -> (Command, Common) {
        match self {
            Cmd::IndexProfile(c) => (Command::IndexProfile, c),
            Cmd::JumpCheck(c) => (Command::JumpCheck, c),
            Cmd::SummationCheck(c) => (Command::SummationCheck, c),
            Cmd::JProfile(c) => (Command::JProfile, c),
            Cmd::BlaschkeEval(c) => (Command::BlaschkeEval, c),
            Cmd::BlaschkeCert(c) => (Command::BlaschkeCert, c),
            Cmd::CuspEnvelope(c) => (Command::CuspEnvelope, c),
            Cmd::VanishingOrder(c) => (Command::VanishingOrder, c),
            Cmd::ConeCertify(c) => (Command::ConeCertify, c),
            Cmd::VerifyAll(c) => (Command::VerifyAll, c),
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64, Error> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number {s:?} in {what}")))
}

fn config(command: Command, c: &Common) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::new(command);
    cfg.tolerance = c.tolerance;
    cfg.source = match (&c.builtin, &c.spec) {
        (Some(b), _) => Some(FunctionSource::Builtin(b.parse::<Builtin>()?)),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let spec: FactorySpec =
                serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad spec: {e}")))?;
            spec.validate()?;
            Some(FunctionSource::Spec(spec))
        }
        (None, None) => None,
    };
    cfg.grid = c.grid.as_deref().map(suite::parse_grid).transpose()?;
    cfg.window = (c.m, c.n);
    cfg.region = c.region.parse::<Region>()?;
    cfg.interval = match c.interval.split_once(':') {
        Some((lo, hi)) => (parse_f64(lo, "interval")?, parse_f64(hi, "interval")?),
        None => return Err(Error::InvalidInput(format!("interval {:?} is not lo:hi", c.interval))),
    };
    cfg.samples = c.samples;
    cfg.n_max = c.n_max;
    cfg.alpha = c.alpha.split(',').map(|s| parse_f64(s, "alpha")).collect::<Result<_, _>>()?;
    cfg.endpoint = c.endpoint;
    cfg.inject_failure = c.inject_failure;
    Ok(cfg)
}

fn emit(c: &Common, text: &str) -> std::io::Result<()> {
    match &c.output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn error_report(command: Command, tolerance: f64, e: &Error) -> String {
    let v = json!({
        "schema": SCHEMA_VERSION,
        "command": command.name(),
        "tolerance": tolerance,
        "pass": false,
        "error": { "kind": e.kind(), "code": e.code(), "message": e.to_string() },
    });
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

fn init_threads() {
    let n = std::env::var("ARGUS_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let (command, common) = cli.command.split();
    let outcome = config(command, &common).and_then(|cfg| suite::run(&cfg));
    let (text, code) = match &outcome {
        Ok(report) => {
            let text = match common.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            eprint!("{}", report.failures());
            (text, if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            (error_report(command, common.tolerance, e), 2)
        }
    };
    if let Err(e) = emit(&common, &text) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
