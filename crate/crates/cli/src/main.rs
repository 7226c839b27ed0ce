mod complex;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qbilat::identities::registry;
use qbilat::series::{eval_phi_with, eval_psi_shifted_with, eval_psi_with, SeriesOptions};
use qbilat::verifier::{to_csv, to_json, VerificationConfig, VerificationReport};
use qbilat::{qpoch_multi, Complex, EvalResult, Order, QBase, QError, SeriesSpec};
use serde_json::json;

use crate::complex::{format_complex, parse_complex, parse_list};
use crate::config::FileConfig;

const LITERALS: &str = "Complex literals: 1.2, 1.2+0.3i, -0.5i (no whitespace); lists are comma-separated.";

/// Basic hypergeometric series evaluation and identity verification.
#[derive(Parser, Debug)]
#[command(name = "qbilat", version, after_help = LITERALS)]
struct Cli {
    /// Defaults file of `key = value` lines (samples, seed, tol,
    /// resample_limit, parallel, format); flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a series or a q-shifted factorial.
    Eval(EvalArgs),
    /// Verify one registered identity or all of them at random points.
    Verify(VerifyArgs),
    /// List the registered identities.
    List(ListArgs),
    /// Summarize a saved JSON verification report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Phi,
    Psi,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Comma-separated parameters, one clap value.
#[derive(Clone, Debug)]
struct List(Vec<Complex>);

fn list(s: &str) -> std::result::Result<List, String> {
    parse_list(s).map(List)
}

#[derive(Args, Debug)]
#[command(after_help = LITERALS)]
struct EvalArgs {
    kind: Kind,
    /// Upper parameters of a series.
    #[arg(long, value_parser = list, allow_hyphen_values = true, default_value = "")]
    upper: List,
    /// Lower parameters of a series.
    #[arg(long, value_parser = list, allow_hyphen_values = true, default_value = "")]
    lower: List,
    /// Arguments of a product `(a1, ..., ak; q)_n`.
    #[arg(long, value_parser = list, allow_hyphen_values = true)]
    args: Option<List>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Complex,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Complex>,
    /// Order of a product; omitted means infinite.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    /// Start a bilateral sum at `k = -m` instead of minus infinity.
    #[arg(long, value_name = "M")]
    from: Option<usize>,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).args(["id", "all"])))]
struct VerifyArgs {
    /// Identity id, as printed by `list`.
    id: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = "QBILAT_SEED")]
    seed: Option<u64>,
    /// Residual tolerance; defaults to each identity's own.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    resample_limit: Option<usize>,
    /// Run samples on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// JSON report written by `verify --format json`.
    input: PathBuf,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    /// Verification ran and some sample failed.
    Verification,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let default_format = file
        .format
        .as_deref()
        .map(|f| Format::from_str(f, true).map_err(|_| anyhow!("config: unknown format {f:?}")))
        .transpose()?;
    match cli.command {
        Command::Eval(a) => {
            let format = a.format.or(default_format).unwrap_or(Format::Text);
            emit(&eval(&a, format)?)?;
            Ok(())
        }
        Command::Verify(a) => verify(&a, &file, default_format),
        Command::List(a) => {
            emit(&manifest(a.format.or(default_format).unwrap_or(Format::Text))?)?;
            Ok(())
        }
        Command::Report(a) => report(&a.input),
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn eval(a: &EvalArgs, format: Format) -> Result<String> {
    let base = QBase::new(a.q)?;
    if a.kind == Kind::Product {
        let args = a.args.as_ref().context("product needs --args")?;
        let order = a.n.map_or(Order::Infinite, Order::Finite);
        let p = qpoch_multi(&args.0, order, &base)?;
        return Ok(match format {
            Format::Json => format!(
                "{}\n",
                json!({
                    "value": [p.value.re, p.value.im],
                    "abs_error": p.abs_error,
                    "pole": p.is_pole(),
                    "zero": p.is_zero(),
                    "factors": p.factors,
                })
            ),
            _ => format!(
                "value: {}\nabs_error: {:e}\npole: {}\nfactors: {}\n",
                format_complex(p.value),
                p.abs_error,
                p.is_pole(),
                p.factors
            ),
        });
    }
    let z = a.z.context("series evaluation needs --z")?;
    if !(a.tol > 0.0) {
        return Err(anyhow!("--tol must be positive"));
    }
    let opts = SeriesOptions::with_tol(a.tol);
    let r: EvalResult = match (a.kind, a.from) {
        (Kind::Phi, None) => eval_phi_with(&SeriesSpec::phi(a.upper.0.clone(), a.lower.0.clone(), z, base), &opts)?,
        (Kind::Psi, None) => eval_psi_with(&SeriesSpec::psi(a.upper.0.clone(), a.lower.0.clone(), z, base), &opts)?,
        (Kind::Psi, Some(m)) => eval_psi_shifted_with(
            &SeriesSpec::psi(a.upper.0.clone(), a.lower.0.clone(), z, base),
            m,
            &opts,
        )?,
        (_, Some(_)) => return Err(anyhow!("--from applies to psi only")),
        (Kind::Product, None) => unreachable!(),
    };
    let verdict = serde_json::to_value(r.verdict)?;
    Ok(match format {
        Format::Json => format!(
            "{}\n",
            json!({
                "value": [r.value.re, r.value.im],
                "abs_error_estimate": r.abs_error_estimate,
                "terms_used": r.terms_used,
                "verdict": verdict,
            })
        ),
        _ => format!(
            "value: {}\nabs_error_estimate: {:e}\nterms_used: {}\nverdict: {}\n",
            format_complex(r.value),
            r.abs_error_estimate,
            r.terms_used,
            verdict.as_str().unwrap_or_default()
        ),
    })
}

fn verify(a: &VerifyArgs, file: &FileConfig, default_format: Option<Format>) -> std::result::Result<(), Failure> {
    let defaults = VerificationConfig::default();
    let config = VerificationConfig {
        samples: a.samples.or(file.samples).unwrap_or(defaults.samples),
        seed: a.seed.or(file.seed).unwrap_or(defaults.seed),
        tol: a.tol.or(file.tol),
        resample_limit: a
            .resample_limit
            .or(file.resample_limit)
            .unwrap_or(defaults.resample_limit),
        parallel: !a.serial && file.parallel.unwrap_or(defaults.parallel),
    };
    let reports = match &a.id {
        Some(id) => vec![qbilat::verify(id, &config).map_err(anyhow::Error::from)?],
        None => qbilat::verify_all(&config).map_err(anyhow::Error::from)?,
    };
    let text = match a.format.or(default_format).unwrap_or(Format::Text) {
        Format::Json => to_json(&reports).map_err(anyhow::Error::from)? + "\n",
        Format::Csv => to_csv(&reports).map_err(anyhow::Error::from)?,
        Format::Text => summary_table(&reports),
    };
    match &a.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => emit(&text)?,
    }
    if reports.iter().all(VerificationReport::all_passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let s = &r.summary;
        out += &format!(
            "{:<4} {:<22} {:>3}/{:<3} max residual {:.2e} (tol {:.0e})  resamples {} ({:.1}%){}\n",
            if r.all_passed() { "PASS" } else { "FAIL" },
            r.id,
            s.passed,
            s.passed + s.failed,
            s.max_residual,
            r.tol,
            s.resamples,
            100.0 * s.resample_rate,
            if s.resample_flag { "  [high resample rate]" } else { "" }
        );
        for sample in r.samples.iter().filter(|x| !x.passed) {
            out += &format!(
                "     sample {}: {}\n",
                sample.index,
                sample
                    .error
                    .clone()
                    .unwrap_or_else(|| format!("residual {:.2e}", sample.residual.unwrap_or(f64::NAN)))
            );
        }
    }
    let failed = reports.iter().filter(|r| !r.all_passed()).count();
    out += &format!("{} identities, {} failed\n", reports.len(), failed);
    out
}

fn manifest(format: Format) -> Result<String> {
    let entries: Vec<_> = registry().iter().map(|i| i.manifest()).collect();
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(&entries)? + "\n");
    }
    let mut out = String::new();
    for e in entries {
        let params: Vec<String> = e.params.iter().map(|(n, r)| format!("{n}: {r}")).collect();
        let constraints = if e.constraints.is_empty() {
            "none".to_string()
        } else {
            e.constraints.join(", ")
        };
        out += &format!("{}\t{}\n", e.id, e.name);
        out += &format!("    lhs: {}\n    rhs: {}\n", e.lhs, e.rhs);
        out += &format!(
            "    params: {}\n    constraints: {}\n    tol: {:e}\n",
            params.join("; "),
            constraints,
            e.tol
        );
    }
    Ok(out)
}

fn report(path: &Path) -> std::result::Result<(), Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let reports: Vec<VerificationReport> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(r) = reports
        .iter()
        .find(|r| r.schema_version != qbilat::verifier::SCHEMA_VERSION)
    {
        return Err(anyhow!("{}: unsupported schema version {:?}", r.id, r.schema_version).into());
    }
    emit(&summary_table(&reports))?;
    if reports.iter().all(VerificationReport::all_passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        Self::Usage(e.into())
    }
}
