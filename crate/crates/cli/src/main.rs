use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flk_core::elliptic::{moment_e, moment_jm, moment_k, MomentRoutes};
use flk_core::hyper::{pfq, HypergeometricSpec};
use flk_core::identities::{self, e_transform_check, registry, GWeight, Overrides, VerificationReport};
use flk_core::legendre::{fl_catalog, fl_numeric_nodes, CatalogId, FLCoefficients, MomentFunction};
use flk_core::numerics::{fit_rational, Endpoints};
use flk_core::{Error, ValueWithError};

const MAX_TERMS_ENV: &str = "FLK_MAX_TERMS";

#[derive(Parser, Debug)]
#[command(name = "flk", version, about = "Fourier-Legendre and elliptic identity checker")]
struct Cli {
    /// Output format for stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List registered identities.
    List {
        /// Only records with this tag.
        #[arg(long)]
        tag: Option<String>,
    },
    /// Verify one or more identities.
    Verify(VerifyArgs),
    /// Print the first Fourier-Legendre coefficients of a function.
    Expand {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Moments of K, E or J_m against x^eta.
    Moments {
        /// `K`, `E` or `J:m`.
        #[arg(long)]
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
    },
    /// Evaluate a generalized hypergeometric series.
    Eval {
        /// `a1,a2;b1,b2;x`; fractions like `1/2` are accepted.
        #[arg(long, allow_hyphen_values = true)]
        pfq: String,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Check the E transformation for a weight function.
    Etransform {
        /// One of constant, sqrt, K_sqrt, hyper_3f2; all when omitted.
        #[arg(long)]
        g: Option<String>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("select").required(true).args(["id", "all"]))]
struct VerifyArgs {
    /// Identity id; may be repeated.
    #[arg(long)]
    id: Vec<String>,
    /// Verify every registered identity.
    #[arg(long)]
    all: bool,
    /// Restrict `--all` to records with this tag.
    #[arg(long, requires = "all")]
    tag: Option<String>,
    /// Relative tolerance replacing each plan's own.
    #[arg(long)]
    tol: Option<f64>,
    /// Cap on summed terms; FLK_MAX_TERMS also caps it
    #[arg(long)]
    max_terms: Option<usize>,
    /// Only plans whose method starts with this.
    #[arg(long)]
    method: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV report here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report zero runtimes so output is byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
}

/// A failed command: message and exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownFunction(_) | Error::UnknownIdentity(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn env_cap() -> Result<Option<usize>, Failure> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| usage(format!("{MAX_TERMS_ENV} must be a count, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn list(tag: Option<&str>, format: Format) -> Result<String, Failure> {
    let records: Vec<_> = registry().iter().filter(|r| tag.is_none_or(|t| r.has_tag(t))).collect();
    Ok(match format {
        Format::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "citation": r.citation,
                        "tags": r.tags,
                        "tol": r.tol_class.value(),
                        "methods": r.plans.iter().map(|p| p.method.as_str()).collect::<Vec<_>>(),
                        "parameters": r.parameters,
                        "rhs": r.rhs.to_string(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("list serializes")
        }
        Format::Csv => {
            let mut out = String::from("id,tol,tags,citation\n");
            for r in &records {
                let _ = writeln!(
                    out,
                    "{},{:e},{},\"{}\"",
                    r.id,
                    r.tol_class.value(),
                    r.tags.join(" "),
                    r.citation.replace('"', "\"\"")
                );
            }
            out
        }
        Format::Text => {
            let width = records.iter().map(|r| r.id.len()).max().unwrap_or(2);
            let mut out = String::new();
            let _ = writeln!(out, "{:width$}  {:7}  citation", "id", "tol");
            for r in &records {
                let _ = writeln!(out, "{:width$}  {:<7.0e}  {}", r.id, r.tol_class.value(), r.citation);
            }
            out
        }
    })
}

fn report_table(reports: &[VerificationReport]) -> String {
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2);
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(
            out,
            "{:width$}  {:8}  rel_dev {:9.2e}  terms {:>9}  {:8.1} ms",
            r.id,
            r.status.as_str(),
            r.rel_dev,
            r.terms_used,
            r.runtime_ms
        );
        for reason in r.reasons() {
            let _ = writeln!(out, "{:width$}    {reason}", "");
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} passed", reports.len());
    out
}

fn verify(args: &VerifyArgs, format: Format) -> Result<(String, bool), Failure> {
    let max_terms = match (args.max_terms, env_cap()?) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(usage(format!("--tol must be positive, got {t}")));
        }
    }
    let overrides =
        Overrides { tol: args.tol, max_terms, method: args.method.clone(), deterministic: args.deterministic };
    let reports = if args.all {
        let reports = identities::verify_all(args.tag.as_deref(), &overrides);
        if reports.is_empty() {
            return Err(usage(format!("no identity carries tag `{}`", args.tag.as_deref().unwrap_or(""))));
        }
        reports
    } else {
        args.id.iter().map(|id| identities::verify(id, &overrides)).collect::<Result<Vec<_>, _>>()?
    };
    if let Some(path) = &args.json {
        write_file(path, &identities::to_json(&reports))?;
    }
    if let Some(path) = &args.csv {
        write_file(path, &identities::to_csv(&reports)?)?;
    }
    let text = match format {
        Format::Text => report_table(&reports),
        Format::Json => identities::to_json(&reports) + "\n",
        Format::Csv => identities::to_csv(&reports)?,
    };
    Ok((text, reports.iter().all(|r| r.passed())))
}

fn coefficients(function: &str, terms: usize) -> Result<(FLCoefficients, &'static str), Failure> {
    match function.parse::<CatalogId>() {
        Ok(id) => Ok((fl_catalog(id), "catalog")),
        Err(Error::UnknownFunction(_)) => {
            let f: MomentFunction = function.parse()?;
            Ok((fl_numeric_nodes(|n| f.eval(n), terms, Endpoints::Both)?, "numeric"))
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn expand(function: &str, terms: usize, format: Format) -> Result<String, Failure> {
    let (stream, source) = coefficients(function, terms)?;
    let values = stream.take(terms)?;
    let rational = |v: &ValueWithError| fit_rational(v.value, 1 << 20, 1e-13 * v.value.abs().max(1e-300));
    Ok(match format {
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    json!({
                        "n": n,
                        "value": json_number(v.value),
                        "abs_error": json_number(v.abs_error),
                        "rational": rational(v).map(|r| r.to_string()),
                    })
                })
                .collect();
            let doc = json!({ "function": function, "source": source, "coefficients": rows });
            serde_json::to_string_pretty(&doc).expect("expansion serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("n,value,abs_error,rational\n");
            for (n, v) in values.iter().enumerate() {
                let r = rational(v).map(|r| r.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{n},{:.16e},{:.3e},{r}", v.value, v.abs_error);
            }
            out
        }
        Format::Text => {
            let shown: Vec<String> = values
                .iter()
                .map(|v| rational(v).map_or_else(|| format!("{:.16e}", v.value), |r| r.to_string()))
                .collect();
            let mut out = format!("{function} ({source}): [{}]\n", shown.join(", "));
            for (n, v) in values.iter().enumerate() {
                let _ = writeln!(out, "  c_{n:<3} = {:+.16e} ± {:.1e}", v.value, v.abs_error);
            }
            out
        }
    })
}

fn moment_routes(kind: &str, eta: f64) -> Result<MomentRoutes, Failure> {
    match kind {
        "K" => Ok(moment_k(eta)?),
        "E" => Ok(moment_e(eta)?),
        _ => {
            let m = kind
                .strip_prefix("J:")
                .and_then(|m| m.parse::<u32>().ok())
                .ok_or_else(|| usage(format!("unknown kind `{kind}`; expected K, E or J:m")))?;
            Ok(moment_jm(m, eta)?)
        }
    }
}

fn moments(kind: &str, eta: f64, format: Format) -> Result<String, Failure> {
    let routes = moment_routes(kind, eta)?;
    Ok(match format {
        Format::Json => {
            let rows: Vec<Value> = routes
                .routes
                .iter()
                .map(|(name, v)| json!({ "route": name, "value": json_number(v.value), "abs_error": json_number(v.abs_error) }))
                .collect();
            let doc = json!({
                "kind": kind,
                "eta": eta,
                "value": json_number(routes.value.value),
                "abs_error": json_number(routes.value.abs_error),
                "spread": json_number(routes.spread()),
                "routes": rows,
            });
            serde_json::to_string_pretty(&doc).expect("moments serialize") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("route,value,abs_error\n");
            for (name, v) in &routes.routes {
                let _ = writeln!(out, "{name},{:.16e},{:.3e}", v.value, v.abs_error);
            }
            out
        }
        Format::Text => {
            let mut out =
                format!("int_0^1 {kind} x^{eta} dx = {:.16e} ± {:.1e}\n", routes.value.value, routes.value.abs_error);
            for (name, v) in &routes.routes {
                let _ = writeln!(out, "  {name:<16} {:.16e} ± {:.1e}", v.value, v.abs_error);
            }
            let _ = writeln!(out, "  spread {:.1e}", routes.spread());
            out
        }
    })
}

fn eval(text: &str, tol: f64, format: Format) -> Result<String, Failure> {
    let spec = HypergeometricSpec::parse(text).map_err(|e| usage(e.to_string()))?;
    let v = pfq(&spec, tol)?;
    Ok(match format {
        Format::Json => {
            let doc = json!({ "pfq": text, "value": json_number(v.value), "abs_error": json_number(v.abs_error) });
            serde_json::to_string_pretty(&doc).expect("value serializes") + "\n"
        }
        Format::Csv => format!("pfq,value,abs_error\n\"{text}\",{:.16e},{:.3e}\n", v.value, v.abs_error),
        Format::Text => format!("{:.16e} ± {:.1e}\n", v.value, v.abs_error),
    })
}

fn etransform(g: Option<&str>, format: Format) -> Result<(String, bool), Failure> {
    let weights = match g {
        Some(name) => vec![name.parse::<GWeight>()?],
        None => GWeight::ALL.to_vec(),
    };
    let reports = weights.into_iter().map(e_transform_check).collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Text => report_table(&reports),
        Format::Json => identities::to_json(&reports) + "\n",
        Format::Csv => identities::to_csv(&reports)?,
    };
    Ok((text, reports.iter().all(|r| r.passed())))
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let f = cli.format;
    match &cli.command {
        Command::List { tag } => Ok((list(tag.as_deref(), f)?, true)),
        Command::Verify(args) => verify(args, f),
        Command::Expand { function, terms } => Ok((expand(function, *terms, f)?, true)),
        Command::Moments { kind, eta } => Ok((moments(kind, *eta, f)?, true)),
        Command::Eval { pfq, tol } => Ok((eval(pfq, *tol, f)?, true)),
        Command::Etransform { g } => etransform(g.as_deref(), f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("flk: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
