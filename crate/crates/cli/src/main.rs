//! `hypervar`: Betti sequences, support sets and rank varieties of modules
//! over truncated polynomial rings, plus seeded verification suites.
//!
//! Exit codes: 0 success, 1 a check or verification failed, 2 usage error,
//! 3 I/O or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use hypervar_core::fields::{Field, FieldError};
use hypervar_core::io::{self, Format, IoError, SCHEMA_VERSION};
use hypervar_core::module_rep::{validate_module, ModuleError, ModuleRep, RingSpec};
use hypervar_core::resolutions::{
    betti_over_hypersurface, betti_over_p, default_max_degree, example_matrices, HypersurfaceCoeffs, ResolutionError,
};
use hypervar_core::suites::{run_suite, Suite, SuiteConfig, SuiteError, VerificationOutcome};
use hypervar_core::varieties::{
    module_over_order, rank_variety_enumerate, support_enumerate, support_membership, Method, SupportReport,
    VarietyError,
};

#[derive(Parser, Debug)]
#[command(name = "hypervar", version, about = "Betti sequences, support sets and rank varieties over truncated polynomial rings")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format: json, csv or table.
    #[arg(long, global = true, default_value = "table", value_parser = parse_format)]
    format: Format,
    /// Seed for verification suites.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    seed: u64,
    /// Number of trials for verification suites.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Enumerate even when the point count exceeds the bound (HYPERVAR_MAX_POINTS).
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a module file satisfies every module invariant.
    Validate { file: PathBuf },
    /// Betti numbers over the polynomial ring or over a hypersurface.
    Betti {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_enum, ignore_case = true, default_value = "hypersurface")]
        over: Over,
        /// Coefficients g_1;...;g_c of f = Σ g_q t_q^{u_q}, e.g. "1;t1 + 1".
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Membership in the homological support set.
    Support {
        #[arg(long)]
        module: PathBuf,
        /// Comma-separated coordinates a_1,...,a_c (field elements by index).
        #[arg(long, conflicts_with = "enumerate")]
        point: Option<String>,
        #[arg(long, requires = "field_order")]
        enumerate: bool,
        /// Order of the field to work over; defaults to the module's field.
        #[arg(long)]
        field_order: Option<u64>,
        #[arg(long, value_enum, ignore_case = true, default_value = "both")]
        method: MethodArg,
    },
    /// Points where the module is not free along the linear form Σ a_i t_i.
    Rankvariety {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        field_order: u64,
    },
    /// Run a seeded randomized verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Characteristics cycled through by trial (default depends on the suite).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u32>,
    },
    /// Closed-form stable matrices A and B for the ring k[t]/(t^u).
    ExampleMatrices {
        /// Characteristic of the prime field.
        #[arg(long)]
        p: u32,
        /// Exponents u_1,...,u_d.
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Over {
    P,
    Hypersurface,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Homology,
    Rank,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Homology => Method::Homology,
            MethodArg::Rank => Method::Rank,
            MethodArg::Both => Method::Both,
        }
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Errors in arguments or in what was asked of valid input map to exit 2;
/// unreadable or malformed files map to exit 3.
#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::BoundExceeded { .. } => {
                CliError::Usage(format!("{e}; raise {} or pass --force", io::MAX_POINTS_ENV))
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        })*
    };
}

usage_from!(ResolutionError, ModuleError, FieldError, SuiteError);

fn point_bound(force: bool) -> u64 {
    if force {
        u64::MAX
    } else {
        io::max_points()
    }
}

fn parse_point(text: &str, field: &Field) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|s| {
            let v: i64 = s.trim().parse().map_err(|_| CliError::Usage(format!("bad coordinate {s:?} in --point")))?;
            if field.is_prime_field() {
                Ok(field.from_int(v))
            } else {
                u32::try_from(v).ok().and_then(|x| field.check(x).ok()).ok_or_else(|| {
                    CliError::Usage(format!("coordinate {v} is not an element of F_{}", field.order()))
                })
            }
        })
        .collect()
}

fn validate(file: &PathBuf, format: Format) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(file).map_err(|source| IoError::Io { path: file.display().to_string(), source })?;
    let module = io::parse_module_unchecked(&text)?;
    let verdict = validate_module(&module);
    let out = match (&verdict, format) {
        (_, Format::Json) => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "kind": "validation",
                "valid": verdict.is_ok(),
                "violation": verdict.as_ref().err().map(ToString::to_string),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        (Ok(()), _) => format!("valid: dim {}, {} operators\n", module.dim(), module.operators().len()),
        (Err(v), _) => format!("invalid: {v}\n"),
    };
    print!("{out}");
    Ok(if verdict.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn betti(module: &ModuleRep, over: Over, coeffs: Option<&str>, max_degree: Option<usize>, format: Format) -> Result<ExitCode, CliError> {
    let n = max_degree.unwrap_or_else(|| default_max_degree(module.ring().num_vars()));
    let table = match over {
        Over::P => betti_over_p(module, n)?,
        Over::Hypersurface => {
            let coeffs = match coeffs {
                Some(text) => HypersurfaceCoeffs::parse(module.ring(), text)?,
                None => HypersurfaceCoeffs::from_point(module.ring(), &vec![1; module.ring().num_relations()])?,
            };
            betti_over_hypersurface(module, &coeffs, n)?
        }
    };
    print!("{}", io::emit_betti(&table, format));
    Ok(ExitCode::SUCCESS)
}

fn support(
    module: &ModuleRep,
    point: Option<&str>,
    enumerate: bool,
    field_order: Option<u64>,
    method: Method,
    global: &GlobalOpts,
) -> Result<ExitCode, CliError> {
    let q = field_order.unwrap_or(module.field().order() as u64);
    let report = if enumerate {
        support_enumerate(module, q, method, point_bound(global.force))?
    } else {
        let text = point.ok_or_else(|| CliError::Usage("support needs --point or --enumerate".into()))?;
        let big = module_over_order(module, q)?;
        let record = support_membership(&big, &parse_point(text, big.field())?, method)?;
        SupportReport {
            field_order: big.field().order(),
            num_relations: big.ring().num_relations(),
            stable_rank: big.dim() << (big.ring().num_vars() - 1),
            points: vec![record],
        }
    };
    let field = module_over_order(module, q)?.field().clone();
    print!("{}", io::emit_support(&report, &field, global.format));
    let bad = report.disagreements();
    if bad.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("homology and rank methods disagree at {} points", bad.len());
        Ok(ExitCode::from(1))
    }
}

fn rankvariety(module: &ModuleRep, enumerate: bool, q: u64, global: &GlobalOpts) -> Result<ExitCode, CliError> {
    if !enumerate {
        return Err(CliError::Usage("rankvariety needs --enumerate".into()));
    }
    let report = rank_variety_enumerate(module, q, point_bound(global.force))?;
    let field = module_over_order(module, q)?.field().clone();
    print!("{}", io::emit_rank(&report, &field, global.format));
    Ok(ExitCode::SUCCESS)
}

fn outcome_to_value(out: &VerificationOutcome, seed: u64) -> Value {
    let failures: Vec<Value> = out
        .failures
        .iter()
        .map(|f| {
            json!({
                "trial": f.trial,
                "seed": f.seed,
                "prime": f.prime,
                "parameters": f.parameters,
                "reason": f.reason,
                "module": f.module.as_deref().and_then(|m| serde_json::from_str::<Value>(m).ok()),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "verification",
        "suite": out.suite.name(),
        "seed": seed,
        "trials": out.trials,
        "passed": out.passed(),
        "failures": failures,
    })
}

fn verify(suite: &str, primes: &[u32], global: &GlobalOpts) -> Result<ExitCode, CliError> {
    let suite: Suite = suite.parse()?;
    for &p in primes {
        Field::prime(p)?;
    }
    let trials = usize::try_from(global.trials).map_err(|_| CliError::Usage("too many trials".into()))?;
    let config = SuiteConfig::new(global.seed, trials).with_primes(primes);
    let out = run_suite(suite, &config)?;
    let text = match global.format {
        Format::Json => serde_json::to_string_pretty(&outcome_to_value(&out, global.seed)).expect("json") + "\n",
        Format::Csv => {
            let mut s = "trial,seed,prime,reason\n".to_string();
            for f in &out.failures {
                s.push_str(&format!("{},{},{},\"{}\"\n", f.trial, f.seed, f.prime, f.reason.replace('"', "\"\"")));
            }
            s
        }
        Format::Table => {
            let mut s = format!("{}: {} trials, {} failures\n", out.suite, out.trials, out.failures.len());
            for f in &out.failures {
                s.push_str(&format!("trial {} seed {} p = {}: {}\n  {}\n", f.trial, f.seed, f.prime, f.reason, f.parameters));
                if let Some(m) = &f.module {
                    s.push_str(m);
                }
            }
            s
        }
    };
    print!("{text}");
    eprintln!("wall time {:.2?}", out.elapsed);
    Ok(if out.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn example(p: u32, exponents: &[u32], format: Format) -> Result<ExitCode, CliError> {
    let field = Field::prime(p)?;
    let ring = RingSpec::new(&field, exponents.len(), exponents.to_vec())?;
    let pair = example_matrices(&ring)?;
    let label = |mask: &u32| -> String {
        let elems: Vec<String> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", elems.join(","))
    };
    let grid = |m: &Vec<Vec<hypervar_core::polynomials::MPoly>>| -> Vec<Vec<String>> {
        m.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect()
    };
    let (rows, cols) = (pair.even.iter().map(label).collect::<Vec<_>>(), pair.odd.iter().map(label).collect::<Vec<_>>());
    let text = match format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "kind": "example_matrices",
                "even": rows,
                "odd": cols,
                "A": grid(&pair.a),
                "B": grid(&pair.b),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv | Format::Table => {
            let mut s = String::new();
            for (name, m, row_labels, col_labels) in [("A", &pair.a, &cols, &rows), ("B", &pair.b, &rows, &cols)] {
                s.push_str(&format!("{name}:\n"));
                let mut header = vec![""];
                header.extend(col_labels.iter().map(String::as_str));
                let body: Vec<Vec<String>> = grid(m)
                    .into_iter()
                    .zip(row_labels)
                    .map(|(mut r, l)| {
                        r.insert(0, l.clone());
                        r
                    })
                    .collect();
                s.push_str(&io::render_table(&header, &body));
            }
            s
        }
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { file } => validate(file, g.format),
        Command::Betti { module, over, coeffs, max_degree } => {
            betti(&io::load_module(module)?, *over, coeffs.as_deref(), *max_degree, g.format)
        }
        Command::Support { module, point, enumerate, field_order, method } => {
            support(&io::load_module(module)?, point.as_deref(), *enumerate, *field_order, (*method).into(), g)
        }
        Command::Rankvariety { module, enumerate, field_order } => {
            rankvariety(&io::load_module(module)?, *enumerate, *field_order, g)
        }
        Command::Verify { suite, primes } => verify(suite, primes, g),
        Command::ExampleMatrices { p, exponents } => example(*p, exponents, g.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
