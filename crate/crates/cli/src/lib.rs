//! Command-line front end for `topo-ramsey`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 fuel exhausted,
//! 3 verification failed.

pub mod json;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use topo_ramsey::dsl::compile;
use topo_ramsey::engine::{extract_with, verify_certificate, Engine, Plan, TupleFunction};
use topo_ramsey::fin::{
    check_avoidance, fin_small_extract, has_splitting_tree, omega_power, SmallCase,
};
use topo_ramsey::fixtures::builtin;
use topo_ramsey::{Budget, Error, Fuel, NatStream, Space};

use json::{
    point_to_json, tree_to_json, tuple_set_from_json, CertificateJson, FuelJson, FunctionSource,
    LevelJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FUEL: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "topo-ramsey",
    version,
    about = "Certified convergent subsequences of functions on [N]^r"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a convergent subsequence and write its certificate.
    Extract(ExtractArgs),
    /// Re-check a certificate against its function.
    Verify(VerifyArgs),
    /// FIN^n smallness checks.
    #[command(subcommand)]
    Fin(FinCommand),
    /// List builtin fixtures.
    Fixtures,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FunctionArgs {
    /// Builtin fixture name, e.g. `min-decay` or `lift-of(mad-pair)`.
    #[arg(long, conflicts_with = "dsl")]
    pub fixture: Option<String>,
    /// DSL expression over x0 < x1 < ...
    #[arg(long)]
    pub dsl: Option<String>,
    #[arg(long)]
    pub arity: Option<usize>,
    /// Space descriptor, e.g. `unit-cube:1`, `product(omega1,omega1)`.
    #[arg(long)]
    pub space: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FuelArgs {
    #[arg(long)]
    pub max_materialize: Option<usize>,
    #[arg(long)]
    pub max_oracle_calls: Option<u64>,
    /// Pigeonhole quota per color class.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// `naturals`, `arithmetic:START:STEP` or `list:A,B,C`.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub prefix: Option<usize>,
    /// cover, inductive, product or nice.
    #[arg(long)]
    pub engine: Option<String>,
    #[command(flatten)]
    pub fuel: FuelArgs,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Certificate file.
    #[arg(long)]
    pub certificate: PathBuf,
    /// Overrides the function recorded in the certificate.
    #[command(flatten)]
    pub function: FunctionArgs,
}

#[derive(Debug, Subcommand)]
pub enum FinCommand {
    /// Search a tuple set for a b-splitting tree.
    Tree {
        /// JSON array of integer arrays.
        #[arg(long)]
        set: String,
        #[arg(long)]
        b: usize,
    },
    /// Thin the naturals so the image of f : [N]^n -> N^(n+1) is small.
    Small {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 2)]
        b: usize,
        #[arg(long, default_value_t = 20)]
        prefix: usize,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Whether a misses every increasing tuple from B above the cut.
    Avoid {
        #[arg(long)]
        a: String,
        #[arg(long = "b-set")]
        b_set: String,
        #[arg(long)]
        cut: u64,
    },
}

/// Mirror of the extract flags, read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub fixture: Option<String>,
    pub dsl: Option<String>,
    pub arity: Option<usize>,
    pub space: Option<String>,
    pub base: Option<String>,
    pub levels: Option<usize>,
    pub prefix: Option<usize>,
    pub engine: Option<String>,
    pub fuel: Option<FuelConfig>,
    /// Only used by randomized corpora; extraction ignores it.
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelConfig {
    pub max_materialize: Option<usize>,
    pub max_oracle_calls: Option<u64>,
    pub window: Option<usize>,
}

/// A failed command: exit code and message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn from_core(e: Error) -> Failure {
    let code = if e.is_fuel_exhausted() {
        EXIT_FUEL
    } else {
        EXIT_USAGE
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

/// Parses `args` (program name first), runs the command, writes JSON to
/// `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Fin(f) => cmd_fin(&f, out),
        Command::Fixtures => topo_ramsey::fixtures::NAMES
            .iter()
            .try_for_each(|n| writeln!(out, "{n}"))
            .map_err(usage)
            .map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn resolve_function(f: &FunctionArgs) -> Result<(TupleFunction, FunctionSource), Failure> {
    let space: Option<Space> = f
        .space
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(from_core)?;
    match (&f.fixture, &f.dsl) {
        (Some(name), None) => {
            let g = builtin(name, f.arity, space.as_ref()).map_err(from_core)?;
            Ok((g, FunctionSource::Fixture(name.clone())))
        }
        (None, Some(src)) => {
            let space = space.ok_or_else(|| usage("--dsl needs --space"))?;
            let arity = f.arity.ok_or_else(|| usage("--dsl needs --arity"))?;
            let g = compile(src, arity, &space)
                .map_err(from_core)?
                .into_function();
            Ok((g, FunctionSource::Dsl(src.clone())))
        }
        (None, None) => Err(usage("give --fixture or --dsl")),
        (Some(_), Some(_)) => Err(usage("give only one of --fixture and --dsl")),
    }
}

fn fuel(args: &FuelArgs, config: Option<&FuelConfig>) -> Result<Fuel, Failure> {
    let d = Fuel::default();
    let pick = |a: Option<usize>, c: Option<usize>, d: usize| a.or(c).unwrap_or(d);
    Fuel::new(
        pick(
            args.max_materialize,
            config.and_then(|c| c.max_materialize),
            d.max_materialize,
        ),
        args.max_oracle_calls
            .or(config.and_then(|c| c.max_oracle_calls))
            .unwrap_or(d.max_oracle_calls),
        pick(args.window, config.and_then(|c| c.window), d.window),
    )
    .map_err(from_core)
}

fn base_stream(desc: &str, fuel: &Fuel) -> Result<NatStream, Failure> {
    let desc = desc.trim();
    if desc == "naturals" {
        return Ok(NatStream::naturals(fuel));
    }
    if let Some(rest) = desc.strip_prefix("arithmetic:") {
        let (a, d) = rest
            .split_once(':')
            .ok_or_else(|| usage("expected arithmetic:START:STEP"))?;
        let a = a.parse().map_err(|_| usage(format!("bad start `{a}`")))?;
        let d = d.parse().map_err(|_| usage(format!("bad step `{d}`")))?;
        return Ok(NatStream::arithmetic(a, d, fuel));
    }
    if let Some(rest) = desc.strip_prefix("list:") {
        let items = rest
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| usage(format!("bad list element `{s}`")))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        return NatStream::from_list(items).map_err(from_core);
    }
    Err(usage(format!("unknown base stream `{desc}`")))
}

/// Runs an extraction and writes the certificate (partial on fuel
/// exhaustion).
pub fn cmd_extract(args: &ExtractArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let config: RunConfig = match &args.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    let function = FunctionArgs {
        fixture: args
            .function
            .fixture
            .clone()
            .or(if args.function.dsl.is_some() {
                None
            } else {
                config.fixture.clone()
            }),
        dsl: args
            .function
            .dsl
            .clone()
            .or(if args.function.fixture.is_some() {
                None
            } else {
                config.dsl.clone()
            }),
        arity: args.function.arity.or(config.arity),
        space: args.function.space.clone().or(config.space.clone()),
    };
    let (f, source) = resolve_function(&function)?;
    let fuel = fuel(&args.fuel, config.fuel.as_ref())?;
    let budget = Budget::new(fuel);
    let base = base_stream(
        args.base
            .as_deref()
            .or(config.base.as_deref())
            .unwrap_or("naturals"),
        &fuel,
    )?;
    let plan = Plan::new(
        args.levels.or(config.levels).unwrap_or(6),
        args.prefix.or(config.prefix).unwrap_or(32),
    );
    let engine: Engine = args
        .engine
        .as_deref()
        .or(config.engine.as_deref())
        .unwrap_or("cover")
        .parse()
        .map_err(from_core)?;
    let out_path = args.out.clone().or(config.out.clone());

    let (doc, code) = match extract_with(engine, &f, &base, plan, &budget) {
        Ok(conv) => (
            CertificateJson::from_certificate(&conv.certificate, source),
            EXIT_OK,
        ),
        Err(Error::FuelExhausted(ex)) => {
            let partial = CertificateJson {
                engine: engine.as_str().into(),
                function: source,
                arity: f.arity(),
                space: f.target().to_string(),
                stream_prefix: ex.prefix.clone(),
                limit_centers: ex.centers.iter().map(point_to_json).collect(),
                levels: Vec::<LevelJson>::new(),
                fuel_report: FuelJson {
                    oracle_calls: budget.oracle_calls(),
                    stream_fuel_spent: 0,
                    max_materialize: fuel.max_materialize,
                    max_oracle_calls: fuel.max_oracle_calls,
                    window: fuel.window,
                },
                partial: true,
            };
            (partial, EXIT_FUEL)
        }
        Err(e) => return Err(from_core(e)),
    };
    let text = doc.to_pretty();
    match out_path {
        Some(path) => {
            fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => out.write_all(text.as_bytes()).map_err(usage)?,
    }
    if code == EXIT_FUEL {
        return Err(Failure {
            code,
            message: "fuel exhausted; wrote a partial certificate".into(),
        });
    }
    Ok(code)
}

/// Verifies a certificate file; prints a JSON verdict.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let path = &args.certificate;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let doc: CertificateJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed certificate: {e}")))?;
    let cert = doc
        .to_certificate()
        .map_err(|e| usage(format!("malformed certificate: {e}")))?;
    let mut function = args.function.clone();
    if function.fixture.is_none() && function.dsl.is_none() {
        match &doc.function {
            FunctionSource::Fixture(name) => function.fixture = Some(name.clone()),
            FunctionSource::Dsl(src) => function.dsl = Some(src.clone()),
        }
    }
    function.arity = function.arity.or(Some(doc.arity));
    function.space = function.space.or(Some(doc.space.clone()));
    let (f, _) = resolve_function(&function)?;

    let (verdict, failure) = if doc.partial {
        (
            json!({ "valid": false, "failure": "partial certificate" }),
            Some("partial certificate".to_string()),
        )
    } else {
        let v = verify_certificate(&f, &cert);
        let mut report = json!({ "valid": v.is_valid(), "tuples_checked": v.tuples_checked });
        if let Some(fail) = &v.failure {
            report["failure"] = json!(fail.to_string());
            if let topo_ramsey::engine::Failure::Counterexample { tuple, level, .. } = fail {
                report["counterexample"] = json!({ "tuple": tuple, "level": level });
            }
        }
        (report, v.failure.map(|f| f.to_string()))
    };
    writeln!(out, "{verdict}").map_err(usage)?;
    match failure {
        None => Ok(EXIT_OK),
        Some(message) => Err(Failure {
            code: EXIT_INVALID,
            message,
        }),
    }
}

fn parse_json(text: &str, what: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| usage(format!("{what}: {e}")))
}

pub fn cmd_fin(cmd: &FinCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        FinCommand::Tree { set, b } => {
            let x = tuple_set_from_json(&parse_json(set, "--set")?).map_err(usage)?;
            if *b == 0 {
                return Err(usage("--b must be positive"));
            }
            let doc = match has_splitting_tree(&x, *b) {
                Some(t) => tree_to_json(&t),
                None => json!("none"),
            };
            writeln!(out, "{doc}").map_err(usage)?;
            Ok(EXIT_OK)
        }
        FinCommand::Avoid { a, b_set, cut } => {
            let a = tuple_set_from_json(&parse_json(a, "--a")?).map_err(usage)?;
            let b: Vec<u64> =
                serde_json::from_value(parse_json(b_set, "--b-set")?).map_err(usage)?;
            let ok = check_avoidance(&a, &b, *cut).map_err(from_core)?;
            writeln!(out, "{ok}").map_err(usage)?;
            Ok(EXIT_OK)
        }
        FinCommand::Small {
            function,
            b,
            prefix,
            levels,
            fuel: fuel_args,
        } => {
            let mut function = function.clone();
            let arity = function.arity.ok_or_else(|| usage("--arity is required"))?;
            function.space = function.space.or(Some(omega_power(arity + 1).to_string()));
            let (f, _) = resolve_function(&function)?;
            let fuel = fuel(fuel_args, None)?;
            let budget = Budget::new(fuel);
            let x = fin_small_extract(
                &f,
                &NatStream::naturals(&fuel),
                *b,
                Plan::new(*levels, *prefix),
                &budget,
            )
            .map_err(from_core)?;
            let mut doc = json!({
                "case": case_name(&x.case),
                "stream_prefix": x.prefix,
                "tree_free": x.tree_free,
            });
            match x.case {
                SmallCase::Column(k) => doc["column"] = json!(k),
                SmallCase::Pinned { coordinate, value } => {
                    doc["coordinate"] = json!(coordinate);
                    doc["value"] = json!(value);
                }
                _ => {}
            }
            writeln!(out, "{doc}").map_err(usage)?;
            if x.tree_free {
                Ok(EXIT_OK)
            } else {
                Err(Failure {
                    code: EXIT_INVALID,
                    message: "image contains a splitting tree".into(),
                })
            }
        }
    }
}

fn case_name(c: &SmallCase) -> &'static str {
    match c {
        SmallCase::Column(_) => "column",
        SmallCase::PartialFunction => "partial function",
        SmallCase::Pinned { .. } => "pinned",
        SmallCase::Spread => "spread",
    }
}
