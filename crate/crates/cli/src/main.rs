use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use spicy_core::field::parse_rational;
use spicy_core::format::{self, Instance};
use spicy_core::hopf::{BialgebraInstance, Element};
use spicy_core::models::{self, ModelKind, ModelSpec};
use spicy_core::{BigRational, Error, FieldSpec};

mod report;

#[derive(Parser, Debug)]
#[command(name = "spicy", version, about = "Exact checks for filtered graded Hopf algebras with a group action")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Append wall-clock metadata to the human-readable report.
    #[arg(long, global = true)]
    report_meta: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a model and write it as an instance document.
    Model {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the bialgebra axioms, coproduct shape and filtration bounds.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank check for the ordered products of primitive vectors.
    Pbw {
        #[command(flatten)]
        input: InputArgs,
        /// Primitive vectors separated by `;`; defaults to the generators of
        /// the lowest positive degree.
        #[arg(long, value_delimiter = ';')]
        vectors: Vec<String>,
        /// Use the first N vectors.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a vector with an independent cyclic orbit.
    FindHealthy {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 20)]
        orbit_bound: usize,
        /// Candidate vectors separated by `;`.
        #[arg(long, value_delimiter = ';')]
        vectors: Vec<String>,
        /// Candidate group words separated by `;`.
        #[arg(long, value_delimiter = ';')]
        words: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a primitive sequence from vectors of one degree.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ';', required = true)]
        vectors: Vec<String>,
        /// Slope `c` with `|v_i| <= c·i`.
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Healthy search, extraction and a growth certificate up to `--nmax`.
    #[command(group(ArgGroup::new("source").required(true).args(["in_path", "kind"])))]
    Certify {
        #[arg(long = "in", value_name = "PATH")]
        in_path: Option<PathBuf>,
        #[command(flatten)]
        model: OptionalModelArgs,
        #[arg(long)]
        nmax: usize,
        /// Leave the subset lists out of the certificate.
        #[arg(long)]
        terse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distinct-part and odd-part partition counts with the Euler check.
    Partitions {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long = "in", value_name = "PATH")]
    in_path: PathBuf,
    /// Reinterpret the document over another field (`Q` or `Fp:<p>`).
    #[arg(long)]
    field: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Exterior,
    Polynomial,
    Mixed,
    Telescope,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    kind: Kind,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Args, Debug)]
struct OptionalModelArgs {
    #[arg(long, conflicts_with = "in_path")]
    kind: Option<Kind>,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Args, Debug)]
struct ModelParams {
    /// Number of generators (for `mixed`: of each parity).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Generator degree.
    #[arg(long)]
    m: Option<u32>,
    /// Value slope `c`.
    #[arg(long)]
    c: Option<String>,
    /// Length of the shift generator.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value_t = 20)]
    k_max: u32,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_value: Option<String>,
}

/// A failure that maps to exit code 2 with a diagnostic code.
struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Outcome {
    machine: String,
    human: String,
    passed: bool,
}

fn read_instance(input: &InputArgs) -> Result<Instance, Failure> {
    let text = fs::read_to_string(&input.in_path).map_err(|e| {
        Error::Schema(format!("cannot read {}: {e}", input.in_path.display()))
    })?;
    let field = input.field.as_deref().map(str::parse).transpose()?;
    Ok(format::parse_instance(&text, field)?)
}

fn require_bialgebra(instance: &Instance) -> Result<&BialgebraInstance, Failure> {
    instance.bialgebra().ok_or_else(|| {
        Failure(Error::InvalidModel(
            "this command needs a bialgebra document, not a module".into(),
        ))
    })
}

fn parse_vectors(instance: &Instance, texts: &[String]) -> Result<Vec<Element>, Failure> {
    texts
        .iter()
        .map(|t| format::parse_element(instance.module(), t).map_err(Failure))
        .collect()
}

fn model_spec(kind: Kind, p: &ModelParams) -> Result<ModelSpec, Failure> {
    let field: FieldSpec = p.field.parse()?;
    let one = || BigRational::from_integer(1.into());
    let c = p.c.as_deref().map(parse_rational).transpose()?.unwrap_or_else(one);
    let lambda = p.lambda.as_deref().map(parse_rational).transpose()?.unwrap_or_else(one);
    let mut spec = match kind {
        Kind::Exterior => {
            let mut spec = ModelSpec::exterior(p.n, field);
            spec.kind = ModelKind::Exterior {
                n: p.n,
                m: p.m.unwrap_or(1),
                c,
                lambda,
            };
            spec
        }
        Kind::Polynomial => {
            let m = p.m.unwrap_or(2);
            let mut spec = ModelSpec::polynomial(p.n, m, field);
            spec.kind = ModelKind::Polynomial { n: p.n, m, c, lambda };
            spec
        }
        Kind::Mixed => {
            let mut spec = ModelSpec::mixed(p.n, p.n, field);
            spec.kind = ModelKind::Mixed {
                odd: p.n,
                even: p.n,
                c,
                lambda,
            };
            spec
        }
        Kind::Telescope => ModelSpec::telescope(p.k_max, field),
    };
    if let Some(d) = p.max_degree {
        spec.window.max_degree = d;
    }
    if let Some(r) = &p.max_value {
        spec.window.max_value = parse_rational(r)?;
    }
    Ok(spec)
}

fn build_instance(spec: &ModelSpec) -> Result<Instance, Failure> {
    Ok(match models::build_model(spec)? {
        models::BuiltModel::Bialgebra(inst, action) => Instance {
            structure: format::Structured::Bialgebra(inst),
            action,
        },
        models::BuiltModel::Module(module, action) => Instance {
            structure: format::Structured::Module(module),
            action,
        },
    })
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text
}

fn run(command: &Command) -> CmdResult {
    match command {
        Command::Model { model, .. } => {
            let instance = build_instance(&model_spec(model.kind, &model.params)?)?;
            let len = instance.module().len();
            let human = format!(
                "built {len} basis element{} over {}\n",
                if len == 1 { "" } else { "s" },
                instance.module().field()
            );
            Ok(Outcome {
                machine: format::write_instance(&instance),
                human,
                passed: true,
            })
        }
        Command::Verify { input, .. } => {
            let instance = read_instance(input)?;
            Ok(report::verify(&instance))
        }
        Command::Pbw {
            input,
            vectors,
            nmax,
            ..
        } => {
            let instance = read_instance(input)?;
            let inst = require_bialgebra(&instance)?;
            let vectors = if vectors.is_empty() {
                report::default_primitives(inst)?
            } else {
                parse_vectors(&instance, vectors)?
            };
            let n = nmax.unwrap_or(vectors.len());
            let pbw = inst.pbw_independence_check(&vectors, n)?;
            Ok(report::pbw(&pbw))
        }
        Command::FindHealthy {
            input,
            orbit_bound,
            vectors,
            words,
            ..
        } => {
            let instance = read_instance(input)?;
            report::find_healthy(&instance, vectors, words, *orbit_bound)
        }
        Command::Extract {
            input, vectors, c, ..
        } => {
            let instance = read_instance(input)?;
            let inst = require_bialgebra(&instance)?;
            let vectors = parse_vectors(&instance, vectors)?;
            let c = parse_rational(c)?;
            let extraction = spicy_core::growth::extract_primitive_sequence(inst, &vectors, &c)?;
            Ok(report::extraction(inst, &extraction))
        }
        Command::Certify {
            in_path,
            model,
            nmax,
            terse,
            ..
        } => {
            let instance = match (in_path, model.kind) {
                (Some(path), _) => read_instance(&InputArgs {
                    in_path: path.clone(),
                    field: None,
                })?,
                (None, Some(kind)) => build_instance(&model_spec(kind, &model.params)?)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            let inst = require_bialgebra(&instance)?;
            let outcome = spicy_core::growth::pipeline_certify(inst, &instance.action, *nmax)?;
            Ok(report::certificate(inst, &outcome, *terse))
        }
        Command::Partitions { nmax, .. } => Ok(report::partitions(*nmax)),
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Model { out, .. }
        | Command::Verify { out, .. }
        | Command::Pbw { out, .. }
        | Command::FindHealthy { out, .. }
        | Command::Extract { out, .. }
        | Command::Certify { out, .. }
        | Command::Partitions { out, .. } => out.as_ref(),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("SPICY_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Schema(format!("SPICY_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Schema(format!("thread pool: {e}")))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = configure_threads().and_then(|()| run(&cli.command));
    let outcome = match result {
        Ok(o) => o,
        Err(Failure(e)) => {
            eprintln!("error[{}]: {e}", e.kind().code());
            return ExitCode::from(2);
        }
    };

    match out_path(&cli.command) {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.machine) {
                eprintln!("error[{}]: cannot write {}: {e}", spicy_core::ErrorKind::Input.code(), path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.machine),
    }
    eprint!("{}", outcome.human);
    if cli.report_meta {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        eprintln!(
            "meta: finished at unix time {now}, elapsed {:.3}s",
            started.elapsed().as_secs_f64()
        );
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
