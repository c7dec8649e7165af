use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hfp_core::circulant::{self, CirculantError};
use hfp_core::codes;
use hfp_core::hadamard::{self, BinaryMatrix};
use hfp_core::propelinear::PropelinearStructure;
use hfp_core::search::{self, Budget, Prune, SearchError, SearchSpec};
use hfp_core::{BitVector, RingElement};

/// Exit codes: 0 success / positive verdict, 1 negative verdict,
/// 2 invalid input, 3 search budget exceeded, 4 internal consistency failure.
#[derive(Parser, Debug)]
#[command(name = "hfp", version, about = "Circulant Hadamard matrices and HFP codes")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PruneArg {
    None,
    Weight,
    Turyn,
}

impl From<PruneArg> for Prune {
    fn from(p: PruneArg) -> Prune {
        match p {
            PruneArg::None => Prune::None,
            PruneArg::Weight => Prune::Weight,
            PruneArg::Turyn => Prune::WeightAndTuryn,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze the circulant code generated by a first row such as 1000.
    Analyze { generator: String },

    /// Exhaustive search for circulant Hadamard first rows of one order.
    Search {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = PruneArg::None)]
        prune: PruneArg,
        #[arg(long, env = "HFP_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Largest number of candidates, as a power of two.
        #[arg(long, env = "HFP_BUDGET_LOG2")]
        budget_log2: Option<u32>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, requires = "checkpoint")]
        resume: bool,
    },

    /// Check a matrix file for the Hadamard and circulant properties.
    VerifyMatrix {
        path: PathBuf,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        binarize: bool,
    },

    /// Check a JSON propelinear structure file.
    VerifyStructure { path: PathBuf },

    /// Print the codewords of a standard Hadamard code, one per line.
    Fixtures {
        #[command(subcommand)]
        kind: Fixture,
    },
}

#[derive(Subcommand, Debug)]
enum Fixture {
    Sylvester { s: u32 },
    Paley { q: u64 },
    Circulant4,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<CirculantError> for Failure {
    fn from(e: CirculantError) -> Self {
        let code = match e {
            CirculantError::Inconsistent(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::BudgetExceeded { .. } => 3,
            SearchError::Inconsistent(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn emit(format: Format, report: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("JSON values serialize")),
        Format::Text => {
            if let Value::Object(map) = report {
                for (key, value) in map {
                    println!("{key}: {}", text_value(value));
                }
            } else {
                println!("{}", text_value(report));
            }
        }
    }
}

fn analyze(format: Format, generator: &str) -> Result<u8, Failure> {
    let g: RingElement = generator.parse().map_err(Failure::input)?;
    let analysis = circulant::full_analysis(&g)?;
    emit(format, &serde_json::to_value(&analysis).expect("analysis serializes"));
    Ok(if analysis.is_hadamard { 0 } else { 1 })
}

fn run_search(
    format: Format,
    order: usize,
    prune: Prune,
    jobs: usize,
    budget_log2: Option<u32>,
    checkpoint: Option<PathBuf>,
    resume: bool,
) -> Result<u8, Failure> {
    let spec = SearchSpec::new(order, prune);
    let budget = budget_log2.map_or(Budget::default_for(prune), |max_log2| Budget { max_log2 });
    let result = match checkpoint {
        Some(path) => search::run_checkpointed(&spec, jobs, budget, &path, resume)?,
        None if jobs > 1 => search::run_parallel(&spec, jobs, budget)?,
        None => search::run_search(&spec, budget)?,
    };
    emit(format, &serde_json::to_value(&result).expect("result serializes"));
    Ok(0)
}

fn verify_matrix(format: Format, path: &PathBuf, normalize: bool, binarize: bool) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let file = hadamard::parse_matrix(&text).map_err(Failure::input)?;
    let signs = file.signs();
    let is_hadamard = hadamard::is_hadamard(&signs);
    let rows = |b: &BinaryMatrix| -> Vec<String> { b.rows().iter().map(BitVector::to_string).collect() };
    let mut report = json!({
        "order": signs.order(),
        "hadamard": is_hadamard,
        "circulant": hadamard::binarize(&signs).is_circulant(),
    });
    if normalize {
        report["normalized"] = match hadamard::normalize(&signs) {
            Ok(n) => json!(hadamard::format_signs(&n).lines().skip(1).collect::<Vec<_>>()),
            Err(_) => Value::Null,
        };
    }
    if binarize {
        report["binarized"] = json!(rows(&hadamard::binarize(&signs)));
    }
    emit(format, &report);
    Ok(if is_hadamard { 0 } else { 1 })
}

fn verify_structure(format: Format, path: &PathBuf) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let s = PropelinearStructure::from_json(&text).map_err(Failure::input)?;
    let propelinear = s.verify_propelinear();
    let mut report = json!({
        "length": s.length(),
        "size": s.code().size(),
        "propelinear": propelinear,
        "hadamard_code": codes::is_hadamard_code(s.code()),
        "full": Value::Null,
        "group_type": Value::Null,
    });
    if propelinear {
        report["full"] = json!(s.verify_full().map_err(Failure::input)?);
        report["group_type"] = json!(s.group_type().map_err(Failure::input)?.label());
    }
    emit(format, &report);
    Ok(if propelinear { 0 } else { 1 })
}

fn fixtures(format: Format, kind: &Fixture) -> Result<u8, Failure> {
    let code = match kind {
        Fixture::Sylvester { s } => hadamard::sylvester_code(*s).map_err(Failure::input)?,
        Fixture::Paley { q } => hadamard::paley_code(*q).map_err(Failure::input)?,
        Fixture::Circulant4 => {
            let g: RingElement = "1000".parse().expect("literal generator");
            circulant::circulant_code(&g)
        }
    };
    let words: Vec<String> = code.words().iter().map(BitVector::to_string).collect();
    match format {
        Format::Text => words.iter().for_each(|w| println!("{w}")),
        Format::Json => emit(format, &json!(words)),
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze { generator } => analyze(cli.format, generator),
        Command::Search {
            order,
            prune,
            jobs,
            budget_log2,
            checkpoint,
            resume,
        } => run_search(
            cli.format,
            *order,
            (*prune).into(),
            *jobs,
            *budget_log2,
            checkpoint.clone(),
            *resume,
        ),
        Command::VerifyMatrix {
            path,
            normalize,
            binarize,
        } => verify_matrix(cli.format, path, *normalize, *binarize),
        Command::VerifyStructure { path } => verify_structure(cli.format, path),
        Command::Fixtures { kind } => fixtures(cli.format, kind),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("hfp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
