use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nfold::coloring::{graph_to_typegraph, solve_mscol, solve_typegraph, TypeGraph};
use nfold::graver::finest_partition_bound;
use nfold::model::Status;
use nfold::oracle::{oracle_graver, oracle_ip_solve, oracle_min_sum_coloring, oracle_schedule};
use nfold::scheduling::{solve_schedule, SchedulingFile, Variant};
use nfold::{
    column_independent_partition, graver_basis, lemma2_bound, nfold_graver_bound,
    nfold_partition_params, steinitz_reorder, Error, IntMatrix, NFoldInstance, Solver,
    SolverConfig,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

const AFTER_HELP: &str = "\
All row, column, vertex, type and machine indices are 0-based.

Exit codes:
  0  success, or an optimal solution was found
  1  internal consistency failure
  2  the instance is infeasible
  3  invalid input
  4  arithmetic overflow, or the instance is too large to process";

/// Exact N-fold integer programming, Graver bases, and the scheduling and
/// sum-coloring encoders built on them.
#[derive(Parser)]
#[command(name = "nfold", version, propagate_version = true, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an N-fold instance to optimality.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Include every augmentation step in the output.
        #[arg(long)]
        log_steps: bool,
    },
    /// Graver basis of a matrix given as a JSON array of rows.
    Graver {
        #[arg(long)]
        matrix: PathBuf,
        /// Keep only elements with l1-norm at most this value.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Finest column-independent row partition of a matrix, or the
    /// partition parameters of an N-fold instance.
    Partition(Source),
    /// Graver l1-norm bounds from explicit parameters or from an instance.
    Bounds(BoundsArgs),
    /// Reorder zero-sum vectors so that every prefix sum stays small.
    Steinitz {
        /// JSON array of equal-length integer vectors.
        #[arg(long)]
        vectors: PathBuf,
        /// Infinity-norm bound of the vectors; defaults to the largest entry.
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Optimal high-multiplicity schedule.
    Schedule {
        /// One of cmax, cmin, cmax-cap, cmax-release, cmax-deadline, rcmax, qswc.
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Minimum sum coloring of a graph or a type graph.
    Color(ColorArgs),
    /// Exhaustive reference computations for small inputs.
    Oracle {
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[arg(long)]
        instance: PathBuf,
        /// Scheduling variant, required with `--mode schedule`.
        #[arg(long)]
        variant: Option<Variant>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON array of matrix rows.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// N-fold instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Largest part size p of a row partition.
    #[arg(long, requires = "delta")]
    p: Option<u64>,
    /// Largest absolute matrix entry.
    #[arg(long)]
    delta: Option<u64>,
    /// Number of parts of the top-block partition.
    #[arg(long, requires_all = ["p_a", "p_b", "delta"])]
    s_a: Option<u64>,
    /// Largest part of the top-block partition.
    #[arg(long, requires = "s_a")]
    p_a: Option<u64>,
    /// Largest part over the local-block partitions.
    #[arg(long, requires = "s_a")]
    p_b: Option<u64>,
    /// Read the parameters from an N-fold instance instead.
    #[arg(long, conflicts_with_all = ["p", "delta", "s_a", "p_a", "p_b"])]
    instance: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ColorArgs {
    /// Adjacency lists as a JSON array of arrays.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Type graph: {"types":[{"weight":..,"kind":"clique"|"independent"}],"edges":[[i,j],..]}.
    #[arg(long)]
    typegraph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Ip,
    Graver,
    Schedule,
    Color,
}

/// A failure together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_) | Error::Invalid(_) | Error::NotApplicable(_) => 3,
            Error::Overflow(_) | Error::Intractable(_) => 4,
            Error::Internal(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let detail = e.to_string();
        let detail = detail
            .rsplit_once(" at line ")
            .map_or(detail.as_str(), |(head, _)| head);
        invalid(format!(
            "{}:{}:{}: {detail}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Output document plus whether it reports an infeasible instance.
type Outcome = (String, bool);

/// Compact JSON with fields in declaration order.
fn render(v: impl Serialize) -> String {
    serde_json::to_string(&v).expect("output types serialize to JSON")
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Solve {
            instance,
            log_steps,
        } => {
            let inst: NFoldInstance = read(&instance)?;
            let solver = Solver::new(SolverConfig {
                record_steps: log_steps,
                ..SolverConfig::default()
            });
            let solution = solver.solve(&inst)?;
            if log_steps {
                eprintln!("{} augmentation steps", solution.steps.len());
            }
            let infeasible = solution.status == Status::Infeasible;
            Ok((render(solution), infeasible))
        }
        Command::Graver { matrix, cap } => {
            let m: IntMatrix = read(&matrix)?;
            let basis = graver_basis(&m, cap)?;
            Ok((render(graver_document(&m, &basis)), false))
        }
        Command::Partition(Source {
            matrix: Some(path), ..
        }) => {
            let m: IntMatrix = read(&path)?;
            Ok((render(column_independent_partition(&m)), false))
        }
        Command::Partition(Source {
            instance: Some(path),
            ..
        }) => {
            let inst: NFoldInstance = read(&path)?;
            Ok((render(nfold_partition_params(&inst)), false))
        }
        Command::Partition(_) => unreachable!("clap requires one source"),
        Command::Bounds(args) => bounds(args),
        Command::Steinitz { vectors, delta } => {
            let vs: Vec<Vec<i64>> = read(&vectors)?;
            let delta = delta.unwrap_or_else(|| {
                vs.iter()
                    .flatten()
                    .map(|x| x.unsigned_abs())
                    .max()
                    .unwrap_or(0)
            });
            Ok((render(steinitz_reorder(&vs, delta)?), false))
        }
        Command::Schedule { variant, instance } => {
            let file: SchedulingFile = read(&instance)?;
            let schedule = solve_schedule(&file, variant)?;
            let infeasible = schedule.status == Status::Infeasible;
            Ok((render(schedule), infeasible))
        }
        Command::Color(ColorArgs {
            graph: Some(path), ..
        }) => {
            let adjacency: Vec<Vec<usize>> = read(&path)?;
            Ok((render(solve_mscol(&adjacency)?), false))
        }
        Command::Color(ColorArgs {
            typegraph: Some(path),
            ..
        }) => {
            let tg: TypeGraph = read(&path)?;
            Ok((render(solve_typegraph(&tg)?), false))
        }
        Command::Color(_) => unreachable!("clap requires one input"),
        Command::Oracle {
            mode,
            instance,
            variant,
        } => oracle(mode, &instance, variant),
    }
}

fn graver_document(m: &IntMatrix, basis: &nfold::GraverSet) -> Value {
    json!({
        "elements": basis.elements,
        "count": basis.len(),
        "max_norm": basis.max_norm(),
        "bound": finest_partition_bound(m),
    })
}

fn bounds(args: BoundsArgs) -> Result<Outcome, Failure> {
    if let Some(path) = args.instance {
        let inst: NFoldInstance = read(&path)?;
        let params = nfold_partition_params(&inst);
        let delta = inst.delta().unsigned_abs();
        let doc = json!({
            "p_a": params.p_a,
            "s_a": params.s_a,
            "p_b": params.p_b,
            "delta": delta,
            "lemma2_b": lemma2_bound(params.p_b as u64, delta),
            "lemma4": nfold_graver_bound(params.s_a as u64, params.p_a as u64, params.p_b as u64, delta),
        });
        return Ok((render(doc), false));
    }
    let mut doc = serde_json::Map::new();
    if let (Some(p), Some(delta)) = (args.p, args.delta) {
        doc.insert("lemma2".into(), json!(lemma2_bound(p, delta)));
    }
    if let (Some(s_a), Some(p_a), Some(p_b), Some(delta)) =
        (args.s_a, args.p_a, args.p_b, args.delta)
    {
        doc.insert(
            "lemma4".into(),
            json!(nfold_graver_bound(s_a, p_a, p_b, delta)),
        );
    }
    if doc.is_empty() {
        return Err(invalid(
            "give --p and --delta, or --s-a, --p-a, --p-b and --delta, or --instance",
        ));
    }
    Ok((render(Value::Object(doc)), false))
}

fn oracle(mode: OracleMode, path: &Path, variant: Option<Variant>) -> Result<Outcome, Failure> {
    match mode {
        OracleMode::Ip => {
            let inst: NFoldInstance = read(path)?;
            let solution = oracle_ip_solve(&inst)?;
            let infeasible = solution.status == Status::Infeasible;
            Ok((render(solution), infeasible))
        }
        OracleMode::Graver => {
            let m: IntMatrix = read(path)?;
            let basis = oracle_graver(&m)?;
            Ok((render(graver_document(&m, &basis)), false))
        }
        OracleMode::Schedule => {
            let variant = variant.ok_or_else(|| invalid("--mode schedule needs --variant"))?;
            let file: SchedulingFile = read(path)?;
            let value = oracle_schedule(&file, variant)?;
            let doc = match value {
                Some(v) => {
                    json!({ "status": Status::Optimal, "variant": variant, "objective": v.to_string() })
                }
                None => json!({ "status": Status::Infeasible, "variant": variant }),
            };
            Ok((render(doc), value.is_none()))
        }
        OracleMode::Color => {
            let adjacency: Vec<Vec<usize>> = read(path)?;
            graph_to_typegraph(&adjacency)?;
            let sum = oracle_min_sum_coloring(&adjacency, &[])?;
            Ok((
                render(json!({ "status": Status::Optimal, "sum": sum })),
                false,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share the invalid-input code; help and version succeed
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((doc, infeasible)) => {
            println!("{doc}");
            ExitCode::from(if infeasible { 2 } else { 0 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
