use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use qtri_core::adversary::{
    adversary_value, barrier_check, or_star, proof_chain, AdversaryMatrix, FunctionFile,
    MatrixFile, PartialBooleanFunction,
};
use qtri_core::graph::{generate, Graph, GraphKind};
use qtri_core::lab::{
    bench_csv, disjointness_prob_exact, disjointness_sweep, fit_scaling, lemma4_failure_rate,
    mean_costs, optimize_params, run_batch, Algorithm,
};
use qtri_core::oracle::{default_budget, QueryOracle};
use qtri_core::solver::{solve, Params};

#[derive(Parser)]
#[command(
    name = "qtri",
    version,
    about = "Query-cost laboratory for quantum triangle detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver on one instance and write its run report.
    Solve(SolveArgs),
    /// Run seeded batches and write one CSV row per run.
    Bench(BenchArgs),
    /// Grid-search the cost exponent over (ε, ε′, δ).
    OptimizeParams(OptimizeArgs),
    /// Numerical checks of the disjointness approximation and the candidate-set bound.
    LemmaChecks(LemmaArgs),
    /// Adversary ratio and certificate barrier for a partial Boolean function.
    Adversary(AdversaryArgs),
    /// Write a generated instance in the edge-list format.
    GenGraph(GenArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 3.0 / 7.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0 / 7.0)]
    epsilon_prime: f64,
    #[arg(long, default_value_t = 1.0 / 7.0)]
    delta: f64,
    #[arg(long, default_value_t = 2.0)]
    c_safe: f64,
    #[arg(long, default_value_t = 14.0)]
    c0: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        let p = Params {
            epsilon: self.epsilon,
            epsilon_prime: self.epsilon_prime,
            delta: self.delta,
            c_safe: self.c_safe,
            c0: self.c0,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args)]
struct GraphSource {
    /// Read the instance from an edge-list file instead of generating one.
    #[arg(long, conflicts_with_all = ["gen", "n"])]
    graph: Option<PathBuf>,
    /// Generator: erdos_renyi, planted_triangle, complete, bipartite_blowup, triangle_free_dense.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    /// Edge probability for the generators that take one.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query budget; defaults to 10·n³.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    gen: String,
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<u32>,
    #[arg(long, default_value_t = 30)]
    trials: u64,
    #[arg(long, default_value = "solver")]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the log-log fit of mean cost against n as JSON.
    #[arg(long)]
    fit: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AlgorithmArg {
    Solver,
    Baseline,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Grid resolution r; each exponent ranges over {1/r, …, (r−1)/r}.
    #[arg(long, default_value_t = 210)]
    grid: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LemmaArgs {
    /// Instance family for the candidate-set failure rate.
    #[arg(long, default_value = "erdos_renyi")]
    gen: String,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 64)]
    n: u32,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Function file `{n, domain, values}`.
    #[arg(long, required_unless_present = "or_star")]
    function: Option<PathBuf>,
    /// Adversary matrix, nested rows or flat row-major.
    #[arg(long, required_unless_present = "or_star")]
    gamma: Option<PathBuf>,
    /// Use OR_n on inputs of weight ≤ 1 with the uniform star matrix.
    #[arg(long, conflicts_with_all = ["function", "gamma"])]
    or_star: Option<usize>,
    /// Error parameter for the query lower bound.
    #[arg(long, default_value_t = 0.0)]
    error: f64,
    /// Include the step-by-step check of the barrier argument.
    #[arg(long)]
    chain: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn kind(name: &str, p: Option<f64>) -> Result<GraphKind> {
    GraphKind::parse(name, p).map_err(anyhow::Error::msg)
}

fn load_graph(src: &GraphSource, seed: u64) -> Result<Graph> {
    if let Some(path) = &src.graph {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Graph::parse_text(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let (Some(gen), Some(n)) = (&src.gen, src.n) else {
        bail!("give either --graph or both --gen and --n");
    };
    Ok(generate(kind(gen, src.p)?, n, seed)?)
}

/// Runs the command; `Ok(false)` means a checked property failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => {
            let params = a.params.params()?;
            let g = load_graph(&a.source, a.seed)?;
            let budget = a.budget.unwrap_or_else(|| default_budget(g.n()));
            let mut oracle = QueryOracle::with_budget(&g, Some(budget));
            let report = solve(&mut oracle, &params, a.seed)?;
            // A reported triangle must be a triangle of the input.
            let sound = report
                .outcome
                .triangle()
                .is_none_or(|t| t.pairs().iter().all(|&p| g.has_edge(p)));
            emit_json(a.out.as_deref(), &report)?;
            if !sound {
                eprintln!("error: reported triangle is not a triangle of the graph");
            }
            Ok(sound)
        }
        Command::Bench(a) => {
            let params = a.params.params()?;
            let k = kind(&a.gen, a.p)?;
            let algorithm = match a.algorithm {
                AlgorithmArg::Solver => Algorithm::Solver,
                AlgorithmArg::Baseline => Algorithm::Baseline,
            };
            let rows = run_batch(algorithm, k, &a.ns, a.trials, &params, a.seed)?;
            emit(a.out.as_deref(), &bench_csv(&rows))?;
            if let Some(path) = &a.fit {
                let fit = fit_scaling(&mean_costs(&rows))?;
                emit_json(Some(path), &fit)?;
            }
            let sound = matches!(
                k,
                GraphKind::ErdosRenyi { .. }
                    | GraphKind::PlantedTriangle { .. }
                    | GraphKind::Complete
            ) || rows.iter().all(|r| !r.found);
            if !sound {
                eprintln!("error: a triangle was reported on a triangle-free family");
            }
            Ok(sound)
        }
        Command::OptimizeParams(a) => {
            if a.grid < 2 {
                bail!("--grid must be at least 2");
            }
            let opt = optimize_params(a.grid);
            let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
            emit_json(
                a.out.as_deref(),
                &json!({
                    "grid": a.grid,
                    "params": [f(opt.epsilon), f(opt.epsilon_prime), f(opt.delta)],
                    "params_exact": [opt.epsilon.to_string(), opt.epsilon_prime.to_string(), opt.delta.to_string()],
                    "exponent": f(opt.dominant),
                    "exponent_exact": opt.dominant.to_string(),
                    "minimizers": opt.minimizers,
                }),
            )?;
            Ok(true)
        }
        Command::LemmaChecks(a) => {
            let params = a.params.params()?;
            let points = disjointness_sweep();
            let violations: Vec<_> = points.iter().filter(|p| !p.holds).collect();
            let worst = points
                .iter()
                .filter(|p| p.tolerance > 0.0)
                .max_by(|x, y| (x.error / x.tolerance).total_cmp(&(y.error / y.tolerance)))
                .cloned();
            let spot = disjointness_prob_exact(4, 1, 1);
            let rate =
                lemma4_failure_rate(kind(&a.gen, Some(a.p))?, a.n, &params, a.trials, a.seed)?;
            let ok = violations.is_empty() && spot == 0.75;
            emit_json(
                a.out.as_deref(),
                &json!({
                    "disjointness": {
                        "points": points.len(),
                        "violations": violations.len(),
                        "worst": worst,
                        "exact_4_1_1": spot,
                        "holds": ok,
                    },
                    "candidate_set": {
                        "family": kind(&a.gen, Some(a.p))?.to_string(),
                        "n": a.n,
                        "trials": a.trials,
                        "threshold": params.gprime_threshold(a.n),
                        "failure_rate": rate,
                    },
                }),
            )?;
            if !ok {
                eprintln!(
                    "error: {} of {} disjointness points exceed the tolerance",
                    violations.len(),
                    points.len()
                );
            }
            Ok(ok)
        }
        Command::Adversary(a) => {
            let (f, gamma) = match a.or_star {
                Some(n) => {
                    if n == 0 || n > 4095 {
                        bail!("--or-star needs 1 ≤ n ≤ 4095");
                    }
                    or_star(n)
                }
                None => {
                    let (fp, gp) = (
                        a.function.as_deref().expect("required"),
                        a.gamma.as_deref().expect("required"),
                    );
                    let f = PartialBooleanFunction::from_file(&read_json::<FunctionFile>(fp)?)?;
                    let g = AdversaryMatrix::from_file(&read_json::<MatrixFile>(gp)?)?;
                    (f, g)
                }
            };
            let value = adversary_value(&f, &gamma, a.error)?;
            let barrier = barrier_check(&f, &gamma)?;
            let chain = if a.chain {
                Some(proof_chain(&f, &gamma, 1e-9)?)
            } else {
                None
            };
            let ok = barrier.holds && chain.as_ref().is_none_or(|c| c.all_hold());
            emit_json(
                a.out.as_deref(),
                &json!({
                    "n": f.n(),
                    "domain_size": f.len(),
                    "k": barrier.k,
                    "lambda": value.lambda,
                    "lambda_i": value.lambda_i,
                    "raw_ratio": value.raw_ratio,
                    "qqc_lower_bound": value.qqc_lower_bound,
                    "barrier": barrier.barrier,
                    "slack": barrier.slack,
                    "holds": barrier.holds,
                    "proof_chain": chain,
                }),
            )?;
            if !ok {
                eprintln!("error: the certificate barrier check failed");
            }
            Ok(ok)
        }
        Command::GenGraph(a) => {
            let g = generate(kind(&a.kind, a.p)?, a.n, a.seed)?;
            emit(a.out.as_deref(), &g.to_text())?;
            Ok(true)
        }
    }
}

fn init_workers() -> Result<()> {
    if let Ok(v) = std::env::var("QTRI_WORKERS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("QTRI_WORKERS=`{v}` is not a count"))?;
        if n == 0 {
            bail!("QTRI_WORKERS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_workers().and_then(|()| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_standard_parameters() {
        let cli = Cli::try_parse_from(["qtri", "solve", "--n", "16", "--gen", "complete"]).unwrap();
        let Command::Solve(a) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(a.params.params().unwrap(), Params::default());
        assert_eq!(a.seed, 0);
    }

    #[test]
    fn graph_file_conflicts_with_generator() {
        assert!(
            Cli::try_parse_from(["qtri", "solve", "--graph", "g.txt", "--gen", "complete"])
                .is_err()
        );
        assert!(Cli::try_parse_from([
            "qtri",
            "adversary",
            "--or-star",
            "3",
            "--function",
            "f.json"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["qtri", "adversary"]).is_err());
    }

    #[test]
    fn kinds_need_their_probability() {
        assert!(kind("erdos_renyi", None).is_err());
        assert_eq!(
            kind("er", Some(0.5)).unwrap(),
            GraphKind::ErdosRenyi { p: 0.5 }
        );
        assert_eq!(
            kind("c5_blowup", None).unwrap(),
            GraphKind::TriangleFreeDense
        );
    }

    #[test]
    fn bench_sizes_are_comma_separated() {
        let cli = Cli::try_parse_from(["qtri", "bench", "--gen", "complete", "--ns", "32,64,128"])
            .unwrap();
        let Command::Bench(a) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(a.ns, vec![32, 64, 128]);
        assert_eq!(a.trials, 30);
    }
}
