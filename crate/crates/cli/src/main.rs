//! `motivate`: command-line front end for the motivating-subgraph solvers.
//!
//! Exit codes: 0 yes/success, 1 no/none, 2 usage or format error, 3 budget
//! exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use motivate::agent::{enumerate_traces, is_motivating, TraceOutcome};
use motivate::dot::export_dot;
use motivate::generate::{random_instance, RandomSpec};
use motivate::linkage::{solve_linkage_with_budget, LinkageInstance, LinkageJson, DEFAULT_CELL_BUDGET};
use motivate::oracle::{brute_force_sms, DEFAULT_SUBGRAPH_CAP};
use motivate::path::{solve_motivating_path, PathResult};
use motivate::reduction::{subset_sum_to_sms, SubsetSumInstance};
use motivate::sms::{solve_instance, SmsOptions, SmsSolution, DEFAULT_BUDGET};
use motivate::{prune, EdgeId, Error, InstanceJson, PlanningInstance, Rational};

#[derive(Parser)]
#[command(name = "motivate", version, about = "Motivating subgraphs for present-biased agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance file is well formed and acyclic.
    Validate { file: PathBuf },
    /// Report whether the agent reaches the target in the full graph.
    Simulate {
        file: PathBuf,
        /// Also list every walk the agent may take.
        #[arg(long)]
        all_traces: bool,
        /// Maximum number of traces to enumerate.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Print the least reward that makes the full graph motivating.
    MinReward { file: PathBuf },
    /// Find a shortest motivating path.
    Path { file: PathBuf },
    /// Find a motivating subgraph with at most k branching vertices.
    Solve(SolveArgs),
    /// Same as solve, by exhaustive enumeration of subgraphs.
    Oracle(SolveArgs),
    /// Solve a motivating linkage instance given as JSON.
    #[command(hide = true)]
    Linkage {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Render an instance as Graphviz DOT.
    ExportDot {
        file: PathBuf,
        /// Solution JSON (as printed by solve) whose edges are drawn thick.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Maximum number of branching vertices.
    #[arg(short = 'k')]
    k: usize,
    /// Step budget; defaults to the solver's own limit.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Write the chosen subgraph as instance JSON.
    #[arg(long)]
    emit_subgraph: Option<PathBuf>,
    /// Write the input graph as DOT with the chosen edges highlighted.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Worker threads (solve only; the oracle is sequential).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Instance from a Subset-Sum instance; motivating with one branching
    /// vertex iff some subset hits the target.
    SubsetSum {
        /// Comma-separated positive integers.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long)]
        target: u64,
        /// Salience factor, greater than 1.
        #[arg(long)]
        b: Rational,
        /// Slack in the weights; chosen automatically when omitted.
        #[arg(long)]
        epsilon: Option<Rational>,
    },
    /// Random pruned DAG instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        max_w: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Why a command did not succeed, mapped to an exit code.
enum Failure {
    No,
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::InstanceTooLarge(_) => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::No) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Simulate {
            file,
            all_traces,
            budget,
        } => simulate(&file, all_traces, budget),
        Command::MinReward { file } => min_reward(&file),
        Command::Path { file } => path(&file),
        Command::Solve(args) => solve(&args, false),
        Command::Oracle(args) => solve(&args, true),
        Command::Linkage { file, budget } => linkage(&file, budget),
        Command::Gen(GenCommand::SubsetSum {
            set,
            target,
            b,
            epsilon,
        }) => gen_subset_sum(set, target, &b, epsilon),
        Command::Gen(GenCommand::Random {
            n,
            edges,
            max_w,
            seed,
        }) => gen_random(n, edges, max_w, seed),
        Command::ExportDot { file, solution } => dot(&file, solution.as_deref()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(file: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))
}

fn load(file: &Path) -> Result<PlanningInstance, Failure> {
    let json: InstanceJson = read_json(file)?;
    Ok(PlanningInstance::from_json(&json)?)
}

fn write(file: &Path, text: &str) -> Outcome {
    fs::write(file, text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn names(inst: &PlanningInstance, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| inst.graph.name(v).to_string()).collect()
}

fn edge_json(inst: &PlanningInstance, e: EdgeId) -> Value {
    let edge = inst.graph.edge(e);
    json!({
        "from": inst.graph.name(edge.tail),
        "to": inst.graph.name(edge.head),
        "w": edge.weight,
    })
}

fn validate(file: &Path) -> Outcome {
    let inst = load(file)?;
    let g = &inst.graph;
    print_json(&json!({
        "valid": true,
        "vertices": g.len(),
        "edges": g.edge_count(),
        "topological_order": names(&inst, g.topo_order()),
    }));
    Ok(())
}

fn simulate(file: &Path, all_traces: bool, budget: u64) -> Outcome {
    let inst = load(file)?;
    let report = match is_motivating(&inst) {
        Err(Error::TargetUnreachable) => {
            println!("target unreachable");
            return Err(Failure::No);
        }
        other => other?,
    };
    let mut out = json!({
        "motivating": report.motivating,
        "reward": inst.reward,
        "required_reward": report.required_reward,
        "reachable": names(&inst, &report.reachable),
        "witness": report.witness.as_ref().map(|(v, zeta)| json!({
            "vertex": inst.graph.name(*v),
            "perceived": zeta,
        })),
    });
    if all_traces {
        let cap = usize::try_from(budget).unwrap_or(usize::MAX);
        let traces: Vec<Value> = enumerate_traces(&inst, cap)?
            .iter()
            .map(|tr| {
                let outcome = match &tr.outcome {
                    TraceOutcome::ReachedTarget => json!({"reached_target": true}),
                    TraceOutcome::AbandonedAt { vertex, perceived } => json!({
                        "abandoned_at": inst.graph.name(*vertex),
                        "perceived": perceived,
                    }),
                };
                json!({"walk": names(&inst, &tr.walk), "outcome": outcome})
            })
            .collect();
        out["traces"] = Value::Array(traces);
    }
    print_json(&out);
    if report.motivating {
        Ok(())
    } else {
        Err(Failure::No)
    }
}

fn min_reward(file: &Path) -> Outcome {
    let inst = load(file)?;
    match is_motivating(&inst) {
        Ok(report) => {
            println!("{}", report.required_reward);
            Ok(())
        }
        Err(Error::TargetUnreachable) => {
            println!("none");
            Err(Failure::No)
        }
        Err(e) => Err(e.into()),
    }
}

fn path(file: &Path) -> Outcome {
    let inst = load(file)?;
    match solve_motivating_path(&inst) {
        PathResult::Finite { length, path } => {
            println!("length {length}");
            println!("path {}", names(&inst, &path).join(" "));
            Ok(())
        }
        PathResult::Infinite => {
            println!("none");
            Err(Failure::No)
        }
    }
}

fn solve(args: &SolveArgs, oracle: bool) -> Outcome {
    let inst = load(&args.file)?;
    let solution: Option<SmsSolution> = if oracle {
        brute_force_sms(&inst, args.k, args.budget.unwrap_or(DEFAULT_SUBGRAPH_CAP))?
    } else {
        let options = SmsOptions {
            budget: args.budget.unwrap_or(DEFAULT_BUDGET),
            threads: usize::try_from(args.threads).unwrap_or(usize::MAX),
        };
        solve_instance(&inst, args.k, &options)?
    };
    let Some(sol) = solution else {
        println!("none");
        return Err(Failure::No);
    };
    print_json(&json!({
        "k": args.k,
        "branching_count": sol.branching_count,
        "edges": sol.edges.iter().map(|&e| edge_json(&inst, e)).collect::<Vec<_>>(),
        "agent_path": names(&inst, &sol.agent_path),
    }));
    if let Some(out) = &args.emit_subgraph {
        let sub = prune(&inst.restrict_to_edges(sol.edges.iter().copied()))?;
        let text = serde_json::to_string_pretty(&sub.to_json()).expect("serializable");
        write(out, &text)?;
    }
    if let Some(out) = &args.dot {
        write(out, &export_dot(&inst, Some(&sol.edges)))?;
    }
    Ok(())
}

fn linkage(file: &Path, budget: u64) -> Outcome {
    let json: LinkageJson = read_json(file)?;
    let inst = LinkageInstance::from_json(&json)?;
    let run = solve_linkage_with_budget(&inst, budget)?;
    let Some(sol) = run.solution else {
        println!("none");
        return Err(Failure::No);
    };
    let paths: Vec<Vec<&str>> = sol
        .paths
        .iter()
        .map(|p| p.iter().map(|&v| inst.names()[v].as_str()).collect())
        .collect();
    print_json(&json!({"paths": paths}));
    Ok(())
}

fn gen_subset_sum(set: Vec<u64>, target: u64, b: &Rational, epsilon: Option<Rational>) -> Outcome {
    let ss = SubsetSumInstance::new(set, target)?;
    let out = subset_sum_to_sms(&ss, b, epsilon)?;
    print_json(&out.instance.to_json());
    Ok(())
}

fn gen_random(n: usize, edges: usize, max_w: u64, seed: u64) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage("--n must be at least 2".into()));
    }
    let inst = random_instance(&RandomSpec {
        n,
        edges,
        max_w,
        seed,
        ..RandomSpec::default()
    });
    print_json(&inst.to_json());
    Ok(())
}

fn dot(file: &Path, solution: Option<&Path>) -> Outcome {
    let inst = load(file)?;
    let highlight = match solution {
        None => None,
        Some(path) => {
            let sol: Value = read_json(path)?;
            let edges = sol["edges"]
                .as_array()
                .ok_or_else(|| Failure::Usage(format!("{}: no edges array", path.display())))?;
            let ids = edges
                .iter()
                .map(|e| {
                    let end = |key: &str| e[key].as_str().and_then(|name| inst.graph.vertex(name));
                    end("from")
                        .zip(end("to"))
                        .and_then(|(a, b)| inst.graph.find_edge(a, b))
                        .ok_or_else(|| Failure::Usage(format!("{}: edge {e} not in the instance", path.display())))
                })
                .collect::<Result<Vec<EdgeId>, Failure>>()?;
            Some(ids)
        }
    };
    print!("{}", export_dot(&inst, highlight.as_deref()));
    Ok(())
}
