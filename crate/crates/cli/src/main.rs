//! `cbnctl`: controllability analysis, control synthesis, and the
//! dominating-set pipeline for conjunctive Boolean networks, on the command
//! line.
//!
//! Exit codes: 0 success or positive answer, 1 well-formed negative answer
//! (not controllable, unreachable, decision no), 2 usage or input error,
//! 3 size guard or search budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cbn_control::analysis::{check_controllability, decompose_controlled_paths, Verdict};
use cbn_control::minctrl::{
    decision_min_controls, greedy_control_set, minimal_control_set, SearchConfig, SearchError,
};
use cbn_control::model::{parse_cbn, parse_edge_list, Cbcn, Cbn, Node, UpdateRule};
use cbn_control::oracle::{
    min_dominating_set, oracle_controllable, shortest_steering, state_graph, OracleConfig,
    OracleError,
};
use cbn_control::reduction::solve_dominating_via_controllability;
use cbn_control::synthesis::{simulate, synthesize, ControlSequence};
use cbn_control::NetworkState;

#[derive(Parser)]
#[command(
    name = "cbnctl",
    version,
    about = "Controllability toolkit for conjunctive Boolean networks"
)]
struct Cli {
    /// Output format for the primary result.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide controllability of a network; prints the verdict and witness.
    Check {
        /// Network file (.cbn).
        file: PathBuf,
        /// Also write the dependency graph as DOT to this path.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Decompose a controllable network into disjoint controlled paths.
    Decompose { file: PathBuf },
    /// Build a control sequence steering the network between two states.
    Synthesize {
        file: PathBuf,
        /// Start state as a bit string, leftmost bit is X1.
        #[arg(long)]
        from: String,
        /// Target state as a bit string.
        #[arg(long)]
        to: String,
    },
    /// Run the network from a state under a control sequence.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        from: String,
        /// Comma-separated control rows, e.g. `10,11,01`; empty for none.
        #[arg(long, default_value = "")]
        seq: String,
    },
    /// Find a smallest controlled set making the network controllable.
    Minimize {
        file: PathBuf,
        /// Exact search (the default).
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Greedy heuristic instead of exact search.
        #[arg(long)]
        greedy: bool,
        /// Also answer the decision question "minimum <= K?".
        #[arg(short)]
        k: Option<usize>,
    },
    /// Decide dominating set by minimal controllability of the reduction
    /// network.
    #[command(name = "reduce-ds")]
    ReduceDs {
        /// Undirected graph in edge-list format.
        graph: PathBuf,
        /// Budget for the dominating-set size.
        #[arg(short)]
        k: usize,
    },
    /// Brute-force ground truth on the full state graph.
    Oracle {
        file: PathBuf,
        /// Two states: print a shortest steering sequence between them.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        pair: Option<Vec<String>>,
        /// Also write the state graph as DOT to this path.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Exact minimum dominating set of an undirected graph.
    Domset {
        graph: PathBuf,
        #[arg(short)]
        k: Option<usize>,
    },
}

/// A finished command: exit 0 on a positive answer, 1 on a negative one.
enum Outcome {
    Positive,
    Negative,
}

#[derive(Debug)]
enum Failure {
    /// Bad input or bad flags: exit 2.
    Usage(String),
    /// Size guard or search budget: exit 3.
    Budget(String),
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        Failure::Budget(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Positive) => ExitCode::from(0),
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Cbcn, Failure> {
    parse_cbn(&read_file(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<cbn_control::model::UndirectedGraph, Failure> {
    parse_edge_list(&read_file(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_state(text: &str, n: usize, what: &str) -> Result<NetworkState, Failure> {
    let state: NetworkState = text
        .parse()
        .map_err(|_| Failure::Usage(format!("{what} state {text:?} is not a bit string")))?;
    if state.len() != n {
        return Err(Failure::Usage(format!(
            "{what} state has {} bits, the network has {n} variables",
            state.len()
        )));
    }
    Ok(state)
}

/// Oracle limits, honoring the `CBN_CONTROL_MAX_ORACLE_BITS` override.
fn oracle_config() -> Result<OracleConfig, Failure> {
    let mut config = OracleConfig::default();
    if let Ok(text) = std::env::var("CBN_CONTROL_MAX_ORACLE_BITS") {
        config.max_state_bits = text.parse().map_err(|_| {
            Failure::Usage(format!(
                "CBN_CONTROL_MAX_ORACLE_BITS={text:?} is not a number"
            ))
        })?;
    }
    Ok(config)
}

fn write_dot(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn verdict_json(verdict: &Verdict) -> serde_json::Value {
    let witness = match verdict {
        Verdict::Controllable => serde_json::Value::Null,
        Verdict::NotDag { cycle } => {
            json!(cycle.iter().map(Node::to_string).collect::<Vec<_>>())
        }
        Verdict::PropertyPViolation { node } => json!(node.to_string()),
    };
    json!({
        "controllable": verdict.is_controllable(),
        "reason": verdict.reason(),
        "witness": witness,
    })
}

fn sequence_rows(seq: &ControlSequence) -> Vec<String> {
    seq.iter()
        .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
        .collect()
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Check { file, dot } => {
            let net = load_network(&file)?;
            let verdict = check_controllability(&net);
            if let Some(path) = dot {
                write_dot(&path, &net.dependency_graph().to_dot())?;
            }
            match format {
                Format::Text => println!("{verdict}"),
                Format::Json => println!("{}", verdict_json(&verdict)),
            }
            Ok(if verdict.is_controllable() {
                Outcome::Positive
            } else {
                Outcome::Negative
            })
        }

        Command::Decompose { file } => {
            let net = load_network(&file)?;
            match decompose_controlled_paths(&net.dependency_graph()) {
                Ok(decomposition) => {
                    match format {
                        Format::Text => {
                            for path in decomposition.iter() {
                                println!("{path}");
                            }
                        }
                        Format::Json => {
                            let paths: Vec<Vec<String>> = decomposition
                                .iter()
                                .map(|p| p.nodes().iter().map(Node::to_string).collect())
                                .collect();
                            println!("{}", json!({ "controllable": true, "paths": paths }));
                        }
                    }
                    Ok(Outcome::Positive)
                }
                Err(e) => {
                    match format {
                        Format::Text => println!("{e}"),
                        Format::Json => {
                            let verdict = check_controllability(&net);
                            println!("{}", verdict_json(&verdict));
                        }
                    }
                    Ok(Outcome::Negative)
                }
            }
        }

        Command::Synthesize { file, from, to } => {
            let net = load_network(&file)?;
            let n = net.var_count();
            let a = parse_state(&from, n, "start")?;
            let b = parse_state(&to, n, "target")?;
            match synthesize(&net, &a, &b) {
                Ok(seq) => {
                    // Re-simulate before printing anything.
                    let traj = simulate(&net, &a, &seq)
                        .expect("synthesized sequence matches the network dimensions");
                    assert_eq!(
                        traj.last(),
                        Some(&b),
                        "synthesized sequence failed verification"
                    );
                    match format {
                        Format::Text => print!("{seq}"),
                        Format::Json => println!(
                            "{}",
                            json!({
                                "horizon": seq.len(),
                                "width": seq.width(),
                                "controls": sequence_rows(&seq),
                                "target": b.to_string(),
                                "verified": true,
                            })
                        ),
                    }
                    Ok(Outcome::Positive)
                }
                Err(e) => {
                    match format {
                        Format::Text => println!("{e}"),
                        Format::Json => println!("{}", verdict_json(&check_controllability(&net))),
                    }
                    Ok(Outcome::Negative)
                }
            }
        }

        Command::Simulate { file, from, seq } => {
            let net = load_network(&file)?;
            let n = net.var_count();
            let x0 = parse_state(&from, n, "start")?;
            let width = net.num_controls();
            let mut rows = Vec::new();
            for part in seq.split(',').filter(|p| !p.trim().is_empty()) {
                let row: Vec<bool> = part
                    .trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Failure::Usage(format!("bad control row {part:?}"))),
                    })
                    .collect::<Result<_, _>>()?;
                rows.push(row);
            }
            let seq = ControlSequence::new(width, rows).map_err(|e| {
                Failure::Usage(format!("control rows must have {width} bits each: {e}"))
            })?;
            let traj = simulate(&net, &x0, &seq).map_err(|e| Failure::Usage(e.to_string()))?;
            match format {
                Format::Text => {
                    for state in &traj {
                        println!("{state}");
                    }
                }
                Format::Json => {
                    let states: Vec<String> = traj.iter().map(NetworkState::to_string).collect();
                    println!("{}", json!({ "trajectory": states }));
                }
            }
            Ok(Outcome::Positive)
        }

        Command::Minimize {
            file,
            exact: _,
            greedy,
            k,
        } => {
            let net = load_network(&file)?;
            if net.num_controls() > 0 {
                return Err(Failure::Usage(
                    "minimize expects an uncontrolled network (no `?` lines)".into(),
                ));
            }
            let sets = net
                .vars()
                .map(|v| match net.rule(v) {
                    UpdateRule::Conjunction(set) => set.clone(),
                    UpdateRule::Controlled => unreachable!(),
                })
                .collect();
            let cbn = Cbn::new(sets).expect("parsed networks are well-formed");
            let config = SearchConfig::default();

            let result = if greedy {
                greedy_control_set(&cbn)
            } else {
                minimal_control_set(&cbn, &config)?
            };
            let decision = match k {
                // The exact search already knows the minimum; the greedy
                // result alone cannot answer the decision question.
                Some(k) if !greedy => Some(result.cardinality() <= k),
                Some(k) => Some(decision_min_controls(&cbn, k, &config)?),
                None => None,
            };

            let names: Vec<String> = result.control_set.iter().map(|v| format!("X{v}")).collect();
            match format {
                Format::Text => {
                    println!(
                        "I={{{}}} size={} exact={} tested={} elapsed={:?}",
                        names.join(","),
                        result.cardinality(),
                        result.exact,
                        result.tested,
                        result.elapsed
                    );
                    if let Some(decision) = decision {
                        println!(
                            "minimum <= {}: {}",
                            k.unwrap(),
                            if decision { "yes" } else { "no" }
                        );
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "indices": result.control_set.iter().copied().collect::<Vec<_>>(),
                        "cardinality": result.cardinality(),
                        "exact": result.exact,
                        "tested_count": result.tested,
                        "elapsed_ms": result.elapsed.as_secs_f64() * 1e3,
                        "decision": decision,
                    })
                ),
            }
            Ok(match decision {
                Some(false) => Outcome::Negative,
                _ => Outcome::Positive,
            })
        }

        Command::ReduceDs { graph, k } => {
            let g = load_graph(&graph)?;
            let result = solve_dominating_via_controllability(&g, k, &SearchConfig::default())
                .map_err(|e| match e {
                    cbn_control::reduction::ReductionError::Search(e) => Failure::from(e),
                    other => Failure::Usage(other.to_string()),
                })?;
            let names: Vec<String> = result
                .dominating_set
                .iter()
                .map(|v| format!("v{v}"))
                .collect();
            match format {
                Format::Text => println!(
                    "{}, Y={{{}}}, gamma={}, total_controls={}",
                    if result.decision { "yes" } else { "no" },
                    names.join(","),
                    result.gamma(),
                    result.total_controls()
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "Y": result.dominating_set,
                        "gamma": result.gamma(),
                        "total_controls": result.total_controls(),
                        "decision": result.decision,
                    })
                ),
            }
            Ok(if result.decision {
                Outcome::Positive
            } else {
                Outcome::Negative
            })
        }

        Command::Oracle { file, pair, dot } => {
            let net = load_network(&file)?;
            let config = oracle_config()?;
            if let Some(path) = dot {
                let sg = state_graph(&net, &config)?;
                write_dot(&path, &sg.to_dot())?;
            }
            match pair {
                None => {
                    let controllable = oracle_controllable(&net, &config)?;
                    match format {
                        Format::Text => println!(
                            "{}",
                            if controllable {
                                "controllable"
                            } else {
                                "not controllable"
                            }
                        ),
                        Format::Json => {
                            println!("{}", json!({ "controllable": controllable }))
                        }
                    }
                    Ok(if controllable {
                        Outcome::Positive
                    } else {
                        Outcome::Negative
                    })
                }
                Some(pair) => {
                    let n = net.var_count();
                    let a = parse_state(&pair[0], n, "start")?;
                    let b = parse_state(&pair[1], n, "target")?;
                    match shortest_steering(&net, &a, &b, &config)? {
                        Some(seq) => {
                            match format {
                                Format::Text => {
                                    println!("length {}", seq.len());
                                    print!("{seq}");
                                }
                                Format::Json => println!(
                                    "{}",
                                    json!({
                                        "reachable": true,
                                        "length": seq.len(),
                                        "controls": sequence_rows(&seq),
                                    })
                                ),
                            }
                            Ok(Outcome::Positive)
                        }
                        None => {
                            match format {
                                Format::Text => println!("unreachable"),
                                Format::Json => {
                                    println!("{}", json!({ "reachable": false }))
                                }
                            }
                            Ok(Outcome::Negative)
                        }
                    }
                }
            }
        }

        Command::Domset { graph, k } => {
            let g = load_graph(&graph)?;
            let solution = min_dominating_set(&g, k, &OracleConfig::default())?;
            let names: Vec<String> = solution.set.iter().map(|v| format!("v{v}")).collect();
            match format {
                Format::Text => {
                    println!("D={{{}}}, gamma={}", names.join(","), solution.gamma());
                    if let Some(decision) = solution.decision {
                        println!(
                            "gamma <= {}: {}",
                            k.unwrap(),
                            if decision { "yes" } else { "no" }
                        );
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "set": solution.set,
                        "gamma": solution.gamma(),
                        "decision": solution.decision,
                    })
                ),
            }
            Ok(match solution.decision {
                Some(false) => Outcome::Negative,
                _ => Outcome::Positive,
            })
        }
    }
}
