use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphhom::algebra::{AlgebraBudget, Oracle};
use graphhom::canon::canonical;
use graphhom::claims::{run_claims, ClaimsConfig};
use graphhom::connmat::{
    build_slice, build_slice_from_rows, rank_profile, ConnectionSlice, PsdVerdict, SliceBudget,
};
use graphhom::enumerate::enumerate_labeled;
use graphhom::graph::{parse_graph, parse_graphs};
use graphhom::hom::hom_fast;
use graphhom::params::{count_flows, flow_target, read_target, FlowSpec, GraphParameter, Param};
use graphhom::rational;
use graphhom::reconstruct::{reconstruct, ReconstructConfig, Status};
use graphhom::{Error, LabeledGraph, MultiGraph};

#[derive(Parser)]
#[command(name = "graphhom", version, about = "Graph homomorphism functions, connection matrices and target reconstruction")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for oracle evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact hom(G, H) for a graph file and a target file.
    Hom { graph: PathBuf, target: PathBuf },
    /// Evaluate a catalog parameter.
    Param {
        #[command(subcommand)]
        cmd: ParamCmd,
    },
    /// Connection-matrix slices.
    Connmat {
        #[command(subcommand)]
        cmd: ConnmatCmd,
    },
    /// Group-valued flows.
    Flows {
        #[command(subcommand)]
        cmd: FlowsCmd,
    },
    /// Build a weighted target reproducing a parameter.
    Reconstruct(ReconstructArgs),
    /// List canonical codes of labeled graphs within bounds.
    Enumerate {
        /// Comma-separated label set, e.g. `1,2`; empty for none.
        #[arg(long, default_value = "")]
        labels: String,
        #[arg(long)]
        max_nodes: usize,
        #[arg(long)]
        max_edges: usize,
        /// Allow parallel edges.
        #[arg(long)]
        multi: bool,
    },
    /// Check the idempotent identities on a parameter's algebras.
    Claims {
        #[arg(long)]
        param: String,
        /// Largest label set an algebra is built over.
        #[arg(long, default_value_t = 3)]
        max_labels: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum ParamCmd {
    /// Print f(G).
    Eval { name: String, graph: PathBuf },
}

#[derive(Args)]
struct SliceArgs {
    #[arg(long)]
    param: String,
    /// Number of labels.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    max_edges: Option<usize>,
    /// Rows with parallel edges.
    #[arg(long)]
    multi: bool,
    /// Named rows, e.g. `K1,K2,P3`: complete graphs, paths, cycles and
    /// edgeless graphs with labels on their first k nodes.
    #[arg(long, conflicts_with = "rows_from")]
    rows: Option<String>,
    /// File of k-labeled graphs to use as rows.
    #[arg(long)]
    rows_from: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConnmatCmd {
    /// Print the slice.
    Build(SliceArgs),
    /// Exact rank of the slice.
    Rank(SliceArgs),
    /// Exact PSD check with certificate.
    Psd(SliceArgs),
    /// Rank lower bounds for k = 0..=k.
    Profile {
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        extra_nodes: usize,
        #[arg(long, default_value_t = 4)]
        extra_edges: usize,
        #[arg(long)]
        multi: bool,
    },
}

#[derive(Subcommand)]
enum FlowsCmd {
    /// Number of S-flows on a graph.
    Count { spec: PathBuf, graph: PathBuf },
    /// The weighted target whose hom counts S-flows.
    Target { spec: PathBuf },
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    param: String,
    #[arg(long, default_value_t = 3)]
    budget_nodes: usize,
    #[arg(long, default_value_t = 3)]
    budget_edges: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Largest label set whose degrees are computed.
    #[arg(long, default_value_t = 3)]
    max_level: usize,
    /// Where to write the target file.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownParameter(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_err(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn oracle(name: &str) -> Result<Oracle, Failure> {
    Ok(Arc::new(Param::parse(name)?))
}

fn named_row(name: &str, k: usize) -> Result<LabeledGraph, Failure> {
    let bad = || parse_err(format!("invalid row name `{name}`"));
    let (kind, n) = name.split_at(1.min(name.len()));
    let n: usize = n.parse().map_err(|_| bad())?;
    let g = match kind {
        "K" => MultiGraph::complete(n),
        "P" => MultiGraph::path(n),
        "C" if n >= 3 => MultiGraph::cycle(n),
        "E" => MultiGraph::empty(n),
        _ => return Err(bad()),
    };
    if n < k {
        return Err(parse_err(format!("row `{name}` has fewer than {k} nodes")));
    }
    let labels: Vec<u32> = (1..=k as u32).collect();
    Ok(LabeledGraph::with_leading_labels(g, &labels)?)
}

fn slice(a: &SliceArgs) -> Result<ConnectionSlice, Failure> {
    let f = oracle(&a.param)?;
    let rows = if let Some(names) = &a.rows {
        Some(
            names
                .split(',')
                .map(|n| named_row(n.trim(), a.k))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else if let Some(path) = &a.rows_from {
        Some(parse_graphs(&read(path)?)?)
    } else {
        None
    };
    let s = match rows {
        Some(rows) => build_slice_from_rows(f.as_ref(), a.k, rows)?,
        None => {
            let multi = a.multi || f.multiplicity_sensitive();
            build_slice(
                f.as_ref(),
                a.k,
                a.max_nodes.unwrap_or(a.k + 2),
                a.max_edges.unwrap_or(a.k + 2),
                multi,
            )?
        }
    };
    Ok(s)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn print_verdict(v: &PsdVerdict, format: Format) {
    if format == Format::Json {
        println!("{}", json(v));
        return;
    }
    match v {
        PsdVerdict::Psd { .. } => println!("psd"),
        PsdVerdict::NotPsd { witness, value } => {
            println!("not_psd");
            let w: Vec<String> = witness.iter().map(rational::format).collect();
            println!("witness\t({})", w.join(","));
            println!("value\t{}", rational::format(value));
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
    }
    let format = cli.format;
    match cli.cmd {
        Cmd::Hom { graph, target } => {
            let g = parse_graph(&read(&graph)?)?;
            let h = read_target(&target)?;
            println!("{}", rational::format(&hom_fast(g.graph(), &h)));
        }
        Cmd::Param {
            cmd: ParamCmd::Eval { name, graph },
        } => {
            let f = oracle(&name)?;
            let g = parse_graph(&read(&graph)?)?;
            println!("{}", rational::format(&f.eval(g.graph())?));
        }
        Cmd::Connmat { cmd } => match cmd {
            ConnmatCmd::Build(a) => {
                let s = slice(&a)?;
                if format == Format::Json {
                    let entries: Vec<Vec<String>> = s
                        .entries
                        .iter()
                        .map(|r| r.iter().map(rational::format).collect())
                        .collect();
                    let codes: Vec<String> = s.codes.iter().map(|c| c.to_hex()).collect();
                    println!("{}", json(&serde_json::json!({ "k": s.k, "codes": codes, "entries": entries })));
                } else {
                    print!("{}", s.to_tsv());
                }
            }
            ConnmatCmd::Rank(a) => {
                let s = slice(&a)?;
                if format == Format::Json {
                    println!("{}", json(&serde_json::json!({ "k": s.k, "rows": s.len(), "rank": s.rank() })));
                } else {
                    println!("k\trows\trank");
                    println!("{}\t{}\t{}", s.k, s.len(), s.rank());
                }
            }
            ConnmatCmd::Psd(a) => {
                let s = slice(&a)?;
                let v = s.psd();
                print_verdict(&v, format);
                if !v.is_psd() {
                    return Ok(3);
                }
            }
            ConnmatCmd::Profile {
                param,
                k,
                extra_nodes,
                extra_edges,
                multi,
            } => {
                let f = oracle(&param)?;
                let budget = SliceBudget {
                    extra_nodes,
                    extra_edges,
                    multi: multi.then_some(true),
                };
                let p = rank_profile(f.as_ref(), k, budget)?;
                if format == Format::Json {
                    println!("{}", json(&p));
                } else {
                    println!("k\trank\trows\tmax_nodes\tmax_edges\tmulti\tsaturated");
                    for e in p {
                        println!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            e.k, e.rank, e.rows, e.max_nodes, e.max_edges, e.multi, e.saturated
                        );
                    }
                }
            }
        },
        Cmd::Flows { cmd } => match cmd {
            FlowsCmd::Count { spec, graph } => {
                let spec = FlowSpec::parse(&read(&spec)?)?;
                let g = parse_graph(&read(&graph)?)?;
                println!("{}", rational::format(&count_flows(g.graph(), &spec)));
            }
            FlowsCmd::Target { spec } => {
                let spec = FlowSpec::parse(&read(&spec)?)?;
                println!("{}", flow_target(&spec)?.to_json_pretty());
            }
        },
        Cmd::Reconstruct(a) => {
            let f = oracle(&a.param)?;
            let cfg = ReconstructConfig {
                budget: AlgebraBudget {
                    extra_nodes: a.budget_nodes,
                    extra_edges: a.budget_edges,
                    ..AlgebraBudget::default()
                },
                max_level: a.max_level,
                seed: cli.seed,
                tol: a.tol,
                ..ReconstructConfig::default()
            };
            let report = reconstruct(f, &cfg)?;
            println!("{}", report.to_json());
            if let (Some(out), Some(t)) = (&a.out, &report.weighted_target) {
                std::fs::write(out, t.to_json_pretty() + "\n").map_err(|e| Failure {
                    code: 1,
                    message: format!("{}: {e}", out.display()),
                })?;
            }
            return Ok(match report.status {
                Status::Success => 0,
                Status::NotMultiplicative | Status::NonNormalizable => 1,
                Status::NotPsd => 3,
                Status::Unsaturated => 4,
                Status::VerificationFailed => 5,
            });
        }
        Cmd::Enumerate {
            labels,
            max_nodes,
            max_edges,
            multi,
        } => {
            let labels = labels
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| match s.parse::<u32>() {
                    Ok(l) if l > 0 => Ok(l),
                    _ => Err(parse_err(format!("invalid label `{s}`"))),
                })
                .collect::<Result<std::collections::BTreeSet<u32>, _>>()?;
            if max_nodes < labels.len() {
                return Err(Failure {
                    code: 1,
                    message: format!("--max-nodes {max_nodes} is below the {} labels", labels.len()),
                });
            }
            let gs = enumerate_labeled(&labels, max_nodes, max_edges, multi);
            if format == Format::Json {
                let codes: Vec<String> = gs.iter().map(|g| canonical(g).to_hex()).collect();
                println!("{}", json(&codes));
            } else {
                for g in gs {
                    println!("{}", canonical(&g).to_hex());
                }
            }
        }
        Cmd::Claims { param, max_labels, tol } => {
            let f = oracle(&param)?;
            let cfg = ClaimsConfig {
                seed: cli.seed,
                max_labels,
                tol,
                ..ClaimsConfig::default()
            };
            let results = run_claims(f, &cfg)?;
            let all = results.iter().all(|c| c.pass);
            if format == Format::Json {
                println!("{}", json(&results));
            } else {
                println!("claim\tstatus\tmax_residual\tchecks");
                for c in &results {
                    let status = if c.pass { "pass" } else { "fail" };
                    println!("{}\t{status}\t{:e}\t{}", c.name, c.max_residual, c.checks);
                }
            }
            if !all {
                return Ok(5);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
