//! `dmf`: batch front end for the dmf-core library.
//!
//! Every subcommand writes one JSON document to standard output and exits with
//! 0 on success, 1 when the computed property does not hold and 2 when the input
//! could not be read. Diagnostics go to standard error.

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use dmf_core::catalog;
use dmf_core::classify::{classify, classify_at};
use dmf_core::covers::{boundary_trace_cover, merge_cells, nerve, validate_lcl, BoxCover};
use dmf_core::digitizer::{bundled, digitize_reduce, ShapeSpec};
use dmf_core::homotopy::{reduce, HomotopyTrace};
use dmf_core::invariants::report;
use dmf_core::io::{graph_to_dot, parse_graph, GraphDoc};
use dmf_core::memo::Memo;
use dmf_core::rational::Q;
use dmf_core::Graph;

const MEMO_ENV: &str = "DMF_MEMO_CAP";

#[derive(Parser)]
#[command(name = "dmf", version, about = "Digital manifolds as graphs")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Reserved; outputs never depend on randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize a digital surface, sphere or manifold.
    Classify {
        /// Graph file (JSON, edge list or DOT), or `catalog:<name>`.
        graph: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Greedily delete simple points and edges; prints the residue and the trace.
    Reduce { graph: String },
    /// Euler characteristic and clique-complex homology.
    Invariants { graph: String },
    /// Digitize a shape file or a bundled shape and reduce its model graph.
    Digitize {
        /// Shape JSON file, or one of segment, disk, circle, annulus, sphere.
        shape: String,
        /// Cube edge length, e.g. `1/2` or `0.25`. Defaults to the shape's own pitch.
        #[arg(long)]
        pitch: Option<String>,
    },
    /// Box covers: LCL validation, nerve, boundary traces and merges.
    Cover {
        #[command(subcommand)]
        action: CoverAction,
    },
    /// Browse the catalog of named digital manifolds.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Apply a JSON trace of transformations to a graph.
    Replay { graph: String, trace: String },
    /// Print a graph in DOT format.
    ExportDot {
        graph: String,
        #[arg(long, default_value = "G")]
        name: String,
    },
}

#[derive(Subcommand)]
enum CoverAction {
    Validate {
        cover: String,
    },
    Nerve {
        cover: String,
    },
    /// Trace cover on one cell and whether its nerve matches the cell's rim.
    Trace {
        cover: String,
        #[arg(long)]
        cell: usize,
    },
    /// Replace a set of cells by their union and re-validate.
    Merge {
        cover: String,
        #[arg(long, value_delimiter = ',', required = true)]
        cells: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

/// Failure modes mapped to exit codes.
enum Outcome {
    Done(serde_json::Value),
    Fails(serde_json::Value),
}

struct InputError(String);

impl<E: Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn input<E: Display>(source: &str) -> impl FnOnce(E) -> InputError + '_ {
    move |e| InputError(format!("{source}: {e}"))
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn verdict<T: Serialize>(ok: bool, v: &T) -> Outcome {
    if ok {
        Outcome::Done(json(v))
    } else {
        Outcome::Fails(json(v))
    }
}

fn read(path: &str) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(input(path))
}

fn load_graph(source: &str) -> Result<Graph, InputError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return Ok(catalog::get(name).map_err(input(source))?.entry.graph);
    }
    parse_graph(&read(source)?).map_err(input(source))
}

fn load_cover(path: &str) -> Result<BoxCover, InputError> {
    BoxCover::from_json(&read(path)?).map_err(input(path))
}

fn load_shape(source: &str) -> Result<ShapeSpec, InputError> {
    if !Path::new(source).exists() {
        if let Ok(shape) = bundled(source) {
            return Ok(shape);
        }
    }
    ShapeSpec::from_json(&read(source)?).map_err(input(source))
}

fn run(command: Command) -> Result<Outcome, InputError> {
    Ok(match command {
        Command::Classify { graph, dim } => {
            let g = load_graph(&graph)?;
            let v = match dim {
                Some(n) => classify_at(&g, n),
                None => classify(&g),
            };
            verdict(v.holds(), &v)
        }
        Command::Reduce { graph } => {
            let red = reduce(&load_graph(&graph)?);
            Outcome::Done(serde_json::json!({
                "residue": GraphDoc::from(&red.residue),
                "trace": red.trace,
            }))
        }
        Command::Invariants { graph } => {
            let g = load_graph(&graph)?;
            Outcome::Done(json(&report(&g).map_err(input(&graph))?))
        }
        Command::Digitize { shape, pitch } => {
            let spec = load_shape(&shape)?;
            let pitch = match pitch {
                Some(p) => p
                    .parse::<Q>()
                    .map_err(|e| InputError(format!("--pitch {p:?}: {e}")))?,
                None => spec.pitch.ok_or_else(|| {
                    InputError(format!("{shape}: no pitch given and none in the shape"))
                })?,
            };
            let r = digitize_reduce(&spec, &spec.window, pitch).map_err(input(&shape))?;
            Outcome::Done(json(&r))
        }
        Command::Cover { action } => match action {
            CoverAction::Validate { cover } => {
                let r = validate_lcl(&load_cover(&cover)?);
                verdict(r.verdict, &r)
            }
            CoverAction::Nerve { cover } => {
                Outcome::Done(json(&GraphDoc::from(&nerve(&load_cover(&cover)?))))
            }
            CoverAction::Trace { cover, cell } => {
                let t = boundary_trace_cover(&load_cover(&cover)?, cell).map_err(input(&cover))?;
                verdict(t.isomorphic, &t)
            }
            CoverAction::Merge { cover, cells } => {
                let m = merge_cells(&load_cover(&cover)?, &cells).map_err(input(&cover))?;
                verdict(m.report.verdict, &m)
            }
        },
        Command::Catalog { action } => match action {
            CatalogAction::List => Outcome::Done(json(&catalog::list())),
            CatalogAction::Show { name } => {
                let v = catalog::get(&name)?;
                verdict(v.report.passed, &v)
            }
        },
        Command::Replay { graph, trace } => {
            let g = load_graph(&graph)?;
            let t: HomotopyTrace = serde_json::from_str(&read(&trace)?).map_err(|e| {
                InputError(format!(
                    "{trace}: line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ))
            })?;
            let out = t.replay(&g).map_err(input(&trace))?;
            Outcome::Done(json(&GraphDoc::from(&out)))
        }
        Command::ExportDot { graph, name } => {
            let dot = graph_to_dot(&load_graph(&graph)?, &name);
            Outcome::Done(serde_json::Value::String(dot))
        }
    })
}

fn emit(value: &serde_json::Value, pretty: bool) {
    match value {
        // DOT text goes out verbatim so it can be piped into other tools.
        serde_json::Value::String(s) => print!("{s}"),
        v if pretty => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        v => println!("{v}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(cap) = std::env::var(MEMO_ENV) {
        match cap.parse::<usize>() {
            Ok(cap) => Memo::global().set_capacity(cap),
            Err(e) => {
                eprintln!("dmf: {MEMO_ENV}={cap:?}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(Outcome::Done(v)) => {
            emit(&v, cli.pretty);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fails(v)) => {
            emit(&v, cli.pretty);
            ExitCode::from(1)
        }
        Err(InputError(msg)) => {
            eprintln!("dmf: {msg}");
            ExitCode::from(2)
        }
    }
}
