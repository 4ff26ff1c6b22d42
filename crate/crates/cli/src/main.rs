use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use causalkg::interchange::{load_link_tuple, load_property_graph, LinkTupleDoc, PropertyGraphDoc};
use causalkg::viz::RenderOptions;
use causalkg::{EdgeOptions, ExternalGraph, Graph, GraphConfig, NodeOptions};

/// Build, query, exchange and render causal graphs kept in a knowledge graph store.
#[derive(Parser, Debug)]
#[command(name = "causalkg", version)]
struct Cli {
    /// Store file to operate on (the new store for `import`). Required.
    #[arg(long, global = true, value_name = "PATH")]
    store: Option<PathBuf>,

    /// Open the store as the single writer (default).
    #[arg(long, global = true, conflicts_with = "shared")]
    exclusive: bool,

    /// Open the store read-only without taking the writer lock.
    #[arg(long, global = true)]
    shared: bool,

    /// Directory for the diagnostics log.
    #[arg(long = "log-dir", global = true, value_name = "PATH")]
    log_dir: Option<PathBuf>,

    /// Log verbosity: 10 debug, 20 info, 30 warning, 40 error.
    #[arg(long = "log-level", global = true, default_value_t = 30)]
    log_level: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Create or open a store, optionally filling it from documents.
    Init {
        /// Property-graph (`.pg.json`) or link-tuple (`.lt.json`) document.
        #[arg(long, value_name = "FILE")]
        from: Option<PathBuf>,
        /// Ontology files to import, in order.
        #[arg(long = "onto", value_name = "FILE")]
        ontos: Vec<PathBuf>,
    },
    /// Add a causal node.
    AddNode {
        name: String,
        #[arg(long = "comment")]
        comments: Vec<String>,
        #[arg(long)]
        creator: Option<String>,
    },
    /// Add (or update) a causal edge.
    AddEdge {
        cause: String,
        effect: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        confidence: Option<f64>,
        #[arg(long = "lag-s")]
        lag_s: Option<f64>,
        #[arg(long = "force-create")]
        force_create: bool,
        #[arg(long = "comment")]
        comments: Vec<String>,
        #[arg(long)]
        creator: Option<String>,
    },
    /// Remove a causal node and its edges; prints true or false.
    RmNode { name: String },
    /// Remove edges by name, between two nodes, or around one node.
    RmEdge(RmEdge),
    /// Print individual or class names on one line.
    List {
        #[arg(long, conflicts_with = "classes")]
        individuals: bool,
        #[arg(long)]
        classes: bool,
    },
    /// Write the graph in another format.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Lag step in seconds for the link-tuple format.
        #[arg(long = "step-s")]
        step_s: Option<f64>,
    },
    /// Create a new store (`--store`) from a document.
    Import {
        #[arg(long, value_enum)]
        format: ImportFormat,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Replace an existing store file.
        #[arg(long)]
        overwrite: bool,
    },
    /// Import a Turtle or N-Triples ontology from a path or http(s) URL.
    ImportOnto { source: String },
    /// Run a SELECT query given inline or as @file.
    Query {
        #[arg(long)]
        json: bool,
        text: String,
    },
    /// Check graph invariants and report cycles.
    Validate,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RmEdge {
    #[arg(long)]
    name: Option<String>,
    #[arg(long, num_args = 2, value_names = ["CAUSE", "EFFECT"])]
    between: Option<Vec<String>>,
    #[arg(long = "of-node")]
    of_node: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExportFormat {
    Pgjson,
    Linktuple,
    Gml,
    Graphml,
    Ntriples,
    Dot,
    Html,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ImportFormat {
    Pgjson,
    Linktuple,
}

impl Cli {
    fn store_path(&self) -> Result<&Path> {
        match &self.store {
            Some(p) => Ok(p),
            None => bail!("--store <PATH> is required"),
        }
    }

    fn parse_args() -> Self {
        let cli = match Cli::try_parse() {
            Ok(cli) => cli,
            // help and version exit 0, usage errors 2
            Err(e) => e.exit(),
        };
        // clap cannot mark a global flag required, so check it here
        if cli.store.is_none() {
            Cli::command()
                .error(
                    ErrorKind::MissingRequiredArgument,
                    "the argument '--store <PATH>' is required",
                )
                .exit();
        }
        cli
    }

    fn config(&self) -> Result<GraphConfig> {
        Ok(GraphConfig {
            exclusive: !self.shared,
            log_file_dir: self.log_dir.clone(),
            logger_level: self.log_level,
            ..GraphConfig::at(self.store_path()?)
        })
    }

    fn open(&self) -> Result<Graph> {
        Ok(Graph::new(self.config()?)?)
    }
}

fn read_document(path: &Path) -> Result<ExternalGraph> {
    let name = path.to_string_lossy();
    Ok(if name.ends_with(".lt.json") {
        ExternalGraph::LinkTuple(LinkTupleDoc::read(path)?)
    } else {
        ExternalGraph::PropertyGraph(PropertyGraphDoc::read(path)?)
    })
}

/// Downloads an http(s) ontology into a temporary file with the same
/// extension, so the format can still be told from the name.
fn fetch(url: &str) -> Result<tempfile::NamedTempFile> {
    let resp = reqwest::blocking::get(url).with_context(|| format!("downloading {url}"))?;
    let resp = resp.error_for_status().with_context(|| format!("downloading {url}"))?;
    let body = resp.bytes().with_context(|| format!("reading {url}"))?;
    let ext = if url.ends_with(".nt") { ".nt" } else { ".ttl" };
    let mut file = tempfile::Builder::new().suffix(ext).tempfile()?;
    file.write_all(&body)?;
    Ok(file)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Init { from, ontos } => {
            let config = GraphConfig {
                external_ontos: ontos.clone(),
                external_graph: from.as_deref().map(read_document).transpose()?,
                ..cli.config()?
            };
            let g = Graph::new(config)?;
            writeln!(
                out,
                "{}: {} individuals",
                cli.store_path()?.display(),
                g.individuals().len()
            )?;
        }
        Command::AddNode {
            name,
            comments,
            creator,
        } => {
            let mut g = cli.open()?;
            let opts = NodeOptions {
                comments: comments.clone(),
                creator: creator.clone(),
            };
            writeln!(out, "{}", g.add_causal_node(Some(name), opts)?)?;
        }
        Command::AddEdge {
            cause,
            effect,
            name,
            confidence,
            lag_s,
            force_create,
            comments,
            creator,
        } => {
            let mut g = cli.open()?;
            let opts = EdgeOptions {
                name: name.clone(),
                confidence: *confidence,
                time_lag_s: *lag_s,
                comments: comments.clone(),
                creator: creator.clone(),
                force_create: *force_create,
            };
            writeln!(out, "{}", g.add_causal_edge(cause, effect, opts)?)?;
        }
        Command::RmNode { name } => {
            let mut g = cli.open()?;
            writeln!(out, "{}", g.remove_causal_node(name)?)?;
        }
        Command::RmEdge(rm) => {
            let mut g = cli.open()?;
            if let Some(name) = &rm.name {
                writeln!(out, "{}", g.remove_causal_edge_by_name(name)?)?;
            } else if let Some(pair) = &rm.between {
                writeln!(out, "{}", g.remove_causal_edges_between(&pair[0], &pair[1])?)?;
            } else if let Some(node) = &rm.of_node {
                writeln!(out, "{}", g.remove_causal_edges_of_node(node)?)?;
            }
        }
        Command::List { classes, .. } => {
            let g = cli.open()?;
            let names = if *classes { g.classes() } else { g.individual_names() };
            writeln!(out, "{}", names.join(" "))?;
        }
        Command::Export {
            format,
            out: path,
            step_s,
        } => {
            let g = cli.open()?;
            match format {
                ExportFormat::Pgjson => g.export_property_graph_to(path)?,
                ExportFormat::Linktuple => {
                    for w in g.export_link_tuple_to(path, *step_s)? {
                        eprintln!("warning: {w}");
                    }
                }
                ExportFormat::Gml => g.export_gml(path)?,
                ExportFormat::Graphml => g.export_graphml(path)?,
                ExportFormat::Ntriples => g.export_ntriples(path)?,
                ExportFormat::Dot => {
                    g.emit_dot(&RenderOptions::to_file(path))?;
                }
                ExportFormat::Html => {
                    g.emit_html(&RenderOptions::to_file(path))?;
                }
            }
        }
        Command::Import {
            format,
            input,
            overwrite,
        } => {
            let path = cli.store_path()?;
            let g = match format {
                ImportFormat::Pgjson => load_property_graph(&PropertyGraphDoc::read(input)?, path, *overwrite)?,
                ImportFormat::Linktuple => load_link_tuple(&LinkTupleDoc::read(input)?, path, *overwrite)?,
            };
            writeln!(out, "{}: {} individuals", path.display(), g.individuals().len())?;
        }
        Command::ImportOnto { source } => {
            let mut g = cli.open()?;
            let report = if source.starts_with("http://") || source.starts_with("https://") {
                let file = fetch(source)?;
                g.import_ontology(file.path())?
            } else {
                g.import_ontology(source)?
            };
            writeln!(out, "{report}")?;
        }
        Command::Query { json, text } => {
            let text = match text.strip_prefix('@') {
                Some(file) => std::fs::read_to_string(file).with_context(|| format!("reading query file {file}"))?,
                None => text.clone(),
            };
            let g = cli.open()?;
            let result = g.query(&text)?;
            if *json {
                write!(out, "{}", result.to_json_lines())?;
            } else {
                write!(out, "{}", result.to_tsv())?;
            }
        }
        Command::Validate => {
            let g = cli.open()?;
            let report = g.validate();
            for v in &report.violations {
                writeln!(out, "violation: {v}")?;
            }
            for c in &report.cycles {
                writeln!(out, "cycle: {} -> {}", c.join(" -> "), c[0])?;
            }
            if report.violations.is_empty() && report.cycles.is_empty() {
                writeln!(out, "ok")?;
            }
            if !report.violations.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse_args();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
