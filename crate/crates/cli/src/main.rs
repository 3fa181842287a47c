//! `apg`: validate, classify, combine, migrate and convert algebraic
//! property graphs from the command line.
//!
//! Graphs are read from and written to APG-JSON files; `-` stands for
//! standard input or output. Exit status is 0 on success, 1 when an input
//! or result fails validation, and 2 on usage or parse errors.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use apg_core::adt::parse_path;
use apg_core::bridges::{
    export_kv, export_rdf, export_relational, import_relational, read_tables, write_tables,
    BridgeError,
};
use apg_core::catops::{coequalizer, coproduct, equalizer, product, pushout, CatError};
use apg_core::format::{
    morphism_maps_to_json, parse_ident, read_graph, read_morphism_maps, schema_from_json,
    schema_to_json, value_to_json, write_graph,
};
use apg_core::integrate::{merge_by_key, IntegrateError};
use apg_core::migrate::{
    delta_migrate, read_mapping, typecheck_mapping, write_mapping, MigrateError,
};
use apg_core::taxonomy::{classify_graph_with, Mode};
use apg_core::{validate_graph, Graph, Label, Morphism};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use io::{
    output_path, read_schema, read_text, reject, write_text, Failure, Inputs, OrUsage, Outcome,
};

#[derive(Parser, Debug)]
#[command(name = "apg", version, about = "Algebraic property graph toolkit")]
struct Cli {
    /// Skip validation of input graphs and morphisms.
    #[arg(long, global = true)]
    no_validate: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph against its schema.
    Validate { graph: PathBuf },
    /// Print the taxonomy class of every label, one `label<TAB>class` per line.
    Classify {
        /// A graph or schema document.
        schema: PathBuf,
        /// Properties must carry a primitive (the default unless
        /// APG_STRICT_TAXONOMY=0).
        #[arg(long, conflicts_with = "generalized")]
        strict: bool,
        /// Properties may carry any label-free payload.
        #[arg(long)]
        generalized: bool,
    },
    /// Categorical constructions.
    #[command(subcommand)]
    Op(Op),
    /// Merge two graphs on one schema, identifying elements with equal keys.
    Merge {
        left: Option<PathBuf>,
        right: Option<PathBuf>,
        #[arg(long = "left", value_name = "GRAPH", conflicts_with = "left")]
        left_flag: Option<PathBuf>,
        #[arg(long = "right", value_name = "GRAPH", conflicts_with = "right")]
        right_flag: Option<PathBuf>,
        /// Path of the key inside each value, e.g. `fst.snd`; default is the whole value.
        #[arg(long)]
        key: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Migrate a graph on a mapping's target schema back to its source schema.
    Migrate {
        mapping: PathBuf,
        #[arg(default_value = "-")]
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Convert a graph to another data model.
    #[command(subcommand)]
    Export(Export),
    /// Build a graph from another data model.
    #[command(subcommand)]
    Import(Import),
    /// Rewrite a graph, schema, mapping or morphism file in canonical form.
    Fmt {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; `-` or absent means standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Parallel {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Morphism file for the first map.
    #[arg(long)]
    left: PathBuf,
    /// Morphism file for the second map.
    #[arg(long)]
    right: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand, Debug)]
enum Op {
    Product {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    Coproduct {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Largest subgraph of SOURCE on which both maps agree.
    Equalizer(Parallel),
    /// Quotient of TARGET gluing the two images of every SOURCE element.
    Coequalizer(Parallel),
    /// Glue LEFT and RIGHT along the span LEFT <- APEX -> RIGHT.
    Pushout {
        #[arg(long)]
        apex: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Morphism file APEX -> LEFT.
        #[arg(long)]
        left_map: PathBuf,
        /// Morphism file APEX -> RIGHT.
        #[arg(long)]
        right_map: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum Export {
    /// N-Triples, one sorted triple per line.
    Rdf {
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// One CSV file per label plus `manifest.json`, written into DIR.
    Relational {
        graph: PathBuf,
        #[arg(long)]
        dir: PathBuf,
    },
    /// Key-value pairs of a product label, one JSON object per line.
    Kv {
        graph: PathBuf,
        #[arg(long)]
        label: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum Import {
    /// Read a directory written by `export relational`.
    Relational {
        dir: PathBuf,
        /// Graph or schema document; overrides the schema in the manifest.
        #[arg(long)]
        schema: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug)]
enum FileKind {
    Graph,
    Schema,
    Mapping,
    Morphism,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("apg: {:#}", f.error);
            f.exit_code()
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let inputs = Inputs {
        validate: !cli.no_validate,
    };
    match cli.command {
        Command::Validate { graph } => validate(&graph),
        Command::Classify {
            schema,
            strict,
            generalized,
        } => {
            let mode = match (strict, generalized) {
                (true, _) => Mode::Strict,
                (_, true) => Mode::Generalized,
                _ => Mode::from_env(),
            };
            classify(&schema, mode)
        }
        Command::Op(op) => run_op(inputs, op),
        Command::Merge {
            left,
            right,
            left_flag,
            right_flag,
            key,
            out,
        } => {
            let missing = |side: &str| Failure::usage(anyhow!("merge needs a {side} graph"));
            let left = left.or(left_flag).ok_or_else(|| missing("left"))?;
            let right = right.or(right_flag).ok_or_else(|| missing("right"))?;
            let key = key
                .map(|k| parse_path(&k))
                .transpose()
                .or_usage("bad key path")?;
            let (g1, g2) = (inputs.graph(&left)?, inputs.graph(&right)?);
            let merged = merge_by_key(&g1, &g2, key.as_deref()).map_err(integrate_failure)?;
            emit_graph(&merged, &out)
        }
        Command::Migrate {
            mapping,
            graph,
            out,
        } => {
            let m = inputs.mapping(&mapping)?;
            let report = typecheck_mapping(&m);
            if !report.is_empty() {
                return Err(reject(io::name(&mapping), &report));
            }
            let g = inputs.graph(&graph)?;
            let migrated = delta_migrate(&m, &g).map_err(migrate_failure)?;
            emit_graph(&migrated, &out)
        }
        Command::Export(e) => run_export(inputs, e),
        Command::Import(Import::Relational { dir, schema, out }) => {
            let (tables, embedded) = read_tables(&dir).map_err(bridge_failure)?;
            let schema = match (schema, embedded) {
                (Some(path), _) => read_schema(&path)?,
                (None, Some(s)) => s,
                (None, None) => {
                    return Err(Failure::usage(anyhow!(
                        "the manifest has no schema; pass --schema"
                    )));
                }
            };
            let g = import_relational(&tables, &schema).map_err(bridge_failure)?;
            emit_graph(&g, &out)
        }
        Command::Fmt { file, out } => fmt(&file, &out),
    }
}

fn validate(path: &Path) -> Outcome {
    let g =
        read_graph(&read_text(path)?).or_usage(format!("cannot parse graph {}", io::name(path)))?;
    let report = validate_graph(&g);
    if !report.is_empty() {
        return Err(reject(io::name(path), &report));
    }
    write_text(
        Path::new("-"),
        &format!("valid: {} labels, {} elements\n", g.schema().len(), g.len()),
    )
}

fn classify(path: &Path, mode: Mode) -> Outcome {
    let schema = read_schema(path)?;
    let mut text = String::new();
    for (l, c) in classify_graph_with(&schema, mode) {
        text.push_str(&format!("{l}\t{c}\n"));
    }
    write_text(Path::new("-"), &text)
}

fn run_op(inputs: Inputs, op: Op) -> Outcome {
    let (graph, out) = match op {
        Op::Product { left, right, out } => {
            let (a, b) = (inputs.graph(&left)?, inputs.graph(&right)?);
            (product(&a, &b).map_err(cat_failure)?.graph, out)
        }
        Op::Coproduct { left, right, out } => {
            let (a, b) = (inputs.graph(&left)?, inputs.graph(&right)?);
            (coproduct(&a, &b).map_err(cat_failure)?.graph, out)
        }
        Op::Equalizer(p) => {
            let (h, j) = parallel(inputs, &p)?;
            (equalizer(&h, &j).map_err(cat_failure)?.graph, p.out)
        }
        Op::Coequalizer(p) => {
            let (h, j) = parallel(inputs, &p)?;
            (coequalizer(&h, &j).map_err(cat_failure)?.graph, p.out)
        }
        Op::Pushout {
            apex,
            left,
            right,
            left_map,
            right_map,
            out,
        } => {
            let apex = inputs.graph(&apex)?;
            let (g1, g2) = (inputs.graph(&left)?, inputs.graph(&right)?);
            let f = inputs.morphism(&left_map, &apex, &g1)?;
            let g = inputs.morphism(&right_map, &apex, &g2)?;
            (pushout(&f, &g).map_err(cat_failure)?.graph, out)
        }
    };
    emit_graph(&graph, &out)
}

fn parallel(inputs: Inputs, p: &Parallel) -> Outcome<(Morphism, Morphism)> {
    let (source, target) = (inputs.graph(&p.source)?, inputs.graph(&p.target)?);
    Ok((
        inputs.morphism(&p.left, &source, &target)?,
        inputs.morphism(&p.right, &source, &target)?,
    ))
}

fn run_export(inputs: Inputs, e: Export) -> Outcome {
    match e {
        Export::Rdf { graph, out } => {
            let g = inputs.graph(&graph)?;
            write_text(&output_path(&out.output), &export_rdf(&g))
        }
        Export::Relational { graph, dir } => {
            let g = inputs.graph(&graph)?;
            io::ensure_dir(&dir)?;
            write_tables(&dir, &export_relational(&g), Some(g.schema())).map_err(bridge_failure)
        }
        Export::Kv { graph, label, out } => {
            let g = inputs.graph(&graph)?;
            let label: Label = parse_ident(&label, "label").or_usage("bad label")?;
            let pairs = export_kv(&g, &label).map_err(bridge_failure)?;
            let mut text = String::new();
            for (k, v) in pairs {
                text.push_str(
                    &json!({"key": value_to_json(&k), "value": value_to_json(&v)}).to_string(),
                );
                text.push('\n');
            }
            write_text(&output_path(&out.output), &text)
        }
    }
}

fn fmt(path: &Path, out: &Output) -> Outcome {
    let text = read_text(path)?;
    let j: Json =
        serde_json::from_str(&text).or_usage(format!("cannot parse {}", path.display()))?;
    let kind = if j.get("source").is_some() && j.get("target").is_some() {
        FileKind::Mapping
    } else if j.get("onElements").is_some() || j.get("onLabels").is_some() {
        FileKind::Morphism
    } else if j.get("elements").is_some() {
        FileKind::Graph
    } else {
        FileKind::Schema
    };
    let context = format!("cannot parse {} as a {kind:?}", path.display()).to_lowercase();
    let canonical = match kind {
        FileKind::Graph => write_graph(&read_graph(&text).or_usage(context)?),
        FileKind::Schema => pretty(&schema_to_json(&schema_from_json(&j).or_usage(context)?)),
        FileKind::Mapping => write_mapping(&read_mapping(&text).or_usage(context)?),
        FileKind::Morphism => pretty(&morphism_maps_to_json(
            &read_morphism_maps(&text).or_usage(context)?,
        )),
    };
    write_text(&output_path(&out.output), &canonical)
}

fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("serializable");
    s.push('\n');
    s
}

fn emit_graph(g: &Graph, out: &Output) -> Outcome {
    write_text(&output_path(&out.output), &write_graph(g))
}

// Failures of the operations themselves: broken preconditions count as
// invalid input, malformed data as a parse error.

fn cat_failure(e: CatError) -> Failure {
    Failure::invalid(e)
}

fn integrate_failure(e: IntegrateError) -> Failure {
    Failure::invalid(e)
}

fn migrate_failure(e: MigrateError) -> Failure {
    match &e {
        MigrateError::IllTyped(r)
        | MigrateError::InvalidInput(r)
        | MigrateError::InvalidOutput(r) => reject("migration", r),
        _ => Failure::invalid(e),
    }
}

fn bridge_failure(e: BridgeError) -> Failure {
    match &e {
        BridgeError::Invalid(r) => reject("imported graph", r),
        BridgeError::PrimaryKey { .. } | BridgeError::Graph(_) => Failure::invalid(e),
        _ => Failure::usage(e),
    }
}
