use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use taxo::align::align;
use taxo::analysis::{annotate, deepest_count, index_similarity, structural_index, terminal_count};
use taxo::cli::{
    parse_indent_spec, parse_weights, render_mappings_tsv, render_records_json, render_records_tsv,
};
use taxo::ingest::{graph_to_taxonomy, parse_edge_list, parse_indented};
use taxo::model::{Taxonomy, WeightProfile};

#[derive(Parser)]
#[command(name = "taxo", version, about = "Structural analysis and alignment of taxonomies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One taxon per line, leading indent encodes depth.
    Indented,
    /// Tab-separated `parent<TAB>child` edges; converted by unfolding.
    Edges,
}

#[derive(Args)]
struct InputOptions {
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Indented)]
    format: Format,
    /// Indent unit for the indented format: "tab" or a number of spaces.
    #[arg(long, default_value = "tab")]
    indent: String,
    /// Extra traversal roots for rootless graph components
    /// (edge-list format only), comma-separated.
    #[arg(long, value_delimiter = ',')]
    roots: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, annotate and print the full record table.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        options: InputOptions,
        /// Emit the table as JSON instead of TSV.
        #[arg(long)]
        json: bool,
        /// Include a header row in the TSV table.
        #[arg(long)]
        header: bool,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Count the deepest taxons and the childless (terminal) taxons.
    Leaves {
        input: PathBuf,
        #[command(flatten)]
        options: InputOptions,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the structural index of a taxonomy.
    Index {
        input: PathBuf,
        #[command(flatten)]
        options: InputOptions,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the structural indexes of two taxonomies.
    Compare {
        input_a: PathBuf,
        input_b: PathBuf,
        #[command(flatten)]
        options: InputOptions,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Match every taxon of the first taxonomy against the second.
    Align {
        input_a: PathBuf,
        input_b: PathBuf,
        #[command(flatten)]
        options: InputOptions,
        /// Minimum confidence for an emitted mapping.
        #[arg(long, default_value_t = 0.75)]
        threshold: f64,
        /// Six comma-separated attribute weights in table order
        /// (depth,children,brothers,brothersLeft,sameLevel,name).
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum AppError {
    /// Bad input or flag values: exit 1.
    Input(String),
    /// Unexpected failures (e.g. cannot write output): exit 2.
    Internal(String),
}

impl AppError {
    fn input(err: impl std::fmt::Display) -> Self {
        AppError::Input(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        // Usage mistakes are input errors: exit 1, not clap's default 2.
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(AppError::Internal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Analyze {
            input,
            options,
            json,
            header,
            output,
        } => {
            let taxonomy = annotate(&load_taxonomy(&input, &options)?);
            let rendered = if json {
                render_records_json(&taxonomy)
            } else {
                render_records_tsv(&taxonomy, header)
            };
            write_output(output.as_deref(), &rendered)
        }
        Command::Leaves {
            input,
            options,
            output,
        } => {
            let taxonomy = annotate(&load_taxonomy(&input, &options)?);
            let deepest = deepest_count(&taxonomy);
            let terminal = terminal_count(&taxonomy).map_err(AppError::input)?;
            write_output(
                output.as_deref(),
                &format!("deepest: {deepest}\nterminal: {terminal}\n"),
            )
        }
        Command::Index {
            input,
            options,
            output,
        } => {
            let taxonomy = annotate(&load_taxonomy(&input, &options)?);
            let index = structural_index(&taxonomy).map_err(AppError::input)?;
            write_output(output.as_deref(), &format!("{index}\n"))
        }
        Command::Compare {
            input_a,
            input_b,
            options,
            output,
        } => {
            let a = annotate(&load_taxonomy(&input_a, &options)?);
            let b = annotate(&load_taxonomy(&input_b, &options)?);
            let index_a = structural_index(&a).map_err(AppError::input)?;
            let index_b = structural_index(&b).map_err(AppError::input)?;
            let similarity = index_similarity(index_a, index_b);
            write_output(
                output.as_deref(),
                &format!("index-a: {index_a}\nindex-b: {index_b}\nsimilarity: {similarity:.4}\n"),
            )
        }
        Command::Align {
            input_a,
            input_b,
            options,
            threshold,
            weights,
            output,
        } => {
            let profile = match weights {
                Some(spec) => parse_weights(&spec).map_err(AppError::input)?,
                None => WeightProfile::uniform(),
            };
            let a = annotate(&load_taxonomy(&input_a, &options)?);
            let b = annotate(&load_taxonomy(&input_b, &options)?);
            let mappings = align(&a, &b, &profile, threshold).map_err(AppError::input)?;
            write_output(output.as_deref(), &render_mappings_tsv(&mappings))
        }
    }
}

/// Read and parse one input file, printing conversion diagnostics to the
/// error stream. The result is not yet annotated.
fn load_taxonomy(path: &Path, options: &InputOptions) -> Result<Taxonomy, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|err| AppError::Input(format!("cannot read {}: {err}", path.display())))?;
    match options.format {
        Format::Indented => {
            let unit = parse_indent_spec(&options.indent).map_err(AppError::input)?;
            parse_indented(&text, unit).map_err(AppError::input)
        }
        Format::Edges => {
            let graph = parse_edge_list(&text).map_err(AppError::input)?;
            if !options.roots.is_empty() {
                eprintln!("note: root overrides: {}", options.roots.join(", "));
            }
            let (taxonomy, diagnostics) =
                graph_to_taxonomy(&graph, &options.roots).map_err(AppError::input)?;
            for warning in &diagnostics.warnings {
                eprintln!("warning: {warning}");
            }
            Ok(taxonomy)
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), AppError> {
    match path {
        Some(path) => fs::write(path, content).map_err(|err| {
            AppError::Internal(format!("cannot write {}: {err}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|err| AppError::Internal(format!("cannot write output: {err}")))
        }
    }
}
