//! Command-line front end for the gradetree library.
//!
//! Subcommands mirror the instructor workflow: `ingest` normalizes a
//! grade sheet, `metrics` scores attributes, `train` writes a model file,
//! `rules` prints it as IF-THEN rules, `predict` classifies a cohort and
//! `report` assembles the full at-risk report. Payload goes to stdout,
//! diagnostics to stderr; exit codes are 0 (success), 1 (data or
//! validation error) and 2 (usage error). A `--data -` argument reads
//! the sheet from stdin so commands compose in pipes.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};

use chrono::{SecondsFormat, Utc};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use gradetree::{
    build_report, classify, extract_rules, induce_tree, parse_csv, parse_schema, score_all,
    AttributeScore, Category, Criterion, Dataset, InductionParams, ParseMode, TrainedModel,
};

/// Timestamp written under `--deterministic`, for byte-stable output.
pub const FROZEN_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

#[derive(Parser)]
#[command(
    name = "gradetree",
    version,
    about = "Decision-tree analytics over coursework grade sheets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a grade sheet and echo it in normalized categorical form
    Ingest {
        /// Grade sheet CSV, or - for stdin
        #[arg(long)]
        data: String,
        /// Course schema config file
        #[arg(long)]
        schema: String,
        /// How to read assessment cells
        #[arg(long, value_enum, default_value_t = Mode::Categorical)]
        mode: Mode,
    },
    /// Score each attribute: information gain, split info, gain ratio
    Metrics {
        /// Labeled categorical grade sheet CSV, or - for stdin
        #[arg(long)]
        data: String,
        /// Course schema config file
        #[arg(long)]
        schema: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Induce a decision tree and write the model file
    Train {
        /// Labeled categorical grade sheet CSV, or - for stdin
        #[arg(long)]
        data: String,
        /// Course schema config file
        #[arg(long)]
        schema: String,
        /// Attribute-selection criterion
        #[arg(long, default_value = "gain-ratio")]
        criterion: Criterion,
        /// Nodes with fewer records become majority leaves
        #[arg(long, default_value_t = 1)]
        min_support: usize,
        /// Maximum number of splits on any path
        #[arg(long)]
        max_depth: Option<usize>,
        /// Where to write the model JSON
        #[arg(long)]
        out: String,
    },
    /// Print a trained model as IF-THEN rules
    Rules {
        /// Model JSON file
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Classify a cohort and show each prediction with its decision path
    Predict {
        /// Model JSON file
        #[arg(long)]
        model: String,
        /// Categorical grade sheet CSV (target optional), or - for stdin
        #[arg(long)]
        data: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Build the instructor report: summaries, patterns, at-risk students
    Report {
        /// Model JSON file
        #[arg(long)]
        model: String,
        /// Categorical grade sheet CSV (target optional), or - for stdin
        #[arg(long)]
        data: String,
        /// Course identifier shown in the report
        #[arg(long)]
        course_id: String,
        /// Failure rate at which an assessment is flagged, in (0, 1]
        #[arg(long)]
        fail_rate_threshold: Option<f64>,
        /// Freeze the report timestamp for reproducible output
        #[arg(long)]
        deterministic: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Raw,
    Categorical,
}

impl From<Mode> for ParseMode {
    fn from(mode: Mode) -> ParseMode {
        match mode {
            Mode::Raw => ParseMode::RawMarks,
            Mode::Categorical => ParseMode::Categorical,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Machine,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write `{path}`: {source}")]
    WriteFile {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Lib(#[from] gradetree::Error),
}

/// Runs one invocation. Streams are injected so tests can capture them.
pub fn run<I, T>(
    argv: I,
    stdin: &mut impl Read,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = write!(stdout, "{err}");
                return 0;
            }
            let _ = write!(stderr, "{err}");
            return 2;
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(payload) => {
            let _ = stdout.write_all(payload.as_bytes());
            let _ = stdout.flush();
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            1
        }
    }
}

fn dispatch(command: Command, stdin: &mut impl Read) -> Result<String, CliError> {
    match command {
        Command::Ingest { data, schema, mode } => {
            let dataset = load_dataset(&data, &schema, mode.into(), stdin)?;
            Ok(dataset.to_csv())
        }
        Command::Metrics {
            data,
            schema,
            format,
        } => {
            let dataset = load_dataset(&data, &schema, ParseMode::Categorical, stdin)?;
            let scores = score_all(&dataset)?;
            Ok(match format {
                TableFormat::Table => metrics_table(&scores),
                TableFormat::Machine => to_json_line(&scores),
            })
        }
        Command::Train {
            data,
            schema,
            criterion,
            min_support,
            max_depth,
            out,
        } => {
            let dataset = load_dataset(&data, &schema, ParseMode::Categorical, stdin)?;
            let params = InductionParams {
                min_support,
                max_depth,
            };
            let tree = induce_tree(&dataset, criterion, params)?;
            let model = TrainedModel::new(criterion, dataset.schema, tree)?;
            fs::write(&out, model.to_json() + "\n").map_err(|source| CliError::WriteFile {
                path: out.clone(),
                source,
            })?;
            Ok(String::new())
        }
        Command::Rules { model, format } => {
            let model = load_model(&model)?;
            let rules = extract_rules(&model.tree);
            Ok(match format {
                OutFormat::Text => {
                    let mut out = String::new();
                    for rule in &rules {
                        out.push_str(&rule.render(model.schema.target_name()));
                        out.push('\n');
                    }
                    out
                }
                OutFormat::Machine => to_json_line(&rules),
            })
        }
        Command::Predict {
            model,
            data,
            format,
        } => {
            let model = load_model(&model)?;
            let cohort = load_data_with(&data, &model, stdin)?;
            let mut predictions = Vec::with_capacity(cohort.len());
            for record in &cohort.records {
                let outcome = classify(&model.tree, record)?;
                predictions.push(Prediction {
                    student_id: record.student_id.clone(),
                    label: outcome.label,
                    at_risk: outcome.at_risk,
                    path: outcome.path,
                });
            }
            Ok(match format {
                OutFormat::Text => prediction_table(&predictions),
                OutFormat::Machine => to_json_line(&predictions),
            })
        }
        Command::Report {
            model,
            data,
            course_id,
            fail_rate_threshold,
            deterministic,
            format,
        } => {
            let model = load_model(&model)?;
            let cohort = load_data_with(&data, &model, stdin)?;
            let generated_at = if deterministic {
                FROZEN_TIMESTAMP.to_string()
            } else {
                Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
            };
            let report = build_report(
                &model,
                &cohort,
                course_id,
                fail_rate_threshold,
                generated_at,
            )?;
            Ok(match format {
                OutFormat::Text => report.to_text(),
                OutFormat::Machine => report.to_json() + "\n",
            })
        }
    }
}

fn read_input(path: &str, stdin: &mut impl Read) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|source| CliError::Read {
                path: path.to_string(),
                source,
            })?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })
}

fn load_dataset(
    data_path: &str,
    schema_path: &str,
    mode: ParseMode,
    stdin: &mut impl Read,
) -> Result<Dataset, CliError> {
    let schema = parse_schema(&read_input(schema_path, stdin)?)?;
    let text = read_input(data_path, stdin)?;
    Ok(parse_csv(&text, &schema, mode)?)
}

fn load_data_with(
    data_path: &str,
    model: &TrainedModel,
    stdin: &mut impl Read,
) -> Result<Dataset, CliError> {
    let text = read_input(data_path, stdin)?;
    Ok(parse_csv(&text, &model.schema, ParseMode::Categorical)?)
}

fn load_model(path: &str) -> Result<TrainedModel, CliError> {
    Ok(TrainedModel::from_json(&read_input(
        path,
        &mut std::io::empty(),
    )?)?)
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("payload serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct Prediction {
    student_id: String,
    label: Category,
    at_risk: bool,
    path: Vec<(String, Category)>,
}

/// Aligned score table: one row per attribute, six decimal places,
/// `n/a` where the gain ratio is undefined.
pub fn metrics_table(scores: &[AttributeScore]) -> String {
    let cells: Vec<(String, String, String, String)> = scores
        .iter()
        .map(|score| {
            (
                score.attribute.clone(),
                format!("{:.6}", score.gain),
                format!("{:.6}", score.split_info),
                score
                    .gain_ratio
                    .map_or_else(|| "n/a".to_string(), |r| format!("{r:.6}")),
            )
        })
        .collect();
    let widths = [
        column_width("Attribute", cells.iter().map(|c| c.0.len())),
        column_width("Gain", cells.iter().map(|c| c.1.len())),
        column_width("Split info", cells.iter().map(|c| c.2.len())),
        column_width("Gain ratio", cells.iter().map(|c| c.3.len())),
    ];
    let mut out = String::new();
    write_row(
        &mut out,
        &widths,
        "Attribute",
        "Gain",
        "Split info",
        "Gain ratio",
    );
    for (name, gain, split, ratio) in &cells {
        write_row(&mut out, &widths, name, gain, split, ratio);
    }
    out
}

fn prediction_table(predictions: &[Prediction]) -> String {
    let paths: Vec<String> = predictions.iter().map(|p| render_path(&p.path)).collect();
    let widths = [
        column_width("Student", predictions.iter().map(|p| p.student_id.len())),
        column_width(
            "Predicted",
            predictions.iter().map(|p| p.label.as_str().len()),
        ),
        column_width(
            "At risk",
            predictions.iter().map(|p| risk_word(p.at_risk).len()),
        ),
        column_width("Path", paths.iter().map(String::len)),
    ];
    let mut out = String::new();
    write_left_row(&mut out, &widths, "Student", "Predicted", "At risk", "Path");
    for (prediction, path) in predictions.iter().zip(&paths) {
        write_left_row(
            &mut out,
            &widths,
            &prediction.student_id,
            prediction.label.as_str(),
            risk_word(prediction.at_risk),
            path,
        );
    }
    out
}

fn risk_word(at_risk: bool) -> &'static str {
    if at_risk {
        "yes"
    } else {
        "no"
    }
}

fn render_path(path: &[(String, Category)]) -> String {
    if path.is_empty() {
        return "(none)".to_string();
    }
    path.iter()
        .map(|(attribute, value)| format!("{attribute} = {value}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn column_width(header: &str, cells: impl Iterator<Item = usize>) -> usize {
    cells.chain([header.len()]).max().unwrap_or(0)
}

/// Name column left-aligned, numeric columns right-aligned.
fn write_row(out: &mut String, widths: &[usize; 4], a: &str, b: &str, c: &str, d: &str) {
    writeln!(
        out,
        "{:<w0$}  {:>w1$}  {:>w2$}  {:>w3$}",
        a,
        b,
        c,
        d,
        w0 = widths[0],
        w1 = widths[1],
        w2 = widths[2],
        w3 = widths[3],
    )
    .expect("write to string");
}

fn write_left_row(out: &mut String, widths: &[usize; 4], a: &str, b: &str, c: &str, d: &str) {
    let line = format!(
        "{:<w0$}  {:<w1$}  {:<w2$}  {:<w3$}",
        a,
        b,
        c,
        d,
        w0 = widths[0],
        w1 = widths[1],
        w2 = widths[2],
        w3 = widths[3],
    );
    out.push_str(line.trim_end());
    out.push('\n');
}
