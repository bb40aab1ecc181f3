//! `emissor` subcommands. Output goes to the writer handed to [`run`] so the
//! commands can be tested without a process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use emissor::convert::{
    add_frames, from_dialogue_csv, import_meld_like, DialogueOptions, MeldOptions, ScenarioFolder, CLOSING_MARGIN_MS,
};
use emissor::ekg::{emit_from_scenario, query, serialize_trig, write_batch, BatchKind, EmitConfig};
use emissor::model::{Scenario, ScenarioBundle, ScenarioContext};
use emissor::storage::{load_scenario, RDF_DIR};

use crate::api::{result_json, QueryParams};
use crate::repo::load_graph;
use crate::DEFAULT_PORT;

#[derive(Debug, Parser)]
#[command(
    name = "emissor",
    version,
    about = "Multimodal interaction scenarios and their episodic graph"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the HTTP API over a directory of scenario folders.
    Serve {
        #[arg(long, env = "EMISSOR_ROOT")]
        root: PathBuf,
        #[arg(long, env = "EMISSOR_PORT", default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Load a scenario folder and report warnings and violations.
    Validate { dir: PathBuf },
    /// Emit a scenario's annotations into its graph (rdf/statements<N>.trig).
    Emit {
        dir: PathBuf,
        /// Compute the new quads without writing them.
        #[arg(long)]
        dry_run: bool,
        /// Print the new quads as TriG.
        #[arg(long)]
        print: bool,
    },
    /// Query the claims in a scenario's graph.
    Query {
        dir: PathBuf,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        o: Option<String>,
        /// Only mentions made at or before this scenario time (ms).
        #[arg(long)]
        t: Option<i64>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a scenario folder from external recordings.
    Convert {
        #[command(subcommand)]
        kind: ConvertKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConvertKind {
    /// A speaker,utterance,time dialogue CSV, optionally with camera frames.
    Csv {
        #[arg(long = "in")]
        input: PathBuf,
        /// Directory the scenario folder is created in.
        #[arg(long)]
        out: PathBuf,
        /// Scenario id; defaults to the CSV file stem.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = CLOSING_MARGIN_MS)]
        margin_ms: i64,
        /// Directory of <prefix>_frame<F>_<ms>.jpg frames to add.
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Scenario folder whose context (agent, speaker, persons) is reused.
        #[arg(long)]
        context_from: Option<PathBuf>,
        /// Add token mentions to every utterance.
        #[arg(long)]
        tokens: bool,
    },
    /// A directory of frames only.
    Frames {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        id: String,
    },
    /// A transcript with speaker, utterance, start and optional end/emotion
    /// columns.
    Meld {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = CLOSING_MARGIN_MS)]
        margin_ms: i64,
        /// Directory holding the clips named in the media column.
        #[arg(long)]
        media: Option<PathBuf>,
    },
}

type CliResult = Result<u8, Box<dyn std::error::Error>>;

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Runs one command. Returns the process exit code: 0 on success, 1 when a
/// validation found violations.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Serve { root, port, host } => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                writeln!(out, "serving {} on http://{}", root.display(), listener.local_addr()?)?;
                out.flush()?;
                crate::serve(listener, root).await
            })?;
            Ok(0)
        }
        Command::Validate { dir } => validate(&dir, out),
        Command::Emit { dir, dry_run, print } => emit(&dir, dry_run, print, out),
        Command::Query {
            dir,
            s,
            p,
            o,
            t,
            source,
            json,
        } => {
            let params = QueryParams { s, p, o, t, source };
            let store = load_graph(&dir.join(RDF_DIR))?;
            let results = query(&store, &params.to_query());
            if json {
                let list: Vec<_> = results.iter().map(result_json).collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&list)?)?;
            } else {
                for r in &results {
                    let source = r.source.as_ref().map(|s| s.local_name()).unwrap_or("-");
                    let time = r.time.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
                    let perspective = r.perspective.suffix();
                    let object = r.object.as_iri().map_or_else(|| r.object.lexical(), |i| i.local_name());
                    writeln!(
                        out,
                        "{}\t{} {} {object}\t{source}\t{perspective}\t{time}",
                        r.claim.local_name(),
                        r.subject.local_name(),
                        r.predicate.local_name(),
                    )?;
                }
            }
            Ok(0)
        }
        Command::Convert { kind } => convert(kind, out),
    }
}

fn validate(dir: &Path, out: &mut dyn Write) -> CliResult {
    let loaded = load_scenario(dir)?;
    for w in &loaded.warnings {
        writeln!(out, "warning: {w}")?;
    }
    let report = loaded.bundle.validate_with_media(dir);
    for v in &report.violations {
        writeln!(out, "violation: {v}")?;
    }
    writeln!(
        out,
        "{}: {} warnings, {} violations",
        loaded.bundle.scenario.id,
        loaded.warnings.len(),
        report.violations.len()
    )?;
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn emit(dir: &Path, dry_run: bool, print: bool, out: &mut dyn Write) -> CliResult {
    let loaded = load_scenario(dir)?;
    let rdf = dir.join(RDF_DIR);
    let mut store = load_graph(&rdf)?;
    let delta = emit_from_scenario(&mut store, &loaded.bundle, &EmitConfig::default())?;
    if print && !delta.is_empty() {
        write!(out, "{}", serialize_trig(&delta))?;
    }
    if delta.is_empty() || dry_run {
        writeln!(out, "{} new quads, nothing written", delta.len())?;
    } else {
        let path = write_batch(&rdf, BatchKind::Statements, &delta)?;
        writeln!(out, "{} new quads written to {}", delta.len(), path.display())?;
    }
    Ok(0)
}

fn finish(folder: &ScenarioFolder, root: &Path, out: &mut dyn Write) -> CliResult {
    for w in &folder.warnings {
        writeln!(out, "warning: {w}")?;
    }
    std::fs::create_dir_all(root)?;
    let dir = folder.write(root)?;
    let report = folder.bundle.validate_with_media(&dir);
    for v in &report.violations {
        writeln!(out, "violation: {v}")?;
    }
    let signals: usize = folder.bundle.signals.values().map(Vec::len).sum();
    writeln!(out, "wrote {} with {signals} signals", dir.display())?;
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn convert(kind: ConvertKind, out: &mut dyn Write) -> CliResult {
    match kind {
        ConvertKind::Csv {
            input,
            out: root,
            id,
            margin_ms,
            frames,
            context_from,
            tokens,
        } => {
            let id = id.unwrap_or_else(|| stem(&input));
            let context = match context_from {
                Some(dir) => load_scenario(&dir)?.bundle.scenario.context,
                None => ScenarioContext::new("robot_agent"),
            };
            let options = DialogueOptions {
                margin_ms,
                tokens,
                ..Default::default()
            };
            let mut folder = from_dialogue_csv(&input, &id, context, &options)?;
            if let Some(frames) = frames {
                add_frames(&mut folder, &frames)?;
            }
            finish(&folder, &root, out)
        }
        ConvertKind::Frames { input, out: root, id } => {
            let bundle = ScenarioBundle::new(Scenario::new(&id, ScenarioContext::new("robot_agent"), 0, 0));
            let mut folder = ScenarioFolder {
                bundle,
                files: Vec::new(),
                warnings: Vec::new(),
            };
            add_frames(&mut folder, &input)?;
            finish(&folder, &root, out)
        }
        ConvertKind::Meld {
            input,
            out: root,
            id,
            margin_ms,
            media,
        } => {
            let id = id.unwrap_or_else(|| stem(&input));
            let options = MeldOptions {
                margin_ms,
                ..Default::default()
            };
            let folder = import_meld_like(&input, media.as_deref(), &id, &options)?;
            finish(&folder, &root, out)
        }
    }
}
