//! `passflow`: batch driver for ingesting matches, detecting passing
//! patterns, mining sequential patterns, exporting tables and serving the
//! HTTP API.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad match file, invalid
//! parameters for the data), 2 on a usage error (bad flags, missing input).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use passflow_core::analysis::{
    flow, metrics_rows, pattern_views, prepare, FlowRecord, PatternSort,
};
use passflow_core::match_data::{
    build_dictionary, normalize_direction, parse_match, to_json, AttackDirection, MatchRecord,
    Style, StyleHeuristic, TeamId,
};
use passflow_core::metrics::{HeatmapGrid, PressureParams};
use passflow_core::pattern::{
    detect_patterns, DetectConfig, DocumentMode, ModelExport, NmfConfig, Vocabulary,
};
use passflow_core::seqmine::{phase_sequences, prefixspan, to_delimited, SequenceMode};
use passflow_service::ServiceConfig;

#[derive(Debug, Parser)]
#[command(
    name = "passflow",
    version,
    about = "Passing-pattern analysis for soccer matches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a match file, normalize it for one team and report its phases.
    Ingest(IngestArgs),
    /// Fit the topic model and write a model export.
    Detect(DetectArgs),
    /// Mine frequent pass sequences and write them as delimited text.
    Mine(MineArgs),
    /// Write flow, pattern and metric tables as JSON and CSV.
    Export(ExportArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Match file (JSON).
    input: PathBuf,
    /// Team to analyse; defaults to the first team in the file.
    #[arg(long)]
    team: Option<String>,
    /// Keep unlabeled phases unlabeled instead of applying the style heuristic.
    #[arg(long)]
    no_heuristic: bool,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[command(flatten)]
    common: Common,
    /// Write the normalized match file here.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Binary,
    Count,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WordsArg {
    Player,
    Region,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Number of build-up patterns.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative objective decrease below which fitting stops.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Document encoding.
    #[arg(long, value_enum, default_value_t = ModeArg::Binary)]
    mode: ModeArg,
    /// What counts as a word.
    #[arg(long, value_enum, default_value_t = WordsArg::Player)]
    words: WordsArg,
}

impl FitArgs {
    fn config(&self) -> DetectConfig {
        DetectConfig {
            nmf: NmfConfig {
                max_iters: self.max_iters,
                tol: self.tol,
                seed: self.seed,
            },
            mode: match self.mode {
                ModeArg::Binary => DocumentMode::Binary,
                ModeArg::Count => DocumentMode::Count,
            },
            vocabulary: match self.words {
                WordsArg::Player => Vocabulary::Player,
                WordsArg::Region => Vocabulary::Region,
            },
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    fit: FitArgs,
    /// Model export destination.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqModeArg {
    Player,
    Role,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 2)]
    min_support: usize,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    /// Token alphabet.
    #[arg(long, value_enum, default_value_t = SeqModeArg::Player)]
    mode: SeqModeArg,
    /// Delimited output destination.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    fit: FitArgs,
    /// Use this model export instead of fitting.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Directory for model.json, flow.json, patterns.json and the CSV tables.
    #[arg(long, short)]
    output_dir: PathBuf,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "PASSFLOW_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "PASSFLOW_DATA_DIR", default_value = "passflow-data")]
    data_dir: PathBuf,
    /// k used when a detect request omits it.
    #[arg(long, env = "PASSFLOW_DEFAULT_K", default_value_t = 5)]
    default_k: usize,
    /// Seed used when a detect request omits it.
    #[arg(long, env = "PASSFLOW_DEFAULT_SEED", default_value_t = 0)]
    default_seed: u64,
    /// Upper bound on one detection or mining request, in seconds.
    #[arg(long, env = "PASSFLOW_DETECT_TIMEOUT", default_value_t = 60)]
    detect_timeout: u64,
    /// Log filter, e.g. `info` or `passflow_service=debug`.
    #[arg(long, env = "PASSFLOW_LOG", default_value = "info")]
    log: String,
}

/// Raised for problems the caller must fix in the invocation itself.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Detect(a) => detect(a),
        Command::Mine(a) => mine(a),
        Command::Export(a) => export(a),
        Command::Serve(a) => serve(a),
    }
}

fn require_file(path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        return Err(Usage(format!("input file {} does not exist", path.display())).into());
    }
    Ok(())
}

fn require_parent(path: &Path) -> anyhow::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(Usage(format!("output directory {} does not exist", dir.display())).into())
        }
        _ => Ok(()),
    }
}

/// Read and validate the input, then resolve the team.
fn load(common: &Common) -> anyhow::Result<(MatchRecord, TeamId)> {
    require_file(&common.input)?;
    let raw = std::fs::read(&common.input)
        .with_context(|| format!("reading {}", common.input.display()))?;
    let record =
        parse_match(&raw).with_context(|| format!("loading {}", common.input.display()))?;
    let team = match &common.team {
        Some(t) => {
            let team = TeamId::new(t.as_str());
            if record.team(&team).is_none() {
                let known: Vec<_> = record.teams.iter().map(|t| t.id.to_string()).collect();
                bail!("match has no team `{t}` (teams: {})", known.join(", "));
            }
            team
        }
        None => record.teams[0].id.clone(),
    };
    Ok((record, team))
}

fn prepared(common: &Common) -> anyhow::Result<(MatchRecord, TeamId)> {
    let (record, team) = load(common)?;
    let rule = (!common.no_heuristic).then(StyleHeuristic::default);
    let record = prepare(&record, &team, rule.as_ref())?;
    Ok((record, team))
}

fn write(path: &Path, contents: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn ingest(args: IngestArgs) -> anyhow::Result<()> {
    if let Some(out) = &args.output {
        require_parent(out)?;
    }
    let (raw, team) = load(&args.common)?;
    let mut normalized = normalize_direction(&raw, &team)?;
    // Rewrite the direction metadata so the output is self-consistent.
    let flipped: Vec<u8> = raw
        .team(&team)
        .expect("team resolved")
        .attack_direction_by_half
        .iter()
        .filter(|(_, d)| **d == AttackDirection::RightToLeft)
        .map(|(h, _)| *h)
        .collect();
    for t in normalized.teams.iter_mut() {
        for half in &flipped {
            if let Some(d) = t.attack_direction_by_half.get_mut(half) {
                *d = match d {
                    AttackDirection::LeftToRight => AttackDirection::RightToLeft,
                    AttackDirection::RightToLeft => AttackDirection::LeftToRight,
                };
            }
        }
    }

    let rule = (!args.common.no_heuristic).then(StyleHeuristic::default);
    let phased = prepare(&raw, &team, rule.as_ref())?;
    let count =
        |f: &dyn Fn(&passflow_core::Phase) -> bool| phased.phases.iter().filter(|p| f(p)).count();
    let summary = serde_json::json!({
        "match_id": raw.match_id,
        "team": team,
        "teams": raw.teams.iter().map(|t| t.id.clone()).collect::<Vec<_>>(),
        "frames": raw.frames.len(),
        "events": raw.events.len(),
        "phases": phased.phases.len(),
        "team_phases": count(&|p| p.team == team),
        "build_up": count(&|p| p.team == team && p.style == Style::BuildUp),
        "counter_attack": count(&|p| p.team == team && p.style == Style::CounterAttack),
        "unlabeled": count(&|p| p.team == team && p.style == Style::Unlabeled),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(out) = &args.output {
        write(out, to_json(&normalized).as_bytes())?;
    }
    Ok(())
}

fn fit(record: &MatchRecord, team: &TeamId, fit: &FitArgs) -> anyhow::Result<ModelExport> {
    let config = fit.config();
    let detection = detect_patterns(record, team, fit.k, &config)?;
    Ok(ModelExport::new(
        &record.match_id,
        fit.k,
        &config,
        &detection,
    ))
}

fn detect(args: DetectArgs) -> anyhow::Result<()> {
    require_parent(&args.output)?;
    let (record, team) = prepared(&args.common)?;
    let export = fit(&record, &team, &args.fit)?;
    write(&args.output, export.to_json().as_bytes())?;
    eprintln!(
        "{} patterns for team {} written to {}",
        export.patterns.len(),
        team,
        args.output.display()
    );
    Ok(())
}

fn mine(args: MineArgs) -> anyhow::Result<()> {
    require_parent(&args.output)?;
    let (record, team) = prepared(&args.common)?;
    let dict = build_dictionary(&record.team(&team).expect("team resolved").player_ids())?;
    let mode = match args.mode {
        SeqModeArg::Player => SequenceMode::Player,
        SeqModeArg::Role => SequenceMode::Role,
    };
    let (seqs, labels) = phase_sequences(&record, &record.phases, &team, &dict, mode)?;
    let patterns = prefixspan(&seqs, args.min_support, args.max_len)?;
    write(&args.output, to_delimited(&patterns, &labels).as_bytes())?;
    eprintln!(
        "{} patterns from {} sequences written to {}",
        patterns.len(),
        seqs.len(),
        args.output.display()
    );
    Ok(())
}

fn csv_table(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> anyhow::Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn flow_rows(records: &[FlowRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.phase_id.to_string(),
                r.half.to_string(),
                r.pattern_id.to_string(),
                r.style.as_str().to_string(),
                r.end_event.tag.to_string(),
                r.summary.pass_count.to_string(),
                r.summary.first_passer.to_string(),
                r.summary.last_receiver.to_string(),
                r.summary.first_region.to_string(),
                r.summary.last_region.to_string(),
                opt(r.defense_bar),
                opt(r.mean_pressure),
            ]
        })
        .collect()
}

fn export(args: ExportArgs) -> anyhow::Result<()> {
    let dir = &args.output_dir;
    if !dir.is_dir() {
        return Err(Usage(format!("output directory {} does not exist", dir.display())).into());
    }
    if let Some(m) = &args.model {
        require_file(m)?;
    }
    let (record, team) = prepared(&args.common)?;
    let model = match &args.model {
        Some(path) => {
            let raw = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let model = ModelExport::from_json(&raw)?;
            if model.team != team {
                bail!(
                    "model {} was fitted for team {}, not {}",
                    path.display(),
                    model.team,
                    team
                );
            }
            model
        }
        None => fit(&record, &team, &args.fit)?,
    };
    let detection = model.to_detection()?;
    let params = PressureParams::default();

    let flow_records = flow(&record, &detection, &params)?;
    let views = pattern_views(
        &record,
        &detection,
        PatternSort::Frequency,
        (HeatmapGrid::DEFAULT_X_BINS, HeatmapGrid::DEFAULT_Y_BINS),
    );
    let metrics = metrics_rows(&record, &team, &params)?;

    write(&dir.join("model.json"), model.to_json().as_bytes())?;
    write(
        &dir.join("flow.json"),
        serde_json::to_string_pretty(&flow_records)?.as_bytes(),
    )?;
    write(
        &dir.join("patterns.json"),
        serde_json::to_string_pretty(&views)?.as_bytes(),
    )?;
    csv_table(
        &dir.join("flow.csv"),
        &[
            "phase_id",
            "half",
            "pattern_id",
            "style",
            "end_event",
            "pass_count",
            "first_passer",
            "last_receiver",
            "first_region",
            "last_region",
            "defense_bar",
            "mean_pressure",
        ],
        flow_rows(&flow_records),
    )?;
    csv_table(
        &dir.join("patterns.csv"),
        &[
            "pattern_id",
            "style",
            "frequency",
            "shootings",
            "key_players",
        ],
        views
            .iter()
            .map(|v| {
                vec![
                    v.pattern.pattern_id.to_string(),
                    v.pattern.style.as_str().to_string(),
                    v.pattern.frequency.to_string(),
                    v.shootings.to_string(),
                    v.pattern
                        .key_players
                        .iter()
                        .map(|w| w.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                ]
            })
            .collect(),
    )?;
    csv_table(
        &dir.join("metrics.csv"),
        &[
            "phase_id",
            "pass_count",
            "end_event",
            "defense_bar",
            "mean_pressure",
        ],
        metrics
            .iter()
            .map(|m| {
                vec![
                    m.phase_id.to_string(),
                    m.pass_count.to_string(),
                    m.end_event.clone(),
                    opt(m.defense_bar),
                    opt(m.mean_pressure),
                ]
            })
            .collect(),
    )?;
    eprintln!(
        "{} phases, {} patterns exported to {}",
        flow_records.len(),
        views.len(),
        dir.display()
    );
    Ok(())
}

fn serve(args: ServeArgs) -> anyhow::Result<()> {
    let filter = tracing_subscriber::EnvFilter::try_new(&args.log)
        .map_err(|e| Usage(format!("invalid --log filter `{}`: {e}", args.log)))?;
    tracing_subscriber::fmt().with_env_filter(filter).init();
    let config = ServiceConfig {
        data_dir: args.data_dir,
        port: args.port,
        default_k: args.default_k,
        default_seed: args.default_seed,
        detect_timeout: Duration::from_secs(args.detect_timeout),
        ..Default::default()
    };
    let runtime = tokio::runtime::Runtime::new().context("starting the async runtime")?;
    runtime
        .block_on(passflow_service::serve(config))
        .context("serving")?;
    Ok(())
}
