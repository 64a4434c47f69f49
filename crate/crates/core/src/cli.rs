//! Batch command-line driver.
//!
//! Every subcommand writes into `--out` and finishes by writing
//! `manifest.json`, which echoes the resolved configuration. Failures print a
//! single `error: kind=<kind> code=<n> message="..."` line on stderr and
//! exit with the matching code from [`ExitStatus`].

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{self, CategoryClaims};
use crate::error::Error;
use crate::eval::{self, EvalConfig, EvalReport, PrecisionMode};
use crate::graph::{BuildOptions, EntityNetwork};
use crate::ingest::{self, CounselSet, DocumentRecord, IngestOptions, InputFormat, ParseOutcome};
use crate::ranking::{self, RankConfig, ScoreSnapshot, TierAssignment};
use crate::synth::{self, SynthConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
    MissingInput = 3,
    LabelsRequired = 4,
    InvalidConfig = 5,
    DataError = 6,
}

impl ExitStatus {
    fn kind(self) -> &'static str {
        match self {
            ExitStatus::Success => "ok",
            ExitStatus::Failure => "failure",
            ExitStatus::Usage => "usage",
            ExitStatus::MissingInput => "missing_input",
            ExitStatus::LabelsRequired => "labels_required",
            ExitStatus::InvalidConfig => "invalid_config",
            ExitStatus::DataError => "data_error",
        }
    }
}

#[derive(Debug)]
struct CliError {
    status: ExitStatus,
    message: String,
}

impl CliError {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        CliError {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => ExitStatus::MissingInput,
            Error::Unlabeled { .. } => ExitStatus::LabelsRequired,
            Error::InvalidConfig(_) | Error::NoCounsel => ExitStatus::InvalidConfig,
            Error::DuplicateDocId(_)
            | Error::MissingColumn(_)
            | Error::NoPrivileged
            | Error::UnknownEntity(_)
            | Error::Csv(_)
            | Error::Json(_) => ExitStatus::DataError,
            Error::Stream(_) => ExitStatus::Failure,
        };
        CliError::new(status, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "privrank",
    version,
    about = "Rank email entities by proximity to counsel and flag likely privileged documents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse metadata and export the entity network as JSON.
    Ingest(StageArgs),
    /// Score entities; writes one CSV per iteration.
    Rank(StageArgs),
    /// Assign LikelyPriv tiers from the final iteration.
    Tier(StageArgs),
    /// Predict privileged documents by link category and by link score.
    Classify(StageArgs),
    /// Bucket curves and link-category tables (needs labels).
    Evaluate(StageArgs),
    /// Generate a synthetic labeled corpus.
    Synth(SynthCmd),
    /// Every stage in sequence; synthesizes a corpus when --input is absent.
    Pipeline(PipelineCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Eml,
    Mbox,
    Csv,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Eml => InputFormat::Eml,
            FormatArg::Mbox => InputFormat::Mbox,
            FormatArg::Csv => InputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Metadata CSV, mbox file, or directory of .eml files.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Known counsel, one identity per line.
    #[arg(long, value_name = "PATH")]
    pub counsel_list: Option<PathBuf>,
    /// Create links for Bcc recipients (default).
    #[arg(long, overrides_with = "no_include_bcc")]
    pub include_bcc: bool,
    #[arg(long, overrides_with = "include_bcc")]
    pub no_include_bcc: bool,
    /// Add senders whose signature block looks legal to the counsel set.
    #[arg(long)]
    pub detect_counsel: bool,
}

impl InputArgs {
    fn include_bcc(&self) -> bool {
        !self.no_include_bcc
    }
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[arg(long, default_value_t = 3)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 0.3)]
    pub self_weight: f64,
    #[arg(long, default_value_t = 0.7)]
    pub neighbor_weight: f64,
    #[arg(long, default_value_t = 10)]
    pub degree_floor: usize,
    #[arg(long)]
    pub pin_counsel: bool,
    #[arg(long, default_value_t = 0.1)]
    pub tier_threshold: f64,
    /// Link-score threshold for document predictions (defaults to the tier threshold).
    #[arg(long)]
    pub score_threshold: Option<f64>,
}

impl RankArgs {
    fn config(&self) -> RankConfig {
        RankConfig {
            max_iterations: self.max_iterations,
            self_weight: self.self_weight,
            neighbor_weight: self.neighbor_weight,
            degree_floor: self.degree_floor,
            pin_counsel: self.pin_counsel,
            tier_threshold: self.tier_threshold,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 1000)]
    pub bucket_size: usize,
    /// Pool document counts per bucket instead of averaging member precisions.
    #[arg(long)]
    pub pooled_precision: bool,
}

impl EvalArgs {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            bucket_size: self.bucket_size,
            precision_mode: if self.pooled_precision {
                PrecisionMode::Pooled
            } else {
                PrecisionMode::MemberMean
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = SynthConfig::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = SynthConfig::default().n_entities)]
    pub n_entities: usize,
    #[arg(long, default_value_t = SynthConfig::default().n_docs)]
    pub n_docs: usize,
    #[arg(long, default_value_t = SynthConfig::default().counsel_fraction)]
    pub counsel_fraction: f64,
    #[arg(long, default_value_t = SynthConfig::default().adjacent_fraction)]
    pub adjacent_fraction: f64,
    #[arg(long, default_value_t = SynthConfig::default().legal_affinity)]
    pub legal_affinity: f64,
    #[arg(long, default_value_t = SynthConfig::default().base_priv_rate)]
    pub base_priv_rate: f64,
    #[arg(long, default_value_t = SynthConfig::default().adjacency_priv_boost)]
    pub adjacency_priv_boost: f64,
    #[arg(long, default_value_t = SynthConfig::default().hub_fraction)]
    pub hub_fraction: f64,
    #[arg(long, default_value_t = SynthConfig::default().hub_activity)]
    pub hub_activity: f64,
    #[arg(long, default_value_t = SynthConfig::default().min_contacts)]
    pub min_contacts: usize,
    #[arg(long, default_value_t = SynthConfig::default().max_contacts)]
    pub max_contacts: usize,
    #[arg(long, default_value_t = SynthConfig::default().contact_noise)]
    pub contact_noise: f64,
}

impl SynthArgs {
    fn config(&self) -> SynthConfig {
        SynthConfig {
            seed: self.seed,
            n_entities: self.n_entities,
            n_docs: self.n_docs,
            counsel_fraction: self.counsel_fraction,
            adjacent_fraction: self.adjacent_fraction,
            legal_affinity: self.legal_affinity,
            base_priv_rate: self.base_priv_rate,
            adjacency_priv_boost: self.adjacency_priv_boost,
            hub_fraction: self.hub_fraction,
            hub_activity: self.hub_activity,
            min_contacts: self.min_contacts,
            max_contacts: self.max_contacts,
            contact_noise: self.contact_noise,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StageArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub rank: RankArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthCmd {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineCmd {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub rank: RankArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub synth: SynthArgs,
}

/// Resolved configuration of one run, written to `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub input: Option<PathBuf>,
    pub format: Option<InputFormat>,
    pub counsel_list: Option<PathBuf>,
    pub include_bcc: Option<bool>,
    pub detect_counsel: Option<bool>,
    pub rank: Option<RankConfig>,
    pub score_threshold: Option<f64>,
    pub eval: Option<EvalConfig>,
    pub synth: Option<SynthConfig>,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(subcommand: &'static str, common: &CommonArgs) -> Self {
        RunManifest {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            input: None,
            format: None,
            counsel_list: None,
            include_bcc: None,
            detect_counsel: None,
            rank: None,
            score_threshold: None,
            eval: None,
            synth: None,
            out: common.out.clone(),
            threads: common.threads,
            outputs: Vec::new(),
        }
    }

    fn with_input(mut self, input: &InputArgs) -> Self {
        self.input = input.input.clone();
        self.format = input.input.as_ref().map(|_| input.format.into());
        self.counsel_list = input.counsel_list.clone();
        self.include_bcc = Some(input.include_bcc());
        self.detect_counsel = Some(input.detect_counsel);
        self
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitStatus::Success as i32;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            report(&CliError::new(
                ExitStatus::Usage,
                first.trim_start_matches("error: "),
            ));
            return ExitStatus::Usage as i32;
        }
    };
    match execute(cli) {
        Ok(()) => ExitStatus::Success as i32,
        Err(e) => {
            report(&e);
            e.status as i32
        }
    }
}

fn report(e: &CliError) {
    eprintln!(
        "error: kind={} code={} message={:?}",
        e.status.kind(),
        e.status as i32,
        e.message
    );
}

fn execute(cli: Cli) -> CliResult<()> {
    let threads = match &cli.command {
        Command::Ingest(a)
        | Command::Rank(a)
        | Command::Tier(a)
        | Command::Classify(a)
        | Command::Evaluate(a) => a.common.threads,
        Command::Synth(a) => a.common.threads,
        Command::Pipeline(a) => a.common.threads,
    };
    match threads {
        Some(0) => Err(CliError::new(
            ExitStatus::InvalidConfig,
            "--threads must be at least 1",
        )),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::new(ExitStatus::Failure, e.to_string()))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest(a) => stage(Stage::Ingest, a),
        Command::Rank(a) => stage(Stage::Rank, a),
        Command::Tier(a) => stage(Stage::Tier, a),
        Command::Classify(a) => stage(Stage::Classify, a),
        Command::Evaluate(a) => stage(Stage::Evaluate, a),
        Command::Synth(a) => run_synth(a),
        Command::Pipeline(a) => run_pipeline(a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Ingest,
    Rank,
    Tier,
    Classify,
    Evaluate,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Rank => "rank",
            Stage::Tier => "tier",
            Stage::Classify => "classify",
            Stage::Evaluate => "evaluate",
        }
    }
}

fn validate_paths(input: &InputArgs, out: &Path) -> CliResult<()> {
    let Some(path) = &input.input else {
        return Err(CliError::new(
            ExitStatus::MissingInput,
            "--input is required",
        ));
    };
    let ok = match input.format {
        FormatArg::Eml => path.is_dir(),
        FormatArg::Mbox | FormatArg::Csv => path.is_file(),
    };
    if !ok {
        return Err(CliError::new(
            ExitStatus::MissingInput,
            format!(
                "input {} does not exist or has the wrong type",
                path.display()
            ),
        ));
    }
    if let Some(c) = &input.counsel_list {
        if !c.is_file() {
            return Err(CliError::new(
                ExitStatus::MissingInput,
                format!("counsel list {} does not exist", c.display()),
            ));
        }
    }
    prepare_out(out)
}

fn prepare_out(out: &Path) -> CliResult<()> {
    if out.exists() && !out.is_dir() {
        return Err(CliError::new(
            ExitStatus::Failure,
            format!("output {} is not a directory", out.display()),
        ));
    }
    fs::create_dir_all(out).map_err(|e| CliError::from(Error::io(out, e)))
}

struct Loaded {
    docs: Vec<DocumentRecord>,
    network: EntityNetwork,
    outcome_summary: IngestSummary,
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    records: usize,
    skipped: usize,
    skipped_inputs: Vec<ingest::Skipped>,
    detected_counsel: ingest::CounselSet,
    entities: usize,
    counsel_entities: usize,
    links: usize,
}

fn load(input: &InputArgs) -> CliResult<Loaded> {
    let path = input.input.as_deref().expect("validated");
    let opts = IngestOptions {
        detect_counsel: input.detect_counsel,
    };
    let outcome: ParseOutcome = ingest::parse_metadata(path, input.format.into(), opts)?;
    let mut counsel = match &input.counsel_list {
        Some(p) => ingest::load_counsel_file(p)?,
        None => {
            log::warn!("no --counsel-list given");
            CounselSet::new()
        }
    };
    counsel.extend(outcome.detected_counsel.iter().cloned());
    Ok(assemble(outcome, &counsel, input.include_bcc()))
}

fn assemble(outcome: ParseOutcome, counsel: &CounselSet, include_bcc: bool) -> Loaded {
    let network =
        EntityNetwork::build_with(&outcome.records, counsel, BuildOptions { include_bcc });
    let outcome_summary = IngestSummary {
        records: outcome.records.len(),
        skipped: outcome.skipped.len(),
        skipped_inputs: outcome.skipped,
        detected_counsel: outcome.detected_counsel,
        entities: network.len(),
        counsel_entities: network.counsel_count(),
        links: network.links().len(),
    };
    Loaded {
        docs: outcome.records,
        network,
        outcome_summary,
    }
}

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Self {
        Writer {
            dir,
            written: Vec::new(),
        }
    }

    fn file(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> crate::Result<()>,
    ) -> CliResult<()> {
        let path = self.dir.join(name);
        let file = File::create(&path)
            .map_err(|e| CliError::new(ExitStatus::Failure, format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush()
            .map_err(|e| CliError::new(ExitStatus::Failure, format!("{}: {e}", path.display())))?;
        self.written.push(name.to_owned());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        self.file(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.write_all(b"\n")?;
            Ok(())
        })
    }
}

fn write_manifest(out: &mut Writer<'_>, mut manifest: RunManifest) -> CliResult<()> {
    manifest.outputs = out.written.clone();
    manifest.outputs.push("manifest.json".into());
    out.json("manifest.json", &manifest)
}

fn stage(which: Stage, args: StageArgs) -> CliResult<()> {
    let rank_config = args.rank.config();
    let eval_config = args.eval.config();
    // configuration errors surface before any input is read
    if which != Stage::Ingest {
        rank_config.validate()?;
    }
    if which == Stage::Evaluate && eval_config.bucket_size < 1 {
        return Err(CliError::new(
            ExitStatus::InvalidConfig,
            "--bucket-size must be at least 1",
        ));
    }
    validate_paths(&args.input, &args.common.out)?;

    let loaded = load(&args.input)?;
    let mut manifest = RunManifest::new(which.name(), &args.common).with_input(&args.input);
    let mut out = Writer::new(&args.common.out);
    match which {
        Stage::Ingest => {
            out.json("network.json", &loaded.network.to_export())?;
            out.json("ingest_summary.json", &loaded.outcome_summary)?;
        }
        Stage::Rank => {
            manifest.rank = Some(rank_config);
            let snapshots = ranking::rank_entities(&loaded.network, &rank_config)?;
            write_scores(&mut out, &loaded.network, &snapshots)?;
        }
        Stage::Tier => {
            manifest.rank = Some(rank_config);
            let snapshots = ranking::rank_entities(&loaded.network, &rank_config)?;
            let last = snapshots.last().expect("iteration 0 always present");
            let tiers = ranking::assign_tiers(&loaded.network, last, &rank_config);
            write_tiers(&mut out, &loaded.network, last, &tiers)?;
        }
        Stage::Classify => {
            let threshold = args
                .rank
                .score_threshold
                .unwrap_or(rank_config.tier_threshold);
            manifest.rank = Some(rank_config);
            manifest.score_threshold = Some(threshold);
            let snapshots = ranking::rank_entities(&loaded.network, &rank_config)?;
            let last = snapshots.last().expect("iteration 0 always present");
            let tiers = ranking::assign_tiers(&loaded.network, last, &rank_config);
            write_predictions(&mut out, &loaded, last, &tiers, threshold)?;
        }
        Stage::Evaluate => {
            eval::Labels::from_docs(&loaded.docs)?;
            manifest.rank = Some(rank_config);
            manifest.eval = Some(eval_config);
            let snapshots = ranking::rank_entities(&loaded.network, &rank_config)?;
            let last = snapshots.last().expect("iteration 0 always present");
            let tiers = ranking::assign_tiers(&loaded.network, last, &rank_config);
            let report = eval::evaluate(
                &loaded.docs,
                &loaded.network,
                &snapshots,
                &tiers,
                &eval_config,
            )?;
            write_report(&mut out, &report)?;
        }
    }
    write_manifest(&mut out, manifest)
}

fn write_scores(
    out: &mut Writer<'_>,
    network: &EntityNetwork,
    snapshots: &[ScoreSnapshot],
) -> CliResult<()> {
    for s in snapshots {
        out.file(&format!("scores_iter{}.csv", s.iteration), |w| {
            ranking::write_scores_csv(network, s, w)
        })?;
    }
    Ok(())
}

fn write_tiers(
    out: &mut Writer<'_>,
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    tiers: &TierAssignment,
) -> CliResult<()> {
    out.file("tiers.csv", |w| {
        ranking::write_tiers_csv(network, snapshot, tiers, w)
    })
}

fn write_predictions(
    out: &mut Writer<'_>,
    loaded: &Loaded,
    snapshot: &ScoreSnapshot,
    tiers: &TierAssignment,
    threshold: f64,
) -> CliResult<()> {
    let doc_links = classify::all_document_links(&loaded.docs, &loaded.network);
    let claims = CategoryClaims::compute(&doc_links, &loaded.network, tiers);
    let best = classify::max_link_scores(&doc_links, &loaded.network, snapshot);
    out.file("predictions_by_category.csv", |w| {
        classify::write_category_predictions_csv(&loaded.docs, &claims, w)
    })?;
    out.file("predictions_by_score.csv", |w| {
        classify::write_score_predictions_csv(&loaded.docs, &best, threshold, w)
    })
}

fn write_report(out: &mut Writer<'_>, report: &EvalReport) -> CliResult<()> {
    for c in &report.curves {
        out.file(&format!("buckets_entities_iter{}.csv", c.iteration), |w| {
            eval::write_rows_csv(&c.entity_buckets, w)
        })?;
        out.file(&format!("buckets_links_iter{}.csv", c.iteration), |w| {
            eval::write_rows_csv(&c.link_buckets, w)
        })?;
    }
    out.file("categories.csv", |w| {
        eval::write_rows_csv(&report.categories, w)
    })?;
    out.json("report.json", report)
}

fn run_synth(args: SynthCmd) -> CliResult<()> {
    let config = args.synth.config();
    config.validate()?;
    prepare_out(&args.common.out)?;
    let corpus = synth::generate_corpus(&config)?;
    synth::write_corpus(&corpus, &args.common.out)?;
    let mut out = Writer::new(&args.common.out);
    out.written = vec![
        "corpus.csv".into(),
        "counsel.txt".into(),
        "ground_truth.json".into(),
    ];
    let mut manifest = RunManifest::new("synth", &args.common);
    manifest.synth = Some(config);
    write_manifest(&mut out, manifest)
}

fn run_pipeline(args: PipelineCmd) -> CliResult<()> {
    let rank_config = args.rank.config();
    let eval_config = args.eval.config();
    rank_config.validate()?;
    if eval_config.bucket_size < 1 {
        return Err(CliError::new(
            ExitStatus::InvalidConfig,
            "--bucket-size must be at least 1",
        ));
    }
    let mut manifest = RunManifest::new("pipeline", &args.common).with_input(&args.input);
    let loaded = if args.input.input.is_some() {
        validate_paths(&args.input, &args.common.out)?;
        load(&args.input)?
    } else {
        let config = args.synth.config();
        config.validate()?;
        prepare_out(&args.common.out)?;
        let corpus = synth::generate_corpus(&config)?;
        let corpus_dir = args.common.out.join("corpus");
        synth::write_corpus(&corpus, &corpus_dir)?;
        manifest.synth = Some(config);
        let outcome = ParseOutcome {
            records: corpus.docs,
            ..ParseOutcome::default()
        };
        assemble(outcome, &corpus.counsel, args.input.include_bcc())
    };
    let threshold = args
        .rank
        .score_threshold
        .unwrap_or(rank_config.tier_threshold);
    manifest.rank = Some(rank_config);
    manifest.score_threshold = Some(threshold);

    let mut out = Writer::new(&args.common.out);
    if manifest.synth.is_some() {
        out.written.extend(
            [
                "corpus/corpus.csv",
                "corpus/counsel.txt",
                "corpus/ground_truth.json",
            ]
            .map(String::from),
        );
    }
    out.json("ingest_summary.json", &loaded.outcome_summary)?;
    let snapshots = ranking::rank_entities(&loaded.network, &rank_config)?;
    write_scores(&mut out, &loaded.network, &snapshots)?;
    let last = snapshots.last().expect("iteration 0 always present");
    let tiers = ranking::assign_tiers(&loaded.network, last, &rank_config);
    write_tiers(&mut out, &loaded.network, last, &tiers)?;
    write_predictions(&mut out, &loaded, last, &tiers, threshold)?;

    let mut network = loaded.network.clone();
    network.set_scores(&last.scores);
    out.json("network.json", &network.to_export())?;

    if eval::Labels::from_docs(&loaded.docs).is_ok() {
        manifest.eval = Some(eval_config);
        let report = eval::evaluate(
            &loaded.docs,
            &loaded.network,
            &snapshots,
            &tiers,
            &eval_config,
        )?;
        write_report(&mut out, &report)?;
    } else {
        log::warn!("corpus is unlabeled; skipping evaluation");
    }
    write_manifest(&mut out, manifest)
}
