//! `pap` — one binary exposing every pipeline stage as a subcommand.
//!
//! Exit codes: 0 on success, 1 on validation or runtime failure, 2 on
//! usage errors. Diagnostics go to standard error; results go to standard
//! output or the path named by `--out`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "pap",
    version,
    about = "Part-level action parsing toolkit: synthetic data, segment \
             pseudo-labels, pose embedding, baselines and scoring"
)]
struct Cli {
    /// Key-value config file (TOML, or JSON when it starts with '{');
    /// explicit flags take precedence over file values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed for randomized subcommands (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; any value produces byte-identical results (default 1)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate annotation (and optionally prediction) files
    Validate(commands::validate::Args),
    /// Generate a seeded synthetic dataset with crops and a manifest
    GenSynthetic(commands::gen::Args),
    /// Split videos into segments and emit their six pseudo-labels each
    MakeSegments(commands::segments::Args),
    /// Composite keypoint disks onto person crops
    RenderPose(commands::render::Args),
    /// Grow predicted person boxes to cover confident pose keypoints
    RefineBoxes(commands::refine::Args),
    /// Fit a baseline on a training set and predict a test set
    BaselinePredict(commands::baseline::Args),
    /// Score predictions: video accuracy, mean PSC and ROC score
    Score(commands::score::Args),
    /// Score detections: AP and AP@50 per category
    ScoreDet(commands::score_det::Args),
    /// Estimate recognizer TFLOPs for frame- vs segment-level prediction
    Cost(commands::cost::Args),
}

/// Values shared by every subcommand after merging flags over the config
/// file.
pub struct Context {
    pub file: FileConfig,
    pub seed: u64,
    pub jobs: usize,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = config::load(cli.config.as_deref())?;
    let ctx = Context {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        jobs: cli.jobs.or(file.jobs).unwrap_or(1).max(1),
        file,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs)
        .build()?;
    pool.install(|| match cli.command {
        Command::Validate(args) => commands::validate::run(&ctx, args),
        Command::GenSynthetic(args) => commands::gen::run(&ctx, args),
        Command::MakeSegments(args) => commands::segments::run(&ctx, args),
        Command::RenderPose(args) => commands::render::run(&ctx, args),
        Command::RefineBoxes(args) => commands::refine::run(&ctx, args),
        Command::BaselinePredict(args) => commands::baseline::run(&ctx, args),
        Command::Score(args) => commands::score::run(&ctx, args),
        Command::ScoreDet(args) => commands::score_det::run(&ctx, args),
        Command::Cost(args) => commands::cost::run(&ctx, args),
    })
}

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
