use std::path::PathBuf;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::json;

use pap_core::anno::json::{parse_dataset, parse_predictions};
use pap_core::evaluator::{summarize, video_psc, MatchPolicy, PscResult};

use crate::config::pick;
use crate::Context;

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(clap::Args)]
pub struct Args {
    /// Ground-truth annotation file
    #[arg(long, value_name = "PATH")]
    pub gt: PathBuf,

    /// Prediction file
    #[arg(long, value_name = "PATH")]
    pub pred: PathBuf,

    /// IoU threshold for person and part matching (default 0.5)
    #[arg(long)]
    pub iou: Option<f64>,

    /// Write a per-video CSV report (video_id, psc, video_correct)
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Output format for the summary (default text)
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let policy = MatchPolicy::new(pick(args.iou, ctx.file.iou, 0.5))?;
    let (vocab, videos) = parse_dataset(&args.gt)?;
    let preds = parse_predictions(&args.pred, &vocab)?;

    // per-video scoring is embarrassingly parallel; collect preserves the
    // ground-truth video order, so the summary is identical for any --jobs
    let per_video: Vec<PscResult> = videos
        .par_iter()
        .map(|video| video_psc(video, preds.video(&video.video_id), &policy))
        .collect();
    let score = summarize(per_video)?;

    match args.format {
        Format::Text => {
            println!("video top-1 accuracy: {:.2}%", 100.0 * score.video_accuracy);
            println!("mean PSC: {:.2}%", 100.0 * score.mean_psc);
            println!("ROC score: {:.2}%", 100.0 * score.roc_score);
        }
        Format::Json => {
            let value = json!({
                "videos": score.per_video.len(),
                "video_top1_accuracy": score.video_accuracy,
                "mean_psc": score.mean_psc,
                "roc_score": score.roc_score,
            });
            println!("{value}");
        }
        Format::Csv => {
            println!("videos,video_top1_accuracy,mean_psc,roc_score");
            println!(
                "{},{},{},{}",
                score.per_video.len(),
                score.video_accuracy,
                score.mean_psc,
                score.roc_score
            );
        }
    }

    if let Some(report) = &args.report {
        let mut writer = csv::Writer::from_path(report)
            .map_err(|e| anyhow::anyhow!("failed to open {}: {e}", report.display()))?;
        writer.write_record(["video_id", "psc", "video_correct"])?;
        for result in &score.per_video {
            writer.write_record([
                result.video_id.as_str(),
                &result.psc.to_string(),
                &result.video_correct.to_string(),
            ])?;
        }
        writer.flush()?;
    }
    Ok(())
}
