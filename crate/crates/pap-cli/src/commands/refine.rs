use std::path::PathBuf;

use pap_core::anno::json::{parse_dataset, parse_predictions, write_predictions};
use pap_core::anno::PredictionSet;
use pap_core::pose_embed::{refine_box, DEFAULT_CONF_THRESHOLD};

use crate::config::pick;
use crate::Context;

#[derive(clap::Args)]
pub struct Args {
    /// Annotation file supplying the vocabulary
    #[arg(long, value_name = "PATH")]
    pub anno: PathBuf,

    /// Prediction file whose person boxes are refined
    #[arg(long, value_name = "PATH")]
    pub pred: PathBuf,

    /// Output prediction file
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// Keypoints below this confidence are ignored (default 0.3)
    #[arg(long)]
    pub conf_threshold: Option<f64>,

    /// Extra margin around the refined box, pixels (default 0)
    #[arg(long)]
    pub margin: Option<f64>,

    /// Clip refined boxes to this frame width (requires --clip-height)
    #[arg(long, requires = "clip_height")]
    pub clip_width: Option<f64>,

    /// Clip refined boxes to this frame height (requires --clip-width)
    #[arg(long, requires = "clip_width")]
    pub clip_height: Option<f64>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let file = &ctx.file;
    let conf_threshold = pick(args.conf_threshold, file.conf_threshold, DEFAULT_CONF_THRESHOLD);
    let margin = pick(args.margin, file.margin, 0.0);
    let bounds = args.clip_width.zip(args.clip_height);

    let (vocab, _) = parse_dataset(&args.anno)?;
    let preds = parse_predictions(&args.pred, &vocab)?;

    let mut refined = 0usize;
    let mut videos = preds.into_videos();
    for video in &mut videos {
        for frame in &mut video.frames {
            for person in &mut frame.persons {
                if let Some(pose) = &person.pose {
                    person.bbox = refine_box(&person.bbox, pose, conf_threshold, margin, bounds)?;
                    refined += 1;
                }
            }
        }
    }
    let out_set = PredictionSet::new(videos)?;
    write_predictions(&args.out, &out_set, &vocab)?;
    eprintln!("refined {refined} person boxes into {}", args.out.display());
    Ok(())
}
