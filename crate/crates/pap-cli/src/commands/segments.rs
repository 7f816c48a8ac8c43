use std::path::PathBuf;

use serde::Serialize;

use pap_core::anno::json::parse_dataset;
use pap_core::segmenter::{split_segments, tag_segment};

use crate::config::pick;
use crate::Context;

use super::emit;

#[derive(clap::Args)]
pub struct Args {
    /// Annotation file to segment
    #[arg(long, value_name = "PATH")]
    pub anno: PathBuf,

    /// Nominal segment duration in seconds (default 3.0)
    #[arg(long)]
    pub duration: Option<f64>,

    /// Output path; standard output when omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SegmentRecord<'a> {
    video_id: &'a str,
    start_frame: u32,
    end_frame: u32,
    group: &'a str,
    composite: &'a str,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let duration = pick(args.duration, ctx.file.duration, 3.0);
    let (vocab, videos) = parse_dataset(&args.anno)?;
    let mut labels = Vec::new();
    for video in &videos {
        for segment in split_segments(video, duration)? {
            labels.extend(tag_segment(video, &segment, &vocab)?);
        }
    }
    let records: Vec<SegmentRecord> = labels
        .iter()
        .map(|label| SegmentRecord {
            video_id: &label.segment.video_id,
            start_frame: label.segment.start_frame,
            end_frame: label.segment.end_frame,
            group: label.group.name(),
            composite: &label.composite,
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&records)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    eprintln!(
        "tagged {} segment labels across {} videos",
        records.len(),
        videos.len()
    );
    Ok(())
}
