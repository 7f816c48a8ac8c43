use clap::ValueEnum;

use pap_core::evaluator::{cost_model, CostConfig, CostMode};

use crate::config::pick;
use crate::Context;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Frame,
    Segment,
}

#[derive(clap::Args)]
pub struct Args {
    /// Video duration in seconds
    #[arg(long)]
    pub duration: f64,

    /// Prediction granularity
    #[arg(long, value_enum)]
    pub mode: Mode,

    /// Segment duration in seconds, segment mode only (default 3.0)
    #[arg(long)]
    pub segment_duration: Option<f64>,

    /// Clips sampled per unit at test time (default 7)
    #[arg(long)]
    pub clips: Option<u32>,

    /// TFLOPs per clip forward pass (default 1.0)
    #[arg(long)]
    pub flops_per_clip: Option<f64>,

    /// Keyframe spacing in seconds for frame mode (default 1.0)
    #[arg(long)]
    pub keyframe_interval: Option<f64>,

    /// Video frame rate (default 30)
    #[arg(long)]
    pub fps: Option<f64>,

    /// Frames per sampled clip (default 32)
    #[arg(long)]
    pub frames_per_clip: Option<u32>,

    /// Stride between sampled frames within a clip (default 2)
    #[arg(long)]
    pub frame_stride: Option<u32>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let file = &ctx.file;
    let defaults = CostConfig::default();
    let cfg = CostConfig {
        clips_per_unit: pick(args.clips, file.clips, defaults.clips_per_unit),
        frames_per_clip: args.frames_per_clip.unwrap_or(defaults.frames_per_clip),
        frame_stride: args.frame_stride.unwrap_or(defaults.frame_stride),
        flops_per_clip: pick(args.flops_per_clip, file.flops_per_clip, defaults.flops_per_clip),
        fps: args.fps.unwrap_or(defaults.fps),
        keyframe_interval_s: pick(
            args.keyframe_interval,
            file.keyframe_interval,
            defaults.keyframe_interval_s,
        ),
    };
    let mode = match args.mode {
        Mode::Frame => CostMode::Frame,
        Mode::Segment => CostMode::Segment {
            segment_duration_s: pick(args.segment_duration, file.duration, 3.0),
        },
    };
    let tflops = cost_model(args.duration, mode, &cfg)?;
    println!("{tflops:.4}");
    Ok(())
}
