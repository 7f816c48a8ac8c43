use std::fs;
use std::path::PathBuf;

use anyhow::Context as _;
use rayon::prelude::*;

use pap_core::anno::json::write_dataset;
use pap_core::synth::{
    crop_filename, default_vocabulary, generate_video, PersonCrop, SynthConfig,
};

use crate::config::pick;
use crate::Context;

use super::{emit, Manifest, ManifestEntry};

#[derive(clap::Args)]
pub struct Args {
    /// Output directory for annotations.json, manifest.json and crops/
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// Number of videos (default 8)
    #[arg(long)]
    pub n_videos: Option<usize>,

    /// Frames per video (default 30)
    #[arg(long)]
    pub frames: Option<usize>,

    /// Minimum persons per frame (default 1)
    #[arg(long)]
    pub persons_min: Option<usize>,

    /// Maximum persons per frame (default 3)
    #[arg(long)]
    pub persons_max: Option<usize>,

    /// Frame width in pixels (default 320)
    #[arg(long)]
    pub width: Option<u32>,

    /// Frame height in pixels (default 240)
    #[arg(long)]
    pub height: Option<u32>,

    /// Modal state probability per (action, group) pair (default 0.977)
    #[arg(long)]
    pub skew: Option<f64>,

    /// Keypoint jitter around the stick-figure template, pixels (default 2)
    #[arg(long)]
    pub jitter: Option<f64>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let defaults = SynthConfig::default();
    let file = &ctx.file;
    let cfg = SynthConfig {
        seed: ctx.seed,
        n_videos: pick(args.n_videos, file.n_videos, defaults.n_videos),
        frames_per_video: pick(args.frames, file.frames, defaults.frames_per_video),
        persons_per_frame: (
            pick(args.persons_min, file.persons_min, defaults.persons_per_frame.0),
            pick(args.persons_max, file.persons_max, defaults.persons_per_frame.1),
        ),
        image_size: (
            pick(args.width, file.width, defaults.image_size.0),
            pick(args.height, file.height, defaults.image_size.1),
        ),
        state_skew: pick(args.skew, file.skew, defaults.state_skew),
        keypoint_jitter: pick(args.jitter, file.jitter, defaults.keypoint_jitter),
    };
    cfg.validate()?;

    // per-video sub-seeds make parallel generation identical to sequential
    let generated: Vec<_> = (0..cfg.n_videos)
        .into_par_iter()
        .map(|idx| generate_video(&cfg, idx))
        .collect();
    let vocab = default_vocabulary();
    let videos: Vec<_> = generated.iter().map(|(v, _)| v.clone()).collect();
    let crops: Vec<&PersonCrop> = generated.iter().flat_map(|(_, c)| c).collect();

    let crops_dir = args.out.join("crops");
    fs::create_dir_all(&crops_dir)
        .with_context(|| format!("failed to create {}", crops_dir.display()))?;

    write_dataset(&args.out.join("annotations.json"), &vocab, &videos)?;

    let entries: Vec<ManifestEntry> = crops
        .iter()
        .map(|crop| ManifestEntry {
            video_id: crop.video_id.clone(),
            frame_idx: crop.frame_idx,
            person_idx: crop.person_idx,
            file: format!(
                "crops/{}",
                crop_filename(&crop.video_id, crop.frame_idx, crop.person_idx)
            ),
        })
        .collect();
    crops.par_iter().zip(&entries).try_for_each(|(crop, entry)| {
        crop.image.save_png(&args.out.join(&entry.file))
    })?;

    let mut manifest = serde_json::to_string_pretty(&Manifest { crops: entries })?;
    manifest.push('\n');
    emit(Some(&args.out.join("manifest.json")), &manifest)?;

    eprintln!(
        "generated {} videos and {} crops under {}",
        videos.len(),
        crops.len(),
        args.out.display()
    );
    Ok(())
}
