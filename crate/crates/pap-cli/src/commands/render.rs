use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use rayon::prelude::*;

use pap_core::anno::json::parse_dataset;
use pap_core::anno::VideoAnnotation;
use pap_core::pose_embed::{
    default_palette, render_embedding, EmbedStyle, DEFAULT_CONF_THRESHOLD, DEFAULT_RADIUS_MIN,
    DEFAULT_RADIUS_RATIO,
};
use pap_core::raster::Image;
use pap_core::Pose;

use crate::config::pick;
use crate::Context;

use super::Manifest;

#[derive(clap::Args)]
pub struct Args {
    /// Crop manifest written by gen-synthetic
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,

    /// Annotation file supplying person boxes and poses
    #[arg(long, value_name = "PATH")]
    pub anno: PathBuf,

    /// Directory for the augmented crops
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Disk radius as a fraction of the crop's short side (default 0.02)
    #[arg(long)]
    pub radius_ratio: Option<f64>,

    /// Minimum disk radius in pixels (default 2)
    #[arg(long)]
    pub radius_min: Option<f64>,

    /// Keypoints below this confidence draw nothing (default 0.3)
    #[arg(long)]
    pub conf_threshold: Option<f64>,

    /// Number of palette colors (default 17)
    #[arg(long)]
    pub palette_size: Option<usize>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let file = &ctx.file;
    let style = EmbedStyle::new(
        default_palette(pick(args.palette_size, file.palette_size, Pose::DEFAULT_KEYPOINTS))?,
        pick(args.radius_ratio, file.radius_ratio, DEFAULT_RADIUS_RATIO),
        pick(args.radius_min, file.radius_min, DEFAULT_RADIUS_MIN),
        pick(args.conf_threshold, file.conf_threshold, DEFAULT_CONF_THRESHOLD),
    )?;

    let manifest: Manifest = serde_json::from_str(
        &fs::read_to_string(&args.manifest)
            .with_context(|| format!("failed to read {}", args.manifest.display()))?,
    )
    .context("invalid manifest")?;
    let manifest_dir = args.manifest.parent().unwrap_or(Path::new("."));

    let (_, videos) = parse_dataset(&args.anno)?;
    let by_id: HashMap<&str, &VideoAnnotation> =
        videos.iter().map(|v| (v.video_id.as_str(), v)).collect();

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("failed to create {}", args.out_dir.display()))?;

    let rendered: Vec<bool> = manifest
        .crops
        .par_iter()
        .map(|entry| -> anyhow::Result<bool> {
            let locate = || {
                format!(
                    "{} frame {} person {}",
                    entry.video_id, entry.frame_idx, entry.person_idx
                )
            };
            let person = by_id
                .get(entry.video_id.as_str())
                .and_then(|v| v.frames.iter().find(|f| f.frame_idx == entry.frame_idx))
                .and_then(|f| f.persons.get(entry.person_idx))
                .with_context(|| format!("{} not present in the annotations", locate()))?;
            let crop = Image::load_png(&manifest_dir.join(&entry.file))?;
            let out_name = Path::new(&entry.file)
                .file_name()
                .with_context(|| format!("manifest entry {} has no file name", entry.file))?;
            let out_path = args.out_dir.join(out_name);
            match &person.pose {
                Some(pose) => {
                    // annotation poses are in frame coordinates; the crop's
                    // origin is the person box corner
                    let local = pose.translated(person.bbox.x_min(), person.bbox.y_min());
                    let augmented = render_embedding(&crop, &local, &style)?;
                    augmented.save_png(&out_path)?;
                    Ok(true)
                }
                None => {
                    crop.save_png(&out_path)?;
                    Ok(false)
                }
            }
        })
        .collect::<Result<_, _>>()?;

    let with_pose = rendered.iter().filter(|&&r| r).count();
    eprintln!(
        "rendered {with_pose} crops ({} without pose copied unchanged) into {}",
        rendered.len() - with_pose,
        args.out_dir.display()
    );
    Ok(())
}
