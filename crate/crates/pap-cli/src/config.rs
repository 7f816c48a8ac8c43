//! Optional key-value config file. Keys mirror the long flags; a flag given
//! on the command line always wins over the file value.

use std::fs;
use std::path::Path;

use anyhow::Context as _;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,

    // scoring
    pub iou: Option<f64>,

    // segmenting
    pub duration: Option<f64>,

    // pose embedding / refinement
    pub radius_ratio: Option<f64>,
    pub radius_min: Option<f64>,
    pub conf_threshold: Option<f64>,
    pub palette_size: Option<usize>,
    pub margin: Option<f64>,

    // synthetic generation
    pub n_videos: Option<usize>,
    pub frames: Option<usize>,
    pub persons_min: Option<usize>,
    pub persons_max: Option<usize>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub skew: Option<f64>,
    pub jitter: Option<f64>,

    // cost model
    pub clips: Option<u32>,
    pub flops_per_clip: Option<f64>,
    pub keyframe_interval: Option<f64>,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("failed to read config {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text)
            .with_context(|| format!("invalid JSON config {}", path.display()))?
    } else {
        toml::from_str(&text)
            .with_context(|| format!("invalid TOML config {}", path.display()))?
    };
    Ok(parsed)
}

/// First of: explicit flag, config-file value, built-in default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
