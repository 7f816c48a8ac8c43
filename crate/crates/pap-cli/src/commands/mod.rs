use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub mod baseline;
pub mod cost;
pub mod gen;
pub mod refine;
pub mod render;
pub mod score;
pub mod score_det;
pub mod segments;
pub mod validate;

/// Maps every generated person instance to its crop PNG. Written by
/// `gen-synthetic`, read by `render-pose`. Crop paths are relative to the
/// manifest's directory.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub crops: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub video_id: String,
    pub frame_idx: u32,
    pub person_idx: usize,
    pub file: String,
}

/// Write `text` to `out`, or to standard output when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| anyhow::anyhow!("failed to write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
