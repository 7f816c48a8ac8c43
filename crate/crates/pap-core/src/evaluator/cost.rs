//! Inference cost model: frame-level vs segment-level recognition.
//!
//! Only recognizer inference is counted (detection and pose estimation run
//! in both regimes and cancel out of the comparison). A "unit" is one
//! recognizer invocation site: a keyframe in frame mode, a segment in
//! segment mode. Each unit samples a fixed number of clips at test time,
//! and each clip costs a fixed number of TFLOPs.

use super::EvalError;

/// Prediction granularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostMode {
    /// One recognizer unit per keyframe.
    Frame,
    /// One recognizer unit per segment of the given duration.
    Segment { segment_duration_s: f64 },
}

/// Recognizer sampling parameters.
///
/// `frames_per_clip` and `frame_stride` describe the clip sampling scheme
/// (32 frames at stride 2 by default) and document what a "clip" is; the
/// cost estimate itself is driven by `clips_per_unit` and `flops_per_clip`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostConfig {
    pub clips_per_unit: u32,
    pub frames_per_clip: u32,
    pub frame_stride: u32,
    /// TFLOPs per clip forward pass.
    pub flops_per_clip: f64,
    pub fps: f64,
    pub keyframe_interval_s: f64,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig {
            clips_per_unit: 7,
            frames_per_clip: 32,
            frame_stride: 2,
            flops_per_clip: 1.0,
            fps: 30.0,
            keyframe_interval_s: 1.0,
        }
    }
}

impl CostConfig {
    fn validate(&self) -> Result<(), EvalError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(EvalError::InvalidCost(format!("{name} must be > 0, got {v}")))
            }
        };
        if self.clips_per_unit == 0 || self.frames_per_clip == 0 || self.frame_stride == 0 {
            return Err(EvalError::InvalidCost(
                "clip counts and stride must be >= 1".to_string(),
            ));
        }
        positive("flops_per_clip", self.flops_per_clip)?;
        positive("fps", self.fps)?;
        positive("keyframe_interval_s", self.keyframe_interval_s)
    }
}

/// Estimated recognizer TFLOPs for one video.
///
/// Frame mode runs one unit per keyframe: keyframes sit at multiples of
/// `keyframe_interval_s` strictly before the video end, so the unit count
/// is `ceil(duration / keyframe_interval)`. Segment mode runs
/// `ceil(duration / segment_duration)` units (a segment longer than the
/// video still costs one unit). The estimate is
/// `units * clips_per_unit * flops_per_clip`. Unit counts are computed in
/// `f64`; intervals whose ratios are exactly representable (the defaults
/// are) produce exact counts.
pub fn cost_model(
    video_duration_s: f64,
    mode: CostMode,
    cfg: &CostConfig,
) -> Result<f64, EvalError> {
    cfg.validate()?;
    if !(video_duration_s.is_finite() && video_duration_s > 0.0) {
        return Err(EvalError::InvalidCost(format!(
            "video duration must be > 0, got {video_duration_s}"
        )));
    }
    let units = match mode {
        CostMode::Frame => (video_duration_s / cfg.keyframe_interval_s).ceil(),
        CostMode::Segment { segment_duration_s } => {
            if !(segment_duration_s.is_finite() && segment_duration_s > 0.0) {
                return Err(EvalError::InvalidCost(format!(
                    "segment duration must be > 0, got {segment_duration_s}"
                )));
            }
            (video_duration_s / segment_duration_s).ceil()
        }
    };
    Ok(units * cfg.clips_per_unit as f64 * cfg.flops_per_clip)
}
