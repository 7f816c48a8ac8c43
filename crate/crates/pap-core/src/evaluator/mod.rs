//! Scoring protocol: IoU, part state correctness, the ROC score, detection
//! average precision, and the frame-vs-segment inference cost model.
//!
//! The matching protocol is normative for this toolkit: persons are matched
//! one-to-one, predictions in descending confidence order, each taking the
//! highest-IoU unmatched ground-truth person at or above the IoU threshold.
//! A ground-truth part instance is correct iff its person matched and the
//! matched prediction carries a part of the same category with IoU at or
//! above the threshold and an equal state. An exhaustive-assignment oracle
//! for auditing this greedy protocol lives in the acceptance test suite.
//!
//! Every operation is pure. Scores merge in a fixed order (and the ROC
//! integration sorts and compensates its summation), so parallel evaluation
//! is bit-identical to sequential.

use thiserror::Error;

use crate::anno::BBox;

mod ap;
mod cost;
mod psc;
mod roc;

pub use ap::average_precision;
pub use cost::{cost_model, CostConfig, CostMode};
pub use psc::{frame_psc, score_dataset, summarize, DatasetScore, FrameScore, GroupCount,
              video_psc, PscResult};
pub use roc::{roc_curve, roc_score, RocCurve, RocPoint};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("result list must not be empty")]
    EmptyResults,
    #[error("psc values must be finite and in [0, 1], got {0}")]
    InvalidPsc(f64),
    #[error("IoU threshold must be in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("prediction confidence must be finite, got {0}")]
    InvalidConfidence(f64),
    #[error("invalid cost parameter: {0}")]
    InvalidCost(String),
}

/// Person/part matching parameters for one evaluation run.
#[derive(Debug, Clone, Copy)]
pub struct MatchPolicy {
    iou_threshold: f64,
}

impl MatchPolicy {
    pub fn new(iou_threshold: f64) -> Result<Self, EvalError> {
        if iou_threshold.is_finite() && 0.0 < iou_threshold && iou_threshold <= 1.0 {
            Ok(MatchPolicy { iou_threshold })
        } else {
            Err(EvalError::InvalidThreshold(iou_threshold))
        }
    }

    pub fn iou_threshold(&self) -> f64 {
        self.iou_threshold
    }
}

impl Default for MatchPolicy {
    fn default() -> Self {
        MatchPolicy { iou_threshold: 0.5 }
    }
}

/// Intersection over union of two boxes; 0 when disjoint.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let ix = (a.x_max().min(b.x_max()) - a.x_min().max(b.x_min())).max(0.0);
    let iy = (a.y_max().min(b.y_max()) - a.y_min().max(b.y_min())).max(0.0);
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    inter / union
}
