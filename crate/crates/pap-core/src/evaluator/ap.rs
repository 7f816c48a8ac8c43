//! Single-category detection average precision.
//!
//! Predictions are ranked by descending confidence and greedily assigned to
//! ground truth (each ground-truth box matched at most once, IoU at or
//! above the threshold, highest IoU first). AP is the area under the
//! precision-recall curve with the precision envelope (all-point
//! interpolation, the modern convention), not the legacy 11-point grid.

use std::collections::HashMap;

use crate::anno::BBox;

use super::{iou, EvalError};

/// Average precision over boxes grouped by an opaque image key.
///
/// Returns `Ok(None)` when there are no ground-truth boxes: AP is undefined
/// and reported as absent rather than as 0 or 1.
pub fn average_precision(
    gt_boxes: &[(u64, BBox)],
    predictions: &[(u64, BBox, f64)],
    iou_threshold: f64,
) -> Result<Option<f64>, EvalError> {
    if !(iou_threshold.is_finite() && 0.0 < iou_threshold && iou_threshold <= 1.0) {
        return Err(EvalError::InvalidThreshold(iou_threshold));
    }
    for &(_, _, confidence) in predictions {
        if !confidence.is_finite() {
            return Err(EvalError::InvalidConfidence(confidence));
        }
    }
    if gt_boxes.is_empty() {
        return Ok(None);
    }
    if predictions.is_empty() {
        return Ok(Some(0.0));
    }

    // ground-truth indices per image, in input order
    let mut gt_by_image: HashMap<u64, Vec<usize>> = HashMap::new();
    for (gi, &(image, _)) in gt_boxes.iter().enumerate() {
        gt_by_image.entry(image).or_default().push(gi);
    }

    let mut order: Vec<usize> = (0..predictions.len()).collect();
    // stable sort: equal confidences keep input order
    order.sort_by(|&a, &b| predictions[b].2.total_cmp(&predictions[a].2));

    let mut gt_used = vec![false; gt_boxes.len()];
    let mut tp_flags = Vec::with_capacity(predictions.len());
    for pred_idx in order {
        let (image, pred_box, _) = &predictions[pred_idx];
        let mut best: Option<(usize, f64)> = None;
        if let Some(candidates) = gt_by_image.get(image) {
            for &gi in candidates {
                if gt_used[gi] {
                    continue;
                }
                let overlap = iou(pred_box, &gt_boxes[gi].1);
                if overlap < iou_threshold {
                    continue;
                }
                if best.map_or(true, |(_, b)| overlap > b) {
                    best = Some((gi, overlap));
                }
            }
        }
        match best {
            Some((gi, _)) => {
                gt_used[gi] = true;
                tp_flags.push(true);
            }
            None => tp_flags.push(false),
        }
    }

    let n_gt = gt_boxes.len() as f64;
    let n = tp_flags.len();
    let mut precisions = Vec::with_capacity(n);
    let mut recalls = Vec::with_capacity(n);
    let mut tp = 0usize;
    for (k, &is_tp) in tp_flags.iter().enumerate() {
        if is_tp {
            tp += 1;
        }
        precisions.push(tp as f64 / (k + 1) as f64);
        recalls.push(tp as f64 / n_gt);
    }

    // precision envelope from the right
    for k in (0..n - 1).rev() {
        precisions[k] = precisions[k].max(precisions[k + 1]);
    }

    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for k in 0..n {
        if tp_flags[k] {
            ap += (recalls[k] - prev_recall) * precisions[k];
            prev_recall = recalls[k];
        }
    }
    Ok(Some(ap))
}
