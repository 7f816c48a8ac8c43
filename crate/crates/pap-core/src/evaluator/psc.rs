//! Part State Correctness: per-frame matching and per-video aggregation.

use crate::anno::{
    FrameAnnotation, PartGroup, PersonPrediction, PredictionSet, VideoAnnotation, VideoPrediction,
};

use super::{iou, EvalError, MatchPolicy};

/// Correct/total part instance counts for one part group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroupCount {
    pub correct: usize,
    pub total: usize,
}

impl GroupCount {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

/// Matching outcome for one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameScore {
    pub frame_idx: u32,
    pub correct_parts: usize,
    pub total_parts: usize,
    pub matched_persons: usize,
    pub group_counts: [GroupCount; 6],
}

/// Match one frame's predicted persons against ground truth and count
/// correct part instances.
///
/// Predictions are taken in descending confidence order (stable on ties);
/// each claims the unmatched ground-truth person with the highest IoU at or
/// above the policy threshold (lowest index on IoU ties). Within a matched
/// pair, a ground-truth part is correct iff the prediction has a part of
/// the same category with part-box IoU at or above the threshold and an
/// equal state. Parts of unmatched ground-truth persons count as incorrect.
pub fn frame_psc(
    gt: &FrameAnnotation,
    pred_persons: &[PersonPrediction],
    policy: &MatchPolicy,
) -> FrameScore {
    let mut order: Vec<usize> = (0..pred_persons.len()).collect();
    order.sort_by(|&a, &b| {
        pred_persons[b]
            .confidence
            .get()
            .total_cmp(&pred_persons[a].confidence.get())
    });

    let mut gt_matched: Vec<Option<usize>> = vec![None; gt.persons.len()];
    for pred_idx in order {
        let pred = &pred_persons[pred_idx];
        let mut best: Option<(usize, f64)> = None;
        for (gt_idx, gt_person) in gt.persons.iter().enumerate() {
            if gt_matched[gt_idx].is_some() {
                continue;
            }
            let overlap = iou(&pred.bbox, &gt_person.bbox);
            if overlap < policy.iou_threshold() {
                continue;
            }
            // strict > keeps the lowest ground-truth index on ties
            if best.map_or(true, |(_, b)| overlap > b) {
                best = Some((gt_idx, overlap));
            }
        }
        if let Some((gt_idx, _)) = best {
            gt_matched[gt_idx] = Some(pred_idx);
        }
    }

    let mut score = FrameScore {
        frame_idx: gt.frame_idx,
        correct_parts: 0,
        total_parts: 0,
        matched_persons: gt_matched.iter().flatten().count(),
        group_counts: [GroupCount::default(); 6],
    };
    for (gt_person, matched) in gt.persons.iter().zip(&gt_matched) {
        for gt_part in &gt_person.parts {
            let group = gt_part.category.group().index();
            score.total_parts += 1;
            score.group_counts[group].total += 1;
            let correct = matched.is_some_and(|pred_idx| {
                pred_persons[pred_idx].parts.iter().any(|pred_part| {
                    pred_part.category == gt_part.category
                        && pred_part.state == gt_part.state
                        && iou(&pred_part.bbox, &gt_part.bbox) >= policy.iou_threshold()
                })
            });
            if correct {
                score.correct_parts += 1;
                score.group_counts[group].correct += 1;
            }
        }
    }
    score
}

/// Per-video Part State Correctness with its per-frame breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct PscResult {
    pub video_id: String,
    /// Correct part instances over all ground-truth part instances of the
    /// video; 0 when the video has no ground-truth parts.
    pub psc: f64,
    /// Whether the predicted top-1 video action equals the ground truth.
    pub video_correct: bool,
    pub correct_parts: usize,
    pub total_parts: usize,
    pub frames: Vec<FrameScore>,
    pub group_counts: [GroupCount; 6],
}

/// Score one video. A missing prediction yields psc 0 and an incorrect
/// video action; frames absent from the prediction score as empty.
pub fn video_psc(
    gt: &VideoAnnotation,
    pred: Option<&VideoPrediction>,
    policy: &MatchPolicy,
) -> PscResult {
    let mut frames = Vec::with_capacity(gt.frames.len());
    let mut correct_parts = 0;
    let mut total_parts = 0;
    let mut group_counts = [GroupCount::default(); 6];
    for gt_frame in &gt.frames {
        let pred_persons = pred
            .and_then(|p| p.frame(gt_frame.frame_idx))
            .map_or(&[][..], |f| f.persons.as_slice());
        let frame = frame_psc(gt_frame, pred_persons, policy);
        correct_parts += frame.correct_parts;
        total_parts += frame.total_parts;
        for g in 0..6 {
            group_counts[g].correct += frame.group_counts[g].correct;
            group_counts[g].total += frame.group_counts[g].total;
        }
        frames.push(frame);
    }
    PscResult {
        video_id: gt.video_id.clone(),
        psc: if total_parts == 0 {
            0.0
        } else {
            correct_parts as f64 / total_parts as f64
        },
        video_correct: pred.is_some_and(|p| p.action == gt.action),
        correct_parts,
        total_parts,
        frames,
        group_counts,
    }
}

/// Dataset-level summary of a scored prediction set.
#[derive(Debug, Clone)]
pub struct DatasetScore {
    pub per_video: Vec<PscResult>,
    /// Fraction of videos with a correct top-1 action.
    pub video_accuracy: f64,
    /// Unweighted mean of per-video psc values.
    pub mean_psc: f64,
    /// ROC score over (video_correct, psc) pairs.
    pub roc_score: f64,
    /// Per-group part counts pooled over every video.
    pub group_counts: [GroupCount; 6],
}

impl DatasetScore {
    pub fn group_accuracy(&self, group: PartGroup) -> f64 {
        self.group_counts[group.index()].accuracy()
    }
}

/// Aggregate per-video results in their given order. Deterministic: the
/// same vector always produces bit-identical summaries, regardless of how
/// its entries were computed.
pub fn summarize(per_video: Vec<PscResult>) -> Result<DatasetScore, EvalError> {
    if per_video.is_empty() {
        return Err(EvalError::EmptyResults);
    }
    let n = per_video.len() as f64;
    let n_correct = per_video.iter().filter(|r| r.video_correct).count();
    let mean_psc = per_video.iter().map(|r| r.psc).sum::<f64>() / n;
    let pairs: Vec<(bool, f64)> = per_video.iter().map(|r| (r.video_correct, r.psc)).collect();
    let roc = super::roc_score(&pairs)?;
    let mut group_counts = [GroupCount::default(); 6];
    for r in &per_video {
        for g in 0..6 {
            group_counts[g].correct += r.group_counts[g].correct;
            group_counts[g].total += r.group_counts[g].total;
        }
    }
    Ok(DatasetScore {
        video_accuracy: n_correct as f64 / n,
        mean_psc,
        roc_score: roc,
        per_video,
        group_counts,
    })
}

/// Score a whole dataset sequentially in video order.
pub fn score_dataset(
    gt: &[VideoAnnotation],
    preds: &PredictionSet,
    policy: &MatchPolicy,
) -> Result<DatasetScore, EvalError> {
    summarize(
        gt.iter()
            .map(|video| video_psc(video, preds.video(&video.video_id), policy))
            .collect(),
    )
}
