//! Fixed-duration video segments and their part-level pseudo-labels.
//!
//! A video is split into contiguous segments of `round(duration_s * fps)`
//! frames (the last one may be shorter, never empty). Each segment gets
//! exactly six pseudo-labels, one per part group: the video action, the
//! group, and the group's modal frame-level state over every part instance
//! in the segment, rendered as `"(<action>) <group>: <state>"`.
//!
//! Modal ties resolve to the lowest state id; since `"none"` is id 0, ties
//! involving it resolve to `"none"`. A group with no instances in the
//! segment is labeled `"none"`.

use thiserror::Error;

use crate::anno::{PartGroup, StateId, VideoAnnotation, Vocabulary};

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("segment duration must be > 0 seconds, got {0}")]
    InvalidDuration(f64),
    #[error("video {0:?} has no annotated frames")]
    EmptyVideo(String),
    #[error("segment belongs to video {segment:?}, not {video:?}")]
    WrongVideo { segment: String, video: String },
    #[error(
        "segment [{start}, {end}) is out of range for video {video_id:?} with {total} frames"
    )]
    OutOfRange {
        video_id: String,
        start: u32,
        end: u32,
        total: u32,
    },
}

/// A half-open frame-index range `[start_frame, end_frame)` of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub video_id: String,
    pub start_frame: u32,
    pub end_frame: u32,
    /// Actual span in seconds: `(end_frame - start_frame) / fps`.
    pub duration_s: f64,
}

impl Segment {
    pub fn contains(&self, frame_idx: u32) -> bool {
        (self.start_frame..self.end_frame).contains(&frame_idx)
    }

    pub fn n_frames(&self) -> u32 {
        self.end_frame - self.start_frame
    }
}

/// One of the six per-segment pseudo-labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPseudoLabel {
    pub segment: Segment,
    pub group: PartGroup,
    pub video_action: crate::anno::ActionId,
    pub modal_state: StateId,
    /// `"(<video_action>) <group>: <state>"`, regenerable from the ids.
    pub composite: String,
}

/// Render the composite label string for one (action, group, state) triple.
pub fn composite_label(
    vocab: &Vocabulary,
    action: crate::anno::ActionId,
    group: PartGroup,
    state: StateId,
) -> String {
    format!(
        "({}) {}: {}",
        vocab.action_name(action).unwrap_or("?"),
        group.name(),
        vocab.state_name(state).unwrap_or("?")
    )
}

/// Split a video into contiguous segments of nominally `duration_s` seconds.
///
/// Segment length in frames is `round(duration_s * fps)`, at least 1. The
/// union of the returned segments covers `[0, total_frames)` exactly; the
/// last segment may be shorter than the rest.
pub fn split_segments(
    video: &VideoAnnotation,
    duration_s: f64,
) -> Result<Vec<Segment>, SegmentError> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(SegmentError::InvalidDuration(duration_s));
    }
    if video.frames.is_empty() {
        return Err(SegmentError::EmptyVideo(video.video_id.clone()));
    }
    let total = video.total_frames();
    let span = ((duration_s * video.fps).round() as u32).max(1);
    let mut segments = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + span).min(total);
        segments.push(Segment {
            video_id: video.video_id.clone(),
            start_frame: start,
            end_frame: end,
            duration_s: (end - start) as f64 / video.fps,
        });
        start = end;
    }
    Ok(segments)
}

fn check_segment(video: &VideoAnnotation, seg: &Segment) -> Result<(), SegmentError> {
    if seg.video_id != video.video_id {
        return Err(SegmentError::WrongVideo {
            segment: seg.video_id.clone(),
            video: video.video_id.clone(),
        });
    }
    let total = video.total_frames();
    if seg.start_frame >= seg.end_frame || seg.end_frame > total {
        return Err(SegmentError::OutOfRange {
            video_id: video.video_id.clone(),
            start: seg.start_frame,
            end: seg.end_frame,
            total,
        });
    }
    Ok(())
}

/// Per-group state counts over every part instance in a segment.
fn group_state_counts(
    video: &VideoAnnotation,
    seg: &Segment,
) -> [std::collections::BTreeMap<StateId, usize>; 6] {
    let mut counts: [std::collections::BTreeMap<StateId, usize>; 6] = Default::default();
    for frame in &video.frames {
        if !seg.contains(frame.frame_idx) {
            continue;
        }
        for person in &frame.persons {
            for part in &person.parts {
                *counts[part.category.group().index()]
                    .entry(part.state)
                    .or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Modal state of a count table; ties resolve to the lowest state id, and
/// an empty table yields `"none"`.
fn modal_state(counts: &std::collections::BTreeMap<StateId, usize>) -> StateId {
    let mut best = StateId::NONE;
    let mut best_count = 0;
    // BTreeMap iterates in ascending id order, so `>` keeps the lowest id
    // among tied counts.
    for (&state, &count) in counts {
        if count > best_count {
            best = state;
            best_count = count;
        }
    }
    best
}

/// Derive the six pseudo-labels of one segment, in [`PartGroup::ALL`] order.
pub fn tag_segment(
    video: &VideoAnnotation,
    seg: &Segment,
    vocab: &Vocabulary,
) -> Result<Vec<SegmentPseudoLabel>, SegmentError> {
    check_segment(video, seg)?;
    let counts = group_state_counts(video, seg);
    Ok(PartGroup::ALL
        .iter()
        .map(|&group| {
            let state = modal_state(&counts[group.index()]);
            SegmentPseudoLabel {
                segment: seg.clone(),
                group,
                video_action: video.action,
                modal_state: state,
                composite: composite_label(vocab, video.action, group, state),
            }
        })
        .collect())
}

/// Fraction of a group's instances in the segment that carry the modal
/// state. A group with no instances counts as 1.0: broadcasting its label
/// loses nothing.
pub fn modal_fraction(
    video: &VideoAnnotation,
    seg: &Segment,
    group: PartGroup,
) -> Result<f64, SegmentError> {
    check_segment(video, seg)?;
    let counts = &group_state_counts(video, seg)[group.index()];
    let total: usize = counts.values().sum();
    if total == 0 {
        return Ok(1.0);
    }
    let modal = counts[&modal_state(counts)];
    Ok(modal as f64 / total as f64)
}
