//! Reference predictors and the coarse-to-fine prediction assembler.
//!
//! The modal-state predictor is the baseline implied by the long-tail
//! structure of part states: memorize the most frequent state per
//! (video action, part group) pair on a training set, then broadcast it
//! over oracle boxes. Its frame-level state accuracy on an evaluation set
//! equals, by construction, the instance-weighted mean of its table
//! frequencies on that set — which makes it a sharp oracle for the scorer.
//!
//! The assembler is the final pipeline stage: it integrates a video-level
//! action, per-frame person boxes, per-person part boxes, and segment-level
//! pseudo-labels into a frame-level prediction set, applying the top-10
//! person / top-1 part-per-category selection rules.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::anno::{
    ActionId, BBox, Confidence, FramePrediction, PartCategory, PartGroup, PartPrediction,
    PersonPrediction, Pose, PredictionSet, StateId, VideoAnnotation, VideoPrediction, Violation,
    MAX_PERSONS_PER_FRAME,
};
use crate::segmenter::SegmentPseudoLabel;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("training set must not be empty")]
    EmptyTrainingSet,
    #[error("frame {frame_idx} of video {video_id:?} is not covered by any segment label")]
    FrameNotCovered { video_id: String, frame_idx: u32 },
    #[error("frame {frame_idx} of video {video_id:?} is covered by more than one segment")]
    DuplicateCoverage { video_id: String, frame_idx: u32 },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// Modal state and its training-set frequency for one (action, group) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntry {
    pub state: StateId,
    /// Fraction of the pair's training instances carrying the modal state;
    /// 0 for pairs never seen in training.
    pub frequency: f64,
}

/// Modal part state per (video action, part group), fitted on a training
/// set. Every pair of the vocabulary is present; unseen pairs map to
/// `"none"` with frequency 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    entries: BTreeMap<(ActionId, PartGroup), ModeEntry>,
}

impl ModeTable {
    pub fn lookup(&self, action: ActionId, group: PartGroup) -> ModeEntry {
        self.entries
            .get(&(action, group))
            .copied()
            .unwrap_or(ModeEntry {
                state: StateId::NONE,
                frequency: 0.0,
            })
    }

    pub fn entries(&self) -> impl Iterator<Item = (ActionId, PartGroup, ModeEntry)> + '_ {
        self.entries.iter().map(|(&(a, g), &e)| (a, g, e))
    }
}

/// Fit the modal state per (action, group) over all part instances of the
/// training videos. Ties resolve to the lowest state id.
pub fn fit_mode_table(
    vocab: &crate::anno::Vocabulary,
    train: &[VideoAnnotation],
) -> Result<ModeTable, BaselineError> {
    if train.is_empty() {
        return Err(BaselineError::EmptyTrainingSet);
    }
    let mut counts: BTreeMap<(ActionId, PartGroup), BTreeMap<StateId, usize>> = BTreeMap::new();
    for video in train {
        for (_, _, part) in video.part_instances() {
            *counts
                .entry((video.action, part.category.group()))
                .or_default()
                .entry(part.state)
                .or_insert(0) += 1;
        }
    }
    let mut entries = BTreeMap::new();
    for action in 0..vocab.n_actions() {
        for group in PartGroup::ALL {
            let key = (ActionId(action), group);
            let entry = match counts.get(&key) {
                Some(per_state) => {
                    let total: usize = per_state.values().sum();
                    let mut best = StateId::NONE;
                    let mut best_count = 0;
                    // ascending id order + strict > keeps the lowest id on ties
                    for (&state, &count) in per_state {
                        if count > best_count {
                            best = state;
                            best_count = count;
                        }
                    }
                    ModeEntry {
                        state: best,
                        frequency: best_count as f64 / total as f64,
                    }
                }
                None => ModeEntry {
                    state: StateId::NONE,
                    frequency: 0.0,
                },
            };
            entries.insert(key, entry);
        }
    }
    Ok(ModeTable { entries })
}

fn predict_with(
    gt_structure: &[VideoAnnotation],
    state_of: impl Fn(ActionId, PartCategory) -> (StateId, Confidence),
) -> Result<PredictionSet, BaselineError> {
    let videos = gt_structure
        .iter()
        .map(|video| VideoPrediction {
            video_id: video.video_id.clone(),
            action: video.action,
            action_confidence: Confidence::ONE,
            frames: video
                .frames
                .iter()
                .map(|frame| FramePrediction {
                    frame_idx: frame.frame_idx,
                    persons: frame
                        .persons
                        .iter()
                        .map(|person| PersonPrediction {
                            bbox: person.bbox,
                            confidence: Confidence::ONE,
                            pose: person.pose.clone(),
                            parts: person
                                .parts
                                .iter()
                                .map(|part| {
                                    let (state, confidence) =
                                        state_of(video.action, part.category);
                                    PartPrediction {
                                        category: part.category,
                                        bbox: part.bbox,
                                        state,
                                        confidence,
                                    }
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    Ok(PredictionSet::new(videos)?)
}

/// Broadcast the fitted modal state over oracle boxes.
///
/// The ground-truth structure supplies video actions and all boxes; states
/// are replaced by the table's modal state for the (action, group) pair,
/// with the table frequency as the part confidence. Detection error is
/// thereby excluded: the score isolates state prediction quality.
pub fn predict_mode(
    table: &ModeTable,
    gt_structure: &[VideoAnnotation],
) -> Result<PredictionSet, BaselineError> {
    predict_with(gt_structure, |action, category| {
        let entry = table.lookup(action, category.group());
        let confidence = Confidence::new(entry.frequency)
            .expect("mode frequencies are ratios in [0, 1]");
        (entry.state, confidence)
    })
}

/// Broadcast one constant state over oracle boxes (confidence 1.0).
pub fn predict_constant(
    state: StateId,
    gt_structure: &[VideoAnnotation],
) -> Result<PredictionSet, BaselineError> {
    predict_with(gt_structure, |_, _| (state, Confidence::ONE))
}

/// Detector-style inputs for one video, before integration.
#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyInput {
    pub video_id: String,
    pub action: ActionId,
    pub action_confidence: Confidence,
    pub frames: Vec<AssemblyFrame>,
    /// The six pseudo-labels of every segment of the video.
    pub segment_labels: Vec<SegmentPseudoLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyFrame {
    pub frame_idx: u32,
    pub persons: Vec<AssemblyPerson>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyPerson {
    pub bbox: BBox,
    pub confidence: Confidence,
    pub pose: Option<Pose>,
    pub parts: Vec<AssemblyPart>,
}

/// A detected part box; its state comes from the segment labels.
#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyPart {
    pub category: PartCategory,
    pub bbox: BBox,
    pub confidence: Confidence,
}

/// Integrate per-stage outputs into a validated prediction set.
///
/// Each frame keeps at most the 10 highest-confidence persons and, per
/// person, the highest-confidence part of each category (first wins on
/// ties). Every kept part receives the modal state of the segment covering
/// its frame for its part group. Output persons are ordered by descending
/// confidence and parts in canonical category order, which makes assembly
/// idempotent: re-assembling an assembled output reproduces it.
pub fn assemble_predictions(
    inputs: &[AssemblyInput],
) -> Result<PredictionSet, BaselineError> {
    let mut videos = Vec::with_capacity(inputs.len());
    for input in inputs {
        let mut frames = Vec::with_capacity(input.frames.len());
        for frame in &input.frames {
            let states = segment_states_for(input, frame.frame_idx)?;

            let mut order: Vec<usize> = (0..frame.persons.len()).collect();
            order.sort_by(|&a, &b| {
                frame.persons[b]
                    .confidence
                    .get()
                    .total_cmp(&frame.persons[a].confidence.get())
            });
            order.truncate(MAX_PERSONS_PER_FRAME);

            let persons = order
                .into_iter()
                .map(|idx| {
                    let person = &frame.persons[idx];
                    let mut best_part: [Option<&AssemblyPart>; 10] = [None; 10];
                    for part in &person.parts {
                        let slot = &mut best_part[part.category.index()];
                        let better = slot
                            .map_or(true, |cur| part.confidence.get() > cur.confidence.get());
                        if better {
                            *slot = Some(part);
                        }
                    }
                    let parts = PartCategory::ALL
                        .iter()
                        .filter_map(|cat| best_part[cat.index()])
                        .map(|part| PartPrediction {
                            category: part.category,
                            bbox: part.bbox,
                            state: states[part.category.group().index()],
                            confidence: part.confidence,
                        })
                        .collect();
                    PersonPrediction {
                        bbox: person.bbox,
                        confidence: person.confidence,
                        pose: person.pose.clone(),
                        parts,
                    }
                })
                .collect();
            frames.push(FramePrediction {
                frame_idx: frame.frame_idx,
                persons,
            });
        }
        videos.push(VideoPrediction {
            video_id: input.video_id.clone(),
            action: input.action,
            action_confidence: input.action_confidence,
            frames,
        });
    }
    Ok(PredictionSet::new(videos)?)
}

/// Modal state per group for the unique segment covering `frame_idx`.
fn segment_states_for(
    input: &AssemblyInput,
    frame_idx: u32,
) -> Result<[StateId; 6], BaselineError> {
    let mut states = [StateId::NONE; 6];
    let mut covered = [false; 6];
    let mut segments_seen: Vec<(u32, u32)> = Vec::new();
    for label in &input.segment_labels {
        if !label.segment.contains(frame_idx) {
            continue;
        }
        let span = (label.segment.start_frame, label.segment.end_frame);
        if !segments_seen.contains(&span) {
            if !segments_seen.is_empty() {
                return Err(BaselineError::DuplicateCoverage {
                    video_id: input.video_id.clone(),
                    frame_idx,
                });
            }
            segments_seen.push(span);
        }
        states[label.group.index()] = label.modal_state;
        covered[label.group.index()] = true;
    }
    if !covered.iter().any(|&c| c) {
        return Err(BaselineError::FrameNotCovered {
            video_id: input.video_id.clone(),
            frame_idx,
        });
    }
    Ok(states)
}

/// View an assembled prediction as assembler input, reusing the same
/// segment labels. Supports idempotence checks and re-assembly flows.
pub fn assembly_input_from_prediction(
    pred: &VideoPrediction,
    segment_labels: Vec<SegmentPseudoLabel>,
) -> AssemblyInput {
    AssemblyInput {
        video_id: pred.video_id.clone(),
        action: pred.action,
        action_confidence: pred.action_confidence,
        frames: pred
            .frames
            .iter()
            .map(|frame| AssemblyFrame {
                frame_idx: frame.frame_idx,
                persons: frame
                    .persons
                    .iter()
                    .map(|person| AssemblyPerson {
                        bbox: person.bbox,
                        confidence: person.confidence,
                        pose: person.pose.clone(),
                        parts: person
                            .parts
                            .iter()
                            .map(|part| AssemblyPart {
                                category: part.category,
                                bbox: part.bbox,
                                confidence: part.confidence,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
        segment_labels,
    }
}
