//! Canonical in-memory model for part-level action parsing annotations and
//! predictions.
//!
//! The model is a tree: a dataset is a vocabulary plus videos; a video has
//! frames; a frame has persons; a person has a box, an optional pose, and up
//! to one part annotation per category. Predictions mirror the annotation
//! tree and add confidences. Leaf types with invariants ([`BBox`], [`Pose`],
//! [`Confidence`], [`Vocabulary`]) validate on construction; tree-level
//! invariants are enforced by [`json::parse_dataset`], [`validate_dataset`]
//! and [`PredictionSet::new`].
//!
//! All types are plain immutable data and safe to share across threads.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub mod json;

/// Maximum predicted persons kept per frame.
pub const MAX_PERSONS_PER_FRAME: usize = 10;

/// A constraint violation at a specific element of a dataset or prediction
/// tree. `pointer` is a JSON-pointer-style path such as
/// `/videos/0/frames/2/persons/1/parts/3/category`.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{pointer}: {message}")]
pub struct Violation {
    pub pointer: String,
    pub message: String,
}

impl Violation {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

/// Index into [`Vocabulary::video_actions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

/// Index into [`Vocabulary::part_states`]. Id 0 is always the `"none"` state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub const NONE: StateId = StateId(0);
}

/// A detection or classification confidence in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Confidence(f64);

impl Confidence {
    pub const ONE: Confidence = Confidence(1.0);

    pub fn new(value: f64) -> Result<Self, String> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Confidence(value))
        } else {
            Err(format!("confidence must be in [0, 1], got {value}"))
        }
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Axis-aligned box in pixel coordinates, origin top-left, corner form.
///
/// Invariants: finite, non-negative, strictly positive width and height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl BBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self, String> {
        for v in [x_min, y_min, x_max, y_max] {
            if !v.is_finite() || v < 0.0 {
                return Err(format!(
                    "box coordinates must be finite and >= 0, got [{x_min}, {y_min}, {x_max}, {y_max}]"
                ));
            }
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(format!(
                "box must satisfy x_min < x_max and y_min < y_max, got [{x_min}, {y_min}, {x_max}, {y_max}]"
            ));
        }
        Ok(BBox {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn corners(&self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }
}

/// The ten annotated body part categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartCategory {
    Head,
    LeftArm,
    RightArm,
    LeftHand,
    RightHand,
    Hip,
    LeftLeg,
    RightLeg,
    LeftFoot,
    RightFoot,
}

impl PartCategory {
    pub const ALL: [PartCategory; 10] = [
        PartCategory::Head,
        PartCategory::LeftArm,
        PartCategory::RightArm,
        PartCategory::LeftHand,
        PartCategory::RightHand,
        PartCategory::Hip,
        PartCategory::LeftLeg,
        PartCategory::RightLeg,
        PartCategory::LeftFoot,
        PartCategory::RightFoot,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PartCategory::Head => "head",
            PartCategory::LeftArm => "left_arm",
            PartCategory::RightArm => "right_arm",
            PartCategory::LeftHand => "left_hand",
            PartCategory::RightHand => "right_hand",
            PartCategory::Hip => "hip",
            PartCategory::LeftLeg => "left_leg",
            PartCategory::RightLeg => "right_leg",
            PartCategory::LeftFoot => "left_foot",
            PartCategory::RightFoot => "right_foot",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        PartCategory::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Collapse left/right variants into the six coarse groups.
    pub fn group(&self) -> PartGroup {
        match self {
            PartCategory::Head => PartGroup::Head,
            PartCategory::LeftArm | PartCategory::RightArm => PartGroup::Arm,
            PartCategory::LeftHand | PartCategory::RightHand => PartGroup::Hand,
            PartCategory::Hip => PartGroup::Hip,
            PartCategory::LeftLeg | PartCategory::RightLeg => PartGroup::Leg,
            PartCategory::LeftFoot | PartCategory::RightFoot => PartGroup::Foot,
        }
    }

    pub fn index(&self) -> usize {
        PartCategory::ALL.iter().position(|c| c == self).unwrap()
    }
}

impl fmt::Display for PartCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six coarse body regions used for segment-level labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartGroup {
    Head,
    Arm,
    Hand,
    Hip,
    Leg,
    Foot,
}

impl PartGroup {
    pub const ALL: [PartGroup; 6] = [
        PartGroup::Head,
        PartGroup::Arm,
        PartGroup::Hand,
        PartGroup::Hip,
        PartGroup::Leg,
        PartGroup::Foot,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PartGroup::Head => "head",
            PartGroup::Arm => "arm",
            PartGroup::Hand => "hand",
            PartGroup::Hip => "hip",
            PartGroup::Leg => "leg",
            PartGroup::Foot => "foot",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        PartGroup::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn index(&self) -> usize {
        PartGroup::ALL.iter().position(|g| g == self).unwrap()
    }
}

impl fmt::Display for PartGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One pose keypoint: pixel coordinates plus detector confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

/// A fixed-length keypoint array (17 entries in the default convention).
///
/// Coordinates must be finite; they may fall outside the image or the person
/// box. Confidences are in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    keypoints: Vec<Keypoint>,
}

impl Pose {
    /// Conventional keypoint count for COCO-style pose estimators.
    pub const DEFAULT_KEYPOINTS: usize = 17;

    pub fn new(keypoints: Vec<Keypoint>) -> Result<Self, String> {
        if keypoints.is_empty() {
            return Err("pose must contain at least one keypoint".to_string());
        }
        for (i, kp) in keypoints.iter().enumerate() {
            if !kp.x.is_finite() || !kp.y.is_finite() {
                return Err(format!("keypoint {i} has non-finite coordinates"));
            }
            if !kp.confidence.is_finite() || !(0.0..=1.0).contains(&kp.confidence) {
                return Err(format!(
                    "keypoint {i} confidence must be in [0, 1], got {}",
                    kp.confidence
                ));
            }
        }
        Ok(Pose { keypoints })
    }

    pub fn keypoints(&self) -> &[Keypoint] {
        &self.keypoints
    }

    pub fn len(&self) -> usize {
        self.keypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keypoints.is_empty()
    }

    /// Translate all keypoints by `(-dx, -dy)`, e.g. from frame coordinates
    /// into the coordinate frame of a crop whose origin is `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Pose {
        Pose {
            keypoints: self
                .keypoints
                .iter()
                .map(|kp| Keypoint {
                    x: kp.x - dx,
                    y: kp.y - dy,
                    confidence: kp.confidence,
                })
                .collect(),
        }
    }
}

/// A part box with its state, attached to one person in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PartAnnotation {
    pub category: PartCategory,
    pub bbox: BBox,
    pub state: StateId,
}

/// A person box with its parts and optionally a pose.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonAnnotation {
    pub bbox: BBox,
    pub pose: Option<Pose>,
    pub parts: Vec<PartAnnotation>,
}

/// All persons annotated in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameAnnotation {
    pub frame_idx: u32,
    pub persons: Vec<PersonAnnotation>,
}

/// Ground-truth annotation of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoAnnotation {
    pub video_id: String,
    pub action: ActionId,
    pub fps: f64,
    pub duration_s: f64,
    pub frames: Vec<FrameAnnotation>,
}

impl VideoAnnotation {
    /// Number of frame slots; every `frame_idx` is below this.
    pub fn total_frames(&self) -> u32 {
        (self.fps * self.duration_s).ceil() as u32
    }

    /// Iterate `(frame_idx, person, part)` over every part instance.
    pub fn part_instances(
        &self,
    ) -> impl Iterator<Item = (u32, &PersonAnnotation, &PartAnnotation)> + '_ {
        self.frames.iter().flat_map(|f| {
            f.persons
                .iter()
                .flat_map(move |p| p.parts.iter().map(move |part| (f.frame_idx, p, part)))
        })
    }
}

/// Ordered name tables for video actions and part states.
///
/// `part_states[0]` is always `"none"`. Sizes are data-defined; the bundled
/// synthetic vocabulary has 24 actions and 74 states plus `"none"`.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    video_actions: Vec<String>,
    part_states: Vec<String>,
    action_index: HashMap<String, u32>,
    state_index: HashMap<String, u32>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.video_actions == other.video_actions && self.part_states == other.part_states
    }
}

impl Vocabulary {
    pub fn new(video_actions: Vec<String>, part_states: Vec<String>) -> Result<Self, String> {
        if video_actions.is_empty() {
            return Err("video_actions must not be empty".to_string());
        }
        if part_states.first().map(String::as_str) != Some("none") {
            return Err("part_states[0] must be \"none\"".to_string());
        }
        let mut action_index = HashMap::new();
        for (i, name) in video_actions.iter().enumerate() {
            if action_index.insert(name.clone(), i as u32).is_some() {
                return Err(format!("duplicate video action name {name:?}"));
            }
        }
        let mut state_index = HashMap::new();
        for (i, name) in part_states.iter().enumerate() {
            if state_index.insert(name.clone(), i as u32).is_some() {
                return Err(format!("duplicate part state name {name:?}"));
            }
        }
        Ok(Vocabulary {
            video_actions,
            part_states,
            action_index,
            state_index,
        })
    }

    pub fn video_actions(&self) -> &[String] {
        &self.video_actions
    }

    pub fn part_states(&self) -> &[String] {
        &self.part_states
    }

    pub fn n_actions(&self) -> u32 {
        self.video_actions.len() as u32
    }

    pub fn n_states(&self) -> u32 {
        self.part_states.len() as u32
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied().map(ActionId)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied().map(StateId)
    }

    pub fn action_name(&self, id: ActionId) -> Option<&str> {
        self.video_actions.get(id.0 as usize).map(String::as_str)
    }

    pub fn state_name(&self, id: StateId) -> Option<&str> {
        self.part_states.get(id.0 as usize).map(String::as_str)
    }
}

/// Validate tree-level invariants of a dataset against its vocabulary.
///
/// Leaf invariants (box geometry, pose bounds) hold by construction; this
/// checks index bounds, ordering, uniqueness and part-category duplication,
/// reporting the first violation with a pointer to the offending element.
pub fn validate_dataset(vocab: &Vocabulary, videos: &[VideoAnnotation]) -> Result<(), Violation> {
    let mut seen_ids = HashMap::new();
    for (vi, video) in videos.iter().enumerate() {
        let vptr = format!("/videos/{vi}");
        if let Some(prev) = seen_ids.insert(video.video_id.clone(), vi) {
            return Err(Violation::new(
                format!("{vptr}/video_id"),
                format!(
                    "duplicate video_id {:?} (also at /videos/{prev})",
                    video.video_id
                ),
            ));
        }
        if video.action.0 >= vocab.n_actions() {
            return Err(Violation::new(
                format!("{vptr}/action"),
                format!("action id {} out of vocabulary bounds", video.action.0),
            ));
        }
        if !(video.fps.is_finite() && video.fps > 0.0) {
            return Err(Violation::new(
                format!("{vptr}/fps"),
                format!("fps must be > 0, got {}", video.fps),
            ));
        }
        if !(video.duration_s.is_finite() && video.duration_s > 0.0) {
            return Err(Violation::new(
                format!("{vptr}/duration_s"),
                format!("duration_s must be > 0, got {}", video.duration_s),
            ));
        }
        let total = video.total_frames();
        let mut prev_idx: Option<u32> = None;
        for (fi, frame) in video.frames.iter().enumerate() {
            let fptr = format!("{vptr}/frames/{fi}");
            if let Some(prev) = prev_idx {
                if frame.frame_idx <= prev {
                    return Err(Violation::new(
                        format!("{fptr}/frame_idx"),
                        format!(
                            "frame indices must be strictly ascending, got {} after {prev}",
                            frame.frame_idx
                        ),
                    ));
                }
            }
            prev_idx = Some(frame.frame_idx);
            if frame.frame_idx >= total {
                return Err(Violation::new(
                    format!("{fptr}/frame_idx"),
                    format!(
                        "frame_idx {} exceeds ceil(fps * duration_s) = {total}",
                        frame.frame_idx
                    ),
                ));
            }
            for (pi, person) in frame.persons.iter().enumerate() {
                let pptr = format!("{fptr}/persons/{pi}");
                validate_parts(&person.parts, vocab, &pptr, |part| part.category, |part| {
                    part.state
                })?;
            }
        }
    }
    Ok(())
}

fn validate_parts<T>(
    parts: &[T],
    vocab: &Vocabulary,
    person_ptr: &str,
    category: impl Fn(&T) -> PartCategory,
    state: impl Fn(&T) -> StateId,
) -> Result<(), Violation> {
    let mut seen = [false; 10];
    for (qi, part) in parts.iter().enumerate() {
        let cat = category(part);
        if seen[cat.index()] {
            return Err(Violation::new(
                format!("{person_ptr}/parts/{qi}/category"),
                format!("duplicate part category {:?} on one person", cat.name()),
            ));
        }
        seen[cat.index()] = true;
        let sid = state(part);
        if sid.0 >= vocab.n_states() {
            return Err(Violation::new(
                format!("{person_ptr}/parts/{qi}/state"),
                format!("state id {} out of vocabulary bounds", sid.0),
            ));
        }
    }
    Ok(())
}

/// One predicted part: box, state and confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct PartPrediction {
    pub category: PartCategory,
    pub bbox: BBox,
    pub state: StateId,
    pub confidence: Confidence,
}

/// One predicted person with its predicted parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonPrediction {
    pub bbox: BBox,
    pub confidence: Confidence,
    pub pose: Option<Pose>,
    pub parts: Vec<PartPrediction>,
}

/// Predicted persons for one frame (at most [`MAX_PERSONS_PER_FRAME`]).
#[derive(Debug, Clone, PartialEq)]
pub struct FramePrediction {
    pub frame_idx: u32,
    pub persons: Vec<PersonPrediction>,
}

/// Prediction for one video: a top-1 action plus per-frame detections.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoPrediction {
    pub video_id: String,
    pub action: ActionId,
    pub action_confidence: Confidence,
    pub frames: Vec<FramePrediction>,
}

impl VideoPrediction {
    pub fn frame(&self, frame_idx: u32) -> Option<&FramePrediction> {
        self.frames.iter().find(|f| f.frame_idx == frame_idx)
    }
}

/// A validated set of per-video predictions.
///
/// Construction enforces the cardinality invariants: at most 10 persons per
/// frame, at most one part per category per person, unique video ids, and
/// strictly ascending frame indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    videos: Vec<VideoPrediction>,
}

impl PredictionSet {
    pub fn new(videos: Vec<VideoPrediction>) -> Result<Self, Violation> {
        let mut seen_ids: HashMap<&str, usize> = HashMap::new();
        for (vi, video) in videos.iter().enumerate() {
            let vptr = format!("/videos/{vi}");
            if let Some(prev) = seen_ids.insert(&video.video_id, vi) {
                return Err(Violation::new(
                    format!("{vptr}/video_id"),
                    format!(
                        "duplicate video_id {:?} (also at /videos/{prev})",
                        video.video_id
                    ),
                ));
            }
            let mut prev_idx: Option<u32> = None;
            for (fi, frame) in video.frames.iter().enumerate() {
                let fptr = format!("{vptr}/frames/{fi}");
                if let Some(prev) = prev_idx {
                    if frame.frame_idx <= prev {
                        return Err(Violation::new(
                            format!("{fptr}/frame_idx"),
                            format!(
                                "frame indices must be strictly ascending, got {} after {prev}",
                                frame.frame_idx
                            ),
                        ));
                    }
                }
                prev_idx = Some(frame.frame_idx);
                if frame.persons.len() > MAX_PERSONS_PER_FRAME {
                    return Err(Violation::new(
                        format!("{fptr}/persons"),
                        format!(
                            "{} persons in one frame exceeds the limit of {MAX_PERSONS_PER_FRAME}",
                            frame.persons.len()
                        ),
                    ));
                }
                for (pi, person) in frame.persons.iter().enumerate() {
                    let pptr = format!("{fptr}/persons/{pi}");
                    let mut seen = [false; 10];
                    for (qi, part) in person.parts.iter().enumerate() {
                        if seen[part.category.index()] {
                            return Err(Violation::new(
                                format!("{pptr}/parts/{qi}/category"),
                                format!(
                                    "duplicate part category {:?} on one person",
                                    part.category.name()
                                ),
                            ));
                        }
                        seen[part.category.index()] = true;
                    }
                }
            }
        }
        Ok(PredictionSet { videos })
    }

    pub fn videos(&self) -> &[VideoPrediction] {
        &self.videos
    }

    pub fn video(&self, video_id: &str) -> Option<&VideoPrediction> {
        self.videos.iter().find(|v| v.video_id == video_id)
    }

    pub fn into_videos(self) -> Vec<VideoPrediction> {
        self.videos
    }

    /// State ids must also be within vocabulary bounds; checked separately
    /// because a `PredictionSet` built in memory already carries resolved
    /// ids, while ids parsed from a file are resolved against the vocab.
    pub fn validate_against(&self, vocab: &Vocabulary) -> Result<(), Violation> {
        for (vi, video) in self.videos.iter().enumerate() {
            if video.action.0 >= vocab.n_actions() {
                return Err(Violation::new(
                    format!("/videos/{vi}/action"),
                    format!("action id {} out of vocabulary bounds", video.action.0),
                ));
            }
            for (fi, frame) in video.frames.iter().enumerate() {
                for (pi, person) in frame.persons.iter().enumerate() {
                    for (qi, part) in person.parts.iter().enumerate() {
                        if part.state.0 >= vocab.n_states() {
                            return Err(Violation::new(
                                format!("/videos/{vi}/frames/{fi}/persons/{pi}/parts/{qi}/state"),
                                format!("state id {} out of vocabulary bounds", part.state.0),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_vocab() -> Vocabulary {
        Vocabulary::new(
            vec!["hurling_sport".into(), "clean_and_jerk".into()],
            vec!["none".into(), "nod".into(), "hold".into()],
        )
        .unwrap()
    }

    #[test]
    fn bbox_rejects_degenerate() {
        assert!(BBox::new(10.0, 10.0, 10.0, 20.0).is_err());
        assert!(BBox::new(10.0, 10.0, 5.0, 20.0).is_err());
        assert!(BBox::new(-1.0, 0.0, 5.0, 5.0).is_err());
        assert!(BBox::new(0.0, 0.0, f64::NAN, 5.0).is_err());
        assert!(BBox::new(0.0, 0.0, 5.0, 5.0).is_ok());
    }

    #[test]
    fn category_group_mapping_is_total_and_surjective() {
        let mut covered = [false; 6];
        for cat in PartCategory::ALL {
            covered[cat.group().index()] = true;
        }
        assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn category_names_round_trip() {
        for cat in PartCategory::ALL {
            assert_eq!(PartCategory::from_name(cat.name()), Some(cat));
        }
        assert_eq!(PartCategory::from_name("torso"), None);
    }

    #[test]
    fn vocabulary_requires_none_at_zero() {
        assert!(Vocabulary::new(vec!["a".into()], vec!["nod".into()]).is_err());
        assert!(Vocabulary::new(vec!["a".into()], vec!["none".into()]).is_ok());
        assert!(Vocabulary::new(
            vec!["a".into(), "a".into()],
            vec!["none".into()]
        )
        .is_err());
    }

    #[test]
    fn confidence_bounds() {
        assert!(Confidence::new(0.0).is_ok());
        assert!(Confidence::new(1.0).is_ok());
        assert!(Confidence::new(1.0001).is_err());
        assert!(Confidence::new(f64::NAN).is_err());
    }

    #[test]
    fn duplicate_part_category_is_flagged_with_path() {
        let vocab = small_vocab();
        let bbox = BBox::new(0.0, 0.0, 10.0, 10.0).unwrap();
        let part = |cat| PartAnnotation {
            category: cat,
            bbox,
            state: StateId::NONE,
        };
        let videos = vec![VideoAnnotation {
            video_id: "v".into(),
            action: ActionId(0),
            fps: 1.0,
            duration_s: 1.0,
            frames: vec![FrameAnnotation {
                frame_idx: 0,
                persons: vec![PersonAnnotation {
                    bbox,
                    pose: None,
                    parts: vec![part(PartCategory::Head), part(PartCategory::Head)],
                }],
            }],
        }];
        let err = validate_dataset(&vocab, &videos).unwrap_err();
        assert_eq!(err.pointer, "/videos/0/frames/0/persons/0/parts/1/category");
    }

    #[test]
    fn prediction_set_rejects_eleven_persons() {
        let bbox = BBox::new(0.0, 0.0, 10.0, 10.0).unwrap();
        let person = PersonPrediction {
            bbox,
            confidence: Confidence::ONE,
            pose: None,
            parts: vec![],
        };
        let videos = vec![VideoPrediction {
            video_id: "v".into(),
            action: ActionId(0),
            action_confidence: Confidence::ONE,
            frames: vec![FramePrediction {
                frame_idx: 0,
                persons: vec![person; 11],
            }],
        }];
        let err = PredictionSet::new(videos).unwrap_err();
        assert_eq!(err.pointer, "/videos/0/frames/0/persons");
    }

    #[test]
    fn total_frames_uses_ceiling() {
        let video = VideoAnnotation {
            video_id: "v".into(),
            action: ActionId(0),
            fps: 2.5,
            duration_s: 3.0,
            frames: vec![],
        };
        assert_eq!(video.total_frames(), 8);
    }
}
