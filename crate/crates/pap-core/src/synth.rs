//! Seeded synthetic datasets with the statistical structure of real
//! part-level annotations: multi-person frames, stick-figure poses, and a
//! long-tailed part state distribution where one modal state per
//! (video action, part group) pair dominates.
//!
//! Everything derives from the frozen [`crate::rng`] stream, so a given
//! `(config, seed)` produces identical output on every platform and in
//! every release; golden files never drift. Each video uses the sub-seed
//! `derive_seed(seed, video_index)`, which makes per-video generation
//! order-independent and safe to parallelize.
//!
//! Crops are deliberately crude — a flat background with one flat-colored
//! silhouette rectangle per part. Only geometry and label statistics
//! matter; visual realism is a non-goal.

use thiserror::Error;

use crate::anno::{
    ActionId, BBox, Confidence, FrameAnnotation, FramePrediction, Keypoint, PartAnnotation,
    PartCategory, PartPrediction, PersonAnnotation, PersonPrediction, Pose,
    PredictionSet, StateId, VideoAnnotation, VideoPrediction, Violation, Vocabulary,
    MAX_PERSONS_PER_FRAME,
};
use crate::raster::{Image, Rgb};
use crate::rng::{derive_seed, SplitMix64};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    InvalidConfig(String),
    #[error("invalid error rate: {0}")]
    InvalidRate(String),
    #[error("ground truth cannot be used as a prediction: {0}")]
    Prediction(#[from] Violation),
}

/// Number of video action classes in the bundled vocabulary.
pub const DEFAULT_ACTIONS: usize = 24;
/// Number of part states in the bundled vocabulary, excluding `"none"`.
pub const DEFAULT_STATES: usize = 74;

/// The bundled synthetic vocabulary: 24 actions, 74 states plus `"none"`.
pub fn default_vocabulary() -> Vocabulary {
    let actions = (0..DEFAULT_ACTIONS).map(|i| format!("act_{i:02}")).collect();
    let mut states = vec!["none".to_string()];
    states.extend((1..=DEFAULT_STATES).map(|i| format!("state_{i:02}")));
    Vocabulary::new(actions, states).expect("bundled vocabulary is valid")
}

/// Generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_videos: usize,
    pub frames_per_video: usize,
    /// Inclusive range of persons per frame; at most 10 so that derived
    /// prediction sets always satisfy the per-frame cardinality limit.
    pub persons_per_frame: (usize, usize),
    /// Full-frame size in pixels.
    pub image_size: (u32, u32),
    /// Probability mass of the modal state per (video action, part group)
    /// pair; the remainder spreads uniformly over the other states.
    pub state_skew: f64,
    /// Uniform keypoint displacement, in pixels, around the canonical
    /// stick-figure template.
    pub keypoint_jitter: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_videos: 8,
            frames_per_video: 30,
            persons_per_frame: (1, 3),
            image_size: (320, 240),
            state_skew: 0.977,
            keypoint_jitter: 2.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let err = |m: String| Err(SynthError::InvalidConfig(m));
        if self.n_videos == 0 || self.frames_per_video == 0 {
            return err("n_videos and frames_per_video must be >= 1".into());
        }
        let (lo, hi) = self.persons_per_frame;
        if lo == 0 || lo > hi || hi > MAX_PERSONS_PER_FRAME {
            return err(format!(
                "persons_per_frame must satisfy 1 <= min <= max <= {MAX_PERSONS_PER_FRAME}, got ({lo}, {hi})"
            ));
        }
        if self.image_size.0 < 8 || self.image_size.1 < 8 {
            return err(format!(
                "image_size must be at least 8x8, got {:?}",
                self.image_size
            ));
        }
        let uniform = 1.0 / (DEFAULT_STATES + 1) as f64;
        if !(self.state_skew.is_finite() && (uniform..=1.0).contains(&self.state_skew)) {
            return err(format!(
                "state_skew must be in [{uniform:.4}, 1], got {}",
                self.state_skew
            ));
        }
        if !(self.keypoint_jitter.is_finite() && self.keypoint_jitter >= 0.0) {
            return err(format!(
                "keypoint_jitter must be >= 0, got {}",
                self.keypoint_jitter
            ));
        }
        Ok(())
    }
}

/// The rendered crop of one person instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonCrop {
    pub video_id: String,
    pub frame_idx: u32,
    pub person_idx: usize,
    pub image: Image,
}

/// Canonical crop file name used by the generator manifest.
pub fn crop_filename(video_id: &str, frame_idx: u32, person_idx: usize) -> String {
    format!("{video_id}_f{frame_idx:05}_p{person_idx:02}.png")
}

/// A generated dataset: vocabulary, annotations and per-person crops.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub vocab: Vocabulary,
    pub videos: Vec<VideoAnnotation>,
    pub crops: Vec<PersonCrop>,
}

// COCO-ordered 17-keypoint stick figure, as (x, y) fractions of the person
// box: nose, eyes, ears, shoulders, elbows, wrists, hips, knees, ankles.
const KEYPOINT_TEMPLATE: [(f64, f64); 17] = [
    (0.50, 0.08),
    (0.46, 0.06),
    (0.54, 0.06),
    (0.42, 0.08),
    (0.58, 0.08),
    (0.35, 0.22),
    (0.65, 0.22),
    (0.25, 0.38),
    (0.75, 0.38),
    (0.18, 0.55),
    (0.82, 0.55),
    (0.40, 0.52),
    (0.60, 0.52),
    (0.38, 0.72),
    (0.62, 0.72),
    (0.36, 0.93),
    (0.64, 0.93),
];

// Part silhouette rectangles as (x0, y0, x1, y1) fractions of the person
// box, in PartCategory::ALL order.
const PART_LAYOUT: [(f64, f64, f64, f64); 10] = [
    (0.30, 0.00, 0.70, 0.18), // head
    (0.00, 0.18, 0.25, 0.55), // left_arm
    (0.75, 0.18, 1.00, 0.55), // right_arm
    (0.00, 0.55, 0.20, 0.70), // left_hand
    (0.80, 0.55, 1.00, 0.70), // right_hand
    (0.25, 0.45, 0.75, 0.62), // hip
    (0.25, 0.62, 0.48, 0.92), // left_leg
    (0.52, 0.62, 0.75, 0.92), // right_leg
    (0.22, 0.92, 0.48, 1.00), // left_foot
    (0.52, 0.92, 0.78, 1.00), // right_foot
];

// Flat silhouette colors per category, in PartCategory::ALL order.
const PART_COLORS: [Rgb; 10] = [
    [220, 180, 140],
    [200, 60, 60],
    [230, 90, 90],
    [200, 120, 40],
    [230, 150, 70],
    [80, 80, 200],
    [60, 160, 60],
    [90, 190, 90],
    [150, 110, 60],
    [180, 140, 90],
];

// Stream tags keeping the modal table and corruption draws off the
// per-video generation streams.
const MODAL_TABLE_STREAM: u64 = u64::MAX;
const CORRUPT_STREAM_BASE: u64 = 0x8000_0000_0000_0000;

/// Designed modal state per (action, group); a pure function of the seed.
fn modal_state_table(seed: u64, n_actions: usize, n_states: u64) -> Vec<[StateId; 6]> {
    let mut rng = SplitMix64::new(derive_seed(seed, MODAL_TABLE_STREAM));
    (0..n_actions)
        .map(|_| {
            let mut row = [StateId::NONE; 6];
            for slot in &mut row {
                *slot = StateId(rng.below(n_states) as u32);
            }
            row
        })
        .collect()
}

fn sample_state(rng: &mut SplitMix64, modal: StateId, n_states: u64, skew: f64) -> StateId {
    if rng.chance(skew) {
        modal
    } else {
        let alt = rng.below(n_states - 1) as u32;
        StateId(if alt >= modal.0 { alt + 1 } else { alt })
    }
}

/// Generate one video (annotation plus crops) from its derived sub-seed.
///
/// Pure in `(cfg, video index)`: videos can be generated in any order or in
/// parallel without changing the output. The config must be valid.
pub fn generate_video(cfg: &SynthConfig, video_idx: usize) -> (VideoAnnotation, Vec<PersonCrop>) {
    let modal_table = modal_state_table(cfg.seed, DEFAULT_ACTIONS, (DEFAULT_STATES + 1) as u64);
    let mut rng = SplitMix64::new(derive_seed(cfg.seed, video_idx as u64));
    let video_id = format!("synth_{video_idx:04}");
    let n_states = (DEFAULT_STATES + 1) as u64;
    let action = ActionId(rng.below(DEFAULT_ACTIONS as u64) as u32);
    let modal_row = &modal_table[action.0 as usize];
    let (img_w, img_h) = (cfg.image_size.0 as f64, cfg.image_size.1 as f64);
    let (lo, hi) = cfg.persons_per_frame;

    let mut frames = Vec::with_capacity(cfg.frames_per_video);
    let mut crops = Vec::new();
    for frame_idx in 0..cfg.frames_per_video as u32 {
        let n_persons = lo + rng.below((hi - lo + 1) as u64) as usize;
        let mut persons = Vec::with_capacity(n_persons);
        for person_idx in 0..n_persons {
            let w = rng.range_f64(0.18, 0.45) * img_w;
            let h = rng.range_f64(0.35, 0.70) * img_h;
            let x0 = rng.range_f64(0.0, img_w - w);
            let y0 = rng.range_f64(0.0, img_h - h);
            let bbox = BBox::new(x0, y0, x0 + w, y0 + h)
                .expect("sampled person box is valid by construction");

            let keypoints = KEYPOINT_TEMPLATE
                .iter()
                .map(|&(tx, ty)| Keypoint {
                    x: x0 + tx * w + cfg.keypoint_jitter * (2.0 * rng.next_f64() - 1.0),
                    y: y0 + ty * h + cfg.keypoint_jitter * (2.0 * rng.next_f64() - 1.0),
                    confidence: rng.next_f64(),
                })
                .collect();
            let pose = Pose::new(keypoints).expect("template keypoints are finite");

            let parts = PartCategory::ALL
                .iter()
                .map(|&category| {
                    let (fx0, fy0, fx1, fy1) = PART_LAYOUT[category.index()];
                    let part_box = BBox::new(
                        x0 + fx0 * w,
                        y0 + fy0 * h,
                        x0 + fx1 * w,
                        y0 + fy1 * h,
                    )
                    .expect("part layout fractions are strictly ordered");
                    let modal = modal_row[category.group().index()];
                    PartAnnotation {
                        category,
                        bbox: part_box,
                        state: sample_state(&mut rng, modal, n_states, cfg.state_skew),
                    }
                })
                .collect();

            crops.push(PersonCrop {
                video_id: video_id.clone(),
                frame_idx,
                person_idx,
                image: render_crop(&mut rng, w, h),
            });
            persons.push(PersonAnnotation {
                bbox,
                pose: Some(pose),
                parts,
            });
        }
        frames.push(FrameAnnotation { frame_idx, persons });
    }

    let video = VideoAnnotation {
        video_id,
        action,
        fps: 1.0,
        duration_s: cfg.frames_per_video as f64,
        frames,
    };
    (video, crops)
}

fn render_crop(rng: &mut SplitMix64, w: f64, h: f64) -> Image {
    let cw = (w.ceil() as u32).max(1);
    let ch = (h.ceil() as u32).max(1);
    let mut image = Image::new(cw, ch).expect("crop dimensions are nonzero");
    let background: Rgb = [
        30 + rng.below(60) as u8,
        30 + rng.below(60) as u8,
        40 + rng.below(60) as u8,
    ];
    image.fill(background);
    for category in PartCategory::ALL {
        let (fx0, fy0, fx1, fy1) = PART_LAYOUT[category.index()];
        image.fill_rect(
            fx0 * w,
            fy0 * h,
            fx1 * w,
            fy1 * h,
            PART_COLORS[category.index()],
        );
    }
    image
}

/// Generate a full dataset. Deterministic for a fixed config.
pub fn generate_dataset(cfg: &SynthConfig) -> Result<SynthDataset, SynthError> {
    cfg.validate()?;
    let vocab = default_vocabulary();
    let mut videos = Vec::with_capacity(cfg.n_videos);
    let mut crops = Vec::new();
    for video_idx in 0..cfg.n_videos {
        let (video, mut video_crops) = generate_video(cfg, video_idx);
        videos.push(video);
        crops.append(&mut video_crops);
    }
    Ok(SynthDataset {
        vocab,
        videos,
        crops,
    })
}

/// Per-channel corruption probabilities for [`corrupt_predictions`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRates {
    /// Probability that a video's predicted action is changed to a
    /// different class.
    pub action_flip: f64,
    /// Person-box translation magnitude as a fraction of the box size;
    /// 0 copies boxes exactly.
    pub box_jitter: f64,
    /// Probability that a part's predicted state is changed to a different
    /// state.
    pub state_flip: f64,
}

impl ErrorRates {
    pub const NONE: ErrorRates = ErrorRates {
        action_flip: 0.0,
        box_jitter: 0.0,
        state_flip: 0.0,
    };

    fn validate(&self) -> Result<(), SynthError> {
        for (name, v) in [
            ("action_flip", self.action_flip),
            ("box_jitter", self.box_jitter),
            ("state_flip", self.state_flip),
        ] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(SynthError::InvalidRate(format!(
                    "{name} must be in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }
}

fn flip_to_other(rng: &mut SplitMix64, current: u32, n: u64) -> u32 {
    let alt = rng.below(n - 1) as u32;
    if alt >= current {
        alt + 1
    } else {
        alt
    }
}

/// Derive a prediction set from ground truth with controlled error rates.
///
/// With all rates at zero the predictions mirror the ground truth exactly
/// (all confidences 1.0). An action or state flip always produces a class
/// different from the true one, so a rate of 1.0 corrupts every instance.
/// Box jitter translates each person box by a uniform offset of up to
/// `box_jitter * size` per axis, floored at the image origin; part boxes
/// and poses are copied unchanged. Deterministic per `(gt, rates, seed)`.
pub fn corrupt_predictions(
    vocab: &Vocabulary,
    gt: &[VideoAnnotation],
    rates: &ErrorRates,
    seed: u64,
) -> Result<PredictionSet, SynthError> {
    rates.validate()?;
    let n_actions = vocab.n_actions() as u64;
    let n_states = vocab.n_states() as u64;
    let mut videos = Vec::with_capacity(gt.len());
    for (video_idx, video) in gt.iter().enumerate() {
        let mut rng = SplitMix64::new(derive_seed(
            seed,
            CORRUPT_STREAM_BASE | video_idx as u64,
        ));
        let action = if n_actions > 1 && rng.chance(rates.action_flip) {
            ActionId(flip_to_other(&mut rng, video.action.0, n_actions))
        } else {
            video.action
        };
        let frames = video
            .frames
            .iter()
            .map(|frame| FramePrediction {
                frame_idx: frame.frame_idx,
                persons: frame
                    .persons
                    .iter()
                    .map(|person| {
                        let dx = (2.0 * rng.next_f64() - 1.0)
                            * rates.box_jitter
                            * person.bbox.width();
                        let dy = (2.0 * rng.next_f64() - 1.0)
                            * rates.box_jitter
                            * person.bbox.height();
                        let dx = dx.max(-person.bbox.x_min());
                        let dy = dy.max(-person.bbox.y_min());
                        let bbox = BBox::new(
                            person.bbox.x_min() + dx,
                            person.bbox.y_min() + dy,
                            person.bbox.x_max() + dx,
                            person.bbox.y_max() + dy,
                        )
                        .expect("translation preserves box validity");
                        PersonPrediction {
                            bbox,
                            confidence: Confidence::ONE,
                            pose: person.pose.clone(),
                            parts: person
                                .parts
                                .iter()
                                .map(|part| PartPrediction {
                                    category: part.category,
                                    bbox: part.bbox,
                                    state: if n_states > 1 && rng.chance(rates.state_flip) {
                                        StateId(flip_to_other(&mut rng, part.state.0, n_states))
                                    } else {
                                        part.state
                                    },
                                    confidence: Confidence::ONE,
                                })
                                .collect(),
                        }
                    })
                    .collect(),
            })
            .collect();
        videos.push(VideoPrediction {
            video_id: video.video_id.clone(),
            action,
            action_confidence: Confidence::ONE,
            frames,
        });
    }
    Ok(PredictionSet::new(videos)?)
}
