//! Deterministic core of a pose-guided coarse-to-fine pipeline for
//! part-level action parsing: annotation ingestion, segment-level
//! pseudo-labels, pose-guided positional embeddings, keypoint-driven box
//! refinement, reference predictors, and the PSC/ROC + AP scoring protocol,
//! plus a seeded synthetic dataset generator for oracle-checked experiments.
//!
//! Module map:
//!
//! - [`anno`] — data model and JSON formats for annotations and predictions
//! - [`synth`] — seeded synthetic datasets and controlled prediction noise
//! - [`segmenter`] — fixed-duration segments and their six pseudo-labels
//! - [`pose_embed`] — keypoint disk rendering and person-box refinement
//! - [`evaluator`] — IoU, PSC, ROC score, average precision, cost model
//! - [`baselines`] — modal-state predictors and the prediction assembler
//! - [`rng`] — the frozen SplitMix64 generator behind all synthetic data
//! - [`raster`] — the 8-bit RGB image buffer shared by synth and rendering

pub mod anno;
pub mod baselines;
pub mod evaluator;
pub mod pose_embed;
pub mod raster;
pub mod rng;
pub mod segmenter;
pub mod synth;

pub use anno::{
    ActionId, BBox, Confidence, FrameAnnotation, FramePrediction, Keypoint, PartAnnotation,
    PartCategory, PartGroup, PartPrediction, PersonAnnotation, PersonPrediction, Pose,
    PredictionSet, StateId, VideoAnnotation, VideoPrediction, Vocabulary,
};
pub use raster::{Image, Rgb};

// The guide chapters under book/src contain runnable snippets; including
// them here keeps every snippet compiling and passing as a doctest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/annotations.md")]
    pub struct Annotations;
    #[doc = include_str!("../../../book/src/synthetic-data.md")]
    pub struct SyntheticData;
    #[doc = include_str!("../../../book/src/segments.md")]
    pub struct Segments;
    #[doc = include_str!("../../../book/src/pose-embedding.md")]
    pub struct PoseEmbedding;
    #[doc = include_str!("../../../book/src/scoring.md")]
    pub struct Scoring;
    #[doc = include_str!("../../../book/src/cost-model.md")]
    pub struct CostModel;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
