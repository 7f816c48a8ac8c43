//! On-disk JSON formats for datasets and predictions.
//!
//! A dataset is a single self-describing document: the vocabulary is
//! embedded, and category/state/action fields are strings resolved against
//! it. Prediction files mirror the annotation nesting, add a `confidence`
//! field on the video action, person and part entries, and drop the
//! video-level `fps`/`duration_s`; they are resolved against the vocabulary
//! of the dataset they are scored with.
//!
//! ```text
//! {"vocab": {"video_actions": [...], "part_states": [...]},
//!  "videos": [{"video_id": "...", "action": "...", "fps": 30.0,
//!              "duration_s": 10.0,
//!              "frames": [{"frame_idx": 0,
//!                          "persons": [{"box": [x0, y0, x1, y1],
//!                                       "pose": [[x, y, conf], ...] | null,
//!                                       "parts": [{"category": "head",
//!                                                  "box": [...],
//!                                                  "state": "none"}]}]}]}]}
//! ```
//!
//! Files are UTF-8 without a byte-order mark. Unknown fields (for example
//! interactive-object annotations) are accepted and ignored. Parsing is a
//! pure function of the input bytes, and `serialize -> parse` is the
//! identity on every valid model.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    ActionId, BBox, Confidence, FrameAnnotation, FramePrediction, Keypoint, PartAnnotation,
    PartCategory, PartPrediction, PersonAnnotation, PersonPrediction, Pose, PredictionSet,
    StateId, VideoAnnotation, VideoPrediction, Violation, Vocabulary,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("input must be UTF-8 without a byte-order mark")]
    ByteOrderMark,
    #[error("malformed JSON at {pointer}: {message}")]
    Json { pointer: String, message: String },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for segment in path.iter() {
        match segment {
            serde_path_to_error::Segment::Seq { index } => {
                out.push('/');
                out.push_str(&index.to_string());
            }
            serde_path_to_error::Segment::Map { key } => {
                out.push('/');
                out.push_str(key);
            }
            serde_path_to_error::Segment::Enum { variant } => {
                out.push('/');
                out.push_str(variant);
            }
            serde_path_to_error::Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, ParseError> {
    if text.starts_with('\u{feff}') {
        return Err(ParseError::ByteOrderMark);
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ParseError::Json {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn read_file(path: &Path) -> Result<String, ParseError> {
    fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })
}

// ---- wire structures -------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DatasetFile {
    vocab: VocabFile,
    videos: Vec<VideoFile>,
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    video_actions: Vec<String>,
    part_states: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VideoFile {
    video_id: String,
    action: String,
    fps: f64,
    duration_s: f64,
    frames: Vec<FrameFile>,
}

#[derive(Serialize, Deserialize)]
struct FrameFile {
    frame_idx: u32,
    persons: Vec<PersonFile>,
}

#[derive(Serialize, Deserialize)]
struct PersonFile {
    #[serde(rename = "box")]
    bbox: [f64; 4],
    pose: Option<Vec<[f64; 3]>>,
    parts: Vec<PartFile>,
}

#[derive(Serialize, Deserialize)]
struct PartFile {
    category: String,
    #[serde(rename = "box")]
    bbox: [f64; 4],
    state: String,
}

#[derive(Serialize, Deserialize)]
struct PredictionFile {
    videos: Vec<PredVideoFile>,
}

#[derive(Serialize, Deserialize)]
struct PredVideoFile {
    video_id: String,
    action: String,
    confidence: f64,
    frames: Vec<PredFrameFile>,
}

#[derive(Serialize, Deserialize)]
struct PredFrameFile {
    frame_idx: u32,
    persons: Vec<PredPersonFile>,
}

#[derive(Serialize, Deserialize)]
struct PredPersonFile {
    #[serde(rename = "box")]
    bbox: [f64; 4],
    confidence: f64,
    pose: Option<Vec<[f64; 3]>>,
    parts: Vec<PredPartFile>,
}

#[derive(Serialize, Deserialize)]
struct PredPartFile {
    category: String,
    #[serde(rename = "box")]
    bbox: [f64; 4],
    state: String,
    confidence: f64,
}

// ---- resolution helpers ----------------------------------------------

fn resolve_bbox(raw: [f64; 4], ptr: &str) -> Result<BBox, Violation> {
    BBox::new(raw[0], raw[1], raw[2], raw[3]).map_err(|m| Violation::new(format!("{ptr}/box"), m))
}

fn resolve_pose(raw: &Option<Vec<[f64; 3]>>, ptr: &str) -> Result<Option<Pose>, Violation> {
    match raw {
        None => Ok(None),
        Some(entries) => {
            let kps = entries
                .iter()
                .map(|&[x, y, confidence]| Keypoint { x, y, confidence })
                .collect();
            Pose::new(kps)
                .map(Some)
                .map_err(|m| Violation::new(format!("{ptr}/pose"), m))
        }
    }
}

fn resolve_category(name: &str, ptr: &str) -> Result<PartCategory, Violation> {
    PartCategory::from_name(name).ok_or_else(|| {
        Violation::new(
            format!("{ptr}/category"),
            format!("unknown part category {name:?}"),
        )
    })
}

fn resolve_state(vocab: &Vocabulary, name: &str, ptr: &str) -> Result<StateId, Violation> {
    vocab.state_id(name).ok_or_else(|| {
        Violation::new(
            format!("{ptr}/state"),
            format!("part state {name:?} not in vocabulary"),
        )
    })
}

fn resolve_action(vocab: &Vocabulary, name: &str, ptr: &str) -> Result<ActionId, Violation> {
    vocab.action_id(name).ok_or_else(|| {
        Violation::new(
            format!("{ptr}/action"),
            format!("video action {name:?} not in vocabulary"),
        )
    })
}

fn resolve_confidence(value: f64, ptr: &str) -> Result<Confidence, Violation> {
    Confidence::new(value).map_err(|m| Violation::new(format!("{ptr}/confidence"), m))
}

// ---- dataset parse / serialize ----------------------------------------

/// Parse and fully validate a dataset document from a string.
pub fn parse_dataset_str(text: &str) -> Result<(Vocabulary, Vec<VideoAnnotation>), ParseError> {
    let file: DatasetFile = from_json_str(text)?;
    let vocab = Vocabulary::new(file.vocab.video_actions, file.vocab.part_states)
        .map_err(|m| Violation::new("/vocab", m))?;
    let mut videos = Vec::with_capacity(file.videos.len());
    for (vi, v) in file.videos.into_iter().enumerate() {
        let vptr = format!("/videos/{vi}");
        let action = resolve_action(&vocab, &v.action, &vptr)?;
        let mut frames = Vec::with_capacity(v.frames.len());
        for (fi, f) in v.frames.into_iter().enumerate() {
            let fptr = format!("{vptr}/frames/{fi}");
            let mut persons = Vec::with_capacity(f.persons.len());
            for (pi, p) in f.persons.into_iter().enumerate() {
                let pptr = format!("{fptr}/persons/{pi}");
                let bbox = resolve_bbox(p.bbox, &pptr)?;
                let pose = resolve_pose(&p.pose, &pptr)?;
                let mut parts = Vec::with_capacity(p.parts.len());
                for (qi, q) in p.parts.into_iter().enumerate() {
                    let qptr = format!("{pptr}/parts/{qi}");
                    parts.push(PartAnnotation {
                        category: resolve_category(&q.category, &qptr)?,
                        bbox: resolve_bbox(q.bbox, &qptr)?,
                        state: resolve_state(&vocab, &q.state, &qptr)?,
                    });
                }
                persons.push(PersonAnnotation { bbox, pose, parts });
            }
            frames.push(FrameAnnotation {
                frame_idx: f.frame_idx,
                persons,
            });
        }
        videos.push(VideoAnnotation {
            video_id: v.video_id,
            action,
            fps: v.fps,
            duration_s: v.duration_s,
            frames,
        });
    }
    super::validate_dataset(&vocab, &videos)?;
    Ok((vocab, videos))
}

/// Parse and fully validate a dataset document from a file.
pub fn parse_dataset(path: &Path) -> Result<(Vocabulary, Vec<VideoAnnotation>), ParseError> {
    parse_dataset_str(&read_file(path)?)
}

fn pose_to_wire(pose: &Option<Pose>) -> Option<Vec<[f64; 3]>> {
    pose.as_ref().map(|p| {
        p.keypoints()
            .iter()
            .map(|kp| [kp.x, kp.y, kp.confidence])
            .collect()
    })
}

/// Serialize a dataset to the canonical JSON document.
///
/// Output is deterministic: field order is fixed and floats use the shortest
/// round-trip representation, so identical models produce identical bytes.
pub fn serialize_dataset(vocab: &Vocabulary, videos: &[VideoAnnotation]) -> String {
    let file = DatasetFile {
        vocab: VocabFile {
            video_actions: vocab.video_actions().to_vec(),
            part_states: vocab.part_states().to_vec(),
        },
        videos: videos
            .iter()
            .map(|v| VideoFile {
                video_id: v.video_id.clone(),
                action: vocab
                    .action_name(v.action)
                    .expect("action id validated against vocabulary")
                    .to_string(),
                fps: v.fps,
                duration_s: v.duration_s,
                frames: v
                    .frames
                    .iter()
                    .map(|f| FrameFile {
                        frame_idx: f.frame_idx,
                        persons: f
                            .persons
                            .iter()
                            .map(|p| PersonFile {
                                bbox: p.bbox.corners(),
                                pose: pose_to_wire(&p.pose),
                                parts: p
                                    .parts
                                    .iter()
                                    .map(|q| PartFile {
                                        category: q.category.name().to_string(),
                                        bbox: q.bbox.corners(),
                                        state: vocab
                                            .state_name(q.state)
                                            .expect("state id validated against vocabulary")
                                            .to_string(),
                                    })
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("dataset serialization cannot fail")
}

/// Serialize a dataset and write it to `path`.
pub fn write_dataset(
    path: &Path,
    vocab: &Vocabulary,
    videos: &[VideoAnnotation],
) -> Result<(), ParseError> {
    let mut text = serialize_dataset(vocab, videos);
    text.push('\n');
    fs::write(path, text).map_err(|source| ParseError::Write {
        path: path.display().to_string(),
        source,
    })
}

// ---- prediction parse / serialize -------------------------------------

/// Parse and validate a prediction document against `vocab`.
pub fn parse_predictions_str(text: &str, vocab: &Vocabulary) -> Result<PredictionSet, ParseError> {
    let file: PredictionFile = from_json_str(text)?;
    let mut videos = Vec::with_capacity(file.videos.len());
    for (vi, v) in file.videos.into_iter().enumerate() {
        let vptr = format!("/videos/{vi}");
        let action = resolve_action(vocab, &v.action, &vptr)?;
        let action_confidence = resolve_confidence(v.confidence, &vptr)?;
        let mut frames = Vec::with_capacity(v.frames.len());
        for (fi, f) in v.frames.into_iter().enumerate() {
            let fptr = format!("{vptr}/frames/{fi}");
            let mut persons = Vec::with_capacity(f.persons.len());
            for (pi, p) in f.persons.into_iter().enumerate() {
                let pptr = format!("{fptr}/persons/{pi}");
                let bbox = resolve_bbox(p.bbox, &pptr)?;
                let confidence = resolve_confidence(p.confidence, &pptr)?;
                let pose = resolve_pose(&p.pose, &pptr)?;
                let mut parts = Vec::with_capacity(p.parts.len());
                for (qi, q) in p.parts.into_iter().enumerate() {
                    let qptr = format!("{pptr}/parts/{qi}");
                    parts.push(PartPrediction {
                        category: resolve_category(&q.category, &qptr)?,
                        bbox: resolve_bbox(q.bbox, &qptr)?,
                        state: resolve_state(vocab, &q.state, &qptr)?,
                        confidence: resolve_confidence(q.confidence, &qptr)?,
                    });
                }
                persons.push(PersonPrediction {
                    bbox,
                    confidence,
                    pose,
                    parts,
                });
            }
            frames.push(FramePrediction {
                frame_idx: f.frame_idx,
                persons,
            });
        }
        videos.push(VideoPrediction {
            video_id: v.video_id,
            action,
            action_confidence,
            frames,
        });
    }
    let set = PredictionSet::new(videos)?;
    set.validate_against(vocab)?;
    Ok(set)
}

/// Parse and validate a prediction file against `vocab`.
pub fn parse_predictions(path: &Path, vocab: &Vocabulary) -> Result<PredictionSet, ParseError> {
    parse_predictions_str(&read_file(path)?, vocab)
}

/// Serialize predictions to the canonical JSON document. Deterministic.
pub fn serialize_predictions(set: &PredictionSet, vocab: &Vocabulary) -> String {
    let file = PredictionFile {
        videos: set
            .videos()
            .iter()
            .map(|v| PredVideoFile {
                video_id: v.video_id.clone(),
                action: vocab
                    .action_name(v.action)
                    .expect("action id validated against vocabulary")
                    .to_string(),
                confidence: v.action_confidence.get(),
                frames: v
                    .frames
                    .iter()
                    .map(|f| PredFrameFile {
                        frame_idx: f.frame_idx,
                        persons: f
                            .persons
                            .iter()
                            .map(|p| PredPersonFile {
                                bbox: p.bbox.corners(),
                                confidence: p.confidence.get(),
                                pose: pose_to_wire(&p.pose),
                                parts: p
                                    .parts
                                    .iter()
                                    .map(|q| PredPartFile {
                                        category: q.category.name().to_string(),
                                        bbox: q.bbox.corners(),
                                        state: vocab
                                            .state_name(q.state)
                                            .expect("state id validated against vocabulary")
                                            .to_string(),
                                        confidence: q.confidence.get(),
                                    })
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("prediction serialization cannot fail")
}

/// Serialize predictions and write them to `path`.
pub fn write_predictions(
    path: &Path,
    set: &PredictionSet,
    vocab: &Vocabulary,
) -> Result<(), ParseError> {
    let mut text = serialize_predictions(set, vocab);
    text.push('\n');
    fs::write(path, text).map_err(|source| ParseError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "vocab": {"video_actions": ["hurling_sport"],
                  "part_states": ["none", "nod"]},
        "videos": [{
            "video_id": "v0", "action": "hurling_sport",
            "fps": 1.0, "duration_s": 2.0,
            "frames": [{
                "frame_idx": 0,
                "persons": [{
                    "box": [0.0, 0.0, 50.0, 100.0],
                    "pose": null,
                    "parts": [{"category": "head",
                               "box": [10.0, 0.0, 40.0, 20.0],
                               "state": "none"}]
                }]
            }]
        }]
    }"#;

    #[test]
    fn minimal_file_parses_with_matching_counts() {
        let (vocab, videos) = parse_dataset_str(MINIMAL).unwrap();
        assert_eq!(vocab.n_actions(), 1);
        assert_eq!(vocab.n_states(), 2);
        assert_eq!(videos.len(), 1);
        assert_eq!(videos[0].frames.len(), 1);
        assert_eq!(videos[0].frames[0].persons.len(), 1);
        assert_eq!(videos[0].frames[0].persons[0].parts.len(), 1);
        assert_eq!(
            videos[0].frames[0].persons[0].parts[0].category,
            PartCategory::Head
        );
    }

    #[test]
    fn minimal_round_trips() {
        let (vocab, videos) = parse_dataset_str(MINIMAL).unwrap();
        let text = serialize_dataset(&vocab, &videos);
        let (vocab2, videos2) = parse_dataset_str(&text).unwrap();
        assert_eq!(vocab, vocab2);
        assert_eq!(videos, videos2);
    }

    #[test]
    fn duplicate_head_reports_person_path() {
        let text = MINIMAL.replace(
            r#""parts": [{"category": "head","#,
            r#""parts": [{"category": "head", "box": [10.0, 0.0, 40.0, 20.0], "state": "none"},
                         {"category": "head","#,
        );
        let err = parse_dataset_str(&text).unwrap_err();
        match err {
            ParseError::Invalid(v) => {
                assert_eq!(v.pointer, "/videos/0/frames/0/persons/0/parts/1/category");
                assert!(v.message.contains("duplicate part category"));
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn unknown_state_rejected() {
        let text = MINIMAL.replace("\"state\": \"none\"", "\"state\": \"wave\"");
        let err = parse_dataset_str(&text).unwrap_err();
        match err {
            ParseError::Invalid(v) => {
                assert_eq!(v.pointer, "/videos/0/frames/0/persons/0/parts/0/state");
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn type_error_reports_json_pointer() {
        let text = MINIMAL.replace("\"frame_idx\": 0", "\"frame_idx\": \"zero\"");
        let err = parse_dataset_str(&text).unwrap_err();
        match err {
            ParseError::Json { pointer, .. } => {
                assert_eq!(pointer, "/videos/0/frames/0/frame_idx");
            }
            other => panic!("expected Json, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let text = MINIMAL.replace(
            "\"pose\": null,",
            "\"pose\": null, \"objects\": [{\"name\": \"ball\"}],",
        );
        assert!(parse_dataset_str(&text).is_ok());
    }

    #[test]
    fn bom_rejected() {
        let text = format!("\u{feff}{MINIMAL}");
        assert!(matches!(
            parse_dataset_str(&text),
            Err(ParseError::ByteOrderMark)
        ));
    }

    #[test]
    fn empty_prediction_set_is_valid() {
        let (vocab, _) = parse_dataset_str(MINIMAL).unwrap();
        let set = parse_predictions_str(r#"{"videos": []}"#, &vocab).unwrap();
        assert!(set.videos().is_empty());
    }

    #[test]
    fn eleven_persons_in_prediction_rejected() {
        let (vocab, _) = parse_dataset_str(MINIMAL).unwrap();
        let person = r#"{"box": [0.0, 0.0, 10.0, 10.0], "confidence": 0.5,
                         "pose": null, "parts": []}"#;
        let persons = vec![person; 11].join(",");
        let text = format!(
            r#"{{"videos": [{{"video_id": "v0", "action": "hurling_sport",
                 "confidence": 1.0,
                 "frames": [{{"frame_idx": 0, "persons": [{persons}]}}]}}]}}"#
        );
        let err = parse_predictions_str(&text, &vocab).unwrap_err();
        match err {
            ParseError::Invalid(v) => {
                assert_eq!(v.pointer, "/videos/0/frames/0/persons");
                assert!(v.message.contains("11 persons"));
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn prediction_confidence_out_of_range_rejected() {
        let (vocab, _) = parse_dataset_str(MINIMAL).unwrap();
        let text = r#"{"videos": [{"video_id": "v0", "action": "hurling_sport",
                       "confidence": 1.5, "frames": []}]}"#;
        let err = parse_predictions_str(text, &vocab).unwrap_err();
        match err {
            ParseError::Invalid(v) => assert_eq!(v.pointer, "/videos/0/confidence"),
            other => panic!("expected Invalid, got {other:?}"),
        }
    }
}
