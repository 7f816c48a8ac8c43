use std::path::PathBuf;

use pap_core::anno::json::{parse_dataset, parse_predictions};

use crate::Context;

#[derive(clap::Args)]
pub struct Args {
    /// Annotation file to validate
    #[arg(long, value_name = "PATH")]
    pub anno: PathBuf,

    /// Prediction file, validated against the annotation vocabulary
    #[arg(long, value_name = "PATH")]
    pub pred: Option<PathBuf>,
}

pub fn run(_ctx: &Context, args: Args) -> anyhow::Result<()> {
    let (vocab, videos) = parse_dataset(&args.anno)?;
    let frames: usize = videos.iter().map(|v| v.frames.len()).sum();
    let persons: usize = videos
        .iter()
        .flat_map(|v| &v.frames)
        .map(|f| f.persons.len())
        .sum();
    let poses: usize = videos
        .iter()
        .flat_map(|v| &v.frames)
        .flat_map(|f| &f.persons)
        .filter(|p| p.pose.is_some())
        .count();
    let parts: usize = videos
        .iter()
        .flat_map(|v| &v.frames)
        .flat_map(|f| &f.persons)
        .map(|p| p.parts.len())
        .sum();
    println!(
        "vocab: {} actions, {} part states",
        vocab.n_actions(),
        vocab.n_states()
    );
    println!("videos: {}", videos.len());
    println!("frames: {frames}");
    println!("persons: {persons}");
    println!("poses: {poses}");
    println!("parts: {parts}");

    if let Some(pred_path) = &args.pred {
        let set = parse_predictions(pred_path, &vocab)?;
        let pred_frames: usize = set.videos().iter().map(|v| v.frames.len()).sum();
        let pred_persons: usize = set
            .videos()
            .iter()
            .flat_map(|v| &v.frames)
            .map(|f| f.persons.len())
            .sum();
        let pred_parts: usize = set
            .videos()
            .iter()
            .flat_map(|v| &v.frames)
            .flat_map(|f| &f.persons)
            .map(|p| p.parts.len())
            .sum();
        println!("prediction videos: {}", set.videos().len());
        println!("prediction frames: {pred_frames}");
        println!("prediction persons: {pred_persons}");
        println!("prediction parts: {pred_parts}");
    }
    Ok(())
}
