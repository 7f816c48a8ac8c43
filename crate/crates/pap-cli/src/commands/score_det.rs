use std::collections::HashMap;
use std::path::PathBuf;

use pap_core::anno::json::{parse_dataset, parse_predictions};
use pap_core::anno::{BBox, PartCategory};
use pap_core::evaluator::average_precision;

use crate::config::pick;
use crate::Context;

#[derive(clap::Args)]
pub struct Args {
    /// Ground-truth annotation file
    #[arg(long, value_name = "PATH")]
    pub gt: PathBuf,

    /// Prediction file
    #[arg(long, value_name = "PATH")]
    pub pred: PathBuf,

    /// IoU threshold for the AP@50-style column (default 0.5)
    #[arg(long)]
    pub iou: Option<f64>,

    /// Comma-separated IoU thresholds averaged into the AP column
    /// (default 0.50,0.55,...,0.95)
    #[arg(long, value_delimiter = ',')]
    pub iou_list: Option<Vec<f64>>,
}

/// One detection workload: all boxes of one category, keyed by frame.
#[derive(Default)]
struct CategoryBoxes {
    gts: Vec<(u64, BBox)>,
    preds: Vec<(u64, BBox, f64)>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let ap50_iou = pick(args.iou, ctx.file.iou, 0.5);
    let iou_list = args
        .iou_list
        .unwrap_or_else(|| (0..10).map(|i| 0.5 + 0.05 * i as f64).collect());

    let (vocab, videos) = parse_dataset(&args.gt)?;
    let preds = parse_predictions(&args.pred, &vocab)?;

    // image key = (video index, frame index); only annotated keyframes of
    // ground-truth videos are scored
    let frame_keys: HashMap<(&str, u32), u64> = videos
        .iter()
        .enumerate()
        .flat_map(|(vi, video)| {
            video
                .frames
                .iter()
                .map(move |f| ((video.video_id.as_str(), f.frame_idx), ((vi as u64) << 32) | f.frame_idx as u64))
        })
        .collect();

    // categories: the whole person plus the ten parts
    let mut person_boxes = CategoryBoxes::default();
    let mut part_boxes: [CategoryBoxes; 10] = Default::default();
    for video in &videos {
        for frame in &video.frames {
            let key = frame_keys[&(video.video_id.as_str(), frame.frame_idx)];
            for person in &frame.persons {
                person_boxes.gts.push((key, person.bbox));
                for part in &person.parts {
                    part_boxes[part.category.index()].gts.push((key, part.bbox));
                }
            }
        }
    }
    for video in preds.videos() {
        for frame in &video.frames {
            let Some(&key) = frame_keys.get(&(video.video_id.as_str(), frame.frame_idx)) else {
                continue; // predictions on unannotated frames are not scored
            };
            for person in &frame.persons {
                person_boxes
                    .preds
                    .push((key, person.bbox, person.confidence.get()));
                for part in &person.parts {
                    part_boxes[part.category.index()].preds.push((
                        key,
                        part.bbox,
                        part.confidence.get(),
                    ));
                }
            }
        }
    }

    let mean_ap = |boxes: &CategoryBoxes| -> anyhow::Result<Option<f64>> {
        let mut sum = 0.0;
        for &threshold in &iou_list {
            match average_precision(&boxes.gts, &boxes.preds, threshold)? {
                Some(ap) => sum += ap,
                None => return Ok(None),
            }
        }
        Ok(Some(sum / iou_list.len() as f64))
    };
    let fmt = |value: Option<f64>| match value {
        Some(v) => format!("{:.2}", 100.0 * v),
        None => "NA".to_string(),
    };

    println!("category,ap,ap50");
    let ap = mean_ap(&person_boxes)?;
    let ap50 = average_precision(&person_boxes.gts, &person_boxes.preds, ap50_iou)?;
    println!("person,{},{}", fmt(ap), fmt(ap50));
    for category in PartCategory::ALL {
        let boxes = &part_boxes[category.index()];
        let ap = mean_ap(boxes)?;
        let ap50 = average_precision(&boxes.gts, &boxes.preds, ap50_iou)?;
        println!("{},{},{}", category.name(), fmt(ap), fmt(ap50));
    }
    Ok(())
}
