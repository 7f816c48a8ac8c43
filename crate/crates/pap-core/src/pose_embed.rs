//! Pose-guided positional embedding and keypoint-driven box refinement.
//!
//! The embedding composites one colored disk per confident keypoint onto
//! the person crop by channel-wise saturating addition, so visually similar
//! parts (left vs right limbs) become distinguishable by color. Rendering
//! is exact and reproducible: no anti-aliasing, a pixel belongs to a disk
//! iff its center `(px + 0.5, py + 0.5)` satisfies `dx^2 + dy^2 <= r^2`.
//!
//! Box refinement grows a detected person box until it contains every
//! keypoint above a confidence threshold, the assumption being that the
//! pose estimator can see limbs the detector cut off.

use thiserror::Error;

use crate::anno::{BBox, Pose};
use crate::raster::{Image, Rgb};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("palette must contain at least one color")]
    EmptyPalette,
    #[error("palette colors must be pairwise distinct, color {0:?} repeats")]
    DuplicateColor(Rgb),
    #[error("radius_min must be >= 1 pixel, got {0}")]
    BadMinRadius(f64),
    #[error("radius_ratio must be > 0, got {0}")]
    BadRadiusRatio(f64),
    #[error("confidence threshold must be in [0, 1], got {0}")]
    BadThreshold(f64),
    #[error("margin must be finite and >= 0, got {0}")]
    BadMargin(f64),
    #[error("pose has {keypoints} keypoints but the palette only {colors} colors")]
    PaletteTooSmall { keypoints: usize, colors: usize },
    #[error("image bounds ({0}, {1}) leave no valid box")]
    DegenerateClip(f64, f64),
}

/// How disks are drawn: colors, radius policy and the confidence gate.
///
/// All keypoints share one radius, `max(radius_min, radius_ratio *
/// min(crop_w, crop_h))`; colors alone tell keypoints apart. Compositing is
/// channel-wise saturating addition.
#[derive(Debug, Clone)]
pub struct EmbedStyle {
    palette: Vec<Rgb>,
    radius_ratio: f64,
    radius_min: f64,
    conf_threshold: f64,
}

pub const DEFAULT_RADIUS_RATIO: f64 = 0.02;
pub const DEFAULT_RADIUS_MIN: f64 = 2.0;
pub const DEFAULT_CONF_THRESHOLD: f64 = 0.3;

impl EmbedStyle {
    pub fn new(
        palette: Vec<Rgb>,
        radius_ratio: f64,
        radius_min: f64,
        conf_threshold: f64,
    ) -> Result<Self, EmbedError> {
        if palette.is_empty() {
            return Err(EmbedError::EmptyPalette);
        }
        for (i, a) in palette.iter().enumerate() {
            if palette[..i].contains(a) {
                return Err(EmbedError::DuplicateColor(*a));
            }
        }
        if !(radius_min.is_finite() && radius_min >= 1.0) {
            return Err(EmbedError::BadMinRadius(radius_min));
        }
        if !(radius_ratio.is_finite() && radius_ratio > 0.0) {
            return Err(EmbedError::BadRadiusRatio(radius_ratio));
        }
        if !(conf_threshold.is_finite() && (0.0..=1.0).contains(&conf_threshold)) {
            return Err(EmbedError::BadThreshold(conf_threshold));
        }
        Ok(EmbedStyle {
            palette,
            radius_ratio,
            radius_min,
            conf_threshold,
        })
    }

    /// Default style for `n` keypoints: hue-separated palette, box-relative
    /// radius with a 2 px floor, confidence gate 0.3.
    pub fn default_for(n: usize) -> Result<Self, EmbedError> {
        EmbedStyle::new(
            default_palette(n)?,
            DEFAULT_RADIUS_RATIO,
            DEFAULT_RADIUS_MIN,
            DEFAULT_CONF_THRESHOLD,
        )
    }

    pub fn palette(&self) -> &[Rgb] {
        &self.palette
    }

    pub fn conf_threshold(&self) -> f64 {
        self.conf_threshold
    }

    /// Disk radius for a crop of the given size.
    pub fn radius_for(&self, width: u32, height: u32) -> f64 {
        let short_side = width.min(height) as f64;
        (self.radius_ratio * short_side).max(self.radius_min)
    }
}

/// `n` maximally hue-separated colors: hue `k/n` on the HSV wheel at full
/// saturation and value, converted to RGB with round-to-nearest channels.
pub fn default_palette(n: usize) -> Result<Vec<Rgb>, EmbedError> {
    if n == 0 {
        return Err(EmbedError::EmptyPalette);
    }
    Ok((0..n).map(|k| hsv_to_rgb(k as f64 / n as f64)).collect())
}

/// HSV -> RGB at s = v = 1. `hue` is in [0, 1).
fn hsv_to_rgb(hue: f64) -> Rgb {
    let h = hue * 6.0;
    let sector = h.floor() as i64;
    let f = h - sector as f64;
    let q = 1.0 - f;
    let (r, g, b) = match sector.rem_euclid(6) {
        0 => (1.0, f, 0.0),
        1 => (q, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, q, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, q),
    };
    let to_u8 = |c: f64| (c * 255.0).round() as u8;
    [to_u8(r), to_u8(g), to_u8(b)]
}

/// Composite one colored disk per confident keypoint onto a copy of `crop`.
///
/// Keypoint `i` uses `palette[i]`. Disks are drawn in ascending keypoint
/// index order (saturating addition makes the order irrelevant, but it is
/// fixed for determinism). Keypoints below the confidence threshold draw
/// nothing; keypoints outside the crop contribute only the in-bounds part
/// of their disk. Pixels outside all disks are bit-identical to the input.
pub fn render_embedding(
    crop: &Image,
    pose: &Pose,
    style: &EmbedStyle,
) -> Result<Image, EmbedError> {
    if pose.len() > style.palette.len() {
        return Err(EmbedError::PaletteTooSmall {
            keypoints: pose.len(),
            colors: style.palette.len(),
        });
    }
    let mut out = crop.clone();
    let radius = style.radius_for(crop.width(), crop.height());
    let r2 = radius * radius;
    for (i, kp) in pose.keypoints().iter().enumerate() {
        if kp.confidence < style.conf_threshold {
            continue;
        }
        let color = style.palette[i];
        // conservative pixel window around the disk; the exact distance
        // test below decides membership
        let x_lo = ((kp.x - radius - 1.0).floor().max(0.0)) as u32;
        let y_lo = ((kp.y - radius - 1.0).floor().max(0.0)) as u32;
        let x_hi = (((kp.x + radius + 1.0).ceil()).max(0.0) as u32).min(crop.width());
        let y_hi = (((kp.y + radius + 1.0).ceil()).max(0.0) as u32).min(crop.height());
        for py in y_lo..y_hi {
            for px in x_lo..x_hi {
                let dx = px as f64 + 0.5 - kp.x;
                let dy = py as f64 + 0.5 - kp.y;
                if dx * dx + dy * dy <= r2 {
                    out.saturating_add_at(px, py, color);
                }
            }
        }
    }
    Ok(out)
}

/// Grow `bbox` to the smallest box containing it and every keypoint with
/// confidence at least `conf_threshold`, expanded by `margin` on each side.
///
/// Coordinates are floored at 0 (the image coordinate frame), and clipped
/// to `bounds = (width, height)` when supplied. With no qualifying
/// keypoints the result is the input box plus margin. The output always
/// contains the intersection of the input box with the image bounds.
pub fn refine_box(
    bbox: &BBox,
    pose: &Pose,
    conf_threshold: f64,
    margin: f64,
    bounds: Option<(f64, f64)>,
) -> Result<BBox, EmbedError> {
    if !(conf_threshold.is_finite() && (0.0..=1.0).contains(&conf_threshold)) {
        return Err(EmbedError::BadThreshold(conf_threshold));
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(EmbedError::BadMargin(margin));
    }
    let mut x_min = bbox.x_min();
    let mut y_min = bbox.y_min();
    let mut x_max = bbox.x_max();
    let mut y_max = bbox.y_max();
    for kp in pose.keypoints() {
        if kp.confidence < conf_threshold {
            continue;
        }
        x_min = x_min.min(kp.x);
        y_min = y_min.min(kp.y);
        x_max = x_max.max(kp.x);
        y_max = y_max.max(kp.y);
    }
    x_min = (x_min - margin).max(0.0);
    y_min = (y_min - margin).max(0.0);
    x_max += margin;
    y_max += margin;
    if let Some((w, h)) = bounds {
        x_max = x_max.min(w);
        y_max = y_max.min(h);
        x_min = x_min.min(x_max);
        y_min = y_min.min(y_max);
    }
    BBox::new(x_min, y_min, x_max, y_max)
        .map_err(|_| EmbedError::DegenerateClip(x_max - x_min, y_max - y_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anno::Keypoint;

    fn pose_of(points: &[(f64, f64, f64)]) -> Pose {
        Pose::new(
            points
                .iter()
                .map(|&(x, y, confidence)| Keypoint { x, y, confidence })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn palette_of_one_is_pure_red() {
        assert_eq!(default_palette(1).unwrap(), vec![[255, 0, 0]]);
    }

    #[test]
    fn palette_of_two_is_red_and_cyan() {
        assert_eq!(
            default_palette(2).unwrap(),
            vec![[255, 0, 0], [0, 255, 255]]
        );
    }

    #[test]
    fn palette_of_seventeen_is_pairwise_distinct() {
        let palette = default_palette(17).unwrap();
        assert_eq!(palette.len(), 17);
        for (i, a) in palette.iter().enumerate() {
            for b in &palette[..i] {
                assert_ne!(a, b);
            }
        }
        // EmbedStyle accepts it, i.e. the distinctness invariant holds
        assert!(EmbedStyle::new(palette, 0.02, 2.0, 0.3).is_ok());
    }

    #[test]
    fn palette_of_zero_rejected() {
        assert!(matches!(default_palette(0), Err(EmbedError::EmptyPalette)));
    }

    #[test]
    fn zero_confidence_pose_is_identity() {
        let mut crop = Image::new(16, 16).unwrap();
        crop.fill_rect(2.0, 2.0, 9.0, 9.0, [10, 200, 30]);
        let pose = pose_of(&[(8.0, 8.0, 0.0), (3.0, 3.0, 0.0)]);
        let style = EmbedStyle::default_for(2).unwrap();
        let out = render_embedding(&crop, &pose, &style).unwrap();
        assert_eq!(out, crop);
    }

    #[test]
    fn green_disk_on_black_crop_is_exact() {
        let crop = Image::new(9, 9).unwrap();
        let style = EmbedStyle::new(vec![[0, 255, 0]], 1e-9, 2.0, 0.5).unwrap();
        let pose = pose_of(&[(4.5, 4.5, 1.0)]);
        let out = render_embedding(&crop, &pose, &style).unwrap();
        for py in 0..9 {
            for px in 0..9 {
                let dx = px as f64 + 0.5 - 4.5;
                let dy = py as f64 + 0.5 - 4.5;
                let inside = dx * dx + dy * dy <= 4.0;
                let expected = if inside { [0, 255, 0] } else { [0, 0, 0] };
                assert_eq!(out.get(px, py), expected, "pixel ({px}, {py})");
            }
        }
    }

    #[test]
    fn white_crop_saturates_to_identity() {
        let mut crop = Image::new(12, 12).unwrap();
        crop.fill([255, 255, 255]);
        let style = EmbedStyle::default_for(3).unwrap();
        let pose = pose_of(&[(6.0, 6.0, 1.0), (2.0, 2.0, 0.9), (20.0, 6.0, 0.8)]);
        let out = render_embedding(&crop, &pose, &style).unwrap();
        assert_eq!(out, crop);
    }

    #[test]
    fn off_crop_keypoint_draws_only_in_bounds() {
        let crop = Image::new(8, 8).unwrap();
        let style = EmbedStyle::new(vec![[1, 2, 3]], 1e-9, 3.0, 0.0).unwrap();
        // centered just off the left edge; only the in-bounds sliver lights up
        let pose = pose_of(&[(-1.0, 4.0, 1.0)]);
        let out = render_embedding(&crop, &pose, &style).unwrap();
        let lit = (0..8)
            .flat_map(|y| (0..8).map(move |x| (x, y)))
            .filter(|&(x, y)| out.get(x, y) != [0, 0, 0])
            .count();
        assert!(lit > 0);
        for y in 0..8 {
            for x in 3..8 {
                assert_eq!(out.get(x, y), [0, 0, 0]);
            }
        }
    }

    #[test]
    fn palette_smaller_than_pose_is_rejected() {
        let crop = Image::new(4, 4).unwrap();
        let style = EmbedStyle::default_for(1).unwrap();
        let pose = pose_of(&[(1.0, 1.0, 1.0), (2.0, 2.0, 1.0)]);
        assert!(matches!(
            render_embedding(&crop, &pose, &style),
            Err(EmbedError::PaletteTooSmall { .. })
        ));
    }

    #[test]
    fn refine_is_fixed_point_when_keypoints_inside() {
        let bbox = BBox::new(10.0, 10.0, 20.0, 20.0).unwrap();
        let pose = pose_of(&[(12.0, 15.0, 0.9), (18.0, 11.0, 0.8)]);
        let out = refine_box(&bbox, &pose, 0.5, 0.0, None).unwrap();
        assert_eq!(out, bbox);
    }

    #[test]
    fn refine_expands_along_one_axis() {
        let bbox = BBox::new(10.0, 10.0, 20.0, 20.0).unwrap();
        let pose = pose_of(&[(25.0, 15.0, 0.9)]);
        let out = refine_box(&bbox, &pose, 0.5, 0.0, None).unwrap();
        assert_eq!(out.corners(), [10.0, 10.0, 25.0, 20.0]);
    }

    #[test]
    fn refine_ignores_low_confidence_keypoints() {
        let bbox = BBox::new(10.0, 10.0, 20.0, 20.0).unwrap();
        let pose = pose_of(&[(25.0, 15.0, 0.2)]);
        let out = refine_box(&bbox, &pose, 0.5, 0.0, None).unwrap();
        assert_eq!(out, bbox);
    }

    #[test]
    fn refine_with_no_qualifying_keypoints_applies_margin() {
        let bbox = BBox::new(10.0, 10.0, 20.0, 20.0).unwrap();
        let pose = pose_of(&[(25.0, 15.0, 0.1)]);
        let out = refine_box(&bbox, &pose, 0.5, 3.0, None).unwrap();
        assert_eq!(out.corners(), [7.0, 7.0, 23.0, 23.0]);
    }

    #[test]
    fn refine_floors_at_zero_and_clips_to_bounds() {
        let bbox = BBox::new(2.0, 2.0, 8.0, 8.0).unwrap();
        let pose = pose_of(&[(-5.0, 4.0, 0.9), (4.0, 30.0, 0.9)]);
        let out = refine_box(&bbox, &pose, 0.5, 0.0, Some((10.0, 12.0))).unwrap();
        assert_eq!(out.corners(), [0.0, 2.0, 8.0, 12.0]);
    }
}
