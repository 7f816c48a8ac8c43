//! Minimal 8-bit RGB raster buffer.
//!
//! Person crops and rendered embeddings are plain row-major RGB byte
//! buffers. PNG encoding/decoding is delegated to the `image` crate; all
//! pixel manipulation here is done directly on the buffer so that outputs
//! are bit-exact and reproducible.

use std::path::Path;

use thiserror::Error;

/// One RGB color.
pub type Rgb = [u8; 3];

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("image dimensions must be nonzero, got {width}x{height}")]
    ZeroDimension { width: u32, height: u32 },
    #[error("buffer holds {got} bytes but {width}x{height} RGB needs {expected}")]
    BufferSize {
        width: u32,
        height: u32,
        expected: usize,
        got: usize,
    },
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Codec { path: String, message: String },
}

/// Row-major, tightly packed 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl Image {
    /// Black image of the given size.
    pub fn new(width: u32, height: u32) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension { width, height });
        }
        Ok(Image {
            width,
            height,
            data: vec![0; width as usize * height as usize * 3],
        })
    }

    /// Wrap an existing buffer; the length must match the declared size.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension { width, height });
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(RasterError::BufferSize {
                width,
                height,
                expected,
                got: data.len(),
            });
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 3
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let o = self.offset(x, y);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, color: Rgb) {
        let o = self.offset(x, y);
        self.data[o..o + 3].copy_from_slice(&color);
    }

    /// Channel-wise saturating addition at one pixel.
    #[inline]
    pub fn saturating_add_at(&mut self, x: u32, y: u32, color: Rgb) {
        let o = self.offset(x, y);
        for c in 0..3 {
            self.data[o + c] = self.data[o + c].saturating_add(color[c]);
        }
    }

    /// Fill every pixel whose center falls inside `[x0, x1) x [y0, y1)`
    /// (continuous coordinates, clipped to the image).
    pub fn fill_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, color: Rgb) {
        let px0 = x0.floor().max(0.0) as u32;
        let py0 = y0.floor().max(0.0) as u32;
        let px1 = (x1.ceil().max(0.0) as u32).min(self.width);
        let py1 = (y1.ceil().max(0.0) as u32).min(self.height);
        for py in py0..py1 {
            for px in px0..px1 {
                let cx = px as f64 + 0.5;
                let cy = py as f64 + 0.5;
                if cx >= x0 && cx < x1 && cy >= y0 && cy < y1 {
                    self.set(px, py, color);
                }
            }
        }
    }

    pub fn fill(&mut self, color: Rgb) {
        for px in self.data.chunks_exact_mut(3) {
            px.copy_from_slice(&color);
        }
    }

    /// Write as 8-bit RGB PNG, no interlacing.
    pub fn save_png(&self, path: &Path) -> Result<(), RasterError> {
        let buf = image::RgbImage::from_raw(self.width, self.height, self.data.clone())
            .expect("buffer length enforced at construction");
        buf.save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| RasterError::Codec {
                path: path.display().to_string(),
                message: e.to_string(),
            })
    }

    /// Load a PNG, converting to 8-bit RGB if needed.
    pub fn load_png(path: &Path) -> Result<Self, RasterError> {
        let reader = image::ImageReader::open(path).map_err(|e| RasterError::Read {
            path: path.display().to_string(),
            source: e,
        })?;
        let img = reader
            .decode()
            .map_err(|e| RasterError::Codec {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
            .to_rgb8();
        let (width, height) = img.dimensions();
        Image::from_raw(width, height, img.into_raw())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_raw_checks_length() {
        assert!(matches!(
            Image::from_raw(2, 2, vec![0; 11]),
            Err(RasterError::BufferSize { expected: 12, got: 11, .. })
        ));
        assert!(Image::from_raw(2, 2, vec![0; 12]).is_ok());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(Image::new(0, 4).is_err());
        assert!(Image::new(4, 0).is_err());
    }

    #[test]
    fn saturating_add_clamps() {
        let mut img = Image::new(1, 1).unwrap();
        img.set(0, 0, [250, 10, 0]);
        img.saturating_add_at(0, 0, [10, 10, 10]);
        assert_eq!(img.get(0, 0), [255, 20, 10]);
    }

    #[test]
    fn fill_rect_covers_pixel_centers() {
        let mut img = Image::new(4, 4).unwrap();
        img.fill_rect(1.0, 1.0, 3.0, 2.0, [9, 9, 9]);
        let lit: Vec<(u32, u32)> = (0..4)
            .flat_map(|y| (0..4).map(move |x| (x, y)))
            .filter(|&(x, y)| img.get(x, y) != [0, 0, 0])
            .collect();
        assert_eq!(lit, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.png");
        let mut img = Image::new(5, 3).unwrap();
        img.fill_rect(0.0, 0.0, 2.5, 3.0, [1, 2, 3]);
        img.save_png(&path).unwrap();
        assert_eq!(Image::load_png(&path).unwrap(), img);
    }
}
