//! 8-bit PNG (and PGM/PPM debug) decode and encode for [`PlanarImage`].
//!
//! Decode maps `v -> v/255`; encode clamps to `[0,1]` and rounds half away
//! from zero. Alpha channels are dropped with a warning on stderr; 16-bit
//! files are rejected.

use std::path::Path;

use image::{DynamicImage, GrayImage, RgbImage};

use crate::error::{HazeError, Result};
use crate::raster::PlanarImage;

/// Load an 8-bit PNG/PGM/PPM as a 1- or 3-channel image.
pub fn load_image(path: &Path) -> Result<PlanarImage> {
    let dynimg = image::open(path).map_err(|e| HazeError::Codec(format!("{}: {e}", path.display())))?;
    match dynimg {
        DynamicImage::ImageLuma8(g) => gray_to_planar(&g),
        DynamicImage::ImageRgb8(rgb) => rgb_to_planar(&rgb),
        DynamicImage::ImageLumaA8(ga) => {
            eprintln!(
                "warning: {}: dropping alpha channel",
                path.display()
            );
            gray_to_planar(&DynamicImage::ImageLumaA8(ga).to_luma8())
        }
        DynamicImage::ImageRgba8(rgba) => {
            eprintln!(
                "warning: {}: dropping alpha channel",
                path.display()
            );
            rgb_to_planar(&DynamicImage::ImageRgba8(rgba).to_rgb8())
        }
        other => Err(HazeError::Codec(format!(
            "{}: unsupported sample format {:?} (only 8-bit gray/RGB)",
            path.display(),
            other.color()
        ))),
    }
}

/// Save as 8-bit PNG/PGM/PPM, picked by file extension (default PNG).
pub fn save_image(img: &PlanarImage, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let w = img.width() as u32;
    let h = img.height() as u32;
    match img.channels() {
        1 => {
            let buf: Vec<u8> = img.plane(0).iter().map(|&v| encode_u8(v)).collect();
            let gray = GrayImage::from_raw(w, h, buf).expect("buffer sized from image");
            gray.save(path)
                .map_err(|e| HazeError::Codec(format!("{}: {e}", path.display())))
        }
        3 => {
            let n = img.plane_len();
            let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
            let mut buf = Vec::with_capacity(n * 3);
            for i in 0..n {
                buf.push(encode_u8(r[i]));
                buf.push(encode_u8(g[i]));
                buf.push(encode_u8(b[i]));
            }
            let rgb = RgbImage::from_raw(w, h, buf).expect("buffer sized from image");
            rgb.save(path)
                .map_err(|e| HazeError::Codec(format!("{}: {e}", path.display())))
        }
        _ => unreachable!("PlanarImage enforces 1 or 3 channels"),
    }
}

/// Clamp to `[0,1]`, scale to 255, round half away from zero.
#[inline]
pub fn encode_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// `v/255` decode of one 8-bit sample.
#[inline]
pub fn decode_u8(v: u8) -> f64 {
    v as f64 / 255.0
}

fn gray_to_planar(g: &GrayImage) -> Result<PlanarImage> {
    let data: Vec<f64> = g.as_raw().iter().map(|&v| decode_u8(v)).collect();
    PlanarImage::from_data(g.width() as usize, g.height() as usize, 1, data)
}

fn rgb_to_planar(rgb: &RgbImage) -> Result<PlanarImage> {
    let n = (rgb.width() * rgb.height()) as usize;
    let raw = rgb.as_raw();
    let mut data = vec![0.0f64; n * 3];
    for i in 0..n {
        data[i] = decode_u8(raw[3 * i]);
        data[n + i] = decode_u8(raw[3 * i + 1]);
        data[2 * n + i] = decode_u8(raw[3 * i + 2]);
    }
    PlanarImage::from_data(rgb.width() as usize, rgb.height() as usize, 3, data)
}
