//! Channel-planar floating-point raster and the sliding-window primitives
//! (box mean, windowed min/max) the prior dehazers are built from.
//!
//! Samples live in gamma-encoded `[0,1]` space and are stored plane by
//! plane: all of channel 0, then channel 1, and so on. Windowed operations
//! use shrink-to-valid edges — windows are clipped at the borders and means
//! are normalized by the actual number of in-bounds pixels, so constant
//! images are exact fixed points.

use crate::error::{HazeError, Result};

/// Floating-point raster with 1 or 3 planes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl PlanarImage {
    /// Zero-filled image. Width and height must be positive; channels 1 or 3.
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        Self::validate_shape(width, height, channels)?;
        Ok(Self {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        })
    }

    /// Constant-valued image.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(HazeError::InvalidImage("non-finite fill value".into()));
        }
        let mut img = Self::new(width, height, channels)?;
        img.data.fill(value);
        Ok(img)
    }

    /// Wrap plane-ordered samples. Length must equal `width * height * channels`
    /// and every sample must be finite.
    pub fn from_data(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        Self::validate_shape(width, height, channels)?;
        if data.len() != width * height * channels {
            return Err(HazeError::InvalidImage(format!(
                "sample count {} does not match {}x{}x{}",
                data.len(),
                width,
                height,
                channels
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(HazeError::InvalidImage("non-finite sample".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    fn validate_shape(width: usize, height: usize, channels: usize) -> Result<()> {
        if width == 0 || height == 0 {
            return Err(HazeError::InvalidImage("zero-sized image".into()));
        }
        if channels != 1 && channels != 3 {
            return Err(HazeError::InvalidImage(format!(
                "unsupported channel count {channels}"
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Pixels per plane.
    pub fn plane_len(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.plane_len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.plane_len();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[c * self.plane_len() + y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let n = self.plane_len();
        self.data[c * n + y * self.width + x] = v;
    }

    /// True when both images share width, height, and channel count.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Elementwise map into a new image of the same shape.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Clamp every sample to `[lo, hi]` in place.
    pub fn clamp_in_place(&mut self, lo: f64, hi: f64) {
        for v in &mut self.data {
            *v = v.clamp(lo, hi);
        }
    }

    /// Mean over all samples of all planes.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Replicate a single plane across three channels.
    pub fn broadcast_to_rgb(&self) -> Result<Self> {
        if self.channels != 1 {
            return Err(HazeError::InvalidImage(
                "broadcast_to_rgb expects a single-channel image".into(),
            ));
        }
        let mut data = Vec::with_capacity(self.data.len() * 3);
        for _ in 0..3 {
            data.extend_from_slice(&self.data);
        }
        Ok(Self {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        })
    }

    /// Axis-aligned crop; `(x0, y0)` is the top-left corner of the window.
    pub fn crop(&self, x0: usize, y0: usize, cw: usize, ch: usize) -> Result<Self> {
        if cw == 0 || ch == 0 || x0 + cw > self.width || y0 + ch > self.height {
            return Err(HazeError::InvalidImage(format!(
                "crop {cw}x{ch}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut out = Self::new(cw, ch, self.channels)?;
        for c in 0..self.channels {
            let src = self.plane(c);
            let dst = out.plane_mut(c);
            for y in 0..ch {
                let s = (y0 + y) * self.width + x0;
                dst[y * cw..(y + 1) * cw].copy_from_slice(&src[s..s + cw]);
            }
        }
        Ok(out)
    }
}

/// Square sliding window with shrink-to-valid edge handling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub radius: usize,
}

impl WindowSpec {
    pub fn new(radius: usize) -> Self {
        Self { radius }
    }
}

/// Min or max for [`window_extremum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumMode {
    Min,
    Max,
}

/// Windowed mean with shrink-to-valid normalization, per channel.
///
/// Uses a summed-area table so each output pixel costs O(1) regardless of
/// radius. Radius 0 is the identity.
pub fn box_filter(img: &PlanarImage, w: WindowSpec) -> PlanarImage {
    if w.radius == 0 {
        return img.clone();
    }
    let mut out = img.clone();
    for c in 0..img.channels() {
        box_filter_plane(
            img.plane(c),
            img.width(),
            img.height(),
            w.radius,
            out.plane_mut(c),
        );
    }
    out
}

/// Plane-level box filter; `out` must hold `width * height` samples.
pub(crate) fn box_filter_plane(src: &[f64], width: usize, height: usize, radius: usize, out: &mut [f64]) {
    let sums = box_sums_plane(src, width, height, radius);
    for y in 0..height {
        let (y0, y1) = clipped(y, radius, height);
        for x in 0..width {
            let (x0, x1) = clipped(x, radius, width);
            let count = ((y1 - y0) * (x1 - x0)) as f64;
            out[y * width + x] = sums[y * width + x] / count;
        }
    }
}

/// Clipped-window sums (no normalization); the adjoint of the box filter is
/// built from these together with the per-pixel window counts.
pub(crate) fn box_sums_plane(src: &[f64], width: usize, height: usize, radius: usize) -> Vec<f64> {
    // Summed-area table with a zero guard row/column.
    let sw = width + 1;
    let mut sat = vec![0.0f64; sw * (height + 1)];
    for y in 0..height {
        let mut row = 0.0;
        for x in 0..width {
            row += src[y * width + x];
            sat[(y + 1) * sw + (x + 1)] = sat[y * sw + (x + 1)] + row;
        }
    }
    let mut sums = vec![0.0f64; width * height];
    for y in 0..height {
        let (y0, y1) = clipped(y, radius, height);
        for x in 0..width {
            let (x0, x1) = clipped(x, radius, width);
            sums[y * width + x] =
                sat[y1 * sw + x1] - sat[y0 * sw + x1] - sat[y1 * sw + x0] + sat[y0 * sw + x0];
        }
    }
    sums
}

/// Number of in-bounds pixels in the clipped window centered at each pixel.
pub(crate) fn window_counts(width: usize, height: usize, radius: usize) -> Vec<f64> {
    let mut counts = vec![0.0f64; width * height];
    for y in 0..height {
        let (y0, y1) = clipped(y, radius, height);
        for x in 0..width {
            let (x0, x1) = clipped(x, radius, width);
            counts[y * width + x] = ((y1 - y0) * (x1 - x0)) as f64;
        }
    }
    counts
}

#[inline]
fn clipped(center: usize, radius: usize, len: usize) -> (usize, usize) {
    let lo = center.saturating_sub(radius);
    let hi = (center + radius + 1).min(len);
    (lo, hi)
}

/// Windowed minimum or maximum with clipped windows, per channel.
///
/// Separable: a monotonic-deque pass over rows followed by one over columns,
/// O(N) total. Radius 0 is the identity.
pub fn window_extremum(img: &PlanarImage, w: WindowSpec, mode: ExtremumMode) -> PlanarImage {
    if w.radius == 0 {
        return img.clone();
    }
    let mut out = img.clone();
    let width = img.width();
    let height = img.height();
    let mut row_buf = vec![0.0f64; width.max(height)];
    let mut col_buf = vec![0.0f64; height];
    for c in 0..img.channels() {
        let plane = out.plane_mut(c);
        for y in 0..height {
            row_buf[..width].copy_from_slice(&plane[y * width..(y + 1) * width]);
            sliding_extremum_1d(&row_buf[..width], w.radius, mode, &mut plane[y * width..(y + 1) * width]);
        }
        for x in 0..width {
            for y in 0..height {
                col_buf[y] = plane[y * width + x];
            }
            sliding_extremum_1d(&col_buf, w.radius, mode, &mut row_buf[..height]);
            for y in 0..height {
                plane[y * width + x] = row_buf[y];
            }
        }
    }
    out
}

/// 1-D sliding extremum over `[i-radius, i+radius]` clipped to the array.
fn sliding_extremum_1d(src: &[f64], radius: usize, mode: ExtremumMode, out: &mut [f64]) {
    let n = src.len();
    // Deque of indices whose values are candidates, kept monotone.
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    let better = |a: f64, b: f64| match mode {
        ExtremumMode::Min => a <= b,
        ExtremumMode::Max => a >= b,
    };
    let mut next_in = 0usize;
    for i in 0..n {
        let hi = (i + radius + 1).min(n);
        while next_in < hi {
            while let Some(&back) = deque.back() {
                if better(src[next_in], src[back]) {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next_in);
            next_in += 1;
        }
        let lo = i.saturating_sub(radius);
        while let Some(&front) = deque.front() {
            if front < lo {
                deque.pop_front();
            } else {
                break;
            }
        }
        out[i] = src[*deque.front().expect("window never empty")];
    }
}

/// Per-pixel minimum across the three channels.
pub fn min_channel(img: &PlanarImage) -> Result<PlanarImage> {
    if img.channels() != 3 {
        return Err(HazeError::InvalidImage(
            "min_channel expects a 3-channel image".into(),
        ));
    }
    let n = img.plane_len();
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let data: Vec<f64> = (0..n).map(|i| r[i].min(g[i]).min(b[i])).collect();
    PlanarImage::from_data(img.width(), img.height(), 1, data)
}

/// Rec. 601 luma: `0.299 R + 0.587 G + 0.114 B`.
pub fn luminance(img: &PlanarImage) -> Result<PlanarImage> {
    if img.channels() != 3 {
        return Err(HazeError::InvalidImage(
            "luminance expects a 3-channel image".into(),
        ));
    }
    let n = img.plane_len();
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let data: Vec<f64> = (0..n)
        .map(|i| 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i])
        .collect();
    PlanarImage::from_data(img.width(), img.height(), 1, data)
}
