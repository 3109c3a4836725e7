//! Small zero-sum convolution kernels used by the contextual regularizer.
//!
//! Two application modes exist on purpose. Replicate-edge sampling feeds
//! the edge-aware weights: it keeps the response of a constant image zero
//! everywhere, including the borders. The optimizer instead applies the
//! kernels under periodic boundary conditions, where the quadratic
//! subproblem diagonalizes in the frequency domain; the objective, the
//! shrinkage step, and the solver all share that one operator.

use crate::error::{HazeError, Result};
use crate::raster::PlanarImage;

/// Odd-sized square kernel with zero-sum taps.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    taps: Vec<f64>,
}

impl Kernel {
    /// `taps` in row-major order; `size` must be odd and the taps must sum
    /// to zero so constant images produce zero response.
    pub fn new(size: usize, taps: Vec<f64>) -> Result<Self> {
        if size % 2 == 0 || taps.len() != size * size {
            return Err(HazeError::Config(format!(
                "kernel must be odd-sized square, got size {size} with {} taps",
                taps.len()
            )));
        }
        let sum: f64 = taps.iter().sum();
        if sum.abs() > 1e-12 {
            return Err(HazeError::Config(format!(
                "kernel taps must sum to zero, got {sum}"
            )));
        }
        Ok(Self { size, taps })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    fn radius(&self) -> usize {
        self.size / 2
    }

    /// Correlate with replicate (clamp-to-edge) sampling.
    pub fn apply_replicate(&self, src: &[f64], width: usize, height: usize) -> Vec<f64> {
        let r = self.radius() as isize;
        let mut out = vec![0.0; width * height];
        for y in 0..height as isize {
            for x in 0..width as isize {
                let mut acc = 0.0;
                for ky in 0..self.size as isize {
                    let sy = (y + ky - r).clamp(0, height as isize - 1) as usize;
                    for kx in 0..self.size as isize {
                        let sx = (x + kx - r).clamp(0, width as isize - 1) as usize;
                        acc += self.taps[(ky * self.size as isize + kx) as usize]
                            * src[sy * width + sx];
                    }
                }
                out[(y * width as isize + x) as usize] = acc;
            }
        }
        out
    }

    /// Correlate under periodic boundary conditions.
    pub fn apply_periodic(&self, src: &[f64], width: usize, height: usize) -> Vec<f64> {
        let r = self.radius() as isize;
        let (w, h) = (width as isize, height as isize);
        let mut out = vec![0.0; width * height];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for ky in 0..self.size as isize {
                    let sy = (y + ky - r).rem_euclid(h) as usize;
                    for kx in 0..self.size as isize {
                        let sx = (x + kx - r).rem_euclid(w) as usize;
                        acc += self.taps[(ky * self.size as isize + kx) as usize]
                            * src[sy * width + sx];
                    }
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        out
    }

    /// Adjoint of [`apply_periodic`]: scatter each response back to the
    /// samples it read, which is correlation with the flipped kernel.
    pub fn apply_periodic_adjoint(&self, src: &[f64], width: usize, height: usize) -> Vec<f64> {
        let r = self.radius() as isize;
        let (w, h) = (width as isize, height as isize);
        let mut out = vec![0.0; width * height];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for ky in 0..self.size as isize {
                    let sy = (y - (ky - r)).rem_euclid(h) as usize;
                    for kx in 0..self.size as isize {
                        let sx = (x - (kx - r)).rem_euclid(w) as usize;
                        acc += self.taps[(ky * self.size as isize + kx) as usize]
                            * src[sy * width + sx];
                    }
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        out
    }

    /// Point-spread function on a `width x height` torus: the periodic
    /// response to a unit impulse at the origin.
    pub fn psf(&self, width: usize, height: usize) -> Vec<f64> {
        let mut delta = vec![0.0; width * height];
        delta[0] = 1.0;
        self.apply_periodic(&delta, width, height)
    }
}

/// Ordered collection of regularizer kernels.
#[derive(Debug, Clone)]
pub struct FilterBank {
    pub kernels: Vec<Kernel>,
}

impl FilterBank {
    /// Eight first-order differences at 45-degree increments plus a 3x3
    /// Laplacian.
    pub fn directional() -> Self {
        let dirs: [(isize, isize); 8] = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ];
        let mut kernels = Vec::with_capacity(9);
        for (dx, dy) in dirs {
            let mut taps = vec![0.0; 9];
            taps[4] = -1.0; // center of a 3x3
            taps[((1 + dy) * 3 + (1 + dx)) as usize] = 1.0;
            kernels.push(Kernel::new(3, taps).expect("difference kernel is zero-sum"));
        }
        let laplacian = Kernel::new(3, vec![0.0, 1.0, 0.0, 1.0, -4.0, 1.0, 0.0, 1.0, 0.0])
            .expect("laplacian is zero-sum");
        kernels.push(laplacian);
        Self { kernels }
    }

    /// Single horizontal two-tap forward difference; handy for small solver
    /// instances.
    pub fn single_horizontal_difference() -> Self {
        let mut taps = vec![0.0; 9];
        taps[4] = -1.0;
        taps[5] = 1.0;
        Self {
            kernels: vec![Kernel::new(3, taps).expect("difference kernel is zero-sum")],
        }
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }
}

/// Apply one kernel to a single-channel image with replicate edges.
pub fn apply_replicate_image(kernel: &Kernel, img: &PlanarImage) -> Result<PlanarImage> {
    if img.channels() != 1 {
        return Err(HazeError::InvalidImage(
            "kernel application expects a single-channel image".into(),
        ));
    }
    let out = kernel.apply_replicate(img.plane(0), img.width(), img.height());
    PlanarImage::from_data(img.width(), img.height(), 1, out)
}
