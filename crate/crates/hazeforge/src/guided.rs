//! Guided filter: edge-preserving smoothing expressing the output as a
//! local affine function of a guide image.
//!
//! Classic closed form with all means taken by the shrink-to-valid box
//! filter: `a = cov(g,p) / (var(g) + eps)`, `b = mean(p) - a mean(g)`,
//! `out = box(a) g + box(b)`. For a fixed guide the filter is linear in
//! `p`, and [`guided_filter_backward`] applies the exact adjoint of that
//! linear map, which is what gradient-based training needs.

use crate::error::{HazeError, Result};
use crate::raster::{box_filter_plane, box_sums_plane, window_counts, PlanarImage};

/// Intermediate products of one plane-level guided filter pass, retained so
/// the backward pass can reuse them.
pub struct GuidedPlan {
    width: usize,
    height: usize,
    radius: usize,
    guide: Vec<f64>,
    mean_guide: Vec<f64>,
    /// 1 / (var(guide) + eps); independent of the filtered image.
    inv_var: Vec<f64>,
    counts: Vec<f64>,
}

impl GuidedPlan {
    /// Precompute the guide-only statistics for the given radius and eps.
    pub fn new(guide: &PlanarImage, radius: usize, eps: f64) -> Result<Self> {
        if guide.channels() != 1 {
            return Err(HazeError::InvalidImage(
                "guided filter expects a single-channel guide".into(),
            ));
        }
        if eps < 0.0 {
            return Err(HazeError::Config("guided filter eps must be >= 0".into()));
        }
        let (width, height) = (guide.width(), guide.height());
        let g = guide.plane(0).to_vec();
        let mut mean_guide = vec![0.0; g.len()];
        box_filter_plane(&g, width, height, radius, &mut mean_guide);
        let gg: Vec<f64> = g.iter().map(|&v| v * v).collect();
        let mut mean_gg = vec![0.0; g.len()];
        box_filter_plane(&gg, width, height, radius, &mut mean_gg);
        let inv_var: Vec<f64> = mean_gg
            .iter()
            .zip(&mean_guide)
            .map(|(&egg, &eg)| 1.0 / (egg - eg * eg + eps))
            .collect();
        let counts = window_counts(width, height, radius);
        Ok(Self {
            width,
            height,
            radius,
            guide: g,
            mean_guide,
            inv_var,
            counts,
        })
    }

    fn check(&self, p: &PlanarImage) -> Result<()> {
        if p.channels() != 1 || p.width() != self.width || p.height() != self.height {
            return Err(HazeError::DimensionMismatch(format!(
                "filter input {}x{}x{} vs guide {}x{}",
                p.width(),
                p.height(),
                p.channels(),
                self.width,
                self.height
            )));
        }
        Ok(())
    }

    /// Filter `p` against the planned guide.
    pub fn apply(&self, p: &PlanarImage) -> Result<PlanarImage> {
        self.check(p)?;
        let n = self.width * self.height;
        let ps = p.plane(0);
        let mut mean_p = vec![0.0; n];
        box_filter_plane(ps, self.width, self.height, self.radius, &mut mean_p);
        let gp: Vec<f64> = self.guide.iter().zip(ps).map(|(&g, &v)| g * v).collect();
        let mut mean_gp = vec![0.0; n];
        box_filter_plane(&gp, self.width, self.height, self.radius, &mut mean_gp);

        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for i in 0..n {
            let cov = mean_gp[i] - self.mean_guide[i] * mean_p[i];
            a[i] = cov * self.inv_var[i];
            b[i] = mean_p[i] - a[i] * self.mean_guide[i];
        }
        let mut mean_a = vec![0.0; n];
        let mut mean_b = vec![0.0; n];
        box_filter_plane(&a, self.width, self.height, self.radius, &mut mean_a);
        box_filter_plane(&b, self.width, self.height, self.radius, &mut mean_b);
        let out: Vec<f64> = (0..n)
            .map(|i| mean_a[i] * self.guide[i] + mean_b[i])
            .collect();
        PlanarImage::from_data(self.width, self.height, 1, out)
    }

    /// Adjoint of [`apply`] in its `p` argument: maps an output-side
    /// gradient back to an input-side gradient.
    pub fn backward(&self, grad_out: &PlanarImage) -> Result<PlanarImage> {
        self.check(grad_out)?;
        let n = self.width * self.height;
        let dq = grad_out.plane(0);

        // out = box(a) g + box(b)
        let dqg: Vec<f64> = dq.iter().zip(&self.guide).map(|(&d, &g)| d * g).collect();
        let mut da = self.box_adjoint(&dqg);
        let db = self.box_adjoint(dq);

        // b = mean_p - a mean_g
        let mut dmean_p = db.clone();
        for i in 0..n {
            da[i] -= db[i] * self.mean_guide[i];
        }

        // a = cov * inv_var; cov = box(g p) - mean_g mean_p
        let dcov: Vec<f64> = da.iter().zip(&self.inv_var).map(|(&d, &iv)| d * iv).collect();
        for i in 0..n {
            dmean_p[i] -= dcov[i] * self.mean_guide[i];
        }
        let dgp = self.box_adjoint(&dcov);

        let dmp_back = self.box_adjoint(&dmean_p);
        let dp: Vec<f64> = (0..n)
            .map(|i| dgp[i] * self.guide[i] + dmp_back[i])
            .collect();
        PlanarImage::from_data(self.width, self.height, 1, dp)
    }

    /// Adjoint of the shrink-to-valid box mean: divide by each source
    /// pixel's window count, then take unnormalized clipped-window sums.
    fn box_adjoint(&self, y: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = y.iter().zip(&self.counts).map(|(&v, &c)| v / c).collect();
        box_sums_plane(&scaled, self.width, self.height, self.radius)
    }
}

/// One-shot guided filter of single-channel `p` against single-channel `guide`.
pub fn guided_filter(
    p: &PlanarImage,
    guide: &PlanarImage,
    radius: usize,
    eps: f64,
) -> Result<PlanarImage> {
    GuidedPlan::new(guide, radius, eps)?.apply(p)
}
