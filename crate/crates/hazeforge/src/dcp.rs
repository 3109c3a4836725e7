//! Dark-channel-prior dehazer: dark channel, atmospheric light,
//! transmission estimate, guided-filter refinement, radiance recovery.
//!
//! The scattering model is `I = J t + A (1 - t)`; the dark channel of a
//! haze-free outdoor image is close to zero, which turns the model into a
//! per-pixel transmission estimate once `A` is known.

use crate::error::{HazeError, Result};
use crate::guided::guided_filter;
use crate::raster::{
    luminance, min_channel, window_extremum, ExtremumMode, PlanarImage, WindowSpec,
};

/// Parameters of the dark-channel pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DcpConfig {
    /// Window radius for the dark channel (7 gives 15x15 patches).
    pub patch_radius: usize,
    /// Haze retention factor in (0, 1]; 1 removes haze completely and
    /// tends to look unnatural.
    pub omega: f64,
    /// Minimum transmission used when inverting the scattering model.
    pub t_floor: f64,
    /// Fraction of pixels, ranked by dark channel, that vote for the
    /// atmospheric light.
    pub bright_fraction: f64,
    /// Radius of the guided-filter refinement (4x the default patch radius).
    pub guide_radius: usize,
    /// Guided-filter regularizer.
    pub guide_eps: f64,
}

impl Default for DcpConfig {
    fn default() -> Self {
        Self {
            patch_radius: 7,
            omega: 0.95,
            t_floor: 0.1,
            bright_fraction: 0.001,
            guide_radius: 28,
            guide_eps: 1e-3,
        }
    }
}

impl DcpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(HazeError::Config(format!("dcp.omega {} not in (0,1]", self.omega)));
        }
        if !(self.t_floor > 0.0 && self.t_floor < 1.0) {
            return Err(HazeError::Config(format!(
                "dcp.t_floor {} not in (0,1)",
                self.t_floor
            )));
        }
        if !(self.bright_fraction > 0.0 && self.bright_fraction <= 1.0) {
            return Err(HazeError::Config(format!(
                "dcp.bright_fraction {} not in (0,1]",
                self.bright_fraction
            )));
        }
        if self.guide_eps < 0.0 {
            return Err(HazeError::Config("dcp.guide_eps must be >= 0".into()));
        }
        Ok(())
    }
}

/// Per-channel atmospheric light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atmosphere {
    pub rgb: [f64; 3],
}

impl Atmosphere {
    /// Components must be finite and in (0, 1].
    pub fn new(rgb: [f64; 3]) -> Result<Self> {
        for &c in &rgb {
            if !c.is_finite() || c <= 0.0 || c > 1.0 {
                return Err(HazeError::Config(format!(
                    "atmospheric light component {c} not in (0,1]"
                )));
            }
        }
        Ok(Self { rgb })
    }

    pub fn gray(v: f64) -> Result<Self> {
        Self::new([v, v, v])
    }
}

/// Output bundle of one prior dehazer: radiance estimate, transmission map,
/// and the atmospheric light that produced them.
#[derive(Debug, Clone)]
pub struct PriorResult {
    pub radiance: PlanarImage,
    pub transmission: PlanarImage,
    pub atmosphere: Atmosphere,
}

/// Windowed minimum of the per-pixel channel minimum.
pub fn dark_channel(img: &PlanarImage, patch_radius: usize) -> Result<PlanarImage> {
    let mc = min_channel(img)?;
    Ok(window_extremum(
        &mc,
        WindowSpec::new(patch_radius),
        ExtremumMode::Min,
    ))
}

/// Atmospheric light from the brightest dark-channel pixels.
///
/// Selects the `ceil(bright_fraction * N)` pixels with the largest dark
/// value (ties broken by row-major index, smallest first), averages the
/// input per channel over that set, and clamps each component to
/// `[0.05, 1]` so the model inversion stays well conditioned.
pub fn estimate_atmospheric_light(
    img: &PlanarImage,
    dark: &PlanarImage,
    bright_fraction: f64,
) -> Result<Atmosphere> {
    if img.channels() != 3 {
        return Err(HazeError::InvalidImage(
            "atmospheric light estimation expects a 3-channel image".into(),
        ));
    }
    if dark.channels() != 1 || dark.width() != img.width() || dark.height() != img.height() {
        return Err(HazeError::DimensionMismatch(
            "dark channel shape does not match the image".into(),
        ));
    }
    let n = img.plane_len();
    let k = ((bright_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    let d = dark.plane(0);
    order.sort_unstable_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));

    let mut acc = [0.0f64; 3];
    for &idx in order.iter().take(k) {
        for c in 0..3 {
            acc[c] += img.plane(c)[idx];
        }
    }
    let rgb = [
        (acc[0] / k as f64).clamp(0.05, 1.0),
        (acc[1] / k as f64).clamp(0.05, 1.0),
        (acc[2] / k as f64).clamp(0.05, 1.0),
    ];
    Ok(Atmosphere { rgb })
}

/// Raw transmission estimate `1 - omega * dark(I / A)`.
///
/// The per-channel quotient is clamped to `[0,1]` before the windowed
/// minimum so pixels brighter than `A` cannot push the dark channel above
/// one; the result is clamped to `[t_floor, 1]`.
pub fn estimate_transmission(
    img: &PlanarImage,
    atmosphere: &Atmosphere,
    cfg: &DcpConfig,
) -> Result<PlanarImage> {
    if img.channels() != 3 {
        return Err(HazeError::InvalidImage(
            "transmission estimation expects a 3-channel image".into(),
        ));
    }
    let n = img.plane_len();
    let mut normalized = PlanarImage::new(img.width(), img.height(), 3)?;
    for c in 0..3 {
        let a = atmosphere.rgb[c];
        let src = img.plane(c);
        let dst = normalized.plane_mut(c);
        for i in 0..n {
            dst[i] = (src[i] / a).clamp(0.0, 1.0);
        }
    }
    let dark = dark_channel(&normalized, cfg.patch_radius)?;
    Ok(dark.map(|d| (1.0 - cfg.omega * d).clamp(cfg.t_floor, 1.0)))
}

/// Invert the scattering model: `J = (I - A) / max(t, t_floor) + A`,
/// clamped to `[0,1]`.
pub fn recover_radiance(
    img: &PlanarImage,
    transmission: &PlanarImage,
    atmosphere: &Atmosphere,
    t_floor: f64,
) -> Result<PlanarImage> {
    if img.channels() != 3 {
        return Err(HazeError::InvalidImage(
            "radiance recovery expects a 3-channel image".into(),
        ));
    }
    if transmission.channels() != 1
        || transmission.width() != img.width()
        || transmission.height() != img.height()
    {
        return Err(HazeError::DimensionMismatch(
            "transmission shape does not match the image".into(),
        ));
    }
    let n = img.plane_len();
    let t = transmission.plane(0);
    let mut out = PlanarImage::new(img.width(), img.height(), 3)?;
    for c in 0..3 {
        let a = atmosphere.rgb[c];
        let src = img.plane(c);
        let dst = out.plane_mut(c);
        for i in 0..n {
            let tv = t[i].max(t_floor);
            dst[i] = ((src[i] - a) / tv + a).clamp(0.0, 1.0);
        }
    }
    Ok(out)
}

/// Full dark-channel pipeline: dark channel, atmospheric light, raw
/// transmission, guided-filter refinement against the luma of the input,
/// radiance recovery.
pub fn dehaze_dcp(img: &PlanarImage, cfg: &DcpConfig) -> Result<PriorResult> {
    cfg.validate()?;
    let dark = dark_channel(img, cfg.patch_radius)?;
    let atmosphere = estimate_atmospheric_light(img, &dark, cfg.bright_fraction)?;
    let t_raw = estimate_transmission(img, &atmosphere, cfg)?;
    let guide = luminance(img)?;
    let mut t = guided_filter(&t_raw, &guide, cfg.guide_radius, cfg.guide_eps)?;
    t.clamp_in_place(cfg.t_floor, 1.0);
    let radiance = recover_radiance(img, &t, &atmosphere, cfg.t_floor)?;
    Ok(PriorResult {
        radiance,
        transmission: t,
        atmosphere,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    #[test]
    fn dark_channel_of_white_is_one() {
        let img = PlanarImage::filled(8, 6, 3, 1.0).unwrap();
        let dark = dark_channel(&img, 3).unwrap();
        assert!(dark.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn dark_channel_with_zero_somewhere_in_each_pixel_is_zero() {
        // Every pixel has at least one zero channel.
        let mut img = PlanarImage::filled(6, 6, 3, 0.8).unwrap();
        for i in 0..img.plane_len() {
            img.plane_mut(i % 3)[i] = 0.0;
        }
        let dark = dark_channel(&img, 2).unwrap();
        assert!(dark.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn atmospheric_light_on_constant_image_returns_the_constant() {
        let img = PlanarImage::from_data(
            4,
            4,
            3,
            [vec![0.3; 16], vec![0.5; 16], vec![0.7; 16]].concat(),
        )
        .unwrap();
        let dark = dark_channel(&img, 1).unwrap();
        let a = estimate_atmospheric_light(&img, &dark, 0.1).unwrap();
        assert_eq!(a.rgb, [0.3, 0.5, 0.7]);
    }

    #[test]
    fn atmospheric_light_picks_the_single_brightest_pixel() {
        // 99 gray pixels plus one bright outlier; with bright_fraction 0.01
        // only the outlier is selected once the dark map ranks it first.
        let n = 100;
        let mut r = vec![0.2; n];
        let mut g = vec![0.2; n];
        let mut b = vec![0.2; n];
        let hot = 37;
        r[hot] = 0.9;
        g[hot] = 0.8;
        b[hot] = 0.85;
        let img = PlanarImage::from_data(10, 10, 3, [r, g, b].concat()).unwrap();
        let dark = crate::raster::min_channel(&img).unwrap();
        let a = estimate_atmospheric_light(&img, &dark, 0.01).unwrap();
        assert_eq!(a.rgb, [0.9, 0.8, 0.85]);
    }

    #[test]
    fn atmospheric_light_ties_break_by_row_major_index() {
        let img = PlanarImage::from_data(
            2,
            2,
            3,
            vec![0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let flat_dark = PlanarImage::filled(2, 2, 1, 0.5).unwrap();
        // All dark values equal: the first ceil(0.5*4)=2 indices win.
        let a = estimate_atmospheric_light(&img, &flat_dark, 0.5).unwrap();
        assert!((a.rgb[0] - 0.15).abs() < 1e-12);
    }

    #[test]
    fn atmosphere_components_stay_in_range() {
        let mut r = rng::seeded(5);
        let data: Vec<f64> = (0..8 * 8 * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let img = PlanarImage::from_data(8, 8, 3, data).unwrap();
        let dark = dark_channel(&img, 2).unwrap();
        let a = estimate_atmospheric_light(&img, &dark, 0.05).unwrap();
        for c in a.rgb {
            assert!((0.05..=1.0).contains(&c));
        }
    }

    #[test]
    fn transmission_saturates_at_floor_when_image_equals_atmosphere() {
        let cfg = DcpConfig::default();
        let img = PlanarImage::from_data(
            6,
            6,
            3,
            [vec![0.8; 36], vec![0.8; 36], vec![0.8; 36]].concat(),
        )
        .unwrap();
        let a = Atmosphere::gray(0.8).unwrap();
        let t = estimate_transmission(&img, &a, &cfg).unwrap();
        // dark(I/A) = 1, so 1 - 0.95 = 0.05 clamps up to the 0.1 floor.
        assert!(t.data().iter().all(|&v| (v - cfg.t_floor).abs() < 1e-12));
    }

    #[test]
    fn zero_omega_gives_unit_transmission() {
        let mut cfg = DcpConfig::default();
        cfg.omega = 1e-300; // omega must stay positive; this is effectively 0
        let mut r = rng::seeded(9);
        let data: Vec<f64> = (0..6 * 6 * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let img = PlanarImage::from_data(6, 6, 3, data).unwrap();
        let t = estimate_transmission(&img, &Atmosphere::gray(0.8).unwrap(), &cfg).unwrap();
        assert!(t.data().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn recovery_is_exact_on_synthesized_input() {
        // Synthesize I = J t + A (1 - t) and invert with the true (t, A).
        let mut r = rng::seeded(13);
        let w = 9;
        let h = 7;
        let j_data: Vec<f64> = (0..w * h * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let j = PlanarImage::from_data(w, h, 3, j_data).unwrap();
        let t_data: Vec<f64> = (0..w * h).map(|_| rng::uniform(&mut r, 0.2, 1.0)).collect();
        let t = PlanarImage::from_data(w, h, 1, t_data).unwrap();
        let a = Atmosphere::new([0.9, 0.85, 0.8]).unwrap();

        let mut hazy = PlanarImage::new(w, h, 3).unwrap();
        for c in 0..3 {
            for i in 0..w * h {
                let tv = t.plane(0)[i];
                hazy.plane_mut(c)[i] = j.plane(c)[i] * tv + a.rgb[c] * (1.0 - tv);
            }
        }
        let back = recover_radiance(&hazy, &t, &a, 0.1).unwrap();
        for (x, y) in back.data().iter().zip(j.data()) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn unit_transmission_recovers_input_exactly() {
        let mut r = rng::seeded(17);
        let data: Vec<f64> = (0..5 * 5 * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let img = PlanarImage::from_data(5, 5, 3, data).unwrap();
        let t = PlanarImage::filled(5, 5, 1, 1.0).unwrap();
        let out = recover_radiance(&img, &t, &Atmosphere::gray(0.9).unwrap(), 0.1).unwrap();
        assert_eq!(out.data(), img.data());
    }

    #[test]
    fn image_equal_to_atmosphere_recovers_atmosphere() {
        let a = Atmosphere::new([0.7, 0.75, 0.8]).unwrap();
        let img = PlanarImage::from_data(
            4,
            3,
            3,
            [vec![0.7; 12], vec![0.75; 12], vec![0.8; 12]].concat(),
        )
        .unwrap();
        let t = PlanarImage::from_data(4, 3, 1, (0..12).map(|i| 0.2 + 0.05 * i as f64).collect())
            .unwrap();
        let out = recover_radiance(&img, &t, &a, 0.1).unwrap();
        for c in 0..3 {
            assert!(out.plane(c).iter().all(|&v| (v - a.rgb[c]).abs() < 1e-12));
        }
    }

    #[test]
    fn dehaze_constant_image_returns_constant_and_floor_transmission() {
        let cfg = DcpConfig::default();
        let img = PlanarImage::from_data(
            40,
            40,
            3,
            [vec![0.3; 1600], vec![0.5; 1600], vec![0.7; 1600]].concat(),
        )
        .unwrap();
        let res = dehaze_dcp(&img, &cfg).unwrap();
        assert!(res
            .transmission
            .data()
            .iter()
            .all(|&v| (v - cfg.t_floor).abs() < 1e-9));
        for (c, want) in [(0usize, 0.3), (1, 0.5), (2, 0.7)] {
            assert!(res.radiance.plane(c).iter().all(|&v| (v - want).abs() < 1e-9));
        }
    }

    #[test]
    fn dehaze_transmission_respects_bounds() {
        let cfg = DcpConfig::default();
        let mut r = rng::seeded(23);
        let data: Vec<f64> = (0..32 * 32 * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let img = PlanarImage::from_data(32, 32, 3, data).unwrap();
        let res = dehaze_dcp(&img, &cfg).unwrap();
        assert!(res
            .transmission
            .data()
            .iter()
            .all(|&v| (cfg.t_floor..=1.0).contains(&v)));
        assert!(res.radiance.data().iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn dehaze_is_deterministic() {
        let cfg = DcpConfig::default();
        let mut r = rng::seeded(29);
        let data: Vec<f64> = (0..24 * 24 * 3).map(|_| rng::uniform(&mut r, 0.0, 1.0)).collect();
        let img = PlanarImage::from_data(24, 24, 3, data).unwrap();
        let a = dehaze_dcp(&img, &cfg).unwrap();
        let b = dehaze_dcp(&img, &cfg).unwrap();
        assert_eq!(a.radiance.data(), b.radiance.data());
        assert_eq!(a.transmission.data(), b.transmission.data());
    }

    proptest! {
        #[test]
        fn dark_channel_is_monotone(seed in 0u64..200) {
            let mut r = rng::seeded(seed);
            let lo: Vec<f64> = (0..8 * 8 * 3).map(|_| rng::uniform(&mut r, 0.0, 0.9)).collect();
            let hi: Vec<f64> = lo
                .iter()
                .map(|&v| v + rng::uniform(&mut r, 0.0, 1.0 - v))
                .collect();
            let img_lo = PlanarImage::from_data(8, 8, 3, lo).unwrap();
            let img_hi = PlanarImage::from_data(8, 8, 3, hi).unwrap();
            let d_lo = dark_channel(&img_lo, 2).unwrap();
            let d_hi = dark_channel(&img_hi, 2).unwrap();
            for (a, b) in d_lo.data().iter().zip(d_hi.data()) {
                prop_assert!(a <= b);
            }
        }
    }
}
