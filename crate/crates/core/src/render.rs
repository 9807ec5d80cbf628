//! Point-cloud export and greyscale rasterisation of Julia sets.
//!
//! The raster is a plain portable greymap (binary PGM, `P5`) with
//! `log(1 + count)` intensity, accompanied by a JSON sidecar carrying the
//! plane bounds and pixel scale; raw points go to CSV with the
//! `re,im,weight` header.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::law::ParameterSource;
use crate::measure::{backward_cloud, MeasurePointCloud};
use crate::{Complex, Real};

/// Plane bounds of a raster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterBounds {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// A greyscale hit-count raster over a rectangle of the plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub bounds: RasterBounds,
    /// Pixels per unit length, horizontal and vertical.
    pub pixels_per_unit: (f64, f64),
    #[serde(skip)]
    pub counts: Vec<u32>,
}

impl Raster {
    /// Bin a point cloud into a `width × height` grid. Bounds are the cloud
    /// bounding box padded by 5% on each side.
    pub fn from_cloud<F: Real>(cloud: &MeasurePointCloud<F>, width: u32, height: u32) -> Self {
        assert!(width > 0 && height > 0);
        assert!(!cloud.is_empty());
        let to_f64 = |x: F| x.to_f64().expect("finite coordinate");
        let mut re_min = f64::INFINITY;
        let mut re_max = f64::NEG_INFINITY;
        let mut im_min = f64::INFINITY;
        let mut im_max = f64::NEG_INFINITY;
        for z in &cloud.points {
            re_min = re_min.min(to_f64(z.re));
            re_max = re_max.max(to_f64(z.re));
            im_min = im_min.min(to_f64(z.im));
            im_max = im_max.max(to_f64(z.im));
        }
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).max(1e-12);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (re_min, re_max) = pad(re_min, re_max);
        let (im_min, im_max) = pad(im_min, im_max);
        let mut counts = vec![0u32; (width as usize) * (height as usize)];
        let sx = width as f64 / (re_max - re_min);
        let sy = height as f64 / (im_max - im_min);
        for z in &cloud.points {
            let px = (((to_f64(z.re) - re_min) * sx) as i64).clamp(0, width as i64 - 1) as usize;
            // Image rows grow downward; the plane's imaginary axis grows up.
            let row = (((im_max - to_f64(z.im)) * sy) as i64).clamp(0, height as i64 - 1) as usize;
            counts[row * width as usize + px] += 1;
        }
        Raster {
            width,
            height,
            bounds: RasterBounds {
                re_min,
                re_max,
                im_min,
                im_max,
            },
            pixels_per_unit: (sx, sy),
            counts,
        }
    }

    /// 8-bit greyscale pixels with `log(1 + count)` intensity scaling.
    pub fn to_grey(&self) -> Vec<u8> {
        let max = self
            .counts
            .iter()
            .map(|&c| (1.0 + c as f64).ln())
            .fold(0.0f64, f64::max);
        if max == 0.0 {
            return vec![0u8; self.counts.len()];
        }
        self.counts
            .iter()
            .map(|&c| ((1.0 + c as f64).ln() / max * 255.0).round() as u8)
            .collect()
    }

    /// Write the binary PGM image.
    pub fn write_pgm(&self, path: &Path) -> std::io::Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(file, "P5\n{} {}\n255\n", self.width, self.height)?;
        file.write_all(&self.to_grey())?;
        Ok(())
    }
}

/// Write a point cloud as CSV with header `re,im,weight`.
pub fn write_cloud_csv<F: Real>(
    cloud: &MeasurePointCloud<F>,
    writer: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(writer, "re,im,weight")?;
    for (z, w) in cloud.points.iter().zip(&cloud.weights) {
        writeln!(writer, "{},{},{}", z.re, z.im, w)?;
    }
    Ok(())
}

/// Independent backward samples of `J_ω` plus a raster for export.
pub fn julia_point_cloud<F: Real, S: ParameterSource<F> + Sync + ?Sized>(
    z0: Complex<F>,
    omega: &S,
    law_tag: String,
    depth: u32,
    sample_count: usize,
    master_seed: u64,
    width: u32,
    height: u32,
) -> (MeasurePointCloud<F>, Raster) {
    let cloud = backward_cloud(z0, omega, law_tag, depth, sample_count, master_seed, 0);
    let raster = Raster::from_cloud(&cloud, width, height);
    (cloud, raster)
}
