//! Dimension estimators on measure point clouds: local (pointwise) dimension
//! of the harmonic measure and a box-counting estimate of the support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasurePointCloud;
use crate::seed::Stream;
use crate::stats::{bootstrap_median_stderr, linear_fit, median, r_squared};
use crate::{real, Complex, Real};

/// Minimum hit count for a radius window to enter the regression.
pub const MIN_WINDOW_COUNT: usize = 50;

/// Dyadic exponent range for the default local-dimension radii.
pub const DEFAULT_RADIUS_EXPONENTS: std::ops::RangeInclusive<i32> = 3..=12;

/// Default dyadic grid scales for box counting. The coarse scales are
/// skipped: with only a handful of occupied cells the count is dominated by
/// boundary effects and tilts the fit.
pub const DEFAULT_BOX_SCALES: std::ops::RangeInclusive<i32> = 4..=10;

/// Result of a local-dimension regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDimensionFit<F> {
    /// Strictly decreasing dyadic radii used for the fit.
    pub radii: Vec<F>,
    /// Median over targets of `ln μ̂(D(z, r))` per radius (diagnostic).
    pub log_measure: Vec<F>,
    /// Median fitted slope across targets: the local dimension estimate.
    pub slope: F,
    /// Bootstrap standard error of the median slope.
    pub stderr: F,
    /// Number of targets that produced a slope.
    pub points_used: usize,
}

/// Radii `2^{−j}·diameter` for `j` in the given exponent range.
pub fn dyadic_radii<F: Real>(diameter: F, exponents: std::ops::RangeInclusive<i32>) -> Vec<F> {
    exponents
        .map(|j| diameter * real::<F>(0.5f64.powi(j)))
        .collect()
}

/// Diameter estimate of a point set (bounding-box diagonal).
pub fn diameter_estimate<F: Real>(points: &[Complex<F>]) -> F {
    assert!(!points.is_empty());
    let mut re_min = F::infinity();
    let mut re_max = F::neg_infinity();
    let mut im_min = F::infinity();
    let mut im_max = F::neg_infinity();
    for z in points {
        re_min = re_min.min(z.re);
        re_max = re_max.max(z.re);
        im_min = im_min.min(z.im);
        im_max = im_max.max(z.im);
    }
    ((re_max - re_min).powi(2) + (im_max - im_min).powi(2)).sqrt()
}

/// Estimate the local dimension `lim_{r→0} ln μ(D(z,r)) / ln r` of the
/// sampled measure.
///
/// For each target `z`, `μ(D(z,r))` is the empirical fraction of the mass
/// samples within distance `r`; the slope of `ln μ̂` against `ln r` is fitted
/// by least squares over the radii whose windows hold at least `min_count`
/// hits, and the median slope across targets is returned with a bootstrap
/// standard error. Mass samples and targets must come from disjoint seed
/// streams, otherwise each target counts itself.
pub fn local_dimension_fit<F: Real>(
    mass_samples: &[Complex<F>],
    targets: &[Complex<F>],
    radii: &[F],
    min_count: usize,
    bootstrap_stream: &Stream,
) -> Result<LocalDimensionFit<F>> {
    assert!(radii.len() >= 4, "need at least 4 dyadic radii");
    assert!(
        radii.windows(2).all(|w| w[1] < w[0]),
        "radii must be strictly decreasing"
    );
    let n_mass = real::<F>(mass_samples.len() as f64);
    let ln_radii: Vec<F> = radii.iter().map(|r| r.ln()).collect();

    let mut slopes = Vec::with_capacity(targets.len());
    let mut log_measure_rows: Vec<Vec<F>> = Vec::with_capacity(targets.len());
    for z in targets {
        let sq_dists: Vec<F> = mass_samples.iter().map(|p| (*p - *z).norm_sqr()).collect();
        let mut xs = Vec::with_capacity(radii.len());
        let mut ys = Vec::with_capacity(radii.len());
        let mut row = vec![F::nan(); radii.len()];
        for (idx, (&r, &ln_r)) in radii.iter().zip(&ln_radii).enumerate() {
            let r_sq = r * r;
            let count = sq_dists.iter().filter(|&&d| d <= r_sq).count();
            if count >= min_count {
                let log_mu = (real::<F>(count as f64) / n_mass).ln();
                xs.push(ln_r);
                ys.push(log_mu);
                row[idx] = log_mu;
            }
        }
        if xs.len() >= 4 {
            let (slope, _) = linear_fit(&xs, &ys);
            slopes.push(slope);
            log_measure_rows.push(row);
        }
    }
    if slopes.is_empty() {
        return Err(Error::InsufficientCounts { min_count });
    }
    let log_measure = (0..radii.len())
        .map(|idx| {
            let col: Vec<F> = log_measure_rows
                .iter()
                .map(|row| row[idx])
                .filter(|v| !v.is_nan())
                .collect();
            if col.is_empty() {
                F::nan()
            } else {
                median(&col)
            }
        })
        .collect();
    let stderr = if slopes.len() > 1 {
        bootstrap_median_stderr(&slopes, 200, bootstrap_stream)
    } else {
        F::zero()
    };
    Ok(LocalDimensionFit {
        radii: radii.to_vec(),
        log_measure,
        slope: median(&slopes),
        stderr,
        points_used: slopes.len(),
    })
}

/// Box-counting dimension estimate: the slope of `ln N(ε)` against
/// `ln(1/ε)`, where `N(ε)` counts occupied cells of a square grid with
/// spacing `ε = diameter·2^{−j}` for each exponent `j` in `scales`.
pub fn box_counting_dimension<F: Real>(
    cloud: &MeasurePointCloud<F>,
    scales: std::ops::RangeInclusive<i32>,
) -> Result<F> {
    assert!(!cloud.is_empty(), "empty cloud");
    let diameter = diameter_estimate(&cloud.points);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut coarsest_count = None;
    for j in scales {
        let eps = diameter * real::<F>(0.5f64.powi(j));
        if eps <= F::zero() {
            return Err(Error::DegenerateCloud);
        }
        let mut cells = std::collections::HashSet::new();
        for z in &cloud.points {
            let ix = (z.re / eps).floor().to_f64().unwrap_or(0.0) as i64;
            let iy = (z.im / eps).floor().to_f64().unwrap_or(0.0) as i64;
            cells.insert((ix, iy));
        }
        if coarsest_count.is_none() {
            coarsest_count = Some(cells.len());
        }
        xs.push((F::one() / eps).ln());
        ys.push(real::<F>(cells.len() as f64).ln());
    }
    if coarsest_count.unwrap_or(0) < 2 {
        return Err(Error::DegenerateCloud);
    }
    let (slope, intercept) = linear_fit(&xs, &ys);
    let _ = r_squared(&xs, &ys, slope, intercept);
    Ok(slope)
}
