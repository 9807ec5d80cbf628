//! Small statistics toolbox shared by the estimators and the test suites.

use serde::{Deserialize, Serialize};

use crate::seed::Stream;
use crate::{real, Complex, Real};

/// Pairwise (tree-ordered) summation.
///
/// The reduction tree depends only on the slice length, so parallel
/// pipelines that collect per-index values into a `Vec` and then reduce with
/// this function produce bit-identical sums for every worker count.
pub fn pairwise_sum<F: Real>(xs: &[F]) -> F {
    if xs.len() <= 8 {
        let mut acc = F::zero();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStderr<F> {
    pub mean: F,
    pub stderr: F,
    pub n: usize,
}

/// Two-pass mean and standard error, deterministically reduced.
pub fn mean_stderr<F: Real>(xs: &[F]) -> MeanStderr<F> {
    let n = xs.len();
    assert!(n > 0, "mean of an empty sample");
    let nf = real::<F>(n as f64);
    let mean = pairwise_sum(xs) / nf;
    if n == 1 {
        return MeanStderr {
            mean,
            stderr: F::zero(),
            n,
        };
    }
    let sq: Vec<F> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (nf - F::one());
    MeanStderr {
        mean,
        stderr: (var / nf).sqrt(),
        n,
    }
}

/// One-sample Kolmogorov–Smirnov statistic against the uniform law on [0,1).
pub fn ks_uniform(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in KS sample"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let lo = x - i as f64 / n;
        let hi = (i + 1) as f64 / n - x;
        d = d.max(lo).max(hi);
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).expect("NaN in KS sample"));
    b.sort_by(|p, q| p.partial_cmp(q).expect("NaN in KS sample"));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Advance jointly through ties so equal values cancel exactly.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Least-squares line fit; returns `(slope, intercept)`.
pub fn linear_fit<F: Real>(xs: &[F], ys: &[F]) -> (F, F) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "line fit needs at least two points");
    let nf = real::<F>(xs.len() as f64);
    let mx = pairwise_sum(xs) / nf;
    let my = pairwise_sum(ys) / nf;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Coefficient of determination of a line fit.
pub fn r_squared<F: Real>(xs: &[F], ys: &[F], slope: F, intercept: F) -> F {
    let nf = real::<F>(xs.len() as f64);
    let my = pairwise_sum(ys) / nf;
    let mut ss_res = F::zero();
    let mut ss_tot = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        ss_res = ss_res + r * r;
        ss_tot = ss_tot + (y - my) * (y - my);
    }
    if ss_tot == F::zero() {
        F::one()
    } else {
        F::one() - ss_res / ss_tot
    }
}

/// Median of a sample (average of the middle pair for even lengths).
pub fn median<F: Real>(xs: &[F]) -> F {
    assert!(!xs.is_empty());
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in median"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / real::<F>(2.0)
    }
}

/// Bootstrap standard error of the sample median.
pub fn bootstrap_median_stderr<F: Real>(xs: &[F], replicates: usize, stream: &Stream) -> F {
    assert!(!xs.is_empty());
    let n = xs.len() as u64;
    let mut medians = Vec::with_capacity(replicates);
    for b in 0..replicates as u64 {
        let resample: Vec<F> = (0..n)
            .map(|i| xs[(stream.u64_at(b * n + i) % n) as usize])
            .collect();
        medians.push(median(&resample));
    }
    let stats = mean_stderr(&medians);
    // Standard deviation of the bootstrap medians.
    stats.stderr * real::<F>((replicates as f64).sqrt())
}

/// Largest distance from any point of `a` to its nearest neighbour in `b`.
pub fn directed_hausdorff<F: Real>(a: &[Complex<F>], b: &[Complex<F>]) -> F {
    assert!(!a.is_empty() && !b.is_empty());
    let mut worst = F::zero();
    for p in a {
        let mut best = F::infinity();
        for q in b {
            let d = (*p - *q).norm_sqr();
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst.sqrt()
}

/// Symmetric Hausdorff distance between two point sets.
pub fn hausdorff<F: Real>(a: &[Complex<F>], b: &[Complex<F>]) -> F {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}
