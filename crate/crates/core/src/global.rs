//! Monte-Carlo estimation of the global Green's function, Lyapunov exponent,
//! and harmonic-measure dimension, plus the experiment drivers for the
//! continuity, asymptotic, fast-escape, perturbation-constancy, harmonicity,
//! and stability claims.
//!
//! Every estimator draws sample `i` from the stream addressed by
//! `SeedSpec::new(master_seed, i)` and reduces collected per-index values
//! with pairwise summation, so results are bit-identical for every worker
//! count. Comparisons between nearby laws (radii `R` and `R+h`, rotated
//! perturbation directions, circles of perturbation parameters) reuse the
//! same stream indices, which couples the underlying unit-disc draws and
//! cuts the variance of the differences by orders of magnitude.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    autonomous_green, escape_radius, green_point, perturbation_radius_limit, EscapeRadius,
    GreenEstimate,
};
use crate::error::{Error, Result};
use crate::law::{sample_prefix, LawStream, ParameterLaw};
use crate::measure::{backward_cloud, exact_preimage_tree, lyapunov_from_measure, MeasurePointCloud};
use crate::seed::SeedSpec;
use crate::stats::{hausdorff, mean_stderr, pairwise_sum, r_squared};
use crate::{real, Complex, Real};

/// Confidence policy: statistical assertions allow four standard errors
/// plus certified truncation bounds (~6e-5 false-failure rate under CLT).
pub const CONFIDENCE_SIGMAS: f64 = 4.0;

/// Stream-index offsets reserving disjoint blocks for the different random
/// ingredients of one experiment (parameters, branch coins, targets).
pub mod stream_blocks {
    pub const PARAMS: u64 = 0;
    pub const COINS: u64 = 1 << 40;
    pub const TARGET_COINS: u64 = 2 << 40;
    pub const BOOTSTRAP: u64 = 3 << 40;
    pub const REFERENCE: u64 = 4 << 40;
}

/// Evaluate `g_ω(0)` for sample streams `0..n` of a law.
fn green_samples<F: Real>(
    law: &ParameterLaw<F>,
    escape: &EscapeRadius<F>,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Vec<GreenEstimate<F>> {
    let origin = Complex::new(F::zero(), F::zero());
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let stream = LawStream::new(law, SeedSpec::new(master_seed, i));
            green_point(origin, &stream, escape, tol, depth_cap)
        })
        .collect()
}

/// Monte-Carlo aggregate of `g(0) = ∫ g_ω(0) dP(ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalGreenEstimate<F> {
    pub mean: F,
    /// Sample standard deviation over `sqrt(samples)`.
    pub stderr: F,
    pub samples: usize,
    /// Fraction of samples that never left `D(0, R₀)` within the depth cap;
    /// they contribute exactly `0` to the mean (matching `g = 0` on the
    /// filled Julia set) and this fraction surfaces the potential bias.
    pub non_escape_fraction: F,
    /// Largest certified per-sample truncation bound.
    pub truncation_bound: F,
    pub law_tag: String,
}

impl<F: Real> GlobalGreenEstimate<F> {
    /// Half-width of the confidence interval including truncation.
    pub fn margin(&self) -> F {
        real::<F>(CONFIDENCE_SIGMAS) * self.stderr + self.truncation_bound
    }
}

/// Estimate the global Green's function `g(0)` under a law.
pub fn global_green<F: Real>(
    law: &ParameterLaw<F>,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> GlobalGreenEstimate<F> {
    assert!(n >= 1, "need at least one sample");
    let escape = escape_radius(law.radius_bound());
    let estimates = green_samples(law, &escape, n, tol, depth_cap, master_seed);
    aggregate_green(law, &estimates)
}

fn aggregate_green<F: Real>(
    law: &ParameterLaw<F>,
    estimates: &[GreenEstimate<F>],
) -> GlobalGreenEstimate<F> {
    let values: Vec<F> = estimates.iter().map(|e| e.value).collect();
    let stats = mean_stderr(&values);
    let non_escaped = estimates.iter().filter(|e| !e.escaped).count();
    let truncation = estimates
        .iter()
        .map(|e| e.error_bound)
        .fold(F::zero(), |a, b| a.max(b));
    GlobalGreenEstimate {
        mean: stats.mean,
        stderr: stats.stderr,
        samples: estimates.len(),
        non_escape_fraction: real::<F>(non_escaped as f64 / estimates.len() as f64),
        truncation_bound: truncation,
        law_tag: law.tag(),
    }
}

/// Dimension of the harmonic measure from the global Green's function:
/// `dim_H(μ_ω) = ln 2 / χ` with `χ = ln 2 + g(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport<F> {
    pub g0: GlobalGreenEstimate<F>,
    /// Global Lyapunov exponent `ln 2 + g(0)`.
    pub chi: F,
    pub dimension: F,
    /// Dimension interval induced by the `g(0)` confidence interval.
    pub dim_ci: (F, F),
    /// Hölder floor `α₀ = ln 2 / (ln 2 + ln R₀)`: a lower bound for the
    /// dimension whenever `g(0) ≤ ln R₀`.
    pub hoelder_floor: F,
}

pub fn dimension_report<F: Real>(
    law: &ParameterLaw<F>,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> DimensionReport<F> {
    let g0 = global_green(law, n, tol, depth_cap, master_seed);
    let ln2 = F::LN_2();
    let chi = ln2 + g0.mean;
    let margin = g0.margin();
    let g_low = (g0.mean - margin).max(F::zero());
    let g_high = g0.mean + margin;
    let escape = escape_radius(law.radius_bound());
    DimensionReport {
        chi,
        dimension: ln2 / chi,
        dim_ci: (ln2 / (ln2 + g_high), ln2 / (ln2 + g_low)),
        hoelder_floor: ln2 / (ln2 + escape.radius.ln()),
        g0,
    }
}

/// One row of the continuity scan in the randomness radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow<F> {
    pub radius: F,
    pub step: F,
    pub g_r: F,
    pub g_r_plus_h: F,
    /// Coupled mean of `g_{(R+h)ω}(0) − g_{Rω}(0)`.
    pub diff: F,
    pub diff_stderr: F,
    pub truncation_bound: F,
}

/// Coupled difference estimates of `g_{R+h}(0) − g_R(0)` over a radius grid.
///
/// Sample `i` evaluates both radii on the same unit-disc draws (the laws
/// `uniform(0,0,R)` and `uniform(0,0,R+h)` scale one shared stream), the
/// same coupling the continuity proof uses.
pub fn continuity_scan<F: Real>(
    r_grid: &[F],
    h: F,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Vec<ContinuityRow<F>> {
    r_grid
        .iter()
        .map(|&r| {
            let law_r = ParameterLaw::uniform_disc(Complex::new(F::zero(), F::zero()), r);
            let law_rh = ParameterLaw::uniform_disc(Complex::new(F::zero(), F::zero()), r + h);
            let escape_r = escape_radius(r);
            let escape_rh = escape_radius(r + h);
            let origin = Complex::new(F::zero(), F::zero());
            let pairs: Vec<(GreenEstimate<F>, GreenEstimate<F>)> = (0..n as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = SeedSpec::new(master_seed, i);
                    let a = green_point(origin, &LawStream::new(&law_r, seed), &escape_r, tol, depth_cap);
                    let b = green_point(origin, &LawStream::new(&law_rh, seed), &escape_rh, tol, depth_cap);
                    (a, b)
                })
                .collect();
            let g_r: Vec<F> = pairs.iter().map(|(a, _)| a.value).collect();
            let g_rh: Vec<F> = pairs.iter().map(|(_, b)| b.value).collect();
            let diffs: Vec<F> = pairs.iter().map(|(a, b)| b.value - a.value).collect();
            let diff_stats = mean_stderr(&diffs);
            let truncation = pairs
                .iter()
                .map(|(a, b)| a.error_bound + b.error_bound)
                .fold(F::zero(), |acc, x| acc.max(x));
            let nf = real::<F>(n as f64);
            ContinuityRow {
                radius: r,
                step: h,
                g_r: pairwise_sum(&g_r) / nf,
                g_r_plus_h: pairwise_sum(&g_rh) / nf,
                diff: diff_stats.mean,
                diff_stderr: diff_stats.stderr,
                truncation_bound: truncation,
            }
        })
        .collect()
}

/// One row of the large-radius asymptotic check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow<F> {
    pub radius: F,
    pub estimate: F,
    pub stderr: F,
    /// `ĝ_R(0) / ln R`.
    pub ratio: F,
    /// Analytic lower bound `½(1−δ²) ln(δR)`.
    pub lower_bound: F,
    /// Upper bound `g_{ω_R}(0)` from autonomous iteration of `z² + R`.
    pub upper_bound: F,
    pub truncation_bound: F,
}

/// Check `g_R(0)/ln R → 1/2` against the analytic sandwich
/// `½(1−δ²) ln(δR) ≤ ĝ_R(0) ≤ g_{ω_R}(0)`.
///
/// Returns [`Error::SandwichViolation`] if an estimate exits the bounds by
/// more than four standard errors plus truncation — that signals an
/// implementation bug, not statistical noise.
pub fn asymptotic_check<F: Real>(
    r_list: &[F],
    delta: F,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Result<Vec<AsymptoticRow<F>>> {
    assert!(delta > F::zero() && delta < F::one());
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let law = ParameterLaw::uniform_disc(Complex::new(F::zero(), F::zero()), r);
        let g = global_green(&law, n, tol, depth_cap, master_seed);
        let upper = autonomous_green(
            Complex::new(F::zero(), F::zero()),
            Complex::new(r, F::zero()),
            tol,
            depth_cap,
        );
        let half = real::<F>(0.5);
        let lower = half * (F::one() - delta * delta) * (delta * r).ln();
        let margin = g.margin();
        let row = AsymptoticRow {
            radius: r,
            estimate: g.mean,
            stderr: g.stderr,
            ratio: g.mean / r.ln(),
            lower_bound: lower,
            upper_bound: upper.value,
            truncation_bound: g.truncation_bound,
        };
        if g.mean + margin < lower || g.mean - margin > upper.value + upper.error_bound {
            return Err(Error::SandwichViolation {
                radius: r.to_f64().unwrap_or(f64::NAN),
                estimate: g.mean.to_f64().unwrap_or(f64::NAN),
                margin: margin.to_f64().unwrap_or(f64::NAN),
                lower: lower.to_f64().unwrap_or(f64::NAN),
                upper: upper.value.to_f64().unwrap_or(f64::NAN),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Tail probabilities `P(g_ω(0) < 2^{−k})` and their fitted exponential
/// decay rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FastEscapeFit<F> {
    pub k_values: Vec<u32>,
    /// `P̂(g_ω(0) < 2^{−k})`, non-increasing in `k` by construction (the
    /// events are nested and all probabilities share one sample set).
    pub probabilities: Vec<F>,
    /// Negated least-squares slope of `ln P̂` against `k`, fitted over the
    /// `k` whose counts reach `min_count`; `None` flags `γ = +∞` (every
    /// probability is zero — the system escaped instantly at all depths).
    pub gamma_hat: Option<F>,
    /// `R²` of the fitted line (0 when no fit was possible).
    pub fit_quality: F,
    pub samples: usize,
    /// `k` values actually used for the fit.
    pub k_fitted: Vec<u32>,
}

/// Estimate the fast-escape decay `P(g_ω(0) < 2^{−k}) < e^{−γk}`.
///
/// The tolerance must resolve the smallest threshold: callers should pass
/// `tol ≪ 2^{−k_max}`.
pub fn fast_escape_fit<F: Real>(
    law: &ParameterLaw<F>,
    k_range: std::ops::RangeInclusive<u32>,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
    min_count: usize,
) -> FastEscapeFit<F> {
    let escape = escape_radius(law.radius_bound());
    let estimates = green_samples(law, &escape, n, tol, depth_cap, master_seed);
    let k_values: Vec<u32> = k_range.collect();
    let half = real::<F>(0.5);
    let mut probabilities = Vec::with_capacity(k_values.len());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut k_fitted = Vec::new();
    for &k in &k_values {
        let threshold = half.powi(k as i32);
        let count = estimates.iter().filter(|e| e.value < threshold).count();
        let p = real::<F>(count as f64 / n as f64);
        probabilities.push(p);
        if count >= min_count {
            xs.push(real::<F>(k as f64));
            ys.push(p.ln());
            k_fitted.push(k);
        }
    }
    if xs.len() < 2 {
        return FastEscapeFit {
            k_values,
            probabilities,
            gamma_hat: None,
            fit_quality: F::zero(),
            samples: n,
            k_fitted,
        };
    }
    let (slope, intercept) = crate::stats::linear_fit(&xs, &ys);
    FastEscapeFit {
        k_values,
        probabilities,
        gamma_hat: Some(-slope),
        fit_quality: r_squared(&xs, &ys, slope, intercept),
        samples: n,
        k_fitted,
    }
}

/// One perturbation radius against the unperturbed reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRow<F> {
    pub delta: F,
    pub estimate: F,
    pub stderr: F,
    pub truncation_bound: F,
    /// `|ĝ_δ(0) − g_{c0}(0)|`.
    pub deviation: F,
    /// `4·stderr` plus the certified truncation bounds of both sides.
    pub budget: F,
    pub pass: bool,
}

/// Coupled comparison of the real and imaginary perturbation directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationPair<F> {
    pub delta: F,
    pub g_real_axis: F,
    pub g_imag_axis: F,
    /// Coupled mean of the per-sample differences.
    pub diff: F,
    pub diff_stderr: F,
    pub pass: bool,
}

/// Result of the perturbation-constancy experiment around `c0 ∉ M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConstancy<F> {
    pub c0_re: F,
    pub c0_im: F,
    /// Autonomous reference `g_{c0}(0)`.
    pub reference: F,
    pub reference_bound: F,
    /// Largest admissible perturbation radius `δ₀`.
    pub delta_limit: F,
    pub rows: Vec<PerturbationRow<F>>,
    pub rotation_pairs: Vec<RotationPair<F>>,
    pub pass: bool,
}

/// Check that `δ ↦ ĝ_δ(0)` is constant on `[0, δ₀)` and invariant under
/// rotating the perturbation direction.
pub fn perturbation_constancy<F: Real>(
    c0: Complex<F>,
    deltas: &[F],
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Result<PerturbationConstancy<F>> {
    let delta_limit = perturbation_radius_limit(c0, 10_000)?;
    let reference = autonomous_green(Complex::new(F::zero(), F::zero()), c0, tol, depth_cap);
    let sigmas = real::<F>(CONFIDENCE_SIGMAS);
    let origin = Complex::new(F::zero(), F::zero());
    let mut rows = Vec::with_capacity(deltas.len());
    let mut rotation_pairs = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let law_re = ParameterLaw::perturbation(c0, Complex::new(delta, F::zero()));
        let law_im = law_re.rotate(Complex::new(F::zero(), F::one()))?;
        let escape = escape_radius(law_re.radius_bound());
        let pairs: Vec<(GreenEstimate<F>, GreenEstimate<F>)> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let seed = SeedSpec::new(master_seed, i);
                let a = green_point(origin, &LawStream::new(&law_re, seed), &escape, tol, depth_cap);
                let b = green_point(origin, &LawStream::new(&law_im, seed), &escape, tol, depth_cap);
                (a, b)
            })
            .collect();
        let re_estimates: Vec<GreenEstimate<F>> = pairs.iter().map(|(a, _)| *a).collect();
        let g_re = aggregate_green(&law_re, &re_estimates);
        let deviation = (g_re.mean - reference.value).abs();
        let budget = sigmas * g_re.stderr + g_re.truncation_bound + reference.error_bound;
        rows.push(PerturbationRow {
            delta,
            estimate: g_re.mean,
            stderr: g_re.stderr,
            truncation_bound: g_re.truncation_bound,
            deviation,
            budget,
            pass: deviation <= budget,
        });
        let diffs: Vec<F> = pairs.iter().map(|(a, b)| a.value - b.value).collect();
        let diff_stats = mean_stderr(&diffs);
        let g_im_values: Vec<F> = pairs.iter().map(|(_, b)| b.value).collect();
        let diff_truncation = pairs
            .iter()
            .map(|(a, b)| a.error_bound + b.error_bound)
            .fold(F::zero(), |acc, x| acc.max(x));
        let diff_budget = sigmas * diff_stats.stderr + diff_truncation;
        rotation_pairs.push(RotationPair {
            delta,
            g_real_axis: g_re.mean,
            g_imag_axis: pairwise_sum(&g_im_values) / real::<F>(n as f64),
            diff: diff_stats.mean,
            diff_stderr: diff_stats.stderr,
            pass: diff_stats.mean.abs() <= diff_budget,
        });
    }
    let pass = rows.iter().all(|r| r.pass) && rotation_pairs.iter().all(|r| r.pass);
    Ok(PerturbationConstancy {
        c0_re: c0.re,
        c0_im: c0.im,
        reference: reference.value,
        reference_bound: reference.error_bound,
        delta_limit,
        rows,
        rotation_pairs,
        pass,
    })
}

/// Machine-precision floor for coupled residual assertions.
///
/// The mean-value defect of an `m`-point average of the harmonic function
/// `λ ↦ g_{λ,ω}(0)` at a small radius is of order `(r/ρ)^m`, far below f64
/// resolution, so what the coupled estimator actually measures is the
/// rounding of the sums. Allow a fixed multiple of machine epsilon on top
/// of the statistical budget.
pub fn rounding_floor<F: Real>(scale: F) -> F {
    real::<F>(64.0) * F::epsilon() * (F::one() + scale.abs())
}

/// Mean-value test of the harmonicity of `λ ↦ g_λ(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicityCheck<F> {
    pub radius: F,
    pub rotations: u32,
    /// `|avg_j ĝ_{r·η_j}(0) − ĝ_0(0)|` with common random numbers.
    pub residual: F,
    /// Standard error of the per-sample coupled mean-value defects.
    pub pooled_stderr: F,
    /// Floating-point allowance added to the statistical budget.
    pub allowance: F,
    pub center: F,
    pub circle_mean: F,
    pub pass: bool,
}

/// Compare the average of `ĝ_λ(0)` over `m` rotations `λ = r·η_j` with the
/// center value `ĝ_0(0)`, sample by sample.
pub fn harmonicity_check<F: Real>(
    c0: Complex<F>,
    r: F,
    m: u32,
    n: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> HarmonicityCheck<F> {
    assert!(m >= 1);
    let lambdas: Vec<Complex<F>> = (0..m)
        .map(|j| Complex::from_polar(r, real::<F>(2.0) * F::PI() * real::<F>(j as f64 / m as f64)))
        .collect();
    let laws: Vec<ParameterLaw<F>> = lambdas
        .iter()
        .map(|&l| ParameterLaw::perturbation(c0, l))
        .collect();
    let center_law = ParameterLaw::perturbation(c0, Complex::new(F::zero(), F::zero()));
    let escape = escape_radius(c0.norm() + r);
    let origin = Complex::new(F::zero(), F::zero());
    let mf = real::<F>(m as f64);
    let per_sample: Vec<(F, F, F)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let seed = SeedSpec::new(master_seed, i);
            let center = green_point(origin, &LawStream::new(&center_law, seed), &escape, tol, depth_cap);
            let ring: Vec<F> = laws
                .iter()
                .map(|law| {
                    green_point(origin, &LawStream::new(law, seed), &escape, tol, depth_cap).value
                })
                .collect();
            let ring_mean = pairwise_sum(&ring) / mf;
            (ring_mean - center.value, ring_mean, center.value)
        })
        .collect();
    let defects: Vec<F> = per_sample.iter().map(|(d, _, _)| *d).collect();
    let ring_means: Vec<F> = per_sample.iter().map(|(_, r, _)| *r).collect();
    let centers: Vec<F> = per_sample.iter().map(|(_, _, c)| *c).collect();
    let stats = mean_stderr(&defects);
    let nf = real::<F>(n as f64);
    let residual = stats.mean.abs();
    let center = pairwise_sum(&centers) / nf;
    let allowance = rounding_floor(center);
    HarmonicityCheck {
        radius: r,
        rotations: m,
        residual,
        pooled_stderr: stats.stderr,
        allowance,
        center,
        circle_mean: pairwise_sum(&ring_means) / nf,
        pass: residual <= real::<F>(CONFIDENCE_SIGMAS) * stats.stderr + allowance,
    }
}

/// Mean-value test for one fixed `ω`: the `m`-point circle average of
/// `g_{λ,ω}(0)` must match `g_{0,ω}(0)` within the certified truncation
/// budget (the quadrature error of an `m`-point average of a harmonic
/// function at radius `r ≪ δ₀` is far below it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleAverageCheck<F> {
    pub omega_index: u64,
    pub residual: F,
    pub budget: F,
    pub pass: bool,
}

pub fn circle_average_checks<F: Real>(
    c0: Complex<F>,
    r: F,
    m: u32,
    omega_count: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Vec<CircleAverageCheck<F>> {
    let lambdas: Vec<Complex<F>> = (0..m)
        .map(|j| Complex::from_polar(r, real::<F>(2.0) * F::PI() * real::<F>(j as f64 / m as f64)))
        .collect();
    let center_law = ParameterLaw::perturbation(c0, Complex::new(F::zero(), F::zero()));
    let escape = escape_radius(c0.norm() + r);
    let origin = Complex::new(F::zero(), F::zero());
    let mf = real::<F>(m as f64);
    (0..omega_count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = SeedSpec::new(master_seed, i);
            let center = green_point(origin, &LawStream::new(&center_law, seed), &escape, tol, depth_cap);
            let ring: Vec<GreenEstimate<F>> = lambdas
                .iter()
                .map(|&l| {
                    let law = ParameterLaw::perturbation(c0, l);
                    green_point(origin, &LawStream::new(&law, seed), &escape, tol, depth_cap)
                })
                .collect();
            let values: Vec<F> = ring.iter().map(|e| e.value).collect();
            let bounds: Vec<F> = ring.iter().map(|e| e.error_bound).collect();
            let residual = (pairwise_sum(&values) / mf - center.value).abs();
            let budget = pairwise_sum(&bounds) / mf + center.error_bound;
            CircleAverageCheck {
                omega_index: i,
                residual,
                budget,
                pass: residual <= budget,
            }
        })
        .collect()
}

/// Distance of a sampled perturbed Julia set from the autonomous reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCheck<F> {
    pub delta: F,
    /// Symmetric Hausdorff distance between the sampled `J_{λ,ω}` cloud and
    /// the autonomous `J(f_{c0})` reference cloud.
    pub hausdorff_distance: F,
    /// Smallest sample modulus: an empirical `η` with
    /// `J_{λ,ω} ∩ D(0, η) = ∅`.
    pub min_modulus: F,
    pub sample_count: usize,
    pub reference_count: usize,
}

/// Backward-orbit reference cloud of the autonomous Julia set `J(f_{c0})`.
pub fn autonomous_reference_cloud<F: Real>(
    c0: Complex<F>,
    depth: u32,
    count: usize,
    master_seed: u64,
) -> MeasurePointCloud<F> {
    let law = ParameterLaw::point_mass(c0);
    let omega = sample_prefix(&law, SeedSpec::new(master_seed, stream_blocks::PARAMS), 0);
    backward_cloud(
        escape_radius(c0.norm()).default_basepoint(),
        &omega,
        law.tag(),
        depth,
        count,
        master_seed,
        stream_blocks::REFERENCE,
    )
}

/// Sample perturbed Julia sets `J_{λ,ω}` (a fresh `ω` per sample point) and
/// measure their distance from the reference cloud and their clearance
/// around the origin.
pub fn stability_check<F: Real>(
    c0: Complex<F>,
    delta: F,
    n_points: usize,
    depth: u32,
    master_seed: u64,
    reference: &MeasurePointCloud<F>,
) -> StabilityCheck<F> {
    let law = ParameterLaw::perturbation(c0, Complex::new(delta, F::zero()));
    let escape = escape_radius(law.radius_bound());
    let z0 = escape.default_basepoint();
    let points: Vec<Complex<F>> = (0..n_points as u64)
        .into_par_iter()
        .map(|i| {
            let omega = LawStream::new(&law, SeedSpec::new(master_seed, stream_blocks::PARAMS + i));
            crate::measure::backward_orbit_sample(
                z0,
                &omega,
                depth,
                SeedSpec::new(master_seed, stream_blocks::COINS + i),
            )
        })
        .collect();
    let min_modulus = points
        .iter()
        .map(|z| z.norm())
        .fold(F::infinity(), |a, b| a.min(b));
    StabilityCheck {
        delta,
        hausdorff_distance: hausdorff(&points, &reference.points),
        min_modulus,
        sample_count: points.len(),
        reference_count: reference.len(),
    }
}

/// Pooled local-dimension estimate across independent `ω` realizations.
///
/// The dimension formula holds for almost every `ω`; at finite scales the
/// per-`ω` slope wanders by several percent, so the experiment draws
/// `omega_count` independent realizations, fits each one, and reports the
/// median of the per-`ω` slopes with their sample spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDimensionExperiment<F> {
    /// Median over `ω` of the per-`ω` median slopes.
    pub slope: F,
    /// Standard error of the per-`ω` slopes around their mean.
    pub stderr: F,
    pub per_omega_slopes: Vec<F>,
    pub omega_count: usize,
    pub mass_per_omega: usize,
    pub depth: u32,
}

pub fn local_dimension_experiment<F: Real>(
    law: &ParameterLaw<F>,
    omega_count: usize,
    mass_per_omega: usize,
    targets_per_omega: usize,
    depth: u32,
    radius_exponents: std::ops::RangeInclusive<i32>,
    master_seed: u64,
) -> Result<LocalDimensionExperiment<F>> {
    use crate::dimension::{diameter_estimate, dyadic_radii, local_dimension_fit, MIN_WINDOW_COUNT};
    let escape = escape_radius(law.radius_bound());
    let z0 = escape.default_basepoint();
    let slopes: Vec<F> = (0..omega_count as u64)
        .map(|w| {
            let omega = sample_prefix(
                law,
                SeedSpec::new(master_seed, stream_blocks::PARAMS + w),
                depth as usize,
            );
            // Disjoint coin blocks per realization.
            let block = w << 20;
            let mass = backward_cloud(
                z0,
                &omega,
                law.tag(),
                depth,
                mass_per_omega,
                master_seed,
                stream_blocks::COINS + block,
            );
            let targets = backward_cloud(
                z0,
                &omega,
                law.tag(),
                depth,
                targets_per_omega,
                master_seed,
                stream_blocks::TARGET_COINS + block,
            );
            let radii = dyadic_radii(diameter_estimate(&mass.points), radius_exponents.clone());
            local_dimension_fit(
                &mass.points,
                &targets.points,
                &radii,
                MIN_WINDOW_COUNT,
                &SeedSpec::new(master_seed, stream_blocks::BOOTSTRAP + w).stream(),
            )
            .map(|fit| fit.slope)
        })
        .collect::<Result<_>>()?;
    let stats = mean_stderr(&slopes);
    Ok(LocalDimensionExperiment {
        slope: crate::stats::median(&slopes),
        stderr: stats.stderr,
        per_omega_slopes: slopes,
        omega_count,
        mass_per_omega,
        depth,
    })
}

/// Two-sided estimate of the exponent identity `χ = ln 2 + g(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentIdentityCheck<F> {
    /// Measure-side `χ̂`: mean over `ω` samples of `Σ w_i ln|2 z_i|` on
    /// depth-`tree_depth` exact trees.
    pub chi_measure: F,
    pub chi_measure_stderr: F,
    /// Green-side `ln 2 + ĝ(0)`.
    pub chi_green: F,
    pub g0: GlobalGreenEstimate<F>,
    pub deviation: F,
    pub omega_count: usize,
    pub tree_depth: u32,
}

pub fn exponent_identity_check<F: Real>(
    law: &ParameterLaw<F>,
    omega_count: usize,
    tree_depth: u32,
    tree_cap: u32,
    n_green: usize,
    tol: F,
    depth_cap: u32,
    master_seed: u64,
) -> Result<ExponentIdentityCheck<F>> {
    let escape = escape_radius(law.radius_bound());
    let z0 = escape.default_basepoint();
    let chis: Vec<F> = (0..omega_count as u64)
        .into_par_iter()
        .map(|i| {
            let omega = sample_prefix(law, SeedSpec::new(master_seed, i), tree_depth as usize);
            let cloud = exact_preimage_tree(z0, &omega, tree_depth, tree_cap)?;
            lyapunov_from_measure(&cloud)
        })
        .collect::<Result<_>>()?;
    let chi_stats = mean_stderr(&chis);
    let g0 = global_green(law, n_green, tol, depth_cap, master_seed);
    let chi_green = F::LN_2() + g0.mean;
    Ok(ExponentIdentityCheck {
        chi_measure: chi_stats.mean,
        chi_measure_stderr: chi_stats.stderr,
        chi_green,
        deviation: (chi_stats.mean - chi_green).abs(),
        g0,
        omega_count,
        tree_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_TOL;

    const SEED: u64 = 7;

    #[test]
    fn point_mass_four_matches_autonomous_oracle() {
        let law = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let g = global_green(&law, 200, DEFAULT_TOL, 1000, SEED);
        assert!((g.mean - 0.75017839144364418).abs() < 1e-9);
        assert!(g.stderr < 1e-12);
        assert_eq!(g.non_escape_fraction, 0.0);
    }

    #[test]
    fn sub_quarter_disc_is_degenerate() {
        // Parameters inside D(0, 0.2) never allow escape from the origin.
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 0.2);
        let g = global_green(&law, 2_000, DEFAULT_TOL, 2000, SEED);
        assert!(g.mean < 1e-6);
        assert_eq!(g.non_escape_fraction, 1.0);
    }

    #[test]
    fn global_green_respects_upper_bound() {
        // Every per-sample value obeys g <= ln R0 + 1, hence so does the mean.
        let r = 4.0f64;
        let law = ParameterLaw::uniform_disc(Complex::new(0.0, 0.0), r);
        let escape = escape_radius(r);
        let estimates = green_samples(&law, &escape, 5_000, DEFAULT_TOL, 1000, SEED);
        let cap = escape.radius.ln() + 1.0;
        for e in &estimates {
            assert!(e.value <= cap, "sample {} above ln R0 + 1 = {cap}", e.value);
        }
        let g = aggregate_green(&law, &estimates);
        assert!(g.mean >= 0.0 && g.mean <= cap);
    }

    #[test]
    fn uniform_four_matches_frozen_oracle() {
        // Golden from a 10x-budget self-oracle run (N = 1e6, depth cap 1e4,
        // tol 1e-12): g(0) = 0.49075723448488195 +/- 1.64e-4.
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 4.0);
        let g = global_green(&law, 100_000, DEFAULT_TOL, 1000, SEED);
        let oracle_mean = 0.49075723448488195;
        let oracle_stderr = 1.64e-4;
        assert!(
            (g.mean - oracle_mean).abs() <= 4.0 * (g.stderr + oracle_stderr),
            "mean {} vs oracle {oracle_mean}",
            g.mean
        );
    }

    #[test]
    fn dimension_half_for_green_equal_ln_two() {
        // The sequence (4, 0, 0, ...) has g(0) = ln 2 exactly, so
        // dim = ln2/(ln2 + ln2) = 1/2.
        let mut values = vec![Complex::new(4.0f64, 0.0)];
        values.extend(std::iter::repeat(Complex::new(0.0, 0.0)).take(127));
        let law = ParameterLaw::explicit_list(values, "inline").unwrap();
        let report = dimension_report(&law, 100, DEFAULT_TOL, 1000, SEED);
        assert!((report.dimension - 0.5).abs() < 1e-9);
    }

    #[test]
    fn dimension_of_uniform_four_strictly_inside_bounds() {
        // dim_H strictly between the Hoelder floor and 1 once g(0) is
        // significantly positive.
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 4.0);
        let report = dimension_report(&law, 5_000, DEFAULT_TOL, 1000, SEED);
        assert!(report.g0.mean - report.g0.margin() > 0.0);
        assert!(report.dimension < 1.0);
        assert!(report.dimension > report.hoelder_floor);
    }

    #[test]
    fn per_sample_green_dominated_by_constant_sequence() {
        // |f^n_omega(0)| <= h_R^n(0) by induction, so every sample satisfies
        // g_omega(0) <= g_{omega_R}(0).
        let r = 100.0f64;
        let law = ParameterLaw::uniform_disc(Complex::new(0.0, 0.0), r);
        let escape = escape_radius(r);
        let upper = autonomous_green(
            Complex::new(0.0f64, 0.0),
            Complex::new(r, 0.0),
            DEFAULT_TOL,
            1000,
        );
        let estimates = green_samples(&law, &escape, 2_000, DEFAULT_TOL, 1000, SEED);
        for e in &estimates {
            assert!(
                e.value <= upper.value + upper.error_bound + e.error_bound,
                "sample {} above autonomous bound {}",
                e.value,
                upper.value
            );
        }
    }

    #[test]
    fn asymptotic_large_radius_example_bounds() {
        // At R = 1e6 the ratio sits in [0.45, 0.55], the autonomous
        // upper-bound ratio stays below 0.55, and dimension * ln R lands
        // near 2 ln 2.
        let rows = asymptotic_check(&[1e6f64], 0.1, 2_000, DEFAULT_TOL, 1000, SEED).unwrap();
        let row = &rows[0];
        assert!(row.ratio > 0.45 && row.ratio < 0.55, "ratio {}", row.ratio);
        assert!(row.upper_bound / row.radius.ln() <= 0.55);
        let dim_ln_r = std::f64::consts::LN_2 / (std::f64::consts::LN_2 + row.estimate)
            * row.radius.ln();
        assert!(
            (1.25..=1.55).contains(&dim_ln_r),
            "dimension * ln R = {dim_ln_r}"
        );
    }

    #[test]
    fn global_green_is_thread_count_invariant() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 4.0);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| global_green(&law, 4_000, DEFAULT_TOL, 1000, SEED))
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_report_arithmetic() {
        // g0 = 0 gives dimension 1; the point-mass-4 law gives
        // ln2/(ln2 + g_4(0)).
        let degenerate = ParameterLaw::point_mass(Complex::new(0.0f64, 0.0));
        let report = dimension_report(&degenerate, 100, DEFAULT_TOL, 100, SEED);
        assert_eq!(report.dimension, 1.0);

        let four = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let report = dimension_report(&four, 100, DEFAULT_TOL, 1000, SEED);
        let expected = std::f64::consts::LN_2 / (std::f64::consts::LN_2 + 0.75017839144364418);
        assert!((report.dimension - expected).abs() < 1e-9);
        assert!(report.dimension > report.hoelder_floor);
        assert!(report.dim_ci.0 <= report.dimension && report.dimension <= report.dim_ci.1);
    }

    #[test]
    fn continuity_zero_step_has_zero_difference() {
        let rows = continuity_scan(&[2.0f64], 0.0, 500, DEFAULT_TOL, 1000, SEED);
        assert_eq!(rows[0].diff, 0.0);
        assert_eq!(rows[0].diff_stderr, 0.0);
    }

    #[test]
    fn continuity_in_constant_zero_regime() {
        // g == 0 on [0, 1/4]: radii with R + h <= 0.25 give exactly zero.
        let rows = continuity_scan(&[0.2f64], 0.05, 500, DEFAULT_TOL, 2000, SEED);
        assert!(rows[0].diff.abs() < 1e-6);
        assert!(rows[0].g_r < 1e-12 && rows[0].g_r_plus_h < 1e-12);
    }

    #[test]
    fn asymptotic_sandwich_and_domination() {
        let rows = asymptotic_check(&[100.0f64], 0.1, 2_000, DEFAULT_TOL, 1000, SEED).unwrap();
        let row = &rows[0];
        assert!(row.ratio > 0.40 && row.ratio < 0.60, "ratio {}", row.ratio);
        assert!(row.lower_bound <= row.estimate + 4.0 * row.stderr + row.truncation_bound);
        assert!(row.estimate - 4.0 * row.stderr <= row.upper_bound);
    }

    #[test]
    fn fast_escape_point_mass_has_zero_tail() {
        // g_4(0) = 0.75 > 1/2, so every probability vanishes and the rate
        // is reported as infinite.
        let law = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let fit = fast_escape_fit(&law, 1..=8, 500, DEFAULT_TOL, 1000, SEED, 10);
        assert!(fit.probabilities.iter().all(|&p| p == 0.0));
        assert!(fit.gamma_hat.is_none());
    }

    #[test]
    fn fast_escape_sub_quarter_law_never_escapes() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 0.2);
        let fit = fast_escape_fit(&law, 1..=8, 500, DEFAULT_TOL, 1000, SEED, 10);
        assert!(fit.probabilities.iter().all(|&p| p == 1.0));
    }

    #[test]
    fn fast_escape_unit_disc_decays() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let fit = fast_escape_fit(&law, 1..=6, 20_000, DEFAULT_TOL, 1000, SEED, 10);
        for pair in fit.probabilities.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
        assert!(fit.gamma_hat.expect("fit must exist") > 0.0);
    }

    #[test]
    fn perturbation_rejects_interior_parameter() {
        assert!(matches!(
            perturbation_constancy(Complex::new(-1.0f64, 0.0), &[0.01], 100, DEFAULT_TOL, 1000, SEED),
            Err(Error::InsideMandelbrot { .. })
        ));
    }

    #[test]
    fn perturbation_delta_zero_is_exact() {
        let result =
            perturbation_constancy(Complex::new(1.0f64, 0.0), &[0.0], 200, DEFAULT_TOL, 1000, SEED)
                .unwrap();
        let row = &result.rows[0];
        assert!(row.stderr < 1e-12);
        assert!(row.deviation <= row.budget);
        assert!(result.rotation_pairs[0].diff.abs() < 1e-15);
    }

    #[test]
    fn perturbation_constancy_small_sample() {
        let result = perturbation_constancy(
            Complex::new(1.0f64, 0.0),
            &[0.01, 0.05],
            5_000,
            DEFAULT_TOL,
            1000,
            SEED,
        )
        .unwrap();
        assert!(result.pass, "rows: {:?}", result.rows);
        assert!(result.delta_limit >= 0.05);
    }

    #[test]
    fn harmonicity_zero_radius_residual_is_zero() {
        let check = harmonicity_check(
            Complex::new(1.0f64, 0.0),
            0.0,
            8,
            200,
            DEFAULT_TOL,
            1000,
            SEED,
        );
        assert!(check.residual < 1e-15, "residual {}", check.residual);
        assert!(check.pass);
    }

    #[test]
    fn harmonicity_mean_value_property() {
        let check = harmonicity_check(
            Complex::new(1.0f64, 0.0),
            0.03,
            16,
            2_000,
            DEFAULT_TOL,
            1000,
            SEED,
        );
        assert!(
            check.pass,
            "residual {} vs 4 x stderr {} + allowance {}",
            check.residual,
            4.0 * check.pooled_stderr,
            check.allowance
        );
    }

    #[test]
    fn circle_average_within_certified_budget() {
        let checks = circle_average_checks(
            Complex::new(1.0f64, 0.0),
            0.03,
            16,
            50,
            DEFAULT_TOL,
            1000,
            SEED,
        );
        for c in &checks {
            assert!(c.pass, "omega {} residual {} budget {}", c.omega_index, c.residual, c.budget);
        }
    }

    #[test]
    fn stability_zero_delta_is_sampling_noise_only() {
        let c0 = Complex::new(1.0f64, 0.0);
        let reference = autonomous_reference_cloud(c0, 24, 2_000, SEED);
        let check = stability_check(c0, 0.0, 1_000, 24, SEED ^ 1, &reference);
        assert!(check.hausdorff_distance < 0.05, "distance {}", check.hausdorff_distance);
        assert!(check.min_modulus > 0.2);
    }

    #[test]
    fn exponent_identity_autonomous() {
        // For a point mass the identity chi = ln 2 + g(0) is exact up to
        // tree truncation.
        let law = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let check =
            exponent_identity_check(&law, 4, 14, 22, 100, DEFAULT_TOL, 1000, SEED).unwrap();
        assert!(check.deviation < 0.01, "deviation {}", check.deviation);
    }
}
