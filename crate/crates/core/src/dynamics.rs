//! Deterministic non-autonomous iteration of quadratic maps and certified
//! pointwise evaluation of the Green's function.
//!
//! For a parameter sequence `ω = (c₀, c₁, …)` bounded by `|c_k| ≤ R`, the
//! compositions `fⁿ_ω = f_{c_{n−1}} ∘ … ∘ f_{c₀}` define the Green's function
//!
//! ```text
//! g_ω(z) = lim_{n→∞} 2^{−n} ln|fⁿ_ω(z)|
//! ```
//!
//! on the basin of infinity, with `g_ω ≡ 0` on the filled Julia set. The
//! evaluation here is certified: with the escape radius `R₀ = R₀(R)` of
//! [`escape_radius`], once `|f^k_ω(z)| > R₀` the truncation
//! `2^{−k} ln|f^k_ω(z)|` differs from `g_ω(z)` by at most `2^{−k}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{ParameterSequence, ParameterSource, PointMassSource};
use crate::{real, Complex, Real};

/// Iterates beyond this magnitude continue in the log domain.
const OVERFLOW_THRESHOLD: f64 = 1e100;

/// Default evaluation depth cap: escaping orbits at least double in modulus
/// past `R₀`, so escape is detected within a few dozen steps; points of the
/// filled Julia set never escape and carry `g = 0` by definition.
pub const DEFAULT_DEPTH_CAP: u32 = 1000;

/// Default certified truncation tolerance (31 post-escape halvings).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Escape radius for a family of parameter bound `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeRadius<F> {
    /// Parameter bound `R`: every `|c_k| ≤ R`.
    pub parameter_bound: F,
    /// Radius `R₀` beyond which every map of the family at least doubles
    /// modulus.
    pub radius: F,
}

/// `R₀(R) = 1 + sqrt(1 + 2R)`.
///
/// Two properties make this a valid escape radius, both exercised by grid
/// oracles in the tests:
///
/// * doubling: `|z| ≥ R₀` and `|c| ≤ R` imply `|z² + c| ≥ |z|² − R ≥ 2|z|`,
///   because `R₀² − 2R₀ = 2R ≥ R`;
/// * one-nat bound: `R/R₀² ≤ 1/2`, so the telescoping series
///   `Σ_k 2^{−(k+1)} ln|1 + c_k/(f^k)²|` for `g_ω(z) − ln|z|` sums below one
///   nat for every `|z| > R₀`.
pub fn escape_radius<F: Real>(parameter_bound: F) -> EscapeRadius<F> {
    assert!(
        parameter_bound >= F::zero(),
        "parameter bound must be nonnegative"
    );
    let two = real::<F>(2.0);
    EscapeRadius {
        parameter_bound,
        radius: F::one() + (F::one() + two * parameter_bound).sqrt(),
    }
}

impl<F: Real> EscapeRadius<F> {
    /// Default measure basepoint `R₀ + 1` on the positive real axis,
    /// guaranteed inside the escaping region of every sequence.
    pub fn default_basepoint(&self) -> Complex<F> {
        Complex::new(self.radius + F::one(), F::zero())
    }
}

/// Value of `fⁿ_ω(z)`: the exact point, or only `ln|fⁿ_ω(z)|` once the
/// orbit has left the floating-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitPoint<F> {
    Point(Complex<F>),
    /// Log-domain continuation: the natural log of the magnitude.
    LogAbs(F),
}

impl<F: Real> OrbitPoint<F> {
    pub fn log_abs(&self) -> F {
        match self {
            OrbitPoint::Point(z) => z.norm().ln(),
            OrbitPoint::LogAbs(u) => *u,
        }
    }
}

/// Compute `fⁿ_ω(z)` for a finite sequence prefix.
///
/// Once the iterate magnitude exceeds `1e100` the computation switches to
/// the log-domain recursion `ln|f^{k+1}| = 2·ln|f^k| + ln|1 + c_k/(f^k)²|`
/// whose correction term is below `1e−18` there (it is bounded by
/// `R·exp(−2·ln|f^k|)`) and is dropped.
pub fn iterate_orbit<F: Real>(
    z: Complex<F>,
    omega: &ParameterSequence<F>,
    n: u32,
) -> Result<OrbitPoint<F>> {
    if n as usize > omega.len() {
        return Err(Error::PrefixTooShort {
            needed: n as u64,
            available: omega.len() as u64,
        });
    }
    let overflow = real::<F>(OVERFLOW_THRESHOLD);
    let overflow_sq = overflow * overflow;
    let two = real::<F>(2.0);
    let mut state = OrbitPoint::Point(z);
    for k in 0..n as u64 {
        state = match state {
            OrbitPoint::Point(w) => {
                let next = w * w + omega.param(k);
                if next.norm_sqr() > overflow_sq {
                    OrbitPoint::LogAbs(next.norm().ln())
                } else {
                    OrbitPoint::Point(next)
                }
            }
            OrbitPoint::LogAbs(u) => OrbitPoint::LogAbs(two * u),
        };
    }
    Ok(state)
}

/// A certified pointwise Green's function value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenEstimate<F> {
    /// Estimated `g_ω(z)` in nats; exactly `0` when the orbit never left
    /// `D(0, R₀)` within the depth cap.
    pub value: F,
    /// Certified truncation bound `2^{−k}` (0 for non-escaping reports).
    pub error_bound: F,
    /// The depth `k` at which the estimate was taken (0 if not escaped).
    pub escape_depth: u32,
    /// Whether the orbit escaped `D(0, R₀)` within the depth cap.
    pub escaped: bool,
    /// `ln|f^k_ω(z)|` at the stopping depth.
    pub log_abs_iterate: F,
}

/// Evaluate `g_ω(z)` with certified error `≤ tol`.
///
/// Iterates until the first `k` with `|f^k_ω(z)| > R₀` and `2^{−k} ≤ tol`,
/// returning `2^{−k} ln|f^k_ω(z)|` with error bound `2^{−k}`. The depth cap
/// bounds only the escape search; once the orbit has escaped, the remaining
/// halvings down to `tol` are a handful of cheap log-domain steps and always
/// terminate. If the orbit stays in `D(0, R₀)` through the cap, the value is
/// reported as `0` with `escaped = false` — a valid outcome, not an error
/// (the Monte-Carlo bias this introduces is surfaced by the estimators as a
/// non-escape fraction, not corrected).
pub fn green_point<F: Real, S: ParameterSource<F> + ?Sized>(
    z: Complex<F>,
    omega: &S,
    escape: &EscapeRadius<F>,
    tol: F,
    depth_cap: u32,
) -> GreenEstimate<F> {
    assert!(tol > F::zero(), "tolerance must be positive");
    assert!(depth_cap >= 1, "depth cap must be at least 1");
    let overflow = real::<F>(OVERFLOW_THRESHOLD);
    let overflow_sq = overflow * overflow;
    let radius_sq = escape.radius * escape.radius;
    let two = real::<F>(2.0);
    let half = real::<F>(0.5);

    let mut state = OrbitPoint::Point(z);
    let mut k: u32 = 0;
    let mut escaped_at: Option<u32> = None;
    let mut bound = F::one();

    loop {
        // Escape test at depth k.
        if escaped_at.is_none() {
            let out = match state {
                OrbitPoint::Point(w) => w.norm_sqr() > radius_sq,
                OrbitPoint::LogAbs(_) => true,
            };
            if out {
                escaped_at = Some(k);
            } else if k >= depth_cap {
                return GreenEstimate {
                    value: F::zero(),
                    error_bound: F::zero(),
                    escape_depth: 0,
                    escaped: false,
                    log_abs_iterate: state.log_abs(),
                };
            }
        }
        if escaped_at.is_some() && bound <= tol {
            let log_abs = state.log_abs();
            return GreenEstimate {
                value: bound * log_abs,
                error_bound: bound,
                escape_depth: k,
                escaped: true,
                log_abs_iterate: log_abs,
            };
        }
        state = match state {
            OrbitPoint::Point(w) => {
                let next = w * w + omega.param(k as u64);
                if next.norm_sqr() > overflow_sq {
                    let log_abs = next.norm().ln();
                    // Dropped log-domain correction is bounded by
                    // R exp(-2 ln|f^k|), which is below 1e-18 for every
                    // representable parameter bound once |f^k| > 1e100.
                    debug_assert!(
                        escape.parameter_bound * (-(two * log_abs)).exp() < real::<F>(1e-18)
                    );
                    OrbitPoint::LogAbs(log_abs)
                } else {
                    OrbitPoint::Point(next)
                }
            }
            OrbitPoint::LogAbs(u) => OrbitPoint::LogAbs(two * u),
        };
        k += 1;
        bound = bound * half;
    }
}

/// Evaluate the autonomous Green's function `g_c(z)` of `z² + c`.
pub fn autonomous_green<F: Real>(
    z: Complex<F>,
    c: Complex<F>,
    tol: F,
    depth_cap: u32,
) -> GreenEstimate<F> {
    let escape = escape_radius(c.norm());
    green_point(z, &PointMassSource(c), &escape, tol, depth_cap)
}

/// Residual of the functional equation `g_{σω}(f_ω(z)) = 2 g_ω(z)` together
/// with its certified budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualCheck<F> {
    /// `|g_{σω}(f_ω(z)) − 2·g_ω(z)|` from two independent evaluations.
    pub residual: F,
    /// Contract: ` residual ≤ 3·(sum of the two certified error bounds)`.
    pub certified_budget: F,
}

/// Check the functional equation at `z` by two independent `green_point`
/// evaluations, one along `ω` and one along `σω` at `f_ω(z)`.
pub fn green_functional_equation_residual<F: Real>(
    z: Complex<F>,
    omega: &ParameterSequence<F>,
    escape: &EscapeRadius<F>,
    tol: F,
    depth_cap: u32,
) -> Result<ResidualCheck<F>> {
    let g_here = green_point(z, omega, escape, tol, depth_cap);
    if !g_here.escaped {
        return Err(Error::NonEscaping { depth_cap });
    }
    let image = z * z + omega.param(0);
    let shifted = omega.shift(1)?;
    let g_image = green_point(image, &shifted, escape, tol, depth_cap);
    if !g_image.escaped {
        return Err(Error::NonEscaping { depth_cap });
    }
    let two = real::<F>(2.0);
    let three = real::<F>(3.0);
    Ok(ResidualCheck {
        residual: (g_image.value - two * g_here.value).abs(),
        certified_budget: three * (g_here.error_bound + g_image.error_bound),
    })
}

/// Whether the critical orbit of `z² + c` escapes `|z| > 2` within
/// `max_iter` steps; parameters that fail the test are treated as inside
/// the Mandelbrot set.
pub fn mandelbrot_escapes<F: Real>(c: Complex<F>, max_iter: u32) -> bool {
    let four = real::<F>(4.0);
    let mut z = Complex::new(F::zero(), F::zero());
    for _ in 0..max_iter {
        z = z * z + c;
        if z.norm_sqr() > four {
            return true;
        }
    }
    false
}

/// Exterior distance estimate from `c` to the Mandelbrot set via the
/// parameter-plane Green's function: `b = |z_n| ln|z_n| / |∂_c z_n|` at
/// escape. Returns `None` when the critical orbit does not escape.
pub fn mandelbrot_exterior_distance<F: Real>(c: Complex<F>, max_iter: u32) -> Option<F> {
    let big = real::<F>(1e30);
    let big_sq = big * big;
    let two = real::<F>(2.0);
    let mut z = Complex::new(F::zero(), F::zero());
    let mut dz = Complex::new(F::zero(), F::zero());
    for _ in 0..max_iter {
        dz = z * dz * two + Complex::new(F::one(), F::zero());
        z = z * z + c;
        if z.norm_sqr() > big_sq {
            let norm = z.norm();
            return Some(norm * norm.ln() / dz.norm());
        }
    }
    None
}

/// Largest perturbation radius for experiments around `c0 ∉ M`:
/// `δ₀ = min(0.25·dist(c0, M), 0.1)` with the exterior distance estimate
/// standing in for the true distance.
pub fn perturbation_radius_limit<F: Real>(c0: Complex<F>, max_iter: u32) -> Result<F> {
    let dist = mandelbrot_exterior_distance(c0, max_iter).ok_or(Error::InsideMandelbrot {
        re: c0.re.to_f64().unwrap_or(f64::NAN),
        im: c0.im.to_f64().unwrap_or(f64::NAN),
        max_iter,
    })?;
    Ok((real::<F>(0.25) * dist).min(real::<F>(0.1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{sample_prefix, LawStream, ParameterLaw};
    use crate::seed::SeedSpec;

    fn seq(values: &[(f64, f64)]) -> ParameterSequence<f64> {
        let law = ParameterLaw::explicit_list(
            values.iter().map(|&(re, im)| Complex::new(re, im)).collect(),
            "inline",
        )
        .unwrap();
        sample_prefix(&law, SeedSpec::new(0, 0), values.len())
    }

    #[test]
    fn escape_radius_formula_values() {
        assert_eq!(escape_radius(0.0f64).radius, 2.0);
        assert_eq!(escape_radius(4.0f64).radius, 4.0);
        assert_eq!(escape_radius(112.0f64).radius, 16.0);
    }

    #[test]
    fn escape_radius_doubling_grid_oracle() {
        // Minimize |z^2+c| - 2|z| over |z| = R0, |c| = R on a dense grid;
        // the worst case |z|^2 - R - 2|z| = 0 is attained when c points
        // against z^2, so the grid oracle must find a nonnegative minimum.
        for r in [0.0f64, 0.25, 1.0, 4.0, 112.0, 1e4] {
            let r0 = escape_radius(r).radius;
            let mut min = f64::INFINITY;
            for i in 0..2000 {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / 2000.0;
                let z = Complex::from_polar(r0, theta);
                for j in 0..200 {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / 200.0;
                    let c = Complex::from_polar(r, phi);
                    min = min.min((z * z + c).norm() - 2.0 * z.norm());
                }
            }
            assert!(min >= -1e-9, "doubling violated at R = {r}: min {min}");
        }
    }

    #[test]
    fn escape_radius_one_nat_series_oracle() {
        // R/R0^2 <= 1/2 and the telescoping series for g - ln|z| stays
        // below one nat.
        for r in [0.0f64, 0.25, 1.0, 4.0, 112.0, 1e4, 1e6] {
            let r0 = escape_radius(r).radius;
            let ratio = r / (r0 * r0);
            assert!(ratio <= 0.5 + 1e-15, "R/R0^2 = {ratio} at R = {r}");
            let mut tail = 0.0f64;
            for k in 0..60 {
                let x = ratio * 0.25f64.powi(k);
                tail += 0.5f64.powi(k + 1) * (-(1.0 - x).ln());
            }
            assert!(tail < 1.0, "series sums to {tail} >= 1 at R = {r}");
        }
    }

    #[test]
    fn escape_radius_randomized_boundary_property() {
        // |z^2+c| >= 2|z| for 1e4 random (z, c) with |z| = R0, |c| <= R.
        let stream = SeedSpec::new(2024, 0).stream();
        for r in [0.5f64, 4.0] {
            let r0 = escape_radius(r).radius;
            for k in 0..10_000u64 {
                let z = Complex::from_polar(r0, 2.0 * std::f64::consts::PI * stream.unit_at(2 * k));
                let c = stream.unit_disc_at::<f64>(2_000_000 + k) * r;
                assert!((z * z + c).norm() >= 2.0 * z.norm() - 1e-9);
            }
        }
    }

    #[test]
    fn orbit_fixed_point_of_squaring() {
        let omega = seq(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let result = iterate_orbit(Complex::new(1.0, 0.0), &omega, 3).unwrap();
        assert_eq!(result, OrbitPoint::Point(Complex::new(1.0, 0.0)));
    }

    #[test]
    fn orbit_grows_through_c_equals_four() {
        let omega = seq(&[(4.0, 0.0), (4.0, 0.0)]);
        let result = iterate_orbit(Complex::new(0.0, 0.0), &omega, 2).unwrap();
        assert_eq!(result, OrbitPoint::Point(Complex::new(20.0, 0.0)));
    }

    #[test]
    fn orbit_periodic_for_minus_one() {
        // 0 -> -1 -> 0 -> -1 -> 0 under c = -1 (direct-evaluation oracle).
        let omega = seq(&[(-1.0, 0.0); 4]);
        let mut expected = Complex::new(0.0f64, 0.0);
        for k in 0..4u64 {
            expected = expected * expected + omega.param(k);
        }
        assert_eq!(expected, Complex::new(0.0, 0.0));
        let result = iterate_orbit(Complex::new(0.0, 0.0), &omega, 4).unwrap();
        assert_eq!(result, OrbitPoint::Point(expected));
    }

    #[test]
    fn orbit_prefix_too_short() {
        let omega = seq(&[(0.0, 0.0)]);
        assert!(matches!(
            iterate_orbit(Complex::new(0.0, 0.0), &omega, 2),
            Err(Error::PrefixTooShort { .. })
        ));
    }

    #[test]
    fn orbit_switches_to_log_domain() {
        let omega = seq(&[(0.0, 0.0); 12]);
        let z = Complex::new(1e30f64, 0.0);
        // |z|^(2^12) overflows by far; ln|f^12| = 2^12 ln(1e30).
        let result = iterate_orbit(z, &omega, 12).unwrap();
        match result {
            OrbitPoint::LogAbs(u) => {
                let expected = 4096.0 * (1e30f64).ln();
                assert!((u - expected).abs() < 1e-6 * expected);
            }
            OrbitPoint::Point(_) => panic!("expected log-domain continuation"),
        }
    }

    #[test]
    fn green_squaring_closed_form() {
        // c == 0: g(z) = ln|z| for |z| >= 1.
        let law = ParameterLaw::point_mass(Complex::new(0.0f64, 0.0));
        let escape = escape_radius(0.0);
        let source = LawStream::new(&law, SeedSpec::new(0, 0));
        let est = green_point(Complex::new(2.0, 0.0), &source, &escape, 1e-6, 1000);
        assert!(est.escaped);
        assert!((est.value - std::f64::consts::LN_2).abs() <= est.error_bound);
        assert!(est.error_bound <= 1e-6);
    }

    #[test]
    fn green_certified_error_across_tolerances() {
        let law = ParameterLaw::point_mass(Complex::new(0.0f64, 0.0));
        let escape = escape_radius(0.0);
        let source = LawStream::new(&law, SeedSpec::new(0, 0));
        let stream = SeedSpec::new(77, 0).stream();
        for tol in [1e-3, 1e-6, 1e-12] {
            for k in 0..200u64 {
                let modulus = 1.0 + 9.0 * stream.unit_at(k);
                let angle = 2.0 * std::f64::consts::PI * stream.unit_at(1000 + k);
                let z = Complex::from_polar(modulus, angle);
                let est = green_point(z, &source, &escape, tol, 1000);
                assert!(est.escaped, "|z| = {modulus} must escape");
                assert!(
                    (est.value - modulus.ln()).abs() <= est.error_bound,
                    "certificate violated at |z| = {modulus}, tol = {tol}"
                );
                assert!(est.error_bound <= tol);
            }
        }
    }

    #[test]
    fn green_inside_filled_julia_set_is_zero() {
        let law = ParameterLaw::point_mass(Complex::new(0.0f64, 0.0));
        let escape = escape_radius(0.0);
        let source = LawStream::new(&law, SeedSpec::new(0, 0));
        let est = green_point(Complex::new(0.5, 0.0), &source, &escape, 1e-9, 1000);
        assert!(!est.escaped);
        assert_eq!(est.value, 0.0);
        assert_eq!(est.error_bound, 0.0);
    }

    #[test]
    fn green_single_escape_step_then_squaring() {
        // omega = (4, 0, 0, ...): f^1 = 4, then pure squaring, so
        // g(0) = 2^{-1} ln 4 = ln 2 (closed form); the high-depth iteration
        // below is the confirming oracle. The explicit list cycles, so pad
        // it with enough zeros to cover the evaluation depth.
        let mut values = vec![Complex::new(4.0f64, 0.0)];
        values.extend(std::iter::repeat(Complex::new(0.0, 0.0)).take(127));
        let law = ParameterLaw::explicit_list(values, "inline").unwrap();
        let escape = escape_radius(4.0);
        let source = LawStream::new(&law, SeedSpec::new(0, 0));
        let tol = 1e-9;
        let est = green_point(Complex::new(0.0, 0.0), &source, &escape, tol, 1000);
        assert!(est.escaped);
        assert!((est.value - std::f64::consts::LN_2).abs() <= tol + 1e-12);

        // Oracle: direct log-domain iteration to depth 60.
        let mut z = Complex::new(0.0f64, 0.0);
        let mut log_abs = 0.0f64;
        let mut in_log = false;
        for k in 0..60u64 {
            if in_log {
                log_abs *= 2.0;
            } else {
                z = z * z + source.param(k);
                if z.norm() > 1e100 {
                    log_abs = z.norm().ln();
                    in_log = true;
                }
            }
        }
        let oracle = log_abs / 2f64.powi(60);
        assert!((est.value - oracle).abs() < 1e-9);
    }

    #[test]
    fn green_autonomous_four_matches_deep_oracle() {
        // Golden value frozen from the depth-60 log-domain oracle.
        let est = autonomous_green(Complex::new(0.0f64, 0.0), Complex::new(4.0, 0.0), 1e-9, 1000);
        assert!(est.escaped);
        assert!((est.value - 0.75017839144364418).abs() < 1e-9);

        let mut z = Complex::new(0.0f64, 0.0);
        let mut log_abs = 0.0f64;
        let mut in_log = false;
        for _ in 0..60 {
            if in_log {
                log_abs *= 2.0;
            } else {
                z = z * z + Complex::new(4.0, 0.0);
                if z.norm() > 1e100 {
                    log_abs = z.norm().ln();
                    in_log = true;
                }
            }
        }
        let oracle = log_abs / 2f64.powi(60);
        assert!(
            (est.value - oracle).abs() <= est.error_bound + 1e-15,
            "estimate {} vs oracle {oracle}",
            est.value
        );
    }

    #[test]
    fn green_one_nat_bound_outside_escape_radius() {
        // |g(z) - ln|z|| < 1 whenever |z| > R0 at depth 0, over random
        // escaped evaluations.
        let r = 1.0f64;
        let law = ParameterLaw::uniform_disc(Complex::new(0.0, 0.0), r);
        let escape = escape_radius(r);
        let stream = SeedSpec::new(5150, 0).stream();
        for i in 0..1000u64 {
            let source = LawStream::new(&law, SeedSpec::new(99, i));
            let modulus = escape.radius + 10.0 * stream.unit_at(2 * i);
            let angle = 2.0 * std::f64::consts::PI * stream.unit_at(2 * i + 1);
            let z = Complex::from_polar(modulus, angle);
            let est = green_point(z, &source, &escape, 1e-9, 1000);
            assert!(est.escaped);
            assert!(
                (est.value - modulus.ln()).abs() < 1.0,
                "one-nat bound violated: g = {}, ln|z| = {}",
                est.value,
                modulus.ln()
            );
        }
    }

    #[test]
    fn green_monotone_doubling_after_escape() {
        let r = 2.0f64;
        let law = ParameterLaw::uniform_disc(Complex::new(0.0, 0.0), r);
        let escape = escape_radius(r);
        for i in 0..100 {
            let omega = sample_prefix(&law, SeedSpec::new(31, i), 64);
            let mut z = Complex::new(3.5f64, 0.1);
            let mut prev_escaped = z.norm() > escape.radius;
            let mut prev_norm = z.norm();
            for k in 0..40u64 {
                z = z * z + omega.param(k);
                if z.norm() > 1e100 {
                    break;
                }
                if prev_escaped {
                    assert!(
                        z.norm() >= 2.0 * prev_norm - 1e-9,
                        "doubling violated at step {k}"
                    );
                }
                prev_escaped = z.norm() > escape.radius;
                prev_norm = z.norm();
            }
        }
    }

    #[test]
    fn green_estimates_are_bit_deterministic() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 3.0);
        let escape = escape_radius(3.0);
        for i in 0..32 {
            let a = green_point(
                Complex::new(0.0, 0.0),
                &LawStream::new(&law, SeedSpec::new(8, i)),
                &escape,
                1e-9,
                1000,
            );
            let b = green_point(
                Complex::new(0.0, 0.0),
                &LawStream::new(&law, SeedSpec::new(8, i)),
                &escape,
                1e-9,
                1000,
            );
            assert_eq!(a, b);
        }
    }

    #[test]
    fn functional_equation_exact_for_squaring() {
        let omega = seq(&[(0.0, 0.0); 8]);
        let escape = escape_radius(0.0);
        let check = green_functional_equation_residual(
            Complex::new(2.0, 0.0),
            &omega,
            &escape,
            1e-6,
            1000,
        )
        .unwrap();
        assert!(check.residual <= 3e-6);
        assert!(check.residual <= check.certified_budget);
    }

    #[test]
    fn functional_equation_on_shifted_escape() {
        // omega = (4, 0, ...): g_sigma(4) = ln 4 = 2 g(0) = 2 ln 2.
        let mut values = vec![Complex::new(4.0f64, 0.0)];
        values.extend(std::iter::repeat(Complex::new(0.0, 0.0)).take(63));
        let law = ParameterLaw::explicit_list(values, "inline").unwrap();
        let omega = sample_prefix(&law, SeedSpec::new(0, 0), 64);
        let escape = escape_radius(4.0);
        let check = green_functional_equation_residual(
            Complex::new(0.0, 0.0),
            &omega,
            &escape,
            1e-9,
            1000,
        )
        .unwrap();
        assert!(check.residual <= check.certified_budget);
    }

    #[test]
    fn functional_equation_random_property() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let escape = escape_radius(1.0);
        for i in 0..200 {
            let omega = sample_prefix(&law, SeedSpec::new(404, i), 8);
            let check = green_functional_equation_residual(
                Complex::new(3.0, 0.0),
                &omega,
                &escape,
                1e-9,
                1000,
            )
            .unwrap();
            assert!(
                check.residual <= check.certified_budget,
                "residual {} over budget {}",
                check.residual,
                check.certified_budget
            );
        }
    }

    #[test]
    fn functional_equation_rejects_non_escaping() {
        let omega = seq(&[(0.0, 0.0); 4]);
        let escape = escape_radius(0.0);
        assert!(matches!(
            green_functional_equation_residual(
                Complex::new(0.1, 0.0),
                &omega,
                &escape,
                1e-9,
                100,
            ),
            Err(Error::NonEscaping { .. })
        ));
    }

    #[test]
    fn mandelbrot_membership_checks() {
        assert!(mandelbrot_escapes(Complex::new(1.0f64, 0.0), 10_000));
        assert!(mandelbrot_escapes(Complex::new(4.0f64, 0.0), 10_000));
        assert!(!mandelbrot_escapes(Complex::new(0.0f64, 0.0), 10_000));
        assert!(!mandelbrot_escapes(Complex::new(-1.0f64, 0.0), 10_000));
    }

    #[test]
    fn perturbation_limit_for_unit_parameter_allows_criterion_deltas() {
        let limit = perturbation_radius_limit(Complex::new(1.0f64, 0.0), 10_000).unwrap();
        assert!(limit >= 0.05, "delta_0 = {limit}");
        assert!(limit <= 0.1 + 1e-12);
        assert!(matches!(
            perturbation_radius_limit(Complex::new(0.0f64, 0.0), 10_000),
            Err(Error::InsideMandelbrot { .. })
        ));
    }
}
