//! Sampling and exact finite-level construction of the equilibrium
//! (harmonic) measure `μ_ω`.
//!
//! `μ_ω` is the weak limit of the level-`n` preimage measures
//! `2^{−n} Σ_{y ∈ (fⁿ_ω)^{−1}(z₀)} δ_y` for any basepoint `z₀` in the
//! escaping region. Two constructions are provided: the exact preimage tree
//! (all `2ⁿ` branches, memory-capped) and independent backward-orbit samples
//! (one uniformly random branch per step), which scale to arbitrary depth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{ParameterSequence, ParameterSource};
use crate::seed::SeedSpec;
use crate::stats::{hausdorff, pairwise_sum};
use crate::{real, Complex, Real};

/// Memory cap for exact preimage trees (2^22 ≈ 4M atoms); beyond it,
/// backward sampling scales.
pub const DEFAULT_TREE_CAP: u32 = 22;

/// How a point cloud was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudKind {
    ExactTree,
    BackwardSamples,
}

/// Weighted sample points approximating `μ_ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurePointCloud<F> {
    pub points: Vec<Complex<F>>,
    /// Nonnegative weights summing to 1.
    pub weights: Vec<F>,
    /// Preimage level `n`.
    pub depth: u32,
    pub kind: CloudKind,
    /// Law grammar tag of the generating sequence.
    pub law_tag: String,
    pub seed: SeedSpec,
    pub basepoint: Complex<F>,
}

impl<F: Real> MeasurePointCloud<F> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> F {
        pairwise_sum(&self.weights)
    }
}

/// Both preimages of `w` under `z ↦ z² + c`: `{+s, −s}` with `s² = w − c`
/// and `s` the principal square root. `w = c` yields the double root `0`
/// twice.
#[inline]
pub fn preimage_step<F: Real>(w: Complex<F>, c: Complex<F>) -> (Complex<F>, Complex<F>) {
    let s = (w - c).sqrt();
    (s, -s)
}

/// All `2ⁿ` branches of `(fⁿ_ω)^{−1}(z₀)`, each with weight `2^{−n}`.
///
/// Branch order is deterministic: principal ("+") child first, depth-first.
/// Subtrees below a fixed split level are expanded in parallel and stitched
/// back in index order, so the atom layout is identical for every worker
/// count.
pub fn exact_preimage_tree<F: Real>(
    z0: Complex<F>,
    omega: &ParameterSequence<F>,
    n: u32,
    cap: u32,
) -> Result<MeasurePointCloud<F>> {
    if n > cap {
        return Err(Error::TreeTooDeep {
            requested: n,
            cap,
        });
    }
    // Parameters consumed at levels 0..n are c_{n-1}, ..., c_0.
    let mut points = Vec::with_capacity(1usize << n);
    let split = n.min(6);
    let mut frontier = vec![z0];
    for level in 0..split {
        let c = omega.param((n - 1 - level) as u64);
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for w in frontier {
            let (plus, minus) = preimage_step(w, c);
            next.push(plus);
            next.push(minus);
        }
        frontier = next;
    }
    if split == n {
        points = frontier;
    } else {
        let blocks: Vec<Vec<Complex<F>>> = frontier
            .par_iter()
            .map(|&root| {
                let mut block = Vec::with_capacity(1usize << (n - split));
                expand_depth_first(root, omega, split, n, &mut block);
                block
            })
            .collect();
        for block in blocks {
            points.extend(block);
        }
    }
    let weight = real::<F>(0.5).powi(n as i32);
    let weights = vec![weight; points.len()];
    Ok(MeasurePointCloud {
        points,
        weights,
        depth: n,
        kind: CloudKind::ExactTree,
        law_tag: omega.law_tag(),
        seed: omega.seed(),
        basepoint: z0,
    })
}

fn expand_depth_first<F: Real>(
    w: Complex<F>,
    omega: &ParameterSequence<F>,
    level: u32,
    n: u32,
    out: &mut Vec<Complex<F>>,
) {
    if level == n {
        out.push(w);
        return;
    }
    let (plus, minus) = preimage_step(w, omega.param((n - 1 - level) as u64));
    expand_depth_first(plus, omega, level + 1, n, out);
    expand_depth_first(minus, omega, level + 1, n, out);
}

/// One draw from the exact level-`n` preimage measure: starting at `z₀`,
/// apply [`preimage_step`] with parameters `c_{n−1}, …, c₀` in that order,
/// choosing a branch by a fair coin each step.
pub fn backward_orbit_sample<F: Real, S: ParameterSource<F> + ?Sized>(
    z0: Complex<F>,
    omega: &S,
    n: u32,
    seed: SeedSpec,
) -> Complex<F> {
    let coins = seed.stream();
    let mut w = z0;
    for step in 0..n {
        let c = omega.param((n - 1 - step) as u64);
        let (plus, minus) = preimage_step(w, c);
        w = if coins.coin_at(step as u64) { plus } else { minus };
    }
    w
}

/// A cloud of independent backward-orbit samples, one branch stream per
/// sample index starting at `coin_stream_base`.
pub fn backward_cloud<F: Real, S: ParameterSource<F> + Sync + ?Sized>(
    z0: Complex<F>,
    omega: &S,
    law_tag: String,
    n: u32,
    count: usize,
    master_seed: u64,
    coin_stream_base: u64,
) -> MeasurePointCloud<F> {
    let points: Vec<Complex<F>> = (0..count as u64)
        .into_par_iter()
        .map(|i| backward_orbit_sample(z0, omega, n, SeedSpec::new(master_seed, coin_stream_base + i)))
        .collect();
    let weight = F::one() / real::<F>(count as f64);
    MeasurePointCloud {
        weights: vec![weight; points.len()],
        points,
        depth: n,
        kind: CloudKind::BackwardSamples,
        law_tag,
        seed: SeedSpec::new(master_seed, coin_stream_base),
        basepoint: z0,
    }
}

/// Verify `μ_{σω} = μ_ω ∘ f_ω^{−1}` at finite level: push the level-`(n+1)`
/// atoms of `ω` forward through `f_ω` and compare, as multisets, with the
/// level-`n` atoms of `σω` (each of which must be hit exactly twice).
/// Returns the worst point-matching (Hausdorff) distance.
pub fn pushforward_check<F: Real>(
    omega: &ParameterSequence<F>,
    z0: Complex<F>,
    n: u32,
    cap: u32,
) -> Result<F> {
    let deep = exact_preimage_tree(z0, omega, n + 1, cap)?;
    let shifted = omega.shift(1)?;
    let shallow = exact_preimage_tree(z0, &shifted, n, cap)?;
    let c0 = omega.param(0);
    let pushed: Vec<Complex<F>> = deep.points.iter().map(|&z| z * z + c0).collect();
    Ok(hausdorff(&pushed, &shallow.points))
}

/// Level-`n` approximation of the fiber Lyapunov exponent
/// `χ_ω = ∫ ln|2z| dμ_ω(z)` from a weighted cloud: `Σ w_i ln|2 z_i|`.
pub fn lyapunov_from_measure<F: Real>(cloud: &MeasurePointCloud<F>) -> Result<F> {
    let floor = real::<F>(1e-300);
    let terms: Vec<F> = cloud
        .points
        .iter()
        .zip(&cloud.weights)
        .map(|(z, &w)| {
            let modulus = z.norm();
            if modulus < floor {
                Err(Error::AtomAtOrigin {
                    modulus: modulus.to_f64().unwrap_or(0.0),
                })
            } else {
                Ok(w * (real::<F>(2.0) * modulus).ln())
            }
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{autonomous_green, escape_radius};
    use crate::law::{sample_prefix, ParameterLaw};
    use crate::stats::{ks_two_sample, ks_uniform};
    use proptest::prelude::*;

    fn squaring_seq(len: usize) -> ParameterSequence<f64> {
        let law = ParameterLaw::point_mass(Complex::new(0.0f64, 0.0));
        sample_prefix(&law, SeedSpec::new(0, 0), len)
    }

    #[test]
    fn preimage_step_basic_roots() {
        let (p, m) = preimage_step(Complex::new(4.0f64, 0.0), Complex::new(0.0, 0.0));
        assert_eq!(p, Complex::new(2.0, 0.0));
        assert_eq!(m, Complex::new(-2.0, 0.0));

        let c = Complex::new(0.7f64, -0.3);
        let (p, m) = preimage_step(c, c);
        assert_eq!(p, Complex::new(0.0, 0.0));
        assert_eq!(m, Complex::new(0.0, 0.0));

        let (p, m) = preimage_step(Complex::new(0.0f64, 0.0), Complex::new(-1.0, 0.0));
        assert_eq!(p, Complex::new(1.0, 0.0));
        assert_eq!(m, Complex::new(-1.0, 0.0));
    }

    proptest! {
        #[test]
        fn preimage_step_children_square_back(
            wre in -10.0f64..10.0, wim in -10.0f64..10.0,
            cre in -4.0f64..4.0, cim in -4.0f64..4.0,
        ) {
            let w = Complex::new(wre, wim);
            let c = Complex::new(cre, cim);
            let (p, m) = preimage_step(w, c);
            prop_assert!((p * p + c - w).norm() < 1e-9);
            prop_assert!((m * m + c - w).norm() < 1e-9);
            prop_assert!((p + m).norm() < 1e-12);
            // Principal branch first: nonnegative real part.
            prop_assert!(p.re >= -1e-12 || (p.re.abs() < 1e-12 && p.im >= 0.0));
        }
    }

    #[test]
    fn tree_level_one_square_roots_of_two() {
        let omega = squaring_seq(4);
        let cloud = exact_preimage_tree(Complex::new(2.0, 0.0), &omega, 1, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(cloud.len(), 2);
        let s = 2f64.sqrt();
        assert!((cloud.points[0] - Complex::new(s, 0.0)).norm() < 1e-15);
        assert!((cloud.points[1] - Complex::new(-s, 0.0)).norm() < 1e-15);
        assert_eq!(cloud.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn tree_depth_k_has_all_roots_on_shrinking_circle() {
        // c == 0, z0 = 2: level-k atoms are the 2^k roots of z^(2^k) = 2,
        // all of modulus 2^(2^-k).
        let omega = squaring_seq(10);
        for k in [3u32, 7] {
            let cloud =
                exact_preimage_tree(Complex::new(2.0, 0.0), &omega, k, DEFAULT_TREE_CAP).unwrap();
            assert_eq!(cloud.len(), 1 << k);
            let expected = 2f64.powf(2f64.powi(-(k as i32)));
            for z in &cloud.points {
                assert!((z.norm() - expected).abs() < 1e-12);
            }
            // Distinct roots: minimum pairwise distance is positive.
            let mut min = f64::INFINITY;
            for i in 0..cloud.len() {
                for j in 0..i {
                    min = min.min((cloud.points[i] - cloud.points[j]).norm());
                }
            }
            assert!(min > 1e-6);
        }
    }

    #[test]
    fn tree_fourth_roots_of_unity() {
        // omega = (0, 1): f^2 = (z^2)^2 + 1, so the level-2 tree of z0 = 2
        // is the set of fourth roots of unity.
        let law = ParameterLaw::explicit_list(
            vec![Complex::new(0.0f64, 0.0), Complex::new(1.0, 0.0)],
            "inline",
        )
        .unwrap();
        let omega = sample_prefix(&law, SeedSpec::new(0, 0), 2);
        let cloud = exact_preimage_tree(Complex::new(2.0, 0.0), &omega, 2, DEFAULT_TREE_CAP).unwrap();
        let mut expected = vec![
            Complex::new(1.0, 0.0),
            Complex::new(-1.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(0.0, -1.0),
        ];
        // Multiset comparison at 1e-12.
        let mut got = cloud.points.clone();
        for e in &mut expected {
            let (idx, _) = got
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    (*a.1 - *e)
                        .norm()
                        .partial_cmp(&(*b.1 - *e).norm())
                        .unwrap()
                })
                .unwrap();
            assert!((got[idx] - *e).norm() < 1e-12, "missing root {e}");
            got.remove(idx);
        }
        assert!(got.is_empty());
    }

    #[test]
    fn tree_depth_cap_enforced() {
        let omega = squaring_seq(30);
        assert!(matches!(
            exact_preimage_tree(Complex::new(2.0, 0.0), &omega, 23, DEFAULT_TREE_CAP),
            Err(Error::TreeTooDeep { .. })
        ));
    }

    #[test]
    fn tree_weights_sum_to_one_at_every_depth() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let omega = sample_prefix(&law, SeedSpec::new(17, 0), 12);
        let escape = escape_radius(1.0);
        for n in 0..=12 {
            let cloud =
                exact_preimage_tree(escape.default_basepoint(), &omega, n, DEFAULT_TREE_CAP)
                    .unwrap();
            assert!((cloud.total_weight() - 1.0).abs() < 1e-12);
            assert_eq!(cloud.len(), 1usize << n);
        }
    }

    #[test]
    fn tree_atoms_contract_into_escape_disc() {
        // Once n >= 1 and |z0| <= 2 R0, every atom lies in D(0, R0).
        let r = 2.0f64;
        let law = ParameterLaw::uniform_disc(Complex::new(0.0, 0.0), r);
        let escape = escape_radius(r);
        for i in 0..20 {
            let omega = sample_prefix(&law, SeedSpec::new(23, i), 8);
            let z0 = Complex::new(1.9 * escape.radius, 0.3);
            let cloud = exact_preimage_tree(z0, &omega, 8, DEFAULT_TREE_CAP).unwrap();
            for z in &cloud.points {
                assert!(z.norm() <= escape.radius + 1e-12);
            }
        }
    }

    #[test]
    fn tree_parallel_split_matches_sequential_order() {
        // Depth > split level exercises the parallel path; a manual
        // sequential DFS is the order oracle.
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let omega = sample_prefix(&law, SeedSpec::new(29, 0), 9);
        let z0 = Complex::new(3.0, 0.0);
        let n = 9u32;
        let cloud = exact_preimage_tree(z0, &omega, n, DEFAULT_TREE_CAP).unwrap();
        let mut expected = Vec::new();
        expand_depth_first(z0, &omega, 0, n, &mut expected);
        assert_eq!(cloud.points, expected);
    }

    #[test]
    fn backward_sample_depth_one_is_a_preimage() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        for i in 0..50 {
            let omega = sample_prefix(&law, SeedSpec::new(37, i), 1);
            let z0 = Complex::new(3.0, 0.5);
            let sample = backward_orbit_sample(z0, &omega, 1, SeedSpec::new(91, i));
            let (p, m) = preimage_step(z0, omega.param(0));
            assert!(sample == p || sample == m);
        }
    }

    #[test]
    fn backward_samples_land_on_unit_circle_for_squaring() {
        let omega = squaring_seq(0);
        for i in 0..200 {
            let z = backward_orbit_sample(
                Complex::new(2.0, 0.0),
                &omega,
                30,
                SeedSpec::new(5, i),
            );
            let expected_max = 2f64.powf(2f64.powi(-30));
            assert!(z.norm() >= 1.0 - 1e-12 && z.norm() <= expected_max + 1e-12);
        }
    }

    #[test]
    fn backward_sample_angles_uniform_for_squaring() {
        // The equilibrium measure of z^2 is the uniform measure on the unit
        // circle; check the angular KS statistic at the 1% level.
        let omega = squaring_seq(0);
        let n = 100_000u64;
        let angles: Vec<f64> = (0..n)
            .map(|i| {
                let z = backward_orbit_sample(
                    Complex::new(2.0, 0.0),
                    &omega,
                    30,
                    SeedSpec::new(6, i),
                );
                (z.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
            })
            .collect();
        let d = ks_uniform(&angles);
        assert!(d < 1.63 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn backward_sample_depth_convergence() {
        // Angular empirical measures at depths n and n+5 agree within KS
        // distance 0.02 for the squaring map.
        let omega = squaring_seq(0);
        let count = 20_000u64;
        let angle_cloud = |depth: u32, base: u64| -> Vec<f64> {
            (0..count)
                .map(|i| {
                    backward_orbit_sample(
                        Complex::new(2.0, 0.0),
                        &omega,
                        depth,
                        SeedSpec::new(7, base + i),
                    )
                    .arg()
                })
                .collect()
        };
        let a = angle_cloud(25, 0);
        let b = angle_cloud(30, count);
        assert!(ks_two_sample(&a, &b) < 0.02);
    }

    #[test]
    fn backward_sample_basepoint_independence() {
        // Clouds from z0 = 2 and z0 = 3 + i agree in angular KS distance at
        // depth 30.
        let omega = squaring_seq(0);
        let count = 20_000u64;
        let cloud = |z0: Complex<f64>, base: u64| -> Vec<f64> {
            (0..count)
                .map(|i| {
                    backward_orbit_sample(z0, &omega, 30, SeedSpec::new(8, base + i)).arg()
                })
                .collect()
        };
        let a = cloud(Complex::new(2.0, 0.0), 0);
        let b = cloud(Complex::new(3.0, 1.0), count);
        assert!(ks_two_sample(&a, &b) < 0.02);
    }

    #[test]
    fn pushforward_identity_exact_for_squaring() {
        let omega = squaring_seq(12);
        for n in 0..=10 {
            let d = pushforward_check(&omega, Complex::new(2.0, 0.0), n, DEFAULT_TREE_CAP).unwrap();
            assert!(d < 1e-10, "discrepancy {d} at depth {n}");
        }
    }

    #[test]
    fn pushforward_identity_random_property() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let escape = escape_radius(1.0);
        for i in 0..25 {
            let omega = sample_prefix(&law, SeedSpec::new(53, i), 10);
            let d = pushforward_check(&omega, escape.default_basepoint(), 8, DEFAULT_TREE_CAP)
                .unwrap();
            assert!(d < 1e-9, "discrepancy {d} for stream {i}");
        }
    }

    #[test]
    fn pushforward_depth_zero_maps_atoms_to_basepoint() {
        let law = ParameterLaw::uniform_disc(Complex::new(0.0f64, 0.0), 1.0);
        let omega = sample_prefix(&law, SeedSpec::new(61, 0), 2);
        let d = pushforward_check(&omega, Complex::new(3.0, 0.0), 0, DEFAULT_TREE_CAP).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn lyapunov_of_circle_cloud_is_ln_two() {
        // Integral of ln|2z| over the unit circle equals ln 2. Level-n atoms
        // of the squaring map carry modulus 2^(2^-n), so the finite-depth
        // bias is 2^-n ln 2 and depth 20 brings it under 1e-6.
        let omega = squaring_seq(20);
        let cloud =
            exact_preimage_tree(Complex::new(2.0, 0.0), &omega, 20, DEFAULT_TREE_CAP).unwrap();
        let chi = lyapunov_from_measure(&cloud).unwrap();
        assert!((chi - std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn lyapunov_single_atom() {
        let cloud = MeasurePointCloud {
            points: vec![Complex::new(1.0f64, 0.0)],
            weights: vec![1.0],
            depth: 0,
            kind: CloudKind::ExactTree,
            law_tag: "point(0,0)".into(),
            seed: SeedSpec::new(0, 0),
            basepoint: Complex::new(1.0, 0.0),
        };
        let chi = lyapunov_from_measure(&cloud).unwrap();
        assert!((chi - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn lyapunov_rejects_atom_at_origin() {
        let cloud = MeasurePointCloud {
            points: vec![Complex::new(0.0f64, 0.0)],
            weights: vec![1.0],
            depth: 0,
            kind: CloudKind::ExactTree,
            law_tag: "point(0,0)".into(),
            seed: SeedSpec::new(0, 0),
            basepoint: Complex::new(1.0, 0.0),
        };
        assert!(matches!(
            lyapunov_from_measure(&cloud),
            Err(Error::AtomAtOrigin { .. })
        ));
    }

    #[test]
    fn lyapunov_matches_exponent_identity_for_autonomous_four() {
        // chi = ln 2 + g_4(0) via the measure-side estimate at depth 16,
        // cross-checked against the pointwise Green oracle.
        let law = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let omega = sample_prefix(&law, SeedSpec::new(0, 0), 16);
        let escape = escape_radius(4.0);
        let cloud =
            exact_preimage_tree(escape.default_basepoint(), &omega, 16, DEFAULT_TREE_CAP).unwrap();
        let chi = lyapunov_from_measure(&cloud).unwrap();
        let g = autonomous_green(Complex::new(0.0, 0.0), Complex::new(4.0, 0.0), 1e-12, 1000);
        assert!(
            (chi - (std::f64::consts::LN_2 + g.value)).abs() < 0.01,
            "chi {chi} vs ln2 + g = {}",
            std::f64::consts::LN_2 + g.value
        );
    }

    #[test]
    fn lyapunov_depth_convergence_for_autonomous_four() {
        let law = ParameterLaw::point_mass(Complex::new(4.0f64, 0.0));
        let omega = sample_prefix(&law, SeedSpec::new(0, 0), 20);
        let escape = escape_radius(4.0);
        let chi_at = |n: u32| {
            let cloud =
                exact_preimage_tree(escape.default_basepoint(), &omega, n, DEFAULT_TREE_CAP)
                    .unwrap();
            lyapunov_from_measure(&cloud).unwrap()
        };
        let chi16 = chi_at(16);
        let chi20 = chi_at(20);
        assert!((chi20 - chi16).abs() < 0.01);
    }
}
