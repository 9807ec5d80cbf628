//! Maps each CLI command onto exactly one library operation, resolves its
//! configuration, and assembles the report, tables, and claims.

use serde_json::json;

use randquad::dynamics::{
    escape_radius, green_point, DEFAULT_DEPTH_CAP, DEFAULT_TOL,
};
use randquad::global::{
    asymptotic_check, autonomous_reference_cloud, circle_average_checks, continuity_scan,
    dimension_report, fast_escape_fit, global_green, harmonicity_check,
    local_dimension_experiment, perturbation_constancy, stability_check, CONFIDENCE_SIGMAS,
};
use randquad::law::LawStream;
use randquad::render::{julia_point_cloud, write_cloud_csv};
use randquad::seed::SeedSpec;
use randquad::suite::{self, Budget, Claim, DEFAULT_MASTER_SEED};
use randquad::{Complex64, ParameterLaw64};

use crate::config::{Config, Resolver};
use crate::output::{csv_table, fmt, Artifacts, Report};
use crate::{parse_law, CliError, Result};

/// Flag values collected by the argument parser; `None` falls through to the
/// config file and then to the documented default.
#[derive(Debug, Default, Clone)]
pub struct Flags {
    pub law: Option<String>,
    pub z: Option<(f64, f64)>,
    pub c0: Option<(f64, f64)>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub targets: Option<usize>,
    pub omegas: Option<usize>,
    pub points: Option<usize>,
    pub reference_points: Option<usize>,
    pub depth: Option<u32>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub k_min: Option<u32>,
    pub k_max: Option<u32>,
    pub rotations: Option<u32>,
    pub radius: Option<f64>,
    pub delta: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub steps: Option<Vec<f64>>,
    pub r_list: Option<Vec<f64>>,
    pub budget: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub depth_cap: Option<u32>,
}

/// Output of one executed command.
pub struct Outcome {
    pub report: Report,
    pub resolved: Config,
    pub artifacts: Artifacts,
    /// Human-readable summary printed to stdout.
    pub lines: Vec<String>,
}

/// Execute `command` with the given flags over an optional config file.
pub fn execute(command: &str, flags: &Flags, file: &Config) -> Result<Outcome> {
    if let Some(configured) = file.get("command") {
        if configured != command {
            return Err(CliError::field(
                "command",
                format!("config file says `{configured}`, invoked `{command}`"),
            ));
        }
    }
    let mut resolver = Resolver::new(file);
    resolver.resolved.set("command", command);
    let outcome = match command {
        "green-point" => green_point_cmd(flags, &mut resolver)?,
        "global-green" => global_green_cmd(flags, &mut resolver)?,
        "dimension" => dimension_cmd(flags, &mut resolver)?,
        "sweep-r" => sweep_r_cmd(flags, &mut resolver)?,
        "asymptotics" => asymptotics_cmd(flags, &mut resolver)?,
        "fast-escape" => fast_escape_cmd(flags, &mut resolver)?,
        "perturb" => perturb_cmd(flags, &mut resolver)?,
        "harmonicity" => harmonicity_cmd(flags, &mut resolver)?,
        "stability" => stability_cmd(flags, &mut resolver)?,
        "julia-render" => julia_render_cmd(flags, &mut resolver)?,
        "local-dim" => local_dim_cmd(flags, &mut resolver)?,
        "verify-all" => verify_all_cmd(flags, &mut resolver)?,
        other => return Err(CliError::field("command", format!("unknown command `{other}`"))),
    };
    Ok(outcome)
}

struct Common {
    seed: u64,
    tol: f64,
    depth_cap: u32,
}

fn common(flags: &Flags, r: &mut Resolver) -> Result<Common> {
    Ok(Common {
        seed: r.parsed("seed", flags.seed, DEFAULT_MASTER_SEED)?,
        tol: r.parsed("tol", flags.tol, DEFAULT_TOL)?,
        depth_cap: r.parsed("depth_cap", flags.depth_cap, DEFAULT_DEPTH_CAP)?,
    })
}

fn resolve_law(flags: &Flags, r: &mut Resolver, default: &str) -> Result<ParameterLaw64> {
    let text = r.string("law", flags.law.as_deref(), default);
    let law = parse_law(&text)?;
    // Echo the canonical grammar form.
    r.resolved.set("law", law.tag());
    Ok(law)
}

fn build(
    command: &str,
    resolver: &mut Resolver,
    results: serde_json::Value,
    claims: Vec<Claim>,
    artifacts: Artifacts,
    lines: Vec<String>,
) -> Result<Outcome> {
    let resolved = resolver.finish(&["command"])?;
    let pass = claims.iter().all(|c| c.pass);
    Ok(Outcome {
        report: Report {
            command: command.into(),
            config: resolved.entries().clone(),
            results,
            claims,
            pass,
        },
        resolved,
        artifacts,
        lines,
    })
}

fn claim_at_most(name: impl Into<String>, observed: f64, threshold: f64) -> Claim {
    Claim {
        name: name.into(),
        observed,
        threshold,
        pass: observed <= threshold,
    }
}

fn claim_bool(name: impl Into<String>, pass: bool) -> Claim {
    Claim {
        name: name.into(),
        observed: if pass { 1.0 } else { 0.0 },
        threshold: 1.0,
        pass,
    }
}

fn green_point_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "point(0,0)")?;
    let (zre, zim) = r.complex("z", flags.z, (2.0, 0.0))?;
    let escape = escape_radius(law.radius_bound());
    let est = green_point(
        Complex64::new(zre, zim),
        &LawStream::new(&law, SeedSpec::new(c.seed, 0)),
        &escape,
        c.tol,
        c.depth_cap,
    );
    let table = csv_table(
        &["value", "error_bound", "escape_depth", "escaped", "log_abs_iterate"],
        &[vec![
            fmt(est.value),
            fmt(est.error_bound),
            est.escape_depth.to_string(),
            est.escaped.to_string(),
            fmt(est.log_abs_iterate),
        ]],
    );
    let lines = vec![format!(
        "g(z) = {} +/- {} ({})",
        fmt(est.value),
        fmt(est.error_bound),
        if est.escaped { "escaped" } else { "no escape within depth cap" }
    )];
    build(
        "green-point",
        r,
        json!({ "estimate": est, "escape_radius": escape }),
        vec![],
        Artifacts {
            tables: vec![("green_point".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn global_green_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "uniform(0,0,4)")?;
    let n = r.parsed("n", flags.n, 10_000)?;
    let estimate = global_green(&law, n, c.tol, c.depth_cap, c.seed);
    let escape = escape_radius(law.radius_bound());
    let cap = escape.radius.ln() + 1.0;
    let claims = vec![claim_at_most("mean within ln R0 + 1", estimate.mean, cap)];
    let table = csv_table(
        &["mean", "stderr", "samples", "non_escape_fraction", "truncation_bound"],
        &[vec![
            fmt(estimate.mean),
            fmt(estimate.stderr),
            estimate.samples.to_string(),
            fmt(estimate.non_escape_fraction),
            fmt(estimate.truncation_bound),
        ]],
    );
    let lines = vec![format!(
        "g(0) = {} +/- {} (N = {}, non-escape fraction {})",
        fmt(estimate.mean),
        fmt(estimate.stderr),
        estimate.samples,
        fmt(estimate.non_escape_fraction)
    )];
    build(
        "global-green",
        r,
        json!({ "global_green": estimate }),
        claims,
        Artifacts {
            tables: vec![("global_green".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn dimension_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "uniform(0,0,4)")?;
    let n = r.parsed("n", flags.n, 10_000)?;
    let report = dimension_report(&law, n, c.tol, c.depth_cap, c.seed);
    let mut claims = vec![
        claim_bool(
            "dimension in (0, 1]",
            report.dimension > 0.0 && report.dimension <= 1.0,
        ),
    ];
    let escape = escape_radius(law.radius_bound());
    if report.g0.mean <= escape.radius.ln() {
        claims.push(claim_bool(
            "dimension above Hoelder floor",
            report.dimension >= report.hoelder_floor,
        ));
    }
    let table = csv_table(
        &["g0", "g0_stderr", "chi", "dimension", "dim_ci_low", "dim_ci_high", "hoelder_floor"],
        &[vec![
            fmt(report.g0.mean),
            fmt(report.g0.stderr),
            fmt(report.chi),
            fmt(report.dimension),
            fmt(report.dim_ci.0),
            fmt(report.dim_ci.1),
            fmt(report.hoelder_floor),
        ]],
    );
    let lines = vec![format!(
        "g(0) = {} +/- {}  chi = {}  dim = {}  alpha0 = {}",
        fmt(report.g0.mean),
        fmt(report.g0.stderr),
        fmt(report.chi),
        fmt(report.dimension),
        fmt(report.hoelder_floor)
    )];
    build(
        "dimension",
        r,
        json!({ "dimension_report": report }),
        claims,
        Artifacts {
            tables: vec![("dimension".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn sweep_r_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let r_grid = r.float_list("r_grid", flags.r_grid.as_deref(), &[0.5, 2.0, 8.0])?;
    let steps = r.float_list("h", flags.steps.as_deref(), &[0.1, 0.05, 0.025])?;
    let n = r.parsed("n", flags.n, 5_000)?;
    let scans: Vec<_> = steps
        .iter()
        .map(|&h| continuity_scan(&r_grid, h, n, c.tol, c.depth_cap, c.seed))
        .collect();
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for scan in &scans {
        for row in scan {
            csv_rows.push(vec![
                fmt(row.radius),
                fmt(row.step),
                fmt(row.g_r),
                fmt(row.g_r_plus_h),
                fmt(row.diff),
                fmt(row.diff_stderr),
            ]);
            rows.push(row);
        }
    }
    let mut claims = Vec::new();
    if steps.len() >= 2 {
        for (r_idx, &radius) in r_grid.iter().enumerate() {
            for s in 0..steps.len() - 1 {
                let coarse = &scans[s][r_idx];
                let fine = &scans[s + 1][r_idx];
                let noise = CONFIDENCE_SIGMAS
                    * (coarse.diff_stderr.powi(2) + fine.diff_stderr.powi(2)).sqrt();
                claims.push(claim_at_most(
                    format!(
                        "coupled difference shrinks from h = {} to h = {} at R = {radius}",
                        steps[s],
                        steps[s + 1]
                    ),
                    fine.diff.abs(),
                    coarse.diff.abs() + noise,
                ));
            }
        }
    }
    let table = csv_table(
        &["r", "h", "g_r", "g_r_plus_h", "diff", "diff_stderr"],
        &csv_rows,
    );
    let lines = rows
        .iter()
        .map(|row| {
            format!(
                "R = {:<6} h = {:<6} diff = {} +/- {}",
                fmt(row.radius),
                fmt(row.step),
                fmt(row.diff),
                fmt(row.diff_stderr)
            )
        })
        .collect();
    build(
        "sweep-r",
        r,
        json!({ "rows": rows }),
        claims,
        Artifacts {
            tables: vec![("sweep_r".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn asymptotics_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let r_list = r.float_list("r_list", flags.r_list.as_deref(), &[1e2, 1e4, 1e6])?;
    let delta = r.parsed("delta", flags.delta, 0.1)?;
    let n = r.parsed("n", flags.n, 10_000)?;
    let rows = asymptotic_check(&r_list, delta, n, c.tol, c.depth_cap, c.seed)?;
    let mut claims = Vec::new();
    for row in &rows {
        claims.push(claim_bool(
            format!("ratio in [0.40, 0.60] at R = {}", fmt(row.radius)),
            row.ratio >= 0.40 && row.ratio <= 0.60,
        ));
    }
    for pair in rows.windows(2) {
        claims.push(claim_at_most(
            format!(
                "|ratio - 1/2| non-increasing from R = {} to R = {}",
                fmt(pair[0].radius),
                fmt(pair[1].radius)
            ),
            (pair[1].ratio - 0.5).abs(),
            (pair[0].ratio - 0.5).abs(),
        ));
    }
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                fmt(row.radius),
                fmt(row.estimate),
                fmt(row.stderr),
                fmt(row.ratio),
                fmt(row.lower_bound),
                fmt(row.upper_bound),
            ]
        })
        .collect();
    let table = csv_table(
        &["r", "g_hat", "stderr", "ratio", "lower_bound", "upper_bound"],
        &csv_rows,
    );
    let lines = rows
        .iter()
        .map(|row| {
            format!(
                "R = {:<10} g_hat = {} ratio = {} sandwich [{}, {}]",
                fmt(row.radius),
                fmt(row.estimate),
                fmt(row.ratio),
                fmt(row.lower_bound),
                fmt(row.upper_bound)
            )
        })
        .collect();
    build(
        "asymptotics",
        r,
        json!({ "rows": rows }),
        claims,
        Artifacts {
            tables: vec![("asymptotics".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn fast_escape_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "uniform(0,0,1)")?;
    let k_min = r.parsed("k_min", flags.k_min, 1)?;
    let k_max = r.parsed("k_max", flags.k_max, 8)?;
    let n = r.parsed("n", flags.n, 20_000)?;
    if k_min > k_max {
        return Err(CliError::field("k_min", "k_min must not exceed k_max"));
    }
    let fit = fast_escape_fit(&law, k_min..=k_max, n, c.tol, c.depth_cap, c.seed, 10);
    let monotone = fit.probabilities.windows(2).all(|w| w[1] <= w[0]);
    let claims = vec![claim_bool("tail probabilities non-increasing", monotone)];
    let csv_rows: Vec<Vec<String>> = fit
        .k_values
        .iter()
        .zip(&fit.probabilities)
        .map(|(k, p)| vec![k.to_string(), fmt(*p)])
        .collect();
    let table = csv_table(&["k", "probability"], &csv_rows);
    let gamma_text = fit
        .gamma_hat
        .map(|g| fmt(g))
        .unwrap_or_else(|| "inf".into());
    let lines = vec![format!(
        "gamma_hat = {gamma_text} (R^2 = {}, fitted over {} thresholds)",
        fmt(fit.fit_quality),
        fit.k_fitted.len()
    )];
    build(
        "fast-escape",
        r,
        json!({ "fit": fit }),
        claims,
        Artifacts {
            tables: vec![("fast_escape".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn perturb_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let (c0re, c0im) = r.complex("c0", flags.c0, (1.0, 0.0))?;
    let deltas = r.float_list("deltas", flags.deltas.as_deref(), &[0.01, 0.03, 0.05])?;
    let n = r.parsed("n", flags.n, 10_000)?;
    let result = perturbation_constancy(
        Complex64::new(c0re, c0im),
        &deltas,
        n,
        c.tol,
        c.depth_cap,
        c.seed,
    )?;
    let mut claims = Vec::new();
    for row in &result.rows {
        claims.push(claim_at_most(
            format!("|g_delta - g_c0| at delta = {}", fmt(row.delta)),
            row.deviation,
            row.budget,
        ));
    }
    for pair in &result.rotation_pairs {
        claims.push(claim_bool(
            format!("rotation pair agreement at delta = {}", fmt(pair.delta)),
            pair.pass,
        ));
    }
    let csv_rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|row| {
            vec![
                fmt(row.delta),
                fmt(row.estimate),
                fmt(row.stderr),
                fmt(row.deviation),
                fmt(row.budget),
            ]
        })
        .collect();
    let table = csv_table(&["delta", "g_hat", "stderr", "deviation", "budget"], &csv_rows);
    let lines = vec![format!(
        "g_c0(0) = {}; delta_0 = {}; all rows within budget: {}",
        fmt(result.reference),
        fmt(result.delta_limit),
        result.pass
    )];
    build(
        "perturb",
        r,
        json!({ "perturbation": result }),
        claims,
        Artifacts {
            tables: vec![("perturb".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn harmonicity_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let (c0re, c0im) = r.complex("c0", flags.c0, (1.0, 0.0))?;
    let radius = r.parsed("r", flags.radius, 0.03)?;
    let rotations = r.parsed("m", flags.rotations, 16)?;
    let n = r.parsed("n", flags.n, 5_000)?;
    let omegas = r.parsed("omegas", flags.omegas, 100)?;
    let c0 = Complex64::new(c0re, c0im);
    let pooled = harmonicity_check(c0, radius, rotations, n, c.tol, c.depth_cap, c.seed);
    let per_omega = circle_average_checks(
        c0,
        radius,
        rotations,
        omegas,
        c.tol,
        c.depth_cap,
        c.seed ^ 0x09,
    );
    let worst = per_omega
        .iter()
        .map(|chk| chk.residual - chk.budget)
        .fold(f64::NEG_INFINITY, f64::max);
    let claims = vec![
        claim_at_most(
            "pooled mean-value residual",
            pooled.residual,
            CONFIDENCE_SIGMAS * pooled.pooled_stderr + pooled.allowance,
        ),
        claim_at_most("max per-omega residual minus budget", worst, 0.0),
    ];
    let csv_rows: Vec<Vec<String>> = per_omega
        .iter()
        .map(|chk| {
            vec![
                chk.omega_index.to_string(),
                fmt(chk.residual),
                fmt(chk.budget),
                chk.pass.to_string(),
            ]
        })
        .collect();
    let table = csv_table(&["omega_index", "residual", "budget", "pass"], &csv_rows);
    let lines = vec![format!(
        "pooled residual {} (4*stderr = {}), worst per-omega excess {}",
        fmt(pooled.residual),
        fmt(CONFIDENCE_SIGMAS * pooled.pooled_stderr),
        fmt(worst)
    )];
    build(
        "harmonicity",
        r,
        json!({ "pooled": pooled, "per_omega": per_omega }),
        claims,
        Artifacts {
            tables: vec![("harmonicity".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn stability_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let (c0re, c0im) = r.complex("c0", flags.c0, (1.0, 0.0))?;
    let mut deltas = r.float_list("deltas", flags.deltas.as_deref(), &[0.05, 0.02, 0.01])?;
    deltas.sort_by(|a, b| b.partial_cmp(a).expect("finite deltas"));
    let points = r.parsed("points", flags.points, 2_000)?;
    let reference_points = r.parsed("reference_points", flags.reference_points, 4_096)?;
    let depth = r.parsed("depth", flags.depth, 24)?;
    let c0 = Complex64::new(c0re, c0im);
    let reference = autonomous_reference_cloud(c0, depth, reference_points, c.seed);
    let checks: Vec<_> = deltas
        .iter()
        .map(|&d| stability_check(c0, d, points, depth, c.seed ^ 0x12, &reference))
        .collect();
    let mut claims = Vec::new();
    if checks.len() >= 2 {
        let first = checks.first().expect("non-empty");
        let last = checks.last().expect("non-empty");
        claims.push(claim_at_most(
            format!(
                "distance shrinks from delta = {} to delta = {}",
                fmt(first.delta),
                fmt(last.delta)
            ),
            last.hausdorff_distance,
            first.hausdorff_distance,
        ));
    }
    let csv_rows: Vec<Vec<String>> = checks
        .iter()
        .map(|chk| {
            vec![
                fmt(chk.delta),
                fmt(chk.hausdorff_distance),
                fmt(chk.min_modulus),
                chk.sample_count.to_string(),
            ]
        })
        .collect();
    let table = csv_table(
        &["delta", "hausdorff_distance", "min_modulus", "samples"],
        &csv_rows,
    );
    let lines = checks
        .iter()
        .map(|chk| {
            format!(
                "delta = {:<6} distance = {} min |z| = {}",
                fmt(chk.delta),
                fmt(chk.hausdorff_distance),
                fmt(chk.min_modulus)
            )
        })
        .collect();
    build(
        "stability",
        r,
        json!({ "checks": checks }),
        claims,
        Artifacts {
            tables: vec![("stability".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn julia_render_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "point(-1,0)")?;
    let depth = r.parsed("depth", flags.depth, 30)?;
    let samples = r.parsed("samples", flags.samples, 100_000)?;
    let width = r.parsed("width", flags.width, 800)?;
    let height = r.parsed("height", flags.height, 800)?;
    let escape = escape_radius(law.radius_bound());
    let omega = randquad::law::sample_prefix(&law, SeedSpec::new(c.seed, 0), 0);
    let (cloud, raster) = julia_point_cloud(
        escape.default_basepoint(),
        &omega,
        law.tag(),
        depth,
        samples,
        c.seed,
        width,
        height,
    );
    let mut points_csv = Vec::new();
    write_cloud_csv(&cloud, &mut points_csv)?;
    let mut pgm = Vec::new();
    {
        use std::io::Write;
        write!(pgm, "P5\n{} {}\n255\n", raster.width, raster.height)?;
        pgm.write_all(&raster.to_grey())?;
    }
    let sidecar = serde_json::to_string_pretty(&raster).expect("raster serializes") + "\n";
    let claims = vec![claim_bool(
        "raster dimensions match request",
        raster.width == width && raster.height == height,
    )];
    let lines = vec![format!(
        "{} samples at depth {depth}; raster {}x{} over [{}, {}] x [{}, {}]",
        cloud.len(),
        raster.width,
        raster.height,
        fmt(raster.bounds.re_min),
        fmt(raster.bounds.re_max),
        fmt(raster.bounds.im_min),
        fmt(raster.bounds.im_max)
    )];
    build(
        "julia-render",
        r,
        json!({ "raster": raster, "sample_count": cloud.len() }),
        claims,
        Artifacts {
            tables: vec![],
            files: vec![
                ("image.pgm".into(), pgm),
                ("image.json".into(), sidecar.into_bytes()),
                ("points.csv".into(), points_csv),
            ],
        },
        lines,
    )
}

fn local_dim_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let c = common(flags, r)?;
    let law = resolve_law(flags, r, "uniform(0,0,3)")?;
    let omegas = r.parsed("omegas", flags.omegas, 12)?;
    let samples = r.parsed("samples", flags.samples, 10_000)?;
    let targets = r.parsed("targets", flags.targets, 24)?;
    let depth = r.parsed("depth", flags.depth, 32)?;
    let n = r.parsed("n", flags.n, 20_000)?;
    let experiment =
        local_dimension_experiment(&law, omegas, samples, targets, depth, 3..=12, c.seed)?;
    let g0 = global_green(&law, n, c.tol, c.depth_cap, c.seed ^ 0x10);
    let expected = std::f64::consts::LN_2 / (std::f64::consts::LN_2 + g0.mean);
    let rel_err = (experiment.slope - expected).abs() / expected;
    let claims = vec![claim_at_most(
        "median slope within 10% of ln2/(ln2 + g_hat)",
        rel_err,
        0.10,
    )];
    let csv_rows: Vec<Vec<String>> = experiment
        .per_omega_slopes
        .iter()
        .enumerate()
        .map(|(idx, slope)| vec![idx.to_string(), fmt(*slope)])
        .collect();
    let table = csv_table(&["omega_index", "slope"], &csv_rows);
    let lines = vec![format!(
        "median slope {} vs formula {} (relative error {})",
        fmt(experiment.slope),
        fmt(expected),
        fmt(rel_err)
    )];
    build(
        "local-dim",
        r,
        json!({ "experiment": experiment, "g0": g0, "expected_dimension": expected }),
        claims,
        Artifacts {
            tables: vec![("local_dim".into(), table)],
            files: vec![],
        },
        lines,
    )
}

fn verify_all_cmd(flags: &Flags, r: &mut Resolver) -> Result<Outcome> {
    let seed = r.parsed("seed", flags.seed, DEFAULT_MASTER_SEED)?;
    let budget_text = r.string("budget", flags.budget.as_deref(), "small");
    let budget: Budget = budget_text
        .parse()
        .map_err(|e: String| CliError::field("budget", e))?;
    let suite_report = suite::run_all(budget, seed)?;
    let mut claims = Vec::new();
    let mut lines = Vec::new();
    let mut csv_rows = Vec::new();
    for criterion in &suite_report.criteria {
        lines.push(criterion.summary_line());
        claims.push(claim_bool(
            format!("criterion {:02} {}", criterion.id, criterion.name),
            criterion.pass,
        ));
        for claim in &criterion.claims {
            csv_rows.push(vec![
                criterion.id.to_string(),
                criterion.name.clone(),
                claim.name.clone(),
                fmt(claim.observed),
                fmt(claim.threshold),
                claim.pass.to_string(),
            ]);
        }
    }
    let table = csv_table(
        &["criterion", "criterion_name", "claim", "observed", "threshold", "pass"],
        &csv_rows,
    );
    lines.push(format!(
        "verify-all ({budget}): {}",
        if suite_report.pass { "PASS" } else { "FAIL" }
    ));
    build(
        "verify-all",
        r,
        json!({ "suite": suite_report }),
        claims,
        Artifacts {
            tables: vec![("criteria".into(), table)],
            files: vec![],
        },
        lines,
    )
}
