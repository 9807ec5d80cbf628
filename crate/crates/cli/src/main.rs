use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use randquad_cli::config::{parse_complex_pair, Config};
use randquad_cli::output::RunWriter;
use randquad_cli::run::{execute, Flags};
use randquad_cli::{default_out_dir, resolve_threads, CliError};

/// Numerical laboratory for random iteration of quadratic polynomials
/// z^2 + c: Green's functions, equilibrium measures, Lyapunov exponents,
/// and the dimension of the harmonic measure.
///
/// Every run writes report.json, tables/*.csv, the resolved configuration,
/// and a meta.json timing sidecar into the output directory. Exit codes:
/// 0 success, 1 assertion failure, 2 config error, 3 I/O error.
#[derive(Parser)]
#[command(name = "randquad", version, arg_required_else_help = true)]
struct Cli {
    /// Key-value config file; flags override file values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory (default: ./run-<command>).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Master seed driving every random stream (64-bit).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: RANDQUAD_THREADS or hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Certified truncation tolerance for Green evaluations (nats).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration cap for the escape search.
    #[arg(long = "depth-cap", global = true)]
    depth_cap: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct LawArg {
    /// Parameter law: uniform(cx,cy,r) | perturb(c0x,c0y,lx,ly) |
    /// point(cx,cy) | list(file.csv).
    #[arg(long)]
    law: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the pointwise Green's function g_omega(z) with a certified
    /// error bound.
    GreenPoint {
        #[command(flatten)]
        law: LawArg,
        /// Evaluation point as re,im.
        #[arg(long, value_parser = parse_complex_pair, allow_hyphen_values = true)]
        z: Option<(f64, f64)>,
    },
    /// Monte-Carlo estimate of the global Green's function g(0).
    GlobalGreen {
        #[command(flatten)]
        law: LawArg,
        /// Sample count.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dimension report: g(0), Lyapunov exponent, dim = ln2/chi, and the
    /// Hoelder floor.
    Dimension {
        #[command(flatten)]
        law: LawArg,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Coupled continuity scan of R -> g_R(0) over a radius grid.
    SweepR {
        /// Radius grid (comma list).
        #[arg(long = "r-grid", value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
        /// Step sizes h (comma list).
        #[arg(long = "h", value_delimiter = ',')]
        steps: Option<Vec<f64>>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Large-radius asymptotics of g_R(0)/ln R with the analytic sandwich.
    Asymptotics {
        /// Radii to test (comma list).
        #[arg(long = "r-list", value_delimiter = ',')]
        r_list: Option<Vec<f64>>,
        /// Event threshold delta in (0,1).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Tail probabilities P(g_omega(0) < 2^-k) and their decay rate.
    FastEscape {
        #[command(flatten)]
        law: LawArg,
        #[arg(long = "k-min")]
        k_min: Option<u32>,
        #[arg(long = "k-max")]
        k_max: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Perturbation constancy of delta -> g_delta(0) around c0 outside the
    /// Mandelbrot set, with rotation pairs.
    Perturb {
        /// Base parameter c0 as re,im.
        #[arg(long, value_parser = parse_complex_pair, allow_hyphen_values = true)]
        c0: Option<(f64, f64)>,
        /// Perturbation radii (comma list).
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Mean-value (harmonicity) test of lambda -> g_lambda(0).
    Harmonicity {
        #[arg(long, value_parser = parse_complex_pair, allow_hyphen_values = true)]
        c0: Option<(f64, f64)>,
        /// Circle radius in the lambda plane.
        #[arg(long)]
        r: Option<f64>,
        /// Number of rotations (roots of unity).
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        /// Fixed-omega circle-average checks.
        #[arg(long)]
        omegas: Option<usize>,
    },
    /// Hausdorff distance of sampled perturbed Julia sets from the
    /// autonomous reference, and their clearance around the origin.
    Stability {
        #[arg(long, value_parser = parse_complex_pair, allow_hyphen_values = true)]
        c0: Option<(f64, f64)>,
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        /// Backward samples per delta.
        #[arg(long)]
        points: Option<usize>,
        /// Reference cloud size.
        #[arg(long = "reference-points")]
        reference_points: Option<usize>,
        /// Backward-orbit depth.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Backward-orbit point cloud of J_omega with a greyscale raster
    /// (PGM + JSON sidecar + CSV points).
    JuliaRender {
        #[command(flatten)]
        law: LawArg,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        width: Option<u32>,
        #[arg(long)]
        height: Option<u32>,
    },
    /// Local-dimension estimate of the harmonic measure against the formula
    /// ln2/(ln2 + g(0)).
    LocalDim {
        #[command(flatten)]
        law: LawArg,
        /// Independent omega realizations to pool.
        #[arg(long)]
        omegas: Option<usize>,
        /// Mass samples per omega.
        #[arg(long)]
        samples: Option<usize>,
        /// Targets per omega.
        #[arg(long)]
        targets: Option<usize>,
        /// Backward-orbit depth.
        #[arg(long)]
        depth: Option<u32>,
        /// Samples for the Monte-Carlo g(0) reference.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the full verification suite (every acceptance criterion).
    VerifyAll {
        /// small (reduced sizes) or full (canonical sizes).
        #[arg(long)]
        budget: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GreenPoint { .. } => "green-point",
            Command::GlobalGreen { .. } => "global-green",
            Command::Dimension { .. } => "dimension",
            Command::SweepR { .. } => "sweep-r",
            Command::Asymptotics { .. } => "asymptotics",
            Command::FastEscape { .. } => "fast-escape",
            Command::Perturb { .. } => "perturb",
            Command::Harmonicity { .. } => "harmonicity",
            Command::Stability { .. } => "stability",
            Command::JuliaRender { .. } => "julia-render",
            Command::LocalDim { .. } => "local-dim",
            Command::VerifyAll { .. } => "verify-all",
        }
    }

    fn flags(&self, cli: &Cli) -> Flags {
        let mut flags = Flags {
            seed: cli.seed,
            tol: cli.tol,
            depth_cap: cli.depth_cap,
            ..Flags::default()
        };
        match self {
            Command::GreenPoint { law, z } => {
                flags.law = law.law.clone();
                flags.z = *z;
            }
            Command::GlobalGreen { law, n } | Command::Dimension { law, n } => {
                flags.law = law.law.clone();
                flags.n = *n;
            }
            Command::SweepR { r_grid, steps, n } => {
                flags.r_grid = r_grid.clone();
                flags.steps = steps.clone();
                flags.n = *n;
            }
            Command::Asymptotics { r_list, delta, n } => {
                flags.r_list = r_list.clone();
                flags.delta = *delta;
                flags.n = *n;
            }
            Command::FastEscape { law, k_min, k_max, n } => {
                flags.law = law.law.clone();
                flags.k_min = *k_min;
                flags.k_max = *k_max;
                flags.n = *n;
            }
            Command::Perturb { c0, deltas, n } => {
                flags.c0 = *c0;
                flags.deltas = deltas.clone();
                flags.n = *n;
            }
            Command::Harmonicity { c0, r, m, n, omegas } => {
                flags.c0 = *c0;
                flags.radius = *r;
                flags.rotations = *m;
                flags.n = *n;
                flags.omegas = *omegas;
            }
            Command::Stability {
                c0,
                deltas,
                points,
                reference_points,
                depth,
            } => {
                flags.c0 = *c0;
                flags.deltas = deltas.clone();
                flags.points = *points;
                flags.reference_points = *reference_points;
                flags.depth = *depth;
            }
            Command::JuliaRender {
                law,
                depth,
                samples,
                width,
                height,
            } => {
                flags.law = law.law.clone();
                flags.depth = *depth;
                flags.samples = *samples;
                flags.width = *width;
                flags.height = *height;
            }
            Command::LocalDim {
                law,
                omegas,
                samples,
                targets,
                depth,
                n,
            } => {
                flags.law = law.law.clone();
                flags.omegas = *omegas;
                flags.samples = *samples;
                flags.targets = *targets;
                flags.depth = *depth;
                flags.n = *n;
            }
            Command::VerifyAll { budget } => {
                flags.budget = budget.clone();
            }
        }
        flags
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn run(cli: &Cli) -> randquad_cli::Result<bool> {
    let threads = resolve_threads(cli.threads);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::field("threads", e))?;
    }
    let file_config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let command = cli.command.name();
    let flags = cli.command.flags(cli);

    let started = std::time::SystemTime::now();
    let clock = std::time::Instant::now();
    let outcome = execute(command, &flags, &file_config)?;
    let duration = clock.elapsed();

    let out_dir = cli.out.clone().unwrap_or_else(|| default_out_dir(command));
    let writer = RunWriter::new(&out_dir)?;
    let report_path = writer.write(
        &outcome.report,
        &outcome.resolved,
        &outcome.artifacts,
        started,
        duration,
        rayon::current_num_threads(),
    )?;

    for line in &outcome.lines {
        println!("{line}");
    }
    if !outcome.report.pass {
        let failures: Vec<&str> = outcome
            .report
            .claims
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        eprintln!("failed claims: {failures:?}");
    }
    eprintln!(
        "report: {} ({} ms)",
        report_path.display(),
        duration.as_millis()
    );
    Ok(outcome.report.pass)
}
