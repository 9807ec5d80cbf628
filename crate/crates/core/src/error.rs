//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the dynamics, measure, and estimator operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation asked for more parameters than the sequence prefix holds.
    #[error("parameter prefix too short: need {needed} entries, have {available}")]
    PrefixTooShort { needed: u64, available: u64 },

    /// A Green's function evaluation was required to escape but did not
    /// within the depth cap.
    #[error("orbit did not escape within depth cap {depth_cap}")]
    NonEscaping { depth_cap: u32 },

    /// Exact preimage tree construction past the memory cap.
    #[error("preimage tree depth {requested} exceeds cap {cap}")]
    TreeTooDeep { requested: u32, cap: u32 },

    /// A measure atom sits (numerically) at the origin, where `ln|2z|`
    /// diverges.
    #[error("measure atom at the origin (|z| = {modulus:e})")]
    AtomAtOrigin { modulus: f64 },

    /// No radius window collected enough hits for a local-dimension fit.
    #[error("no radius window with at least {min_count} hits per target")]
    InsufficientCounts { min_count: usize },

    /// Box counting needs at least two occupied cells at the coarsest scale.
    #[error("degenerate cloud: fewer than 2 occupied cells at the coarsest scale")]
    DegenerateCloud,

    /// `rotate_law` applies only to the perturbation variant.
    #[error("law is not a perturbation variant")]
    NotPerturbation,

    /// The rotation factor of `rotate_law` must have unit modulus.
    #[error("rotation factor must have unit modulus, |eta| = {modulus}")]
    NotUnitModulus { modulus: f64 },

    /// The Monte-Carlo estimate left the analytic sandwich bounds even after
    /// widening by four standard errors; this signals an implementation bug.
    #[error(
        "estimate {estimate} +/- {margin} exits sandwich [{lower}, {upper}] at R = {radius}"
    )]
    SandwichViolation {
        radius: f64,
        estimate: f64,
        margin: f64,
        lower: f64,
        upper: f64,
    },

    /// The critical orbit of the base parameter failed to escape, so the
    /// parameter is treated as inside the Mandelbrot set.
    #[error("critical orbit of c0 = {re}+{im}i did not escape within {max_iter} iterations; c0 may lie inside the Mandelbrot set")]
    InsideMandelbrot { re: f64, im: f64, max_iter: u32 },

    /// An explicit parameter list must not be empty.
    #[error("explicit parameter list is empty")]
    EmptyList,

    /// Law specification string did not match the grammar.
    #[error("cannot parse law specification: {0}")]
    LawParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
