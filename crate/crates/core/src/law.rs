//! Parameter laws, reproducible sequence sampling, and the shift map.
//!
//! A [`ParameterLaw`] is the distribution of a single parameter `c`; a
//! [`ParameterSequence`] is a finite prefix of an i.i.d. sequence drawn from
//! a law, together with the `(law, seed)` provenance needed to regenerate or
//! lazily extend it. Because draws are counter-based (see [`crate::seed`]),
//! two laws sampled with the same [`SeedSpec`] share their underlying
//! unit-disc variates; the coupled estimators in [`crate::global`] rely on
//! exactly this to implement common-random-number comparisons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{SeedSpec, Stream};
use crate::{real, Complex, Real};

/// Distribution of a single parameter `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParameterLaw<F> {
    /// Uniform w.r.t. area on the closed disc `D(center, radius)`.
    UniformDisc { center: Complex<F>, radius: F },
    /// `c0 + λ·v` with `v` uniform on the closed unit disc.
    Perturbation { c0: Complex<F>, lambda: Complex<F> },
    /// The constant parameter `c`.
    PointMass { c: Complex<F> },
    /// An explicit list of parameters, cycled.
    ExplicitList {
        values: Vec<Complex<F>>,
        /// Where the list came from (file path or `inline`), echoed by the
        /// grammar form.
        source: String,
    },
}

impl<F: Real> ParameterLaw<F> {
    pub fn uniform_disc(center: Complex<F>, radius: F) -> Self {
        Self::UniformDisc { center, radius }
    }

    pub fn perturbation(c0: Complex<F>, lambda: Complex<F>) -> Self {
        Self::Perturbation { c0, lambda }
    }

    pub fn point_mass(c: Complex<F>) -> Self {
        Self::PointMass { c }
    }

    pub fn explicit_list(values: Vec<Complex<F>>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(Self::ExplicitList {
            values,
            source: source.into(),
        })
    }

    /// Smallest `R` with the law's support contained in `D(0, R)`.
    pub fn radius_bound(&self) -> F {
        match self {
            Self::UniformDisc { center, radius } => center.norm() + *radius,
            Self::Perturbation { c0, lambda } => c0.norm() + lambda.norm(),
            Self::PointMass { c } => c.norm(),
            Self::ExplicitList { values, .. } => values
                .iter()
                .map(|v| v.norm())
                .fold(F::zero(), |a, b| a.max(b)),
        }
    }

    /// The k-th i.i.d. draw of the given stream.
    #[inline]
    pub fn draw(&self, stream: &Stream, k: u64) -> Complex<F> {
        match self {
            Self::UniformDisc { center, radius } => {
                *center + stream.unit_disc_at::<F>(k) * *radius
            }
            Self::Perturbation { c0, lambda } => *c0 + stream.unit_disc_at::<F>(k) * *lambda,
            Self::PointMass { c } => *c,
            Self::ExplicitList { values, .. } => values[(k % values.len() as u64) as usize],
        }
    }

    /// Replace the perturbation direction `λ` by `η·λ` for a unit-modulus
    /// `η`; used by the rotation-invariance checks.
    pub fn rotate(&self, eta: Complex<F>) -> Result<Self> {
        let modulus = eta.norm();
        if (modulus - F::one()).abs() > real::<F>(1e-12) {
            return Err(Error::NotUnitModulus {
                modulus: modulus.to_f64().unwrap_or(f64::NAN),
            });
        }
        match self {
            Self::Perturbation { c0, lambda } => Ok(Self::Perturbation {
                c0: *c0,
                lambda: eta * *lambda,
            }),
            _ => Err(Error::NotPerturbation),
        }
    }

    /// Canonical grammar form: `uniform(cx,cy,r)`, `perturb(c0x,c0y,lx,ly)`,
    /// `point(cx,cy)`, `list(source)`.
    pub fn tag(&self) -> String {
        match self {
            Self::UniformDisc { center, radius } => {
                format!("uniform({},{},{})", center.re, center.im, radius)
            }
            Self::Perturbation { c0, lambda } => {
                format!("perturb({},{},{},{})", c0.re, c0.im, lambda.re, lambda.im)
            }
            Self::PointMass { c } => format!("point({},{})", c.re, c.im),
            Self::ExplicitList { source, .. } => format!("list({source})"),
        }
    }

    /// Parse the law grammar. `list(path)` needs file access and is resolved
    /// by [`parse_law_with_lists`]; plain `parse` rejects it.
    pub fn parse(text: &str) -> Result<Self> {
        parse_law_with_lists(text, |path| {
            Err(Error::LawParse(format!(
                "list({path}) requires a file loader in this context"
            )))
        })
    }
}

/// Parse a law specification, resolving `list(source)` through `load_list`.
pub fn parse_law_with_lists<F: Real>(
    text: &str,
    load_list: impl FnOnce(&str) -> Result<Vec<Complex<F>>>,
) -> Result<ParameterLaw<F>> {
    let text = text.trim();
    let (name, args) = split_call(text)?;
    let parse_reals = |expected: usize| -> Result<Vec<F>> {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != expected {
            return Err(Error::LawParse(format!(
                "{name} expects {expected} numeric arguments, got {}",
                parts.len()
            )));
        }
        parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map(real::<F>)
                    .map_err(|_| Error::LawParse(format!("invalid number `{p}` in `{text}`")))
            })
            .collect()
    };
    match name {
        "uniform" => {
            let v = parse_reals(3)?;
            if v[2] < F::zero() {
                return Err(Error::LawParse("uniform radius must be >= 0".into()));
            }
            Ok(ParameterLaw::UniformDisc {
                center: Complex::new(v[0], v[1]),
                radius: v[2],
            })
        }
        "perturb" => {
            let v = parse_reals(4)?;
            Ok(ParameterLaw::Perturbation {
                c0: Complex::new(v[0], v[1]),
                lambda: Complex::new(v[2], v[3]),
            })
        }
        "point" => {
            let v = parse_reals(2)?;
            Ok(ParameterLaw::PointMass {
                c: Complex::new(v[0], v[1]),
            })
        }
        "list" => {
            let values = load_list(args.trim())?;
            ParameterLaw::explicit_list(values, args.trim())
        }
        other => Err(Error::LawParse(format!("unknown law `{other}`"))),
    }
}

fn split_call(text: &str) -> Result<(&str, &str)> {
    let open = text
        .find('(')
        .ok_or_else(|| Error::LawParse(format!("missing `(` in `{text}`")))?;
    if !text.ends_with(')') {
        return Err(Error::LawParse(format!("missing `)` in `{text}`")));
    }
    Ok((&text[..open], &text[open + 1..text.len() - 1]))
}

/// Anything that can hand out the parameter `c_k` for every `k ≥ 0`.
pub trait ParameterSource<F: Real> {
    fn param(&self, k: u64) -> Complex<F>;
}

/// The constant sequence `c_k ≡ c`: autonomous iteration of a single map.
#[derive(Debug, Clone, Copy)]
pub struct PointMassSource<F>(pub Complex<F>);

impl<F: Real> ParameterSource<F> for PointMassSource<F> {
    #[inline]
    fn param(&self, _k: u64) -> Complex<F> {
        self.0
    }
}

/// The unbounded i.i.d. parameter stream of a law under a seed, optionally
/// shifted. This is the lazy source used by Green's function evaluations.
#[derive(Debug, Clone)]
pub struct LawStream<'a, F> {
    law: &'a ParameterLaw<F>,
    stream: Stream,
    offset: u64,
}

impl<'a, F: Real> LawStream<'a, F> {
    pub fn new(law: &'a ParameterLaw<F>, seed: SeedSpec) -> Self {
        Self {
            law,
            stream: seed.stream(),
            offset: 0,
        }
    }

    /// The stream of the shifted sequence `σ^k ω`.
    pub fn shifted(&self, k: u64) -> Self {
        Self {
            law: self.law,
            stream: self.stream,
            offset: self.offset + k,
        }
    }
}

impl<F: Real> ParameterSource<F> for LawStream<'_, F> {
    #[inline]
    fn param(&self, k: u64) -> Complex<F> {
        self.law.draw(&self.stream, self.offset + k)
    }
}

/// A finite prefix `(c₀, …, c_{n−1})` of a parameter sequence, with the
/// provenance needed to regenerate it bit-for-bit and to extend it lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSequence<F> {
    law: ParameterLaw<F>,
    seed: SeedSpec,
    /// How many leading parameters have been shifted away.
    offset: u64,
    prefix: Vec<Complex<F>>,
}

/// Draw the first `n` parameters of the sequence addressed by `(law, seed)`.
pub fn sample_prefix<F: Real>(
    law: &ParameterLaw<F>,
    seed: SeedSpec,
    n: usize,
) -> ParameterSequence<F> {
    let stream = seed.stream();
    let prefix = (0..n as u64).map(|k| law.draw(&stream, k)).collect();
    ParameterSequence {
        law: law.clone(),
        seed,
        offset: 0,
        prefix,
    }
}

impl<F: Real> ParameterSequence<F> {
    pub fn law(&self) -> &ParameterLaw<F> {
        &self.law
    }

    pub fn seed(&self) -> SeedSpec {
        self.seed
    }

    pub fn law_tag(&self) -> String {
        self.law.tag()
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn prefix(&self) -> &[Complex<F>] {
        &self.prefix
    }

    /// `|c_k| ≤ R` for every prefix entry.
    pub fn radius_bound(&self) -> F {
        self.law.radius_bound()
    }

    /// The k-th parameter; prefix entries are served from storage, later
    /// ones are regenerated on demand (both agree bit-for-bit).
    #[inline]
    pub fn param(&self, k: u64) -> Complex<F> {
        if (k as usize) < self.prefix.len() {
            self.prefix[k as usize]
        } else {
            self.law.draw(&self.seed.stream(), self.offset + k)
        }
    }

    /// Drop the first `k` parameters: the shift `σ^k ω`.
    pub fn shift(&self, k: usize) -> Result<Self> {
        if k > self.prefix.len() {
            return Err(Error::PrefixTooShort {
                needed: k as u64,
                available: self.prefix.len() as u64,
            });
        }
        Ok(Self {
            law: self.law.clone(),
            seed: self.seed,
            offset: self.offset + k as u64,
            prefix: self.prefix[k..].to_vec(),
        })
    }
}

impl<F: Real> ParameterSource<F> for ParameterSequence<F> {
    #[inline]
    fn param(&self, k: u64) -> Complex<F> {
        ParameterSequence::param(self, k)
    }
}
