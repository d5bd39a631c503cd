//! Point sequences: Kronecker, van der Corput and a seeded uniform baseline.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::continued_fractions::{cf_expand, Termination};
use crate::error::{Error, Result};
use crate::real::{fold_unit, Constant, DoubleDouble, Real};

/// Largest absolute error tolerated in `{n z}` before generation is refused.
pub const MAX_GENERATION_ERROR: f64 = 1e-9;

const PARALLEL_THRESHOLD: usize = 1 << 16;

/// One coordinate of a Kronecker vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Component {
    Named(Constant),
    Decimal(f64),
}

impl Component {
    pub fn real(self) -> Real {
        match self {
            Component::Named(c) => c.real(),
            Component::Decimal(x) => Real::from_f64(x),
        }
    }

    fn parse(s: &str, input: &str) -> Result<Self> {
        if let Some(c) = Constant::from_name(s) {
            return Ok(Component::Named(c));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::parse("sequence spec", input, format!("`{s}` is neither a number nor a known constant (phi, sqrt2, sqrt3, sqrt5, pi, e)")))?;
        if !x.is_finite() {
            return Err(Error::parse("sequence spec", input, "components must be finite"));
        }
        Ok(Component::Decimal(x))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Named(c) => write!(f, "{c}"),
            Component::Decimal(x) => write!(f, "{x:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceSpec {
    Kronecker { z: Vec<Component> },
    VanDerCorput { base: u32, include_zero: bool },
    RandomUniform { seed: u64, dimension: usize },
}

impl SequenceSpec {
    pub fn kronecker(c: Constant) -> Self {
        SequenceSpec::Kronecker {
            z: vec![Component::Named(c)],
        }
    }

    pub fn van_der_corput(base: u32) -> Self {
        SequenceSpec::VanDerCorput {
            base,
            include_zero: false,
        }
    }

    pub fn random(seed: u64) -> Self {
        SequenceSpec::RandomUniform { seed, dimension: 1 }
    }

    pub fn dimension(&self) -> usize {
        match self {
            SequenceSpec::Kronecker { z } => z.len(),
            SequenceSpec::VanDerCorput { .. } => 1,
            SequenceSpec::RandomUniform { dimension, .. } => *dimension,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Kronecker { z } if z.is_empty() => {
                Err(Error::InvalidArgument("Kronecker vector is empty".into()))
            }
            SequenceSpec::VanDerCorput { base, .. } if *base < 2 => Err(Error::InvalidArgument(
                format!("van der Corput base must be at least 2, got {base}"),
            )),
            SequenceSpec::RandomUniform { dimension: 0, .. } => {
                Err(Error::InvalidArgument("dimension must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Warnings about Kronecker components that look rational at working
    /// precision.
    pub fn warnings(&self) -> Vec<String> {
        let SequenceSpec::Kronecker { z } = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, c) in z.iter().enumerate() {
            let Ok(cf) = cf_expand(c.real(), 64, 0.0) else {
                continue;
            };
            let huge = cf.digits()[1..].iter().any(|&a| a > 1_000_000);
            if cf.termination() == Termination::Exact || huge {
                out.push(format!(
                    "component {} ({c}) is close to the rational {}/{}",
                    i + 1,
                    cf.last_convergent().p,
                    cf.last_convergent().q
                ));
            }
        }
        out
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Kronecker { z } => {
                if let [Component::Named(c)] = z.as_slice() {
                    return write!(f, "kronecker:{c}");
                }
                let parts: Vec<String> = z.iter().map(|c| c.to_string()).collect();
                write!(f, "kronecker:z={}", parts.join(","))
            }
            SequenceSpec::VanDerCorput { base, include_zero } => {
                write!(f, "vdc:b={base}")?;
                if *include_zero {
                    f.write_str(",zero")?;
                }
                Ok(())
            }
            SequenceSpec::RandomUniform { seed, dimension } => {
                write!(f, "random:seed={seed}")?;
                if *dimension != 1 {
                    write!(f, ",d={dimension}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("sequence spec", input, "expected <kind>:<parameters>, e.g. kronecker:phi, vdc:b=2, random:seed=1"))?;
        let spec = match kind {
            "kronecker" => {
                let list = rest.strip_prefix("z=").unwrap_or(rest);
                let z = list
                    .split(',')
                    .map(|p| Component::parse(p.trim(), input))
                    .collect::<Result<Vec<_>>>()?;
                SequenceSpec::Kronecker { z }
            }
            "vdc" => {
                let mut base = None;
                let mut include_zero = false;
                for part in rest.split(',') {
                    match part.trim() {
                        "zero" => include_zero = true,
                        p => {
                            let v = p.strip_prefix("b=").ok_or_else(|| {
                                Error::parse("sequence spec", input, format!("unexpected `{p}`, expected b=<int> or zero"))
                            })?;
                            base = Some(v.parse::<u32>().map_err(|e| {
                                Error::parse("sequence spec", input, format!("base: {e}"))
                            })?);
                        }
                    }
                }
                SequenceSpec::VanDerCorput {
                    base: base.ok_or_else(|| Error::parse("sequence spec", input, "missing b=<int>"))?,
                    include_zero,
                }
            }
            "random" => {
                let mut seed = None;
                let mut dimension = 1;
                for part in rest.split(',') {
                    let p = part.trim();
                    if let Some(v) = p.strip_prefix("seed=") {
                        seed = Some(v.parse::<u64>().map_err(|e| {
                            Error::parse("sequence spec", input, format!("seed: {e}"))
                        })?);
                    } else if let Some(v) = p.strip_prefix("d=") {
                        dimension = v.parse::<usize>().map_err(|e| {
                            Error::parse("sequence spec", input, format!("dimension: {e}"))
                        })?;
                    } else {
                        return Err(Error::parse("sequence spec", input, format!("unexpected `{p}`, expected seed=<int> or d=<int>")));
                    }
                }
                SequenceSpec::RandomUniform {
                    seed: seed.ok_or_else(|| Error::parse("sequence spec", input, "missing seed=<int>"))?,
                    dimension,
                }
            }
            other => {
                return Err(Error::parse("sequence spec", input, format!("unknown kind `{other}`, expected kronecker, vdc or random")))
            }
        };
        spec.validate()
            .map_err(|e| Error::parse("sequence spec", input, e.to_string()))?;
        Ok(spec)
    }
}

impl Serialize for SequenceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SequenceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `N` points in `[0,1)^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dimension: usize,
    coords: Vec<f64>,
    spec: Option<SequenceSpec>,
}

impl PointSet {
    /// Wraps explicit one-dimensional points.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::from_coords(1, values)
    }

    /// Wraps explicit points given row-major with `dimension` columns.
    pub fn from_coords(dimension: usize, coords: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if coords.len() % dimension != 0 {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates do not split into points of dimension {dimension}",
                coords.len()
            )));
        }
        if let Some(&bad) = coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {bad} lies outside [0,1)"
            )));
        }
        Ok(Self {
            dimension,
            coords,
            spec: None,
        })
    }

    /// Equispaced points `k/N`, `k = 0..N-1`, shifted by `offset`.
    pub fn equispaced(n: usize, offset: f64) -> Self {
        let coords = (0..n)
            .map(|k| fold_unit((k as f64 + offset * n as f64) / n as f64))
            .collect();
        Self {
            dimension: 1,
            coords,
            spec: None,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spec(&self) -> Option<&SequenceSpec> {
        self.spec.as_ref()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dimension)
    }

    /// The coordinates of a one-dimensional set.
    pub fn values(&self) -> Result<&[f64]> {
        if self.dimension != 1 {
            return Err(Error::DimensionMismatch(self.dimension));
        }
        Ok(&self.coords)
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            dimension: self.dimension,
            coords: self.coords[..n * self.dimension].to_vec(),
            spec: self.spec.clone(),
        }
    }

    pub fn sorted_values(&self) -> Result<Vec<f64>> {
        let mut v = self.values()?.to_vec();
        v.sort_unstable_by(f64::total_cmp);
        Ok(v)
    }

    /// Writes one row per point with `dimension` columns.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = if self.dimension == 1 {
            vec!["x".into()]
        } else {
            (1..=self.dimension).map(|i| format!("x{i}")).collect()
        };
        writeln!(w, "{}", header.join(","))?;
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|&x| crate::report::fmt_float(x)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Parses CSV written by [`PointSet::write_csv`].
    pub fn read_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("point CSV", "", "empty input"))?;
        let dimension = header.split(',').count();
        let mut coords = Vec::new();
        for line in lines {
            let before = coords.len();
            for field in line.split(',') {
                coords.push(field.trim().parse::<f64>().map_err(|e| {
                    Error::parse("point CSV", line, e.to_string())
                })?);
            }
            if coords.len() - before != dimension {
                return Err(Error::parse("point CSV", line, format!("expected {dimension} columns")));
            }
        }
        Self::from_coords(dimension, coords)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateOptions {
    /// Skip the precision guard on `n z`.
    pub extended_precision: bool,
}

pub fn generate(spec: &SequenceSpec, n: usize) -> Result<PointSet> {
    generate_with(spec, n, GenerateOptions::default())
}

pub fn generate_with(spec: &SequenceSpec, n: usize, opts: GenerateOptions) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    spec.validate()?;
    let coords = match spec {
        SequenceSpec::Kronecker { z } => kronecker(z, n, opts)?,
        SequenceSpec::VanDerCorput { base, include_zero } => {
            let start = if *include_zero { 0 } else { 1 };
            map_indices(n, |i| radical_inverse(start + i as u64, *base))
        }
        SequenceSpec::RandomUniform { seed, dimension } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..n * dimension).map(|_| rng.gen::<f64>()).collect()
        }
    };
    Ok(PointSet {
        dimension: spec.dimension(),
        coords,
        spec: Some(spec.clone()),
    })
}

fn map_indices(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> Vec<f64> {
    if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Largest `N` for which `N * uncertainty(z)` stays within the generation
/// error budget.
pub fn max_safe_n(z: &Real) -> u64 {
    let per_step = z.uncertainty() + z.value().hi.abs() * 2f64.powi(-104);
    if per_step == 0.0 {
        u64::MAX
    } else {
        (MAX_GENERATION_ERROR / per_step).floor().min(u64::MAX as f64) as u64
    }
}

fn kronecker(z: &[Component], n: usize, opts: GenerateOptions) -> Result<Vec<f64>> {
    let reals: Vec<Real> = z.iter().map(|c| c.real()).collect();
    for r in &reals {
        r.check_finite()?;
        let safe = max_safe_n(r);
        if !opts.extended_precision && n as u64 > safe {
            return Err(Error::PrecisionExceeded {
                requested: n as u64,
                max_safe: safe,
            });
        }
    }
    if n as u64 > 1 << 53 {
        return Err(Error::InvalidArgument("N above 2^53 is not supported".into()));
    }
    let d = reals.len();
    let values: Vec<DoubleDouble> = reals.iter().map(|r| r.value()).collect();
    Ok(map_indices(n * d, |i| {
        let idx = (i / d + 1) as f64;
        values[i % d].mul_f64(idx).fract_f64()
    }))
}

/// `g_b(n)`, computed on integers and divided once.
pub fn radical_inverse(mut n: u64, base: u32) -> f64 {
    let b = base as u128;
    let mut num: u128 = 0;
    let mut den: u128 = 1;
    while n > 0 {
        num = num * b + (n % base as u64) as u128;
        den *= b;
        n /= base as u64;
    }
    num as f64 / den as f64
}

/// Returns the points of a one-dimensional set sorted ascending.
pub fn sort_ascending(ps: &PointSet) -> Result<PointSet> {
    let v = ps.sorted_values()?;
    Ok(PointSet {
        dimension: 1,
        coords: v,
        spec: ps.spec.clone(),
    })
}
