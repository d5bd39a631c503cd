//! Experiment configuration shared by the CLI flags and JSON config files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gaps::fibonacci_up_to;
use crate::sequences::SequenceSpec;

/// A list of sample sizes.
///
/// Grammar: `N`, `N1,N2,...`, `a:b:steps` (geometric, endpoints included)
/// or `fib:MAX` (Fibonacci numbers from 2 up to MAX).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NGrid {
    List(Vec<usize>),
    Geometric { from: usize, to: usize, steps: usize },
    Fibonacci { max: usize },
}

impl NGrid {
    pub fn values(&self) -> Vec<usize> {
        match self {
            NGrid::List(v) => v.clone(),
            NGrid::Geometric { from, to, steps } => {
                if *steps == 1 {
                    return vec![*from];
                }
                let ratio = (*to as f64 / *from as f64).ln();
                let mut v: Vec<usize> = (0..*steps)
                    .map(|i| {
                        let t = i as f64 / (*steps - 1) as f64;
                        (*from as f64 * (ratio * t).exp()).round() as usize
                    })
                    .collect();
                v[0] = *from;
                v[*steps - 1] = *to;
                v.dedup();
                v
            }
            NGrid::Fibonacci { max } => fibonacci_up_to(2, *max as u64)
                .into_iter()
                .map(|n| n as usize)
                .collect(),
        }
    }
}

impl fmt::Display for NGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NGrid::List(v) => {
                let parts: Vec<String> = v.iter().map(|n| n.to_string()).collect();
                f.write_str(&parts.join(","))
            }
            NGrid::Geometric { from, to, steps } => write!(f, "{from}:{to}:{steps}"),
            NGrid::Fibonacci { max } => write!(f, "fib:{max}"),
        }
    }
}

fn parse_count(s: &str, input: &str) -> Result<usize> {
    let s = s.trim();
    // accept 1e5 style shorthands when they denote integers
    let v = s
        .parse::<usize>()
        .ok()
        .or_else(|| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.fract() == 0.0 && *x >= 0.0 && *x < 9e15)
                .map(|x| x as usize)
        })
        .ok_or_else(|| Error::parse("N grid", input, format!("`{s}` is not a non-negative integer")))?;
    if v == 0 {
        return Err(Error::parse("N grid", input, "N must be at least 1"));
    }
    Ok(v)
}

impl FromStr for NGrid {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some(max) = s.strip_prefix("fib:") {
            let max = parse_count(max, input)?;
            if max < 2 {
                return Err(Error::parse("N grid", input, "fib:MAX needs MAX >= 2"));
            }
            return Ok(NGrid::Fibonacci { max });
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a, b, steps] => {
                let from = parse_count(a, input)?;
                let to = parse_count(b, input)?;
                let steps = parse_count(steps, input)?;
                if to < from {
                    return Err(Error::parse("N grid", input, "a:b:steps needs a <= b"));
                }
                if steps == 1 && to != from {
                    return Err(Error::parse("N grid", input, "a single step needs a = b"));
                }
                Ok(NGrid::Geometric { from, to, steps })
            }
            [_] => {
                let v = s
                    .split(',')
                    .map(|p| parse_count(p, input))
                    .collect::<Result<Vec<_>>>()?;
                if v.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::parse("N grid", input, "values must be strictly increasing"));
                }
                Ok(NGrid::List(v))
            }
            _ => Err(Error::parse("N grid", input, "expected N, N1,N2,..., a:b:steps or fib:MAX")),
        }
    }
}

impl Serialize for NGrid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NGrid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::parse("format", s, "expected csv or json")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Every field is optional in a config file; flags given on the command
/// line take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seq: Option<SequenceSpec>,
    pub n: Option<NGrid>,
    pub alpha: Option<f64>,
    pub s: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub strict: bool,
    pub vdc_zero: bool,
    pub extended_precision: bool,
    pub timings: bool,
}

impl ExperimentConfig {
    pub const DEFAULT_ALPHA: f64 = 1.0;
    pub const DEFAULT_SEED: u64 = 20240601;

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("config", "<json>", e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical JSON with every field present.
    pub fn canonical(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fields of `other` that are set override `self`.
    pub fn merged(mut self, other: &ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(seq, n, alpha, s, out, format, seed, tolerance);
        self.strict |= other.strict;
        self.vdc_zero |= other.vdc_zero;
        self.extended_precision |= other.extended_precision;
        self.timings |= other.timings;
        self
    }

    /// The sequence with the zeroth-element flag applied.
    pub fn sequence(&self) -> Result<SequenceSpec> {
        let spec = self
            .seq
            .clone()
            .ok_or_else(|| Error::InvalidArgument("missing --seq (e.g. --seq kronecker:phi)".into()))?;
        Ok(match spec {
            SequenceSpec::VanDerCorput { base, .. } if self.vdc_zero => SequenceSpec::VanDerCorput {
                base,
                include_zero: true,
            },
            other => other,
        })
    }

    pub fn n_values(&self) -> Result<Vec<usize>> {
        self.n
            .as_ref()
            .map(|g| g.values())
            .ok_or_else(|| Error::InvalidArgument("missing --n (e.g. --n 1000 or --n 1000:100000:5)".into()))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(Self::DEFAULT_ALPHA)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(Self::DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_grammar() {
        assert_eq!("5".parse::<NGrid>().unwrap().values(), vec![5]);
        assert_eq!("1,2,10".parse::<NGrid>().unwrap().values(), vec![1, 2, 10]);
        assert_eq!(
            "1000:100000:5".parse::<NGrid>().unwrap().values(),
            vec![1000, 3162, 10000, 31623, 100000]
        );
        assert_eq!("fib:20".parse::<NGrid>().unwrap().values(), vec![2, 3, 5, 8, 13]);
        assert_eq!("1e5".parse::<NGrid>().unwrap().values(), vec![100000]);
        for bad in ["", "0", "5,3", "a:b:c", "10:1:3", "1:2:3:4", "fib:1", "-3", "2.5"] {
            assert!(bad.parse::<NGrid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_round_trips() {
        for s in ["7", "1,2,10", "1000:100000:5", "fib:1000"] {
            let g: NGrid = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
    }

    #[test]
    fn config_json_round_trip() {
        let c = ExperimentConfig {
            seq: Some("vdc:b=3".parse().unwrap()),
            n: Some("100:10000:3".parse().unwrap()),
            alpha: Some(0.8),
            s: Some(vec![0.5, 1.0]),
            format: Some(Format::Json),
            strict: true,
            ..Default::default()
        };
        let text = c.canonical();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.canonical(), text);
    }

    #[test]
    fn config_accepts_integer_n_and_rejects_unknown_fields() {
        let c = ExperimentConfig::from_json(r#"{"seq": "kronecker:phi", "n": 100}"#).unwrap();
        assert_eq!(c.n_values().unwrap(), vec![100]);
        assert!(ExperimentConfig::from_json(r#"{"sequence": "x"}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig::from_json(r#"{"alpha": 0.5, "seq": "vdc:b=2"}"#).unwrap();
        let flags = ExperimentConfig {
            alpha: Some(0.9),
            vdc_zero: true,
            ..Default::default()
        };
        let m = file.merged(&flags);
        assert_eq!(m.alpha(), 0.9);
        assert_eq!(m.sequence().unwrap().to_string(), "vdc:b=2,zero");
    }
}
