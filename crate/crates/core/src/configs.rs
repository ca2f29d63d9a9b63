//! Named starting configurations and the plain-text configuration format.
//!
//! File format: one agent per line, coordinates separated by whitespace.
//! Each coordinate is a decimal literal or an exact `p/q` rational. Blank
//! lines and everything after `#` are ignored.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::model::{ConfigError, Configuration};
use crate::scalar::{ParseScalarError, Scalar};

#[derive(Debug, Error)]
pub enum ConfigsError {
    #[error("{family} needs {requirement}, got n = {n}")]
    InvalidParameter {
        family: Family,
        n: usize,
        requirement: &'static str,
    },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseScalarError,
    },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    Dimension {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{family} configurations exist only in float mode")]
    FloatOnly { family: Family },
    #[error("file family requires a path")]
    MissingPath,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    EqualSpaced,
    DumbbellChain,
    Kurz,
    Polygon,
    PlaneTriple,
    File,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::EqualSpaced,
        Family::DumbbellChain,
        Family::Kurz,
        Family::Polygon,
        Family::PlaneTriple,
        Family::File,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::EqualSpaced => "equal-spaced",
            Family::DumbbellChain => "dumbbell-chain",
            Family::Kurz => "kurz",
            Family::Polygon => "polygon",
            Family::PlaneTriple => "triple",
            Family::File => "file",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                format!(
                    "unknown family `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// A family together with its size parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub path: Option<PathBuf>,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        FamilySpec {
            family,
            n,
            path: None,
        }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        FamilySpec {
            family: Family::File,
            n: 0,
            path: Some(path.into()),
        }
    }

    /// Builds the configuration in the requested backend. The polygon has
    /// irrational coordinates and is refused by the exact backend.
    pub fn build<S: Scalar>(&self) -> Result<Configuration<S>, ConfigsError> {
        match self.family {
            Family::EqualSpaced => make_equal_spaced(self.n),
            Family::DumbbellChain => make_dumbbell_chain(self.n),
            Family::Kurz => make_kurz(self.n),
            Family::Polygon => {
                if S::EXACT {
                    return Err(ConfigsError::FloatOnly {
                        family: Family::Polygon,
                    });
                }
                let p = make_polygon(self.n)?;
                let points = p
                    .points()
                    .map(|pt| pt.iter().map(|&x| S::from_f64(x)).collect())
                    .collect();
                Ok(Configuration::new(2, points)?)
            }
            Family::PlaneTriple => Ok(plane_triple()),
            Family::File => load_config(self.path.as_ref().ok_or(ConfigsError::MissingPath)?),
        }
    }
}

/// `(1, 2, ..., n)`: unit gaps, exactly at the confidence bound.
pub fn make_equal_spaced<S: Scalar>(n: usize) -> Result<Configuration<S>, ConfigsError> {
    if n == 0 {
        return Err(ConfigsError::InvalidParameter {
            family: Family::EqualSpaced,
            n,
            requirement: "n >= 1",
        });
    }
    Ok(Configuration::line(
        (1..=n as i64).map(S::from_int).collect(),
    )?)
}

/// Dumbbell with a chain: `n` agents at `-1/n`, single agents at
/// `0, 1, ..., n`, and `n` agents at `n + 1/n`; `3n + 1` agents in total.
pub fn make_dumbbell_chain<S: Scalar>(n: usize) -> Result<Configuration<S>, ConfigsError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(ConfigsError::InvalidParameter {
            family: Family::DumbbellChain,
            n,
            requirement: "even n >= 4",
        });
    }
    let ni = n as i64;
    let mut xs = Vec::with_capacity(3 * n + 1);
    xs.extend(std::iter::repeat_n(S::from_ratio(-1, ni), n));
    xs.extend((0..=ni).map(S::from_int));
    xs.extend(std::iter::repeat_n(S::from_ratio(ni * ni + 1, ni), n));
    Ok(Configuration::line(xs)?)
}

/// Two weight-`n` clusters, each at distance `1/n` outside one of two
/// solitary agents that sit at `0` and `1`:
/// `n` agents at `-1/n`, one at `0`, one at `1`, `n` at `1 + 1/n`.
///
/// This is a reading of a construction described only in prose; the
/// cluster weights and solitary-agent count are our interpretation.
pub fn make_kurz<S: Scalar>(n: usize) -> Result<Configuration<S>, ConfigsError> {
    if n < 2 {
        return Err(ConfigsError::InvalidParameter {
            family: Family::Kurz,
            n,
            requirement: "n >= 2",
        });
    }
    let ni = n as i64;
    let mut xs = Vec::with_capacity(2 * n + 2);
    xs.extend(std::iter::repeat_n(S::from_ratio(-1, ni), n));
    xs.push(S::from_int(0));
    xs.push(S::from_int(1));
    xs.extend(std::iter::repeat_n(S::from_ratio(ni + 1, ni), n));
    Ok(Configuration::line(xs)?)
}

/// Vertices of a regular `n`-gon with unit side length, in the plane.
pub fn make_polygon(n: usize) -> Result<Configuration<f64>, ConfigsError> {
    if n < 3 {
        return Err(ConfigsError::InvalidParameter {
            family: Family::Polygon,
            n,
            requirement: "n >= 3",
        });
    }
    let radius = 1.0 / (2.0 * (std::f64::consts::PI / n as f64).sin());
    let points = (0..n)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            vec![radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    Ok(Configuration::new(2, points)?)
}

/// Three agents at `(0, -1/2)`, `(0, 1/2)` and `(1, 0)`.
pub fn plane_triple<S: Scalar>() -> Configuration<S> {
    let half = S::from_ratio(1, 2);
    Configuration::new(
        2,
        vec![
            vec![S::zero(), -half.clone()],
            vec![S::zero(), half],
            vec![S::one(), S::zero()],
        ],
    )
    .expect("valid fixed configuration")
}

pub fn parse_config<S: Scalar>(text: &str) -> Result<Configuration<S>, ConfigsError> {
    let mut points: Vec<Vec<S>> = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let point = content
            .split_whitespace()
            .map(S::parse_token)
            .collect::<Result<Vec<S>, _>>()
            .map_err(|source| ConfigsError::Parse { line, source })?;
        let expected = *dim.get_or_insert(point.len());
        if point.len() != expected {
            return Err(ConfigsError::Dimension {
                line,
                expected,
                found: point.len(),
            });
        }
        points.push(point);
    }
    Ok(Configuration::new(dim.unwrap_or(1), points)?)
}

pub fn load_config<S: Scalar>(path: impl AsRef<Path>) -> Result<Configuration<S>, ConfigsError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConfigsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// Renders a configuration in the file format; exact values as `p/q`.
pub fn write_config<S: Scalar>(c: &Configuration<S>) -> String {
    let mut out = String::new();
    for p in c.points() {
        let cells: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
