use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::{Scalar, Tolerances};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("a configuration needs at least one agent")]
    Empty,
    #[error("opinion dimension must be positive")]
    ZeroDimension,
    #[error("agent {agent} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("confidence bound must be positive")]
    NonPositiveBound,
    #[error("agent {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("agent index {index} out of range for {n} agents")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Agent opinions as points in `dim`-space, stored row-major.
///
/// One-dimensional configurations are kept in nondecreasing order; the
/// constructors sort them.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<S> {
    dim: usize,
    bound: S,
    coords: Vec<S>,
    tol: Tolerances,
}

impl<S: Scalar> Configuration<S> {
    /// Builds a configuration from points with confidence bound 1.
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self, ConfigError> {
        Self::with_bound(dim, S::one(), points)
    }

    pub fn with_bound(dim: usize, bound: S, points: Vec<Vec<S>>) -> Result<Self, ConfigError> {
        if dim == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        if points.is_empty() {
            return Err(ConfigError::Empty);
        }
        if bound <= S::zero() {
            return Err(ConfigError::NonPositiveBound);
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (agent, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(ConfigError::DimensionMismatch {
                    agent,
                    expected: dim,
                    found: p.len(),
                });
            }
            if !S::EXACT && p.iter().any(|x| !x.to_f64().is_finite()) {
                return Err(ConfigError::NonFinite(agent));
            }
            coords.extend(p);
        }
        let mut c = Configuration {
            dim,
            bound,
            coords,
            tol: Tolerances::default(),
        };
        if dim == 1 {
            c.sort_1d();
        }
        Ok(c)
    }

    /// One-dimensional configuration with bound 1; the input is sorted.
    pub fn line(values: Vec<S>) -> Result<Self, ConfigError> {
        Self::new(1, values.into_iter().map(|v| vec![v]).collect())
    }

    pub(crate) fn from_parts(dim: usize, bound: S, coords: Vec<S>, tol: Tolerances) -> Self {
        debug_assert!(dim > 0 && !coords.is_empty() && coords.len().is_multiple_of(dim));
        Configuration {
            dim,
            bound,
            coords,
            tol,
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> &S {
        &self.bound
    }

    /// Tolerances in effect; zero for the exact backend.
    pub fn tolerances(&self) -> Tolerances {
        if S::EXACT {
            Tolerances {
                eps_equal: 0.0,
                eps_edge: 0.0,
            }
        } else {
            self.tol
        }
    }

    pub(crate) fn raw_tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[S]> {
        self.coords.chunks(self.dim)
    }

    /// Flat coordinate storage; for `dim == 1` this is the opinion list.
    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<(), ConfigError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(ConfigError::IndexOutOfRange {
                index: i,
                n: self.len(),
            })
        }
    }

    pub fn is_sorted(&self) -> bool {
        self.dim != 1 || self.coords.windows(2).all(|w| w[0] <= w[1])
    }

    pub(crate) fn sort_1d(&mut self) {
        debug_assert_eq!(self.dim, 1);
        self.coords
            .sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    }

    /// Whether two agents are within the confidence bound of each other.
    pub fn within_bound(&self, i: usize, j: usize) -> bool {
        let eps = self.tolerances().eps_edge;
        if self.dim == 1 {
            let d = (self.coords[i].clone() - self.coords[j].clone()).abs();
            d.le_tol(&self.bound, eps)
        } else {
            S::sq_dist_within(&sq_dist(self.point(i), self.point(j)), &self.bound, eps)
        }
    }

    /// Coordinatewise minimum and maximum over all agents.
    pub fn hull(&self) -> (Vec<S>, Vec<S>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.points() {
            for (k, x) in p.iter().enumerate() {
                if *x < lo[k] {
                    lo[k] = x.clone();
                }
                if *x > hi[k] {
                    hi[k] = x.clone();
                }
            }
        }
        (lo, hi)
    }

    /// Converts every coordinate to `f64`, keeping the bound and tolerances.
    pub fn to_float(&self) -> Configuration<f64> {
        Configuration {
            dim: self.dim,
            bound: self.bound.to_f64(),
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
            tol: self.tol,
        }
    }
}

pub(crate) fn sq_dist<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}
