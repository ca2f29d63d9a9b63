//! Gap-vector analysis of the dumbbell-with-chain configuration.
//!
//! For the `3n + 1`-agent configuration the distinct opinions are the left
//! cluster, the `n + 1` chain agents and the right cluster. While the
//! receptivity graph keeps its initial shape, the `n + 2` consecutive gaps
//! `y_0 .. y_{n+1}` evolve linearly, `y_{t+1} = M y_t`, and the rescaled
//! deviations `delta` obey a boundary-forced averaging recurrence. This
//! module extracts both vectors from a trajectory and checks each relation
//! exactly.
//!
//! Gap indices are 0-based `0..=n+1`. Agent indices are the 0-based indices
//! of the sorted configuration: the left cluster is `0..n`, the chain is
//! `n..=2n`, the right cluster is `2n+1..=3n`.

use std::fmt;
use std::io::Write;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::ExactMatrix;
use crate::model::{receptivity, Configuration, ReceptivityGraph, TopologyEvent};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("expected {expected} agents for n = {n}, found {found}")]
    AgentCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("the {side} cluster is no longer coincident")]
    ClusterSplit { side: &'static str },
    #[error("gap analysis needs a one-dimensional configuration")]
    NotLine,
    #[error("gap matrix needs n >= 3, got {0}")]
    TooSmall(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapVector<S> {
    pub n: usize,
    pub t: usize,
    pub y: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVector<S> {
    pub n: usize,
    pub t: usize,
    pub delta: Vec<S>,
}

impl<S: Scalar> DeltaVector<S> {
    pub fn is_symmetric(&self) -> bool {
        let len = self.delta.len();
        (0..len).all(|i| self.delta[i] == self.delta[len - 1 - i])
    }
}

/// Gap update operator for one `n`, indexed `0..n+2` in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapUpdateMatrix {
    pub n: usize,
    pub m: ExactMatrix,
}

impl GapUpdateMatrix {
    pub fn build(n: usize) -> Result<Self, GapError> {
        if n < 3 {
            return Err(GapError::TooSmall(n));
        }
        let size = n + 2;
        let ni = n as i64;
        let q = Rational::from_ratio;
        // top-left 2x3 block; rows 2..n are the 1/3 band; the bottom rows mirror the top
        let block = [
            [q(ni, (ni + 1) * (ni + 2)), q(1, ni + 2), q(0, 1)],
            [q(ni, ni + 2), q(2 * ni + 1, 3 * (ni + 2)), q(1, 3)],
        ];
        let mut m = ExactMatrix::zeros(size, size);
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
                m.set(size - 1 - i, size - 1 - j, v.clone());
            }
        }
        for i in 2..n {
            for j in i - 1..=i + 1 {
                m.set(i, j, q(1, 3));
            }
        }
        Ok(GapUpdateMatrix { n, m })
    }

    pub fn apply(&self, y: &[Rational]) -> Vec<Rational> {
        self.m.mul_vec(y)
    }

    /// `m[i][j] == m[size-1-i][size-1-j]` for all entries.
    pub fn is_centrosymmetric(&self) -> bool {
        let size = self.m.rows();
        (0..size)
            .all(|i| (0..size).all(|j| self.m.get(i, j) == self.m.get(size - 1 - i, size - 1 - j)))
    }
}

/// Gaps between consecutive distinct positions of a dumbbell-chain state.
pub fn gaps_from_state<S: Scalar>(
    c: &Configuration<S>,
    n: usize,
    t: usize,
) -> Result<GapVector<S>, GapError> {
    if c.dim() != 1 {
        return Err(GapError::NotLine);
    }
    let expected = 3 * n + 1;
    if c.len() != expected {
        return Err(GapError::AgentCount {
            n,
            expected,
            found: c.len(),
        });
    }
    let xs = c.coords();
    if xs[..n].iter().any(|x| *x != xs[0]) {
        return Err(GapError::ClusterSplit { side: "left" });
    }
    if xs[2 * n + 1..].iter().any(|x| *x != xs[2 * n + 1]) {
        return Err(GapError::ClusterSplit { side: "right" });
    }
    let y = (0..n + 2)
        .map(|i| xs[n + i].clone() - xs[n + i - 1].clone())
        .collect();
    Ok(GapVector { n, t, y })
}

/// `delta_i = n^2 (1/n - y_i)` at the two ends, `n^2 (1 - y_i)` elsewhere.
pub fn delta_from_gaps<S: Scalar>(g: &GapVector<S>) -> DeltaVector<S> {
    let n = g.n as i64;
    let n_sq = S::from_int(n * n);
    let end = S::from_ratio(1, n);
    let last = g.y.len() - 1;
    let delta =
        g.y.iter()
            .enumerate()
            .map(|(i, y)| {
                let base = if i == 0 || i == last {
                    end.clone()
                } else {
                    S::one()
                };
                n_sq.clone() * (base - y.clone())
            })
            .collect();
    DeltaVector {
        n: g.n,
        t: g.t,
        delta,
    }
}

/// Whether the gaps keep the initial receptivity pattern: every chain gap at
/// most 1 and every pair of adjacent gaps summing to more than 1.
pub fn gaps_preserve_topology(y: &[Rational]) -> bool {
    let one = Rational::one();
    y.iter().all(|g| *g <= one && *g > Rational::zero())
        && y.windows(2).all(|w| &w[0] + &w[1] > one)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseViolation {
    MatrixUpdate {
        t: usize,
        index: usize,
    },
    Recurrence {
        t: usize,
        relation: &'static str,
    },
    EndDeltaOutOfBand {
        t: usize,
        value: String,
    },
    InteriorDeltaTooLarge {
        t: usize,
        index: usize,
        value: String,
    },
    Asymmetric {
        t: usize,
    },
    TopologyPredicateMismatch {
        t: usize,
    },
    Gap {
        t: usize,
        error: GapError,
    },
}

impl fmt::Display for PhaseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseViolation::MatrixUpdate { t, index } => {
                write!(f, "t={t}: y_{{t+1}}[{index}] differs from (M y_t)[{index}]")
            }
            PhaseViolation::Recurrence { t, relation } => {
                write!(f, "t={t}: relation {relation} fails")
            }
            PhaseViolation::EndDeltaOutOfBand { t, value } => {
                write!(f, "t={t}: delta_0 = {value} outside [1/2, 2]")
            }
            PhaseViolation::InteriorDeltaTooLarge { t, index, value } => {
                write!(f, "t={t}: delta_{index} = {value} not below n-2")
            }
            PhaseViolation::Asymmetric { t } => write!(f, "t={t}: delta is not mirror-symmetric"),
            PhaseViolation::TopologyPredicateMismatch { t } => {
                write!(
                    f,
                    "t={t}: gap predicate disagrees with the receptivity graph"
                )
            }
            PhaseViolation::Gap { t, error } => write!(f, "t={t}: {error}"),
        }
    }
}

/// Outcome of checking a dumbbell-chain trajectory against the gap model.
#[derive(Debug, Clone)]
pub struct PhaseReport {
    pub n: usize,
    /// Trajectory length in steps (states minus one).
    pub horizon: usize,
    /// Steps `t -> t+1` whose update was checked against `M`.
    pub checked_steps: usize,
    /// Last `t` at which the `delta` band checks were applied.
    pub band_until: usize,
    /// First `t` whose receptivity graph differs from the initial one.
    pub t_star: Option<usize>,
    pub first_change: Option<TopologyEvent>,
    pub next_change: Option<TopologyEvent>,
    pub first_violation: Option<PhaseViolation>,
    /// `(t, delta_0, delta_1)` over the checked phase, as floats.
    pub end_deltas: Vec<(usize, f64, f64)>,
}

impl PhaseReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }

    /// The first change only adds edges, namely every left-cluster agent to
    /// chain agent `n + 1` and the mirror image on the right.
    pub fn first_change_is_cluster_contact(&self) -> bool {
        let Some(ev) = &self.first_change else {
            return false;
        };
        let n = self.n;
        let mut want: Vec<(usize, usize)> = (0..n).map(|i| (i, n + 1)).collect();
        want.extend((2 * n + 1..=3 * n).map(|j| (2 * n - 1, j)));
        want.sort_unstable();
        let mut got = ev.added.clone();
        got.sort_unstable();
        ev.removed.is_empty() && got == want
    }

    /// The change right after `t*` cuts agent `n + 1` from `n + 2` (and the mirror pair).
    pub fn chain_disconnects_next(&self) -> bool {
        match (&self.first_change, &self.next_change) {
            (Some(first), Some(next)) => {
                let n = self.n;
                next.t == first.t + 1
                    && next.removed.contains(&(n + 1, n + 2))
                    && next.removed.contains(&(2 * n - 2, 2 * n - 1))
            }
            _ => false,
        }
    }
}

impl fmt::Display for PhaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phase report n={} horizon={}", self.n, self.horizon)?;
        writeln!(f, "  checked steps: {}", self.checked_steps)?;
        writeln!(f, "  delta band checked for 1 <= t <= {}", self.band_until)?;
        match self.t_star {
            Some(t) => writeln!(
                f,
                "  t*: {t} (t*/n^2 = {:.4})",
                t as f64 / (self.n * self.n) as f64
            )?,
            None => writeln!(f, "  t*: not reached")?,
        }
        if let Some(ev) = &self.first_change {
            writeln!(f, "  first change: {ev}")?;
            writeln!(
                f,
                "  cluster contact: {}",
                self.first_change_is_cluster_contact()
            )?;
        }
        if let Some(ev) = &self.next_change {
            writeln!(f, "  next change: {ev}")?;
            writeln!(f, "  chain disconnect: {}", self.chain_disconnects_next())?;
        }
        match &self.first_violation {
            Some(v) => write!(f, "  FAIL {v}"),
            None => write!(f, "  all phase invariants hold"),
        }
    }
}

/// Walks an exact dumbbell-chain trajectory and checks, for every step taken
/// while the receptivity graph still equals the initial one:
/// the gap update `y_{t+1} = M y_t`, the three `delta` relations, mirror
/// symmetry, and agreement of the gap predicate with the graph. For
/// `1 <= t <= n^2/8` inside that phase it also checks `delta_0 in [1/2, 2]`
/// and `delta_i < n - 2` on the chain.
pub fn check_phase_invariants(
    n: usize,
    trajectory: &[Configuration<Rational>],
) -> Result<PhaseReport, GapError> {
    let matrix = GapUpdateMatrix::build(n)?;
    let band_limit = n * n / 8;
    let mut report = PhaseReport {
        n,
        horizon: trajectory.len().saturating_sub(1),
        checked_steps: 0,
        band_until: 0,
        t_star: None,
        first_change: None,
        next_change: None,
        first_violation: None,
        end_deltas: Vec::new(),
    };
    let Some(first) = trajectory.first() else {
        return Ok(report);
    };

    let g0 = receptivity(first);
    let graphs: Vec<ReceptivityGraph> = trajectory.iter().map(receptivity).collect();
    let t_star = graphs.iter().position(|g| !g.same_edges(&g0));
    report.t_star = t_star;
    let mut changes = graphs
        .windows(2)
        .enumerate()
        .filter(|&(_t, w)| !w[1].same_edges(&w[0]))
        .map(|(t, w)| {
            let (added, removed) = w[1].diff(&w[0]);
            TopologyEvent {
                t: t + 1,
                added,
                removed,
            }
        });
    report.first_change = changes.next();
    report.next_change = changes.next();

    let phase_end = t_star.unwrap_or(trajectory.len());
    let one_third = Rational::from_ratio(1, 3);
    let two_thirds = Rational::from_ratio(2, 3);
    let nr = Rational::from_int(n as i64);
    let mut violation = None;

    let mut prev: Option<(Vec<Rational>, Vec<Rational>)> = None;
    for (t, state) in trajectory.iter().enumerate().take(phase_end + 1) {
        let gaps = match gaps_from_state(state, n, t) {
            Ok(g) => g,
            Err(error) => {
                violation = Some(PhaseViolation::Gap { t, error });
                break;
            }
        };
        let delta = delta_from_gaps(&gaps);
        if t < phase_end {
            if !delta.is_symmetric() {
                violation = Some(PhaseViolation::Asymmetric { t });
                break;
            }
            if !gaps_preserve_topology(&gaps.y) {
                violation = Some(PhaseViolation::TopologyPredicateMismatch { t });
                break;
            }
        } else if gaps_preserve_topology(&gaps.y) {
            violation = Some(PhaseViolation::TopologyPredicateMismatch { t });
            break;
        }

        if let Some((y_prev, d)) = &prev {
            // step (t-1) -> t, taken under the initial graph
            let s = t - 1;
            let predicted = matrix.apply(y_prev);
            if let Some(index) = (0..n + 2).find(|&i| predicted[i] != gaps.y[i]) {
                violation = Some(PhaseViolation::MatrixUpdate { t: s, index });
                break;
            }
            let e = &delta.delta;
            let zero = Rational::zero();
            let rel0 = e[0] >= zero && e[0] <= Rational::one() + (&d[0] + &d[1]) / &nr;
            let rel1 = e[1] >= zero && e[1] <= &d[0] + &two_thirds * &d[1] + &one_third * &d[2];
            let rel_mid = (2..n)
                .all(|i| e[i] >= zero && e[i] == &one_third * (&d[i - 1] + &d[i] + &d[i + 1]));
            let failed = [
                (rel0, "delta_0 bound"),
                (rel1, "delta_1 bound"),
                (rel_mid, "interior average"),
            ]
            .into_iter()
            .find(|(ok, _)| !ok);
            if let Some((_, relation)) = failed {
                violation = Some(PhaseViolation::Recurrence { t: s, relation });
                break;
            }
            report.checked_steps += 1;
        }

        if t >= 1 && t <= band_limit && t < phase_end {
            let d0 = &delta.delta[0];
            if *d0 < Rational::from_ratio(1, 2) || *d0 > Rational::from_int(2) {
                violation = Some(PhaseViolation::EndDeltaOutOfBand {
                    t,
                    value: d0.to_string(),
                });
                break;
            }
            let cap = Rational::from_int(n as i64 - 2);
            if let Some(index) = (1..=n).find(|&i| delta.delta[i] >= cap) {
                violation = Some(PhaseViolation::InteriorDeltaTooLarge {
                    t,
                    index,
                    value: delta.delta[index].to_string(),
                });
                break;
            }
            report.band_until = t;
        }
        if t < phase_end {
            report.end_deltas.push((
                t,
                Scalar::to_f64(&delta.delta[0]),
                Scalar::to_f64(&delta.delta[1]),
            ));
        }
        prev = Some((gaps.y, delta.delta));
    }
    report.first_violation = violation;
    Ok(report)
}

/// One point of the `delta_1(t) / sqrt(t)` growth series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthPoint {
    pub t: usize,
    pub delta1: f64,
    pub ratio: f64,
}

/// `delta_1(t) / sqrt(t)` for every `t >= 1` whose state still has
/// coincident end clusters. Stops at the first state that does not.
pub fn exploratory_growth<S: Scalar>(
    n: usize,
    trajectory: &[Configuration<S>],
) -> Vec<GrowthPoint> {
    trajectory
        .iter()
        .enumerate()
        .skip(1)
        .map_while(|(t, c)| {
            let g = gaps_from_state(c, n, t).ok()?;
            let delta1 = delta_from_gaps(&g).delta[1].to_f64();
            Some(GrowthPoint {
                t,
                delta1,
                ratio: delta1 / (t as f64).sqrt(),
            })
        })
        .collect()
}

pub fn write_growth_csv<W: Write>(out: W, series: &[GrowthPoint]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "delta1", "ratio"])?;
    for p in series {
        w.write_record([p.t.to_string(), p.delta1.to_string(), p.ratio.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Long-form CSV `t,i,y,delta` for every state with coincident end clusters.
pub fn write_gap_csv<W: Write, S: Scalar>(
    out: W,
    n: usize,
    trajectory: &[Configuration<S>],
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "i", "y", "delta"])?;
    for (t, c) in trajectory.iter().enumerate() {
        let Ok(g) = gaps_from_state(c, n, t) else {
            break;
        };
        let d = delta_from_gaps(&g);
        for (i, (y, delta)) in g.y.iter().zip(&d.delta).enumerate() {
            w.write_record([
                t.to_string(),
                i.to_string(),
                y.to_string(),
                delta.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
