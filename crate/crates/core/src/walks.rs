//! Lazy random walks on the path `P_n` and the cycle `C_2n`.
//!
//! Every quantity here is exact: hitting counts are power sums of the
//! transition matrix accumulated with rational arithmetic. Vertex indices in
//! the public API are 0-based, so the left end of the path is vertex `0` and
//! the cycle's last vertex is `2n - 1`.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::ExactMatrix;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("walk needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: String },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("vertex {vertex} out of range for {size} states")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("kappa must be positive")]
    NonPositiveKappa,
}

/// Row-stochastic exact transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix(ExactMatrix);

impl TransitionMatrix {
    pub fn new(m: ExactMatrix) -> Result<Self, WalkError> {
        if m.rows() != m.cols() {
            return Err(WalkError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        for row in 0..m.rows() {
            let sum = m.row_sum(row);
            if !sum.is_one() {
                return Err(WalkError::NotStochastic {
                    row,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(TransitionMatrix(m))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.0.get(i, j)
    }

    fn check_vertex(&self, v: usize) -> Result<(), WalkError> {
        if v < self.size() {
            Ok(())
        } else {
            Err(WalkError::VertexOutOfRange {
                vertex: v,
                size: self.size(),
            })
        }
    }
}

fn third(k: i64) -> Rational {
    Rational::from_ratio(k, 3)
}

/// Path on `n` vertices: 1/3 to each neighbour and to stay, with the
/// missing neighbour's mass folded into the self-loop at both ends.
pub fn path_matrix(n: usize) -> Result<TransitionMatrix, WalkError> {
    if n < 2 {
        return Err(WalkError::TooSmall(n));
    }
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i.saturating_sub(1)..=(i + 1).min(n - 1) {
            m.set(i, j, third(1));
        }
    }
    m.set(0, 0, third(2));
    m.set(n - 1, n - 1, third(2));
    TransitionMatrix::new(m)
}

/// Cycle on `2n` vertices, 1/3 at offsets -1, 0, +1.
pub fn cycle_matrix(n: usize) -> Result<TransitionMatrix, WalkError> {
    if n < 2 {
        return Err(WalkError::TooSmall(n));
    }
    let size = 2 * n;
    let mut m = ExactMatrix::zeros(size, size);
    for i in 0..size {
        for j in [(i + size - 1) % size, i, (i + 1) % size] {
            m.set(i, j, third(1));
        }
    }
    TransitionMatrix::new(m)
}

/// Collapses the cycle onto the path by identifying vertex `i` with
/// `2n - 1 - i`. Returns `None` if the partition is not lumpable, i.e. the
/// two members of a pair disagree on the mass sent to some pair.
pub fn fold_cycle(cycle: &TransitionMatrix) -> Option<ExactMatrix> {
    let size = cycle.size();
    if !size.is_multiple_of(2) {
        return None;
    }
    let n = size / 2;
    let pair = |v: usize| v.min(size - 1 - v);
    let mut lumped = ExactMatrix::zeros(n, n);
    for a in 0..n {
        let mut rows = [a, size - 1 - a].map(|rep| {
            let mut mass = vec![Rational::zero(); n];
            for j in 0..size {
                mass[pair(j)] += cycle.get(rep, j);
            }
            mass
        });
        if rows[0] != rows[1] {
            return None;
        }
        for (b, v) in std::mem::take(&mut rows[0]).into_iter().enumerate() {
            lumped.set(a, b, v);
        }
    }
    Some(lumped)
}

/// Expected visit counts `h(source, j)` over times `0..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingCounts {
    pub source: usize,
    pub horizon: usize,
    pub h: Vec<Rational>,
}

/// Walk distribution together with its running sum; advancing by one step
/// adds `P^t` row `source` to the accumulator.
#[derive(Debug, Clone)]
pub struct HitAccumulator<'a> {
    matrix: &'a TransitionMatrix,
    source: usize,
    t: usize,
    dist: Vec<Rational>,
    acc: Vec<Rational>,
}

impl<'a> HitAccumulator<'a> {
    pub fn new(matrix: &'a TransitionMatrix, source: usize) -> Result<Self, WalkError> {
        matrix.check_vertex(source)?;
        let mut dist = vec![Rational::zero(); matrix.size()];
        dist[source] = Rational::one();
        Ok(HitAccumulator {
            matrix,
            source,
            t: 0,
            acc: dist.clone(),
            dist,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `P(X_t = j)`.
    pub fn distribution(&self) -> &[Rational] {
        &self.dist
    }

    /// `h(source, j)` up to and including the current time.
    pub fn hits(&self) -> &[Rational] {
        &self.acc
    }

    pub fn advance(&mut self) {
        self.dist = self.matrix.matrix().vec_mul(&self.dist);
        for (a, d) in self.acc.iter_mut().zip(&self.dist) {
            *a += d;
        }
        self.t += 1;
    }

    pub fn snapshot(&self) -> HittingCounts {
        HittingCounts {
            source: self.source,
            horizon: self.t,
            h: self.acc.clone(),
        }
    }
}

pub fn expected_hits(
    p: &TransitionMatrix,
    source: usize,
    t: usize,
) -> Result<HittingCounts, WalkError> {
    let mut walker = HitAccumulator::new(p, source)?;
    for _ in 0..t {
        walker.advance();
    }
    Ok(walker.snapshot())
}

/// Monte Carlo estimate of `h(source, target)` up to time `t`.
///
/// Sample `k` draws from a ChaCha8 stream seeded with `seed` and stream
/// number `k`, so the estimate does not depend on how samples are spread
/// over threads.
pub fn mc_hits(
    p: &TransitionMatrix,
    source: usize,
    target: usize,
    t: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, WalkError> {
    p.check_vertex(source)?;
    p.check_vertex(target)?;
    let samples = samples.max(1);
    let cumulative: Vec<Vec<(usize, f64)>> = (0..p.size())
        .map(|i| {
            let mut running = 0.0;
            (0..p.size())
                .filter(|&j| !p.get(i, j).is_zero())
                .map(|j| {
                    running += Scalar::to_f64(p.get(i, j));
                    (j, running)
                })
                .collect()
        })
        .collect();

    let total: u64 = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut at = source;
            let mut visits = u64::from(at == target);
            for _ in 0..t {
                let u: f64 = rng.random();
                let row = &cumulative[at];
                at = row
                    .iter()
                    .find(|&&(_, c)| u < c)
                    .map_or(row[row.len() - 1].0, |&(j, _)| j);
                visits += u64::from(at == target);
            }
            visits
        })
        .sum();
    Ok(total as f64 / samples as f64)
}

/// One row of the cycle-folding comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingRow {
    pub t: usize,
    pub path_h11: Rational,
    pub cycle_h11: Rational,
    pub cycle_h1_last: Rational,
}

impl FoldingRow {
    /// Path return count equals cycle return count plus visits to the mirror vertex.
    pub fn identity_holds(&self) -> bool {
        self.path_h11 == &self.cycle_h11 + &self.cycle_h1_last
    }

    /// Mirror vertex is visited no more often than the start.
    pub fn inequality_holds(&self) -> bool {
        self.cycle_h1_last <= self.cycle_h11
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingReport {
    pub n: usize,
    pub rows: Vec<FoldingRow>,
}

impl FoldingReport {
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.identity_holds() && r.inequality_holds())
    }
}

/// Checks, for every `0 <= s <= t`, that the path's return count at its
/// left end equals the cycle's visits to vertex `0` plus vertex `2n - 1`,
/// and that the latter never exceeds the former.
pub fn claim1_identity(n: usize, t: usize) -> Result<FoldingReport, WalkError> {
    let path = path_matrix(n)?;
    let cycle = cycle_matrix(n)?;
    let mut on_path = HitAccumulator::new(&path, 0)?;
    let mut on_cycle = HitAccumulator::new(&cycle, 0)?;
    let last = 2 * n - 1;
    let mut rows = Vec::with_capacity(t + 1);
    for s in 0..=t {
        if s > 0 {
            on_path.advance();
            on_cycle.advance();
        }
        rows.push(FoldingRow {
            t: s,
            path_h11: on_path.hits()[0].clone(),
            cycle_h11: on_cycle.hits()[0].clone(),
            cycle_h1_last: on_cycle.hits()[last].clone(),
        });
    }
    Ok(FoldingReport { n, rows })
}

/// Probability that the cycle walk started at vertex `0` is back there at time `t`.
pub fn return_probability(n: usize, t: usize) -> Result<Rational, WalkError> {
    Ok(return_probabilities(n, t)?.pop().expect("non-empty"))
}

/// `q(0), ..., q(t_max)` for the cycle walk.
pub fn return_probabilities(n: usize, t_max: usize) -> Result<Vec<Rational>, WalkError> {
    let cycle = cycle_matrix(n)?;
    let mut walker = HitAccumulator::new(&cycle, 0)?;
    let mut out = vec![walker.distribution()[0].clone()];
    for _ in 0..t_max {
        walker.advance();
        out.push(walker.distribution()[0].clone());
    }
    Ok(out)
}

/// Central binomial decay: for each `m`, the ratio
/// `C(m, m/2 + ceil(sqrt m)) / C(m, m/2)`, its maximum, and the
/// geometric bound it implies for shifts `r * ceil(sqrt m)`.
#[derive(Debug, Clone)]
pub struct BinomialDecay {
    pub m_max: u64,
    pub r_max: u64,
    pub kappa: Rational,
    pub argmax_m: u64,
    pub ratios: Vec<(u64, Rational)>,
    /// Every `(m, r)` satisfied `C(m, m/2 + r ceil(sqrt m)) <= kappa^r C(m, m/2)`.
    pub geometric_bound_holds: bool,
    /// Smallest `m0` with ratio `<= e^{-1/2}` for every scanned `m >= m0`.
    pub threshold_m: Option<u64>,
}

impl BinomialDecay {
    pub fn kappa_below_one(&self) -> bool {
        self.kappa < Rational::one()
    }
}

fn ceil_sqrt(m: u64) -> u64 {
    let r = m.isqrt();
    if r * r == m {
        r
    } else {
        r + 1
    }
}

fn choose(m: u64, k: u64) -> BigUint {
    if k > m {
        BigUint::zero()
    } else {
        binomial(BigUint::from(m), BigUint::from(k))
    }
}

pub fn claim2_kappa(m_max: u64, r_max: u64) -> BinomialDecay {
    let m_max = m_max.max(2);
    let ratio = |m: u64, r: u64| {
        let centre = choose(m, m / 2);
        let shifted = choose(m, m / 2 + r * ceil_sqrt(m));
        Rational::new(shifted.into(), centre.into())
    };
    let ratios: Vec<(u64, Rational)> = (2..=m_max).map(|m| (m, ratio(m, 1))).collect();
    let (argmax_m, kappa) = ratios.iter().fold((2, Rational::zero()), |best, (m, r)| {
        if *r > best.1 {
            (*m, r.clone())
        } else {
            best
        }
    });

    let geometric_bound_holds = (2..=m_max).all(|m| {
        let mut power = Rational::one();
        (1..=r_max).all(|r| {
            power = &power * &kappa;
            ratio(m, r) <= power
        })
    });

    let limit = (-0.5f64).exp();
    let mut threshold_m = None;
    for (m, r) in ratios.iter().rev() {
        if Scalar::to_f64(r) <= limit {
            threshold_m = Some(*m);
        } else {
            break;
        }
    }

    BinomialDecay {
        m_max,
        r_max,
        kappa,
        argmax_m,
        ratios,
        geometric_bound_holds,
        threshold_m,
    }
}

/// State of the perturbation recurrence at one time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceState {
    pub n: usize,
    pub kappa: Rational,
    pub t: usize,
    pub delta: Vec<Rational>,
}

impl RecurrenceState {
    pub fn is_symmetric(&self) -> bool {
        let n = self.delta.len();
        (0..n).all(|i| self.delta[i] == self.delta[n - 1 - i])
    }

    /// Entries decrease from the ends towards the middle.
    pub fn is_monotone_to_centre(&self) -> bool {
        let n = self.delta.len();
        // 1-based i < n/2  <=>  0-based i + 1 < n/2
        (0..n)
            .filter(|&i| 2 * (i + 1) < n)
            .all(|i| self.delta[i] >= self.delta[i + 1])
    }
}

/// Iterates the boundary-forced recurrence from zero:
/// ends get `kappa + 2/3 own + 1/3 inner neighbour`, interior entries the
/// mean of themselves and both neighbours at the previous time.
pub fn delta_recurrence(
    n: usize,
    kappa: &Rational,
    t_max: usize,
) -> Result<Vec<RecurrenceState>, WalkError> {
    if n < 2 {
        return Err(WalkError::TooSmall(n));
    }
    if *kappa <= Rational::zero() {
        return Err(WalkError::NonPositiveKappa);
    }
    let (one_third, two_thirds) = (third(1), third(2));
    let mut delta = vec![Rational::zero(); n];
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(RecurrenceState {
        n,
        kappa: kappa.clone(),
        t: 0,
        delta: delta.clone(),
    });
    for t in 1..=t_max {
        let mut next = Vec::with_capacity(n);
        next.push(kappa + &two_thirds * &delta[0] + &one_third * &delta[1]);
        for i in 1..n - 1 {
            next.push(&one_third * (&delta[i - 1] + &delta[i] + &delta[i + 1]));
        }
        next.push(kappa + &two_thirds * &delta[n - 1] + &one_third * &delta[n - 2]);
        delta = next;
        out.push(RecurrenceState {
            n,
            kappa: kappa.clone(),
            t,
            delta: delta.clone(),
        });
    }
    Ok(out)
}

/// `(I + P + ... + P^{t-1}) v` with `v = (kappa, 0, ..., 0, kappa)`.
pub fn delta_closed_form(n: usize, kappa: &Rational, t: usize) -> Result<Vec<Rational>, WalkError> {
    let p = path_matrix(n)?;
    let mut term = vec![Rational::zero(); n];
    term[0] = kappa.clone();
    term[n - 1] = kappa.clone();
    let mut sum = vec![Rational::zero(); n];
    for _ in 0..t {
        for (s, x) in sum.iter_mut().zip(&term) {
            *s += x;
        }
        term = p.matrix().mul_vec(&term);
    }
    Ok(sum)
}

/// `max_{1 <= t <= t_max} h_11(t) / sqrt(t)` on the path, with its argmax.
pub fn return_count_constant(n: usize, t_max: usize) -> Result<(f64, usize), WalkError> {
    let p = path_matrix(n)?;
    let mut walker = HitAccumulator::new(&p, 0)?;
    let mut best = (0.0, 0);
    for t in 1..=t_max {
        walker.advance();
        let ratio = Scalar::to_f64(&walker.hits()[0]) / (t as f64).sqrt();
        if ratio > best.0 {
            best = (ratio, t);
        }
    }
    Ok(best)
}

/// `max_{1 <= t <= t_max, i} delta_i(t) / (kappa sqrt(t))`.
pub fn recurrence_constant(n: usize, kappa: &Rational, t_max: usize) -> Result<f64, WalkError> {
    let k = Scalar::to_f64(kappa);
    let states = delta_recurrence(n, kappa, t_max)?;
    Ok(states
        .iter()
        .skip(1)
        .flat_map(|s| {
            let scale = k * (s.t as f64).sqrt();
            s.delta.iter().map(move |d| Scalar::to_f64(d) / scale)
        })
        .fold(0.0, f64::max))
}

/// CSV `t,h11,sqrt_t,ratio` for `1 <= t <= t_max` on the path.
pub fn write_hits_csv<W: Write>(out: W, n: usize, t_max: usize) -> Result<(), WalkCsvError> {
    let p = path_matrix(n)?;
    let mut walker = HitAccumulator::new(&p, 0)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "h11", "sqrt_t", "ratio"])?;
    for t in 1..=t_max {
        walker.advance();
        let h = &walker.hits()[0];
        let sqrt_t = (t as f64).sqrt();
        w.write_record([
            t.to_string(),
            h.to_string(),
            sqrt_t.to_string(),
            (Scalar::to_f64(h) / sqrt_t).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV `t,q,sqrt_t,ratio` for the cycle return probability.
pub fn write_return_csv<W: Write>(out: W, n: usize, t_max: usize) -> Result<(), WalkCsvError> {
    let q = return_probabilities(n, t_max)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "q", "sqrt_t", "ratio"])?;
    for (t, qt) in q.iter().enumerate().skip(1) {
        let sqrt_t = (t as f64).sqrt();
        w.write_record([
            t.to_string(),
            qt.to_string(),
            sqrt_t.to_string(),
            (Scalar::to_f64(qt) * sqrt_t).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Long-form CSV `t,i,delta` of the recurrence, `i` 1-based.
pub fn write_delta_csv<W: Write>(out: W, states: &[RecurrenceState]) -> Result<(), WalkCsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "i", "delta"])?;
    for s in states {
        for (i, d) in s.delta.iter().enumerate() {
            w.write_record([s.t.to_string(), (i + 1).to_string(), d.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Error)]
pub enum WalkCsvError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    /// Sum over all length-t paths of the product of transition weights.
    fn enumerate_hits(p: &TransitionMatrix, i: usize, j: usize, t: usize) -> Rational {
        fn go(
            p: &TransitionMatrix,
            at: usize,
            weight: Rational,
            left: usize,
            j: usize,
        ) -> Rational {
            let here = if at == j {
                weight.clone()
            } else {
                Rational::zero()
            };
            if left == 0 {
                return here;
            }
            (0..p.size())
                .filter(|&k| !p.get(at, k).is_zero())
                .fold(here, |acc, k| {
                    acc + go(p, k, &weight * p.get(at, k), left - 1, j)
                })
        }
        go(p, i, Rational::one(), t, j)
    }

    #[test]
    fn path_matrix_examples() {
        let p2 = path_matrix(2).unwrap();
        assert_eq!(p2.matrix().row(0), &[q(2, 3), q(1, 3)]);
        assert_eq!(p2.matrix().row(1), &[q(1, 3), q(2, 3)]);
        let p3 = path_matrix(3).unwrap();
        assert_eq!(p3.matrix().row(1), &[q(1, 3), q(1, 3), q(1, 3)]);
        for n in 2..8 {
            let p = path_matrix(n).unwrap();
            for i in 0..n {
                assert!(p.matrix().row_sum(i).is_one());
                assert!(p
                    .matrix()
                    .row(i)
                    .iter()
                    .all(|x| [q(0, 1), q(1, 3), q(2, 3)].contains(x)));
            }
        }
        assert_eq!(path_matrix(1).unwrap_err(), WalkError::TooSmall(1));
    }

    #[test]
    fn cycle_matrix_examples() {
        let c2 = cycle_matrix(2).unwrap();
        assert_eq!(c2.size(), 4);
        assert_eq!(c2.matrix().row(0), &[q(1, 3), q(1, 3), q(0, 1), q(1, 3)]);
        assert_eq!(c2.matrix().row(2), &[q(0, 1), q(1, 3), q(1, 3), q(1, 3)]);
        for n in 2..7 {
            let c = cycle_matrix(n).unwrap();
            assert!(c.matrix().is_symmetric());
            assert!((0..2 * n).all(|i| c.matrix().row_sum(i).is_one()));
        }
        assert!(cycle_matrix(0).is_err());
    }

    #[test]
    fn rejects_non_stochastic() {
        let mut m = ExactMatrix::identity(2);
        m.set(0, 1, q(1, 2));
        assert!(matches!(
            TransitionMatrix::new(m),
            Err(WalkError::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            TransitionMatrix::new(ExactMatrix::zeros(2, 3)),
            Err(WalkError::NotSquare { .. })
        ));
    }

    #[test]
    fn powers_stay_stochastic() {
        let p = path_matrix(5).unwrap();
        let p7 = p.matrix().pow(7);
        assert!((0..5).all(|i| p7.row_sum(i).is_one()));
    }

    #[test]
    fn cycle_folds_onto_path() {
        for n in 2..9 {
            let folded = fold_cycle(&cycle_matrix(n).unwrap()).unwrap();
            assert_eq!(&folded, path_matrix(n).unwrap().matrix(), "n = {n}");
        }
    }

    #[test]
    fn hits_examples() {
        let p = path_matrix(4).unwrap();
        let h0 = expected_hits(&p, 1, 0).unwrap();
        assert_eq!(h0.h, vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)]);
        let p2 = path_matrix(2).unwrap();
        assert_eq!(expected_hits(&p2, 0, 1).unwrap().h[0], q(5, 3));
        assert!(expected_hits(&p2, 2, 1).is_err());
    }

    #[test]
    fn hits_match_path_enumeration() {
        for (p, t) in [
            (path_matrix(3).unwrap(), 6),
            (cycle_matrix(2).unwrap(), 5),
            (path_matrix(5).unwrap(), 5),
        ] {
            for i in 0..p.size() {
                let h = expected_hits(&p, i, t).unwrap();
                for j in 0..p.size() {
                    assert_eq!(h.h[j], enumerate_hits(&p, i, j, t), "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn hits_are_monotone_in_time() {
        let p = path_matrix(6).unwrap();
        let mut walker = HitAccumulator::new(&p, 2).unwrap();
        for _ in 0..30 {
            let before = walker.hits().to_vec();
            walker.advance();
            assert!(walker.hits().iter().zip(&before).all(|(a, b)| a >= b));
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_and_close() {
        let p = path_matrix(3).unwrap();
        assert_eq!(mc_hits(&p, 0, 0, 0, 10, 1).unwrap(), 1.0);
        let a = mc_hits(&p, 0, 0, 10, 20_000, 7).unwrap();
        let b = mc_hits(&p, 0, 0, 10, 20_000, 7).unwrap();
        assert_eq!(a, b);
        let exact = Scalar::to_f64(&expected_hits(&p, 0, 10).unwrap().h[0]);
        assert!((a - exact).abs() < 0.1, "{a} vs {exact}");
    }

    #[test]
    fn folding_identity_small_cases() {
        let r = claim1_identity(2, 0).unwrap();
        assert_eq!(r.rows[0].path_h11, q(1, 1));
        assert_eq!(r.rows[0].cycle_h1_last, q(0, 1));
        assert!(claim1_identity(3, 25).unwrap().all_hold());
        assert!(claim1_identity(5, 25)
            .unwrap()
            .rows
            .iter()
            .all(FoldingRow::inequality_holds));
    }

    #[test]
    fn return_probability_examples() {
        assert_eq!(return_probability(4, 0).unwrap(), q(1, 1));
        assert_eq!(return_probability(4, 1).unwrap(), q(1, 3));
        // two steps: stay-stay, left-right, right-left
        assert_eq!(return_probability(4, 2).unwrap(), q(3, 9));
    }

    #[test]
    fn return_probability_decays_like_inverse_sqrt() {
        for n in [5usize, 10, 20] {
            let qs = return_probabilities(n, n * n).unwrap();
            let worst = qs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(t, qt)| Scalar::to_f64(qt) * (t as f64).sqrt())
                .fold(0.0, f64::max);
            assert!(worst <= 2.0, "n={n}: {worst}");
        }
    }

    #[test]
    fn binomial_decay_examples() {
        let d = claim2_kappa(4, 2);
        let r4 = &d.ratios.iter().find(|(m, _)| *m == 4).unwrap().1;
        assert_eq!(*r4, q(1, 6));
        // m = 2 shifts past the top of the row
        assert!(d.ratios[0].1.is_zero());
        assert!(d.kappa_below_one());
        assert!(d.geometric_bound_holds);
    }

    #[test]
    fn recurrence_first_step_and_matrix_form() {
        let kappa = q(3, 2);
        let states = delta_recurrence(6, &kappa, 20).unwrap();
        assert_eq!(
            states[1].delta,
            vec![q(3, 2), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(3, 2)]
        );
        let p = path_matrix(6).unwrap();
        for w in states.windows(2) {
            let mut via_matrix = p.matrix().mul_vec(&w[0].delta);
            via_matrix[0] += &kappa;
            via_matrix[5] += &kappa;
            assert_eq!(w[1].delta, via_matrix);
            assert!(w[1].is_symmetric());
            assert!(w[1].is_monotone_to_centre());
        }
        assert_eq!(
            delta_recurrence(1, &kappa, 3).unwrap_err(),
            WalkError::TooSmall(1)
        );
        assert_eq!(
            delta_recurrence(3, &q(0, 1), 3).unwrap_err(),
            WalkError::NonPositiveKappa
        );
    }

    #[test]
    fn closed_form_is_linear_in_kappa() {
        for t in [1, 5, 17] {
            let one = delta_closed_form(7, &q(1, 1), t).unwrap();
            let two = delta_closed_form(7, &q(2, 1), t).unwrap();
            assert!(one.iter().zip(&two).all(|(a, b)| a * q(2, 1) == *b));
        }
    }

    #[test]
    fn end_coordinate_counts_visits_before_t() {
        // delta_1(t) sums P^s for s < t, i.e. hits up to time t - 1.
        let n = 5;
        let kappa = q(2, 1);
        let p = path_matrix(n).unwrap();
        for t in 1..12 {
            let closed = delta_closed_form(n, &kappa, t).unwrap();
            let h = expected_hits(&p, 0, t - 1).unwrap();
            assert_eq!(closed[0], &kappa * (&h.h[0] + &h.h[n - 1]));
            let h_t = expected_hits(&p, 0, t).unwrap();
            assert_ne!(closed[0], &kappa * (&h_t.h[0] + &h_t.h[n - 1]));
        }
    }

    #[test]
    fn csv_headers() {
        let mut buf = Vec::new();
        write_hits_csv(&mut buf, 2, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("t,h11,sqrt_t,ratio"));
        assert!(text.lines().nth(1).unwrap().starts_with("1,5/3,1,1.66666"));

        let mut buf = Vec::new();
        write_delta_csv(&mut buf, &delta_recurrence(2, &q(1, 1), 1).unwrap()).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,i,delta\n0,1,0\n0,2,0\n1,1,1\n1,2,1\n"
        );
    }
}
