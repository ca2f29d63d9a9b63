use crate::scalar::Scalar;

use super::config::{ConfigError, Configuration};

/// All agents within the confidence bound of agent `i`, including `i`.
pub fn neighbours<S: Scalar>(c: &Configuration<S>, i: usize) -> Result<Vec<usize>, ConfigError> {
    c.check_index(i)?;
    Ok((0..c.len())
        .filter(|&j| j == i || c.within_bound(i, j))
        .collect())
}

/// One synchronous update: every agent moves to the mean of its neighbours.
///
/// The next state is built in full before it replaces the current one.
pub fn step<S: Scalar>(c: &Configuration<S>) -> Configuration<S> {
    let coords = if c.dim() == 1 {
        step_line(c)
    } else {
        step_general(c)
    };
    let mut next =
        Configuration::from_parts(c.dim(), c.bound().clone(), coords, c.raw_tolerances());
    if c.dim() == 1 && !next.is_sorted() {
        // Averaging preserves order in exact arithmetic; rounding can swap
        // two nearly equal floats.
        debug_assert!(!S::EXACT, "exact step broke the opinion order");
        next.sort_1d();
    }
    next
}

/// Sorted-line update over runs of equal opinions with a two-pointer window.
/// Agents sharing a position share a neighbourhood, so each run is averaged once.
fn step_line<S: Scalar>(c: &Configuration<S>) -> Vec<S> {
    let xs = c.coords();
    let bound = c.bound();
    let eps = c.tolerances().eps_edge;

    let mut runs: Vec<(S, usize)> = Vec::new();
    for x in xs {
        match runs.last_mut() {
            Some((v, w)) if v == x => *w += 1,
            _ => runs.push((x.clone(), 1)),
        }
    }

    let mut out = Vec::with_capacity(xs.len());
    let (mut lo, mut hi) = (0usize, 0usize);
    for k in 0..runs.len() {
        let here = &runs[k].0;
        while !(here.clone() - runs[lo].0.clone()).le_tol(bound, eps) {
            lo += 1;
        }
        hi = hi.max(k);
        while hi + 1 < runs.len() && (runs[hi + 1].0.clone() - here.clone()).le_tol(bound, eps) {
            hi += 1;
        }
        let mut sum = S::zero();
        let mut weight = 0usize;
        for (v, w) in &runs[lo..=hi] {
            sum = sum + v.clone() * S::from_int(*w as i64);
            weight += w;
        }
        let mean = sum / S::from_int(weight as i64);
        out.extend(std::iter::repeat_n(mean, runs[k].1));
    }
    out
}

fn step_general<S: Scalar>(c: &Configuration<S>) -> Vec<S> {
    let n = c.len();
    let dim = c.dim();
    let mut out = Vec::with_capacity(n * dim);
    for i in 0..n {
        let mut sum = vec![S::zero(); dim];
        let mut count = 0i64;
        for j in 0..n {
            if j == i || c.within_bound(i, j) {
                for (acc, x) in sum.iter_mut().zip(c.point(j)) {
                    *acc = acc.clone() + x.clone();
                }
                count += 1;
            }
        }
        let count = S::from_int(count);
        out.extend(sum.into_iter().map(|s| s / count.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn exact_line(values: &[(i64, i64)]) -> Configuration<Rational> {
        Configuration::line(values.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    fn triple() -> Configuration<Rational> {
        Configuration::new(
            2,
            vec![
                vec![q(0, 1), q(-1, 2)],
                vec![q(0, 1), q(1, 2)],
                vec![q(1, 1), q(0, 1)],
            ],
        )
        .unwrap()
    }

    /// Direct evaluation of the update rule, agent by agent.
    fn brute_force_step(c: &Configuration<Rational>) -> Vec<Rational> {
        let n = c.len();
        let mut out = Vec::new();
        for i in 0..n {
            let nbrs: Vec<usize> = (0..n)
                .filter(|&j| {
                    let d = c
                        .point(i)
                        .iter()
                        .zip(c.point(j))
                        .map(|(a, b)| (a - b) * (a - b))
                        .fold(q(0, 1), |acc, x| acc + x);
                    d <= q(1, 1)
                })
                .collect();
            for k in 0..c.dim() {
                let s = nbrs.iter().fold(q(0, 1), |acc, &j| acc + &c.point(j)[k]);
                out.push(s / q(nbrs.len() as i64, 1));
            }
        }
        out
    }

    #[test]
    fn neighbour_examples() {
        let c = Configuration::line(vec![0.0, 0.5, 2.0]).unwrap();
        assert_eq!(neighbours(&c, 0).unwrap(), vec![0, 1]);
        assert_eq!(neighbours(&triple(), 0).unwrap(), vec![0, 1]);
        let single = Configuration::line(vec![7.0]).unwrap();
        assert_eq!(neighbours(&single, 0).unwrap(), vec![0]);
        assert!(matches!(
            neighbours(&single, 1),
            Err(ConfigError::IndexOutOfRange { index: 1, n: 1 })
        ));
    }

    #[test]
    fn step_examples() {
        let c = step(&exact_line(&[(1, 1), (2, 1)]));
        assert_eq!(c.coords(), &[q(3, 2), q(3, 2)]);

        let e3 = exact_line(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(step(&e3).coords(), &[q(3, 2), q(2, 1), q(5, 2)]);
        assert_eq!(step(&e3).coords(), brute_force_step(&e3).as_slice());

        let t1 = step(&triple());
        assert_eq!(t1.point(0), &[q(0, 1), q(0, 1)]);
        assert_eq!(t1.point(1), &[q(0, 1), q(0, 1)]);
        assert_eq!(t1.point(2), &[q(1, 1), q(0, 1)]);
        let t2 = step(&t1);
        for p in t2.points() {
            assert_eq!(p, &[q(1, 3), q(0, 1)]);
        }
    }

    #[test]
    fn line_step_matches_brute_force_with_repeats() {
        let c = exact_line(&[
            (-1, 4),
            (-1, 4),
            (0, 1),
            (1, 1),
            (3, 2),
            (5, 2),
            (5, 2),
            (17, 4),
        ]);
        assert_eq!(step(&c).coords(), brute_force_step(&c).as_slice());
    }

    #[test]
    fn float_boundary_counts_as_edge() {
        let c = Configuration::line(vec![0.0, 1.0 + 1e-12]).unwrap();
        let next = step(&c);
        assert!((next.coords()[0] - 0.5).abs() < 1e-12);
        let apart = Configuration::line(vec![0.0, 1.0 + 1e-6]).unwrap();
        assert_eq!(step(&apart).coords(), apart.coords());
    }
}
