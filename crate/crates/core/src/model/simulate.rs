use std::fmt;

use crate::scalar::Scalar;

use super::config::Configuration;
use super::dynamics::step;
use super::graph::{is_frozen, receptivity, Edge};

/// A change of the receptivity edge set between `t - 1` and `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyEvent {
    pub t: usize,
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
}

impl TopologyEvent {
    pub fn description(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TopologyEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 4;
        write!(f, "t={}:", self.t)?;
        for (sign, edges) in [('+', &self.added), ('-', &self.removed)] {
            if edges.is_empty() {
                continue;
            }
            write!(f, " {sign}{} [", edges.len())?;
            for (k, (i, j)) in edges.iter().take(SHOWN).enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{i}-{j}")?;
            }
            if edges.len() > SHOWN {
                f.write_str(" ...")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimulationResult<S> {
    pub frozen: bool,
    /// Update steps actually executed.
    pub steps: usize,
    /// First `t` at which the configuration was frozen.
    pub freeze_time: Option<usize>,
    pub final_config: Configuration<S>,
    pub events: Vec<TopologyEvent>,
    /// States `x_0 ..= x_steps`, filled only when recording was requested.
    pub trajectory: Vec<Configuration<S>>,
}

/// Step guard for a configuration: `10 n^3` on the line. Higher dimensions
/// have no practical default and must pass an explicit cap.
pub fn default_max_steps<S: Scalar>(c: &Configuration<S>) -> Option<usize> {
    (c.dim() == 1).then(|| 10usize.saturating_mul(c.len().saturating_pow(3)))
}

/// Iterates the update until the configuration is frozen or `max_steps`
/// updates have run. Running out of steps is reported through `frozen`.
pub fn simulate<S: Scalar>(
    c: &Configuration<S>,
    max_steps: usize,
    record: bool,
) -> SimulationResult<S> {
    let mut current = c.clone();
    let mut graph = receptivity(&current);
    let mut events = Vec::new();
    let mut trajectory = Vec::new();
    if record {
        trajectory.push(current.clone());
    }

    let mut t = 0;
    let mut frozen = is_frozen(&current);
    while !frozen && t < max_steps {
        current = step(&current);
        t += 1;
        let next_graph = receptivity(&current);
        if !next_graph.same_edges(&graph) {
            let (added, removed) = next_graph.diff(&graph);
            events.push(TopologyEvent { t, added, removed });
        }
        graph = next_graph;
        if record {
            trajectory.push(current.clone());
        }
        frozen = is_frozen(&current);
    }

    SimulationResult {
        frozen,
        steps: t,
        freeze_time: frozen.then_some(t),
        final_config: current,
        events,
        trajectory,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn line(v: &[i64]) -> Configuration<Rational> {
        Configuration::line(v.iter().map(|&x| Rational::from_int(x)).collect()).unwrap()
    }

    #[test]
    fn pair_freezes_in_one_step() {
        let r = simulate(&line(&[1, 2]), 10, false);
        assert!(r.frozen);
        assert_eq!(r.freeze_time, Some(1));
        assert_eq!(r.steps, 1);
        assert!(r.trajectory.is_empty());
    }

    #[test]
    fn three_chain_freezes_at_two() {
        let r = simulate(&line(&[1, 2, 3]), 10, true);
        assert_eq!(r.freeze_time, Some(2));
        assert_eq!(
            r.final_config.coords(),
            vec![Rational::from_int(2); 3].as_slice()
        );
        assert_eq!(r.trajectory.len(), 3);
        // 1 and 3 come within reach of each other after the first step
        assert_eq!(r.events.len(), 1);
        assert_eq!(r.events[0].t, 1);
        assert_eq!(r.events[0].added, vec![(0, 2)]);
    }

    #[test]
    fn already_frozen_needs_no_steps() {
        let r = simulate(&line(&[0, 5]), 10, true);
        assert_eq!(r.freeze_time, Some(0));
        assert_eq!(r.steps, 0);
        assert_eq!(r.trajectory.len(), 1);
    }

    #[test]
    fn step_cap_is_a_normal_outcome() {
        let r = simulate(&line(&[1, 2, 3, 4, 5, 6]), 1, false);
        assert!(!r.frozen);
        assert_eq!(r.steps, 1);
        assert_eq!(r.freeze_time, None);
    }

    #[test]
    fn event_description_is_compact() {
        let e = TopologyEvent {
            t: 3,
            added: (0..6).map(|i| (i, 9)).collect(),
            removed: vec![(9, 10)],
        };
        assert_eq!(e.description(), "t=3: +6 [0-9 1-9 2-9 3-9 ...] -1 [9-10]");
    }

    #[test]
    fn default_guard_is_cubic_on_the_line() {
        assert_eq!(default_max_steps(&line(&[1, 2, 3])), Some(270));
        let plane = Configuration::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(default_max_steps(&plane), None);
    }
}
