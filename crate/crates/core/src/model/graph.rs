use std::fmt;

use crate::scalar::Scalar;

use super::config::{sq_dist, Configuration};

/// Undirected edge `(i, j)` with `i < j`.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Adjacency {
    /// Sorted line: the neighbours of `i` are exactly `lo[i]..=hi[i]`.
    Intervals { lo: Vec<usize>, hi: Vec<usize> },
    /// Neighbours of each agent above its own index.
    Upper(Vec<Vec<usize>>),
}

/// Agents joined whenever their opinions are within the confidence bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceptivityGraph {
    n: usize,
    adjacency: Adjacency,
    components: Vec<Vec<usize>>,
}

impl ReceptivityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Components as half-open index ranges, if every component is one.
    /// Always `Some` for a sorted line.
    pub fn component_intervals(&self) -> Option<Vec<std::ops::Range<usize>>> {
        self.components
            .iter()
            .map(|comp| {
                let (first, last) = (comp[0], comp[comp.len() - 1]);
                (last - first + 1 == comp.len()).then_some(first..last + 1)
            })
            .collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = (i.min(j), i.max(j));
        match &self.adjacency {
            Adjacency::Intervals { hi, .. } => b <= hi[a],
            Adjacency::Upper(up) => up[a].binary_search(&b).is_ok(),
        }
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        match &self.adjacency {
            Adjacency::Intervals { lo, hi } => (lo[i]..=hi[i]).filter(|&j| j != i).collect(),
            Adjacency::Upper(up) => {
                let mut out: Vec<usize> = (0..i)
                    .filter(|&j| up[j].binary_search(&i).is_ok())
                    .collect();
                out.extend(&up[i]);
                out
            }
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.n)
            .flat_map(|i| self.upper(i).into_iter().map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.upper(i).len()).sum()
    }

    fn upper(&self, i: usize) -> Vec<usize> {
        match &self.adjacency {
            Adjacency::Intervals { hi, .. } => (i + 1..=hi[i]).collect(),
            Adjacency::Upper(up) => up[i].clone(),
        }
    }

    /// Edges present in `self` but not in `before`, and the reverse.
    pub fn diff(&self, before: &ReceptivityGraph) -> (Vec<Edge>, Vec<Edge>) {
        assert_eq!(self.n, before.n, "graphs over different agent sets");
        let mut added = Vec::new();
        let mut removed = Vec::new();
        match (&self.adjacency, &before.adjacency) {
            (Adjacency::Intervals { hi: now, .. }, Adjacency::Intervals { hi: old, .. }) => {
                for i in 0..self.n {
                    if now[i] > old[i] {
                        added.extend((old[i] + 1..=now[i]).map(|j| (i, j)));
                    } else if now[i] < old[i] {
                        removed.extend((now[i] + 1..=old[i]).map(|j| (i, j)));
                    }
                }
            }
            _ => {
                for i in 0..self.n {
                    let (now, old) = (self.upper(i), before.upper(i));
                    added.extend(now.iter().filter(|j| !old.contains(j)).map(|&j| (i, j)));
                    removed.extend(old.iter().filter(|j| !now.contains(j)).map(|&j| (i, j)));
                }
            }
        }
        (added, removed)
    }

    /// Edge-set equality, ignoring how components were derived.
    pub fn same_edges(&self, other: &ReceptivityGraph) -> bool {
        match (&self.adjacency, &other.adjacency) {
            (Adjacency::Intervals { hi: a, .. }, Adjacency::Intervals { hi: b, .. }) => a == b,
            _ => self.n == other.n && (0..self.n).all(|i| self.upper(i) == other.upper(i)),
        }
    }
}

pub fn receptivity<S: Scalar>(c: &Configuration<S>) -> ReceptivityGraph {
    let n = c.len();
    if c.dim() == 1 {
        let xs = c.coords();
        let bound = c.bound();
        let eps = c.tolerances().eps_edge;
        let mut lo = vec![0; n];
        let mut hi = vec![0; n];
        let (mut l, mut h) = (0usize, 0usize);
        for i in 0..n {
            while !(xs[i].clone() - xs[l].clone()).le_tol(bound, eps) {
                l += 1;
            }
            h = h.max(i);
            while h + 1 < n && (xs[h + 1].clone() - xs[i].clone()).le_tol(bound, eps) {
                h += 1;
            }
            lo[i] = l;
            hi[i] = h;
        }
        let mut components = Vec::new();
        let mut start = 0;
        let mut reach = 0;
        for (i, &h) in hi.iter().enumerate() {
            reach = reach.max(h);
            if reach == i {
                components.push((start..=i).collect());
                start = i + 1;
            }
        }
        ReceptivityGraph {
            n,
            adjacency: Adjacency::Intervals { lo, hi },
            components,
        }
    } else {
        let mut up = vec![Vec::new(); n];
        let mut dsu = DisjointSets::new(n);
        for (i, row) in up.iter_mut().enumerate() {
            for j in i + 1..n {
                if c.within_bound(i, j) {
                    row.push(j);
                    dsu.union(i, j);
                }
            }
        }
        ReceptivityGraph {
            n,
            adjacency: Adjacency::Upper(up),
            components: dsu.groups(),
        }
    }
}

/// Maximal set of agents holding the same opinion.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<S> {
    /// Opinion of the lowest-indexed member.
    pub position: Vec<S>,
    pub members: Vec<usize>,
}

impl<S> Cluster<S> {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl<S: fmt::Display> fmt::Display for Cluster<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos: Vec<String> = self.position.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) x{}", pos.join(", "), self.members.len())
    }
}

/// Coincidence classes of agents. In float mode opinions within
/// `eps_equal` are chained together transitively.
pub fn clusters<S: Scalar>(c: &Configuration<S>) -> Vec<Cluster<S>> {
    let eps = c.tolerances().eps_equal;
    let groups = if c.dim() == 1 {
        let xs = c.coords();
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..xs.len() {
            if xs[i].eq_tol(&xs[i - 1], eps) {
                groups.last_mut().unwrap().push(i);
            } else {
                groups.push(vec![i]);
            }
        }
        groups
    } else {
        let n = c.len();
        let mut dsu = DisjointSets::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let d = sq_dist(c.point(i), c.point(j));
                let same = if S::EXACT {
                    d.is_zero()
                } else {
                    d.to_f64().sqrt() <= eps
                };
                if same {
                    dsu.union(i, j);
                }
            }
        }
        dsu.groups()
    };
    groups
        .into_iter()
        .map(|members| Cluster {
            position: c.point(members[0]).to_vec(),
            members,
        })
        .collect()
}

/// True iff every two distinct cluster positions are farther apart than the bound.
pub fn is_frozen<S: Scalar>(c: &Configuration<S>) -> bool {
    let cl = clusters(c);
    let eps = c.tolerances().eps_edge;
    let bound = c.bound();
    if c.dim() == 1 {
        cl.windows(2).all(|w| {
            let gap = w[1].position[0].clone() - w[0].position[0].clone();
            !gap.le_tol(bound, eps)
        })
    } else {
        (0..cl.len()).all(|a| {
            (a + 1..cl.len())
                .all(|b| !S::sq_dist_within(&sq_dist(&cl[a].position, &cl[b].position), bound, eps))
        })
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so group order is deterministic
            let (keep, drop) = (ra.min(rb), ra.max(rb));
            self.parent[drop] = keep;
        }
    }

    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn cluster_examples() {
        let c = Configuration::line(vec![0.0, 0.0, 2.5]).unwrap();
        let cl = clusters(&c);
        assert_eq!(cl.len(), 2);
        assert_eq!((cl[0].position[0], cl[0].size()), (0.0, 2));
        assert_eq!((cl[1].position[0], cl[1].size()), (2.5, 1));

        let one = clusters(&Configuration::line(vec![0.0]).unwrap());
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].size(), 1);
    }

    #[test]
    fn float_clusters_chain_within_eps() {
        let c = Configuration::line(vec![0.0, 4e-10, 8e-10, 1.0]).unwrap();
        let sizes: Vec<usize> = clusters(&c).iter().map(Cluster::size).collect();
        assert_eq!(sizes, vec![3, 1]);
        let plane =
            Configuration::new(2, vec![vec![0.0, 0.0], vec![3.0, 3.0], vec![0.0, 5e-10]]).unwrap();
        let members: Vec<Vec<usize>> = clusters(&plane).into_iter().map(|c| c.members).collect();
        assert_eq!(members, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn frozen_examples() {
        let f = |v: Vec<Rational>| is_frozen(&Configuration::line(v).unwrap());
        assert!(f(vec![q(0, 1), q(0, 1), q(3, 2)]));
        assert!(!f(vec![q(0, 1), q(1, 1)]));
        assert!(!f(vec![q(0, 1), q(1, 2)]));
        assert!(f(vec![q(5, 1)]));
    }

    #[test]
    fn receptivity_examples() {
        let g = receptivity(&Configuration::line(vec![0.0, 0.9, 2.5]).unwrap());
        assert_eq!(g.components(), &[vec![0, 1], vec![2]]);
        assert_eq!(g.component_intervals().unwrap(), vec![0..2, 2..3]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn line_disconnects_exactly_above_bound() {
        let g = receptivity(
            &Configuration::line(vec![q(0, 1), q(1, 1), q(2, 1) + q(1, 1000)]).unwrap(),
        );
        assert_eq!(g.components(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn plane_graph_and_diff() {
        let triple = Configuration::new(
            2,
            vec![
                vec![q(0, 1), q(-1, 2)],
                vec![q(0, 1), q(1, 2)],
                vec![q(1, 1), q(0, 1)],
            ],
        )
        .unwrap();
        let g0 = receptivity(&triple);
        assert_eq!(g0.edges(), vec![(0, 1)]);
        assert_eq!(g0.components(), &[vec![0, 1], vec![2]]);
        let g1 = receptivity(&super::super::step(&triple));
        assert_eq!(g1.edge_count(), 3);
        let (added, removed) = g1.diff(&g0);
        assert_eq!(added, vec![(0, 2), (1, 2)]);
        assert!(removed.is_empty());
        assert!(!g1.same_edges(&g0));
        assert_eq!(g1.neighbours(2), vec![0, 1]);
    }
}
