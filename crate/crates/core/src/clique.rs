//! Exact maximum clique by branch and bound over bitset adjacency, with
//! greedy sequential colouring as the upper bound.
//!
//! Vertices are expected in search order (index 0 first). The colouring is
//! recomputed at every node for graphs up to [`RECOLOR_LIMIT`] vertices;
//! above that the root colouring is reused and the bound at a node is the
//! number of distinct root colours among its candidates.

use std::time::Instant;

use crate::bitset::BitSet;

pub const RECOLOR_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSearch {
    /// Best clique found, as ascending vertex indices.
    pub clique: Vec<usize>,
    /// True when the search ran to completion.
    pub exact: bool,
    /// Colouring bound at the root; an upper bound on the clique number.
    pub upper_bound: usize,
    pub nodes: u64,
}

pub fn max_clique(adjacency: &[BitSet], deadline: Option<Instant>) -> CliqueSearch {
    search(adjacency, deadline, adjacency.len() <= RECOLOR_LIMIT)
}

fn search(adjacency: &[BitSet], deadline: Option<Instant>, recolor: bool) -> CliqueSearch {
    let n = adjacency.len();
    let all = BitSet::full(n);
    let mut solver = Solver {
        adj: adjacency,
        best: greedy_clique(adjacency),
        current: Vec::new(),
        nodes: 0,
        deadline,
        timed_out: false,
        root_colors: Vec::new(),
        recolor,
    };
    let (_, root_bounds) = color_sort(adjacency, &all);
    let upper_bound = root_bounds.last().copied().unwrap_or(0);
    if !solver.recolor {
        solver.root_colors = root_color_classes(adjacency, &all);
    }
    if n > 0 && solver.best.len() < upper_bound {
        solver.expand(all);
    }
    let mut clique = solver.best;
    clique.sort_unstable();
    CliqueSearch {
        clique,
        exact: !solver.timed_out,
        upper_bound: upper_bound.max(if n > 0 { 1 } else { 0 }),
        nodes: solver.nodes,
    }
}

/// Scans vertices in order, keeping each one adjacent to all kept so far.
fn greedy_clique(adj: &[BitSet]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        if clique.iter().all(|&u| nbrs.contains(u)) {
            clique.push(v);
        }
    }
    clique
}

/// Greedy sequential colouring of `p`. Returns the vertices grouped by
/// colour class and, for each position, the colour number (1-based), which
/// bounds the clique size among that vertex and those before it.
fn color_sort(adj: &[BitSet], p: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(p.count());
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncolored = p.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(&adj[v]);
            uncolored.remove(v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

fn root_color_classes(adj: &[BitSet], all: &BitSet) -> Vec<usize> {
    let (order, bounds) = color_sort(adj, all);
    let mut class = vec![0; adj.len()];
    for (v, c) in order.into_iter().zip(bounds) {
        class[v] = c;
    }
    class
}

struct Solver<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    root_colors: Vec<usize>,
    recolor: bool,
}

impl Solver<'_> {
    fn bounds(&self, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
        if self.recolor {
            return color_sort(self.adj, p);
        }
        let mut order: Vec<usize> = p.iter().collect();
        order.sort_by_key(|&v| (self.root_colors[v], v));
        let mut bounds = Vec::with_capacity(order.len());
        let mut distinct = 0;
        let mut last = 0;
        for &v in &order {
            if self.root_colors[v] != last {
                distinct += 1;
                last = self.root_colors[v];
            }
            bounds.push(distinct);
        }
        (order, bounds)
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes % 1024 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let (order, bounds) = self.bounds(&p);
        for i in (0..order.len()).rev() {
            if self.current.len() + bounds[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
            if self.timed_out {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<BitSet> {
        let mut adj = vec![BitSet::new(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    fn brute_force(adj: &[BitSet]) -> usize {
        let n = adj.len();
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|a| {
                    mask & (1 << a) == 0 || (a + 1..n).all(|b| mask & (1 << b) == 0 || adj[a].contains(b))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_graphs() {
        assert_eq!(max_clique(&[], None).clique, Vec::<usize>::new());
        assert_eq!(max_clique(&graph(3, &[]), None).clique.len(), 1);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(max_clique(&k4, None).clique, vec![0, 1, 2, 3]);
        // 5-cycle: clique number 2, colouring bound 3
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let r = max_clique(&c5, None);
        assert_eq!(r.clique.len(), 2);
        assert!(r.exact);
        assert_eq!(r.upper_bound, 3);
    }

    #[test]
    fn expired_deadline_is_not_exact() {
        // greedy finds an edge, the colouring bound is 3, so the search starts
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let r = max_clique(&c5, Some(Instant::now()));
        assert!(!r.exact);
        assert!(r.clique.len() < r.upper_bound);
        assert!(max_clique(&c5, None).exact);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..13, bits in proptest::collection::vec(any::<bool>(), 78)) {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] { edges.push((a, b)); }
                    k += 1;
                }
            }
            let adj = graph(n, &edges);
            let r = max_clique(&adj, None);
            prop_assert!(r.exact);
            prop_assert_eq!(r.clique.len(), brute_force(&adj));
            let root_only = search(&adj, None, false);
            prop_assert_eq!(root_only.clique.len(), r.clique.len());
            for (i, &a) in r.clique.iter().enumerate() {
                for &b in &r.clique[i + 1..] {
                    prop_assert!(adj[a].contains(b));
                }
            }
            prop_assert!(r.clique.len() <= r.upper_bound);
        }
    }
}
