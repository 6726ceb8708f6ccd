//! The non-commuting graph of a group and its clique number ω(G), the
//! largest size of a set of pairwise non-commuting elements.
//!
//! For an abelian group ω is defined as 1: a single element is vacuously
//! pairwise non-commuting.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::clique;
use crate::group::{Elem, Group};

pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(60);

/// Largest number of non-central elements [`omega_bruteforce`] accepts.
pub const BRUTEFORCE_LIMIT: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmegaError {
    #[error("time budget exceeded: {lower} <= omega <= {upper}")]
    TimeBudgetExceeded {
        lower: usize,
        upper: usize,
        witness: CliqueWitness,
    },
    #[error("{noncentral} non-central elements exceeds the brute-force limit of {limit}")]
    TooLarge { noncentral: usize, limit: usize },
}

/// Graph on the non-central elements; `a ~ b` iff `ab ≠ ba`.
#[derive(Clone, Debug)]
pub struct NoncommutingGraph {
    vertices: Vec<Elem>,
    adjacency: Vec<BitSet>,
}

impl NoncommutingGraph {
    pub fn build(g: &Group) -> NoncommutingGraph {
        let center = g.center();
        let vertices: Vec<Elem> = g.elements().filter(|&x| !center.contains(x)).collect();
        let adjacency = adjacency_over(g, &vertices);
        NoncommutingGraph { vertices, adjacency }
    }

    /// Group elements, ascending; vertex `i` is `vertices()[i]`.
    pub fn vertices(&self) -> &[Elem] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// DIMACS edge format: `p edge <n> <m>` then `e i j` with 1-based
    /// vertices, `i < j`. A `c` comment line maps vertices to elements.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let elems: Vec<String> = self.vertices.iter().map(|e| e.to_string()).collect();
        writeln!(out, "c vertex elements: {}", elems.join(" ")).unwrap();
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count()).unwrap();
        for i in 0..self.vertex_count() {
            for j in self.adjacency[i].iter().filter(|&j| j > i) {
                writeln!(out, "e {} {}", i + 1, j + 1).unwrap();
            }
        }
        out
    }
}

fn adjacency_over(g: &Group, vertices: &[Elem]) -> Vec<BitSet> {
    let n = vertices.len();
    let mut adjacency = vec![BitSet::new(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if !g.commutes(vertices[i], vertices[j]) {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
    }
    adjacency
}

/// A set of pairwise non-commuting elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueWitness {
    elements: Vec<Elem>,
}

impl CliqueWitness {
    pub fn new(mut elements: Vec<Elem>) -> Self {
        elements.sort_unstable();
        CliqueWitness { elements }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Re-checks pairwise non-commutation directly against the table.
    pub fn verify(&self, g: &Group) -> bool {
        let e = &self.elements;
        e.iter().all(|&x| x < g.order())
            && e.windows(2).all(|w| w[0] < w[1])
            && (e.len() <= 1
                || e.iter().enumerate().all(|(i, &a)| e[i + 1..].iter().all(|&b| !g.commutes(a, b))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    pub size: usize,
    pub witness: CliqueWitness,
    /// Branch-and-bound nodes visited.
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct OmegaConfig {
    /// `None` disables the budget.
    pub time_budget: Option<Duration>,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        OmegaConfig {
            time_budget: Some(DEFAULT_TIME_BUDGET),
        }
    }
}

pub fn omega(g: &Group) -> Result<Omega, OmegaError> {
    omega_with(g, &OmegaConfig::default())
}

/// Exact ω(G) with a witness.
///
/// Elements of one coset of `Z(G)` commute with each other and have the same
/// neighbours, so a clique holds at most one element per coset. The search
/// runs on the subgraph induced by the smallest element of each non-central
/// coset, ordered by descending degree with ties broken by element index.
pub fn omega_with(g: &Group, config: &OmegaConfig) -> Result<Omega, OmegaError> {
    let deadline = config.time_budget.map(|d| Instant::now() + d);
    if g.is_abelian() {
        return Ok(Omega {
            size: 1,
            witness: CliqueWitness::new(vec![0]),
            nodes: 0,
        });
    }
    let center = g.center();
    let reps: Vec<Elem> = g
        .elements()
        .filter(|&x| !center.contains(x) && center.members().iter().all(|&z| g.mul(x, z) >= x))
        .collect();
    let degree: Vec<usize> = reps
        .iter()
        .map(|&x| reps.iter().filter(|&&y| !g.commutes(x, y)).count())
        .collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(degree[i]), reps[i]));
    let vertices: Vec<Elem> = order.iter().map(|&i| reps[i]).collect();
    let adjacency = adjacency_over(g, &vertices);

    let result = clique::max_clique(&adjacency, deadline);
    let witness = CliqueWitness::new(result.clique.iter().map(|&v| vertices[v]).collect());
    if result.exact {
        Ok(Omega {
            size: witness.size(),
            witness,
            nodes: result.nodes,
        })
    } else {
        Err(OmegaError::TimeBudgetExceeded {
            lower: witness.size(),
            upper: result.upper_bound,
            witness,
        })
    }
}

/// ω(G) by checking every subset of the non-central elements. Test oracle;
/// limited to [`BRUTEFORCE_LIMIT`] non-central elements.
pub fn omega_bruteforce(g: &Group) -> Result<usize, OmegaError> {
    let noncentral: Vec<Elem> = g
        .elements()
        .filter(|&x| g.elements().any(|a| !g.commutes(x, a)))
        .collect();
    let m = noncentral.len();
    if m > BRUTEFORCE_LIMIT {
        return Err(OmegaError::TooLarge {
            noncentral: m,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    if m == 0 {
        return Ok(1);
    }
    let clash: Vec<u32> = noncentral
        .iter()
        .map(|&x| {
            noncentral
                .iter()
                .enumerate()
                .filter(|(_, &y)| !g.commutes(x, y))
                .fold(0u32, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    // is_clique[mask]: mask minus its lowest vertex is a clique and that
    // vertex clashes with all of it
    let total = 1usize << m;
    let mut is_clique = vec![0u64; total.div_ceil(64)];
    is_clique[0] = 1;
    let mut best = 0;
    for mask in 1..total {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if is_clique[rest / 64] >> (rest % 64) & 1 == 1 && rest as u32 & !clash[v] == 0 {
            is_clique[mask / 64] |= 1 << (mask % 64);
            best = best.max(mask.count_ones() as usize);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;

    fn g(text: &str) -> Group {
        GroupSpec::parse(text).unwrap().realize().unwrap()
    }

    #[test]
    fn abelian_graph_is_empty() {
        let graph = NoncommutingGraph::build(&g("C6"));
        assert_eq!(graph.vertex_count(), 0);
        assert_eq!(graph.to_dimacs().lines().nth(1), Some("p edge 0 0"));
    }

    #[test]
    fn s3_graph() {
        let s3 = g("S3");
        let graph = NoncommutingGraph::build(&s3);
        assert_eq!(graph.vertex_count(), 5);
        let mut missing = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                if !graph.adjacent(i, j) {
                    missing.push((graph.vertices()[i], graph.vertices()[j]));
                }
            }
        }
        assert_eq!(missing.len(), 1);
        let (a, b) = missing[0];
        assert_eq!(s3.element_order(a), 3);
        assert_eq!(s3.element_order(b), 3);
        assert_eq!(graph.edge_count(), 9);
        for i in 0..5 {
            assert!(!graph.adjacent(i, i));
            assert!(graph.degree(i) >= 1);
        }
    }

    #[test]
    fn q8_graph() {
        let q8 = g("Q8");
        let graph = NoncommutingGraph::build(&q8);
        assert_eq!(graph.vertex_count(), 6);
        // each of ±i, ±j, ±k commutes only with its negative among vertices
        for i in 0..6 {
            assert_eq!(graph.degree(i), 4);
        }
        let dimacs = graph.to_dimacs();
        assert!(dimacs.contains("p edge 6 12\n"));
        assert_eq!(dimacs.lines().filter(|l| l.starts_with("e ")).count(), 12);
    }

    #[test]
    fn omega_small_groups() {
        assert_eq!(omega(&g("C6")).unwrap().size, 1);
        assert_eq!(omega(&g("C6")).unwrap().witness.elements(), &[0]);
        assert_eq!(omega(&g("S3")).unwrap().size, 4);
        assert_eq!(omega(&g("Q8")).unwrap().size, 3);
        assert_eq!(omega(&g("D8")).unwrap().size, 3);
    }

    #[test]
    fn omega_a5_is_21() {
        let a5 = g("A5");
        let r = omega(&a5).unwrap();
        assert_eq!(r.size, 21);
        assert!(r.witness.verify(&a5));
    }

    #[test]
    fn bruteforce_oracle() {
        assert_eq!(omega_bruteforce(&g("S3")).unwrap(), 4);
        assert_eq!(omega_bruteforce(&g("D8")).unwrap(), 3);
        assert_eq!(omega_bruteforce(&g("Q8")).unwrap(), 3);
        assert_eq!(omega_bruteforce(&g("C2xC2xC3")).unwrap(), 1);
        assert!(matches!(
            omega_bruteforce(&g("A5")),
            Err(OmegaError::TooLarge { noncentral: 59, .. })
        ));
    }

    #[test]
    fn witness_verification_rejects_commuting_pairs() {
        let s3 = g("S3");
        let three: Vec<Elem> = s3.elements().filter(|&x| s3.element_order(x) == 3).collect();
        assert!(!CliqueWitness::new(three).verify(&s3));
        assert!(CliqueWitness::new(vec![0]).verify(&s3));
    }

    #[test]
    fn zero_budget_brackets_the_answer() {
        let a5 = g("A5");
        let cfg = OmegaConfig {
            time_budget: Some(Duration::ZERO),
        };
        match omega_with(&a5, &cfg) {
            Err(OmegaError::TimeBudgetExceeded { lower, upper, witness }) => {
                assert!(lower <= 21 && 21 <= upper);
                assert!(witness.verify(&a5));
            }
            Ok(r) => assert_eq!(r.size, 21),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn deterministic() {
        let grp = g("S4");
        let a = omega(&grp).unwrap();
        let b = omega(&grp).unwrap();
        assert_eq!(a, b);
    }
}
