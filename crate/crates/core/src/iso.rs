//! Isomorphism testing by backtracking over images of a generating sequence.
//!
//! Candidate images are pruned by an element's order and centralizer size.
//! After each generator is placed, the partial map is propagated over the
//! subgroup generated so far; any clash or loss of injectivity cuts the
//! branch. A map that is consistent on every edge `x → x·g` of the Cayley
//! graph for a generating set is a homomorphism, so a complete injective
//! assignment is an isomorphism.

use std::ops::ControlFlow;

use crate::group::{Elem, Group};
use crate::spec::GroupSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismWitness {
    /// `map[g]` is the image of element `g`.
    pub map: Vec<Elem>,
}

impl IsomorphismWitness {
    pub fn identity(order: usize) -> Self {
        IsomorphismWitness {
            map: (0..order).collect(),
        }
    }

    /// Full check: bijective and multiplicative.
    pub fn verify(&self, source: &Group, target: &Group) -> bool {
        let n = source.order();
        if target.order() != n || self.map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &m in &self.map {
            if m >= n || hit[m] {
                return false;
            }
            hit[m] = true;
        }
        source.elements().all(|a| {
            source
                .elements()
                .all(|b| self.map[source.mul(a, b)] == target.mul(self.map[a], self.map[b]))
        })
    }

    pub fn inverse(&self) -> IsomorphismWitness {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        IsomorphismWitness { map: inv }
    }
}

/// Cheap isomorphism invariants; equal fingerprints are necessary for an
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
    /// Sorted `(element order, centralizer order, count)` triples.
    pub classes: Vec<(usize, usize, usize)>,
}

impl Fingerprint {
    pub fn of(g: &Group) -> Fingerprint {
        let keys = element_keys(g);
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        let mut classes: Vec<(usize, usize, usize)> = Vec::new();
        for (o, c) in sorted {
            match classes.last_mut() {
                Some(last) if last.0 == o && last.1 == c => last.2 += 1,
                _ => classes.push((o, c, 1)),
            }
        }
        let center_order = keys.iter().filter(|k| k.1 == g.order()).count();
        Fingerprint {
            order: g.order(),
            abelian: center_order == g.order(),
            center_order,
            derived_order: g.derived_subgroup().order(),
            classes,
        }
    }

    /// Number of elements of each order, ascending by order.
    pub fn order_spectrum(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &(o, _, count) in &self.classes {
            match out.last_mut() {
                Some(last) if last.0 == o => last.1 += count,
                _ => out.push((o, count)),
            }
        }
        out
    }
}

/// Per-element `(order, |C(x)|)`.
fn element_keys(g: &Group) -> Vec<(usize, usize)> {
    g.elements()
        .map(|x| {
            let cent = g.elements().filter(|&a| g.commutes(a, x)).count();
            (g.element_order(x), cent)
        })
        .collect()
}

/// Greedy generating sequence: repeatedly add the lowest-index element not
/// yet in the generated subgroup.
pub fn generating_sequence(g: &Group) -> Vec<Elem> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut gens: Vec<Elem> = Vec::new();
    while let Some(next) = (0..g.order()).find(|&x| !inside[x]) {
        gens.push(next);
        for &m in g.subgroup_generated(&gens).members() {
            inside[m] = true;
        }
    }
    gens
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The callback asked to stop.
    Stopped,
    /// Every isomorphism was visited.
    Exhausted,
    /// The node budget ran out first.
    BudgetExceeded,
}

/// Enumerates all isomorphisms `g → h`, calling `visit` with each complete
/// map. `node_budget` caps the number of candidate images tried.
pub fn for_each_isomorphism<F>(g: &Group, h: &Group, node_budget: Option<u64>, mut visit: F) -> SearchOutcome
where
    F: FnMut(&[Elem]) -> ControlFlow<()>,
{
    if g.order() != h.order() {
        return SearchOutcome::Exhausted;
    }
    let (gk, hk) = (element_keys(g), element_keys(h));
    let mut gs = gk.clone();
    let mut hs = hk.clone();
    gs.sort_unstable();
    hs.sort_unstable();
    if gs != hs {
        return SearchOutcome::Exhausted;
    }
    let gens = generating_sequence(g);
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| {
            let mut c: Vec<Elem> = h.elements().filter(|&y| hk[y] == gk[x]).collect();
            // try the same index first so that g → g yields the identity map
            if let Some(pos) = c.iter().position(|&y| y == x) {
                c[..=pos].rotate_right(1);
            }
            c
        })
        .collect();

    let mut search = Search {
        g,
        h,
        gens: &gens,
        candidates: &candidates,
        images: vec![0; gens.len()],
        map: vec![UNSET; g.order()],
        used: vec![false; h.order()],
        mapped: Vec::with_capacity(g.order()),
        nodes: 0,
        budget: node_budget.unwrap_or(u64::MAX),
    };
    search.map[0] = 0;
    search.used[0] = true;
    search.mapped.push(0);
    match search.level(0, &mut visit) {
        Step::Continue => SearchOutcome::Exhausted,
        Step::Stop => SearchOutcome::Stopped,
        Step::OutOfBudget => SearchOutcome::BudgetExceeded,
    }
}

const UNSET: usize = usize::MAX;

enum Step {
    Continue,
    Stop,
    OutOfBudget,
}

struct Search<'a> {
    g: &'a Group,
    h: &'a Group,
    gens: &'a [Elem],
    candidates: &'a [Vec<Elem>],
    images: Vec<Elem>,
    map: Vec<Elem>,
    used: Vec<bool>,
    /// Elements of G with an assigned image, in assignment order.
    mapped: Vec<Elem>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn level<F>(&mut self, k: usize, visit: &mut F) -> Step
    where
        F: FnMut(&[Elem]) -> ControlFlow<()>,
    {
        if k == self.gens.len() {
            return match visit(&self.map) {
                ControlFlow::Continue(()) => Step::Continue,
                ControlFlow::Break(()) => Step::Stop,
            };
        }
        for &cand in &self.candidates[k] {
            if self.used[cand] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
            self.images[k] = cand;
            let mark = self.mapped.len();
            if self.propagate(k, mark) {
                match self.level(k + 1, visit) {
                    Step::Continue => {}
                    other => return other,
                }
            }
            for &x in &self.mapped[mark..] {
                self.used[self.map[x]] = false;
                self.map[x] = UNSET;
            }
            self.mapped.truncate(mark);
        }
        Step::Continue
    }

    /// Extends the map from ⟨g₀..g_{k-1}⟩ to ⟨g₀..g_k⟩, checking every edge
    /// `x → x·g_j` with `j ≤ k`. Edges with `j < k` between previously mapped
    /// elements were checked at earlier levels.
    fn propagate(&mut self, k: usize, mark: usize) -> bool {
        for i in 0..mark {
            let x = self.mapped[i];
            if !self.edge(x, k) {
                return false;
            }
        }
        let mut i = mark;
        while i < self.mapped.len() {
            let x = self.mapped[i];
            for j in 0..=k {
                if !self.edge(x, j) {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    #[inline]
    fn edge(&mut self, x: Elem, j: usize) -> bool {
        let y = self.g.mul(x, self.gens[j]);
        let fy = self.h.mul(self.map[x], self.images[j]);
        if self.map[y] != UNSET {
            return self.map[y] == fy;
        }
        if self.used[fy] {
            return false;
        }
        self.map[y] = fy;
        self.used[fy] = true;
        self.mapped.push(y);
        true
    }
}

/// Some isomorphism `g → h`, if one exists.
pub fn find_isomorphism(g: &Group, h: &Group) -> Option<IsomorphismWitness> {
    let mut found = None;
    for_each_isomorphism(g, h, None, |map| {
        found = Some(IsomorphismWitness { map: map.to_vec() });
        ControlFlow::Break(())
    });
    found
}

/// Name of the first target isomorphic to `g`; targets that fail to
/// realize are skipped.
pub fn identify(g: &Group, targets: &[GroupSpec]) -> Option<String> {
    let fp = Fingerprint::of(g);
    targets.iter().find_map(|t| {
        let candidate = t.realize().ok()?;
        if candidate.order() != g.order() || Fingerprint::of(&candidate) != fp {
            return None;
        }
        find_isomorphism(&candidate, g).map(|_| t.to_string())
    })
}
