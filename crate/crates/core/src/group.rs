//! Finite groups as validated Cayley tables, plus the structural primitives
//! the rest of the crate builds on: subgroups, centers, centralizers,
//! commutator subgroups, quotients and the derived series.
//!
//! Every group numbers its identity as element `0`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{Perm, PermError};
use crate::spec::GroupSpec;

/// Index of an element inside its group's table.
pub type Elem = usize;

pub const DEFAULT_MAX_ORDER: usize = 2048;

/// Tables up to this order get a full O(n³) associativity scan; larger ones
/// are spot-checked with `10·n²` random triples.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;

const ASSOCIATIVITY_SEED: u64 = 0x006e_6367_726f_7570;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group order exceeds the configured cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    name: Option<String>,
    spec: Option<GroupSpec>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl Group {
    /// Builds a group from an explicit Cayley table, validating every group
    /// axiom and renumbering the identity to `0`.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Group, GroupError> {
        Self::from_cayley_capped(table, DEFAULT_MAX_ORDER)
    }

    pub fn from_cayley_capped(table: &[Vec<usize>], max_order: usize) -> Result<Group, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if n > max_order {
            return Err(GroupError::OrderCapExceeded { cap: max_order });
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} out of range in row {r}")));
            }
        }
        check_latin(n, |a, b| table[a][b])?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;

        // swap labels 0 and `identity`
        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }

        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| flat[a * n + b] == 0)
                .expect("latin rows contain the identity");
            if flat[b * n + a] != 0 {
                return Err(GroupError::NotAGroup(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
            inv[a] = b as u32;
        }

        let group = Group {
            order: n,
            table: flat,
            inv,
            name: None,
            spec: None,
            labels: None,
        };
        group.check_associativity()?;
        Ok(group)
    }

    /// Closes a set of permutations under composition. Elements are numbered
    /// in breadth-first discovery order from the identity, multiplying on the
    /// right by each generator in turn.
    pub fn from_generators(gens: &[Perm], max_order: usize) -> Result<Group, GroupError> {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = gens.iter().map(|g| g.padded(degree)).collect();

        let mut elements = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let p = elements[i].then(g);
                if !index.contains_key(&p) {
                    if elements.len() == max_order {
                        return Err(GroupError::OrderCapExceeded { cap: max_order });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            i += 1;
        }

        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                table[a * n + b] = index[&pa.then(pb)] as u32;
            }
        }
        let mut group = Group::from_table_unchecked(n, table);
        group.labels = Some(elements.iter().map(|p| p.to_string()).collect());
        Ok(group)
    }

    /// Wraps a table that is a group by construction. Only inverses are
    /// derived; the axioms are checked in debug builds.
    pub(crate) fn from_table_unchecked(order: usize, table: Vec<u32>) -> Group {
        debug_assert_eq!(table.len(), order * order);
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inv[a] = row.iter().position(|&x| x == 0).expect("identity in every row") as u32;
        }
        let group = Group {
            order,
            table,
            inv,
            name: None,
            spec: None,
            labels: None,
        };
        debug_assert!(group.check_axioms().is_ok());
        group
    }

    /// Direct product; the pair `(a, b)` is element `a·|other| + b`.
    pub fn direct_product(&self, other: &Group) -> Group {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let mut table = vec![0u32; n * n];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let a = a1 * n2 + a2;
                for b1 in 0..n1 {
                    let c1 = self.mul(a1, b1);
                    for b2 in 0..n2 {
                        table[a * n + b1 * n2 + b2] = (c1 * n2 + other.mul(a2, b2)) as u32;
                    }
                }
            }
        }
        let mut g = Group::from_table_unchecked(n, table);
        if self.labels.is_some() || other.labels.is_some() {
            let mut labels = Vec::with_capacity(n);
            for a1 in 0..n1 {
                for a2 in 0..n2 {
                    labels.push(format!("[{}, {}]", self.label(a1), other.label(a2)));
                }
            }
            g.labels = Some(labels);
        }
        g
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_spec(mut self, spec: GroupSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The name if set, else `order-n group`.
    pub fn display_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("order-{} group", self.order))
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        // a⁻¹b⁻¹ab = (ba)⁻¹(ab)
        self.mul(self.inv(ba), ab)
    }

    #[inline]
    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn power(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    /// Human-readable element: cycle notation for permutation groups,
    /// `#i` otherwise.
    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("#{a}"),
        }
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Re-checks the Latin-square, identity, inverse and associativity laws.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        check_latin(n, |a, b| self.mul(a, b))?;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(GroupError::NotAGroup(format!("bad inverse for {a}")));
            }
        }
        self.check_associativity()
    }

    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order;
        let fail = |a, b, c| {
            Err(GroupError::NotAGroup(format!(
                "associativity fails for ({a}, {b}, {c})"
            )))
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..10 * n * n {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    // ---- subgroups ----------------------------------------------------

    /// Closure of `gens` under multiplication.
    pub fn subgroup_generated(&self, gens: &[Elem]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        Subgroup::new(members, self.order)
    }

    /// Validates that `members` is a subgroup.
    pub fn subgroup_from_members(&self, members: Vec<Elem>) -> Result<Subgroup, GroupError> {
        if members.iter().any(|&m| m >= self.order) {
            return Err(GroupError::NotASubgroup("element out of range".into()));
        }
        let mut inside = vec![false; self.order];
        for &m in &members {
            inside[m] = true;
        }
        if !inside[0] {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !inside[self.inv(a)] {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !inside[self.mul(a, b)] {
                    return Err(GroupError::NotASubgroup(format!("product of {a} and {b} missing")));
                }
            }
        }
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        Ok(Subgroup::new(members, self.order))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new((0..self.order).collect(), self.order)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::new(vec![0], self.order)
    }

    /// `Z(G)`.
    pub fn center(&self) -> Subgroup {
        let members = (0..self.order)
            .filter(|&z| (0..self.order).all(|a| self.commutes(z, a)))
            .collect();
        Subgroup::new(members, self.order)
    }

    /// `C_G(g)`.
    pub fn centralizer(&self, g: Elem) -> Subgroup {
        assert!(g < self.order, "element {g} out of range");
        let members = (0..self.order).filter(|&a| self.commutes(a, g)).collect();
        Subgroup::new(members, self.order)
    }

    /// `[H, H]` for a subgroup `H`.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut is_comm = vec![false; self.order];
        let mut comms = Vec::new();
        for &a in h.members() {
            for &b in h.members() {
                let c = self.commutator(a, b);
                if !is_comm[c] {
                    is_comm[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    /// `G' = [G, G]`.
    pub fn derived_subgroup(&self) -> Subgroup {
        self.commutator_subgroup(&self.whole())
    }

    /// `G ⊇ G' ⊇ G'' ⊇ …`, ending at the first term equal to its own
    /// commutator subgroup.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_subgroup(last);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series()
            .last()
            .is_some_and(Subgroup::is_trivial)
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        let inside = n.indicator();
        (0..self.order).all(|g| {
            let gi = self.inv(g);
            n.members()
                .iter()
                .all(|&x| inside[self.mul(self.mul(gi, x), g)])
        })
    }

    /// `G/N`. Coset `0` contains the identity; the rest are numbered by
    /// their smallest member.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient, GroupError> {
        if n.parent_order() != self.order || !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let unassigned = usize::MAX;
        let mut projection = vec![unassigned; self.order];
        let mut representatives = Vec::new();
        for g in 0..self.order {
            if projection[g] != unassigned {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for &x in n.members() {
                projection[self.mul(g, x)] = c;
            }
        }
        let k = representatives.len();
        let mut table = vec![0u32; k * k];
        for (c1, &r1) in representatives.iter().enumerate() {
            for (c2, &r2) in representatives.iter().enumerate() {
                table[c1 * k + c2] = projection[self.mul(r1, r2)] as u32;
            }
        }
        Ok(Quotient {
            group: Group::from_table_unchecked(k, table),
            projection,
            representatives,
        })
    }

    /// The subgroup `H` as a group in its own right; element `i` of the
    /// result is `h.members()[i]`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Group {
        let members = h.members();
        let k = members.len();
        let mut table = vec![0u32; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * k + j] = h.position(self.mul(a, b)).expect("closed") as u32;
            }
        }
        let mut g = Group::from_table_unchecked(k, table);
        if self.labels.is_some() {
            g.labels = Some(members.iter().map(|&m| self.label(m)).collect());
        }
        g
    }
}

fn check_latin(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; n];
    for r in 0..n {
        for c in 0..n {
            let x = at(r, c);
            if seen[x] == r {
                return Err(GroupError::NotAGroup(format!("row {r} repeats {x}")));
            }
            seen[x] = r;
        }
    }
    seen.fill(usize::MAX);
    for c in 0..n {
        for r in 0..n {
            let x = at(r, c);
            if seen[x] == c {
                return Err(GroupError::NotAGroup(format!("column {c} repeats {x}")));
            }
            seen[x] = c;
        }
    }
    Ok(())
}

/// A subgroup, stored as the sorted element indices of its parent group.
///
/// A `Subgroup` carries only its parent's order, not a reference; it must be
/// used with the group that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<Elem>,
    parent_order: usize,
}

impl Subgroup {
    fn new(mut members: Vec<Elem>, parent_order: usize) -> Subgroup {
        members.sort_unstable();
        assert!(members.first() == Some(&0), "subgroup without identity");
        assert_eq!(parent_order % members.len(), 0, "Lagrange violated");
        Subgroup {
            members,
            parent_order,
        }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: Elem) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub(crate) fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.parent_order];
        for &m in &self.members {
            v[m] = true;
        }
        v
    }
}

/// The result of `G/N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// `projection[g]` is the coset containing `g`.
    pub projection: Vec<usize>,
    /// Smallest member of each coset.
    pub representatives: Vec<Elem>,
}

impl Quotient {
    /// Members of coset `c`, ascending.
    pub fn coset(&self, c: usize) -> Vec<Elem> {
        self.projection
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == c)
            .map(|(g, _)| g)
            .collect()
    }
}
