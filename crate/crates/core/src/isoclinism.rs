//! Isoclinism of finite groups with explicit witnesses, and stem groups.
//!
//! Groups `G` and `H` are isoclinic when there are isomorphisms
//! `φ: G/Z(G) → H/Z(H)` and `θ: G' → H'` such that `φ(g₁Z) = h₁Z` and
//! `φ(g₂Z) = h₂Z` imply `θ([g₁, g₂]) = [h₁, h₂]`.
//!
//! The search enumerates `φ` only. Compatibility fixes `θ` on every
//! commutator value, and the commutator values generate `G'`, so each `φ`
//! admits at most one `θ`; it is accepted when that forced assignment is
//! single-valued and extends to an isomorphism of derived subgroups.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::group::{Elem, Group, Quotient, Subgroup};
use crate::iso::{self, Fingerprint, IsomorphismWitness, SearchOutcome};

/// Backtracking nodes allowed per quotient-isomorphism enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoclinismError {
    #[error("no stem group isoclinic to the input exists in the catalog")]
    CatalogExhausted,
    #[error("isoclinism search budget exhausted before a stem representative was found")]
    Indeterminate,
}

/// `α(aZ, bZ) = [a, b]`, indexed by coset numbers of `G/Z(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorMap {
    cosets: usize,
    table: Vec<Elem>,
}

impl CommutatorMap {
    fn from_quotient(g: &Group, q: &Quotient) -> CommutatorMap {
        let k = q.representatives.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &q.representatives {
            for &b in &q.representatives {
                table.push(g.commutator(a, b));
            }
        }
        CommutatorMap { cosets: k, table }
    }

    pub fn cosets(&self) -> usize {
        self.cosets
    }

    pub fn get(&self, c1: usize, c2: usize) -> Elem {
        self.table[c1 * self.cosets + c2]
    }
}

/// The commutator map on coset pairs. Well-definedness is checked by
/// recomputing with the largest member of each coset.
pub fn commutator_map(g: &Group) -> CommutatorMap {
    let q = g.quotient(&g.center()).expect("center is normal");
    let alpha = CommutatorMap::from_quotient(g, &q);
    let largest = largest_representatives(&q);
    for (c1, &a) in largest.iter().enumerate() {
        for (c2, &b) in largest.iter().enumerate() {
            assert_eq!(alpha.get(c1, c2), g.commutator(a, b), "commutator map not well defined");
        }
    }
    alpha
}

fn largest_representatives(q: &Quotient) -> Vec<Elem> {
    let mut reps = vec![0; q.representatives.len()];
    for (g, &c) in q.projection.iter().enumerate() {
        reps[c] = reps[c].max(g);
    }
    reps
}

/// Everything isoclinism testing needs about one group, computed once.
#[derive(Clone, Debug)]
pub struct IsoclinismProfile<'g> {
    group: &'g Group,
    center: Subgroup,
    quotient: Quotient,
    derived: Subgroup,
    alpha: CommutatorMap,
    quotient_fingerprint: Fingerprint,
}

impl<'g> IsoclinismProfile<'g> {
    pub fn new(group: &'g Group) -> Self {
        let center = group.center();
        let quotient = group.quotient(&center).expect("center is normal");
        let derived = group.derived_subgroup();
        let alpha = CommutatorMap::from_quotient(group, &quotient);
        let quotient_fingerprint = Fingerprint::of(&quotient.group);
        IsoclinismProfile {
            group,
            center,
            quotient,
            derived,
            alpha,
            quotient_fingerprint,
        }
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn center(&self) -> &Subgroup {
        &self.center
    }

    pub fn derived(&self) -> &Subgroup {
        &self.derived
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn is_stem(&self) -> bool {
        self.center.is_subset_of(&self.derived)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoclinismWitness {
    pub source_order: usize,
    pub target_order: usize,
    /// Coset `c` of `G/Z(G)` maps to coset `quotient_map[c]` of `H/Z(H)`.
    pub quotient_map: Vec<usize>,
    /// Members of `G'`, ascending.
    pub derived_source: Vec<Elem>,
    /// `derived_target[i]` is the image of `derived_source[i]` in `H'`.
    pub derived_target: Vec<Elem>,
    /// Smallest element of each coset of `Z(G)`.
    pub coset_reps_source: Vec<Elem>,
    /// Smallest element of each coset of `Z(H)`.
    pub coset_reps_target: Vec<Elem>,
}

impl IsoclinismWitness {
    pub fn quotient_iso(&self) -> IsomorphismWitness {
        IsomorphismWitness {
            map: self.quotient_map.clone(),
        }
    }

    pub fn derived_image(&self, x: Elem) -> Option<Elem> {
        self.derived_source
            .binary_search(&x)
            .ok()
            .map(|i| self.derived_target[i])
    }

    /// The witness read in the other direction.
    pub fn inverse(&self) -> IsoclinismWitness {
        let mut pairs: Vec<(Elem, Elem)> = self
            .derived_target
            .iter()
            .copied()
            .zip(self.derived_source.iter().copied())
            .collect();
        pairs.sort_unstable();
        IsoclinismWitness {
            source_order: self.target_order,
            target_order: self.source_order,
            quotient_map: self.quotient_iso().inverse().map,
            derived_source: pairs.iter().map(|p| p.0).collect(),
            derived_target: pairs.iter().map(|p| p.1).collect(),
            coset_reps_source: self.coset_reps_target.clone(),
            coset_reps_target: self.coset_reps_source.clone(),
        }
    }

    /// Canonical JSON (sorted keys).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// Full re-verification independent of the search: both maps are
    /// isomorphisms, and compatibility holds for every pair `(g₁, g₂)` of
    /// elements of `G`, using the largest member of each coset of `Z(H)` as
    /// the representative on the `H` side.
    pub fn verify(&self, g: &Group, h: &Group) -> Result<(), String> {
        let (qg, qh) = self.check_maps(g, h)?;
        let reps_h = largest_representatives(&qh);
        for a in g.elements() {
            for b in g.elements() {
                let ha = reps_h[self.quotient_map[qg.projection[a]]];
                let hb = reps_h[self.quotient_map[qg.projection[b]]];
                let lhs = self
                    .derived_image(g.commutator(a, b))
                    .ok_or_else(|| format!("[{a}, {b}] not in the derived map"))?;
                if lhs != h.commutator(ha, hb) {
                    return Err(format!("compatibility fails for ({a}, {b})"));
                }
            }
        }
        Ok(())
    }

    /// Checks compatibility over coset pairs with caller-chosen
    /// representatives (indexed by coset number on each side).
    pub fn verify_with_representatives(
        &self,
        g: &Group,
        h: &Group,
        reps_g: &[Elem],
        reps_h: &[Elem],
    ) -> Result<(), String> {
        let (qg, qh) = self.check_maps(g, h)?;
        if reps_g.len() != qg.representatives.len() || reps_h.len() != qh.representatives.len() {
            return Err("wrong number of representatives".into());
        }
        for (c, &r) in reps_g.iter().enumerate() {
            if qg.projection[r] != c {
                return Err(format!("{r} is not in coset {c} of Z(G)"));
            }
        }
        for (c, &r) in reps_h.iter().enumerate() {
            if qh.projection[r] != c {
                return Err(format!("{r} is not in coset {c} of Z(H)"));
            }
        }
        for (c1, &a) in reps_g.iter().enumerate() {
            for (c2, &b) in reps_g.iter().enumerate() {
                let lhs = self
                    .derived_image(g.commutator(a, b))
                    .ok_or_else(|| format!("[{a}, {b}] not in the derived map"))?;
                let rhs = h.commutator(reps_h[self.quotient_map[c1]], reps_h[self.quotient_map[c2]]);
                if lhs != rhs {
                    return Err(format!("compatibility fails for cosets ({c1}, {c2})"));
                }
            }
        }
        Ok(())
    }

    fn check_maps(&self, g: &Group, h: &Group) -> Result<(Quotient, Quotient), String> {
        if g.order() != self.source_order || h.order() != self.target_order {
            return Err("group orders do not match the witness".into());
        }
        let qg = g.quotient(&g.center()).map_err(|e| e.to_string())?;
        let qh = h.quotient(&h.center()).map_err(|e| e.to_string())?;
        if !self.quotient_iso().verify(&qg.group, &qh.group) {
            return Err("quotient map is not an isomorphism".into());
        }
        let dg = g.derived_subgroup();
        let dh = h.derived_subgroup();
        if dg.members() != self.derived_source.as_slice() {
            return Err("derived map domain is not G'".into());
        }
        let mut image = self.derived_target.clone();
        image.sort_unstable();
        if image.as_slice() != dh.members() {
            return Err("derived map is not a bijection onto H'".into());
        }
        for &a in &self.derived_source {
            for &b in &self.derived_source {
                let lhs = self.derived_image(g.mul(a, b)).expect("G' closed");
                let rhs = h.mul(self.derived_image(a).unwrap(), self.derived_image(b).unwrap());
                if lhs != rhs {
                    return Err("derived map is not a homomorphism".into());
                }
            }
        }
        Ok((qg, qh))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isoclinism {
    Isoclinic(IsoclinismWitness),
    NotIsoclinic,
    /// The node budget ran out before the search finished.
    Indeterminate { nodes: u64 },
}

impl Isoclinism {
    pub fn witness(&self) -> Option<&IsoclinismWitness> {
        match self {
            Isoclinism::Isoclinic(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_isoclinic(&self) -> bool {
        matches!(self, Isoclinism::Isoclinic(_))
    }
}

pub fn are_isoclinic(g: &Group, h: &Group) -> Isoclinism {
    are_isoclinic_with_budget(g, h, DEFAULT_NODE_BUDGET)
}

pub fn are_isoclinic_with_budget(g: &Group, h: &Group, node_budget: u64) -> Isoclinism {
    are_isoclinic_profiles(&IsoclinismProfile::new(g), &IsoclinismProfile::new(h), node_budget)
}

pub fn are_isoclinic_profiles(a: &IsoclinismProfile, b: &IsoclinismProfile, node_budget: u64) -> Isoclinism {
    if a.quotient.group.order() != b.quotient.group.order()
        || a.derived.order() != b.derived.order()
        || a.quotient_fingerprint != b.quotient_fingerprint
    {
        return Isoclinism::NotIsoclinic;
    }
    let (g, h) = (a.group, b.group);
    let k = a.alpha.cosets();
    let dg = a.derived.members();
    let m = dg.len();
    let pos = |x: Elem| a.derived.position(x).expect("commutators lie in G'");

    // distinct commutator values of G, as positions in G'
    let mut is_value = vec![false; m];
    for &c in &a.alpha.table {
        is_value[pos(c)] = true;
    }
    let values: Vec<usize> = (0..m).filter(|&i| is_value[i]).collect();

    const UNSET: usize = usize::MAX;
    let mut theta = vec![UNSET; m];
    let mut image = vec![UNSET; m];
    let mut used = vec![false; h.order()];
    let mut found: Option<IsoclinismWitness> = None;
    let mut nodes = 0u64;

    let outcome = iso::for_each_isomorphism(&a.quotient.group, &b.quotient.group, Some(node_budget), |phi| {
        nodes += 1;
        theta.fill(UNSET);
        for c1 in 0..k {
            for c2 in 0..k {
                let i = pos(a.alpha.get(c1, c2));
                let target = b.alpha.get(phi[c1], phi[c2]);
                if theta[i] == UNSET {
                    theta[i] = target;
                } else if theta[i] != target {
                    return ControlFlow::Continue(());
                }
            }
        }
        // extend over G' along edges x → x·s for commutator values s
        image.fill(UNSET);
        used.fill(false);
        image[0] = 0;
        used[0] = true;
        let mut queue = vec![0usize];
        let mut qi = 0;
        while qi < queue.len() {
            let xi = queue[qi];
            qi += 1;
            for &si in &values {
                let yi = pos(g.mul(dg[xi], dg[si]));
                let fy = h.mul(image[xi], theta[si]);
                if image[yi] == UNSET {
                    if used[fy] {
                        return ControlFlow::Continue(());
                    }
                    image[yi] = fy;
                    used[fy] = true;
                    queue.push(yi);
                } else if image[yi] != fy {
                    return ControlFlow::Continue(());
                }
            }
        }
        debug_assert_eq!(queue.len(), m);
        found = Some(IsoclinismWitness {
            source_order: g.order(),
            target_order: h.order(),
            quotient_map: phi.to_vec(),
            derived_source: dg.to_vec(),
            derived_target: image.clone(),
            coset_reps_source: a.quotient.representatives.clone(),
            coset_reps_target: b.quotient.representatives.clone(),
        });
        ControlFlow::Break(())
    });
    match (outcome, found) {
        (_, Some(w)) => Isoclinism::Isoclinic(w),
        (SearchOutcome::BudgetExceeded, None) => Isoclinism::Indeterminate { nodes },
        _ => Isoclinism::NotIsoclinic,
    }
}

/// `Z(G) ⊆ G'`.
pub fn is_stem(g: &Group) -> bool {
    g.center().is_subset_of(&g.derived_subgroup())
}

#[derive(Clone, Debug)]
pub struct StemRepresentative {
    /// Index into the catalog slice.
    pub index: usize,
    pub witness: IsoclinismWitness,
}

/// Smallest-order stem group in `catalog` isoclinic to `g`, ties broken by
/// catalog position. Only orders up to `|G/Z(G)|·|G'|` are considered.
pub fn find_stem_representative(g: &Group, catalog: &[Group]) -> Result<StemRepresentative, IsoclinismError> {
    let target = IsoclinismProfile::new(g);
    let profiles: Vec<Option<IsoclinismProfile>> = catalog
        .iter()
        .map(|k| {
            (k.order() <= stem_order_bound(&target) && k.order() % target.quotient.group.order() == 0)
                .then(|| IsoclinismProfile::new(k))
        })
        .collect();
    find_stem_in_profiles(&target, &profiles, DEFAULT_NODE_BUDGET)
}

fn stem_order_bound(p: &IsoclinismProfile) -> usize {
    p.quotient.group.order() * p.derived.order()
}

/// As [`find_stem_representative`] over precomputed profiles; `None`
/// entries are skipped.
pub fn find_stem_in_profiles(
    target: &IsoclinismProfile,
    catalog: &[Option<IsoclinismProfile>],
    node_budget: u64,
) -> Result<StemRepresentative, IsoclinismError> {
    let bound = stem_order_bound(target);
    let mut candidates: Vec<usize> = (0..catalog.len())
        .filter(|&i| {
            catalog[i]
                .as_ref()
                .is_some_and(|p| p.group.order() <= bound && p.is_stem())
        })
        .collect();
    candidates.sort_by_key(|&i| (catalog[i].as_ref().unwrap().group.order(), i));
    let mut indeterminate = false;
    for i in candidates {
        match are_isoclinic_profiles(target, catalog[i].as_ref().unwrap(), node_budget) {
            Isoclinism::Isoclinic(witness) => return Ok(StemRepresentative { index: i, witness }),
            Isoclinism::Indeterminate { .. } => indeterminate = true,
            Isoclinism::NotIsoclinic => {}
        }
    }
    Err(if indeterminate {
        IsoclinismError::Indeterminate
    } else {
        IsoclinismError::CatalogExhausted
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;

    fn g(text: &str) -> Group {
        GroupSpec::parse(text).unwrap().realize().unwrap()
    }

    #[test]
    fn commutator_maps() {
        let alpha = commutator_map(&g("C6"));
        assert_eq!(alpha.cosets(), 1);
        assert_eq!(alpha.get(0, 0), 0);

        let q8 = g("Q8");
        let alpha = commutator_map(&q8);
        assert_eq!(alpha.cosets(), 4);
        let minus_one = q8.center().members()[1];
        for c1 in 0..4 {
            for c2 in 0..4 {
                let expected = if c1 == 0 || c2 == 0 || c1 == c2 { 0 } else { minus_one };
                assert_eq!(alpha.get(c1, c2), expected, "({c1}, {c2})");
            }
        }

        assert_eq!(commutator_map(&g("S3")).cosets(), 6);
    }

    #[test]
    fn abelian_groups_are_isoclinic() {
        let r = are_isoclinic(&g("C4"), &g("C2xC3xC5"));
        let w = r.witness().expect("isoclinic");
        assert!(w.verify(&g("C4"), &g("C2xC3xC5")).is_ok());
    }

    #[test]
    fn d8_q8_isoclinic() {
        let (d8, q8) = (g("D8"), g("Q8"));
        let w = are_isoclinic(&d8, &q8).witness().cloned().expect("isoclinic");
        assert!(w.verify(&d8, &q8).is_ok());
        assert!(w.inverse().verify(&q8, &d8).is_ok());
    }

    #[test]
    fn fast_rejection() {
        assert_eq!(are_isoclinic(&g("S3"), &g("C6")), Isoclinism::NotIsoclinic);
        assert_eq!(are_isoclinic(&g("S3"), &g("D8")), Isoclinism::NotIsoclinic);
    }

    #[test]
    fn factor_order_does_not_matter() {
        assert!(are_isoclinic(&g("S3xC3"), &g("C3xS3")).is_isoclinic());
        assert_eq!(are_isoclinic(&g("D10"), &g("F20")), Isoclinism::NotIsoclinic);
    }

    #[test]
    fn witness_checks_catch_tampering() {
        let (d8, q8) = (g("D8"), g("Q8"));
        let mut w = are_isoclinic(&d8, &q8).witness().cloned().unwrap();
        w.derived_target.swap(0, 1);
        assert!(w.verify(&d8, &q8).is_err());
    }

    #[test]
    fn stems() {
        assert!(is_stem(&g("S3")));
        assert!(is_stem(&g("Q8")));
        assert!(!is_stem(&g("D8xC2")));
        assert!(is_stem(&g("C1")));
        assert!(!is_stem(&g("C2")));
    }

    #[test]
    fn stem_search() {
        let catalog: Vec<Group> = ["C1", "C2", "S3", "D8", "Q8", "D8xC2", "S3xC4"].iter().map(|s| g(s)).collect();
        let r = find_stem_representative(&g("D8xC2"), &catalog).unwrap();
        assert_eq!(catalog[r.index].name(), Some("D8"));
        let r = find_stem_representative(&g("S3xC4"), &catalog).unwrap();
        assert_eq!(catalog[r.index].name(), Some("S3"));
        let r = find_stem_representative(&g("C6"), &catalog).unwrap();
        assert_eq!(catalog[r.index].name(), Some("C1"));
        assert_eq!(
            find_stem_representative(&g("A4"), &catalog).unwrap_err(),
            IsoclinismError::CatalogExhausted
        );
    }

    #[test]
    fn budget_gives_indeterminate() {
        let a = g("D8xD8");
        let b = g("Q8xQ8");
        match are_isoclinic_with_budget(&a, &b, 1) {
            Isoclinism::Indeterminate { .. } | Isoclinism::Isoclinic(_) => {}
            Isoclinism::NotIsoclinic => panic!("budget exhaustion reported as a negative"),
        }
    }

    #[test]
    fn witness_json_has_sorted_keys() {
        let w = are_isoclinic(&g("D8"), &g("Q8")).witness().cloned().unwrap();
        let text = serde_json::to_string(&w.to_json()).unwrap();
        let keys = ["coset_reps_source", "coset_reps_target", "derived_source", "derived_target", "quotient_map"];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|p| p[0] < p[1]));
    }
}
