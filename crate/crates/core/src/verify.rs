//! Evaluates the solvability thresholds, invariance statements, the
//! inequality `1 + ω(G) ≤ |𝒞(G)|`, the count classification and the stem
//! and class statements over a computed [`Atlas`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Atlas, Catalog, OmegaValue};
use crate::centralizers::ClassificationStatus;
use crate::isoclinism::{self, IsoclinismError, IsoclinismProfile};

/// Largest ω and |𝒞| for which solvability is claimed.
pub const SOLVABLE_THRESHOLD: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// `ω(G) ≤ 20` implies solvable.
    OmegaSolvable,
    /// `|𝒞(G)| ≤ 20` implies solvable.
    CentralizerSolvable,
    /// Isoclinic groups have equal ω.
    OmegaInvariance,
    /// Isoclinic groups have equal |𝒞|.
    CentralizerInvariance,
    /// Central quotient determined by small |𝒞|.
    CountClassification,
    /// `1 + ω(G) ≤ |𝒞(G)|` for non-abelian G.
    OmegaCentralizerBound,
    /// Each group is isoclinic to a stem group in the catalog with the same ω.
    StemRepresentative,
    /// Invariants are constant on isoclinism classes.
    ClassInvariants,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::OmegaSolvable,
        Claim::CentralizerSolvable,
        Claim::OmegaInvariance,
        Claim::CentralizerInvariance,
        Claim::CountClassification,
        Claim::OmegaCentralizerBound,
        Claim::StemRepresentative,
        Claim::ClassInvariants,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::OmegaSolvable => "thm1.2",
            Claim::CentralizerSolvable => "thm3.4",
            Claim::OmegaInvariance => "lemma2.1",
            Claim::CentralizerInvariance => "lemma3.2",
            Claim::CountClassification => "thm3.5",
            Claim::OmegaCentralizerBound => "ineq-1+omega",
            Claim::StemRepresentative => "thm1.1-stem",
            Claim::ClassInvariants => "thm1.1-classes",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Claim::OmegaSolvable => "omega(G) <= 20 implies G solvable",
            Claim::CentralizerSolvable => "|C(G)| <= 20 implies G solvable",
            Claim::OmegaInvariance => "isoclinic groups have equal omega",
            Claim::CentralizerInvariance => "isoclinic groups have equal |C(G)|",
            Claim::CountClassification => "|C(G)| in {4,5,6,7,8} determines G/Z(G) up to the listed types",
            Claim::OmegaCentralizerBound => "1 + omega(G) <= |C(G)| for non-abelian G",
            Claim::StemRepresentative => "every group is isoclinic to a catalog stem group with equal omega",
            Claim::ClassInvariants => "omega, |C(G)| and |G'| are constant on isoclinism classes",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s.trim())
            .ok_or_else(|| {
                let ids: Vec<&str> = Claim::ALL.iter().map(|c| c.id()).collect();
                format!("unknown claim '{s}' (known: {})", ids.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Pass => "PASS",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub description: String,
    pub status: ClaimStatus,
    pub population: usize,
    pub passed: usize,
    pub failed: usize,
    pub indeterminate: usize,
    /// Population members the claim says nothing about.
    pub skipped: usize,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
}

impl ClaimResult {
    fn new(claim: Claim) -> Self {
        ClaimResult {
            claim: claim.id().to_string(),
            description: claim.description().to_string(),
            status: ClaimStatus::Pass,
            population: 0,
            passed: 0,
            failed: 0,
            indeterminate: 0,
            skipped: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn pass(&mut self) {
        self.population += 1;
        self.passed += 1;
    }

    fn fail(&mut self, counterexample: String) {
        self.population += 1;
        self.failed += 1;
        self.counterexamples.push(counterexample);
    }

    fn undecided(&mut self, note: String) {
        self.population += 1;
        self.indeterminate += 1;
        self.notes.push(note);
    }

    fn skip(&mut self) {
        self.population += 1;
        self.skipped += 1;
    }

    fn finish(mut self) -> Self {
        self.status = if self.failed > 0 {
            ClaimStatus::Fail
        } else if self.indeterminate > 0 {
            ClaimStatus::Indeterminate
        } else {
            ClaimStatus::Pass
        };
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub max_order: usize,
    pub catalog_size: usize,
    pub isoclinism_classes: usize,
    pub claims: Vec<ClaimResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status == ClaimStatus::Pass)
    }

    pub fn get(&self, claim: Claim) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.claim == claim.id())
    }

    /// Canonical JSON: object keys sorted.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "catalog: max_order={} groups={} isoclinism_classes={}",
            self.max_order, self.catalog_size, self.isoclinism_classes
        );
        for c in &self.claims {
            let _ = writeln!(
                s,
                "{} {}: population={} passed={} failed={} indeterminate={} skipped={}",
                c.claim, c.status, c.population, c.passed, c.failed, c.indeterminate, c.skipped
            );
            let _ = writeln!(s, "  {}", c.description);
            for x in &c.counterexamples {
                let _ = writeln!(s, "  counterexample: {x}");
            }
            for n in &c.notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        s
    }
}

/// Evaluates `claims` in the given order. `node_budget` bounds each
/// isoclinism test of the stem search.
pub fn verify(catalog: &Catalog, atlas: &Atlas, claims: &[Claim], node_budget: u64) -> VerifyReport {
    let claims = claims
        .iter()
        .map(|&c| match c {
            Claim::OmegaSolvable => solvable_threshold(catalog, atlas, c, |i| atlas.invariants[i].omega, "omega"),
            Claim::CentralizerSolvable => solvable_threshold(
                catalog,
                atlas,
                c,
                |i| OmegaValue::Exact(atlas.invariants[i].centralizer_count),
                "|C|",
            ),
            Claim::OmegaInvariance => invariance(catalog, atlas, c, |i| atlas.invariants[i].omega, "omega"),
            Claim::CentralizerInvariance => invariance(
                catalog,
                atlas,
                c,
                |i| OmegaValue::Exact(atlas.invariants[i].centralizer_count),
                "|C|",
            ),
            Claim::CountClassification => classification(catalog, atlas),
            Claim::OmegaCentralizerBound => bound(catalog, atlas),
            Claim::StemRepresentative => stems(catalog, atlas, node_budget),
            Claim::ClassInvariants => class_invariants(catalog, atlas),
        })
        .collect();
    VerifyReport {
        max_order: catalog.max_order(),
        catalog_size: catalog.len(),
        isoclinism_classes: atlas.partition.class_count(),
        claims,
    }
}

fn solvable_threshold(
    catalog: &Catalog,
    atlas: &Atlas,
    claim: Claim,
    value: impl Fn(usize) -> OmegaValue,
    label: &str,
) -> ClaimResult {
    let mut r = ClaimResult::new(claim);
    let mut minimal: Option<(usize, &str)> = None;
    for (i, e) in catalog.entries().iter().enumerate() {
        let v = value(i);
        let solvable = atlas.invariants[i].solvable;
        if !solvable {
            r.notes.push(format!("non-solvable: {} {label}={v}", e.name));
            if minimal.is_none_or(|(m, _)| v.lower() < m) {
                minimal = Some((v.lower(), &e.name));
            }
        }
        if v.lower() > SOLVABLE_THRESHOLD || solvable {
            r.pass();
        } else if v.upper() <= SOLVABLE_THRESHOLD {
            r.fail(format!("{}: {label}={v}, solvable=false", e.name));
        } else {
            r.undecided(format!("{}: {label}={v} brackets the threshold", e.name));
        }
    }
    match minimal {
        Some((m, name)) => r.notes.push(format!(
            "boundary witness: {name} ({label}={m}, solvable=false) is a smallest non-solvable value in the catalog"
        )),
        None => r.notes.push("no non-solvable group in the catalog".into()),
    }
    r.finish()
}

fn invariance(
    catalog: &Catalog,
    atlas: &Atlas,
    claim: Claim,
    value: impl Fn(usize) -> OmegaValue,
    label: &str,
) -> ClaimResult {
    let mut r = ClaimResult::new(claim);
    let names = |i: usize| catalog.entries()[i].name.as_str();
    for &(a, b) in &atlas.partition.witnessed {
        match (value(a).exact(), value(b).exact()) {
            (Some(x), Some(y)) if x == y => r.pass(),
            (Some(x), Some(y)) => r.fail(format!("{} {label}={x} vs {} {label}={y}", names(a), names(b))),
            _ => r.undecided(format!("{} / {}: {label} not exact", names(a), names(b))),
        }
    }
    r.notes.push(format!("witnessed isoclinic pairs: {}", atlas.partition.witnessed.len()));
    r.finish()
}

fn classification(catalog: &Catalog, atlas: &Atlas) -> ClaimResult {
    let mut r = ClaimResult::new(Claim::CountClassification);
    let mut observed: BTreeMap<(usize, String), usize> = BTreeMap::new();
    for (i, e) in catalog.entries().iter().enumerate() {
        let c = &atlas.invariants[i].classification;
        match &c.status {
            ClassificationStatus::Consistent { .. } => {
                r.pass();
                let q = c.quotient_name.clone().unwrap_or_default();
                *observed.entry((c.count, q)).or_default() += 1;
            }
            ClassificationStatus::Violation { reason } => r.fail(format!("{}: {reason}", e.name)),
            ClassificationStatus::Abelian | ClassificationStatus::Unclassified => r.skip(),
        }
    }
    for ((n, q), k) in observed {
        r.notes.push(format!("n={n}: G/Z(G) = {q} ({k} groups)"));
    }
    r.finish()
}

fn bound(catalog: &Catalog, atlas: &Atlas) -> ClaimResult {
    let mut r = ClaimResult::new(Claim::OmegaCentralizerBound);
    for (i, e) in catalog.entries().iter().enumerate() {
        let inv = &atlas.invariants[i];
        if inv.abelian {
            continue;
        }
        let n = inv.centralizer_count;
        if inv.omega.upper() < n {
            r.pass();
        } else if 1 + inv.omega.lower() > n {
            r.fail(format!("{}: omega={}, |C|={n}", e.name, inv.omega));
        } else {
            r.undecided(format!("{}: omega={} brackets |C|-1={}", e.name, inv.omega, n - 1));
        }
    }
    r.finish()
}

fn stems(catalog: &Catalog, atlas: &Atlas, node_budget: u64) -> ClaimResult {
    let mut r = ClaimResult::new(Claim::StemRepresentative);
    let profiles: Vec<Option<IsoclinismProfile>> = catalog
        .entries()
        .par_iter()
        .map(|e| Some(IsoclinismProfile::new(&e.group)))
        .collect();
    let outcomes: Vec<Result<isoclinism::StemRepresentative, IsoclinismError>> = profiles
        .par_iter()
        .map(|p| isoclinism::find_stem_in_profiles(p.as_ref().unwrap(), &profiles, node_budget))
        .collect();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let name = &catalog.entries()[i].name;
        match outcome {
            Ok(rep) => {
                let stem = &catalog.entries()[rep.index];
                let (a, b) = (atlas.invariants[i].omega, atlas.invariants[rep.index].omega);
                let checked = rep.witness.verify(&catalog.entries()[i].group, &stem.group);
                if !atlas.invariants[rep.index].stem || checked.is_err() {
                    r.fail(format!("{name}: representative {} failed re-verification", stem.name));
                } else if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
                    if x == y {
                        r.pass();
                    } else {
                        r.fail(format!("{name}: omega={x}, stem {} omega={y}", stem.name));
                    }
                } else {
                    r.undecided(format!("{name}: omega not exact"));
                }
            }
            // a stem group of a class may exceed the catalog's order bound
            Err(IsoclinismError::CatalogExhausted) => r.skip(),
            Err(IsoclinismError::Indeterminate) => r.undecided(format!("{name}: isoclinism test over budget")),
        }
    }
    r.finish()
}

fn class_invariants(catalog: &Catalog, atlas: &Atlas) -> ClaimResult {
    let mut r = ClaimResult::new(Claim::ClassInvariants);
    let p = &atlas.partition;
    for (class, &rep) in p.representatives.iter().enumerate() {
        let inv = |i: usize| {
            let x = &atlas.invariants[i];
            (x.omega, x.centralizer_count, x.derived_order)
        };
        let members = p.members(class);
        let exact = members.iter().all(|&i| atlas.invariants[i].omega.exact().is_some());
        let mismatch = members.iter().find(|&&i| inv(i) != inv(rep));
        match (mismatch, exact) {
            (Some(&i), _) if exact => r.fail(format!(
                "class {class}: {} {:?} vs {} {:?}",
                catalog.entries()[rep].name,
                inv(rep),
                catalog.entries()[i].name,
                inv(i)
            )),
            (None, true) => r.pass(),
            _ => r.undecided(format!("class {class}: omega not exact")),
        }
    }
    if !p.indeterminate.is_empty() {
        r.indeterminate += p.indeterminate.len();
        r.notes.push(format!("{} pair tests ran out of budget", p.indeterminate.len()));
    }
    for (omega, classes) in atlas.classes_per_omega() {
        r.notes.push(format!("omega={omega}: {classes} classes"));
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_catalog, AtlasConfig};

    fn report(max_order: usize, claims: &[Claim]) -> VerifyReport {
        let catalog = build_catalog(max_order).unwrap();
        let atlas = Atlas::compute(&catalog, &AtlasConfig::default());
        verify(&catalog, &atlas, claims, isoclinism::DEFAULT_NODE_BUDGET)
    }

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!("thm9".parse::<Claim>().is_err());
    }

    #[test]
    fn all_claims_pass_to_order_24() {
        let r = report(24, &Claim::ALL);
        for c in &r.claims {
            assert_eq!(c.status, ClaimStatus::Pass, "{}", r.to_text());
            assert!(c.counterexamples.is_empty());
        }
        let bound = r.get(Claim::OmegaCentralizerBound).unwrap();
        assert!(bound.passed > 0);
        assert_eq!(bound.skipped, 0);
    }

    #[test]
    fn no_boundary_witness_below_sixty() {
        let r = report(24, &[Claim::OmegaSolvable]);
        assert!(r.claims[0].notes.iter().any(|n| n.contains("no non-solvable")));
    }

    #[test]
    fn json_is_sorted() {
        let r = report(8, &[Claim::CountClassification]);
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert!(text.starts_with("{\"catalog_size\":"));
        assert!(r.all_pass());
    }
}
