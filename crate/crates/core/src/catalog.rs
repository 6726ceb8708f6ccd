//! A catalog of small groups: the built-in families and their direct
//! products up to an order bound, deduplicated up to isomorphism, with
//! per-group invariants, an isoclinism partition, and CSV/JSON atlas output.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::centralizers::{self, Classification};
use crate::group::{Group, DEFAULT_MAX_ORDER};
use crate::iso::{self, Fingerprint};
use crate::isoclinism::{self, Isoclinism, IsoclinismProfile, DEFAULT_NODE_BUDGET};
use crate::noncommuting::{self, Omega, OmegaConfig, OmegaError};
use crate::spec::GroupSpec;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog order {requested} exceeds the configured cap of {cap}")]
    OrderCapExceeded { requested: usize, cap: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub group: Group,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    max_order: usize,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.entries.iter().map(|e| &e.group)
    }

    /// Name of the catalog entry isomorphic to `g`, if any.
    pub fn identify(&self, g: &Group) -> Option<&str> {
        let fp = Fingerprint::of(g);
        self.entries
            .iter()
            .filter(|e| e.fingerprint == fp)
            .find(|e| iso::find_isomorphism(&e.group, g).is_some())
            .map(|e| e.name.as_str())
    }
}

pub fn build_catalog(max_order: usize) -> Result<Catalog, CatalogError> {
    build_catalog_capped(max_order, DEFAULT_MAX_ORDER)
}

/// Families `Cn`, `D2m`, `Sn`, `An`, `Q8`, `F20` up to `max_order`, then
/// direct products. Taking products of catalog members with family members
/// until no new isomorphism type appears gives the same closure as products
/// of arbitrary pairs of members. Among isomorphic candidates the first one
/// wins: families before products, fewer factors before more, then by name.
/// The degenerate family members `D4 = C2xC2`, `D6 = S3`, `S1`, `S2`, `A1`,
/// `A2`, `A3` are left to their preferred names.
pub fn build_catalog_capped(max_order: usize, cap: usize) -> Result<Catalog, CatalogError> {
    if max_order > cap {
        return Err(CatalogError::OrderCapExceeded {
            requested: max_order,
            cap,
        });
    }
    let mut bases: Vec<(usize, GroupSpec)> = Vec::new();
    for n in 1..=max_order {
        bases.push((n, GroupSpec::Cyclic(n)));
    }
    for m in (8..=max_order).step_by(2) {
        bases.push((m, GroupSpec::Dihedral(m)));
    }
    let mut factorial = 2;
    for n in 3.. {
        factorial *= n;
        if factorial / 2 > max_order {
            break;
        }
        if factorial <= max_order {
            bases.push((factorial, GroupSpec::Symmetric(n)));
        }
        if n >= 4 {
            bases.push((factorial / 2, GroupSpec::Alternating(n)));
        }
    }
    if max_order >= 8 {
        bases.push((8, GroupSpec::Quaternion8));
    }
    if max_order >= 20 {
        bases.push((20, GroupSpec::F20));
    }
    bases.sort_by_key(|(order, spec)| (*order, spec.to_string()));

    let base_groups: Vec<Group> = bases
        .iter()
        .map(|(_, s)| s.realize_capped(cap).expect("family members realize"))
        .collect();
    let base_index: HashMap<String, usize> = bases
        .iter()
        .enumerate()
        .map(|(i, (_, s))| (s.to_string(), i))
        .collect();

    let mut builder = Builder {
        entries: Vec::new(),
        by_fingerprint: HashMap::new(),
    };
    // factor lists (base indices) per entry
    let mut factors: Vec<Vec<usize>> = Vec::new();
    let mut frontier = Vec::new();
    for (i, g) in base_groups.iter().enumerate() {
        if let Some(idx) = builder.insert(bases[i].1.clone(), g.clone()) {
            factors.push(vec![i]);
            frontier.push(idx);
        }
    }

    let mut generated: BTreeSet<Vec<usize>> = BTreeSet::new();
    while !frontier.is_empty() {
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        for &m in &frontier {
            let order = builder.entries[m].group.order();
            for (b, bg) in base_groups.iter().enumerate() {
                if bg.order() == 1 || order * bg.order() > max_order {
                    continue;
                }
                let mut f = factors[m].clone();
                f.push(b);
                // larger factors first, then by name
                f.sort_by_key(|&i| (std::cmp::Reverse(bases[i].0), bases[i].1.to_string()));
                if generated.insert(f.clone()) {
                    candidates.push(f);
                }
            }
        }
        candidates.sort_by_key(|f| {
            let order: usize = f.iter().map(|&i| bases[i].0).product();
            (order, product_name(&bases, f))
        });
        let built: Vec<(GroupSpec, Group)> = candidates
            .par_iter()
            .map(|f| {
                let spec = product_spec(&bases, f);
                let group = f[1..]
                    .iter()
                    .fold(base_groups[f[0]].clone(), |acc, &i| acc.direct_product(&base_groups[i]))
                    .with_name(spec.to_string())
                    .with_spec(spec.clone());
                (spec, group)
            })
            .collect();
        frontier.clear();
        for ((spec, group), f) in built.into_iter().zip(candidates) {
            if let Some(idx) = builder.insert(spec, group) {
                factors.push(f);
                frontier.push(idx);
            }
        }
    }
    debug_assert!(base_index.len() == bases.len());

    let mut entries = builder.entries;
    entries.sort_by(|a, b| (a.group.order(), &a.name).cmp(&(b.group.order(), &b.name)));
    Ok(Catalog { entries, max_order })
}

fn product_name(bases: &[(usize, GroupSpec)], f: &[usize]) -> String {
    f.iter().map(|&i| bases[i].1.to_string()).collect::<Vec<_>>().join("x")
}

fn product_spec(bases: &[(usize, GroupSpec)], f: &[usize]) -> GroupSpec {
    let mut it = f.iter().rev();
    let last = bases[*it.next().expect("nonempty")].1.clone();
    it.fold(last, |acc, &i| GroupSpec::product(bases[i].1.clone(), acc))
}

struct Builder {
    entries: Vec<CatalogEntry>,
    by_fingerprint: HashMap<Fingerprint, Vec<usize>>,
}

impl Builder {
    /// Adds the group unless an isomorphic entry exists.
    fn insert(&mut self, spec: GroupSpec, group: Group) -> Option<usize> {
        let fingerprint = Fingerprint::of(&group);
        let same = self.by_fingerprint.entry(fingerprint.clone()).or_default();
        if same
            .iter()
            .any(|&i| iso::find_isomorphism(&self.entries[i].group, &group).is_some())
        {
            return None;
        }
        let idx = self.entries.len();
        same.push(idx);
        let name = spec.to_string();
        self.entries.push(CatalogEntry {
            group: group.with_name(name.clone()).with_spec(spec.clone()),
            name,
            spec,
            fingerprint,
        });
        Some(idx)
    }
}

// ---- invariants -----------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct AtlasConfig {
    pub omega: OmegaConfig,
    /// Node budget per isoclinism test.
    pub node_budget: u64,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        AtlasConfig {
            omega: OmegaConfig::default(),
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// ω as computed: exact, or bracketed when the time budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaValue {
    Exact(usize),
    Bounds { lower: usize, upper: usize },
}

impl OmegaValue {
    pub fn exact(&self) -> Option<usize> {
        match self {
            OmegaValue::Exact(v) => Some(*v),
            OmegaValue::Bounds { .. } => None,
        }
    }

    pub fn lower(&self) -> usize {
        match *self {
            OmegaValue::Exact(v) => v,
            OmegaValue::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> usize {
        match *self {
            OmegaValue::Exact(v) => v,
            OmegaValue::Bounds { upper, .. } => upper,
        }
    }

    fn to_json(self) -> Value {
        match self {
            OmegaValue::Exact(v) => json!(v),
            OmegaValue::Bounds { lower, upper } => json!([lower, upper]),
        }
    }
}

impl std::fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OmegaValue::Exact(v) => write!(f, "{v}"),
            OmegaValue::Bounds { lower, upper } => write!(f, "{lower}..{upper}"),
        }
    }
}

impl From<&Result<Omega, OmegaError>> for OmegaValue {
    fn from(r: &Result<Omega, OmegaError>) -> Self {
        match r {
            Ok(o) => OmegaValue::Exact(o.size),
            Err(OmegaError::TimeBudgetExceeded { lower, upper, .. }) => OmegaValue::Bounds {
                lower: *lower,
                upper: *upper,
            },
            Err(OmegaError::TooLarge { .. }) => unreachable!("not produced by omega"),
        }
    }
}

/// Computed invariants of one catalog group.
#[derive(Clone, Debug)]
pub struct GroupInvariants {
    pub order: usize,
    pub abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
    pub quotient_order: usize,
    pub omega: OmegaValue,
    pub omega_result: Result<Omega, OmegaError>,
    pub centralizer_count: usize,
    pub solvable: bool,
    pub stem: bool,
    /// Catalog name of `G/Z(G)`, if it is in the catalog.
    pub central_quotient: Option<String>,
    pub classification: Classification,
}

pub fn group_invariants(g: &Group, catalog: &Catalog, config: &AtlasConfig) -> GroupInvariants {
    let center = g.center();
    let derived = g.derived_subgroup();
    let q = g.quotient(&center).expect("center is normal").group;
    let omega_result = noncommuting::omega_with(g, &config.omega);
    let centralizer_count = centralizers::centralizer_count(g);
    let central_quotient = catalog.identify(&q).map(str::to_string);
    let classification = centralizers::classify_quotient(centralizer_count, &q);
    GroupInvariants {
        order: g.order(),
        abelian: center.is_whole(),
        center_order: center.order(),
        derived_order: derived.order(),
        quotient_order: q.order(),
        omega: OmegaValue::from(&omega_result),
        omega_result,
        centralizer_count,
        solvable: g.is_solvable(),
        stem: center.is_subset_of(&derived),
        central_quotient,
        classification,
    }
}

// ---- isoclinism partition --------------------------------------------------

#[derive(Clone, Debug, Default)]
pub struct Partition {
    /// Class id per catalog entry.
    pub class_of: Vec<usize>,
    /// Minimal-order member of each class.
    pub representatives: Vec<usize>,
    /// `(member, representative)` pairs joined by an explicit witness.
    pub witnessed: Vec<(usize, usize)>,
    /// Pairs whose test ran out of budget; never merged.
    pub indeterminate: Vec<(usize, usize)>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&i| self.class_of[i] == class).collect()
    }
}

/// Groups are visited in catalog order (ascending order), so each class is
/// represented by a minimal-order member. Isoclinism is an equivalence
/// relation, so testing a group against one representative per class
/// decides its class.
pub fn partition_isoclinism(catalog: &Catalog, node_budget: u64) -> Partition {
    let profiles: Vec<IsoclinismProfile> = catalog
        .entries
        .par_iter()
        .map(|e| IsoclinismProfile::new(&e.group))
        .collect();
    partition_profiles(&profiles, node_budget)
}

pub fn partition_profiles(profiles: &[IsoclinismProfile], node_budget: u64) -> Partition {
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by_key(|&i| (profiles[i].group().order(), i));
    let mut p = Partition {
        class_of: vec![usize::MAX; profiles.len()],
        ..Partition::default()
    };
    for i in order {
        let outcomes: Vec<Isoclinism> = p
            .representatives
            .par_iter()
            .map(|&r| isoclinism::are_isoclinic_profiles(&profiles[i], &profiles[r], node_budget))
            .collect();
        let mut joined = None;
        for (class, outcome) in outcomes.iter().enumerate() {
            let r = p.representatives[class];
            match outcome {
                Isoclinism::Isoclinic(_) => {
                    joined = Some(class);
                    p.witnessed.push((i, r));
                    break;
                }
                Isoclinism::Indeterminate { .. } => p.indeterminate.push((i, r)),
                Isoclinism::NotIsoclinic => {}
            }
        }
        p.class_of[i] = joined.unwrap_or_else(|| {
            p.representatives.push(i);
            p.representatives.len() - 1
        });
    }
    p
}

// ---- atlas -----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasRecord {
    pub name: String,
    pub order: usize,
    pub center_order: usize,
    pub derived_order: usize,
    pub omega: OmegaValue,
    pub centralizer_count: usize,
    pub solvable: bool,
    pub stem: bool,
    pub central_quotient: String,
    pub isoclinism_class: usize,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "name",
    "order",
    "center_order",
    "derived_order",
    "omega",
    "omega_exact",
    "centralizer_count",
    "solvable",
    "stem",
    "central_quotient",
    "isoclinism_class",
];

impl AtlasRecord {
    fn csv_fields(&self) -> [String; 11] {
        [
            self.name.clone(),
            self.order.to_string(),
            self.center_order.to_string(),
            self.derived_order.to_string(),
            self.omega.to_string(),
            self.omega.exact().is_some().to_string(),
            self.centralizer_count.to_string(),
            self.solvable.to_string(),
            self.stem.to_string(),
            self.central_quotient.clone(),
            self.isoclinism_class.to_string(),
        ]
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("order".into(), json!(self.order));
        m.insert("center_order".into(), json!(self.center_order));
        m.insert("derived_order".into(), json!(self.derived_order));
        m.insert("omega".into(), self.omega.to_json());
        m.insert("omega_exact".into(), json!(self.omega.exact().is_some()));
        m.insert("centralizer_count".into(), json!(self.centralizer_count));
        m.insert("solvable".into(), json!(self.solvable));
        m.insert("stem".into(), json!(self.stem));
        m.insert("central_quotient".into(), json!(self.central_quotient));
        m.insert("isoclinism_class".into(), json!(self.isoclinism_class));
        Value::Object(m)
    }
}

/// Invariants, records and isoclinism classes for a whole catalog.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub records: Vec<AtlasRecord>,
    pub invariants: Vec<GroupInvariants>,
    pub partition: Partition,
}

impl Atlas {
    pub fn compute(catalog: &Catalog, config: &AtlasConfig) -> Atlas {
        let invariants: Vec<GroupInvariants> = catalog
            .entries
            .par_iter()
            .map(|e| group_invariants(&e.group, catalog, config))
            .collect();
        let partition = partition_isoclinism(catalog, config.node_budget);
        let records = catalog
            .entries
            .iter()
            .zip(&invariants)
            .enumerate()
            .map(|(i, (e, inv))| AtlasRecord {
                name: e.name.clone(),
                order: inv.order,
                center_order: inv.center_order,
                derived_order: inv.derived_order,
                omega: inv.omega,
                centralizer_count: inv.centralizer_count,
                solvable: inv.solvable,
                stem: inv.stem,
                central_quotient: inv.central_quotient.clone().unwrap_or_else(|| "unknown".into()),
                isoclinism_class: partition.class_of[i],
            })
            .collect();
        Atlas {
            records,
            invariants,
            partition,
        }
    }

    /// Number of isoclinism classes per exact ω value; classes with a
    /// bracketed ω are keyed by their lower bound.
    pub fn classes_per_omega(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &r in &self.partition.representatives {
            *out.entry(self.invariants[r].omega.lower()).or_default() += 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtlasFormat {
    Csv,
    Json,
}

/// One record per group, columns in [`CSV_COLUMNS`] order. JSON output is an
/// array of objects with sorted keys.
pub fn emit_atlas<W: Write>(records: &[AtlasRecord], format: AtlasFormat, mut out: W) -> Result<(), CatalogError> {
    match format {
        AtlasFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            w.flush()?;
        }
        AtlasFormat::Json => {
            let rows: Vec<Value> = records.iter().map(AtlasRecord::to_json).collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_catalog() {
        let c = build_catalog(1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.entries()[0].name, "C1");
    }

    #[test]
    fn order_six_catalog_has_all_eight_types() {
        let c = build_catalog(6).unwrap();
        let names: Vec<&str> = c.entries().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["C1", "C2", "C3", "C2xC2", "C4", "C5", "C6", "S3"]);
    }

    #[test]
    fn order_eight_catalog_keeps_d8_and_q8() {
        let c = build_catalog(8).unwrap();
        assert!(c.get("D8").is_some());
        assert!(c.get("Q8").is_some());
        // five groups of order 8
        assert_eq!(c.entries().iter().filter(|e| e.group.order() == 8).count(), 5);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_catalog_capped(100, 50),
            Err(CatalogError::OrderCapExceeded { requested: 100, cap: 50 })
        ));
    }

    #[test]
    fn small_partition() {
        let c = build_catalog(16).unwrap();
        let p = partition_isoclinism(&c, DEFAULT_NODE_BUDGET);
        let class = |n: &str| p.class_of[c.position(n).unwrap()];
        assert_eq!(class("C1"), class("C2xC2xC2"));
        assert_eq!(c.entries()[p.representatives[class("C4")]].name, "C1");
        assert_eq!(class("D8"), class("Q8"));
        assert_eq!(class("D8"), class("D8xC2"));
        assert_ne!(class("S3"), class("D8"));
        assert!(p.indeterminate.is_empty());
        for (i, &cl) in p.class_of.iter().enumerate() {
            assert!(c.entries()[p.representatives[cl]].group.order() <= c.entries()[i].group.order());
        }
    }

    #[test]
    fn atlas_rows_and_formats() {
        let c = build_catalog(8).unwrap();
        let atlas = Atlas::compute(&c, &AtlasConfig::default());
        let trivial = &atlas.records[0];
        assert_eq!(trivial.omega, OmegaValue::Exact(1));
        assert_eq!(trivial.centralizer_count, 1);
        assert!(trivial.solvable && trivial.stem);
        let q8 = atlas.records.iter().find(|r| r.name == "Q8").unwrap();
        assert_eq!(q8.centralizer_count, 4);
        assert_eq!(q8.central_quotient, "C2xC2");

        let mut csv = Vec::new();
        emit_atlas(&atlas.records, AtlasFormat::Csv, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(csv.contains("\nQ8,8,2,2,3,true,4,true,true,C2xC2,2\n"));
        assert!(csv.ends_with('\n'));
        assert_eq!(csv.lines().count(), atlas.records.len() + 1);

        let mut js = Vec::new();
        emit_atlas(&atlas.records, AtlasFormat::Json, &mut js).unwrap();
        let v: Value = serde_json::from_slice(&js).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), atlas.records.len());
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), CSV_COLUMNS.len());
    }

    #[test]
    fn bracketed_omega_formats() {
        let v = OmegaValue::Bounds { lower: 3, upper: 5 };
        assert_eq!(v.to_string(), "3..5");
        assert_eq!(v.to_json(), json!([3, 5]));
        assert_eq!(v.exact(), None);
    }
}
