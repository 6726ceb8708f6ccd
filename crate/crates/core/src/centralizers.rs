//! Distinct element centralizers, their count `|𝒞(G)|`, and the check of
//! central-quotient types against known counts.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::group::{Elem, Group, Subgroup};
use crate::iso;
use crate::spec::GroupSpec;

/// The set of distinct `C_G(g)`, in order of first appearance by `g`.
#[derive(Clone, Debug)]
pub struct CentralizerSet {
    members: Vec<Subgroup>,
    /// `witnesses[i]` is an element whose centralizer is `members[i]`.
    witnesses: Vec<Elem>,
}

impl CentralizerSet {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn witness(&self, i: usize) -> Elem {
        self.witnesses[i]
    }

    /// Orders of the centralizers, descending.
    pub fn orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.members.iter().map(Subgroup::order).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Deduplicated by exact member set, not isomorphism type.
pub fn centralizer_set(g: &Group) -> CentralizerSet {
    let mut seen: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for x in g.elements() {
        let c = g.centralizer(x);
        if !seen.contains_key(c.members()) {
            seen.insert(c.members().to_vec(), members.len());
            members.push(c);
            witnesses.push(x);
        }
    }
    CentralizerSet { members, witnesses }
}

pub fn centralizer_count(g: &Group) -> usize {
    centralizer_set(g).count()
}

/// One row of the count → central-quotient table.
#[derive(Clone, Copy, Debug)]
pub struct CountRow {
    pub count: usize,
    pub quotients: &'static [&'static str],
    /// When true, a central quotient in `quotients` also forces `count`.
    pub biconditional: bool,
}

pub const COUNT_ROWS: [CountRow; 5] = [
    CountRow {
        count: 4,
        quotients: &["C2xC2"],
        biconditional: true,
    },
    CountRow {
        count: 5,
        quotients: &["C3xC3", "S3"],
        biconditional: true,
    },
    CountRow {
        count: 6,
        quotients: &["D8", "A4", "C2xC2xC2", "C2xC2xC2xC2"],
        biconditional: false,
    },
    CountRow {
        count: 7,
        quotients: &["C5xC5", "D10", "F20"],
        biconditional: true,
    },
    CountRow {
        count: 8,
        quotients: &["C2xC2xC2", "A4", "D12"],
        biconditional: false,
    },
];

/// Every quotient type named in [`COUNT_ROWS`], in the fixed order used for
/// identification.
pub fn known_quotients() -> Vec<GroupSpec> {
    [
        "C2xC2",
        "C3xC3",
        "S3",
        "D8",
        "A4",
        "C2xC2xC2",
        "C2xC2xC2xC2",
        "C5xC5",
        "D10",
        "F20",
        "D12",
    ]
    .iter()
    .map(|s| GroupSpec::parse(s).expect("static spec"))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassificationStatus {
    Abelian,
    /// The count has a row and the quotient is listed in it.
    Consistent { row: usize },
    Violation { reason: String },
    /// No row covers the count, and no biconditional row names the quotient.
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub count: usize,
    pub quotient_order: usize,
    /// Name from [`known_quotients`], if the central quotient is one of them.
    pub quotient_name: Option<String>,
    #[serde(flatten)]
    pub status: ClassificationStatus,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.quotient_name.as_deref().unwrap_or("unidentified");
        match &self.status {
            ClassificationStatus::Abelian => write!(f, "n=1: abelian"),
            ClassificationStatus::Consistent { row } => {
                write!(f, "n={}: G/Z(G) = {q}, consistent (row n={row})", self.count)
            }
            ClassificationStatus::Violation { reason } => write!(f, "n={}: VIOLATION: {reason}", self.count),
            ClassificationStatus::Unclassified => {
                write!(f, "n={}: G/Z(G) of order {} ({q}), unclassified", self.count, self.quotient_order)
            }
        }
    }
}

/// Computes `|𝒞(G)|` and the type of `G/Z(G)`, and checks both against
/// [`COUNT_ROWS`]. For a biconditional row the converse is checked too: a
/// quotient it lists must come with its count.
pub fn classify_by_count(g: &Group) -> Classification {
    let count = centralizer_count(g);
    let q = g.quotient(&g.center()).expect("center is normal").group;
    classify_quotient(count, &q)
}

/// As [`classify_by_count`], given the count and the central quotient.
pub fn classify_quotient(count: usize, quotient: &Group) -> Classification {
    let quotient_name = iso::identify(quotient, &known_quotients());
    classify(count, quotient.order(), quotient_name)
}

pub(crate) fn classify(count: usize, quotient_order: usize, quotient_name: Option<String>) -> Classification {
    let status = if count == 1 {
        ClassificationStatus::Abelian
    } else {
        let name = quotient_name.as_deref();
        let converse = COUNT_ROWS.iter().find(|r| {
            r.biconditional && r.count != count && name.is_some_and(|n| r.quotients.contains(&n))
        });
        match (COUNT_ROWS.iter().find(|r| r.count == count), converse) {
            (_, Some(r)) => ClassificationStatus::Violation {
                reason: format!("G/Z(G) = {} requires n={}", name.unwrap_or("?"), r.count),
            },
            (Some(r), None) if name.is_some_and(|n| r.quotients.contains(&n)) => {
                ClassificationStatus::Consistent { row: r.count }
            }
            (Some(r), None) => ClassificationStatus::Violation {
                reason: format!(
                    "G/Z(G) of order {quotient_order} ({}) is not among {:?}",
                    name.unwrap_or("unidentified"),
                    r.quotients
                ),
            },
            (None, None) => ClassificationStatus::Unclassified,
        }
    };
    Classification {
        count,
        quotient_order,
        quotient_name,
        status,
    }
}
