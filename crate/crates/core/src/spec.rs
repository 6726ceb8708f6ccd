//! Group specifications: named families, direct products, explicit
//! permutation generators and Cayley tables, with a small text grammar.
//!
//! ```text
//! spec := atom | atom "x" spec
//! atom := "C" int | "D" int | "S" int | "A" int | "Q8" | "F20"
//!       | "perm:" cycle-list (";" cycle-list)*
//!       | "cayley:" path-to-JSON
//! ```
//!
//! Dihedral groups are named by their ORDER: `D8` has eight elements.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::group::{Group, GroupError, DEFAULT_MAX_ORDER};
use crate::perm::{Perm, PermError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot parse group spec {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("cannot read Cayley table {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot decode Cayley table {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<PermError> for SpecError {
    fn from(e: PermError) -> Self {
        SpecError::InvalidSpec(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of the given order.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    /// Frobenius group ⟨x, y | x⁵ = y⁴ = 1, xʸ = x³⟩ of order 20.
    F20,
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    /// Generators, each a list of 1-based cycles.
    Permutations(Vec<Vec<Vec<usize>>>),
    CayleyTable(Vec<Vec<usize>>),
}

#[derive(Deserialize)]
struct CayleyFile {
    table: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec, SpecError> {
        let mut p = Parser { text, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn product(a: GroupSpec, b: GroupSpec) -> GroupSpec {
        GroupSpec::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Loads a `{"table": [[...], ...]}` JSON file.
    pub fn cayley_from_file(path: &Path) -> Result<GroupSpec, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: CayleyFile = serde_json::from_str(&text).map_err(|source| SpecError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(GroupSpec::CayleyTable(file.table))
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            GroupSpec::Cyclic(0) => Err(SpecError::InvalidSpec("C0: cyclic order must be at least 1".into())),
            GroupSpec::Dihedral(m) if *m < 4 || m % 2 != 0 => Err(SpecError::InvalidSpec(format!(
                "D{m}: dihedral order must be even and at least 4"
            ))),
            GroupSpec::Symmetric(0) => Err(SpecError::InvalidSpec("S0: degree must be at least 1".into())),
            GroupSpec::Alternating(0) => Err(SpecError::InvalidSpec("A0: degree must be at least 1".into())),
            GroupSpec::DirectProduct(a, b) => {
                a.validate()?;
                b.validate()
            }
            GroupSpec::Permutations(gens) => {
                let degree = permutation_degree(gens);
                for g in gens {
                    Perm::from_cycles(g, degree)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Realizes the spec under the default order cap.
    pub fn realize(&self) -> Result<Group, SpecError> {
        self.realize_capped(DEFAULT_MAX_ORDER)
    }

    pub fn realize_capped(&self, max_order: usize) -> Result<Group, SpecError> {
        self.validate()?;
        let group = match self {
            GroupSpec::Cyclic(n) => from_cycles(&[&[cycle(1, *n)]], *n, max_order)?,
            GroupSpec::Dihedral(m) => {
                let k = m / 2;
                if k == 2 {
                    from_cycles(&[&[vec![1, 2]], &[vec![3, 4]]], 4, max_order)?
                } else {
                    let reflection: Vec<Vec<usize>> =
                        (1..=k / 2).map(|i| vec![i, k + 1 - i]).collect();
                    from_cycles(&[&[cycle(1, k)], &reflection], k, max_order)?
                }
            }
            GroupSpec::Symmetric(n) => {
                from_cycles(&[&[vec![1, 2]], &[cycle(1, *n)]], *n, max_order)?
            }
            GroupSpec::Alternating(n) => {
                let n = *n;
                if n <= 2 {
                    trivial()
                } else if n % 2 == 1 {
                    from_cycles(&[&[vec![1, 2, 3]], &[cycle(1, n)]], n, max_order)?
                } else {
                    from_cycles(&[&[vec![1, 2, 3]], &[cycle(2, n)]], n, max_order)?
                }
            }
            GroupSpec::Quaternion8 => {
                // right-regular action on {1, -1, i, -i, j, -j, k, -k}
                from_cycles(
                    &[&[vec![1, 3, 2, 4], vec![5, 8, 6, 7]], &[vec![1, 5, 2, 6], vec![3, 7, 4, 8]]],
                    8,
                    max_order,
                )?
            }
            GroupSpec::F20 => {
                let (x, y) = f20_generators();
                Group::from_generators(&[x, y], max_order)?
            }
            GroupSpec::DirectProduct(a, b) => {
                let ga = a.realize_capped(max_order)?;
                let gb = b.realize_capped(max_order)?;
                if ga.order() * gb.order() > max_order {
                    return Err(GroupError::OrderCapExceeded { cap: max_order }.into());
                }
                ga.direct_product(&gb)
            }
            GroupSpec::Permutations(gens) => {
                let degree = permutation_degree(gens);
                let perms = gens
                    .iter()
                    .map(|g| Perm::from_cycles(g, degree))
                    .collect::<Result<Vec<_>, _>>()?;
                Group::from_generators(&perms, max_order)?
            }
            GroupSpec::CayleyTable(table) => Group::from_cayley_capped(table, max_order)?,
        };
        Ok(group.with_name(self.to_string()).with_spec(self.clone()))
    }

    /// The factors of a (possibly nested) direct product, left to right.
    pub fn factors(&self) -> Vec<&GroupSpec> {
        match self {
            GroupSpec::DirectProduct(a, b) => {
                let mut v = a.factors();
                v.extend(b.factors());
                v
            }
            other => vec![other],
        }
    }
}

/// The permutations `x = (1 2 3 4 5)` and `y = (2 4 5 3)`, satisfying
/// `x⁵ = y⁴ = 1` and `y⁻¹xy = x³` under left-to-right composition.
pub fn f20_generators() -> (Perm, Perm) {
    let x = Perm::from_cycles(&[vec![1, 2, 3, 4, 5]], 5).expect("valid cycle");
    let y = Perm::from_cycles(&[vec![2, 4, 5, 3]], 5).expect("valid cycle");
    (x, y)
}

fn trivial() -> Group {
    Group::from_table_unchecked(1, vec![0])
}

/// `(from from+1 … to)`
fn cycle(from: usize, to: usize) -> Vec<usize> {
    (from..=to).collect()
}

fn from_cycles(gens: &[&[Vec<usize>]], degree: usize, max_order: usize) -> Result<Group, SpecError> {
    if degree <= 1 {
        return Ok(trivial());
    }
    let perms = gens
        .iter()
        .map(|c| Perm::from_cycles(c, degree))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::from_generators(&perms, max_order)?)
}

fn permutation_degree(gens: &[Vec<Vec<usize>>]) -> usize {
    gens.iter().flatten().flatten().copied().max().unwrap_or(0)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(m) => write!(f, "D{m}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Quaternion8 => write!(f, "Q8"),
            GroupSpec::F20 => write!(f, "F20"),
            GroupSpec::DirectProduct(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::Permutations(gens) => {
                let parts: Vec<String> = gens
                    .iter()
                    .map(|g| {
                        if g.is_empty() {
                            "()".to_string()
                        } else {
                            g.iter()
                                .map(|c| {
                                    let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                                    format!("({})", pts.join(" "))
                                })
                                .collect()
                        }
                    })
                    .collect();
                write!(f, "perm:{}", parts.join(";"))
            }
            GroupSpec::CayleyTable(t) => write!(f, "cayley[{}]", t.len()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> SpecError {
        SpecError::Parse {
            text: self.text.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let rest = self.rest();
        if rest.len() >= kw.len() && rest[..kw.len()].eq_ignore_ascii_case(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn spec(&mut self) -> Result<GroupSpec, SpecError> {
        let first = self.atom()?;
        self.skip_ws();
        if matches!(self.peek(), Some('x' | 'X')) {
            self.pos += 1;
            let rest = self.spec()?;
            Ok(GroupSpec::product(first, rest))
        } else {
            Ok(first)
        }
    }

    fn integer(&mut self) -> Result<usize, SpecError> {
        self.skip_ws();
        let digits: &str = {
            let rest = self.rest();
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            &rest[..end]
        };
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        let value = digits.parse().map_err(|_| self.error("integer too large"))?;
        self.pos += digits.len();
        Ok(value)
    }

    fn atom(&mut self) -> Result<GroupSpec, SpecError> {
        self.skip_ws();
        if self.eat_keyword("perm:") {
            return self.permutations();
        }
        if self.eat_keyword("cayley:") {
            return self.cayley();
        }
        if self.eat_keyword("q8") {
            return Ok(GroupSpec::Quaternion8);
        }
        if self.eat_keyword("f20") {
            return Ok(GroupSpec::F20);
        }
        let family = match self.peek() {
            Some(c) => c.to_ascii_lowercase(),
            None => return Err(self.error("expected a group")),
        };
        let make: fn(usize) -> GroupSpec = match family {
            'c' => GroupSpec::Cyclic,
            'd' => GroupSpec::Dihedral,
            's' => GroupSpec::Symmetric,
            'a' => GroupSpec::Alternating,
            _ => return Err(self.error("unknown group family")),
        };
        self.pos += 1;
        Ok(make(self.integer()?))
    }

    fn permutations(&mut self) -> Result<GroupSpec, SpecError> {
        let mut gens = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.peek() == Some('(') {
                let close = self
                    .rest()
                    .find(')')
                    .ok_or_else(|| self.error("unclosed cycle"))?;
                self.pos += close + 1;
                self.skip_ws();
            }
            if self.pos == start {
                return Err(self.error("expected a cycle list"));
            }
            let cycles = Perm::parse_cycles(&self.text[start..self.pos])
                .map_err(|e| self.error(&e.to_string()))?;
            gens.push(cycles);
            if self.peek() == Some(';') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(GroupSpec::Permutations(gens))
    }

    /// The path runs to the end of input or up to a whitespace-delimited `x`.
    fn cayley(&mut self) -> Result<GroupSpec, SpecError> {
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let mut end = rest.len();
        for i in 1..bytes.len().saturating_sub(1) {
            if (bytes[i] == b'x' || bytes[i] == b'X')
                && bytes[i - 1].is_ascii_whitespace()
                && bytes[i + 1].is_ascii_whitespace()
            {
                end = i;
                break;
            }
        }
        let path = rest[..end].trim().to_string();
        if path.is_empty() {
            return Err(self.error("missing Cayley table path"));
        }
        self.pos += end;
        GroupSpec::cayley_from_file(Path::new(&path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families_and_products() {
        assert_eq!(GroupSpec::parse("C5").unwrap(), GroupSpec::Cyclic(5));
        assert_eq!(GroupSpec::parse(" d 8 ").unwrap(), GroupSpec::Dihedral(8));
        assert_eq!(GroupSpec::parse("q8").unwrap(), GroupSpec::Quaternion8);
        assert_eq!(GroupSpec::parse("F20").unwrap(), GroupSpec::F20);
        let p = GroupSpec::parse("S3 x C2xc3").unwrap();
        assert_eq!(
            p,
            GroupSpec::product(
                GroupSpec::Symmetric(3),
                GroupSpec::product(GroupSpec::Cyclic(2), GroupSpec::Cyclic(3))
            )
        );
        assert_eq!(p.to_string(), "S3xC2xC3");
        assert_eq!(p.factors().len(), 3);
    }

    #[test]
    fn parses_permutation_generators() {
        let p = GroupSpec::parse("perm:(1 2 3 4 5); (1 2 3)").unwrap();
        assert_eq!(
            p,
            GroupSpec::Permutations(vec![vec![vec![1, 2, 3, 4, 5]], vec![vec![1, 2, 3]]])
        );
        assert_eq!(p.realize().unwrap().order(), 60);
        let q = GroupSpec::parse("PERM:(1 2)(3 4);(1 3) x C3").unwrap();
        assert_eq!(q.realize().unwrap().order(), 24);
        assert_eq!(q.to_string(), "perm:(1 2)(3 4);(1 3)xC3");
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "X5", "C", "C5 x", "D7", "D2", "S0", "A0", "C0", "perm:", "perm:(1 1)", "C5 C5"] {
            assert!(GroupSpec::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn realizes_families() {
        let orders = [
            ("C1", 1),
            ("C12", 12),
            ("D4", 4),
            ("D6", 6),
            ("D8", 8),
            ("D10", 10),
            ("S1", 1),
            ("S2", 2),
            ("S4", 24),
            ("A1", 1),
            ("A2", 1),
            ("A3", 3),
            ("A4", 12),
            ("A5", 60),
            ("Q8", 8),
            ("F20", 20),
            ("D8xC3", 24),
        ];
        for (text, order) in orders {
            let g = GroupSpec::parse(text).unwrap().realize().unwrap();
            assert_eq!(g.order(), order, "{text}");
            assert!(g.check_axioms().is_ok(), "{text}");
            assert_eq!(g.name(), Some(text));
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q8 = GroupSpec::Quaternion8.realize().unwrap();
        let involutions = q8.elements().filter(|&x| q8.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q8.is_abelian());
        let d8 = GroupSpec::Dihedral(8).realize().unwrap();
        let involutions = d8.elements().filter(|&x| d8.element_order(x) == 2).count();
        assert_eq!(involutions, 5);
    }

    #[test]
    fn f20_presentation_holds() {
        let (x, y) = f20_generators();
        let pow = |p: &Perm, k: usize| (0..k).fold(Perm::identity(5), |acc, _| acc.then(p));
        assert!(pow(&x, 5).is_identity());
        assert!(pow(&y, 4).is_identity());
        assert!(!pow(&y, 2).is_identity());
        let conj = y.inverse().then(&x).then(&y);
        assert_eq!(conj, pow(&x, 3));
        let g = GroupSpec::F20.realize().unwrap();
        assert_eq!(g.order(), 20);
        assert_eq!(g.center().order(), 1);
    }

    #[test]
    fn order_cap_applies_to_products() {
        let spec = GroupSpec::parse("S4 x S4").unwrap();
        assert!(matches!(
            spec.realize_capped(100),
            Err(SpecError::Group(GroupError::OrderCapExceeded { cap: 100 }))
        ));
    }

    #[test]
    fn cayley_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("ncgroup-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c3.json");
        std::fs::write(&path, r#"{"table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
        let text = format!("cayley:{} x C2", path.display());
        let g = GroupSpec::parse(&text).unwrap().realize().unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        let missing = GroupSpec::parse("cayley:/nonexistent/table.json");
        assert!(matches!(missing, Err(SpecError::Io { .. })));
        std::fs::remove_dir_all(&dir).ok();
    }
}
