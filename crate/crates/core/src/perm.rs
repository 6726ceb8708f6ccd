//! Permutations on `1..=k` points, stored 0-based.
//!
//! Products follow the left-to-right convention: `p.then(q)` applies `p`
//! first and then `q`, so the cycle list `(1 2)(2 3)` means "apply `(1 2)`,
//! then `(2 3)`".

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("point {0} is out of range (points are numbered from 1)")]
    PointOutOfRange(usize),
    #[error("point {0} appears twice in one cycle")]
    RepeatedPoint(usize),
    #[error("image list is not a bijection on 1..={0}")]
    NotBijection(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from its 0-based image list.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(PermError::NotBijection(k));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    /// Builds a permutation of `degree` points from 1-based cycles, composed
    /// left to right.
    pub fn from_cycles(cycles: &[Vec<usize>], degree: usize) -> Result<Self, PermError> {
        let mut acc = Perm::identity(degree);
        for cycle in cycles {
            let mut images: Vec<usize> = (0..degree).collect();
            let mut seen = Vec::with_capacity(cycle.len());
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange(p));
                }
                if seen.contains(&p) {
                    return Err(PermError::RepeatedPoint(p));
                }
                seen.push(p);
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = next - 1;
            }
            acc = acc.then(&Perm::from_images(images)?);
        }
        Ok(acc)
    }

    /// Parses a cycle list such as `(1 2 3)(4 5)`; commas may separate points.
    /// An empty string or `()` is the identity.
    pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(PermError::Malformed(text.to_string()));
            };
            let Some(close) = body.find(')') else {
                return Err(PermError::Malformed(text.to_string()));
            };
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p = tok
                    .parse::<usize>()
                    .map_err(|_| PermError::Malformed(text.to_string()))?;
                cycle.push(p);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(cycles)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Extends the permutation to `degree` points, fixing the new ones.
    pub fn padded(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..degree.max(self.0.len()) as u32);
        Perm(v)
    }

    /// Shifts the permutation up by `offset` points inside a set of `degree`
    /// points; used for disjoint-union actions.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        let mut v: Vec<u32> = (0..degree as u32).collect();
        for (i, &img) in self.0.iter().enumerate() {
            v[i + offset] = img + offset as u32;
        }
        Perm(v)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.0.len()];
        for (i, &img) in self.0.iter().enumerate() {
            v[img as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Disjoint cycles with 1-based points, each starting at its smallest
    /// point, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.0[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let cycles = Perm::parse_cycles("(1 2 3)(4 5)").unwrap();
        let p = Perm::from_cycles(&cycles, 5).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::identity(3).to_string(), "()");
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::from_cycles(&[vec![1, 2]], 3).unwrap();
        let b = Perm::from_cycles(&[vec![2, 3]], 3).unwrap();
        // 1 -> 2 -> 3, 3 -> 3 -> 2, 2 -> 1 -> 1
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
        let composed = Perm::from_cycles(&[vec![1, 2], vec![2, 3]], 3).unwrap();
        assert_eq!(composed, a.then(&b));
    }

    #[test]
    fn rejects_bad_cycles() {
        assert_eq!(
            Perm::from_cycles(&[vec![1, 1]], 2),
            Err(PermError::RepeatedPoint(1))
        );
        assert_eq!(
            Perm::from_cycles(&[vec![0, 1]], 2),
            Err(PermError::PointOutOfRange(0))
        );
        assert!(Perm::parse_cycles("(1 2").is_err());
        assert!(Perm::parse_cycles("1 2").is_err());
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn inverse_and_shift() {
        let p = Perm::from_cycles(&[vec![1, 2, 3]], 3).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.shifted(2, 5).to_string(), "(3 4 5)");
        assert_eq!(p.padded(4).degree(), 4);
    }
}
