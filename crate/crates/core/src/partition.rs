//! Integer partitions and their enumeration.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A weakly decreasing list of positive integers. Trailing zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!(
                "partition parts must be positive and weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity `d_k` of the part `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&p| p == k).count()
    }

    /// Distinct parts in decreasing order together with their multiplicities.
    pub fn distinct_parts(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Partition with one more part equal to `k`.
    pub fn with_part(&self, k: usize) -> Self {
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|&p| p < k).unwrap_or(parts.len());
        parts.insert(pos, k);
        Partition { parts }
    }

    /// Partition with one part equal to `k` removed, if present.
    pub fn without_part(&self, k: usize) -> Option<Self> {
        let pos = self.parts.iter().rposition(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    pub fn conjugate(&self) -> Self {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Dominance order: `self >= other` when every partial sum of `self` is at least
    /// the corresponding partial sum of `other` (same weight assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..n {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All partitions of `n` in reverse lexicographic order: `(n), (n-1,1), ..., (1^n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill(n, n, &mut current, &mut out);
        out
    }

    /// Number of partitions of `n`.
    pub fn count(n: usize) -> usize {
        // Euler's recurrence via dynamic programming over largest part.
        let mut table = vec![0usize; n + 1];
        table[0] = 1;
        for k in 1..=n {
            for m in k..=n {
                table[m] += table[m - k];
            }
        }
        table[n]
    }
}

fn fill(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=remaining.min(max)).rev() {
        current.push(p);
        fill(remaining - p, p, current, out);
        current.pop();
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Invalid(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap().parts(), &[2, 1]);
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=6).map(|d| Partition::all(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
        for d in 0..=12 {
            assert_eq!(Partition::all(d).len(), Partition::count(d));
        }
    }

    #[test]
    fn reverse_lex_order() {
        let ps: Vec<String> = Partition::all(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn distinct_parts_and_conjugate() {
        let p: Partition = "(4,4,4,4,1,1,1)".parse().unwrap();
        assert_eq!(p.distinct_parts(), vec![(4, 4), (1, 3)]);
        assert_eq!(p.conjugate().parts(), &[7, 4, 4, 4]);
        assert_eq!(p.weight(), 19);
    }

    #[test]
    fn add_remove_parts() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.with_part(2).parts(), &[3, 2, 1]);
        assert_eq!(p.without_part(3).unwrap().parts(), &[1]);
        assert!(p.without_part(2).is_none());
    }

    #[test]
    fn dominance() {
        let a = Partition::new(vec![3, 1]).unwrap();
        let b = Partition::new(vec![2, 2]).unwrap();
        assert!(a.dominates(&b));
        assert!(!b.dominates(&a));
    }
}
