//! Eventually periodic subsets of the naturals.
//!
//! An [`EpSet`] is a finite prefix followed by a pattern repeated forever:
//! `n` is a member iff `prefix[n]` for `n < L`, else `pattern[(n - L) % p]`.
//! Values are kept in canonical form (minimal period, then minimal prefix), so
//! structural equality is set equality. The class is closed under every
//! Boolean operation, finiteness is "pattern all zeros", and natural density
//! is the exact fraction of ones in the pattern.
//!
//! Naturals are indexed from 0. Shifting the origin changes neither density
//! nor finiteness.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact natural density.
pub type Density = Ratio<u64>;

/// Brings a prefix/pattern pair into canonical form: the pattern is reduced
/// to its minimal period, then prefix entries that repeat the pattern are
/// absorbed by rotating it.
pub(crate) fn canonicalize<T: PartialEq>(prefix: &mut Vec<T>, pattern: &mut Vec<T>) {
    let p = pattern.len();
    debug_assert!(p > 0);
    if let Some(d) = (1..p).find(|&d| p.is_multiple_of(d) && (d..p).all(|i| pattern[i] == pattern[i - d])) {
        pattern.truncate(d);
    }
    while let (Some(a), Some(b)) = (prefix.last(), pattern.last()) {
        if a != b {
            break;
        }
        let last = prefix.pop().expect("checked nonempty");
        pattern.pop();
        pattern.insert(0, last);
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpSet {
    prefix: Vec<bool>,
    pattern: Vec<bool>,
}

impl EpSet {
    pub fn from_parts(mut prefix: Vec<bool>, mut pattern: Vec<bool>) -> Result<EpSet> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        canonicalize(&mut prefix, &mut pattern);
        Ok(EpSet { prefix, pattern })
    }

    pub fn empty() -> EpSet {
        EpSet { prefix: Vec::new(), pattern: vec![false] }
    }

    pub fn naturals() -> EpSet {
        EpSet { prefix: Vec::new(), pattern: vec![true] }
    }

    /// `{n : n mod m ∈ residues}`.
    pub fn from_residues(modulus: u64, residues: &[u64]) -> Result<EpSet> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut pattern = vec![false; modulus as usize];
        for &r in residues {
            if r >= modulus {
                return Err(Error::BadResidue { modulus, residue: r });
            }
            pattern[r as usize] = true;
        }
        EpSet::from_parts(Vec::new(), pattern)
    }

    pub fn from_finite(elements: &[u64]) -> EpSet {
        let len = elements.iter().max().map_or(0, |&m| m as usize + 1);
        let mut prefix = vec![false; len];
        for &n in elements {
            prefix[n as usize] = true;
        }
        EpSet::from_parts(prefix, vec![false]).expect("pattern is nonempty")
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn member(&self, n: u64) -> bool {
        let l = self.prefix.len() as u64;
        if n < l {
            self.prefix[n as usize]
        } else {
            self.pattern[((n - l) % self.pattern.len() as u64) as usize]
        }
    }

    /// Membership bits on `0..len` and on one period `len..len+period`.
    /// `len` must be at least the prefix length and `period` a multiple of
    /// the canonical period.
    pub(crate) fn expand(&self, len: usize, period: usize) -> (Vec<bool>, Vec<bool>) {
        debug_assert!(len >= self.prefix.len() && period.is_multiple_of(self.pattern.len()));
        let prefix = (0..len as u64).map(|n| self.member(n)).collect();
        let pattern = (len as u64..(len + period) as u64).map(|n| self.member(n)).collect();
        (prefix, pattern)
    }

    fn combine(&self, other: &EpSet, op: impl Fn(bool, bool) -> bool) -> EpSet {
        let len = self.prefix.len().max(other.prefix.len());
        let period = lcm(self.pattern.len(), other.pattern.len());
        let (pa, qa) = self.expand(len, period);
        let (pb, qb) = other.expand(len, period);
        let prefix = pa.iter().zip(&pb).map(|(&a, &b)| op(a, b)).collect();
        let pattern = qa.iter().zip(&qb).map(|(&a, &b)| op(a, b)).collect();
        EpSet::from_parts(prefix, pattern).expect("lcm of positive periods is positive")
    }

    pub fn union(&self, other: &EpSet) -> EpSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &EpSet) -> EpSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &EpSet) -> EpSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &EpSet) -> EpSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> EpSet {
        EpSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            pattern: self.pattern.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &EpSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &EpSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|b| !b)
    }

    pub fn is_finite(&self) -> bool {
        self.pattern.iter().all(|b| !b)
    }

    pub fn elements_if_finite(&self) -> Result<Vec<u64>> {
        if !self.is_finite() {
            return Err(Error::InfiniteSet);
        }
        Ok(self.prefix_members().collect())
    }

    fn prefix_members(&self) -> impl Iterator<Item = u64> + '_ {
        self.prefix.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64)
    }

    /// Members in increasing order; infinite unless the set is finite.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        let l = self.prefix.len() as u64;
        let p = self.pattern.len() as u64;
        let tail: Box<dyn Iterator<Item = u64>> = if self.is_finite() {
            Box::new(std::iter::empty())
        } else {
            Box::new((0u64..).flat_map(move |block| {
                self.pattern
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(move |(i, _)| l + block * p + i as u64)
            }))
        };
        self.prefix_members().chain(tail)
    }

    pub fn density(&self) -> Density {
        let ones = self.pattern.iter().filter(|&&b| b).count() as u64;
        Ratio::new(ones, self.pattern.len() as u64)
    }
}

/// Renders in the text syntax: `finite(1 3)`, or `mod(p: r ...)` corrected on
/// the prefix with `+finite(...)` and `-finite(...)`.
impl fmt::Display for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn finite(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
            f.write_str("finite(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }

        if self.is_finite() {
            let xs: Vec<u64> = self.prefix_members().collect();
            return finite(f, &xs);
        }
        let l = self.prefix.len();
        let p = self.pattern.len();
        let mut residues: Vec<u64> =
            (0..p).filter(|&i| self.pattern[i]).map(|i| ((l + i) % p) as u64).collect();
        residues.sort_unstable();
        let base = EpSet::from_residues(p as u64, &residues).expect("residues are below p");
        write!(f, "mod({p}:")?;
        for r in &residues {
            write!(f, " {r}")?;
        }
        f.write_str(")")?;
        let add: Vec<u64> = (0..l as u64).filter(|&n| self.member(n) && !base.member(n)).collect();
        let remove: Vec<u64> = (0..l as u64).filter(|&n| !self.member(n) && base.member(n)).collect();
        if !add.is_empty() {
            f.write_str("+")?;
            finite(f, &add)?;
        }
        if !remove.is_empty() {
            f.write_str("-")?;
            finite(f, &remove)?;
        }
        Ok(())
    }
}
