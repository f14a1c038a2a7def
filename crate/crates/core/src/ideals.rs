//! Finitely generated admissible ideals on the naturals.
//!
//! An [`Ideal`] is given by finitely many eventually periodic generators
//! `G1, ..., Gk` and consists of every set `A` with `A \ (G1 ∪ ... ∪ Gk)`
//! finite. With no generators this is the ideal of finite sets. Every such
//! ideal contains all finite sets (so it is admissible) and is non-trivial as
//! long as the complement of the generator union is infinite, which
//! [`Ideal::new`] enforces.
//!
//! These ideals satisfy the AP condition: given disjoint members `H_j`, the
//! sets `K_j = H_j ∩ G` (with `G` the generator union) differ from `H_j` by the
//! finite set `H_j \ G`, and their union lies inside `G`, hence in the ideal.
//! That argument works for countable families as well; [`Ideal::ap_witness`]
//! carries it out for finite families and checks the result.

use crate::error::{Error, Result};
use crate::natset::EpSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    generators: Vec<EpSet>,
    g_union: EpSet,
}

impl Ideal {
    pub fn new(generators: Vec<EpSet>) -> Result<Ideal> {
        let g_union = generators.iter().fold(EpSet::empty(), |acc, g| acc.union(g));
        if g_union.complement().is_finite() {
            return Err(Error::TrivialIdeal);
        }
        Ok(Ideal { generators, g_union })
    }

    /// The ideal of finite sets.
    pub fn finite() -> Ideal {
        Ideal { generators: Vec::new(), g_union: EpSet::empty() }
    }

    pub fn generators(&self) -> &[EpSet] {
        &self.generators
    }

    pub fn generator_union(&self) -> &EpSet {
        &self.g_union
    }

    /// The largest set of the dual filter up to finite changes: the
    /// complement of the generator union. Infinite by construction.
    pub fn filter_core(&self) -> EpSet {
        self.g_union.complement()
    }

    pub fn contains(&self, a: &EpSet) -> bool {
        a.difference(&self.g_union).is_finite()
    }

    pub fn in_dual_filter(&self, a: &EpSet) -> bool {
        self.contains(&a.complement())
    }

    /// Always true for this class of ideals; see the module docs.
    pub fn satisfies_ap(&self) -> bool {
        true
    }

    /// Given pairwise disjoint members `h`, returns `k` with every
    /// `h[j] Δ k[j]` finite and the union of `k` in the ideal.
    pub fn ap_witness(&self, h: &[EpSet]) -> Result<Vec<EpSet>> {
        if let Some(index) = h.iter().position(|a| !self.contains(a)) {
            return Err(Error::NotInIdeal { index });
        }
        check_disjoint(h)?;
        let k: Vec<EpSet> = h.iter().map(|a| a.intersect(&self.g_union)).collect();

        if let Some(j) = h.iter().zip(&k).position(|(a, b)| !a.symmetric_difference(b).is_finite()) {
            return Err(Error::Postcondition(format!("H{j} Δ K{j} is infinite")));
        }
        let union = k.iter().fold(EpSet::empty(), |acc, b| acc.union(b));
        if !self.contains(&union) {
            return Err(Error::Postcondition("union of K is not in the ideal".into()));
        }
        Ok(k)
    }
}

/// Fails with the first overlapping pair of indices.
pub(crate) fn check_disjoint(sets: &[EpSet]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate().skip(i + 1) {
            if !a.is_disjoint(b) {
                return Err(Error::NotDisjoint { first: i, second: j });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modset(m: u64, r: &[u64]) -> EpSet {
        EpSet::from_residues(m, r).unwrap()
    }

    fn i_ev() -> Ideal {
        Ideal::new(vec![modset(2, &[0])]).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(Ideal::new(vec![]).unwrap(), Ideal::finite());
        assert!(i_ev().filter_core() == modset(2, &[1]));
        assert_eq!(Ideal::new(vec![modset(2, &[0]), modset(2, &[1])]), Err(Error::TrivialIdeal));
        // Cofinite generator leaves only a finite complement.
        let cofinite = EpSet::from_finite(&[3]).complement();
        assert_eq!(Ideal::new(vec![cofinite]), Err(Error::TrivialIdeal));
    }

    #[test]
    fn membership() {
        assert!(i_ev().contains(&modset(2, &[0])));
        assert!(!i_ev().contains(&modset(2, &[1])));
        assert!(Ideal::finite().contains(&EpSet::from_finite(&[5])));
        assert!(!Ideal::finite().contains(&EpSet::naturals()));
        assert!(!i_ev().contains(&EpSet::naturals()));
    }

    #[test]
    fn dual_filter() {
        let cofinite = EpSet::from_finite(&[1, 3]).complement();
        assert!(Ideal::finite().in_dual_filter(&cofinite));
        assert!(i_ev().in_dual_filter(&modset(2, &[1])));
        assert!(!i_ev().in_dual_filter(&EpSet::empty()));
        assert!(!Ideal::finite().in_dual_filter(&EpSet::empty()));
    }

    #[test]
    fn ap_witness_examples() {
        let h = vec![modset(4, &[0]), modset(4, &[2])];
        let k = i_ev().ap_witness(&h).unwrap();
        assert_eq!(k, h);

        let h: Vec<EpSet> = [1, 2, 3].iter().map(|&n| EpSet::from_finite(&[n])).collect();
        let k = Ideal::finite().ap_witness(&h).unwrap();
        assert!(k.iter().all(EpSet::is_empty));

        let h = vec![modset(2, &[0]).union(&EpSet::from_finite(&[1]))];
        let k = i_ev().ap_witness(&h).unwrap();
        assert_eq!(k, vec![modset(2, &[0])]);
        assert_eq!(h[0].symmetric_difference(&k[0]).elements_if_finite().unwrap(), vec![1]);
    }

    #[test]
    fn ap_witness_rejects_bad_input() {
        let h = vec![modset(4, &[0]), modset(2, &[0])];
        assert_eq!(i_ev().ap_witness(&h), Err(Error::NotDisjoint { first: 0, second: 1 }));
        let h = vec![EpSet::from_finite(&[1]), modset(2, &[1])];
        assert_eq!(i_ev().ap_witness(&h), Err(Error::NotInIdeal { index: 1 }));
    }

    #[test]
    fn ap_holds() {
        assert!(Ideal::finite().satisfies_ap());
        assert!(i_ev().satisfies_ap());
    }
}
