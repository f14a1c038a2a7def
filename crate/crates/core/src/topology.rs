//! Soft topologies on a finite soft set.
//!
//! A topology is stored extensionally: the full family of open sets, each as a
//! [`PointGraph`] mask over the soft points of the ambient space. Because the
//! family is finite, closure under pairwise unions and intersections is the
//! whole axiom check, and every soft point has a minimal open neighborhood
//! (the intersection of all opens containing it). Predicates quantified over
//! "every neighborhood of p" are decided on that minimal neighborhood; the
//! `*_by_scan` variants keep the definitional scan over all opens for
//! cross-checking.
//!
//! Every finite soft topological space is first and second countable and
//! separable (the open family itself is a finite base), so no predicates are
//! provided for those notions.

use crate::error::{AxiomViolation, Error, Result};
use crate::softset::{bits, PointGraph, SoftPoint, SoftSet};

/// Default and maximum number of soft points accepted by
/// [`enumerate_topologies`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 4;
pub const MAX_ENUMERATION_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftTopology {
    graph: PointGraph,
    /// Sorted, deduplicated open masks.
    opens: Vec<u64>,
    /// Minimal open neighborhood of every soft point, by graph index.
    min_nbhd: Vec<u64>,
}

fn verify_masks(graph: &PointGraph, opens: &[u64]) -> std::result::Result<(), AxiomViolation> {
    let full = graph.full_mask();
    if opens.binary_search(&0).is_err() {
        return Err(AxiomViolation::MissingEmpty);
    }
    if opens.binary_search(&full).is_err() {
        return Err(AxiomViolation::MissingSpace);
    }
    for (i, &a) in opens.iter().enumerate() {
        for &b in &opens[i + 1..] {
            if opens.binary_search(&(a | b)).is_err() {
                return Err(AxiomViolation::UnionNotOpen(graph.decode(a), graph.decode(b)));
            }
            if opens.binary_search(&(a & b)).is_err() {
                return Err(AxiomViolation::IntersectionNotOpen(graph.decode(a), graph.decode(b)));
            }
        }
    }
    Ok(())
}

impl SoftTopology {
    /// Verifies the axioms and builds the topology.
    pub fn new(space: SoftSet, opens: Vec<SoftSet>) -> Result<SoftTopology> {
        let graph = PointGraph::new(&space)?;
        let mut masks = Vec::with_capacity(opens.len());
        for o in &opens {
            match o.subset_violation(&space)? {
                None => masks.push(graph.encode(o)?),
                Some(_) => return Err(Error::Axiom(AxiomViolation::NotInSpace(o.clone()))),
            }
        }
        Self::from_masks(graph, masks)
    }

    /// Builds a topology from open masks over `graph`, verifying the axioms.
    pub fn from_masks(graph: PointGraph, mut opens: Vec<u64>) -> Result<SoftTopology> {
        let full = graph.full_mask();
        if let Some(&m) = opens.iter().find(|&&m| m & !full != 0) {
            return Err(Error::Axiom(AxiomViolation::NotInSpace(graph.decode(m))));
        }
        opens.sort_unstable();
        opens.dedup();
        verify_masks(&graph, &opens).map_err(Error::Axiom)?;
        Ok(Self::from_verified(graph, opens))
    }

    fn from_verified(graph: PointGraph, opens: Vec<u64>) -> SoftTopology {
        let full = graph.full_mask();
        let min_nbhd = (0..graph.len())
            .map(|i| opens.iter().filter(|&&o| o >> i & 1 == 1).fold(full, |acc, &o| acc & o))
            .collect();
        SoftTopology { graph, opens, min_nbhd }
    }

    /// The discrete topology: every soft subset is open.
    pub fn discrete(space: SoftSet) -> Result<SoftTopology> {
        let graph = PointGraph::new(&space)?;
        if graph.len() > 20 {
            return Err(Error::TooLarge { what: "discrete topology point count", limit: 20, got: graph.len() });
        }
        let opens = (0..=graph.full_mask()).collect();
        Ok(Self::from_verified(graph, opens))
    }

    /// The indiscrete topology: only the empty set and the space are open.
    pub fn indiscrete(space: SoftSet) -> Result<SoftTopology> {
        let graph = PointGraph::new(&space)?;
        let mut opens = vec![0, graph.full_mask()];
        opens.dedup();
        Ok(Self::from_verified(graph, opens))
    }

    pub fn space(&self) -> &SoftSet {
        self.graph.ambient()
    }

    pub fn graph(&self) -> &PointGraph {
        &self.graph
    }

    pub fn points(&self) -> &[SoftPoint] {
        self.graph.pairs()
    }

    pub fn open_masks(&self) -> &[u64] {
        &self.opens
    }

    pub fn opens(&self) -> Vec<SoftSet> {
        self.opens.iter().map(|&m| self.graph.decode(m)).collect()
    }

    pub fn point_index(&self, p: SoftPoint) -> Result<usize> {
        self.graph.index_of(p).ok_or_else(|| Error::PointOutsideSpace {
            point: self.space().context().point_name(p),
        })
    }

    pub fn encode(&self, a: &SoftSet) -> Result<u64> {
        self.graph.encode(a)
    }

    pub fn is_open_mask(&self, m: u64) -> bool {
        self.opens.binary_search(&m).is_ok()
    }

    pub fn is_closed_mask(&self, m: u64) -> bool {
        self.is_open_mask(self.graph.full_mask() & !m)
    }

    pub fn is_open(&self, a: &SoftSet) -> Result<bool> {
        Ok(self.is_open_mask(self.encode(a)?))
    }

    /// Closed means the difference from the ambient space is open.
    pub fn is_closed(&self, a: &SoftSet) -> Result<bool> {
        Ok(self.is_closed_mask(self.encode(a)?))
    }

    /// Intersection of every closed superset of `m`.
    pub fn closure_mask(&self, m: u64) -> u64 {
        let full = self.graph.full_mask();
        self.opens
            .iter()
            .map(|&o| full & !o)
            .filter(|&c| c & m == m)
            .fold(full, |acc, c| acc & c)
    }

    pub fn closure(&self, a: &SoftSet) -> Result<SoftSet> {
        Ok(self.graph.decode(self.closure_mask(self.encode(a)?)))
    }

    pub fn is_dense(&self, h: &SoftSet) -> Result<bool> {
        Ok(self.closure_mask(self.encode(h)?) == self.graph.full_mask())
    }

    /// Some open set contains `p` and lies inside `a`.
    pub fn is_neighborhood(&self, a: &SoftSet, p: SoftPoint) -> Result<bool> {
        let i = self.point_index(p)?;
        let m = self.encode(a)?;
        Ok(self.opens.iter().any(|&o| o >> i & 1 == 1 && o & !m == 0))
    }

    pub fn min_nbhd_mask(&self, index: usize) -> u64 {
        self.min_nbhd[index]
    }

    pub fn min_open_nbhd(&self, p: SoftPoint) -> Result<SoftSet> {
        Ok(self.graph.decode(self.min_nbhd[self.point_index(p)?]))
    }

    /// Open masks containing the point with graph index `i`.
    pub fn opens_containing(&self, i: usize) -> impl Iterator<Item = u64> + '_ {
        self.opens.iter().copied().filter(move |o| o >> i & 1 == 1)
    }

    /// The relative topology `{R ∩ h : R open}` on `h`.
    pub fn subspace(&self, h: &SoftSet) -> Result<SoftTopology> {
        let hm = self.encode(h)?;
        let graph = PointGraph::new(h)?;
        let masks = self
            .opens
            .iter()
            .map(|&o| graph.encode(&self.graph.decode(o & hm)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(graph, masks)
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.graph.len()).all(|i| self.min_nbhd[i] == 1 << i)
    }

    /// Every pair of distinct soft points is separated both ways by opens.
    pub fn is_t1(&self) -> bool {
        let n = self.graph.len();
        (0..n).all(|x| {
            (0..n).filter(|&y| y != x).all(|y| {
                self.opens.iter().any(|&o| o >> x & 1 == 1 && o >> y & 1 == 0)
            })
        })
    }

    /// Every pair of distinct soft points lies in disjoint opens.
    pub fn is_hausdorff(&self) -> bool {
        let n = self.graph.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| {
                self.opens_containing(x).any(|p| self.opens_containing(y).any(|q| p & q == 0))
            })
        })
    }

    /// `p` is a soft limit point of `k`: every neighborhood of `p` meets `k`
    /// somewhere other than `p` itself.
    pub fn is_soft_limit_point_of_set(&self, k: &SoftSet, p: SoftPoint) -> Result<bool> {
        let i = self.point_index(p)?;
        let km = self.encode(k)?;
        Ok(self.min_nbhd[i] & !(1 << i) & km != 0)
    }

    pub fn is_soft_limit_point_of_set_by_scan(&self, k: &SoftSet, p: SoftPoint) -> Result<bool> {
        let i = self.point_index(p)?;
        let km = self.encode(k)?;
        Ok(self.opens_containing(i).all(|o| o & !(1 << i) & km != 0))
    }

    /// No soft point is a soft limit point of the whole space.
    pub fn has_no_soft_limit_point(&self) -> bool {
        let full = self.graph.full_mask();
        (0..self.graph.len()).all(|i| self.min_nbhd[i] & !(1 << i) & full == 0)
    }

    /// Masks of the soft points set in `m`, as soft points.
    pub fn points_of_mask(&self, m: u64) -> Vec<SoftPoint> {
        bits(m & self.graph.full_mask()).map(|i| self.graph.pairs()[i]).collect()
    }
}

/// Every soft topology on `space`, each exactly once, in a fixed order.
///
/// A finite topology is determined by the minimal open neighborhood `U_p` of
/// each point, and an assignment `p ↦ U_p` (with `p ∈ U_p`) comes from a
/// topology iff `q ∈ U_p` implies `U_q ⊆ U_p`. The enumerator walks all such
/// assignments and closes each under unions.
pub fn enumerate_topologies(space: &SoftSet, bound: usize) -> Result<TopologyEnumerator> {
    let graph = PointGraph::new(space)?;
    let limit = bound.min(MAX_ENUMERATION_POINTS);
    if graph.len() > limit {
        return Err(Error::TooLarge { what: "soft point count for enumeration", limit, got: graph.len() });
    }
    let n = graph.len();
    let full = graph.full_mask();
    let choices = (0..n)
        .map(|i| (0..=full).filter(|m| m >> i & 1 == 1).collect::<Vec<u64>>())
        .collect();
    Ok(TopologyEnumerator { graph, choices, counters: vec![0; n], done: false })
}

pub struct TopologyEnumerator {
    graph: PointGraph,
    choices: Vec<Vec<u64>>,
    counters: Vec<usize>,
    done: bool,
}

impl TopologyEnumerator {
    fn current(&self) -> Vec<u64> {
        self.counters.iter().enumerate().map(|(i, &c)| self.choices[i][c]).collect()
    }

    fn advance(&mut self) {
        for i in (0..self.counters.len()).rev() {
            self.counters[i] += 1;
            if self.counters[i] < self.choices[i].len() {
                return;
            }
            self.counters[i] = 0;
        }
        self.done = true;
    }
}

fn consistent(nbhds: &[u64]) -> bool {
    nbhds.iter().all(|&u| bits(u).all(|q| nbhds[q] & !u == 0))
}

fn unions_of(nbhds: &[u64]) -> Vec<u64> {
    let mut opens = vec![0u64];
    for &u in nbhds {
        let extra: Vec<u64> = opens.iter().map(|&o| o | u).collect();
        opens.extend(extra);
        opens.sort_unstable();
        opens.dedup();
    }
    opens
}

impl Iterator for TopologyEnumerator {
    type Item = SoftTopology;

    fn next(&mut self) -> Option<SoftTopology> {
        while !self.done {
            let nbhds = self.current();
            self.advance();
            if consistent(&nbhds) {
                let opens = unions_of(&nbhds);
                return Some(SoftTopology::from_verified(self.graph.clone(), opens));
            }
        }
        None
    }
}
