//! Soft sets over a finite universe and a finite parameter set.
//!
//! A soft set assigns a subset of the universe to every parameter. Subsets
//! are stored as one `u64` mask per parameter (bit `i` is the `i`-th universe
//! element), so the universe is capped at [`MAX_ELEMENTS`] elements. The
//! support of a soft set (parameters with a nonempty value) is never stored.
//!
//! Soft points are `(parameter, element)` pairs. The soft subsets of a fixed
//! ambient soft set form a Boolean lattice isomorphic to the powerset of its
//! soft points; [`PointGraph`] realizes that isomorphism as a bit mask with one
//! bit per soft point, which is what the topology code works on.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported universe.
pub const MAX_ELEMENTS: usize = 64;
/// Largest number of soft points a [`PointGraph`] can index.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn new<I, S>(kind: &'static str, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyNames { kind });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateName { kind, name: name.clone() });
            }
        }
        Ok(Names { names, index })
    }
}

/// The initial universe: an ordered list of distinct element names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe(Names);

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names = Names::new("universe element", names)?;
        if names.names.len() > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                what: "universe size",
                limit: MAX_ELEMENTS,
                got: names.names.len(),
            });
        }
        Ok(Universe(names))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }
}

/// The parameter set: an ordered list of distinct parameter names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSet(Names);

impl ParameterSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ok(ParameterSet(Names::new("parameter", names)?))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }
}

/// A universe together with a parameter set. Every soft set refers to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    universe: Universe,
    params: ParameterSet,
}

impl Context {
    pub fn new(universe: Universe, params: ParameterSet) -> Arc<Context> {
        Arc::new(Context { universe, params })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn element_index(&self, name: &str) -> Result<usize> {
        self.universe.0.index.get(name).copied().ok_or_else(|| Error::UnknownName {
            kind: "universe element",
            name: name.to_string(),
        })
    }

    pub fn param_index(&self, name: &str) -> Result<usize> {
        self.params.0.index.get(name).copied().ok_or_else(|| Error::UnknownName {
            kind: "parameter",
            name: name.to_string(),
        })
    }

    pub fn element_name(&self, index: usize) -> &str {
        &self.universe.0.names[index]
    }

    pub fn param_name(&self, index: usize) -> &str {
        &self.params.0.names[index]
    }

    /// Resolves `element@param`.
    pub fn point(&self, element: &str, param: &str) -> Result<SoftPoint> {
        Ok(SoftPoint {
            param: self.param_index(param)? as u32,
            element: self.element_index(element)? as u32,
        })
    }

    /// Parses the `element@param` notation.
    pub fn parse_point(&self, text: &str) -> Result<SoftPoint> {
        match text.split_once('@') {
            Some((e, s)) => self.point(e, s),
            None => Err(Error::UnknownName { kind: "soft point", name: text.to_string() }),
        }
    }

    pub fn point_name(&self, p: SoftPoint) -> String {
        format!("{}@{}", self.element_name(p.element()), self.param_name(p.param()))
    }

    fn full_mask(&self) -> u64 {
        low_bits(self.universe.len())
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn same_context(a: &Arc<Context>, b: &Arc<Context>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A soft point: a parameter paired with a universe element.
///
/// Ordering is parameter-major, element-minor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SoftPoint {
    param: u32,
    element: u32,
}

impl SoftPoint {
    pub fn param(self) -> usize {
        self.param as usize
    }

    pub fn element(self) -> usize {
        self.element as usize
    }
}

/// A soft set: a total map from parameters to subsets of the universe.
#[derive(Clone)]
pub struct SoftSet {
    ctx: Arc<Context>,
    masks: Vec<u64>,
}

impl PartialEq for SoftSet {
    fn eq(&self, other: &Self) -> bool {
        self.masks == other.masks && same_context(&self.ctx, &other.ctx)
    }
}

impl Eq for SoftSet {}

impl std::hash::Hash for SoftSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.masks.hash(state);
    }
}

impl fmt::Debug for SoftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SoftSet{self}")
    }
}

/// `{s1: x1; s2: x1 x3}`; parameters with an empty value are omitted.
impl fmt::Display for SoftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (s, &mask) in self.masks.iter().enumerate() {
            if mask == 0 {
                continue;
            }
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{}:", self.ctx.param_name(s))?;
            for x in bits(mask) {
                write!(f, " {}", self.ctx.element_name(x))?;
            }
        }
        f.write_str("}")
    }
}

/// Indices of the set bits of `mask`, ascending.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl SoftSet {
    /// Builds a soft set from `(parameter, elements)` entries. Parameters that
    /// are not mentioned map to the empty set; repeated parameters accumulate.
    pub fn new<P, E>(ctx: &Arc<Context>, entries: &[(P, Vec<E>)]) -> Result<SoftSet>
    where
        P: AsRef<str>,
        E: AsRef<str>,
    {
        let mut masks = vec![0u64; ctx.params.len()];
        for (param, elements) in entries {
            let s = ctx.param_index(param.as_ref())?;
            for e in elements {
                masks[s] |= 1 << ctx.element_index(e.as_ref())?;
            }
        }
        Ok(SoftSet { ctx: Arc::clone(ctx), masks })
    }

    /// The null soft set.
    pub fn empty(ctx: &Arc<Context>) -> SoftSet {
        SoftSet { ctx: Arc::clone(ctx), masks: vec![0; ctx.params.len()] }
    }

    /// The absolute soft set: every parameter maps to the whole universe.
    pub fn absolute(ctx: &Arc<Context>) -> SoftSet {
        SoftSet { ctx: Arc::clone(ctx), masks: vec![ctx.full_mask(); ctx.params.len()] }
    }

    /// The soft set containing exactly one soft point.
    pub fn singleton(ctx: &Arc<Context>, p: SoftPoint) -> SoftSet {
        let mut masks = vec![0; ctx.params.len()];
        masks[p.param()] = 1 << p.element();
        SoftSet { ctx: Arc::clone(ctx), masks }
    }

    /// Builds a soft set from raw per-parameter masks (bits beyond the
    /// universe are dropped).
    pub fn from_masks(ctx: &Arc<Context>, mut masks: Vec<u64>) -> Result<SoftSet> {
        if masks.len() != ctx.params.len() {
            return Err(Error::ContextMismatch);
        }
        let full = ctx.full_mask();
        for m in &mut masks {
            *m &= full;
        }
        Ok(SoftSet { ctx: Arc::clone(ctx), masks })
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// The subset assigned to parameter index `s`, as an element mask.
    pub fn mask(&self, s: usize) -> u64 {
        self.masks[s]
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Element names assigned to the named parameter.
    pub fn value_of(&self, param: &str) -> Result<Vec<&str>> {
        let s = self.ctx.param_index(param)?;
        Ok(bits(self.masks[s]).map(|x| self.ctx.element_name(x)).collect())
    }

    /// Parameters with a nonempty value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.masks.len()).filter(|&s| self.masks[s] != 0).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.iter().all(|&m| m == 0)
    }

    fn zip_with(&self, other: &SoftSet, op: impl Fn(u64, u64) -> u64) -> Result<SoftSet> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let masks = self.masks.iter().zip(&other.masks).map(|(&a, &b)| op(a, b)).collect();
        Ok(SoftSet { ctx: Arc::clone(&self.ctx), masks })
    }

    pub fn union(&self, other: &SoftSet) -> Result<SoftSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &SoftSet) -> Result<SoftSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &SoftSet) -> Result<SoftSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement relative to the whole universe, parameter by parameter.
    pub fn complement(&self) -> SoftSet {
        let full = self.ctx.full_mask();
        SoftSet { ctx: Arc::clone(&self.ctx), masks: self.masks.iter().map(|&m| full & !m).collect() }
    }

    /// First parameter at which `self` is not contained in `other`.
    pub fn subset_violation(&self, other: &SoftSet) -> Result<Option<usize>> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok((0..self.masks.len()).find(|&s| self.masks[s] & !other.masks[s] != 0))
    }

    pub fn is_subset(&self, other: &SoftSet) -> Result<bool> {
        Ok(self.subset_violation(other)?.is_none())
    }

    pub fn soft_equal(&self, other: &SoftSet) -> Result<bool> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(self.masks == other.masks)
    }

    /// All soft points, parameter-major.
    pub fn points(&self) -> Vec<SoftPoint> {
        let mut out = Vec::new();
        for (s, &mask) in self.masks.iter().enumerate() {
            out.extend(bits(mask).map(|x| SoftPoint { param: s as u32, element: x as u32 }));
        }
        out
    }

    pub fn point_count(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn contains_point(&self, p: SoftPoint) -> bool {
        self.masks.get(p.param()).is_some_and(|m| m >> p.element() & 1 == 1)
    }

    /// Lifts a list of soft points of this context to the soft set they form.
    pub fn from_points(ctx: &Arc<Context>, points: &[SoftPoint]) -> SoftSet {
        let mut masks = vec![0; ctx.params.len()];
        for p in points {
            masks[p.param()] |= 1 << p.element();
        }
        SoftSet { ctx: Arc::clone(ctx), masks }
    }

    pub(crate) fn require_subset_of(&self, ambient: &SoftSet) -> Result<()> {
        match self.subset_violation(ambient)? {
            None => Ok(()),
            Some(s) => Err(Error::NotASubset { param: self.ctx.param_name(s).to_string() }),
        }
    }
}

/// Enumerates the soft points of an ambient soft set and identifies its soft
/// subsets with bit masks over those points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGraph {
    ambient: SoftSet,
    pairs: Vec<SoftPoint>,
}

impl PointGraph {
    pub fn new(ambient: &SoftSet) -> Result<PointGraph> {
        let pairs = ambient.points();
        if pairs.len() > MAX_POINTS {
            return Err(Error::TooLarge { what: "soft point count", limit: MAX_POINTS, got: pairs.len() });
        }
        Ok(PointGraph { ambient: ambient.clone(), pairs })
    }

    pub fn ambient(&self) -> &SoftSet {
        &self.ambient
    }

    pub fn pairs(&self) -> &[SoftPoint] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Mask with one bit per soft point of the ambient set.
    pub fn full_mask(&self) -> u64 {
        low_bits(self.pairs.len())
    }

    pub fn index_of(&self, p: SoftPoint) -> Option<usize> {
        self.pairs.binary_search(&p).ok()
    }

    pub fn encode(&self, a: &SoftSet) -> Result<u64> {
        a.require_subset_of(&self.ambient)?;
        let mut mask = 0;
        for (i, p) in self.pairs.iter().enumerate() {
            if a.contains_point(*p) {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }

    pub fn decode(&self, mask: u64) -> SoftSet {
        let ctx = self.ambient.context();
        let mut masks = vec![0; ctx.params.len()];
        for i in bits(mask & self.full_mask()) {
            let p = self.pairs[i];
            masks[p.param()] |= 1 << p.element();
        }
        SoftSet { ctx: Arc::clone(ctx), masks }
    }

    pub fn decode_points(&self, mask: u64) -> Vec<SoftPoint> {
        bits(mask & self.full_mask()).map(|i| self.pairs[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn university() -> (Arc<Context>, SoftSet) {
        let ctx = Context::new(
            Universe::new(["x1", "x2", "x3", "x4", "x5"]).unwrap(),
            ParameterSet::new(["s1", "s2", "s3", "s4"]).unwrap(),
        );
        let g = SoftSet::new(
            &ctx,
            &[("s1", vec!["x1"]), ("s2", vec!["x1", "x3", "x5"]), ("s3", vec!["x1", "x4", "x5"])],
        )
        .unwrap();
        (ctx, g)
    }

    #[test]
    fn university_example() {
        let (ctx, g) = university();
        assert_eq!(g.value_of("s4").unwrap(), Vec::<&str>::new());
        assert_eq!(g.value_of("s3").unwrap(), vec!["x1", "x4", "x5"]);
        assert_eq!(g.support(), vec![0, 1, 2]);
        let names: Vec<String> = g.points().into_iter().map(|p| ctx.point_name(p)).collect();
        assert_eq!(names, ["x1@s1", "x1@s2", "x3@s2", "x5@s2", "x1@s3", "x4@s3", "x5@s3"]);
        assert!(g.contains_point(ctx.parse_point("x4@s3").unwrap()));
        assert!(!g.contains_point(ctx.parse_point("x2@s1").unwrap()));
    }

    #[test]
    fn empty_and_absolute() {
        let (ctx, g) = university();
        let none: &[(&str, Vec<&str>)] = &[];
        assert_eq!(SoftSet::new(&ctx, none).unwrap(), SoftSet::empty(&ctx));
        let all: Vec<(&str, Vec<&str>)> =
            ["s1", "s2", "s3", "s4"].iter().map(|&s| (s, vec!["x1", "x2", "x3", "x4", "x5"])).collect();
        assert_eq!(SoftSet::new(&ctx, &all).unwrap(), SoftSet::absolute(&ctx));
        assert_eq!(g.union(&SoftSet::empty(&ctx)).unwrap(), g);
        assert!(g.difference(&g).unwrap().is_empty());
        assert!(g.is_subset(&SoftSet::absolute(&ctx)).unwrap());
        assert!(SoftSet::empty(&ctx).is_subset(&g).unwrap());
        assert_eq!(SoftSet::empty(&ctx).complement(), SoftSet::absolute(&ctx));
    }

    #[test]
    fn intersection_and_complement_by_hand() {
        let (ctx, g) = university();
        let h = SoftSet::new(&ctx, &[("s2", vec!["x3", "x4"])]).unwrap();
        let expected = SoftSet::new(&ctx, &[("s2", vec!["x3"])]).unwrap();
        assert_eq!(g.intersection(&h).unwrap(), expected);
        assert_eq!(g.complement().value_of("s1").unwrap(), vec!["x2", "x3", "x4", "x5"]);
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn subset_violation_reports_param() {
        let (ctx, g) = university();
        let h = SoftSet::new(&ctx, &[("s3", vec!["x2"])]).unwrap();
        assert_eq!(h.subset_violation(&g).unwrap(), Some(2));
        assert!(!h.is_subset(&g).unwrap());
    }

    #[test]
    fn unknown_names_and_mismatch() {
        let (ctx, _) = university();
        let err = SoftSet::new(&ctx, &[("s9", vec!["x1"])]).unwrap_err();
        assert_eq!(err, Error::UnknownName { kind: "parameter", name: "s9".into() });
        let err = SoftSet::new(&ctx, &[("s1", vec!["y"])]).unwrap_err();
        assert_eq!(err, Error::UnknownName { kind: "universe element", name: "y".into() });
        let other = Context::new(Universe::new(["a"]).unwrap(), ParameterSet::new(["s"]).unwrap());
        assert_eq!(
            SoftSet::empty(&ctx).union(&SoftSet::empty(&other)).unwrap_err(),
            Error::ContextMismatch
        );
        assert!(Universe::new(["a", "a"]).is_err());
        assert!(ParameterSet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn graph_round_trip() {
        let (ctx, g) = university();
        let graph = PointGraph::new(&SoftSet::absolute(&ctx)).unwrap();
        assert_eq!(graph.len(), 20);
        let m = graph.encode(&g).unwrap();
        assert_eq!(m.count_ones(), 7);
        assert_eq!(graph.decode(m), g);
        assert_eq!(graph.encode(graph.ambient()).unwrap(), graph.full_mask());
        assert_eq!(graph.encode(&SoftSet::empty(&ctx)).unwrap(), 0);
        let inner = PointGraph::new(&g).unwrap();
        assert!(matches!(
            inner.encode(&SoftSet::absolute(&ctx)),
            Err(Error::NotASubset { .. })
        ));
    }

    #[test]
    fn union_of_singletons_rebuilds_set() {
        let (ctx, g) = university();
        let rebuilt = g
            .points()
            .into_iter()
            .map(|p| SoftSet::singleton(&ctx, p))
            .try_fold(SoftSet::empty(&ctx), |acc, s| acc.union(&s))
            .unwrap();
        assert_eq!(rebuilt, g);
    }
}
