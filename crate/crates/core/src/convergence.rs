//! Convergence of eventually periodic sequences of soft points.
//!
//! For a sequence `w` and a soft set `U`, the exception set
//! `{n : w_n ∉ U}` and the hit set `{n : w_n ∈ U}` are eventually periodic
//! with the same prefix length and period as `w`. In a finite topology every
//! neighborhood of `x` contains the minimal open neighborhood `U_x`, exception
//! sets shrink as `U` grows, and ideals are closed downward, so each "for
//! every neighborhood" quantifier only needs `U_x`:
//!
//! * soft convergence: `E = exception(U_x)` is finite;
//! * statistical convergence: `E` has density zero;
//! * ideal convergence: `E` belongs to the ideal;
//! * cluster points: `hit(U_x)` is not in the ideal.
//!
//! Star convergence asks for some `P` in the dual filter along which `w`
//! converges, i.e. with `P ∩ E` finite. Every such `P` contains the filter
//! core `C` (the complement of the generator union) up to finitely many
//! points, and `C` itself is in the filter and infinite, so star convergence
//! holds iff `C ∩ E` is finite.
//!
//! A limit point needs an index set `P` outside the ideal along which `w`
//! converges to `x`, i.e. `P \ hit(U_x)` finite. If `hit(U_x)` is outside the
//! ideal it serves as `P`; otherwise every candidate `P` is, up to a finite
//! set, inside a member of the ideal. [`lambda_witness`] returns that `P`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ideals::{check_disjoint, Ideal};
use crate::natset::{canonicalize, lcm, EpSet};
use crate::softset::{SoftPoint, SoftSet};
use crate::topology::SoftTopology;

/// An eventually periodic sequence of soft points of an ambient soft set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpSoftSeq {
    ambient: SoftSet,
    prefix: Vec<SoftPoint>,
    pattern: Vec<SoftPoint>,
}

impl EpSoftSeq {
    pub fn new(ambient: &SoftSet, mut prefix: Vec<SoftPoint>, mut pattern: Vec<SoftPoint>) -> Result<EpSoftSeq> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if let Some(p) = prefix.iter().chain(&pattern).find(|p| !ambient.contains_point(**p)) {
            return Err(Error::PointOutsideSpace { point: ambient.context().point_name(*p) });
        }
        canonicalize(&mut prefix, &mut pattern);
        Ok(EpSoftSeq { ambient: ambient.clone(), prefix, pattern })
    }

    pub fn constant(ambient: &SoftSet, p: SoftPoint) -> Result<EpSoftSeq> {
        EpSoftSeq::new(ambient, Vec::new(), vec![p])
    }

    /// The sequence whose terms are `f(n)`, given that `f` is periodic with
    /// period `period` from `len` on.
    pub fn from_fn(ambient: &SoftSet, len: usize, period: usize, f: impl Fn(u64) -> SoftPoint) -> Result<EpSoftSeq> {
        let prefix = (0..len as u64).map(&f).collect();
        let pattern = (len as u64..(len + period) as u64).map(&f).collect();
        EpSoftSeq::new(ambient, prefix, pattern)
    }

    pub fn ambient(&self) -> &SoftSet {
        &self.ambient
    }

    pub fn prefix(&self) -> &[SoftPoint] {
        &self.prefix
    }

    pub fn pattern(&self) -> &[SoftPoint] {
        &self.pattern
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn term(&self, n: u64) -> SoftPoint {
        let l = self.prefix.len() as u64;
        if n < l {
            self.prefix[n as usize]
        } else {
            self.pattern[((n - l) % self.pattern.len() as u64) as usize]
        }
    }

    /// `{n : pred(w_n)}`.
    pub fn index_set(&self, pred: impl Fn(SoftPoint) -> bool) -> EpSet {
        let prefix = self.prefix.iter().map(|&p| pred(p)).collect();
        let pattern = self.pattern.iter().map(|&p| pred(p)).collect();
        EpSet::from_parts(prefix, pattern).expect("pattern is nonempty")
    }
}

/// `prefix[a@s] pattern[a@s b@s]`
impl fmt::Display for EpSoftSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = self.ambient.context();
        let join = |pts: &[SoftPoint]| pts.iter().map(|&p| ctx.point_name(p)).collect::<Vec<_>>().join(" ");
        write!(f, "prefix[{}] pattern[{}]", join(&self.prefix), join(&self.pattern))
    }
}

/// How a sequence is asked to converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Soft,
    Statistical,
    Ideal,
    IdealStar,
}

pub fn exception_set(w: &EpSoftSeq, u: &SoftSet) -> Result<EpSet> {
    u.require_subset_of(&w.ambient)?;
    Ok(w.index_set(|p| !u.contains_point(p)))
}

pub fn hit_set(w: &EpSoftSeq, u: &SoftSet) -> Result<EpSet> {
    u.require_subset_of(&w.ambient)?;
    Ok(w.index_set(|p| u.contains_point(p)))
}

fn check_space(t: &SoftTopology, w: &EpSoftSeq) -> Result<()> {
    if t.space() != w.ambient() {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// `{n : w_n ∉ open mask m}` for a mask over `t`'s point graph.
pub(crate) fn exception_of_mask(t: &SoftTopology, w: &EpSoftSeq, m: u64) -> EpSet {
    let graph = t.graph();
    w.index_set(|p| graph.index_of(p).is_none_or(|i| m >> i & 1 == 0))
}

fn min_nbhd_exception(t: &SoftTopology, w: &EpSoftSeq, x: SoftPoint) -> Result<EpSet> {
    check_space(t, w)?;
    let i = t.point_index(x)?;
    Ok(exception_of_mask(t, w, t.min_nbhd_mask(i)))
}

fn min_nbhd_hits(t: &SoftTopology, w: &EpSoftSeq, x: SoftPoint) -> Result<EpSet> {
    Ok(min_nbhd_exception(t, w, x)?.complement())
}

pub fn soft_converges_to(t: &SoftTopology, w: &EpSoftSeq, x: SoftPoint) -> Result<bool> {
    Ok(min_nbhd_exception(t, w, x)?.is_finite())
}

pub fn stat_converges_to(t: &SoftTopology, w: &EpSoftSeq, x: SoftPoint) -> Result<bool> {
    Ok(*min_nbhd_exception(t, w, x)?.density().numer() == 0)
}

pub fn ideal_converges_to(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal, x: SoftPoint) -> Result<bool> {
    Ok(i.contains(&min_nbhd_exception(t, w, x)?))
}

pub fn istar_converges_to(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal, x: SoftPoint) -> Result<bool> {
    Ok(i.filter_core().intersect(&min_nbhd_exception(t, w, x)?).is_finite())
}

/// Dispatches on `mode`; the ideal is ignored for soft and statistical
/// convergence.
pub fn converges(mode: Mode, t: &SoftTopology, w: &EpSoftSeq, i: &Ideal, x: SoftPoint) -> Result<bool> {
    match mode {
        Mode::Soft => soft_converges_to(t, w, x),
        Mode::Statistical => stat_converges_to(t, w, x),
        Mode::Ideal => ideal_converges_to(t, w, i, x),
        Mode::IdealStar => istar_converges_to(t, w, i, x),
    }
}

fn collect_points(t: &SoftTopology, mut keep: impl FnMut(SoftPoint) -> Result<bool>) -> Result<Vec<SoftPoint>> {
    let mut out = Vec::new();
    for &x in t.points() {
        if keep(x)? {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn ideal_limits(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal) -> Result<Vec<SoftPoint>> {
    collect_points(t, |x| ideal_converges_to(t, w, i, x))
}

/// An index set outside the ideal along which `w` soft-converges to `x`, if
/// one exists.
pub fn lambda_witness(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal, x: SoftPoint) -> Result<Option<EpSet>> {
    let hits = min_nbhd_hits(t, w, x)?;
    if i.contains(&hits) {
        return Ok(None);
    }
    Ok(Some(hits))
}

/// Ideal limit points: `x` is reached as a soft limit along an index set that
/// is not in the ideal.
pub fn lambda_set(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal) -> Result<Vec<SoftPoint>> {
    collect_points(t, |x| match lambda_witness(t, w, i, x)? {
        None => Ok(false),
        Some(p) => soft_converges_to(t, &subsequence_by_epset(w, &p)?, x),
    })
}

/// Ideal cluster points: every neighborhood of `x` is hit on an index set
/// that is not in the ideal.
pub fn gamma_set(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal) -> Result<Vec<SoftPoint>> {
    collect_points(t, |x| Ok(!i.contains(&min_nbhd_hits(t, w, x)?)))
}

/// Soft limit points of the sequence: every neighborhood is hit infinitely
/// often.
pub fn limit_points(t: &SoftTopology, w: &EpSoftSeq) -> Result<Vec<SoftPoint>> {
    collect_points(t, |x| Ok(!min_nbhd_hits(t, w, x)?.is_finite()))
}

/// The soft set formed by a list of soft points of `t`.
pub fn lift(t: &SoftTopology, points: &[SoftPoint]) -> SoftSet {
    SoftSet::from_points(t.space().context(), points)
}

/// The subsequence `k ↦ w_{p_k}` where `p_0 < p_1 < ...` enumerates `p`.
///
/// Past `L = max(L_w, L_p)` both `w` and membership in `p` repeat with period
/// `lcm(p_w, p_p)`, so the members of `p` below `L` give the prefix and the
/// members in one such block give the pattern.
pub fn subsequence_by_epset(w: &EpSoftSeq, p: &EpSet) -> Result<EpSoftSeq> {
    if p.is_finite() {
        return Err(Error::FiniteIndexSet);
    }
    let len = w.prefix_len().max(p.prefix_len()) as u64;
    let period = lcm(w.period(), p.period()) as u64;
    let prefix = (0..len).filter(|&n| p.member(n)).map(|n| w.term(n)).collect();
    let pattern = (len..len + period).filter(|&n| p.member(n)).map(|n| w.term(n)).collect();
    EpSoftSeq::new(&w.ambient, prefix, pattern)
}

/// For a sequence that does not ideal-converge to `x`, the index set of terms
/// outside the minimal neighborhood of `x`. It is not in the ideal, and the
/// subsequence it selects never enters that neighborhood, so no further
/// subsequence of it can ideal-converge to `x`.
pub fn witness_nonconvergent_subsequence(t: &SoftTopology, w: &EpSoftSeq, i: &Ideal, x: SoftPoint) -> Result<EpSet> {
    let e = min_nbhd_exception(t, w, x)?;
    if i.contains(&e) {
        return Err(Error::AlreadyConverges { point: t.space().context().point_name(x) });
    }
    Ok(e)
}

fn common_shape(sets: impl IntoIterator<Item = (usize, usize)>) -> (usize, usize) {
    sets.into_iter().fold((0, 1), |(l, p), (l2, p2)| (l.max(l2), lcm(p, p2)))
}

/// `γ_n = pts[j]` for `n ∈ h[j]`, and `x` off the union of `h`.
pub fn build_interleaved_sequence(h: &[EpSet], pts: &[SoftPoint], x: SoftPoint, ambient: &SoftSet) -> Result<EpSoftSeq> {
    if h.len() != pts.len() {
        return Err(Error::LengthMismatch { left: h.len(), right: pts.len() });
    }
    check_disjoint(h)?;
    let (len, period) = common_shape(h.iter().map(|s| (s.prefix_len(), s.period())));
    EpSoftSeq::from_fn(ambient, len, period, |n| {
        h.iter().position(|s| s.member(n)).map_or(x, |j| pts[j])
    })
}

/// `v_n` on `d`, `w_n` elsewhere.
pub fn overwrite_on(w: &EpSoftSeq, d: &EpSet, v: &EpSoftSeq) -> Result<EpSoftSeq> {
    if w.ambient != v.ambient {
        return Err(Error::AmbientMismatch);
    }
    let (len, period) = common_shape([
        (w.prefix_len(), w.period()),
        (v.prefix_len(), v.period()),
        (d.prefix_len(), d.period()),
    ]);
    EpSoftSeq::from_fn(&w.ambient, len, period, |n| if d.member(n) { v.term(n) } else { w.term(n) })
}

/// `{n : w_n ≠ v_n}`.
pub fn differs_on(w: &EpSoftSeq, v: &EpSoftSeq) -> Result<EpSet> {
    if w.ambient != v.ambient {
        return Err(Error::AmbientMismatch);
    }
    let (len, period) = common_shape([(w.prefix_len(), w.period()), (v.prefix_len(), v.period())]);
    let bit = |n: u64| w.term(n) != v.term(n);
    let prefix = (0..len as u64).map(bit).collect();
    let pattern = (len as u64..(len + period) as u64).map(bit).collect();
    EpSet::from_parts(prefix, pattern)
}
