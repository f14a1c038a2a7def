//! Seeded instance generators, definitional oracles and the theorem suite.
//!
//! The suite runs in two phases. The exhaustive phase covers every topology on
//! a fixed set of small spaces (up to three soft points), every sequence with
//! a short prefix and period, and a fixed pool of ideals. The random phase
//! draws `trials` instances from seeded generators; trial `k` uses an RNG
//! seeded from `(seed, stream, k)`, so results do not depend on the order in
//! which trials run.
//!
//! Oracles here never use the minimal-neighborhood shortcut: they scan every
//! soft neighborhood of a point, or search index sets directly.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::{
    self, build_interleaved_sequence, differs_on, exception_of_mask, gamma_set, ideal_converges_to, ideal_limits,
    istar_converges_to, lambda_set, lift, limit_points, overwrite_on, soft_converges_to, stat_converges_to,
    subsequence_by_epset, witness_nonconvergent_subsequence, EpSoftSeq,
};
use crate::error::Result;
use crate::ideals::Ideal;
use crate::natset::EpSet;
use crate::softset::{bits, Context, ParameterSet, PointGraph, SoftPoint, SoftSet, Universe};
use crate::syntax::parse_ideal;
use crate::topology::{enumerate_topologies, SoftTopology};
use crate::workspace::Workspace;

/// Ideal pool used by the exhaustive phase unless configured otherwise.
pub const DEFAULT_IDEAL_POOL: [&str; 3] = ["fin", "gens(mod(2:0))", "gens(mod(3:0))"];

/// Grid bounds of the exhaustive phase.
pub const GRID_MAX_POINTS: usize = 3;
pub const GRID_MAX_PREFIX: usize = 2;
pub const GRID_MAX_PERIOD: usize = 3;

/// Disjoint families checked against `ap_witness` per pool ideal.
pub const AP_FAMILIES_PER_IDEAL: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Soft points per generated space.
    pub max_points: usize,
    pub max_period: usize,
    pub max_prefix: usize,
    /// Ideal expressions for the exhaustive phase, e.g. `gens(mod(2:0))`.
    pub ideal_pool: Vec<String>,
    pub trials: usize,
    /// Random trials (counted from 0) that also run the index-set search
    /// oracle for limit points.
    pub oracle_trials: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            max_points: 4,
            max_period: 6,
            max_prefix: 4,
            ideal_pool: DEFAULT_IDEAL_POOL.iter().map(|s| s.to_string()).collect(),
            trials: 10_000,
            oracle_trials: 500,
        }
    }
}

const STREAM_SPACE: u64 = 1;
const STREAM_SEQ: u64 = 2;
const STREAM_IDEAL: u64 = 3;
const STREAM_TRIAL: u64 = 4;
const STREAM_AP: u64 = 5;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG for item `k` of a stream.
pub fn rng_for(seed: u64, stream: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ k))
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Closes a family of masks under pairwise union and intersection and adds
/// the empty set and `full`.
pub fn close_family(full: u64, generators: &[u64]) -> Vec<u64> {
    let mut family: BTreeSet<u64> = generators.iter().copied().collect();
    family.insert(0);
    family.insert(full);
    loop {
        let current: Vec<u64> = family.iter().copied().collect();
        let before = family.len();
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                family.insert(a | b);
                family.insert(a & b);
            }
        }
        if family.len() == before {
            return current;
        }
    }
}

/// The `k`-th random space: a universe of at most three elements, one or two
/// parameters, at most `max_points` soft points, and a topology generated by
/// a random subbasis.
pub fn gen_space(cfg: &GenConfig, k: u64) -> (SoftSet, SoftTopology) {
    let mut rng = rng_for(cfg.seed, STREAM_SPACE, k);
    let max_points = cfg.max_points.max(1);
    loop {
        let elements = rng.gen_range(1..=3);
        let params = rng.gen_range(1..=2);
        let ctx = Context::new(
            Universe::new(names("x", elements)).expect("nonempty distinct names"),
            ParameterSet::new(names("s", params)).expect("nonempty distinct names"),
        );
        let masks = (0..params).map(|_| rng.gen_range(0..1u64 << elements)).collect();
        let space = SoftSet::from_masks(&ctx, masks).expect("one mask per parameter");
        let n = space.point_count();
        if n == 0 || n > max_points {
            continue;
        }
        let graph = PointGraph::new(&space).expect("few points");
        let full = graph.full_mask();
        let subbasis: Vec<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..=full)).collect();
        let topology = SoftTopology::from_masks(graph, close_family(full, &subbasis))
            .expect("closed families satisfy the axioms");
        return (space, topology);
    }
}

fn random_seq(rng: &mut ChaCha8Rng, cfg: &GenConfig, points: &[SoftPoint], space: &SoftSet) -> EpSoftSeq {
    let len = rng.gen_range(0..=cfg.max_prefix);
    let period = rng.gen_range(1..=cfg.max_period.max(1));
    let mut pick = || *points.choose(rng).expect("space has points");
    let prefix = (0..len).map(|_| pick()).collect();
    let pattern = (0..period).map(|_| pick()).collect();
    EpSoftSeq::new(space, prefix, pattern).expect("points come from the space")
}

pub fn gen_sequence(cfg: &GenConfig, space: &SoftSet, k: u64) -> EpSoftSeq {
    let mut rng = rng_for(cfg.seed, STREAM_SEQ, k);
    random_seq(&mut rng, cfg, &space.points(), space)
}

fn random_epset(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> EpSet {
    let len = rng.gen_range(0..=cfg.max_prefix);
    let period = rng.gen_range(1..=cfg.max_period.max(1));
    let prefix = (0..len).map(|_| rng.gen_bool(0.5)).collect();
    let pattern = (0..period).map(|_| rng.gen_bool(0.5)).collect();
    EpSet::from_parts(prefix, pattern).expect("period is positive")
}

fn random_finite(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> EpSet {
    let bound = 2 * (cfg.max_prefix + cfg.max_period) as u64;
    let elems: Vec<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..bound)).collect();
    EpSet::from_finite(&elems)
}

fn random_residue_class(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> EpSet {
    let m = rng.gen_range(2..=cfg.max_period.max(2)) as u64;
    let residues: Vec<u64> = (0..m).filter(|_| rng.gen_bool(0.4)).collect();
    EpSet::from_residues(m, &residues).expect("residues below modulus")
}

/// The `k`-th random ideal: up to two generators, each a residue class, a
/// finite set, or their union. Trivial draws are retried.
pub fn gen_ideal(cfg: &GenConfig, k: u64) -> Ideal {
    let mut rng = rng_for(cfg.seed, STREAM_IDEAL, k);
    loop {
        let gens = (0..rng.gen_range(0..=2))
            .map(|_| match rng.gen_range(0..3) {
                0 => random_residue_class(&mut rng, cfg),
                1 => random_finite(&mut rng, cfg),
                _ => random_residue_class(&mut rng, cfg).union(&random_finite(&mut rng, cfg)),
            })
            .collect();
        if let Ok(ideal) = Ideal::new(gens) {
            return ideal;
        }
    }
}

/// A random member of `ideal`.
fn random_member(rng: &mut ChaCha8Rng, cfg: &GenConfig, ideal: &Ideal) -> EpSet {
    random_epset(rng, cfg).intersect(ideal.generator_union()).union(&random_finite(rng, cfg))
}

/// An infinite set outside `ideal`: an infinite piece of the filter core,
/// possibly padded with a member of the ideal.
fn random_non_member(rng: &mut ChaCha8Rng, cfg: &GenConfig, ideal: &Ideal) -> EpSet {
    let core = ideal.filter_core();
    loop {
        let piece = core.intersect(&random_residue_class(rng, cfg));
        if !piece.is_finite() {
            let pad = if rng.gen_bool(0.5) { random_member(rng, cfg, ideal) } else { EpSet::empty() };
            return piece.union(&pad);
        }
    }
}

/// Pairwise disjoint members of `ideal`: a random member split along a
/// random partition of residues.
fn random_disjoint_family(rng: &mut ChaCha8Rng, cfg: &GenConfig, ideal: &Ideal) -> Vec<EpSet> {
    let base = random_member(rng, cfg, ideal);
    let parts = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=cfg.max_period.max(1)) as u64;
    let mut residues = vec![Vec::new(); parts];
    for r in 0..m {
        if let Some(slot) = residues.get_mut(rng.gen_range(0..=parts)) {
            slot.push(r);
        }
    }
    residues
        .iter()
        .map(|rs| base.intersect(&EpSet::from_residues(m, rs).expect("residues below modulus")))
        .collect()
}

/// Masks of every soft neighborhood of graph point `i`.
fn neighborhoods(t: &SoftTopology, i: usize) -> impl Iterator<Item = u64> + '_ {
    let full = t.graph().full_mask();
    (0..=full).filter(move |&k| t.opens_containing(i).any(|o| o & !k == 0))
}

/// Definitional convergence: `accept` holds for the exception set of every
/// soft neighborhood of `x`.
pub fn converges_by_scan(t: &SoftTopology, w: &EpSoftSeq, x: SoftPoint, accept: impl Fn(&EpSet) -> bool) -> Result<bool> {
    let i = t.point_index(x)?;
    Ok(neighborhoods(t, i).all(|k| accept(&exception_of_mask(t, w, k))))
}

/// Cluster points by scanning every soft neighborhood.
pub fn oracle_gamma(t: &SoftTopology, w: &EpSoftSeq, ideal: &Ideal) -> Result<Vec<SoftPoint>> {
    let mut out = Vec::new();
    for (i, &x) in t.points().iter().enumerate() {
        if neighborhoods(t, i).all(|k| !ideal.contains(&exception_of_mask(t, w, k).complement())) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Infinite index sets outside `ideal` with prefix length at most
/// `max_prefix` and period at most `max_period`, canonical and deduplicated.
pub fn lambda_candidates(ideal: &Ideal, max_prefix: usize, max_period: usize) -> Vec<EpSet> {
    let mut out = BTreeSet::new();
    for prefix_bits in 0u32..1 << max_prefix {
        let prefix: Vec<bool> = (0..max_prefix).map(|b| prefix_bits >> b & 1 == 1).collect();
        for q in 1..=max_period {
            for pattern_bits in 0u32..1 << q {
                let pattern = (0..q).map(|b| pattern_bits >> b & 1 == 1).collect();
                let p = EpSet::from_parts(prefix.clone(), pattern).expect("q >= 1");
                if !p.is_finite() && !ideal.contains(&p) {
                    out.insert(p);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Limit points found by searching index sets `P` outside the ideal within
/// the bounds and testing soft convergence of the subsequence along `P` by
/// scanning neighborhoods. Complete once the bounds reach the sequence's own
/// prefix length and period.
pub fn oracle_lambda(t: &SoftTopology, w: &EpSoftSeq, ideal: &Ideal, bounds: (usize, usize)) -> Result<Vec<SoftPoint>> {
    oracle_lambda_with(t, w, &lambda_candidates(ideal, bounds.0, bounds.1))
}

pub fn oracle_lambda_with(t: &SoftTopology, w: &EpSoftSeq, candidates: &[EpSet]) -> Result<Vec<SoftPoint>> {
    let n = t.points().len();
    let mut found = vec![false; n];
    for p in candidates {
        let sub = subsequence_by_epset(w, p)?;
        for (i, &x) in t.points().iter().enumerate() {
            if !found[i] && converges_by_scan(t, &sub, x, EpSet::is_finite)? {
                found[i] = true;
            }
        }
        if found.iter().all(|&f| f) {
            break;
        }
    }
    Ok(t.points().iter().zip(found).filter(|(_, f)| *f).map(|(&x, _)| x).collect())
}

/// Implementations under test; swapped out for mutation testing.
#[derive(Clone, Copy)]
pub struct Probes {
    pub gamma: fn(&SoftTopology, &EpSoftSeq, &Ideal) -> Result<Vec<SoftPoint>>,
}

impl Default for Probes {
    fn default() -> Self {
        Probes { gamma: gamma_set }
    }
}

/// A deliberately wrong cluster-point set that tests only the singleton
/// `{x}` instead of the minimal neighborhood of `x`.
pub fn gamma_singleton_mutant(t: &SoftTopology, w: &EpSoftSeq, ideal: &Ideal) -> Result<Vec<SoftPoint>> {
    Ok(t.points()
        .iter()
        .copied()
        .filter(|&x| !ideal.contains(&w.index_set(|p| p == x)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremResult {
    pub id: &'static str,
    pub description: &'static str,
    pub checks: u64,
    pub violations: u64,
    /// Instances showing the property is not vacuous (e.g. a non-Hausdorff
    /// space with two ideal limits).
    pub witnesses: u64,
    pub requires_witness: bool,
    /// First counterexample, in workspace format.
    pub counterexample: Option<String>,
}

impl TheoremResult {
    pub fn passed(&self) -> bool {
        self.violations == 0 && !(self.requires_witness && self.checks > 0 && self.witnesses == 0)
    }

    pub fn counterexample_file(&self) -> Option<String> {
        self.counterexample.as_ref().map(|_| format!("{}.ws", self.id))
    }
}

const THEOREMS: &[(&str, &str, bool)] = &[
    ("closure-laws", "closure is extensive, idempotent, monotone; closed iff fixed", false),
    ("min-nbhd", "minimal open neighborhood is open and inside every neighborhood", false),
    ("subspace-valid", "relative topologies satisfy the axioms", false),
    ("hausdorff-discrete", "Hausdorff implies T1; both iff discrete", false),
    ("no-limit-point-singletons", "no soft limit point iff all singletons open", false),
    ("limit-point-scan", "limit points of sets agree with the neighborhood scan", false),
    ("convergence-hierarchy", "soft, statistical and finite-ideal convergence coincide", false),
    ("soft-implies-ideal", "soft convergence implies ideal convergence", false),
    ("convergence-scan", "minimal-neighborhood convergence agrees with the scan", false),
    ("hausdorff-unique-limit", "ideal limits are unique in Hausdorff spaces", true),
    ("istar-implies-ideal", "star convergence implies ideal convergence", false),
    ("no-limit-point-coincide", "ideal and star convergence coincide without soft limit points", false),
    ("ap-coincide", "ideal and star convergence coincide for AP ideals", false),
    ("ap-witness", "AP witnesses have finite differences and union in the ideal", false),
    ("nonconvergent-witness", "non-convergence is witnessed by an index set outside the ideal", false),
    ("interleaved-construction", "interleaving on ideal sets converges to the base point", false),
    ("lambda-subset-gamma", "limit points are cluster points", false),
    ("lambda-equals-gamma", "limit and cluster point sets coincide on finite spaces", false),
    ("gamma-closed", "the cluster point set is closed", false),
    ("gamma-oracle", "cluster points agree with the neighborhood scan", false),
    ("lambda-oracle", "limit points agree with the index-set search", false),
    ("cluster-equals-limit-points", "finite-ideal cluster points are the soft limit points", false),
    ("modification-invariance", "changing a sequence on an ideal set keeps both point sets", true),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub results: Vec<TheoremResult>,
}

impl SuiteReport {
    fn new() -> SuiteReport {
        SuiteReport {
            results: THEOREMS
                .iter()
                .map(|&(id, description, requires_witness)| TheoremResult {
                    id,
                    description,
                    checks: 0,
                    violations: 0,
                    witnesses: 0,
                    requires_witness,
                    counterexample: None,
                })
                .collect(),
        }
    }

    pub fn get(&self, id: &str) -> Option<&TheoremResult> {
        self.results.iter().find(|r| r.id == id)
    }

    fn entry(&mut self, id: &str) -> &mut TheoremResult {
        self.results.iter_mut().find(|r| r.id == id).unwrap_or_else(|| panic!("unknown theorem id {id}"))
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(TheoremResult::passed)
    }

    /// Plain-text table followed by one machine-readable line per theorem.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<28} {:>9} {:>10} {:>9}  result", "theorem", "checks", "violations", "witnesses");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<28} {:>9} {:>10} {:>9}  {}",
                r.id,
                r.checks,
                r.violations,
                r.witnesses,
                if r.passed() { "pass" } else { "FAIL" }
            );
        }
        out.push('\n');
        for r in &self.results {
            let _ = writeln!(
                out,
                "THEOREM {} {} trials={} counterexample={}",
                r.id,
                if r.passed() { "PASS" } else { "FAIL" },
                r.checks,
                r.counterexample_file().unwrap_or_else(|| "none".into())
            );
        }
        out
    }
}

/// Serializes an instance as a workspace file.
pub fn counterexample_workspace(
    t: &SoftTopology,
    seqs: &[(&str, &EpSoftSeq)],
    ideal: Option<&Ideal>,
    notes: &[String],
) -> String {
    let ctx = t.space().context();
    let mut ws = Workspace::new(Arc::clone(ctx));
    let mut build = || -> Result<()> {
        ws.add_softset("space", t.space().clone())?;
        let mut members = Vec::new();
        for (k, open) in t.opens().into_iter().enumerate() {
            let name = format!("o{k}");
            ws.add_softset(&name, open)?;
            members.push(name);
        }
        ws.set_space("space")?;
        ws.add_topology("T", members)?;
        if let Some(i) = ideal {
            ws.add_ideal("I", i.clone())?;
        }
        for (name, w) in seqs {
            ws.add_seq(name, (*w).clone())?;
        }
        Ok(())
    };
    build().expect("generated instances are well formed");
    ws.to_text(notes)
}

struct Suite<'a> {
    report: SuiteReport,
    probes: &'a Probes,
}

impl Suite<'_> {
    fn record(&mut self, id: &str, ok: bool, describe: impl FnOnce() -> String) {
        let e = self.report.entry(id);
        e.checks += 1;
        if !ok {
            e.violations += 1;
            if e.counterexample.is_none() {
                e.counterexample = Some(describe());
            }
        }
    }

    fn witness(&mut self, id: &str) {
        self.report.entry(id).witnesses += 1;
    }

    fn topology_laws(&mut self, t: &SoftTopology, exhaustive_subsets: bool) {
        let full = t.graph().full_mask();
        let cx = |note: String| counterexample_workspace(t, &[], None, &[note]);
        let subsets: Vec<u64> = if exhaustive_subsets { (0..=full).collect() } else { t.open_masks().to_vec() };
        for &a in &subsets {
            let cl = t.closure_mask(a);
            let ok = a & !cl == 0
                && t.closure_mask(cl) == cl
                && t.is_closed_mask(cl)
                && (t.is_closed_mask(a) == (cl == a))
                && subsets.iter().filter(|&&b| a & !b == 0).all(|&b| cl & !t.closure_mask(b) == 0);
            self.record("closure-laws", ok, || cx(format!("closure law fails at mask {a:#b}")));
        }
        for i in 0..t.points().len() {
            let u = t.min_nbhd_mask(i);
            let ok = t.is_open_mask(u) && u >> i & 1 == 1 && neighborhoods(t, i).all(|k| u & !k == 0);
            self.record("min-nbhd", ok, || cx(format!("minimal neighborhood of point {i} is wrong")));
        }
        for &h in &subsets {
            let hs = t.graph().decode(h);
            let ok = t.subspace(&hs).is_ok();
            self.record("subspace-valid", ok, || cx(format!("subspace on {hs} is invalid")));
        }
        let (t1, hd, disc) = (t.is_t1(), t.is_hausdorff(), t.is_discrete());
        self.record("hausdorff-discrete", (!hd || t1) && t1 == disc && hd == disc, || {
            cx(format!("t1={t1} hausdorff={hd} discrete={disc}"))
        });
        let singles = (0..t.points().len()).all(|i| t.is_open_mask(1 << i));
        self.record("no-limit-point-singletons", t.has_no_soft_limit_point() == singles, || {
            cx("no-limit-point predicate disagrees with open singletons".into())
        });
        for &k in &subsets {
            let ks = t.graph().decode(k);
            for &p in t.points() {
                let fast = t.is_soft_limit_point_of_set(&ks, p);
                let slow = t.is_soft_limit_point_of_set_by_scan(&ks, p);
                self.record("limit-point-scan", fast.is_ok() && fast == slow, || {
                    cx(format!("limit point of {ks} disagrees with the scan"))
                });
            }
        }
    }

    /// Per-sequence checks that do not depend on the ideal.
    fn sequence_checks(&mut self, t: &SoftTopology, w: &EpSoftSeq) -> Result<()> {
        let fin = Ideal::finite();
        let cx = |note: String| counterexample_workspace(t, &[("W", w)], None, &[note]);
        for &x in t.points() {
            let soft = soft_converges_to(t, w, x)?;
            let stat = stat_converges_to(t, w, x)?;
            let ideal = ideal_converges_to(t, w, &fin, x)?;
            self.record("convergence-hierarchy", soft == stat && stat == ideal, || {
                cx(format!("x={} soft={soft} stat={stat} fin={ideal}", t.space().context().point_name(x)))
            });
            let scan = converges_by_scan(t, w, x, EpSet::is_finite)?;
            self.record("convergence-scan", scan == soft, || {
                cx(format!("x={} soft={soft} scan={scan}", t.space().context().point_name(x)))
            });
        }
        let lw = limit_points(t, w)?;
        let gamma = (self.probes.gamma)(t, w, &fin)?;
        self.record("cluster-equals-limit-points", lw == gamma, || cx("soft limit points differ from fin-cluster points".into()));
        Ok(())
    }

    fn instance_checks(&mut self, t: &SoftTopology, w: &EpSoftSeq, ideal: &Ideal, lambda_candidates: Option<&[EpSet]>) -> Result<()> {
        let ctx = t.space().context();
        let cx = |note: String| counterexample_workspace(t, &[("W", w)], Some(ideal), &[note]);
        let name = |x: SoftPoint| ctx.point_name(x);

        let limits = ideal_limits(t, w, ideal)?;
        if t.is_hausdorff() {
            self.record("hausdorff-unique-limit", limits.len() <= 1, || cx(format!("{} ideal limits", limits.len())));
        } else {
            self.record("hausdorff-unique-limit", true, String::new);
            if limits.len() >= 2 {
                self.witness("hausdorff-unique-limit");
            }
        }

        let no_limit_point = t.has_no_soft_limit_point();
        for &x in t.points() {
            let i_conv = ideal_converges_to(t, w, ideal, x)?;
            let star = istar_converges_to(t, w, ideal, x)?;
            let soft = soft_converges_to(t, w, x)?;
            self.record("istar-implies-ideal", !star || i_conv, || cx(format!("x={} star but not ideal", name(x))));
            self.record("ap-coincide", ideal.satisfies_ap() && i_conv == star, || {
                cx(format!("x={} ideal={i_conv} star={star}", name(x)))
            });
            if no_limit_point {
                self.record("no-limit-point-coincide", i_conv == star, || cx(format!("x={} ideal={i_conv} star={star}", name(x))));
            }
            self.record("soft-implies-ideal", !soft || i_conv, || cx(format!("x={} soft but not ideal", name(x))));
            let scan = converges_by_scan(t, w, x, |e| ideal.contains(e))?;
            self.record("convergence-scan", scan == i_conv, || cx(format!("x={} ideal={i_conv} scan={scan}", name(x))));

            if !i_conv {
                let e = witness_nonconvergent_subsequence(t, w, ideal, x)?;
                let sub = subsequence_by_epset(w, &e)?;
                let u = t.graph().decode(t.min_nbhd_mask(t.point_index(x)?));
                let never_near = convergence::exception_set(&sub, &u)? == EpSet::naturals();
                self.record("nonconvergent-witness", !ideal.contains(&e) && never_near, || {
                    cx(format!("x={} witness {e} fails", name(x)))
                });
            }
        }

        let lambda = lambda_set(t, w, ideal)?;
        let gamma = (self.probes.gamma)(t, w, ideal)?;
        self.record("lambda-subset-gamma", lambda.iter().all(|x| gamma.contains(x)), || cx("lambda not inside gamma".into()));
        self.record("lambda-equals-gamma", lambda == gamma, || cx("lambda differs from gamma".into()));
        let g = lift(t, &gamma);
        let closed = t.closure(&g)? == g;
        self.record("gamma-closed", closed, || cx(format!("gamma {g} is not closed")));
        let og = oracle_gamma(t, w, ideal)?;
        self.record("gamma-oracle", og == gamma, || cx(format!("gamma {g} vs scan {}", lift(t, &og))));
        if let Some(candidates) = lambda_candidates {
            let ol = oracle_lambda_with(t, w, candidates)?;
            self.record("lambda-oracle", ol == lambda, || {
                cx(format!("lambda {} vs search {}", lift(t, &lambda), lift(t, &ol)))
            });
        }
        Ok(())
    }

    fn modification_checks(&mut self, rng: &mut ChaCha8Rng, cfg: &GenConfig, t: &SoftTopology, w: &EpSoftSeq, ideal: &Ideal) -> Result<()> {
        let space = t.space();
        let points = t.points();
        let lambda = lambda_set(t, w, ideal)?;
        let gamma = (self.probes.gamma)(t, w, ideal)?;

        let d = random_member(rng, cfg, ideal);
        let replacement = random_seq(rng, cfg, points, space);
        let v = overwrite_on(w, &d, &replacement)?;
        let same = ideal.contains(&differs_on(w, &v)?)
            && lambda_set(t, &v, ideal)? == lambda
            && (self.probes.gamma)(t, &v, ideal)? == gamma;
        self.record("modification-invariance", same, || {
            counterexample_workspace(t, &[("W", w), ("V", &v)], Some(ideal), &[format!("sequences differ on {d}")])
        });

        // a point outside the cluster set becomes one once it is hit on D
        let d = random_non_member(rng, cfg, ideal);
        let outside: Vec<SoftPoint> = points.iter().copied().filter(|x| !gamma.contains(x)).collect();
        let p = *outside.choose(rng).or_else(|| points.choose(rng)).expect("space has points");
        let v = overwrite_on(w, &d, &EpSoftSeq::constant(space, p)?)?;
        if lambda_set(t, &v, ideal)? != lambda || (self.probes.gamma)(t, &v, ideal)? != gamma {
            self.witness("modification-invariance");
        }
        Ok(())
    }

    fn interleaving_checks(&mut self, rng: &mut ChaCha8Rng, cfg: &GenConfig, t: &SoftTopology, ideal: &Ideal) -> Result<()> {
        let points = t.points();
        let h = random_disjoint_family(rng, cfg, ideal);
        let pts: Vec<SoftPoint> = h.iter().map(|_| *points.choose(rng).expect("space has points")).collect();
        let x = *points.choose(rng).expect("space has points");
        let g = build_interleaved_sequence(&h, &pts, x, t.space())?;
        let ok = (0..(4 * g.period() + g.prefix_len()) as u64)
            .all(|n| g.term(n) == h.iter().position(|s| s.member(n)).map_or(x, |j| pts[j]))
            && ideal_converges_to(t, &g, ideal, x)?;
        self.record("interleaved-construction", ok, || {
            counterexample_workspace(t, &[("G", &g)], Some(ideal), &[format!("base point {}", t.space().context().point_name(x))])
        });
        Ok(())
    }

    fn ap_checks(&mut self, rng: &mut ChaCha8Rng, cfg: &GenConfig, ideal: &Ideal) {
        let h = random_disjoint_family(rng, cfg, ideal);
        let ok = match ideal.ap_witness(&h) {
            Ok(k) => {
                k.len() == h.len()
                    && h.iter().zip(&k).all(|(a, b)| a.symmetric_difference(b).is_finite())
                    && ideal.contains(&k.iter().fold(EpSet::empty(), |acc, s| acc.union(s)))
            }
            Err(_) => false,
        };
        self.record("ap-witness", ok, || {
            let sets: Vec<String> = h.iter().map(ToString::to_string).collect();
            format!("# ap_witness failed for H = [{}]\nideal I = {}\n", sets.join("; "), crate::syntax::ideal_to_string(ideal))
        });
    }
}

/// Spaces of the exhaustive phase: for each size up to three, one space on a
/// single parameter and one spread over two parameters.
pub fn grid_spaces() -> Vec<SoftSet> {
    let single = |n: usize| {
        let ctx = Context::new(
            Universe::new(names("x", n)).expect("valid names"),
            ParameterSet::new(["s1"]).expect("valid names"),
        );
        SoftSet::absolute(&ctx)
    };
    let spread = |masks: Vec<u64>, elements: usize| {
        let ctx = Context::new(
            Universe::new(names("x", elements)).expect("valid names"),
            ParameterSet::new(names("s", masks.len())).expect("valid names"),
        );
        SoftSet::from_masks(&ctx, masks).expect("one mask per parameter")
    };
    vec![single(1), single(2), spread(vec![0b1, 0b1], 1), single(3), spread(vec![0b11, 0b10], 2)]
}

/// Every sequence on the space's points with prefix at most `max_prefix` and
/// period at most `max_period`, canonical and deduplicated.
pub fn grid_sequences(space: &SoftSet, max_prefix: usize, max_period: usize) -> Vec<EpSoftSeq> {
    fn words(points: &[SoftPoint], len: usize) -> Vec<Vec<SoftPoint>> {
        (0..len).fold(vec![Vec::new()], |acc, _| {
            acc.iter()
                .flat_map(|w| points.iter().map(move |&p| {
                    let mut v = w.clone();
                    v.push(p);
                    v
                }))
                .collect()
        })
    }
    let points = space.points();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for l in 0..=max_prefix {
        for prefix in words(&points, l) {
            for q in 1..=max_period {
                for pattern in words(&points, q) {
                    let w = EpSoftSeq::new(space, prefix.clone(), pattern).expect("points from the space");
                    if seen.insert((w.prefix().to_vec(), w.pattern().to_vec())) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

pub fn run_theorem_suite(cfg: &GenConfig) -> Result<SuiteReport> {
    run_theorem_suite_with(cfg, &Probes::default())
}

pub fn run_theorem_suite_with(cfg: &GenConfig, probes: &Probes) -> Result<SuiteReport> {
    let mut suite = Suite { report: SuiteReport::new(), probes };
    let pool = cfg
        .ideal_pool
        .iter()
        .map(|s| parse_ideal(s).map_err(|e| crate::error::Error::Postcondition(format!("bad pool ideal `{s}`: {e}"))))
        .collect::<Result<Vec<Ideal>>>()?;
    let candidates: Vec<Vec<EpSet>> =
        pool.iter().map(|i| lambda_candidates(i, GRID_MAX_PREFIX, GRID_MAX_PERIOD)).collect();

    // Exhaustive phase.
    for space in grid_spaces() {
        let seqs = grid_sequences(&space, GRID_MAX_PREFIX, GRID_MAX_PERIOD);
        for t in enumerate_topologies(&space, GRID_MAX_POINTS)? {
            suite.topology_laws(&t, true);
            for w in &seqs {
                suite.sequence_checks(&t, w)?;
                for (ideal, cands) in pool.iter().zip(&candidates) {
                    suite.instance_checks(&t, w, ideal, Some(cands))?;
                }
            }
        }
    }
    // Separation axioms up to four points.
    let four = SoftSet::absolute(&Context::new(
        Universe::new(names("x", 2)).expect("valid names"),
        ParameterSet::new(names("s", 2)).expect("valid names"),
    ));
    for t in enumerate_topologies(&four, 4)? {
        suite.topology_laws(&t, false);
    }
    for (j, ideal) in pool.iter().enumerate() {
        for f in 0..AP_FAMILIES_PER_IDEAL {
            let mut rng = rng_for(cfg.seed, STREAM_AP, (j * AP_FAMILIES_PER_IDEAL + f) as u64);
            suite.ap_checks(&mut rng, cfg, ideal);
        }
    }

    // Random phase.
    for k in 0..cfg.trials as u64 {
        let (_, t) = gen_space(cfg, k);
        let w = gen_sequence(cfg, t.space(), k);
        let ideal = gen_ideal(cfg, k);
        let mut rng = rng_for(cfg.seed, STREAM_TRIAL, k);
        suite.topology_laws(&t, false);
        suite.sequence_checks(&t, &w)?;
        let cands = ((k as usize) < cfg.oracle_trials).then(|| lambda_candidates(&ideal, w.prefix_len(), w.period()));
        suite.instance_checks(&t, &w, &ideal, cands.as_deref())?;
        suite.modification_checks(&mut rng, cfg, &t, &w, &ideal)?;
        suite.interleaving_checks(&mut rng, cfg, &t, &ideal)?;
        suite.ap_checks(&mut rng, cfg, &ideal);
    }
    Ok(suite.report)
}

/// Collects the soft points of a mask, ascending.
pub fn mask_points(t: &SoftTopology, m: u64) -> Vec<SoftPoint> {
    bits(m).map(|i| t.points()[i]).collect()
}

/// Properties `search` can look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchProperty {
    /// A sequence with two or more ideal limits.
    NonUniqueIdealLimit,
    /// A sequence that ideal-converges to a point without soft-converging.
    IdealNotSoft,
}

/// Searches topologies on single-parameter spaces of up to `max_points`
/// points, periodic sequences of period up to `max_period`, and the ideals of
/// `pool`, in that nesting order. Returns the first instance as a workspace.
pub fn search(property: SearchProperty, max_points: usize, max_period: usize, pool: &[Ideal]) -> Result<Option<String>> {
    for n in 1..=max_points {
        let ctx = Context::new(Universe::new(names("x", n))?, ParameterSet::new(["s1"])?);
        let space = SoftSet::absolute(&ctx);
        let seqs = grid_sequences(&space, 0, max_period);
        for t in enumerate_topologies(&space, max_points)? {
            for w in &seqs {
                for ideal in pool {
                    let note = match property {
                        SearchProperty::NonUniqueIdealLimit => {
                            let limits = ideal_limits(&t, w, ideal)?;
                            (limits.len() >= 2).then(|| {
                                let names: Vec<String> = limits.iter().map(|&x| ctx.point_name(x)).collect();
                                format!("W has ideal limits {} under I", names.join(" "))
                            })
                        }
                        SearchProperty::IdealNotSoft => {
                            let mut found = None;
                            for &x in t.points() {
                                if ideal_converges_to(&t, w, ideal, x)? && !soft_converges_to(&t, w, x)? {
                                    found = Some(format!("W converges to {} under I but not softly", ctx.point_name(x)));
                                    break;
                                }
                            }
                            found
                        }
                    };
                    if let Some(note) = note {
                        return Ok(Some(counterexample_workspace(&t, &[("W", w)], Some(ideal), &[note])));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(trials: usize) -> GenConfig {
        GenConfig { trials, oracle_trials: trials, ..GenConfig::default() }
    }

    #[test]
    fn generators_are_deterministic() {
        let cfg = GenConfig { seed: 1, ..GenConfig::default() };
        assert_eq!(gen_space(&cfg, 0), gen_space(&cfg, 0));
        let (space, _) = gen_space(&cfg, 0);
        assert_eq!(gen_sequence(&cfg, &space, 3), gen_sequence(&cfg, &space, 3));
        assert_eq!(gen_ideal(&cfg, 7), gen_ideal(&cfg, 7));
    }

    #[test]
    fn generator_postconditions() {
        let cfg = GenConfig::default();
        for k in 0..300 {
            let (space, t) = gen_space(&cfg, k);
            assert!(space.point_count() >= 1 && space.point_count() <= cfg.max_points);
            assert!(SoftTopology::new(space.clone(), t.opens()).is_ok());
            let w = gen_sequence(&cfg, &space, k);
            assert!(w.prefix().iter().chain(w.pattern()).all(|&p| space.contains_point(p)));
            assert!(!gen_ideal(&cfg, k).filter_core().is_finite());
        }
    }

    #[test]
    fn empty_subbasis_closes_to_indiscrete() {
        assert_eq!(close_family(0b111, &[]), vec![0, 0b111]);
        assert_eq!(close_family(0b11, &[0b01, 0b10]), vec![0, 0b01, 0b10, 0b11]);
    }

    #[test]
    fn grid_sequence_counts() {
        let spaces = grid_spaces();
        // one point: every sequence is the constant one
        assert_eq!(grid_sequences(&spaces[0], 2, 3).len(), 1);
        let two = grid_sequences(&spaces[1], 0, 2);
        // patterns a, b, ab, ba
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn oracles_on_sierpinski() {
        let ctx = Context::new(Universe::new(["a", "b"]).unwrap(), ParameterSet::new(["s"]).unwrap());
        let space = SoftSet::absolute(&ctx);
        let a = ctx.parse_point("a@s").unwrap();
        let b = ctx.parse_point("b@s").unwrap();
        let t = SoftTopology::new(space.clone(), vec![SoftSet::empty(&ctx), SoftSet::singleton(&ctx, a), space.clone()]).unwrap();
        let w = EpSoftSeq::new(&space, vec![], vec![a, b]).unwrap();
        let fin = Ideal::finite();
        let iev = parse_ideal("gens(mod(2:0))").unwrap();
        assert_eq!(oracle_gamma(&t, &w, &fin).unwrap(), vec![a, b]);
        assert_eq!(oracle_lambda(&t, &w, &iev, (4, 4)).unwrap(), vec![b]);
        let d = SoftTopology::discrete(space.clone()).unwrap();
        let ca = EpSoftSeq::constant(&space, a).unwrap();
        assert_eq!(oracle_gamma(&d, &ca, &fin).unwrap(), vec![a]);
        assert_eq!(oracle_lambda(&d, &ca, &fin, (0, 1)).unwrap(), vec![a]);
        let i = SoftTopology::indiscrete(space.clone()).unwrap();
        assert_eq!(oracle_gamma(&i, &w, &fin).unwrap(), vec![a, b]);
    }

    #[test]
    fn exhaustive_only_report() {
        let report = run_theorem_suite(&small_cfg(0)).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.get("modification-invariance").unwrap().checks, 0);
        assert!(report.get("hausdorff-unique-limit").unwrap().witnesses > 0);
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = small_cfg(40);
        let a = run_theorem_suite(&cfg).unwrap().render();
        let b = run_theorem_suite(&cfg).unwrap().render();
        assert_eq!(a, b);
    }

    #[test]
    fn search_finds_certificates() {
        let pool: Vec<Ideal> = DEFAULT_IDEAL_POOL.iter().map(|s| parse_ideal(s).unwrap()).collect();
        let cert = search(SearchProperty::NonUniqueIdealLimit, 2, 1, &pool).unwrap().unwrap();
        let ws = crate::workspace::parse_workspace(&cert).unwrap();
        let t = ws.topology("T").unwrap();
        assert!(ideal_limits(t, ws.seq("W").unwrap(), ws.ideal("I").unwrap()).unwrap().len() >= 2);
        let cert = search(SearchProperty::IdealNotSoft, 2, 2, &pool).unwrap().unwrap();
        let ws = crate::workspace::parse_workspace(&cert).unwrap();
        let (t, w) = (ws.topology("T").unwrap(), ws.seq("W").unwrap());
        assert!(t.points().iter().any(|&x| ideal_converges_to(t, w, ws.ideal("I").unwrap(), x).unwrap()
            && !soft_converges_to(t, w, x).unwrap()));
        // one point: every sequence converges softly
        assert!(search(SearchProperty::IdealNotSoft, 1, 3, &pool).unwrap().is_none());
    }

    #[test]
    fn mutant_is_caught() {
        let probes = Probes { gamma: gamma_singleton_mutant };
        let report = run_theorem_suite_with(&small_cfg(0), &probes).unwrap();
        let closed = report.get("gamma-closed").unwrap();
        assert!(!closed.passed());
        let cx = closed.counterexample.as_ref().unwrap();
        assert!(crate::workspace::parse_workspace(cx).is_ok(), "{cx}");
        assert!(report.render().contains("THEOREM gamma-closed FAIL trials="));
        assert!(report.render().contains("counterexample=gamma-closed.ws"));
    }
}
