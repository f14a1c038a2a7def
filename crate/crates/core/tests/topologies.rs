use softconv::harness::{gen_space, GenConfig};
use softconv::topology::enumerate_topologies;
use softconv::{Context, ParameterSet, SoftSet, Universe};

/// Counts topologies on `n` points by testing every family of subsets.
fn brute_force_count(n: usize) -> usize {
    let subsets = 1usize << n;
    let full = subsets - 1;
    (0u64..1 << subsets)
        .filter(|family| {
            let has = |m: usize| family >> m & 1 == 1;
            has(0)
                && has(full)
                && (0..subsets).all(|a| !has(a) || (0..subsets).all(|b| !has(b) || (has(a | b) && has(a & b))))
        })
        .count()
}

fn space(elements: &[&str], params: &[&str]) -> SoftSet {
    SoftSet::absolute(&Context::new(Universe::new(elements.iter().copied()).unwrap(), ParameterSet::new(params.iter().copied()).unwrap()))
}

#[test]
fn enumeration_matches_family_scan() {
    for (n, sp) in [(1, space(&["a"], &["s"])), (2, space(&["a", "b"], &["s"])), (3, space(&["a", "b", "c"], &["s"])), (4, space(&["a", "b"], &["s", "t"]))] {
        let expected = brute_force_count(n);
        assert_eq!(enumerate_topologies(&sp, 4).unwrap().count(), expected, "{n} points");
    }
    assert_eq!(brute_force_count(2), 4);
    assert_eq!(brute_force_count(3), 29);
}

#[test]
fn enumerated_families_are_distinct_and_valid() {
    let sp = space(&["a", "b", "c"], &["s"]);
    let mut seen = std::collections::BTreeSet::new();
    for t in enumerate_topologies(&sp, 3).unwrap() {
        assert!(softconv::SoftTopology::new(sp.clone(), t.opens()).is_ok());
        assert!(seen.insert(t.open_masks().to_vec()));
    }
}

#[test]
fn enumeration_bound_is_enforced() {
    let sp = space(&["a", "b", "c"], &["s", "t"]);
    assert!(enumerate_topologies(&sp, 4).is_err());
    assert_eq!(enumerate_topologies(&sp, 6).map(|e| e.count()).ok(), None);
}

#[test]
fn closure_laws_on_generated_spaces() {
    let cfg = GenConfig::default();
    for k in 0..200 {
        let (_, t) = gen_space(&cfg, k);
        let full = t.graph().full_mask();
        for a in 0..=full {
            let cl = t.closure_mask(a);
            assert_eq!(cl & a, a);
            assert_eq!(t.closure_mask(cl), cl);
            assert!(t.is_closed_mask(cl));
            for b in 0..=full {
                assert_eq!(t.closure_mask(a | b), cl | t.closure_mask(b));
            }
        }
        assert_eq!(t.closure_mask(0), 0);
        for i in 0..t.points().len() {
            let u = t.min_nbhd_mask(i);
            assert!(t.is_open_mask(u) && u >> i & 1 == 1);
            assert!(t.opens_containing(i).all(|o| u & !o == 0));
        }
    }
}
