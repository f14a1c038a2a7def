use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;
use softconv::{Context, EpSet, Ideal, ParameterSet, PointGraph, SoftSet, Universe};

fn ctx() -> Arc<Context> {
    Context::new(
        Universe::new(["x1", "x2", "x3", "x4"]).unwrap(),
        ParameterSet::new(["s1", "s2"]).unwrap(),
    )
}

fn softset() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..16, 2)
}

fn epset() -> impl Strategy<Value = EpSet> {
    (prop::collection::vec(any::<bool>(), 0..5), prop::collection::vec(any::<bool>(), 1..7))
        .prop_map(|(prefix, pattern)| EpSet::from_parts(prefix, pattern).unwrap())
}

/// Membership of the raw, uncanonicalized representation.
fn raw_member(prefix: &[bool], pattern: &[bool], n: usize) -> bool {
    if n < prefix.len() {
        prefix[n]
    } else {
        pattern[(n - prefix.len()) % pattern.len()]
    }
}

const HORIZON: u64 = 120;

proptest! {
    #[test]
    fn soft_lattice_laws(a in softset(), b in softset(), c in softset()) {
        let ctx = ctx();
        let (a, b, c) = (
            SoftSet::from_masks(&ctx, a).unwrap(),
            SoftSet::from_masks(&ctx, b).unwrap(),
            SoftSet::from_masks(&ctx, c).unwrap(),
        );
        let u = |x: &SoftSet, y: &SoftSet| x.union(y).unwrap();
        let i = |x: &SoftSet, y: &SoftSet| x.intersection(y).unwrap();
        prop_assert_eq!(u(&a, &b), u(&b, &a));
        prop_assert_eq!(u(&a, &u(&b, &c)), u(&u(&a, &b), &c));
        prop_assert_eq!(i(&a, &u(&b, &c)), u(&i(&a, &b), &i(&a, &c)));
        prop_assert_eq!(u(&a, &a), a.clone());
        prop_assert_eq!(u(&a, &i(&a, &b)), a.clone());
        prop_assert_eq!(u(&a, &b).complement(), i(&a.complement(), &b.complement()));
        prop_assert_eq!(i(&a, &b).complement(), u(&a.complement(), &b.complement()));
        prop_assert_eq!(a.difference(&b).unwrap(), i(&a, &b.complement()));
        prop_assert!(i(&a, &b).is_subset(&a).unwrap());
        prop_assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn natset_ops_are_pointwise(a in epset(), b in epset()) {
        for n in 0..HORIZON {
            let (x, y) = (a.member(n), b.member(n));
            prop_assert_eq!(a.union(&b).member(n), x || y);
            prop_assert_eq!(a.intersect(&b).member(n), x && y);
            prop_assert_eq!(a.difference(&b).member(n), x && !y);
            prop_assert_eq!(a.symmetric_difference(&b).member(n), x != y);
            prop_assert_eq!(a.complement().member(n), !x);
        }
        prop_assert_eq!(a.is_subset(&b), (0..HORIZON).all(|n| !a.member(n) || b.member(n)));
    }

    #[test]
    fn density_is_exact(a in epset()) {
        prop_assert_eq!(a.density() + a.complement().density(), Ratio::from_integer(1));
        prop_assert_eq!(a.density() == Ratio::from_integer(0), a.is_finite());
    }

    #[test]
    fn ideal_closure(gens in prop::collection::vec(epset(), 0..3), a in epset(), b in epset()) {
        let Ok(ideal) = Ideal::new(gens) else { return Ok(()) };
        prop_assert!(ideal.generators().iter().all(|g| ideal.contains(g)));
        if ideal.contains(&a) {
            prop_assert!(ideal.contains(&a.intersect(&b)));
        }
        if ideal.contains(&a) && ideal.contains(&b) {
            prop_assert!(ideal.contains(&a.union(&b)));
        }
        prop_assert_eq!(ideal.in_dual_filter(&a), ideal.contains(&a.complement()));
        prop_assert!(!ideal.contains(&EpSet::naturals()));
        prop_assert!(ideal.contains(&EpSet::from_finite(&[0, 7, 19])));
    }
}

#[test]
fn canonical_forms_are_unique() {
    // every representation with prefix <= 4 and period <= 6, grouped by the
    // set it denotes; equal sets must give equal canonical forms
    let mut seen: std::collections::HashMap<Vec<bool>, EpSet> = Default::default();
    for len in 0..=4usize {
        for prefix_bits in 0u32..1 << len {
            for period in 1..=6usize {
                for pattern_bits in 0u32..1 << period {
                    let prefix: Vec<bool> = (0..len).map(|b| prefix_bits >> b & 1 == 1).collect();
                    let pattern: Vec<bool> = (0..period).map(|b| pattern_bits >> b & 1 == 1).collect();
                    // 4 + lcm(1..=6) = 64 positions determine these sets
                    let key: Vec<bool> = (0..4 + 2 * 60).map(|n| raw_member(&prefix, &pattern, n)).collect();
                    let set = EpSet::from_parts(prefix, pattern).unwrap();
                    assert!(key.iter().enumerate().all(|(n, &m)| set.member(n as u64) == m));
                    if let Some(other) = seen.get(&key) {
                        assert_eq!(other, &set);
                    } else {
                        seen.insert(key, set);
                    }
                }
            }
        }
    }
}

#[test]
fn encoding_is_a_lattice_isomorphism() {
    let ctx = Context::new(Universe::new(["a", "b", "c", "d"]).unwrap(), ParameterSet::new(["s", "t"]).unwrap());
    let ambient = SoftSet::from_masks(&ctx, vec![0b1011, 0b0110]).unwrap();
    let graph = PointGraph::new(&ambient).unwrap();
    assert_eq!(graph.len(), 5);
    let full = graph.full_mask();
    for m in 0..=full {
        let a = graph.decode(m);
        assert_eq!(graph.encode(&a).unwrap(), m);
        for n in 0..=full {
            let b = graph.decode(n);
            assert_eq!(graph.encode(&a.union(&b).unwrap()).unwrap(), m | n);
            assert_eq!(graph.encode(&a.intersection(&b).unwrap()).unwrap(), m & n);
            assert_eq!(a.is_subset(&b).unwrap(), m & !n == 0);
        }
    }
}
