// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use gromov_core::generators::gen_ringed_tree;
use gromov_core::graph::all_pairs;
use gromov_core::ringed::{
    canonical_geodesic, canonical_path, lca_height, poincare_distance, poincare_embed, ring_distance, DiskPoint,
    TreeAddress,
};
use proptest::prelude::*;

fn arb_pair(max_level: u32) -> impl Strategy<Value = (TreeAddress, TreeAddress)> {
    let addr = move || (0..max_level).prop_flat_map(|l| (Just(l), 0..1u64 << l)).prop_map(|(l, p)| TreeAddress::new(l, p).unwrap());
    (addr(), addr())
}

fn arb_same_level(max_level: u32) -> impl Strategy<Value = (TreeAddress, TreeAddress)> {
    (0..max_level)
        .prop_flat_map(|l| (Just(l), 0..1u64 << l, 0..1u64 << l))
        .prop_map(|(l, p, q)| (TreeAddress::new(l, p).unwrap(), TreeAddress::new(l, q).unwrap()))
}

#[test]
fn metric_examples() {
    assert_eq!(ring_distance(3, 0, 7).unwrap(), 1);
    assert_eq!(ring_distance(4, 6, 6).unwrap(), 0);
    assert_eq!(ring_distance(5, 3, 19).unwrap(), 16);
    assert_eq!(ring_distance(1, 0, 1).unwrap(), 1);
    assert!(ring_distance(3, 0, 8).is_err());

    let at = |l, p| TreeAddress::new(l, p).unwrap();
    assert_eq!(lca_height(at(4, 6), at(4, 7)).unwrap(), 1);
    assert_eq!(lca_height(at(4, 6), at(4, 6)).unwrap(), 0);
    // 011 and 100: ring neighbours whose common ancestor is the root
    assert_eq!(lca_height(at(3, 3), at(3, 4)).unwrap(), 3);
    assert_eq!(ring_distance(3, 3, 4).unwrap(), 1);
    assert!(lca_height(at(3, 3), at(2, 1)).is_err());
}

#[test]
fn canonical_examples_against_bfs() {
    let (g, _) = gen_ringed_tree(6).unwrap();
    let m = all_pairs(&g).unwrap();
    let at = |l, p| TreeAddress::new(l, p).unwrap();
    let three = canonical_geodesic(6, at(5, 30), at(5, 1)).unwrap();
    assert_eq!(three.length(), 3);
    for p in 0..32 {
        let (u, v) = (at(5, p), at(5, (p + 4) % 32));
        let geo = canonical_geodesic(6, u, v).unwrap();
        assert_eq!(geo.length() as u32, m.get(u.id(), v.id()));
        assert!(geo.is_geodesic_in(&g, &m));
    }
    assert!(canonical_geodesic(6, at(6, 0), at(0, 0)).is_err());
}

#[test]
fn quasi_isometry_single_pair() {
    let root = poincare_embed(TreeAddress::root());
    let leaf = poincare_embed(TreeAddress::new(5, 0).unwrap());
    let d = poincare_distance(root, leaf).unwrap();
    let ln2 = std::f64::consts::LN_2;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    assert!(5.0 * ln2 / 2.0 - 200f64.ln() <= d);
    assert!(d <= 5.0 * ln2 + (66.0 * pi2).ln());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reversal_preserves_length_and_same_level_vertex_set((u, v) in arb_pair(12)) {
        let forward = canonical_path(u, v);
        let backward = canonical_path(v, u);
        prop_assert_eq!(forward.len(), backward.len());
        prop_assert_eq!(forward.first(), Some(&u));
        prop_assert_eq!(forward.last(), Some(&v));
        if u.level == v.level {
            let a: BTreeSet<_> = forward.into_iter().collect();
            let b: BTreeSet<_> = backward.into_iter().collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn level_profile_is_valley_shaped((u, v) in arb_pair(14)) {
        let levels: Vec<u32> = canonical_path(u, v).iter().map(|a| a.level).collect();
        let turn = levels.iter().enumerate().min_by_key(|&(_, l)| *l).map(|(i, _)| i).unwrap();
        prop_assert!(levels[..=turn].windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(levels[turn..].windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn consecutive_canonical_vertices_are_adjacent((u, v) in arb_pair(14)) {
        for w in canonical_path(u, v).windows(2) {
            let (a, b) = (w[0], w[1]);
            let adjacent = if a.level == b.level {
                ring_distance(a.level, a.pos, b.pos).unwrap() == 1
            } else {
                a.parent() == Some(b) || b.parent() == Some(a)
            };
            prop_assert!(adjacent, "{:?} -> {:?}", a, b);
        }
    }

    #[test]
    fn disk_distance_is_rotation_invariant((u, v) in arb_same_level(16), shift in any::<u64>()) {
        let s = shift % u.ring_size();
        let rot = |a: TreeAddress| TreeAddress::new(a.level, (a.pos + s) % a.ring_size()).unwrap();
        let before = poincare_distance(poincare_embed(u), poincare_embed(v)).unwrap();
        let after = poincare_distance(poincare_embed(rot(u)), poincare_embed(rot(v))).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
    }

    #[test]
    fn disk_distance_symmetric_and_zero_on_diagonal(a in -0.7f64..0.7, b in -0.7f64..0.7, c in -0.7f64..0.7, d in -0.7f64..0.7) {
        let p = DiskPoint::new(a, b).unwrap();
        let q = DiskPoint::new(c, d).unwrap();
        prop_assert_eq!(poincare_distance(p, q).unwrap(), poincare_distance(q, p).unwrap());
        prop_assert_eq!(poincare_distance(p, p).unwrap(), 0.0);
        if (a, b) != (c, d) {
            prop_assert!(poincare_distance(p, q).unwrap() > 0.0);
        }
    }

    #[test]
    fn addresses_round_trip_through_ids((u, _) in arb_pair(20)) {
        prop_assert_eq!(TreeAddress::from_id(u.id()), u);
        if let Some(p) = u.parent() {
            prop_assert_eq!(p.level + 1, u.level);
            prop_assert_eq!(p.pos, u.pos / 2);
        }
    }
}
