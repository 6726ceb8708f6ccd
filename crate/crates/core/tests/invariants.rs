//! Cross-checks against naive oracles written here, and algebraic
//! invariants over small groups.

use std::collections::BTreeSet;

use ncgroup::catalog::build_catalog;
use ncgroup::centralizers::centralizer_count;
use ncgroup::isoclinism::are_isoclinic;
use ncgroup::noncommuting::omega;
use ncgroup::{find_isomorphism, Group, GroupSpec};
use proptest::prelude::*;

fn realize(text: &str) -> Group {
    GroupSpec::parse(text).unwrap().realize().unwrap()
}

/// Largest pairwise non-commuting set, by plain backtracking over elements.
fn naive_omega(g: &Group) -> usize {
    fn extend(g: &Group, chosen: &mut Vec<usize>, next: usize, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for x in next..g.order() {
            if chosen.iter().all(|&c| !g.commutes(c, x)) {
                chosen.push(x);
                extend(g, chosen, x + 1, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    extend(g, &mut Vec::new(), 0, &mut best);
    best
}

fn naive_centralizer_count(g: &Group) -> usize {
    let n = g.order();
    (0..n)
        .map(|x| (0..n).filter(|&y| g.commutes(x, y)).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .len()
}

#[test]
fn omega_and_count_match_naive_oracles() {
    let catalog = build_catalog(24).unwrap();
    for e in catalog.entries() {
        let g = &e.group;
        assert_eq!(omega(g).unwrap().size, naive_omega(g), "{}", e.name);
        assert_eq!(centralizer_count(g), naive_centralizer_count(g), "{}", e.name);
    }
}

#[test]
fn named_small_values() {
    for (name, w) in [("S3", 4), ("Q8", 3), ("D8", 3), ("A4", 5), ("D10", 6), ("F20", 6)] {
        assert_eq!(naive_omega(&realize(name)), w, "{name}");
        assert_eq!(omega(&realize(name)).unwrap().size, w, "{name}");
    }
}

#[test]
fn catalog_entries_are_pairwise_non_isomorphic() {
    let catalog = build_catalog(32).unwrap();
    let entries = catalog.entries();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            if a.group.order() == b.group.order() {
                assert!(find_isomorphism(&a.group, &b.group).is_none(), "{} ~ {}", a.name, b.name);
            }
        }
    }
}

const NON_ABELIAN: [&str; 6] = ["S3", "D8", "Q8", "A4", "D10", "F20"];
const ABELIAN: [&str; 3] = ["C2", "C3", "C2xC2"];

/// Same group with elements renumbered by `perm` (identity kept at 0).
fn relabel(g: &Group, perm: &[usize]) -> Group {
    let n = g.order();
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[perm[a]][perm[b]] = perm[g.mul(a, b)];
        }
    }
    Group::from_cayley(&table).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn abelian_factors_change_nothing(gi in 0..NON_ABELIAN.len(), ai in 0..ABELIAN.len()) {
        let g = realize(NON_ABELIAN[gi]);
        let a = realize(ABELIAN[ai]);
        let ga = g.direct_product(&a);
        prop_assert_eq!(omega(&ga).unwrap().size, omega(&g).unwrap().size);
        prop_assert_eq!(centralizer_count(&ga), centralizer_count(&g));
        prop_assert!(are_isoclinic(&g, &ga).is_isoclinic());
        prop_assert!(are_isoclinic(&ga, &g).is_isoclinic());
        prop_assert_eq!(ga.is_solvable(), g.is_solvable() && a.is_solvable());
    }

    #[test]
    fn relabelled_groups_are_isomorphic(gi in 0..NON_ABELIAN.len(), seed in any::<u64>()) {
        let g = realize(NON_ABELIAN[gi]);
        let mut rest: Vec<usize> = (1..g.order()).collect();
        // deterministic shuffle from the seed
        let mut s = seed | 1;
        for i in (1..rest.len()).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            rest.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let perm: Vec<usize> = std::iter::once(0).chain(rest).collect();
        let h = relabel(&g, &perm);
        let forward = find_isomorphism(&g, &h).expect("relabelled copy is isomorphic");
        prop_assert!(forward.verify(&g, &h));
        let backward = find_isomorphism(&h, &g).expect("isomorphism is symmetric");
        prop_assert!(backward.verify(&h, &g));
        prop_assert!(forward.inverse().verify(&h, &g));
        prop_assert_eq!(omega(&h).unwrap().size, omega(&g).unwrap().size);
    }

    #[test]
    fn quotient_projection_is_a_homomorphism(gi in 0..NON_ABELIAN.len(), ai in 0..ABELIAN.len(), by_center in any::<bool>()) {
        let g = realize(NON_ABELIAN[gi]).direct_product(&realize(ABELIAN[ai]));
        let n = if by_center { g.center() } else { g.derived_subgroup() };
        let q = g.quotient(&n).unwrap();
        prop_assert_eq!(q.group.order() * n.order(), g.order());
        for a in g.elements() {
            for b in g.elements() {
                prop_assert_eq!(q.projection[g.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
            }
        }
    }
}
