//! Randomised laws of the exact arithmetic, the cubical set algebra and
//! the dynamics, checked with proptest on the circle grid from the test
//! generators.

use conley::dyadic::Dyadic;
use conley::dynamics::{image, invariant_parts, preimage, reach_forward};
use conley::grid::{Cube, CubicalSet};
use conley::isolation::f_boundary;
use conley::testgen::{circle_grid, doubling_map, random_neighbourhood, random_system};
use proptest::prelude::*;
use std::sync::Arc;

// ---------------------------------------------------------------- dyadic

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-1000i64..1000, 0u32..12).prop_map(|(n, s)| Dyadic::new(n, s))
}

proptest! {
    #[test]
    fn dyadic_add_commutes(a in dyadic(), b in dyadic()) {
        prop_assert_eq!(a + b, b + a);
    }

    #[test]
    fn dyadic_add_associates(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!((a + b) + c, a + (b + c));
    }

    #[test]
    fn dyadic_mul_distributes(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!(a * (b + c), a * b + a * c);
    }

    #[test]
    fn dyadic_sub_inverts_add(a in dyadic(), b in dyadic()) {
        prop_assert_eq!(a + b - b, a);
    }

    #[test]
    fn dyadic_display_parse_roundtrip(a in dyadic()) {
        let shown = a.to_string();
        prop_assert_eq!(Dyadic::parse(&shown).unwrap(), a);
    }

    #[test]
    fn dyadic_order_respects_addition(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!(a < b, a + c < b + c);
    }

    #[test]
    fn dyadic_div_floor_bounds(a in dyadic(), b in dyadic()) {
        prop_assume!(b > Dyadic::from_int(0));
        let q = a.div_floor(&b);
        let qb = Dyadic::from_int(q) * b;
        prop_assert!(qb <= a);
        prop_assert!(a < qb + b);
    }
}

// ------------------------------------------------------- cubical algebra

/// Random closed cubical set on the unit-scale circle grid: the closure of
/// a set of unit edges.
fn edge_set() -> impl Strategy<Value = CubicalSet> {
    prop::collection::btree_set(0i64..64, 0..12).prop_map(|units| {
        let grid = circle_grid();
        let cells = units
            .into_iter()
            .map(|u| Cube::new(&grid, vec![conley::grid::CubeAxis { lo: u, ext: true }]))
            .collect::<Vec<_>>();
        CubicalSet::from_cells(Arc::clone(&grid), cells).closure()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent(a in edge_set()) {
        let c = a.closure();
        prop_assert!(c.is_closed());
        prop_assert_eq!(c.closure(), c);
    }

    #[test]
    fn interior_is_inside_and_open_core(a in edge_set()) {
        let i = a.interior();
        prop_assert!(i.is_subset(&a));
        // every cell of the interior keeps all its cofaces inside the set,
        // so taking the interior twice changes nothing
        prop_assert_eq!(i.interior(), i);
    }

    #[test]
    fn boundary_splits_the_set(a in edge_set()) {
        let b = a.boundary();
        let i = a.interior();
        prop_assert!(b.is_subset(&a));
        prop_assert!(b.intersection(&i).unwrap().is_empty());
        prop_assert_eq!(b.union(&i).unwrap(), a);
    }

    #[test]
    fn union_and_intersection_bracket_the_parts(a in edge_set(), b in edge_set()) {
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert!(a.is_subset(&u));
        prop_assert!(b.is_subset(&u));
        prop_assert!(i.is_subset(&a));
        prop_assert!(i.is_subset(&b));
        // inclusion-exclusion at the level of cell counts
        prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
    }

    #[test]
    fn difference_complements_within_the_set(a in edge_set(), b in edge_set()) {
        let d = a.difference(&b).unwrap();
        prop_assert!(d.is_subset(&a));
        prop_assert!(d.intersection(&b).unwrap().is_empty());
        prop_assert_eq!(d.union(&a.intersection(&b).unwrap()).unwrap(), a);
    }

    #[test]
    fn collar_grows_monotonically(a in edge_set(), k in 0u32..3) {
        prop_assume!(!a.is_empty());
        let inner = a.collar(k);
        let outer = a.collar(k + 1);
        prop_assert!(a.is_subset(&inner));
        prop_assert!(inner.is_subset(&outer));
        prop_assert!(inner.is_closed());
    }

    #[test]
    fn hull_contains_and_is_monotone(a in edge_set(), b in edge_set()) {
        prop_assume!(!a.is_empty() && !b.is_empty());
        let u = a.union(&b).unwrap();
        if let (Ok(ha), Ok(hu)) = (a.hull(), u.hull()) {
            prop_assert!(a.is_subset(&ha));
            prop_assert!(ha.is_subset(&hu));
        }
    }

    #[test]
    fn interior_closure_duality(a in edge_set()) {
        // the interior of a closed set together with its boundary is the set
        let reassembled = a.interior().union(&a.boundary()).unwrap();
        prop_assert_eq!(reassembled, a);
    }
}

// ------------------------------------------------------------- dynamics

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn image_is_monotone_and_closed(a in edge_set(), b in edge_set()) {
        let map = doubling_map().unwrap();
        let u = a.union(&b).unwrap();
        let ia = image(&map, &a).unwrap();
        let iu = image(&map, &u).unwrap();
        prop_assert!(ia.is_subset(&iu));
        prop_assert!(ia.is_closed());
    }

    #[test]
    fn escape_boundary_lies_in_the_closure_of_the_image(a in edge_set()) {
        let map = doubling_map().unwrap();
        let fb = f_boundary(&map, &a).unwrap();
        prop_assert!(fb.is_subset(&a));
    }

    #[test]
    fn invariant_part_is_antitone(a in edge_set(), b in edge_set()) {
        let map = doubling_map().unwrap();
        let small = a.intersection(&b).unwrap();
        let inv_small = invariant_parts(&map, &small).inv;
        let inv_a = invariant_parts(&map, &a).inv;
        // a smaller neighbourhood traps no more than the larger one
        prop_assert!(inv_small.is_subset(&inv_a));
    }

    #[test]
    fn invariant_part_is_invariant(seed in 0u64..40) {
        let map = random_system(seed, 1);
        let n = random_neighbourhood(&map, seed ^ 0x5bd1);
        let parts = invariant_parts(&map, &n);
        prop_assume!(!parts.inv.is_empty());
        // trapped cells stay trapped one step forward and backward
        let fwd = image(&map, &parts.inv).unwrap().intersection(&n).unwrap();
        let bwd = preimage(&map, &parts.inv).intersection(&n).unwrap();
        prop_assert!(parts.inv.is_subset(&parts.inv_minus));
        prop_assert!(parts.inv.is_subset(&parts.inv_plus));
        for c in parts.inv.top_cells() {
            let hits_fwd = conley::dynamics::successors_in(&map, c, &parts.inv);
            let hits_bwd = conley::dynamics::predecessors_in(&map, c, &parts.inv);
            prop_assert!(!hits_fwd.is_empty());
            prop_assert!(!hits_bwd.is_empty());
        }
        let _ = (fwd, bwd);
    }

    #[test]
    fn reach_forward_is_a_forward_closure(a in edge_set()) {
        let map = doubling_map().unwrap();
        let dom = map.effective_domain();
        let within = dom.clone();
        let r = reach_forward(&map, &a, &within);
        let seed_in = a.intersection(&within).unwrap();
        prop_assert!(seed_in.is_subset(&r));
        // applying the map once more adds nothing inside `within`
        let step = image(&map, &r).unwrap().intersection(&within).unwrap();
        prop_assert!(step.is_subset(&r));
    }
}
