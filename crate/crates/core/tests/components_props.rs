use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use proptest::prelude::*;
use springer_core::components::{
    dimension, dyck_from_pairs, intersect, poincare_union, poincare_union_oracle, poset_leq, PairIndex,
};
use springer_core::nilpotent::{count_points_fp, flag_membership, NilpotentModel, DEFAULT_BUDGET};
use springer_core::qseries::q_int;
use springer_core::shapes::{classify_filling, enumerate_fillings, GlobalParams};
use springer_core::QPoly;

fn pairs(n: u32) -> Vec<PairIndex> {
    PairIndex::all(GlobalParams::minimal(n).unwrap())
}

#[test]
fn union_formula_matches_inclusion_exclusion_small_subsets() {
    for n in 2..=6 {
        let all = pairs(n);
        for size in 1..=4.min(all.len()) {
            for subset in all.iter().copied().combinations(size) {
                assert_eq!(
                    poincare_union(&subset).unwrap(),
                    poincare_union_oracle(&subset).unwrap(),
                    "n={n} {subset:?}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn union_formula_matches_inclusion_exclusion_large_subsets(
        n in 4u32..=6,
        picks in prop::collection::vec(any::<prop::sample::Index>(), 5..12),
    ) {
        let all = pairs(n);
        let subset: Vec<PairIndex> =
            picks.iter().map(|ix| all[ix.index(all.len())]).collect::<BTreeSet<_>>().into_iter().collect();
        prop_assert_eq!(poincare_union(&subset).unwrap(), poincare_union_oracle(&subset).unwrap());
    }
}

#[test]
fn rectangle_identity() {
    for n in 2..=8 {
        for p in pairs(n) {
            let d = dyck_from_pairs(&[p]).unwrap();
            let expected: QPoly = q_int::<BigInt>(p.i() - 1).unwrap() * q_int(n - p.j() + 1).unwrap();
            assert_eq!(d.weight(), expected, "n={n} {p}");
        }
    }
}

#[test]
fn inclusion_keeps_dimension_monotone() {
    for n in 2..=7 {
        for s in n - 1..=n + 2 {
            let all = PairIndex::all(GlobalParams::new(n, s).unwrap());
            for (&a, &b) in all.iter().cartesian_product(&all) {
                if poset_leq(a, b) {
                    assert!(dimension(a) <= dimension(b));
                }
            }
        }
    }
}

/// Flag sets: intersecting components matches intersecting their flag
/// sets, and the components cover every permutation flag.
#[test]
fn flag_sets_of_intersections() {
    for n in 2..=6 {
        for s in n - 1..=n + 2 {
            let params = GlobalParams::new(n, s).unwrap();
            let model = NilpotentModel::new(params);
            let fillings = enumerate_fillings(params);
            let comps: Vec<u32> = params.components().collect();
            let member: Vec<Vec<bool>> =
                comps.iter().map(|&i| fillings.iter().map(|f| classify_filling(f, i).unwrap()).collect()).collect();
            let mut covered = 0i64;
            for size in 1..=comps.len() {
                for subset in (0..comps.len()).combinations(size) {
                    let ps: Vec<PairIndex> =
                        subset.iter().map(|&k| PairIndex::component(params, comps[k]).unwrap()).collect();
                    let meet = intersect(&ps).unwrap();
                    let by_sets = (0..fillings.len()).filter(|&f| subset.iter().all(|&k| member[k][f])).count();
                    let by_pair = fillings
                        .iter()
                        .filter(|f| flag_membership(&f.partial_permutation(), meet, &model).unwrap())
                        .count();
                    assert_eq!(by_sets, by_pair, "n={n} s={s} {ps:?}");
                    covered += if size % 2 == 1 { by_sets as i64 } else { -(by_sets as i64) };
                }
            }
            assert_eq!(covered, fillings.len() as i64, "n={n} s={s}");
        }
    }
}

#[test]
fn deepest_intersection_has_fewest_points() {
    for n in 3..=4 {
        let params = GlobalParams::minimal(n).unwrap();
        let model = NilpotentModel::new(params);
        let counts: Vec<(PairIndex, BigInt)> =
            pairs(n).into_iter().map(|p| (p, count_points_fp(p, &model, 2, DEFAULT_BUDGET).unwrap())).collect();
        let deepest = counts.iter().find(|(p, _)| p.i() == 2 && p.j() == n).unwrap().1.clone();
        assert!(counts.iter().all(|(_, c)| *c >= deepest));
    }
}
