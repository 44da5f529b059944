//! Invariants over randomly generated complexes, cocycles and fibers.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use htc_core::bundle::{
    fiber_isomorphism, local_trivialization_check, patch_bundles, skeletal_construction, total_space, Bundle,
};
use htc_core::classifying::{bar_construction, classifying_map, same_degree1_action, universal_bundle, ClassifyingMap};
use htc_core::cocycle::{are_equivalent, Cochain0, Cocycle1};
use htc_core::cover::{star_cover, Cover};
use htc_core::gerbe::{GerbeData, GerbeGauge};
use htc_core::group::{CrossedModule, FiniteGroup};
use htc_core::json::{BundleDoc, ComplexDoc};
use htc_core::search::DEFAULT_BUDGET;
use htc_core::Label;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn instance(seed: u64) -> (ChaCha8Rng, Instance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = generated_corpus(&mut rng, 1).pop().expect("one instance");
    (rng, inst)
}

fn facet_cover(b: &Bundle) -> Cover {
    let x = b.base();
    Cover::new(x.clone(), x.maximal().iter().enumerate().map(|(i, s)| (Label::from(i), x.subcomplex([s.clone()]))))
        .expect("facets cover")
}

/// Conjugacy of generator images, checked element by element.
fn conjugate_homs(g: &FiniteGroup, a: &[usize], b: &[usize]) -> bool {
    g.elements().any(|x| a.iter().zip(b).all(|(&p, &q)| g.conjugate(x, p) == q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_characteristic_multiplies(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let e = total_space(&inst.cocycle, &inst.action).unwrap();
        let f = inst.action.fiber_size() as i64;
        prop_assert_eq!(e.total().euler_characteristic(), f * e.base().euler_characteristic());
        prop_assert_eq!(e.euler_characteristic(), e.total().euler_characteristic());
    }

    #[test]
    fn components_are_holonomy_orbits(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let e = total_space(&inst.cocycle, &inst.action).unwrap();
        let hol = inst.cocycle.holonomy().unwrap();
        prop_assert_eq!(e.total().components().len(), inst.action.orbits_under(&hol).len());
    }

    #[test]
    fn skeletal_matches_direct(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let direct = total_space(&inst.cocycle, &inst.action).unwrap();
        let skeletal = skeletal_construction(&inst.cocycle, &inst.action).unwrap();
        prop_assert!(fiber_isomorphism(&skeletal, &direct, DEFAULT_BUDGET).unwrap().is_some());
    }

    #[test]
    fn nerve_of_star_cover_is_the_complex(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_complex(&mut rng);
        let cover = star_cover(&x);
        prop_assert!(cover.goodness().unwrap().is_good());
        let nerve = cover.nerve().complex();
        prop_assert_eq!(nerve.maximal_labels(), x.maximal_labels());
        prop_assert_eq!(nerve.full_homology().unwrap(), x.full_homology().unwrap());
    }

    #[test]
    fn gauge_moves_stay_equivalent(seed in any::<u64>()) {
        let (mut rng, inst) = instance(seed);
        let g = inst.cocycle.group();
        let lambda = Cochain0::new((0..inst.cover.len()).map(|_| rng.gen_range(0..g.order())).collect());
        let moved = inst.cocycle.coboundary_transform(&lambda).unwrap();
        prop_assert!(are_equivalent(&inst.cocycle, &moved, DEFAULT_BUDGET).unwrap().is_some());
        let bar = bar_construction(g, 2);
        let (a, b) = (classifying_map(&inst.cocycle, 4).unwrap(), classifying_map(&moved, 4).unwrap());
        prop_assert!(same_degree1_action(&a, &b, &bar).unwrap());
    }

    #[test]
    fn equivalence_is_holonomy_conjugacy(seed in any::<u64>()) {
        let (mut rng, inst) = instance(seed);
        let other = random_cocycle(&inst.cover, inst.cocycle.group(), &mut rng);
        let g = inst.cocycle.group();
        let (h1, h2) = (inst.cocycle.holonomy().unwrap(), other.holonomy().unwrap());
        let equivalent = are_equivalent(&inst.cocycle, &other, DEFAULT_BUDGET).unwrap().is_some();
        prop_assert_eq!(equivalent, conjugate_homs(g, &h1, &h2));
    }

    #[test]
    fn classifying_map_is_simplicial_iff_cocycle(seed in any::<u64>(), corrupt in any::<bool>()) {
        let (mut rng, inst) = instance(seed);
        let mut values = inst.cocycle.nerve_values().clone();
        if corrupt {
            let keys: Vec<_> = values.keys().copied().collect();
            let k = *keys.choose(&mut rng).unwrap();
            values.insert(k, rng.gen_range(0..inst.cocycle.group().order()));
        }
        let g = inst.cocycle.group().clone();
        let valid = Cocycle1::from_nerve_values(inst.cover.clone(), g.clone(), values.clone()).is_ok();
        let map = ClassifyingMap::from_edge_values(inst.cocycle.nerve(), &g, &values, 4).unwrap();
        prop_assert_eq!(map.is_simplicial(), valid);
    }

    #[test]
    fn universal_transitions_recover_the_cocycle(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let g = inst.cocycle.group();
        let map = classifying_map(&inst.cocycle, 4).unwrap();
        prop_assert_eq!(universal_bundle(g, 4).pullback_cocycle(&map, &inst.cover).unwrap(), inst.cocycle.clone());
    }

    #[test]
    fn restrictions_patch_back(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let b = total_space(&inst.cocycle, &inst.action).unwrap();
        let cover = facet_cover(&b);
        let locals: BTreeMap<Label, Bundle> =
            cover.indices().iter().zip(cover.parts()).map(|(i, p)| (i.clone(), b.restrict(p).unwrap())).collect();
        prop_assert_eq!(patch_bundles(&cover, &locals).unwrap(), b.clone());
        prop_assert!(local_trivialization_check(&b, &cover, DEFAULT_BUDGET).unwrap().all_trivializable());
    }

    #[test]
    fn bundle_documents_round_trip(seed in any::<u64>()) {
        let (_, inst) = instance(seed);
        let b = total_space(&inst.cocycle, &inst.action).unwrap();
        let text = serde_json::to_string(&BundleDoc::of(&b)).unwrap();
        let back: BundleDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.build().unwrap(), b.clone());
        prop_assert_eq!(ComplexDoc::of(b.base()).build().unwrap(), b.base().clone());
    }

    #[test]
    fn gerbe_gauges_preserve_validity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = if rng.gen_bool(0.5) { full_tetrahedron() } else { random_complex(&mut rng) };
        let cover = Arc::new(star_cover(&x));
        let g = FiniteGroup::symmetric(3);
        let xm = if rng.gen_bool(0.5) { CrossedModule::adjoint(&g) } else { CrossedModule::abelian(&FiniteGroup::cyclic(3)).unwrap() };
        let d = GerbeData::identity(cover.clone(), xm.clone()).validate().unwrap();
        let gauge = |rng: &mut ChaCha8Rng| GerbeGauge {
            lambda: Cochain0::new((0..cover.len()).map(|_| rng.gen_range(0..xm.base().order())).collect()),
            m: d.edges().keys().map(|&e| (e, rng.gen_range(0..xm.fiber().order()))).collect(),
        };
        let once = d.coboundary(&gauge(&mut rng)).unwrap();
        let twice = once.coboundary(&gauge(&mut rng)).unwrap();
        prop_assert!(twice.check_coherence_faces());
    }

    #[test]
    fn identity_witnesses_reduce_to_the_cocycle_law(seed in any::<u64>(), corrupt in any::<bool>()) {
        let (mut rng, inst) = instance(seed);
        let g = inst.cocycle.group().clone();
        let mut values = inst.cocycle.nerve_values().clone();
        if corrupt {
            let keys: Vec<_> = values.keys().copied().collect();
            values.insert(*keys.choose(&mut rng).unwrap(), rng.gen_range(0..g.order()));
        }
        let witnesses = inst.cocycle.nerve().simplices(2).iter().map(|t| ((t[0], t[1], t[2]), 0)).collect();
        let data = GerbeData::from_nerve_values(inst.cover.clone(), CrossedModule::adjoint(&g), values.clone(), witnesses).unwrap();
        let cocycle = Cocycle1::from_nerve_values(inst.cover.clone(), g, values).is_ok();
        prop_assert_eq!(data.validate().is_ok(), cocycle);
    }
}

/// Homology of the normalized bar complex of `Z/n` matches the periodic
/// resolution: `Z`, then `Z/n` in odd degrees and zero in even ones.
#[test]
fn cyclic_bar_homology_is_periodic() {
    for n in 2..=5usize {
        let h = bar_construction(&FiniteGroup::cyclic(n), 5).homology().unwrap();
        for (k, grp) in h.groups.iter().enumerate() {
            let expected: Vec<u64> = if k % 2 == 1 { vec![n as u64] } else { vec![] };
            assert_eq!(grp.betti, usize::from(k == 0), "Z{n} degree {k}");
            assert_eq!(grp.torsion, expected, "Z{n} degree {k}");
        }
    }
}
