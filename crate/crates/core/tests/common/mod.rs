//! Shared corpus for the integration tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use htc_core::cocycle::{nerve_presentation, Cochain0, Cocycle1};
use htc_core::cover::{star_cover, Cover};
use htc_core::group::{Elem, FiniteGroup, GroupAction};
use htc_core::simplicial::{Letter, Pi1Presentation, SimplicialComplex};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn complex(maximal: &[&[&str]]) -> SimplicialComplex {
    SimplicialComplex::build(maximal.iter().map(|s| s.to_vec())).expect("corpus complex")
}

fn numbered(maximal: &[&[u32]]) -> SimplicialComplex {
    SimplicialComplex::build(maximal.iter().map(|s| s.iter().map(|v| format!("{v}")).collect::<Vec<_>>()))
        .expect("corpus complex")
}

pub fn hollow_triangle() -> SimplicialComplex {
    complex(&[&["a", "b"], &["b", "c"], &["a", "c"]])
}

pub fn full_triangle() -> SimplicialComplex {
    complex(&[&["a", "b", "c"]])
}

pub fn tetrahedron_boundary() -> SimplicialComplex {
    complex(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]])
}

pub fn full_tetrahedron() -> SimplicialComplex {
    complex(&[&["a", "b", "c", "d"]])
}

/// Six-vertex projective plane.
pub fn projective_plane() -> SimplicialComplex {
    numbered(&[
        &[1, 2, 3],
        &[1, 3, 4],
        &[1, 4, 5],
        &[1, 5, 6],
        &[1, 2, 6],
        &[2, 3, 5],
        &[2, 4, 5],
        &[2, 4, 6],
        &[3, 4, 6],
        &[3, 5, 6],
    ])
}

/// Seven-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus() -> SimplicialComplex {
    let tri: Vec<Vec<String>> = (0..7u32)
        .flat_map(|i| [[i, i + 1, i + 3], [i, i + 2, i + 3]])
        .map(|t| t.iter().map(|v| format!("{}", v % 7)).collect())
        .collect();
    SimplicialComplex::build(tri).expect("torus")
}

/// Two hollow triangles sharing a vertex.
pub fn figure_eight() -> SimplicialComplex {
    complex(&[&["a", "b"], &["b", "c"], &["a", "c"], &["a", "d"], &["d", "e"], &["a", "e"]])
}

/// Five-triangle Moebius band.
pub fn moebius_band() -> SimplicialComplex {
    numbered(&[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[3, 4, 0], &[4, 0, 1]])
}

pub fn named_complexes() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("hollow triangle", hollow_triangle()),
        ("full triangle", full_triangle()),
        ("tetrahedron boundary", tetrahedron_boundary()),
        ("projective plane", projective_plane()),
        ("torus", torus()),
        ("figure eight", figure_eight()),
        ("moebius band", moebius_band()),
    ]
}

pub fn corpus_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z2", FiniteGroup::cyclic(2)),
        ("Z3", FiniteGroup::cyclic(3)),
        ("S3", FiniteGroup::symmetric(3)),
        ("D4", FiniteGroup::dihedral(4)),
    ]
}

/// Left action on the cosets `xH` of the subgroup generated by `gens`.
pub fn coset_action(group: &FiniteGroup, gens: &[Elem]) -> GroupAction {
    let sub = group.generated_subgroup(gens);
    let coset = |x: Elem| sub.iter().map(|&h| group.mul(x, h)).min().expect("nonempty subgroup");
    let mut reps: Vec<Elem> = group.elements().map(coset).collect();
    reps.sort_unstable();
    reps.dedup();
    let index: BTreeMap<Elem, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let rows = group.elements().map(|g| reps.iter().map(|&r| index[&coset(group.mul(g, r))]).collect()).collect();
    GroupAction::new(group.clone(), rows).expect("coset action")
}

/// Connected complex on 4 to 6 vertices with random triangles and edges.
pub fn random_complex<R: Rng>(rng: &mut R) -> SimplicialComplex {
    let n = rng.gen_range(4..=6u32);
    let name = |v: u32| format!("v{v}");
    let mut declared: Vec<Vec<String>> = (0..n).map(|v| vec![name(v)]).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.3) {
                declared.push(vec![name(a), name(b)]);
            }
            for c in b + 1..n {
                if rng.gen_bool(0.25) {
                    declared.push(vec![name(a), name(b), name(c)]);
                }
            }
        }
    }
    let x = SimplicialComplex::build(declared.clone()).expect("random complex");
    let components = x.components();
    for pair in components.windows(2) {
        declared.push(vec![x.label(pair[0][0]).to_string(), x.label(pair[1][0]).to_string()]);
    }
    SimplicialComplex::build(declared).expect("random complex")
}

/// A homomorphism out of the edge-path group, found by depth-first search
/// with shuffled candidate order.
pub fn random_hom<R: Rng>(p: &Pi1Presentation, group: &FiniteGroup, rng: &mut R) -> Vec<Elem> {
    let n = p.generator_count();
    let mut due: Vec<Vec<&[Letter]>> = vec![Vec::new(); n.max(1)];
    for r in &p.relations {
        if let Some(g) = r.iter().map(|l| l.generator).max() {
            due[g].push(r);
        }
    }
    fn go<R: Rng>(
        i: usize,
        images: &mut Vec<Elem>,
        p: &Pi1Presentation,
        group: &FiniteGroup,
        due: &[Vec<&[Letter]>],
        rng: &mut R,
    ) -> bool {
        if i == images.len() {
            return true;
        }
        let mut order: Vec<Elem> = group.elements().collect();
        order.shuffle(rng);
        for x in order {
            images[i] = x;
            if due[i].iter().all(|r| p.evaluate(r, images, group) == group.identity())
                && go(i + 1, images, p, group, due, rng)
            {
                return true;
            }
        }
        false
    }
    let mut images = vec![0; n];
    assert!(go(0, &mut images, p, group, &due, rng), "the trivial homomorphism always exists");
    images
}

/// Random flat cocycle on the star cover, moved by a random gauge so the
/// spanning-tree edges need not carry the identity.
pub fn random_cocycle<R: Rng>(cover: &Arc<Cover>, group: &FiniteGroup, rng: &mut R) -> Cocycle1 {
    let p = nerve_presentation(cover).expect("connected nerve");
    let hom = random_hom(&p, group, rng);
    let c = Cocycle1::from_homomorphism(cover.clone(), group.clone(), &hom).expect("homomorphisms give cocycles");
    let lambda = Cochain0::new((0..cover.len()).map(|_| rng.gen_range(0..group.order())).collect());
    c.coboundary_transform(&lambda).expect("gauge preserves validity")
}

pub fn random_action<R: Rng>(group: &FiniteGroup, rng: &mut R) -> GroupAction {
    match rng.gen_range(0..4) {
        0 => GroupAction::regular(group),
        1 => GroupAction::trivial(group, rng.gen_range(1..=3)),
        _ => coset_action(group, &[rng.gen_range(0..group.order())]),
    }
}

/// A cocycle on a star cover together with the fiber it acts on.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub cover: Arc<Cover>,
    pub cocycle: Cocycle1,
    pub action: GroupAction,
}

/// Random instances over random bases, groups and fibers. Regular fibers
/// of the order-8 group are left out to keep the isomorphism searches small.
pub fn generated_corpus<R: Rng>(rng: &mut R, count: usize) -> Vec<Instance> {
    let groups = corpus_groups();
    (0..count)
        .map(|i| {
            let x = random_complex(rng);
            let cover = Arc::new(star_cover(&x));
            let (gname, group) = groups.choose(rng).expect("nonempty").clone();
            let cocycle = random_cocycle(&cover, &group, rng);
            let mut action = random_action(&group, rng);
            if action.fiber_size() > 6 {
                action = coset_action(&group, &[1]);
            }
            Instance { name: format!("random #{i} over {gname}"), cover, cocycle, action }
        })
        .collect()
}

/// One random cocycle per named complex and corpus group, with the regular
/// fiber for groups up to order 6 and a coset fiber otherwise.
pub fn named_corpus<R: Rng>(rng: &mut R) -> Vec<Instance> {
    let mut out = Vec::new();
    for (xname, x) in named_complexes() {
        let cover = Arc::new(star_cover(&x));
        for (gname, group) in corpus_groups() {
            let cocycle = random_cocycle(&cover, &group, rng);
            let action = if group.order() <= 6 { GroupAction::regular(&group) } else { coset_action(&group, &[1]) };
            out.push(Instance { name: format!("{xname} over {gname}"), cover: cover.clone(), cocycle, action });
        }
    }
    out
}
