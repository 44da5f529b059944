use std::collections::{BTreeMap, BTreeSet};

use super::{Bundle, BundleError};
use crate::cocycle::Cocycle1;
use crate::group::GroupAction;
use crate::label::Label;
use crate::simplicial::{mapping_cylinder, Simplex, SimplicialComplex, SimplicialMap, VertexId};

fn fiber_label(nerve: &SimplicialComplex, a: VertexId, f: usize) -> Label {
    Label::pair(nerve.label(a).clone(), Label::Int(f as i64))
}

fn check_group(c: &Cocycle1, action: &GroupAction) -> Result<(), BundleError> {
    if action.group() != c.group() {
        return Err(BundleError::GroupMismatch);
    }
    Ok(())
}

/// Projection and coordinates for the vertices `(a, f)` over every nerve vertex.
fn vertex_tables(nerve: &SimplicialComplex, fiber: usize) -> (BTreeMap<Label, Label>, BTreeMap<Label, usize>) {
    let mut proj = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for a in 0..nerve.vertex_count() {
        for f in 0..fiber {
            let l = fiber_label(nerve, a, f);
            proj.insert(l.clone(), nerve.label(a).clone());
            coords.insert(l, f);
        }
    }
    (proj, coords)
}

/// The quotient of the disjoint union of `part x F` by the transition data:
/// over a nerve simplex with vertices `a_0 < ... < a_k` the lift starting at
/// `f` is `(a_i, g_{a_i a_0} f)`.
pub fn total_space(c: &Cocycle1, action: &GroupAction) -> Result<Bundle, BundleError> {
    check_group(c, action)?;
    let nerve = c.nerve();
    let fiber = action.fiber_size();
    let mut simplices: Vec<Vec<Label>> = Vec::new();
    for s in nerve.maximal() {
        for f0 in 0..fiber {
            simplices.push(s.iter().map(|&a| fiber_label(nerve, a, action.act(c.value(a, s[0]), f0))).collect());
        }
    }
    let (proj, coords) = vertex_tables(nerve, fiber);
    Bundle::from_labeled(simplices, nerve.clone(), &proj, &coords, action.clone())
}

/// Builds the total space one nerve dimension at a time. Level 0 is the
/// disjoint union of the vertex fibers. At level `n`, each `n`-simplex `s`
/// has the part already built over its face `s \ {last}` mapped onto the
/// fiber over the last vertex by the transition elements, and the mapping
/// cylinder of that map is glued on along both ends.
pub fn skeletal_construction(c: &Cocycle1, action: &GroupAction) -> Result<Bundle, BundleError> {
    check_group(c, action)?;
    let nerve = c.nerve();
    let fiber = action.fiber_size();
    let (proj, coords) = vertex_tables(nerve, fiber);
    let over: BTreeMap<Label, VertexId> =
        proj.iter().map(|(l, a)| (l.clone(), nerve.vertex(a).expect("nerve label"))).collect();

    let mut declared: Vec<Vec<Label>> = proj.keys().map(|l| vec![l.clone()]).collect();
    let top = nerve.dimension().unwrap_or(0);
    for n in 1..=top {
        let stage = SimplicialComplex::from_labeled(declared.clone());
        let stage_simplices: BTreeSet<Vec<Label>> = stage.all_simplices().map(|s| stage.simplex_labels(s)).collect();
        for s in nerve.simplices(n) {
            let last = s[n];
            let face: BTreeSet<VertexId> = s[..n].iter().copied().collect();
            let domain_simplices: Vec<Vec<Label>> =
                stage_simplices.iter().filter(|t| t.iter().all(|l| face.contains(&over[l]))).cloned().collect();
            let domain = SimplicialComplex::from_labeled(domain_simplices);
            let end: Vec<Vec<Label>> = (0..fiber).map(|f| vec![fiber_label(nerve, last, f)]).collect();
            let end = SimplicialComplex::from_labeled(end);
            let assembly: BTreeMap<Label, Label> = domain
                .labels()
                .iter()
                .map(|l| {
                    let a = over[l];
                    (l.clone(), fiber_label(nerve, last, action.act(c.value(last, a), coords[l])))
                })
                .collect();
            let phi = SimplicialMap::from_labels(domain, end, &assembly)?;
            let cyl = mapping_cylinder(&phi).complex;
            let untag = |t: &Simplex| -> Vec<Label> {
                cyl.simplex_labels(t)
                    .into_iter()
                    .map(|l| match l {
                        Label::Tuple(mut parts) if parts.len() == 2 => parts.pop().expect("two parts"),
                        other => unreachable!("cylinder labels are tagged, got {other}"),
                    })
                    .collect()
            };
            for t in cyl.all_simplices() {
                let mut labels = untag(t);
                labels.sort();
                if labels.len() <= n && !stage_simplices.contains(&labels) {
                    return Err(BundleError::MissingFace(labels));
                }
            }
            declared.extend(cyl.maximal().iter().map(untag).filter(|t| t.len() == n + 1));
        }
    }
    Bundle::from_labeled(declared, nerve.clone(), &proj, &coords, action.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::fiber_isomorphism;
    use crate::cover::star_cover;
    use crate::group::FiniteGroup;
    use crate::search::DEFAULT_BUDGET;
    use std::sync::Arc;

    fn circle_cover() -> Arc<crate::cover::Cover> {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        Arc::new(star_cover(&x))
    }

    fn twisted_circle() -> Cocycle1 {
        let mut v = BTreeMap::new();
        v.insert((Label::name("a"), Label::name("b")), 0);
        v.insert((Label::name("b"), Label::name("c")), 0);
        v.insert((Label::name("a"), Label::name("c")), 1);
        Cocycle1::new(circle_cover(), FiniteGroup::cyclic(2), &v).unwrap()
    }

    #[test]
    fn trivial_cocycle_gives_copies_of_the_nerve() {
        let g = FiniteGroup::cyclic(2);
        let c = Cocycle1::trivial(circle_cover(), g.clone()).unwrap();
        let b = total_space(&c, &GroupAction::regular(&g)).unwrap();
        assert_eq!(b.total().components().len(), 2);
        assert_eq!(b.total().f_vector(), vec![6, 6]);
    }

    #[test]
    fn twisted_circle_is_a_connected_double_cover() {
        let c = twisted_circle();
        let b = total_space(&c, &GroupAction::regular(c.group())).unwrap();
        assert!(b.total().is_connected());
        assert_eq!(b.euler_characteristic(), 0);
        assert_eq!(b.total().full_homology().unwrap().betti(), vec![1, 1]);
    }

    #[test]
    fn skeletal_matches_direct_on_the_circle() {
        let c = twisted_circle();
        let act = GroupAction::regular(c.group());
        let direct = total_space(&c, &act).unwrap();
        let skeletal = skeletal_construction(&c, &act).unwrap();
        assert!(fiber_isomorphism(&direct, &skeletal, DEFAULT_BUDGET).unwrap().is_some());
    }

    #[test]
    fn skeletal_on_a_filled_tetrahedron() {
        let x = SimplicialComplex::build([["a", "b", "c", "d"]]).unwrap();
        let cover = Arc::new(star_cover(&x));
        let g = FiniteGroup::symmetric(3);
        let c = Cocycle1::trivial(cover, g.clone()).unwrap();
        let c = c.coboundary_transform(&crate::cocycle::Cochain0::new(vec![1, 3, 4, 2])).unwrap();
        let act = GroupAction::regular(&g);
        let direct = total_space(&c, &act).unwrap();
        let skeletal = skeletal_construction(&c, &act).unwrap();
        assert_eq!(direct.total().f_vector(), vec![24, 36, 24, 6]);
        assert!(fiber_isomorphism(&direct, &skeletal, DEFAULT_BUDGET).unwrap().is_some());
        let prod = Bundle::product(c.nerve(), &act);
        assert!(fiber_isomorphism(&prod, &skeletal, DEFAULT_BUDGET).unwrap().is_some());
    }

    #[test]
    fn group_mismatch() {
        let c = twisted_circle();
        let act = GroupAction::regular(&FiniteGroup::cyclic(3));
        assert_eq!(total_space(&c, &act).unwrap_err(), BundleError::GroupMismatch);
        assert_eq!(skeletal_construction(&c, &act).unwrap_err(), BundleError::GroupMismatch);
    }
}
