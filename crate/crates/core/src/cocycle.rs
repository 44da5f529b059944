//! Strict group-valued transition cocycles over good covers.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cover::{disjoint_union_cover, Cover, CoverError};
use crate::group::{Elem, FiniteGroup, GroupHom};
use crate::label::Label;
use crate::search::{BudgetExceeded, Meter};
use crate::simplicial::{enumerate_homs, pi1_presentation, Overflow, Pi1Error, Pi1Presentation, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cover is not good; failing intersections: {0:?}")]
    NotGood(Vec<Vec<Label>>),
    #[error("no part is indexed {0}")]
    UnknownIndex(Label),
    #[error("pair ({0}, {1}) is not in increasing index order")]
    Unordered(Label, Label),
    #[error("parts {0} and {1} do not meet")]
    NotAnEdge(Label, Label),
    #[error("element {elem} is outside a group of order {order}")]
    OutOfRange { elem: Elem, order: usize },
    #[error("no value for the pair ({0}, {1})")]
    Missing(Label, Label),
    #[error("cocycle law fails on the triple ({0}, {1}, {2})")]
    Violated(Label, Label, Label),
    #[error("cochain has {got} values, cover has {expected} parts")]
    CochainLength { got: usize, expected: usize },
    #[error("cocycles are over different covers or groups")]
    Mismatch,
    #[error("generator images do not satisfy relation {0}")]
    InvalidHom(usize),
    #[error("expected {expected} generator images, got {got}")]
    HomArity { got: usize, expected: usize },
    #[error(transparent)]
    Pi1(#[from] Pi1Error),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

pub(crate) fn require_good(cover: &Cover) -> Result<(), CocycleError> {
    let report = cover.goodness()?;
    if report.is_good() {
        Ok(())
    } else {
        Err(CocycleError::NotGood(report.failures().map(|c| c.indices.clone()).collect()))
    }
}

/// Transition values `g_ab` on ordered pairs of meeting parts, keyed by
/// nerve vertex. The reverse and diagonal values are derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle1 {
    cover: Arc<Cover>,
    group: FiniteGroup,
    values: BTreeMap<(VertexId, VertexId), Elem>,
}

/// A value per cover part, indexed by cover position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain0 {
    pub values: Vec<Elem>,
}

impl Cochain0 {
    pub fn new(values: Vec<Elem>) -> Self {
        Cochain0 { values }
    }

    pub fn constant(cover: &Cover, g: Elem) -> Self {
        Cochain0 { values: vec![g; cover.len()] }
    }
}

impl Cocycle1 {
    /// Validate values given by index labels. Every ordered pair of meeting
    /// parts needs a value, and the cocycle law must hold on every triple
    /// of meeting parts.
    pub fn new(
        cover: impl Into<Arc<Cover>>,
        group: FiniteGroup,
        values: &BTreeMap<(Label, Label), Elem>,
    ) -> Result<Self, CocycleError> {
        let cover = cover.into();
        let nerve = cover.nerve();
        let vertex = |l: &Label| {
            cover.position(l).and_then(|i| nerve.vertex_of_part(i)).ok_or_else(|| CocycleError::UnknownIndex(l.clone()))
        };
        let mut by_vertex = BTreeMap::new();
        for ((a, b), &g) in values {
            let (u, v) = (vertex(a)?, vertex(b)?);
            if u >= v {
                return Err(CocycleError::Unordered(a.clone(), b.clone()));
            }
            by_vertex.insert((u, v), g);
        }
        Self::from_nerve_values(cover, group, by_vertex)
    }

    /// Validate values keyed by nerve vertex pairs.
    pub fn from_nerve_values(
        cover: impl Into<Arc<Cover>>,
        group: FiniteGroup,
        values: BTreeMap<(VertexId, VertexId), Elem>,
    ) -> Result<Self, CocycleError> {
        let cover = cover.into();
        require_good(&cover)?;
        let nerve = cover.nerve().complex();
        let name = |v: VertexId| nerve.label(v).clone();
        for (&(u, v), &g) in &values {
            if u >= v {
                return Err(CocycleError::Unordered(name(u), name(v)));
            }
            if !nerve.contains(&[u, v]) {
                return Err(CocycleError::NotAnEdge(name(u), name(v)));
            }
            if g >= group.order() {
                return Err(CocycleError::OutOfRange { elem: g, order: group.order() });
            }
        }
        for e in nerve.simplices(1) {
            if !values.contains_key(&(e[0], e[1])) {
                return Err(CocycleError::Missing(name(e[0]), name(e[1])));
            }
        }
        let c = Cocycle1 { cover: cover.clone(), group, values };
        for t in c.nerve().simplices(2) {
            let (a, b, d) = (t[0], t[1], t[2]);
            if c.group.mul(c.value(a, b), c.value(b, d)) != c.value(a, d) {
                return Err(CocycleError::Violated(name(a), name(b), name(d)));
            }
        }
        Ok(c)
    }

    pub fn trivial(cover: impl Into<Arc<Cover>>, group: FiniteGroup) -> Result<Self, CocycleError> {
        let cover = cover.into();
        let values = cover.nerve().complex().simplices(1).iter().map(|e| ((e[0], e[1]), 0)).collect();
        Self::from_nerve_values(cover, group, values)
    }

    /// Cocycle with identity on spanning-tree edges and the given generator
    /// images on the remaining nerve edges.
    pub fn from_homomorphism(
        cover: impl Into<Arc<Cover>>,
        group: FiniteGroup,
        hom: &[Elem],
    ) -> Result<Self, CocycleError> {
        let cover = cover.into();
        let p = nerve_presentation(&cover)?;
        if hom.len() != p.generator_count() {
            return Err(CocycleError::HomArity { got: hom.len(), expected: p.generator_count() });
        }
        if let Some(&elem) = hom.iter().find(|&&x| x >= group.order()) {
            return Err(CocycleError::OutOfRange { elem, order: group.order() });
        }
        if let Some(r) = p.relations.iter().position(|r| p.evaluate(r, hom, &group) != group.identity()) {
            return Err(CocycleError::InvalidHom(r));
        }
        let values = cover
            .nerve()
            .complex()
            .simplices(1)
            .iter()
            .map(|e| ((e[0], e[1]), p.generator_of(e[0], e[1]).map_or(0, |g| hom[g])))
            .collect();
        Self::from_nerve_values(cover, group, values)
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn nerve(&self) -> &crate::simplicial::SimplicialComplex {
        self.cover.nerve().complex()
    }

    /// `g_ab` for nerve vertices in either order; identity on the diagonal.
    pub fn value(&self, a: VertexId, b: VertexId) -> Elem {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => self.group.identity(),
            Less => self.values[&(a, b)],
            Greater => self.group.inv(self.values[&(b, a)]),
        }
    }

    pub fn nerve_values(&self) -> &BTreeMap<(VertexId, VertexId), Elem> {
        &self.values
    }

    pub fn labeled_values(&self) -> BTreeMap<(Label, Label), Elem> {
        let n = self.nerve();
        self.values.iter().map(|(&(a, b), &g)| ((n.label(a).clone(), n.label(b).clone()), g)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&g| g == 0)
    }

    /// `g'_ab = l_a g_ab l_b^-1`.
    pub fn coboundary_transform(&self, lambda: &Cochain0) -> Result<Cocycle1, CocycleError> {
        if lambda.values.len() != self.cover.len() {
            return Err(CocycleError::CochainLength { got: lambda.values.len(), expected: self.cover.len() });
        }
        if let Some(&elem) = lambda.values.iter().find(|&&x| x >= self.group.order()) {
            return Err(CocycleError::OutOfRange { elem, order: self.group.order() });
        }
        let nerve = self.cover.nerve();
        let l = |v: VertexId| lambda.values[nerve.part_index(v)];
        let g = &self.group;
        let values = self.values.iter().map(|(&(a, b), &x)| ((a, b), g.mul(g.mul(l(a), x), g.inv(l(b))))).collect();
        Cocycle1::from_nerve_values(self.cover.clone(), g.clone(), values)
    }

    /// Product of transition values along the spanning-tree path from the
    /// basepoint to each nerve vertex.
    fn tree_transport(&self, p: &Pi1Presentation) -> Vec<Elem> {
        (0..self.nerve().vertex_count())
            .map(|v| {
                let path = p.tree_path(v);
                self.group.product_of(path.windows(2).map(|w| self.value(w[0], w[1])))
            })
            .collect()
    }

    /// Generator images of the holonomy homomorphism on the edge-path group
    /// of the nerve (basepoint: the first nerve vertex).
    pub fn holonomy(&self) -> Result<GroupHom, CocycleError> {
        let p = nerve_presentation(&self.cover)?;
        let lambda = self.tree_transport(&p);
        let g = &self.group;
        Ok(p.generators.iter().map(|&[a, b]| g.mul(g.mul(lambda[a], self.value(a, b)), g.inv(lambda[b]))).collect())
    }

    /// Holonomy around an arbitrary closed edge path in the nerve.
    pub fn holonomy_along(&self, path: &[VertexId]) -> Elem {
        self.group.product_of(path.windows(2).map(|w| self.value(w[0], w[1])))
    }
}

pub fn nerve_presentation(cover: &Cover) -> Result<Pi1Presentation, CocycleError> {
    Ok(pi1_presentation(cover.nerve().complex(), 0)?)
}

/// Values on the mixed pairs `(a, b)` with `a` an index of the first cover
/// and `b` of the second.
pub type Bridge = BTreeMap<(Label, Label), Elem>;

/// Search for values on the mixed pairs of the disjoint union cover that
/// extend both cocycles to one cocycle. Returns the lexicographically least
/// bridge, or `None` when no extension exists.
pub fn are_equivalent(c1: &Cocycle1, c2: &Cocycle1, budget: u64) -> Result<Option<Bridge>, CocycleError> {
    if c1.group != c2.group {
        return Err(CocycleError::Mismatch);
    }
    let joint = disjoint_union_cover(&c1.cover, &c2.cover)?;
    require_good(&joint)?;
    let nerve = joint.nerve();
    let n = nerve.complex();
    let offset = c1.cover.len();
    // Joint nerve vertex of each input nerve vertex.
    let lift = |c: &Cocycle1, shift: usize| -> Vec<VertexId> {
        (0..c.nerve().vertex_count())
            .map(|v| nerve.vertex_of_part(c.cover.nerve().part_index(v) + shift).expect("nonempty part"))
            .collect()
    };
    let (lift1, lift2) = (lift(c1, 0), lift(c2, offset));
    let side = |v: VertexId| nerve.part_index(v) >= offset;

    let mut solver = TriangleSolver::new(n, &c1.group);
    for (&(a, b), &g) in &c1.values {
        solver.fix(lift1[a], lift1[b], g);
    }
    for (&(a, b), &g) in &c2.values {
        solver.fix(lift2[a], lift2[b], g);
    }
    let unknowns: Vec<usize> =
        n.simplices(1).iter().enumerate().filter(|(_, e)| side(e[0]) != side(e[1])).map(|(i, _)| i).collect();
    let mut meter = Meter::new(budget);
    if !solver.solve(&unknowns, &mut meter)? {
        return Ok(None);
    }
    let part_label = |v: VertexId| match n.label(v) {
        Label::Tuple(t) => t[1].clone(),
        other => other.clone(),
    };
    Ok(Some(
        unknowns
            .iter()
            .map(|&i| {
                let e = &n.simplices(1)[i];
                ((part_label(e[0]), part_label(e[1])), solver.value[i].expect("solved"))
            })
            .collect(),
    ))
}

/// Partition all cocycles arising from homomorphisms of the nerve's edge-path
/// group into equivalence classes. Classes are ordered by first member.
pub fn equivalence_classes(
    cover: impl Into<Arc<Cover>>,
    group: &FiniteGroup,
    budget: u64,
) -> Result<Vec<Vec<Cocycle1>>, CocycleError> {
    let cover = cover.into();
    require_good(&cover)?;
    let p = nerve_presentation(&cover)?;
    let mut classes: Vec<Vec<Cocycle1>> = Vec::new();
    for hom in enumerate_homs(&p, group) {
        let c = Cocycle1::from_homomorphism(cover.clone(), group.clone(), &hom)?;
        let mut home = None;
        for (i, class) in classes.iter().enumerate() {
            if are_equivalent(&class[0], &c, budget)?.is_some() {
                home = Some(i);
                break;
            }
        }
        match home {
            Some(i) => classes[i].push(c),
            None => classes.push(vec![c]),
        }
    }
    Ok(classes)
}

pub fn count_equivalence_classes(
    cover: impl Into<Arc<Cover>>,
    group: &FiniteGroup,
    budget: u64,
) -> Result<usize, CocycleError> {
    Ok(equivalence_classes(cover, group, budget)?.len())
}

/// Edge values on a complex constrained by `g_ab g_bc = g_ac` on every
/// 2-simplex, with propagation through triangles that have one unknown.
struct TriangleSolver<'a> {
    group: &'a FiniteGroup,
    edges: Vec<[VertexId; 2]>,
    index: BTreeMap<[VertexId; 2], usize>,
    triangles: Vec<[usize; 3]>,
    incident: Vec<Vec<usize>>,
    value: Vec<Option<Elem>>,
    trail: Vec<usize>,
}

impl<'a> TriangleSolver<'a> {
    fn new(x: &crate::simplicial::SimplicialComplex, group: &'a FiniteGroup) -> Self {
        let edges: Vec<[VertexId; 2]> = x.simplices(1).iter().map(|e| [e[0], e[1]]).collect();
        let index: BTreeMap<_, _> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let triangles: Vec<[usize; 3]> =
            x.simplices(2).iter().map(|t| [index[&[t[0], t[1]]], index[&[t[1], t[2]]], index[&[t[0], t[2]]]]).collect();
        let mut incident = vec![Vec::new(); edges.len()];
        for (k, t) in triangles.iter().enumerate() {
            for &e in t {
                incident[e].push(k);
            }
        }
        let value = vec![None; edges.len()];
        TriangleSolver { group, edges, index, triangles, incident, value, trail: Vec::new() }
    }

    fn fix(&mut self, a: VertexId, b: VertexId, g: Elem) {
        let (e, g) = if a < b { (self.index[&[a, b]], g) } else { (self.index[&[b, a]], self.group.inv(g)) };
        self.value[e] = Some(g);
    }

    fn assign(&mut self, e: usize, g: Elem) {
        self.value[e] = Some(g);
        self.trail.push(e);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("nonempty trail");
            self.value[e] = None;
        }
    }

    /// Propagate from the queued edges; `false` on a contradiction.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        let g = self.group;
        while let Some(e) = queue.pop() {
            for k in 0..self.incident[e].len() {
                let [ab, bc, ac] = self.triangles[self.incident[e][k]];
                match (self.value[ab], self.value[bc], self.value[ac]) {
                    (Some(x), Some(y), Some(z)) => {
                        if g.mul(x, y) != z {
                            return false;
                        }
                    }
                    (None, Some(y), Some(z)) => {
                        self.assign(ab, g.mul(z, g.inv(y)));
                        queue.push(ab);
                    }
                    (Some(x), None, Some(z)) => {
                        self.assign(bc, g.mul(g.inv(x), z));
                        queue.push(bc);
                    }
                    (Some(x), Some(y), None) => {
                        self.assign(ac, g.mul(x, y));
                        queue.push(ac);
                    }
                    _ => {}
                }
            }
        }
        true
    }

    /// Depth-first search branching on the first unassigned unknown with
    /// values in increasing order, so the first solution is the least.
    fn solve(&mut self, unknowns: &[usize], meter: &mut Meter) -> Result<bool, BudgetExceeded> {
        let known: Vec<usize> = (0..self.edges.len()).filter(|&e| self.value[e].is_some()).collect();
        if !self.propagate(known) {
            return Ok(false);
        }
        self.branch(unknowns, meter)
    }

    fn branch(&mut self, unknowns: &[usize], meter: &mut Meter) -> Result<bool, BudgetExceeded> {
        let Some(&e) = unknowns.iter().find(|&&e| self.value[e].is_none()) else {
            return Ok(true);
        };
        for x in self.group.elements() {
            meter.tick()?;
            let mark = self.trail.len();
            self.assign(e, x);
            if self.propagate(vec![e]) && self.branch(unknowns, meter)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::star_cover;
    use crate::search::DEFAULT_BUDGET;
    use crate::simplicial::SimplicialComplex;

    fn circle_cover() -> Arc<Cover> {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        Arc::new(star_cover(&x))
    }

    fn triangle_cover() -> Arc<Cover> {
        Arc::new(star_cover(&SimplicialComplex::build([["a", "b", "c"]]).unwrap()))
    }

    fn values(ab: Elem, bc: Elem, ac: Elem) -> BTreeMap<(Label, Label), Elem> {
        BTreeMap::from([(("a".into(), "b".into()), ab), (("b".into(), "c".into()), bc), (("a".into(), "c".into()), ac)])
    }

    #[test]
    fn identity_values_validate() {
        let c = Cocycle1::new(circle_cover(), FiniteGroup::cyclic(2), &values(0, 0, 0)).unwrap();
        assert!(c.is_trivial());
        assert_eq!(c, Cocycle1::trivial(circle_cover(), FiniteGroup::cyclic(2)).unwrap());
    }

    #[test]
    fn circle_allows_a_twist() {
        let c = Cocycle1::new(circle_cover(), FiniteGroup::cyclic(2), &values(0, 0, 1)).unwrap();
        assert_eq!(c.value(2, 0), 1);
        assert_eq!(c.holonomy().unwrap(), vec![1]);
    }

    #[test]
    fn triangle_rejects_the_twist() {
        let err = Cocycle1::new(triangle_cover(), FiniteGroup::cyclic(2), &values(0, 0, 1)).unwrap_err();
        assert_eq!(err, CocycleError::Violated("a".into(), "b".into(), "c".into()));
    }

    #[test]
    fn missing_and_unordered_values_rejected() {
        let mut v = values(0, 0, 0);
        v.remove(&("b".into(), "c".into()));
        assert_eq!(
            Cocycle1::new(circle_cover(), FiniteGroup::cyclic(2), &v),
            Err(CocycleError::Missing("b".into(), "c".into()))
        );
        v.insert(("c".into(), "b".into()), 0);
        assert_eq!(
            Cocycle1::new(circle_cover(), FiniteGroup::cyclic(2), &v),
            Err(CocycleError::Unordered("c".into(), "b".into()))
        );
    }

    #[test]
    fn coboundary_moves_the_twist() {
        let z2 = FiniteGroup::cyclic(2);
        let c = Cocycle1::new(circle_cover(), z2.clone(), &values(0, 0, 1)).unwrap();
        let shifted = c.coboundary_transform(&Cochain0::new(vec![1, 0, 0])).unwrap();
        assert_eq!(shifted.labeled_values(), values(1, 0, 0));
        assert_eq!(c.coboundary_transform(&Cochain0::constant(c.cover(), 0)).unwrap(), c);
        assert_eq!(c.coboundary_transform(&Cochain0::constant(c.cover(), 1)).unwrap(), c);
    }

    #[test]
    fn simply_connected_nerve_has_no_holonomy() {
        let c = Cocycle1::trivial(triangle_cover(), FiniteGroup::symmetric(3)).unwrap();
        // One generator, killed by the relation of the 2-simplex.
        assert_eq!(c.holonomy().unwrap(), vec![0]);
    }

    #[test]
    fn homomorphism_round_trip() {
        let s3 = FiniteGroup::symmetric(3);
        for x in s3.elements() {
            let c = Cocycle1::from_homomorphism(circle_cover(), s3.clone(), &[x]).unwrap();
            assert_eq!(c.holonomy().unwrap(), vec![x]);
            assert_eq!(c.nerve_values().values().filter(|&&g| g != 0).count(), usize::from(x != 0));
        }
        let trivial = FiniteGroup::trivial();
        assert!(Cocycle1::from_homomorphism(circle_cover(), trivial, &[0]).unwrap().is_trivial());
    }

    #[test]
    fn equivalence_of_coboundaries() {
        let s3 = FiniteGroup::symmetric(3);
        let c = Cocycle1::from_homomorphism(circle_cover(), s3.clone(), &[3]).unwrap();
        let bridge = are_equivalent(&c, &c, DEFAULT_BUDGET).unwrap().unwrap();
        for a in ["a", "b", "c"] {
            assert_eq!(bridge[&(a.into(), a.into())], 0);
        }
        let lambda = Cochain0::new(vec![1, 4, 5]);
        let d = c.coboundary_transform(&lambda).unwrap();
        let bridge = are_equivalent(&c, &d, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(joint(&c, &d, &bridge).is_ok());
    }

    /// The cocycle on the disjoint union cover assembled from both inputs
    /// and a bridge.
    fn joint(c1: &Cocycle1, c2: &Cocycle1, bridge: &Bridge) -> Result<Cocycle1, CocycleError> {
        let tag = |t: i64, l: &Label| Label::tagged(t, l.clone());
        let mut values = BTreeMap::new();
        for (t, c) in [(0, c1), (1, c2)] {
            for ((a, b), g) in c.labeled_values() {
                values.insert((tag(t, &a), tag(t, &b)), g);
            }
        }
        for ((a, b), &g) in bridge {
            values.insert((tag(0, a), tag(1, b)), g);
        }
        Cocycle1::new(disjoint_union_cover(c1.cover(), c2.cover()).unwrap(), c1.group().clone(), &values)
    }

    #[test]
    fn twisted_and_untwisted_circle_differ() {
        let z2 = FiniteGroup::cyclic(2);
        let c0 = Cocycle1::trivial(circle_cover(), z2.clone()).unwrap();
        let c1 = Cocycle1::from_homomorphism(circle_cover(), z2, &[1]).unwrap();
        assert_eq!(are_equivalent(&c0, &c1, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let s3 = FiniteGroup::symmetric(3);
        let c0 = Cocycle1::trivial(circle_cover(), s3.clone()).unwrap();
        let c1 = Cocycle1::from_homomorphism(circle_cover(), s3, &[1]).unwrap();
        assert!(matches!(are_equivalent(&c0, &c1, 3), Err(CocycleError::Budget(_))));
    }

    #[test]
    fn class_counts() {
        assert_eq!(count_equivalence_classes(circle_cover(), &FiniteGroup::cyclic(2), DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(count_equivalence_classes(circle_cover(), &FiniteGroup::symmetric(3), DEFAULT_BUDGET).unwrap(), 3);
        for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric(3)] {
            assert_eq!(count_equivalence_classes(triangle_cover(), &g, DEFAULT_BUDGET).unwrap(), 1);
        }
    }

    #[test]
    fn bad_cover_rejected() {
        let hex = SimplicialComplex::build((0..6).map(|i| [i as i64, ((i + 1) % 6) as i64])).unwrap();
        let arc = |vs: &[i64]| SimplicialComplex::build(vs.windows(2).map(|w| [w[0], w[1]])).unwrap();
        let cover = Cover::new(hex, [(Label::from("U0"), arc(&[0, 1, 2, 3])), (Label::from("U1"), arc(&[3, 4, 5, 0]))])
            .unwrap();
        assert!(matches!(Cocycle1::trivial(cover, FiniteGroup::cyclic(2)), Err(CocycleError::NotGood(_))));
    }
}
