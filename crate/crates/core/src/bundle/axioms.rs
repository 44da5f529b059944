use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{fiber_isomorphism, Bundle, BundleError};
use crate::cover::Cover;
use crate::label::Label;
use crate::simplicial::{mapping_cylinder_ordered, prism, SimplicialComplex, SimplicialMap};

/// Labeled total simplices, projection and coordinates of a bundle.
struct Parts {
    simplices: Vec<Vec<Label>>,
    proj: BTreeMap<Label, Label>,
    coords: BTreeMap<Label, usize>,
}

fn parts_of(b: &Bundle) -> Parts {
    let total = b.total();
    let base = b.base();
    Parts {
        simplices: total.maximal_labels(),
        proj: (0..total.vertex_count())
            .map(|v| (total.label(v).clone(), base.label(b.projection().apply(v)).clone()))
            .collect(),
        coords: (0..total.vertex_count()).map(|v| (total.label(v).clone(), b.fiber_coord(v))).collect(),
    }
}

/// Bundle over `x` whose simplices over `s` are the lifts of `f(s)`; the
/// vertex over `x` in the lift through `e` is `(x, e)`.
pub fn pullback(b: &Bundle, f: &SimplicialMap) -> Result<Bundle, BundleError> {
    if f.target() != b.base() {
        return Err(BundleError::BaseMismatch);
    }
    let x = f.source();
    let total = b.total();
    let lifts = b.lifts();
    let vertex = |xv: usize, e: usize| Label::pair(x.label(xv).clone(), total.label(e).clone());
    let mut simplices = Vec::new();
    for s in x.maximal() {
        for lift in &lifts[&f.image(s)] {
            simplices.push(
                s.iter()
                    .map(|&xv| {
                        let e = *lift
                            .iter()
                            .find(|&&e| b.projection().apply(e) == f.apply(xv))
                            .expect("lift covers the image");
                        vertex(xv, e)
                    })
                    .collect(),
            );
        }
    }
    let mut proj = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for xv in 0..x.vertex_count() {
        for e in b.fiber_over(f.apply(xv)) {
            proj.insert(vertex(xv, e), x.label(xv).clone());
            coords.insert(vertex(xv, e), b.fiber_coord(e));
        }
    }
    Bundle::from_labeled(simplices, x.clone(), &proj, &coords, b.action().clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartTrivialization {
    pub index: Label,
    pub trivializable: bool,
    /// Restricted total vertex to product vertex `(base vertex, fiber point)`.
    pub witness: Option<BTreeMap<Label, Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivializationReport {
    pub parts: Vec<PartTrivialization>,
}

impl TrivializationReport {
    pub fn all_trivializable(&self) -> bool {
        self.parts.iter().all(|p| p.trivializable)
    }
}

/// For each part of `cover`, whether the bundle restricted to it is
/// isomorphic over the part to the product.
pub fn local_trivialization_check(b: &Bundle, cover: &Cover, budget: u64) -> Result<TrivializationReport, BundleError> {
    if cover.base() != b.base() {
        return Err(BundleError::BaseMismatch);
    }
    let mut parts = Vec::new();
    for (index, part) in cover.indices().iter().zip(cover.parts()) {
        let local = b.restrict(part)?;
        let product = Bundle::product(part, b.action());
        let witness = fiber_isomorphism(&local, &product, budget)?.map(|map| {
            map.iter()
                .enumerate()
                .map(|(v, &w)| (local.total().label(v).clone(), product.total().label(w).clone()))
                .collect()
        });
        parts.push(PartTrivialization { index: index.clone(), trivializable: witness.is_some(), witness });
    }
    Ok(TrivializationReport { parts })
}

/// Glues bundles given over the parts of a cover. Any two of them must
/// restrict to the same bundle on the common part of their bases.
pub fn patch_bundles(cover: &Cover, locals: &BTreeMap<Label, Bundle>) -> Result<Bundle, BundleError> {
    let mut ordered = Vec::with_capacity(cover.len());
    for (index, part) in cover.indices().iter().zip(cover.parts()) {
        let local = locals.get(index).ok_or_else(|| BundleError::MissingLocal(index.clone()))?;
        if local.base() != part {
            return Err(BundleError::BaseMismatch);
        }
        ordered.push(local);
    }
    let action = ordered.first().map(|b| b.action().clone()).ok_or(BundleError::BaseMismatch)?;
    if ordered.iter().any(|b| b.action() != &action) {
        return Err(BundleError::GroupMismatch);
    }
    for i in 0..ordered.len() {
        for j in i + 1..ordered.len() {
            let common = cover.part(i).intersection(cover.part(j));
            let (a, b) = (ordered[i].restrict(&common)?, ordered[j].restrict(&common)?);
            if a != b {
                return Err(BundleError::Overlap(first_difference(&a, &b)));
            }
        }
    }
    let mut simplices = Vec::new();
    let mut proj = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for local in &ordered {
        let p = parts_of(local);
        simplices.extend(p.simplices);
        for (l, base) in p.proj {
            if proj.insert(l.clone(), base.clone()).is_some_and(|old| old != base) {
                return Err(BundleError::Conflict(l));
            }
        }
        for (l, c) in p.coords {
            if coords.insert(l.clone(), c).is_some_and(|old| old != c) {
                return Err(BundleError::Conflict(l));
            }
        }
    }
    Bundle::from_labeled(simplices, cover.base().clone(), &proj, &coords, action)
}

/// Least labeled total simplex present in exactly one of two bundles over
/// the same base, or else the least vertex whose coordinate differs.
fn first_difference(a: &Bundle, b: &Bundle) -> Vec<Label> {
    let set = |x: &Bundle| -> BTreeSet<Vec<Label>> {
        x.total().all_simplices().map(|s| x.total().simplex_labels(s)).collect()
    };
    let (sa, sb) = (set(a), set(b));
    if let Some(s) = sa.symmetric_difference(&sb).next() {
        return s.clone();
    }
    let (pa, pb) = (parts_of(a), parts_of(b));
    pa.coords.iter().find(|(l, c)| pb.coords.get(*l) != Some(c)).map(|(l, _)| vec![l.clone()]).unwrap_or_default()
}

/// Fiberwise mapping cylinder of `phi: e.total -> target.total` over the
/// prism on the common base. Total vertices are `(0, x)` for `x` in `e` and
/// `(1, y)` for `y` in `target`; the prism is ordered by base vertex first.
pub fn mapping_cylinder_bundle(e: &Bundle, target: &Bundle, phi: &SimplicialMap) -> Result<Bundle, BundleError> {
    if e.base() != target.base() || phi.source() != e.total() || phi.target() != target.total() {
        return Err(BundleError::BaseMismatch);
    }
    if e.action() != target.action() {
        return Err(BundleError::GroupMismatch);
    }
    let total = e.total();
    let base = e.base();
    for v in 0..total.vertex_count() {
        if target.projection().apply(phi.apply(v)) != e.projection().apply(v) {
            return Err(BundleError::NotFiberPreserving(total.label(v).clone()));
        }
    }
    for b in 0..base.vertex_count() {
        let mut images: Vec<usize> = e.fiber_over(b).iter().map(|&v| phi.apply(v)).collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != target.fiber_size() {
            return Err(BundleError::NotFiberwiseBijective(base.label(b).clone()));
        }
    }
    let mut order: Vec<usize> = (0..total.vertex_count()).collect();
    order.sort_by_key(|&v| (e.projection().apply(v), v));
    let mut rank = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let cyl = mapping_cylinder_ordered(phi, &rank);
    let base_prism = prism(base).complex;

    let (pe, pt) = (parts_of(e), parts_of(target));
    let mut proj = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for (tag, p) in [(0, &pe), (1, &pt)] {
        for (l, b) in &p.proj {
            proj.insert(Label::tagged(tag, l.clone()), Label::tagged(tag, b.clone()));
            coords.insert(Label::tagged(tag, l.clone()), p.coords[l]);
        }
    }
    Bundle::from_labeled(cyl.complex.maximal_labels(), base_prism, &proj, &coords, e.action().clone())
}

/// The restriction of a cylinder bundle to one end, with the end tag
/// removed from every label.
pub fn cylinder_end(b: &Bundle, tag: i64) -> Result<Bundle, BundleError> {
    let untag = |l: &Label| -> Option<Label> {
        match l {
            Label::Tuple(p) if p.len() == 2 && p[0] == Label::Int(tag) => Some(p[1].clone()),
            _ => None,
        }
    };
    let keep = |labels: Vec<Label>| -> Option<Vec<Label>> { labels.iter().map(untag).collect() };
    let base = b.base();
    let end_base: Vec<Vec<Label>> = base.all_simplices().filter_map(|s| keep(base.simplex_labels(s))).collect();
    let total = b.total();
    let end_total: Vec<Vec<Label>> = total.all_simplices().filter_map(|s| keep(total.simplex_labels(s))).collect();
    let p = parts_of(b);
    let proj = p.proj.iter().filter_map(|(l, x)| Some((untag(l)?, untag(x)?))).collect();
    let coords = p.coords.iter().filter_map(|(l, &c)| Some((untag(l)?, c))).collect();
    let end_base = SimplicialComplex::build(end_base).map_err(|_| BundleError::BaseMismatch)?;
    Bundle::from_labeled(end_total, end_base, &proj, &coords, b.action().clone())
}
