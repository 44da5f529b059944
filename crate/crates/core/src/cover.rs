//! Covers of a base complex by subcomplexes, their Cech nerves, and the
//! comparison map from the (subdivided) base to the nerve.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::label::Label;
use crate::simplicial::{barycentric_subdivision, Overflow, Simplex, SimplicialComplex, SimplicialMap, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover has no parts")]
    NoParts,
    #[error("index {0} is used for two parts")]
    DuplicateIndex(Label),
    #[error("part {index} contains {simplex:?}, which is not a simplex of the base")]
    NotSubcomplex { index: Label, simplex: Vec<Label> },
    #[error("base simplex {0:?} lies in no part")]
    NotCovered(Vec<Label>),
    #[error("covers have different bases")]
    DifferentBases,
}

/// Indexed family of subcomplexes of a base complex. Indices are kept in
/// increasing label order.
#[derive(Debug, Clone)]
pub struct Cover {
    base: SimplicialComplex,
    indices: Vec<Label>,
    parts: Vec<SimplicialComplex>,
    /// Simplices of each part, as base vertex ids.
    members: Vec<BTreeSet<Simplex>>,
    nerve: OnceLock<NerveComplex>,
    goodness: OnceLock<Result<GoodnessReport, Overflow>>,
}

impl PartialEq for Cover {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.indices == other.indices && self.parts == other.parts
    }
}

impl Eq for Cover {}

impl Cover {
    /// Each part must be a subcomplex of `base` and together they must
    /// contain every simplex of `base`.
    pub fn new(
        base: SimplicialComplex,
        parts: impl IntoIterator<Item = (Label, SimplicialComplex)>,
    ) -> Result<Self, CoverError> {
        let cover = Self::partial(base, parts)?;
        if let Some(s) = cover.uncovered_simplex() {
            return Err(CoverError::NotCovered(cover.base.simplex_labels(&s)));
        }
        Ok(cover)
    }

    /// Like [`Cover::new`] but without requiring the parts to exhaust the
    /// base.
    pub fn partial(
        base: SimplicialComplex,
        parts: impl IntoIterator<Item = (Label, SimplicialComplex)>,
    ) -> Result<Self, CoverError> {
        let mut sorted: BTreeMap<Label, SimplicialComplex> = BTreeMap::new();
        for (index, part) in parts {
            if sorted.contains_key(&index) {
                return Err(CoverError::DuplicateIndex(index));
            }
            sorted.insert(index, part);
        }
        if sorted.is_empty() {
            return Err(CoverError::NoParts);
        }
        let mut indices = Vec::with_capacity(sorted.len());
        let mut parts = Vec::with_capacity(sorted.len());
        let mut members = Vec::with_capacity(sorted.len());
        for (index, part) in sorted {
            let mut set = BTreeSet::new();
            for s in part.all_simplices() {
                let labels = part.simplex_labels(s);
                match base.simplex_from_labels(&labels) {
                    Some(ids) if base.contains(&ids) => {
                        set.insert(ids);
                    }
                    _ => return Err(CoverError::NotSubcomplex { index, simplex: labels }),
                }
            }
            indices.push(index);
            parts.push(part);
            members.push(set);
        }
        Ok(Cover { base, indices, parts, members, nerve: OnceLock::new(), goodness: OnceLock::new() })
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn indices(&self) -> &[Label] {
        &self.indices
    }

    pub fn parts(&self) -> &[SimplicialComplex] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &SimplicialComplex {
        &self.parts[i]
    }

    pub fn position(&self, index: &Label) -> Option<usize> {
        self.indices.binary_search(index).ok()
    }

    /// Whether part `i` contains the base simplex `s` (base ids, sorted).
    pub fn part_contains(&self, i: usize, s: &[VertexId]) -> bool {
        self.members[i].contains(s)
    }

    /// Least part index containing `s`.
    pub fn carrier(&self, s: &[VertexId]) -> Option<usize> {
        (0..self.len()).find(|&i| self.part_contains(i, s))
    }

    fn uncovered_simplex(&self) -> Option<Simplex> {
        self.base.all_simplices().find(|s| self.carrier(s).is_none()).cloned()
    }

    /// Simplices common to the given parts, as base ids.
    fn common(&self, parts: &[usize]) -> BTreeSet<Simplex> {
        let Some((&first, rest)) = parts.split_first() else { return BTreeSet::new() };
        let mut acc = self.members[first].clone();
        for &i in rest {
            acc.retain(|s| self.members[i].contains(s));
        }
        acc
    }

    /// Subcomplex of the base common to the given parts.
    pub fn intersection(&self, parts: &[usize]) -> SimplicialComplex {
        self.base.subcomplex(self.common(parts))
    }

    pub fn nerve(&self) -> &NerveComplex {
        self.nerve.get_or_init(|| NerveComplex::of(self))
    }

    pub fn goodness(&self) -> Result<&GoodnessReport, Overflow> {
        self.goodness.get_or_init(|| GoodnessReport::of(self)).as_ref().map_err(|e| *e)
    }

    /// Restrict to a subcomplex of the base, intersecting every part with it.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Result<Cover, CoverError> {
        let parts =
            self.indices.iter().zip(&self.parts).map(|(i, p)| (i.clone(), p.intersection(sub))).collect::<Vec<_>>();
        Cover::new(self.base.intersection(sub), parts)
    }
}

/// The Cech nerve: one vertex per nonempty part (labeled by its index), one
/// simplex per set of parts with nonempty common intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    complex: SimplicialComplex,
    part_of: Vec<usize>,
    witnesses: BTreeMap<Simplex, SimplicialComplex>,
}

impl NerveComplex {
    fn of(cover: &Cover) -> Self {
        let nonempty: Vec<usize> = (0..cover.len()).filter(|&i| !cover.members[i].is_empty()).collect();
        let mut found: Vec<(Vec<usize>, BTreeSet<Simplex>)> = Vec::new();
        let mut stack: Vec<(Vec<usize>, BTreeSet<Simplex>)> =
            nonempty.iter().rev().map(|&i| (vec![i], cover.members[i].clone())).collect();
        while let Some((parts, common)) = stack.pop() {
            let last = *parts.last().expect("nonempty");
            for &j in nonempty.iter().rev().filter(|&&j| j > last) {
                let next: BTreeSet<Simplex> =
                    common.iter().filter(|s| cover.members[j].contains(*s)).cloned().collect();
                if !next.is_empty() {
                    let mut p = parts.clone();
                    p.push(j);
                    stack.push((p, next));
                }
            }
            found.push((parts, common));
        }
        // Nerve vertex ids follow index order because labels are sorted.
        let labels: Vec<Label> = nonempty.iter().map(|&i| cover.indices[i].clone()).collect();
        let id_of: BTreeMap<usize, VertexId> = nonempty.iter().enumerate().map(|(v, &i)| (i, v)).collect();
        let declared: Vec<Simplex> = found.iter().map(|(p, _)| p.iter().map(|i| id_of[i]).collect()).collect();
        let complex = SimplicialComplex::from_ids(labels, declared);
        let witnesses = found
            .into_iter()
            .map(|(p, common)| (p.iter().map(|i| id_of[i]).collect(), cover.base.subcomplex(common)))
            .collect();
        NerveComplex { complex, part_of: nonempty, witnesses }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Cover position of nerve vertex `v`.
    pub fn part_index(&self, v: VertexId) -> usize {
        self.part_of[v]
    }

    /// Nerve vertex of cover position `i`, if that part is nonempty.
    pub fn vertex_of_part(&self, i: usize) -> Option<VertexId> {
        self.part_of.binary_search(&i).ok()
    }

    /// The intersection of the parts named by a nerve simplex.
    pub fn witness(&self, s: &[VertexId]) -> Option<&SimplicialComplex> {
        self.witnesses.get(s)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (&Simplex, &SimplicialComplex)> {
        self.witnesses.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntersectionCheck {
    pub indices: Vec<Label>,
    pub components: usize,
    pub betti: Vec<usize>,
    pub has_torsion: bool,
    pub good: bool,
}

/// Per-intersection record of whether each nonempty multi-intersection is
/// connected with the homology of a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub checks: Vec<IntersectionCheck>,
}

impl GoodnessReport {
    fn of(cover: &Cover) -> Result<Self, Overflow> {
        let nerve = cover.nerve();
        let mut checks = Vec::new();
        for (s, w) in nerve.witnesses() {
            let h = w.full_homology()?;
            let components = w.components().len();
            checks.push(IntersectionCheck {
                indices: nerve.complex.simplex_labels(s),
                components,
                betti: h.betti(),
                has_torsion: h.groups.iter().any(|g| !g.torsion.is_empty()),
                good: components == 1 && h.is_point_like(),
            });
        }
        checks.sort_by(|a, b| (a.indices.len(), &a.indices).cmp(&(b.indices.len(), &b.indices)));
        Ok(GoodnessReport { checks })
    }

    pub fn is_good(&self) -> bool {
        self.checks.iter().all(|c| c.good)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IntersectionCheck> {
        self.checks.iter().filter(|c| !c.good)
    }
}

/// Cover of the barycentric subdivision of `x` by the closed stars of the
/// original vertices: the part indexed by vertex `v` holds the chains of
/// simplices that all contain `v`. Every nonempty intersection is a cone,
/// so the cover is good and its nerve is isomorphic to `x`.
pub fn star_cover(x: &SimplicialComplex) -> Cover {
    let sd = barycentric_subdivision(x);
    let parts = (0..x.vertex_count())
        .map(|v| {
            let inside: Vec<bool> = sd.carrier.iter().map(|c| c.contains(&v)).collect();
            let simplices = sd.complex.all_simplices().filter(|s| s.iter().all(|&w| inside[w])).cloned();
            (x.label(v).clone(), sd.complex.subcomplex(simplices))
        })
        .collect::<Vec<_>>();
    Cover::new(sd.complex, parts).expect("stars cover the subdivision")
}

/// For a star cover of `x`, the isomorphism from its nerve back to `x`
/// sending the part of vertex `v` to `v`.
pub fn star_projection(cover: &Cover, x: &SimplicialComplex) -> Result<SimplicialMap, crate::simplicial::MapError> {
    let nerve = cover.nerve().complex();
    let vm = nerve.labels().iter().map(|l| (l.clone(), l.clone())).collect();
    SimplicialMap::from_labels(nerve.clone(), x.clone(), &vm)
}

pub fn cech_nerve(cover: &Cover) -> &NerveComplex {
    cover.nerve()
}

pub fn is_good_cover(cover: &Cover) -> Result<&GoodnessReport, Overflow> {
    cover.goodness()
}

/// Whether every base simplex lies inside at least one part.
pub fn carrier_check(cover: &Cover) -> bool {
    cover.uncovered_simplex().is_none()
}

/// Map from the subdivided base to the nerve sending the barycenter of a
/// base simplex to the least part containing it.
pub fn section_map(cover: &Cover) -> Result<SimplicialMap, CoverError> {
    if let Some(s) = cover.uncovered_simplex() {
        return Err(CoverError::NotCovered(cover.base.simplex_labels(&s)));
    }
    let sd = barycentric_subdivision(&cover.base);
    let nerve = cover.nerve();
    let vm = sd
        .carrier
        .iter()
        .map(|s| nerve.vertex_of_part(cover.carrier(s).expect("checked above")).expect("nonempty part"))
        .collect();
    Ok(SimplicialMap::new(sd.complex, nerve.complex.clone(), vm)
        .expect("a chain of simplices lies in the part chosen for its least member"))
}

/// `U` followed by `V`, with indices tagged `(0, a)` and `(1, b)`.
pub fn disjoint_union_cover(u: &Cover, v: &Cover) -> Result<Cover, CoverError> {
    if u.base != v.base {
        return Err(CoverError::DifferentBases);
    }
    let tagged = |tag: i64, c: &Cover| {
        c.indices.iter().zip(&c.parts).map(move |(i, p)| (Label::tagged(tag, i.clone()), p.clone())).collect::<Vec<_>>()
    };
    let mut parts = tagged(0, u);
    parts.extend(tagged(1, v));
    Cover::new(u.base.clone(), parts)
}
