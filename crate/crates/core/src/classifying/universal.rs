use std::collections::BTreeMap;

use super::bar::bar_face;
use super::map::ClassifyingMap;
use super::ClassifyingError;
use crate::bundle::{Bundle, BundleError};
use crate::cocycle::Cocycle1;
use crate::cover::Cover;
use crate::group::{Elem, FiniteGroup, GroupAction};
use crate::label::Label;
use crate::simplicial::{ChainComplex, HomologyResult, Overflow, SparseMatrix};

/// The group acting on itself, as a simplicial set over the bar
/// construction: a `k`-simplex is a bar tuple together with the fiber point
/// at its first vertex. The point at vertex `i` of `(g_1, ..., g_k; f)` is
/// `(g_1 ... g_i)^-1 f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalBundle {
    group: FiniteGroup,
    dimension: usize,
}

/// A simplex of the universal total space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalSimplex {
    pub tuple: Vec<Elem>,
    pub point: Elem,
}

impl UniversalBundle {
    pub fn new(group: &FiniteGroup, dimension: usize) -> Self {
        UniversalBundle { group: group.clone(), dimension }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Points over the single base vertex.
    pub fn fiber_size(&self) -> usize {
        self.group.order()
    }

    /// Face `i`: the projection of the face in the bar construction, with
    /// the starting point moved along the first edge when `i == 0`.
    pub fn face(&self, s: &TotalSimplex, i: usize) -> TotalSimplex {
        let point = if i == 0 { self.group.mul(self.group.inv(s.tuple[0]), s.point) } else { s.point };
        TotalSimplex { tuple: bar_face(&self.group, &s.tuple, i), point }
    }

    /// Fiber point of vertex `i`, read off by taking faces.
    pub fn vertex_point(&self, s: &TotalSimplex, i: usize) -> Elem {
        let mut t = s.clone();
        while t.tuple.len() > i {
            let last = t.tuple.len();
            t = self.face(&t, last);
        }
        while !t.tuple.is_empty() {
            t = self.face(&t, 0);
        }
        t.point
    }

    /// The element carrying fiber points at vertex 1 of the edge over `(g)`
    /// to those at vertex 0, or `None` if the lifts are not a translation.
    pub fn edge_transition(&self, g: Elem) -> Option<Elem> {
        let pairs: Vec<(Elem, Elem)> = self
            .group
            .elements()
            .map(|f| {
                let s = TotalSimplex { tuple: vec![g], point: f };
                (self.vertex_point(&s, 0), self.vertex_point(&s, 1))
            })
            .collect();
        self.group.elements().find(|&h| pairs.iter().all(|&(p0, p1)| self.group.mul(h, p1) == p0))
    }

    /// Normalized chains of the total space through the truncation
    /// dimension: generators are non-identity tuples with a point.
    pub fn chain_complex(&self) -> ChainComplex {
        let bar = super::bar_construction(&self.group, self.dimension);
        let n = self.group.order();
        let ranks: Vec<usize> = (0..=self.dimension).map(|k| bar.rank(k) * n).collect();
        let boundaries = (1..=self.dimension)
            .map(|k| {
                let columns = (0..ranks[k])
                    .map(|j| {
                        let s = TotalSimplex { tuple: bar.tuple(k, j / n), point: j % n };
                        (0..=k)
                            .filter_map(|i| {
                                let f = self.face(&s, i);
                                bar.index(&f.tuple).map(|r| (r * n + f.point, if i % 2 == 0 { 1 } else { -1 }))
                            })
                            .collect()
                    })
                    .collect();
                SparseMatrix::from_columns(ranks[k - 1], columns)
            })
            .collect();
        ChainComplex::new(ranks, boundaries).expect("faces of the action groupoid compose")
    }

    pub fn homology(&self) -> Result<HomologyResult, Overflow> {
        self.chain_complex().homology(self.dimension.saturating_sub(1))
    }

    /// Pull back along a classifying map: over the nerve simplex `s` and a
    /// point `f`, the lift has vertex `a_i` at the `i`-th vertex point of
    /// `(image(s); f)`.
    pub fn pullback(&self, map: &ClassifyingMap) -> Result<Bundle, ClassifyingError> {
        if map.group() != &self.group {
            return Err(ClassifyingError::Mismatch);
        }
        let nerve = map.nerve();
        let vertex = |a: usize, f: Elem| Label::pair(nerve.label(a).clone(), Label::Int(f as i64));
        let mut simplices = Vec::new();
        for s in nerve.maximal() {
            if s.len() > self.dimension + 1 {
                return Err(ClassifyingError::Truncation { nerve: s.len() - 1, bar: self.dimension });
            }
            for f in self.group.elements() {
                let t = TotalSimplex { tuple: map.image(s).to_vec(), point: f };
                simplices.push((0..s.len()).map(|i| vertex(s[i], self.vertex_point(&t, i))).collect());
            }
        }
        let mut proj = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for a in 0..nerve.vertex_count() {
            for f in self.group.elements() {
                proj.insert(vertex(a, f), nerve.label(a).clone());
                coords.insert(vertex(a, f), f);
            }
        }
        let action = GroupAction::regular(&self.group);
        Ok(Bundle::from_labeled(simplices, nerve.clone(), &proj, &coords, action)?)
    }

    /// The tautological cocycle read back along a classifying map: each
    /// nerve edge gets the transition of the universal edge it lands on.
    pub fn pullback_cocycle(
        &self,
        map: &ClassifyingMap,
        cover: &std::sync::Arc<Cover>,
    ) -> Result<Cocycle1, ClassifyingError> {
        if cover.nerve().complex() != map.nerve() {
            return Err(ClassifyingError::Mismatch);
        }
        let values = map
            .nerve()
            .simplices(1)
            .iter()
            .map(|e| {
                let g = map.image(e)[0];
                let h = self.edge_transition(g).ok_or(ClassifyingError::Mismatch)?;
                Ok(((e[0], e[1]), h))
            })
            .collect::<Result<BTreeMap<_, _>, ClassifyingError>>()?;
        Ok(Cocycle1::from_nerve_values(cover.clone(), self.group.clone(), values)?)
    }
}

pub fn universal_bundle(group: &FiniteGroup, dimension: usize) -> UniversalBundle {
    UniversalBundle::new(group, dimension)
}

impl From<BundleError> for ClassifyingError {
    fn from(e: BundleError) -> Self {
        ClassifyingError::Bundle(Box::new(e))
    }
}
