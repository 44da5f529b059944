use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::homology::{ChainComplex, ChainError, HomologyResult};
use super::matrix::{Overflow, SparseMatrix};
use crate::label::Label;

/// Position of a vertex in its complex's sorted label table.
pub type VertexId = usize;

/// Strictly increasing list of vertex ids.
pub type Simplex = Vec<VertexId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("declared simplex {index} is empty")]
    EmptySimplex { index: usize },
    #[error("declared simplex {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: Label },
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("vertex map covers {got} vertices, source has {expected}")]
    Arity { got: usize, expected: usize },
    #[error("source vertex {0} has no image")]
    Unmapped(Label),
    #[error("image vertex {0} is not in the target")]
    UnknownTarget(Label),
    #[error("image vertex id {0} is out of range for the target")]
    TargetOutOfRange(VertexId),
    #[error("image of source simplex {simplex:?} is {image:?}, which is not a target simplex")]
    NotSimplicial { simplex: Vec<Label>, image: Vec<Label> },
}

/// A finite abstract simplicial complex, stored as the downward closure of its
/// maximal simplices.
///
/// Vertices are numbered by the sorted order of their labels, so vertex order
/// is label order. Simplices of each dimension are kept in lexicographic order;
/// that order is the basis order of the chain groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<Label>,
    simplices: Vec<Vec<Simplex>>,
    maximal: Vec<Simplex>,
    lookup: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the given simplices.
    pub fn build<S, L>(declared: impl IntoIterator<Item = S>) -> Result<Self, ComplexError>
    where
        S: IntoIterator<Item = L>,
        L: Into<Label>,
    {
        let declared: Vec<Vec<Label>> = declared.into_iter().map(|s| s.into_iter().map(Into::into).collect()).collect();
        let mut vertex_set = BTreeSet::new();
        for (index, s) in declared.iter().enumerate() {
            if s.is_empty() {
                return Err(ComplexError::EmptySimplex { index });
            }
            let mut seen = BTreeSet::new();
            for v in s {
                if !seen.insert(v) {
                    return Err(ComplexError::RepeatedVertex { index, vertex: v.clone() });
                }
                vertex_set.insert(v.clone());
            }
        }
        let labels: Vec<Label> = vertex_set.into_iter().collect();
        let simplices = declared
            .iter()
            .map(|s| {
                let mut ids: Simplex = s.iter().map(|l| labels.binary_search(l).expect("collected above")).collect();
                ids.sort_unstable();
                ids
            })
            .collect::<Vec<_>>();
        Ok(Self::from_ids(labels, simplices))
    }

    /// Builds from simplices already expressed as ids into `labels`. `labels`
    /// must be sorted and unique; every simplex must be sorted and nonempty.
    pub(crate) fn from_ids(labels: Vec<Label>, declared: Vec<Simplex>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]), "labels must be sorted");
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        let mut used = vec![false; labels.len()];
        for s in &declared {
            debug_assert!(!s.is_empty() && s.windows(2).all(|w| w[0] < w[1]));
            for &v in s {
                used[v] = true;
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, BTreeSet::new);
            }
            by_dim[d].insert(s.clone());
        }
        // Drop labels that no simplex mentions, renumbering the rest.
        let (labels, by_dim) = if used.iter().all(|&u| u) {
            (labels, by_dim)
        } else {
            let mut remap = vec![usize::MAX; labels.len()];
            let mut kept = Vec::new();
            for (i, l) in labels.into_iter().enumerate() {
                if used[i] {
                    remap[i] = kept.len();
                    kept.push(l);
                }
            }
            let by_dim = by_dim
                .into_iter()
                .map(|set| set.into_iter().map(|s| s.iter().map(|&v| remap[v]).collect()).collect())
                .collect();
            (kept, by_dim)
        };
        // Close downward, one dimension at a time from the top.
        let mut by_dim = by_dim;
        for d in (1..by_dim.len()).rev() {
            let faces: Vec<Simplex> = by_dim[d].iter().flat_map(|s| facets(s)).collect();
            by_dim[d - 1].extend(faces);
        }
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|set| set.into_iter().collect()).collect();
        let lookup: Vec<HashMap<Simplex, usize>> =
            simplices.iter().map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        let mut has_coface: Vec<Vec<bool>> = simplices.iter().map(|l| vec![false; l.len()]).collect();
        for d in 1..simplices.len() {
            for s in &simplices[d] {
                for f in facets(s) {
                    has_coface[d - 1][lookup[d - 1][&f]] = true;
                }
            }
        }
        let maximal = simplices
            .iter()
            .zip(&has_coface)
            .flat_map(|(list, flags)| list.iter().zip(flags).filter(|(_, &c)| !c).map(|(s, _)| s.clone()))
            .collect();
        SimplicialComplex { labels, simplices, maximal, lookup }
    }

    /// Builds a complex on an explicit label table.
    pub(crate) fn from_labeled(declared: Vec<Vec<Label>>) -> Self {
        Self::build(declared).expect("constructed simplices are well formed")
    }

    pub fn empty() -> Self {
        Self::from_ids(Vec::new(), Vec::new())
    }

    pub fn point(label: impl Into<Label>) -> Self {
        Self::from_labeled(vec![vec![label.into()]])
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &Label) -> Option<VertexId> {
        self.labels.binary_search(label).ok()
    }

    pub fn simplex_labels(&self, s: &[VertexId]) -> Vec<Label> {
        s.iter().map(|&v| self.labels[v].clone()).collect()
    }

    /// Ids of a labeled vertex set, sorted; `None` if some label is unknown.
    pub fn simplex_from_labels(&self, labels: &[Label]) -> Option<Simplex> {
        let mut s: Simplex = labels.iter().map(|l| self.vertex(l)).collect::<Option<_>>()?;
        s.sort_unstable();
        s.dedup();
        Some(s)
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn maximal_labels(&self) -> Vec<Vec<Label>> {
        self.maximal.iter().map(|s| self.simplex_labels(s)).collect()
    }

    pub fn contains(&self, s: &[VertexId]) -> bool {
        self.index_of(s).is_some()
    }

    /// Basis position of `s` among simplices of its dimension.
    pub fn index_of(&self, s: &[VertexId]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        self.lookup.get(d)?.get(s).copied()
    }

    pub fn contains_labels(&self, labels: &[Label]) -> bool {
        self.simplex_from_labels(labels).is_some_and(|s| s.len() == labels.len() && self.contains(&s))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn neighbors(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in self.simplices(1) {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.neighbors();
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Simplicial chain complex with the ordered-vertex sign convention.
    pub fn chain_complex(&self) -> ChainComplex {
        let ranks: Vec<usize> = if self.simplices.is_empty() { vec![0] } else { self.f_vector() };
        let boundaries = (1..self.simplices.len())
            .map(|d| {
                let cols = self.simplices[d]
                    .iter()
                    .map(|s| {
                        facets(s)
                            .enumerate()
                            .map(|(i, f)| (self.lookup[d - 1][&f], if i % 2 == 0 { 1 } else { -1 }))
                            .collect()
                    })
                    .collect();
                SparseMatrix::from_columns(self.simplices[d - 1].len(), cols)
            })
            .collect();
        ChainComplex::new(ranks, boundaries).expect("simplicial boundaries square to zero")
    }

    pub fn homology(&self, max_degree: usize) -> Result<HomologyResult, Overflow> {
        self.chain_complex().homology(max_degree)
    }

    /// Homology in every degree up to the dimension.
    pub fn full_homology(&self) -> Result<HomologyResult, Overflow> {
        self.homology(self.dimension().unwrap_or(0))
    }

    /// Subcomplex generated by `declared` simplices (in this complex's ids),
    /// relabeled as a standalone complex.
    pub fn subcomplex(&self, declared: impl IntoIterator<Item = Simplex>) -> SimplicialComplex {
        SimplicialComplex::from_ids(self.labels.clone(), declared.into_iter().collect())
    }

    /// Simplices present in both complexes, compared by labels.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let common: Vec<Vec<Label>> =
            self.all_simplices().map(|s| self.simplex_labels(s)).filter(|ls| other.contains_labels(ls)).collect();
        SimplicialComplex::build(common).expect("faces of valid simplices")
    }

    /// Whether every simplex of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.maximal.iter().all(|s| other.contains_labels(&self.simplex_labels(s)))
    }
}

/// Codimension-one faces in the order `d_0, d_1, ...` (drop vertex i).
pub fn facets(s: &[VertexId]) -> impl Iterator<Item = Simplex> + '_ {
    let n = if s.len() > 1 { s.len() } else { 0 };
    (0..n).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        f
    })
}

/// Vertex map between complexes that sends simplices to simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<VertexId>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: Vec<VertexId>,
    ) -> Result<Self, MapError> {
        if vertex_map.len() != source.vertex_count() {
            return Err(MapError::Arity { got: vertex_map.len(), expected: source.vertex_count() });
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(MapError::TargetOutOfRange(w));
        }
        let map = SimplicialMap { source, target, vertex_map };
        for s in &map.source.maximal {
            let image = map.image(s);
            if !map.target.contains(&image) {
                return Err(MapError::NotSimplicial {
                    simplex: map.source.simplex_labels(s),
                    image: map.target.simplex_labels(&image),
                });
            }
        }
        Ok(map)
    }

    pub fn from_labels(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: &BTreeMap<Label, Label>,
    ) -> Result<Self, MapError> {
        let ids = source
            .labels
            .iter()
            .map(|l| {
                let w = vertex_map.get(l).ok_or_else(|| MapError::Unmapped(l.clone()))?;
                target.vertex(w).ok_or_else(|| MapError::UnknownTarget(w.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, ids)
    }

    pub fn identity(x: &SimplicialComplex) -> Self {
        SimplicialMap { source: x.clone(), target: x.clone(), vertex_map: (0..x.vertex_count()).collect() }
    }

    pub fn constant(source: &SimplicialComplex, target: &SimplicialComplex, at: VertexId) -> Self {
        Self::new(source.clone(), target.clone(), vec![at; source.vertex_count()]).expect("a vertex is a simplex")
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    /// Image vertex set, sorted with duplicates removed.
    pub fn image(&self, s: &[VertexId]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| self.vertex_map[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn label_map(&self) -> BTreeMap<Label, Label> {
        self.source
            .labels
            .iter()
            .zip(&self.vertex_map)
            .map(|(l, &w)| (l.clone(), self.target.labels[w].clone()))
            .collect()
    }

    pub fn compose(&self, then: &SimplicialMap) -> Result<SimplicialMap, MapError> {
        assert_eq!(self.target, then.source, "composing maps with mismatched ends");
        let vm = self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect();
        SimplicialMap::new(self.source.clone(), then.target.clone(), vm)
    }

    /// Degree-`k` component of the induced chain map. Collapsing simplices go
    /// to zero; the rest carry the sign of the permutation that sorts the image.
    pub fn chain_map(&self, k: usize) -> SparseMatrix {
        let cols = self
            .source
            .simplices(k)
            .iter()
            .map(|s| {
                let img: Vec<VertexId> = s.iter().map(|&v| self.vertex_map[v]).collect();
                let mut sorted = img.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() < img.len() {
                    return Vec::new();
                }
                let idx = self.target.index_of(&sorted).expect("simplicial map");
                vec![(idx, permutation_sign(&img))]
            })
            .collect();
        SparseMatrix::from_columns(self.target.simplices(k).len(), cols)
    }

    /// Whether the map induces isomorphisms on integral homology in every
    /// degree (tested by acyclicity of the mapping cone).
    pub fn induces_homology_isomorphism(&self) -> Result<bool, ChainError> {
        let top = self.source.dimension().unwrap_or(0).max(self.target.dimension().unwrap_or(0));
        let maps: Vec<SparseMatrix> = (0..=top).map(|k| self.chain_map(k)).collect();
        let cone = ChainComplex::mapping_cone(&self.source.chain_complex(), &self.target.chain_complex(), &maps, top)?;
        Ok(cone.homology(top + 1)?.is_acyclic())
    }
}

/// Sign of the permutation sorting a list of distinct values.
pub(crate) fn permutation_sign(values: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow() -> SimplicialComplex {
        SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap()
    }

    #[test]
    fn hollow_triangle_counts() {
        let x = hollow();
        assert_eq!(x.f_vector(), vec![3, 3]);
        assert_eq!(x.euler_characteristic(), 0);
    }

    #[test]
    fn full_triangle_counts() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        assert_eq!(x.f_vector(), vec![3, 3, 1]);
        assert_eq!(x.maximal().len(), 1);
    }

    #[test]
    fn repeated_vertex_rejected() {
        let err = SimplicialComplex::build([["a", "a"]]).unwrap_err();
        assert_eq!(err, ComplexError::RepeatedVertex { index: 0, vertex: "a".into() });
    }

    #[test]
    fn empty_simplex_rejected() {
        let err = SimplicialComplex::build(vec![Vec::<&str>::new()]).unwrap_err();
        assert_eq!(err, ComplexError::EmptySimplex { index: 0 });
    }

    #[test]
    fn rebuild_from_maximal_is_idempotent() {
        let x = SimplicialComplex::build(vec![vec!["a", "b", "c"], vec!["b", "c"], vec!["c", "d"]]).unwrap();
        assert_eq!(x.maximal().len(), 2);
        let y = SimplicialComplex::build(x.maximal_labels()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn euler_of_sphere() {
        let x = SimplicialComplex::build([["0", "1", "2"], ["0", "1", "3"], ["0", "2", "3"], ["1", "2", "3"]]).unwrap();
        assert_eq!(x.euler_characteristic(), 2);
        assert_eq!(SimplicialComplex::point("p").euler_characteristic(), 1);
    }

    #[test]
    fn non_simplicial_map_rejected() {
        let edge = SimplicialComplex::build([["x", "y"]]).unwrap();
        let two_points = SimplicialComplex::build([["p"], ["q"]]).unwrap();
        let err = SimplicialMap::new(edge, two_points, vec![0, 1]).unwrap_err();
        assert!(matches!(err, MapError::NotSimplicial { .. }));
    }

    #[test]
    fn chain_map_signs() {
        // Reflection of an edge reverses orientation.
        let edge = SimplicialComplex::build([["x", "y"]]).unwrap();
        let flip = SimplicialMap::new(edge.clone(), edge, vec![1, 0]).unwrap();
        assert_eq!(flip.chain_map(1).column(0), &[(0, -1)]);
        assert!(flip.induces_homology_isomorphism().unwrap());
    }

    #[test]
    fn constant_map_on_circle_is_not_a_homology_iso() {
        let x = hollow();
        let pt = SimplicialComplex::point("p");
        let c = SimplicialMap::constant(&x, &pt, 0);
        assert!(!c.induces_homology_isomorphism().unwrap());
    }
}
