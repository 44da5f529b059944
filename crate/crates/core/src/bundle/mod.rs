//! Combinatorial bundles with discrete fibers: total complex, projection onto
//! a base, and a structure-group action on the fiber.

mod axioms;
mod construct;

pub use axioms::{
    cylinder_end, local_trivialization_check, mapping_cylinder_bundle, patch_bundles, pullback, TrivializationReport,
};
pub use construct::{skeletal_construction, total_space};

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cover::CoverError;
use crate::group::GroupAction;
use crate::label::Label;
use crate::search::{BudgetExceeded, Meter};
use crate::simplicial::{MapError, Simplex, SimplicialComplex, SimplicialMap, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("projection collapses the total simplex {0:?}")]
    NotRigid(Vec<Label>),
    #[error("base vertex {vertex} has {got} vertices over it, fiber size is {expected}")]
    FiberCount { vertex: Label, got: usize, expected: usize },
    #[error("fiber coordinates over {0} are not a bijection onto the fiber")]
    FiberCoordinates(Label),
    #[error("base simplex {simplex:?} has {got} lifts, fiber size is {expected}")]
    LiftCount { simplex: Vec<Label>, got: usize, expected: usize },
    #[error("action group differs from the cocycle group")]
    GroupMismatch,
    #[error("bases differ")]
    BaseMismatch,
    #[error("total vertex {0} is given conflicting data")]
    Conflict(Label),
    #[error("no local bundle given for part {0}")]
    MissingLocal(Label),
    #[error("local bundles disagree on the overlap at {0:?}")]
    Overlap(Vec<Label>),
    #[error("map does not commute with the projections at {0}")]
    NotFiberPreserving(Label),
    #[error("map is not a bijection on the fiber over {0}")]
    NotFiberwiseBijective(Label),
    #[error("fiber coordinate {0} is outside the fiber")]
    CoordinateRange(usize),
    #[error("side face {0:?} of an attached cylinder is missing")]
    MissingFace(Vec<Label>),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// A total complex over a base in which every total simplex maps
/// isomorphically onto a base simplex and every base simplex has one lift
/// per fiber point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    projection: SimplicialMap,
    action: GroupAction,
    /// Fiber point of each total vertex.
    fiber_coord: Vec<usize>,
}

impl Bundle {
    pub fn new(projection: SimplicialMap, action: GroupAction, fiber_coord: Vec<usize>) -> Result<Self, BundleError> {
        let total = projection.source();
        let base = projection.target();
        let fiber = action.fiber_size();
        assert_eq!(fiber_coord.len(), total.vertex_count(), "one fiber coordinate per total vertex");
        if let Some(&c) = fiber_coord.iter().find(|&&c| c >= fiber) {
            return Err(BundleError::CoordinateRange(c));
        }
        for s in total.maximal() {
            if projection.image(s).len() != s.len() {
                return Err(BundleError::NotRigid(total.simplex_labels(s)));
            }
        }
        let mut over: Vec<Vec<usize>> = vec![Vec::new(); base.vertex_count()];
        for v in 0..total.vertex_count() {
            over[projection.apply(v)].push(fiber_coord[v]);
        }
        for (b, mut coords) in over.into_iter().enumerate() {
            if coords.len() != fiber {
                return Err(BundleError::FiberCount {
                    vertex: base.label(b).clone(),
                    got: coords.len(),
                    expected: fiber,
                });
            }
            coords.sort_unstable();
            if coords.iter().enumerate().any(|(i, &c)| i != c) {
                return Err(BundleError::FiberCoordinates(base.label(b).clone()));
            }
        }
        let mut lifts: HashMap<Simplex, usize> = HashMap::new();
        for s in total.all_simplices() {
            *lifts.entry(projection.image(s)).or_default() += 1;
        }
        for s in base.all_simplices() {
            let got = lifts.get(s).copied().unwrap_or(0);
            if got != fiber {
                return Err(BundleError::LiftCount { simplex: base.simplex_labels(s), got, expected: fiber });
            }
        }
        Ok(Bundle { projection, action, fiber_coord })
    }

    /// Assemble from labeled total simplices, a vertex-to-base label map and
    /// fiber coordinates keyed by total vertex label.
    pub fn from_labeled(
        total_simplices: Vec<Vec<Label>>,
        base: SimplicialComplex,
        projection: &BTreeMap<Label, Label>,
        coords: &BTreeMap<Label, usize>,
        action: GroupAction,
    ) -> Result<Self, BundleError> {
        let total = SimplicialComplex::build(total_simplices).expect("lifted simplices have distinct vertices");
        let map = SimplicialMap::from_labels(total.clone(), base, projection)?;
        let fiber_coord = total
            .labels()
            .iter()
            .map(|l| coords.get(l).copied().ok_or_else(|| BundleError::Map(MapError::Unmapped(l.clone()))))
            .collect::<Result<Vec<_>, _>>()?;
        Bundle::new(map, action, fiber_coord)
    }

    /// `base x F`, with total vertex `(b, f)`.
    pub fn product(base: &SimplicialComplex, action: &GroupAction) -> Self {
        let f = action.fiber_size();
        let mut simplices = Vec::new();
        let mut proj = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for s in base.maximal() {
            for p in 0..f {
                simplices.push(s.iter().map(|&v| Label::pair(base.label(v).clone(), Label::Int(p as i64))).collect());
            }
        }
        for b in base.labels() {
            for p in 0..f {
                let l = Label::pair(b.clone(), Label::Int(p as i64));
                proj.insert(l.clone(), b.clone());
                coords.insert(l, p);
            }
        }
        Self::from_labeled(simplices, base.clone(), &proj, &coords, action.clone()).expect("products are bundles")
    }

    pub fn total(&self) -> &SimplicialComplex {
        self.projection.source()
    }

    pub fn base(&self) -> &SimplicialComplex {
        self.projection.target()
    }

    pub fn projection(&self) -> &SimplicialMap {
        &self.projection
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn fiber_size(&self) -> usize {
        self.action.fiber_size()
    }

    pub fn fiber_coord(&self, v: VertexId) -> usize {
        self.fiber_coord[v]
    }

    pub fn fiber_coords(&self) -> &[usize] {
        &self.fiber_coord
    }

    /// Total vertices over base vertex `b`, in increasing order.
    pub fn fiber_over(&self, b: VertexId) -> Vec<VertexId> {
        (0..self.total().vertex_count()).filter(|&v| self.projection.apply(v) == b).collect()
    }

    /// Total vertex over base vertex `b` with fiber coordinate `f`.
    pub fn vertex_at(&self, b: VertexId, f: usize) -> Option<VertexId> {
        (0..self.total().vertex_count()).find(|&v| self.projection.apply(v) == b && self.fiber_coord[v] == f)
    }

    /// Total simplices lying over each base simplex.
    pub fn lifts(&self) -> HashMap<Simplex, Vec<Simplex>> {
        let mut out: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
        for s in self.total().all_simplices() {
            out.entry(self.projection.image(s)).or_default().push(s.clone());
        }
        out
    }

    /// The part of the bundle over a subcomplex of the base.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Result<Bundle, BundleError> {
        if !sub.is_subcomplex_of(self.base()) {
            return Err(BundleError::BaseMismatch);
        }
        let total = self.total();
        let base = self.base();
        let kept: Vec<Vec<Label>> = total
            .all_simplices()
            .filter(|s| sub.contains_labels(&base.simplex_labels(&self.projection.image(s))))
            .map(|s| total.simplex_labels(s))
            .collect();
        let mut proj = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for v in 0..total.vertex_count() {
            proj.insert(total.label(v).clone(), base.label(self.projection.apply(v)).clone());
            coords.insert(total.label(v).clone(), self.fiber_coord[v]);
        }
        Bundle::from_labeled(kept, sub.clone(), &proj, &coords, self.action.clone())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.total().euler_characteristic()
    }
}

/// A fiber-preserving simplicial isomorphism `a.total -> b.total` over the
/// identity of a common base, as a total vertex map; the least one in the
/// order of choices, or `None`.
///
/// Along each base component the map is fixed by a bijection of one root
/// fiber; lifts of edges carry it to neighboring fibers.
pub fn fiber_isomorphism(a: &Bundle, b: &Bundle, budget: u64) -> Result<Option<Vec<VertexId>>, BundleError> {
    if a.base() != b.base() {
        return Err(BundleError::BaseMismatch);
    }
    if a.fiber_size() != b.fiber_size() || a.total().f_vector() != b.total().f_vector() {
        return Ok(None);
    }
    let base = a.base();
    let (ta, tb) = (edge_transport(a), edge_transport(b));
    let fa: Vec<Vec<VertexId>> = (0..base.vertex_count()).map(|v| a.fiber_over(v)).collect();
    let fb: Vec<Vec<VertexId>> = (0..base.vertex_count()).map(|v| b.fiber_over(v)).collect();
    let adj = base.neighbors();
    let mut meter = Meter::new(budget);
    let mut map = vec![usize::MAX; a.total().vertex_count()];
    for comp in base.components() {
        let root = comp[0];
        let mut found = false;
        for perm in permutations(a.fiber_size()) {
            meter.tick()?;
            let mut trial = map.clone();
            for (i, &j) in perm.iter().enumerate() {
                trial[fa[root][i]] = fb[root][j];
            }
            // Carry the choice outward along edges.
            let mut queue = std::collections::VecDeque::from([root]);
            let mut seen = vec![false; base.vertex_count()];
            seen[root] = true;
            let mut consistent = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    for &x in &fa[v] {
                        let (xa, ya) = (x, ta[&(v, w)][&x]);
                        let yb = tb[&(v, w)][&trial[xa]];
                        if trial[ya] == usize::MAX {
                            trial[ya] = yb;
                        } else if trial[ya] != yb {
                            consistent = false;
                        }
                    }
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if consistent && comp.iter().all(|&v| maps_simplices(a, b, &trial, v)) {
                map = trial;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(map))
}

/// For each oriented base edge `(v, w)`: fiber vertex over `v` to the other
/// end of its lift.
fn edge_transport(b: &Bundle) -> HashMap<(VertexId, VertexId), HashMap<VertexId, VertexId>> {
    let mut out: HashMap<(VertexId, VertexId), HashMap<VertexId, VertexId>> = HashMap::new();
    let p = b.projection();
    for e in b.total().simplices(1) {
        let (x, y) = (e[0], e[1]);
        let (v, w) = (p.apply(x), p.apply(y));
        out.entry((v, w)).or_default().insert(x, y);
        out.entry((w, v)).or_default().insert(y, x);
    }
    out
}

/// Whether every total simplex of `a` over a base simplex containing `v`
/// maps to a total simplex of `b`.
fn maps_simplices(a: &Bundle, b: &Bundle, map: &[VertexId], v: VertexId) -> bool {
    a.total().maximal().iter().filter(|s| s.iter().any(|&x| a.projection.apply(x) == v)).all(|s| {
        let mut image: Simplex = s.iter().map(|&x| map[x]).collect();
        image.sort_unstable();
        b.total().contains(&image)
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out.sort();
    out
}

pub fn is_fiber_isomorphic(a: &Bundle, b: &Bundle, budget: u64) -> Result<bool, BundleError> {
    Ok(fiber_isomorphism(a, b, budget)?.is_some())
}
