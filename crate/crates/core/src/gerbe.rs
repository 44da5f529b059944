//! Transition data one level up: edge values in the base group of a crossed
//! module together with triangle witnesses in its fiber group.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cocycle::{require_good, Cochain0, CocycleError};
use crate::cover::Cover;
use crate::group::{CrossedModule, Elem, FiniteGroup};
use crate::label::Label;
use crate::search::{BudgetExceeded, Meter};
use crate::simplicial::{smith_left, IntMatrix, Overflow, SimplicialComplex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GerbeError {
    #[error("cover is not good; failing intersections: {0:?}")]
    NotGood(Vec<Vec<Label>>),
    #[error("no part is indexed {0}")]
    UnknownIndex(Label),
    #[error("indices {0:?} are not in increasing order")]
    Unordered(Vec<Label>),
    #[error("parts {0:?} have empty common intersection")]
    NotMeeting(Vec<Label>),
    #[error("element {elem} is outside a group of order {order}")]
    OutOfRange { elem: Elem, order: usize },
    #[error("no edge value for {0:?}")]
    MissingEdge(Vec<Label>),
    #[error("no witness for {0:?}")]
    MissingWitness(Vec<Label>),
    #[error("twisted triangle law fails on {0:?}")]
    Triangle(Vec<Label>),
    #[error("tetrahedron law fails on {0:?}")]
    Tetrahedron(Vec<Label>),
    #[error("gauge has {got} vertex values, cover has {expected} parts")]
    GaugeLength { got: usize, expected: usize },
    #[error("gerbes are over different covers or crossed modules")]
    Mismatch,
    #[error("abelian class needs a trivial base group and an abelian fiber group")]
    NotAbelian,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

impl From<CocycleError> for GerbeError {
    fn from(e: CocycleError) -> Self {
        match e {
            CocycleError::NotGood(f) => GerbeError::NotGood(f),
            CocycleError::Overflow(o) => GerbeError::Overflow(o),
            other => unreachable!("goodness check raised {other}"),
        }
    }
}

type Edge = (VertexId, VertexId);
type Triple = (VertexId, VertexId, VertexId);

/// Edge values and triangle witnesses with every required entry present,
/// not yet checked against the two laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeData {
    cover: Arc<Cover>,
    crossed: CrossedModule,
    edges: BTreeMap<Edge, Elem>,
    witnesses: BTreeMap<Triple, Elem>,
}

impl GerbeData {
    /// Entries keyed by index labels, in increasing order.
    pub fn new(
        cover: impl Into<Arc<Cover>>,
        crossed: CrossedModule,
        edges: &BTreeMap<(Label, Label), Elem>,
        witnesses: &BTreeMap<(Label, Label, Label), Elem>,
    ) -> Result<Self, GerbeError> {
        let cover = cover.into();
        let nerve = cover.nerve();
        let vertex = |l: &Label| {
            cover.position(l).and_then(|i| nerve.vertex_of_part(i)).ok_or_else(|| GerbeError::UnknownIndex(l.clone()))
        };
        let mut e = BTreeMap::new();
        for ((a, b), &g) in edges {
            let (u, v) = (vertex(a)?, vertex(b)?);
            if u >= v {
                return Err(GerbeError::Unordered(vec![a.clone(), b.clone()]));
            }
            e.insert((u, v), g);
        }
        let mut w = BTreeMap::new();
        for ((a, b, c), &h) in witnesses {
            let (u, v, x) = (vertex(a)?, vertex(b)?, vertex(c)?);
            if !(u < v && v < x) {
                return Err(GerbeError::Unordered(vec![a.clone(), b.clone(), c.clone()]));
            }
            w.insert((u, v, x), h);
        }
        Self::from_nerve_values(cover, crossed, e, w)
    }

    pub fn from_nerve_values(
        cover: impl Into<Arc<Cover>>,
        crossed: CrossedModule,
        edges: BTreeMap<Edge, Elem>,
        witnesses: BTreeMap<Triple, Elem>,
    ) -> Result<Self, GerbeError> {
        let cover = cover.into();
        let n = cover.nerve().complex();
        let names = |s: &[VertexId]| n.simplex_labels(s);
        let (g_order, h_order) = (crossed.base().order(), crossed.fiber().order());
        for (&(a, b), &g) in &edges {
            if a >= b {
                return Err(GerbeError::Unordered(names(&[a, b])));
            }
            if !n.contains(&[a, b]) {
                return Err(GerbeError::NotMeeting(names(&[a, b])));
            }
            if g >= g_order {
                return Err(GerbeError::OutOfRange { elem: g, order: g_order });
            }
        }
        for (&(a, b, c), &h) in &witnesses {
            if !(a < b && b < c) {
                return Err(GerbeError::Unordered(names(&[a, b, c])));
            }
            if !n.contains(&[a, b, c]) {
                return Err(GerbeError::NotMeeting(names(&[a, b, c])));
            }
            if h >= h_order {
                return Err(GerbeError::OutOfRange { elem: h, order: h_order });
            }
        }
        if let Some(e) = n.simplices(1).iter().find(|e| !edges.contains_key(&(e[0], e[1]))) {
            return Err(GerbeError::MissingEdge(names(e)));
        }
        if let Some(t) = n.simplices(2).iter().find(|t| !witnesses.contains_key(&(t[0], t[1], t[2]))) {
            return Err(GerbeError::MissingWitness(names(t)));
        }
        Ok(GerbeData { cover, crossed, edges, witnesses })
    }

    /// Identity edge values and witnesses.
    pub fn identity(cover: impl Into<Arc<Cover>>, crossed: CrossedModule) -> Self {
        let cover = cover.into();
        let n = cover.nerve().complex();
        let edges = n.simplices(1).iter().map(|e| ((e[0], e[1]), 0)).collect();
        let witnesses = n.simplices(2).iter().map(|t| ((t[0], t[1], t[2]), 0)).collect();
        GerbeData { cover, crossed, edges, witnesses }
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn crossed_module(&self) -> &CrossedModule {
        &self.crossed
    }

    pub fn nerve(&self) -> &SimplicialComplex {
        self.cover.nerve().complex()
    }

    pub fn edge(&self, a: VertexId, b: VertexId) -> Elem {
        self.edges[&(a, b)]
    }

    pub fn witness(&self, a: VertexId, b: VertexId, c: VertexId) -> Elem {
        self.witnesses[&(a, b, c)]
    }

    pub fn edges(&self) -> &BTreeMap<Edge, Elem> {
        &self.edges
    }

    pub fn witnesses(&self) -> &BTreeMap<Triple, Elem> {
        &self.witnesses
    }

    pub fn labeled_edges(&self) -> BTreeMap<(Label, Label), Elem> {
        let n = self.nerve();
        self.edges.iter().map(|(&(a, b), &g)| ((n.label(a).clone(), n.label(b).clone()), g)).collect()
    }

    pub fn labeled_witnesses(&self) -> BTreeMap<(Label, Label, Label), Elem> {
        let n = self.nerve();
        self.witnesses
            .iter()
            .map(|(&(a, b, c), &h)| ((n.label(a).clone(), n.label(b).clone(), n.label(c).clone()), h))
            .collect()
    }

    /// Replace one witness, keeping the shape valid.
    pub fn with_witness(mut self, t: Triple, h: Elem) -> Self {
        assert!(self.witnesses.contains_key(&t), "not a nerve triangle");
        assert!(h < self.crossed.fiber().order(), "witness out of range");
        self.witnesses.insert(t, h);
        self
    }

    /// `g_ab g_bc = d(c_abc) g_ac`
    fn triangle_holds(&self, t: &[VertexId]) -> bool {
        let (a, b, c) = (t[0], t[1], t[2]);
        let g = self.crossed.base();
        g.mul(self.edge(a, b), self.edge(b, c)) == g.mul(self.crossed.boundary(self.witness(a, b, c)), self.edge(a, c))
    }

    /// `c_abc c_acd = (g_ab . c_bcd) c_abd`
    fn tetrahedron_holds(&self, q: &[VertexId]) -> bool {
        let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
        let h = self.crossed.fiber();
        h.mul(self.witness(a, b, c), self.witness(a, c, d))
            == h.mul(self.crossed.act(self.edge(a, b), self.witness(b, c, d)), self.witness(a, b, d))
    }

    pub fn first_triangle_violation(&self) -> Option<Vec<Label>> {
        let n = self.nerve();
        n.simplices(2).iter().find(|t| !self.triangle_holds(t)).map(|t| n.simplex_labels(t))
    }

    pub fn first_tetrahedron_violation(&self) -> Option<Vec<Label>> {
        let n = self.nerve();
        n.simplices(3).iter().find(|q| !self.tetrahedron_holds(q)).map(|q| n.simplex_labels(q))
    }

    /// Check goodness and both laws.
    pub fn validate(self) -> Result<GerbeCocycle, GerbeError> {
        require_good(&self.cover)?;
        if let Some(t) = self.first_triangle_violation() {
            return Err(GerbeError::Triangle(t));
        }
        if let Some(q) = self.first_tetrahedron_violation() {
            return Err(GerbeError::Tetrahedron(q));
        }
        Ok(GerbeCocycle(self))
    }
}

/// Gerbe data satisfying the twisted triangle and tetrahedron laws over a
/// good cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeCocycle(GerbeData);

impl std::ops::Deref for GerbeCocycle {
    type Target = GerbeData;

    fn deref(&self) -> &GerbeData {
        &self.0
    }
}

impl GerbeCocycle {
    pub fn into_data(self) -> GerbeData {
        self.0
    }

    /// Apply the gauge `(lambda, m)`: with `k_ab = l_a g_ab l_b^-1`,
    /// `g'_ab = d(m_ab) k_ab` and
    /// `c'_abc = m_ab (k_ab . m_bc) (l_a . c_abc) m_ac^-1`.
    pub fn coboundary(&self, gauge: &GerbeGauge) -> Result<GerbeCocycle, GerbeError> {
        if gauge.lambda.values.len() != self.cover.len() {
            return Err(GerbeError::GaugeLength { got: gauge.lambda.values.len(), expected: self.cover.len() });
        }
        let (g_order, h_order) = (self.crossed.base().order(), self.crossed.fiber().order());
        if let Some(&elem) = gauge.lambda.values.iter().find(|&&x| x >= g_order) {
            return Err(GerbeError::OutOfRange { elem, order: g_order });
        }
        if let Some(&elem) = gauge.m.values().find(|&&x| x >= h_order) {
            return Err(GerbeError::OutOfRange { elem, order: h_order });
        }
        let nerve = self.cover.nerve();
        let lambda: Vec<Elem> =
            (0..self.nerve().vertex_count()).map(|v| gauge.lambda.values[nerve.part_index(v)]).collect();
        let m = |a: VertexId, b: VertexId| gauge.m.get(&(a, b)).copied().unwrap_or(0);
        let t = Transform { data: self, lambda: &lambda };
        let edges = self.edges.keys().map(|&(a, b)| ((a, b), t.edge(a, b, m(a, b)))).collect();
        let witnesses = self
            .witnesses
            .keys()
            .map(|&(a, b, c)| ((a, b, c), t.witness(a, b, c, m(a, b), m(b, c), m(a, c))))
            .collect();
        GerbeData::from_nerve_values(self.cover.clone(), self.crossed.clone(), edges, witnesses)?.validate()
    }

    /// With a trivial base group the witnesses form a Cech 2-cocycle of the
    /// nerve with coefficients in the abelian fiber group; this returns its
    /// cohomology class.
    pub fn abelian_class(&self) -> Result<AbelianClass, GerbeError> {
        let (g, h) = (self.crossed.base(), self.crossed.fiber());
        if g.order() != 1 || !h.is_abelian() {
            return Err(GerbeError::NotAbelian);
        }
        let factors = cyclic_decomposition(h)?;
        let nerve = self.nerve();
        let cc = nerve.chain_complex();
        let coboundary = |k: usize| -> IntMatrix {
            // Transposed boundary out of degree k + 1.
            match cc.boundary(k + 1) {
                Some(d) => d.to_dense().transpose(),
                None => IntMatrix::zeros(0, nerve.simplices(k).len()),
            }
        };
        let (d1, d2) = (coboundary(1), coboundary(2));
        let (diag1, left1) = smith_left(&d1)?;
        let (diag2, _) = smith_left(&d2)?;
        let triangles = nerve.simplices(2);
        let mut residues = Vec::new();
        let mut radices = Vec::new();
        let mut class_count: u128 = 1;
        for (coords, d) in &factors.coordinates {
            let d = *d as i128;
            let z: Vec<i128> = triangles.iter().map(|t| coords[self.witness(t[0], t[1], t[2])] as i128).collect();
            let w = left1.mul_vec(&z)?;
            for (i, wi) in w.iter().enumerate() {
                let r = gcd(diag1.get(i).copied().unwrap_or(0), d);
                residues.push(wi.rem_euclid(r) as u64);
                radices.push(r as u64);
            }
            // |H^2| = |Z^2| / |B^2| with |im A mod d| = prod d / gcd(a_i, d).
            let image = |diag: &[i128]| -> u128 { diag.iter().map(|&a| (d / gcd(a, d)) as u128).product() };
            let cocycles = (d as u128).pow(triangles.len() as u32) / image(&diag2);
            class_count *= cocycles / image(&diag1);
        }
        let index = residues.iter().zip(&radices).fold(0u128, |acc, (&r, &b)| acc * b as u128 + r as u128);
        Ok(AbelianClass { index, class_count, residues })
    }

    /// Re-derive the tetrahedron law by pasting the 2-cells of each
    /// quadruple along both routes from `g_ab g_bc g_cd` to `g_ad`.
    pub fn check_coherence_faces(&self) -> bool {
        check_coherence_faces(&self.0)
    }
}

/// Two-cell pasting check, usable on data that may violate either law. The
/// result agrees with the tetrahedron law on every input.
pub fn check_coherence_faces(data: &GerbeData) -> bool {
    let xm = &data.crossed;
    let g = xm.base();
    let h = xm.fiber();
    // Triangle 2-cell from g_ab g_bc to g_ac.
    let cell = |a: VertexId, b: VertexId, c: VertexId| TwoCell {
        witness: h.inv(data.witness(a, b, c)),
        source: g.mul(data.edge(a, b), data.edge(b, c)),
    };
    data.nerve().simplices(3).iter().all(|q| {
        let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
        let left = cell(a, c, d).after(&cell(a, b, c).whisker_right(data.edge(c, d), g), h);
        let right = cell(a, b, d).after(&cell(b, c, d).whisker_left(data.edge(a, b), xm), h);
        left.witness == right.witness
    })
}

/// A 2-cell `source => d(witness) source` of the strict 2-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TwoCell {
    witness: Elem,
    source: Elem,
}

impl TwoCell {
    fn whisker_right(self, y: Elem, g: &FiniteGroup) -> TwoCell {
        TwoCell { witness: self.witness, source: g.mul(self.source, y) }
    }

    fn whisker_left(self, y: Elem, xm: &CrossedModule) -> TwoCell {
        TwoCell { witness: xm.act(y, self.witness), source: xm.base().mul(y, self.source) }
    }

    /// Vertical composite: `self` after `first`.
    fn after(self, first: &TwoCell, h: &FiniteGroup) -> TwoCell {
        TwoCell { witness: h.mul(self.witness, first.witness), source: first.source }
    }
}

struct Transform<'a> {
    data: &'a GerbeData,
    lambda: &'a [Elem],
}

impl Transform<'_> {
    fn k(&self, a: VertexId, b: VertexId) -> Elem {
        let g = self.data.crossed.base();
        g.mul(g.mul(self.lambda[a], self.data.edge(a, b)), g.inv(self.lambda[b]))
    }

    fn edge(&self, a: VertexId, b: VertexId, m_ab: Elem) -> Elem {
        self.data.crossed.base().mul(self.data.crossed.boundary(m_ab), self.k(a, b))
    }

    fn witness(&self, a: VertexId, b: VertexId, c: VertexId, m_ab: Elem, m_bc: Elem, m_ac: Elem) -> Elem {
        let xm = &self.data.crossed;
        let h = xm.fiber();
        h.product_of([
            m_ab,
            xm.act(self.k(a, b), m_bc),
            xm.act(self.lambda[a], self.data.witness(a, b, c)),
            h.inv(m_ac),
        ])
    }
}

/// Vertex values (indexed by cover position) and edge values (keyed by
/// nerve vertex pairs; absent entries are the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeGauge {
    pub lambda: Cochain0,
    pub m: BTreeMap<Edge, Elem>,
}

impl GerbeGauge {
    pub fn identity(cover: &Cover) -> Self {
        GerbeGauge { lambda: Cochain0::constant(cover, 0), m: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AbelianClass {
    /// Zero exactly for the trivial class.
    pub index: u128,
    /// Order of the second Cech cohomology group of the nerve.
    pub class_count: u128,
    pub residues: Vec<u64>,
}

/// Coordinates of each element of a finite abelian group in a product of
/// cyclic groups.
struct CyclicDecomposition {
    /// Per cyclic factor of order > 1: the coordinate of every element and
    /// the factor's order.
    coordinates: Vec<(Vec<u64>, u64)>,
}

/// Present the group on one generator per element with relations
/// `e_x + e_y - e_xy`; the right Smith transform gives the coordinates.
fn cyclic_decomposition(h: &FiniteGroup) -> Result<CyclicDecomposition, Overflow> {
    let n = h.order();
    let mut rows = Vec::with_capacity(n * n);
    for x in h.elements() {
        for y in h.elements() {
            let mut r = vec![0i64; n];
            r[x] += 1;
            r[y] += 1;
            r[h.mul(x, y)] -= 1;
            rows.push(r);
        }
    }
    let snf = crate::simplicial::smith_normal_form(&IntMatrix::from_rows(&rows))?;
    let coordinates = snf
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(i, &d)| {
            let coords = h.elements().map(|x| snf.right.get(x, i).rem_euclid(d) as u64).collect();
            (coords, d as u64)
        })
        .collect();
    Ok(CyclicDecomposition { coordinates })
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Search for a gauge carrying `d1` to `d2`: vertex values first, then edge
/// values, each in increasing order, so the first hit is the least witness.
pub fn gerbes_equivalent(d1: &GerbeCocycle, d2: &GerbeCocycle, budget: u64) -> Result<Option<GerbeGauge>, GerbeError> {
    if d1.cover != d2.cover || d1.crossed != d2.crossed {
        return Err(GerbeError::Mismatch);
    }
    let nerve = d1.nerve();
    let n = nerve.vertex_count();
    let edges: Vec<Edge> = d1.edges.keys().copied().collect();
    let mut search = GaugeSearch {
        d1,
        d2,
        lambda: vec![0; n],
        m: BTreeMap::new(),
        edges,
        triangles_closing: BTreeMap::new(),
        meter: Meter::new(budget),
    };
    // A triangle a < b < c is checked once (b, c), its last edge, is set.
    for t in nerve.simplices(2) {
        search.triangles_closing.entry((t[1], t[2])).or_default().push((t[0], t[1], t[2]));
    }
    if !search.vertex(0)? {
        return Ok(None);
    }
    let mut lambda = vec![0; d1.cover.len()];
    for v in 0..n {
        lambda[d1.cover.nerve().part_index(v)] = search.lambda[v];
    }
    let m = search.m.into_iter().filter(|&(_, h)| h != 0).collect();
    Ok(Some(GerbeGauge { lambda: Cochain0::new(lambda), m }))
}

struct GaugeSearch<'a> {
    d1: &'a GerbeCocycle,
    d2: &'a GerbeCocycle,
    lambda: Vec<Elem>,
    m: BTreeMap<Edge, Elem>,
    edges: Vec<Edge>,
    triangles_closing: BTreeMap<Edge, Vec<Triple>>,
    meter: Meter,
}

impl GaugeSearch<'_> {
    fn transform(&self) -> Transform<'_> {
        Transform { data: &self.d1.0, lambda: &self.lambda }
    }

    fn vertex(&mut self, v: VertexId) -> Result<bool, BudgetExceeded> {
        if v == self.lambda.len() {
            return self.edge(0);
        }
        let xm = &self.d1.crossed;
        for x in xm.base().elements() {
            self.meter.tick()?;
            self.lambda[v] = x;
            // Every edge into v must be reachable by some d(m).
            let reachable = self.edges.iter().filter(|e| e.1 == v).all(|&(a, b)| {
                let target = self.d2.edge(a, b);
                let k = self.transform().k(a, b);
                let needed = xm.base().mul(target, xm.base().inv(k));
                xm.fiber().elements().any(|h| xm.boundary(h) == needed)
            });
            if reachable && self.vertex(v + 1)? {
                return Ok(true);
            }
        }
        self.lambda[v] = 0;
        Ok(false)
    }

    fn edge(&mut self, i: usize) -> Result<bool, BudgetExceeded> {
        let Some(&(a, b)) = self.edges.get(i) else { return Ok(true) };
        let xm = &self.d1.crossed;
        for h in xm.fiber().elements() {
            self.meter.tick()?;
            if self.transform().edge(a, b, h) != self.d2.edge(a, b) {
                continue;
            }
            self.m.insert((a, b), h);
            let closes = self.triangles_closing.get(&(a, b)).cloned().unwrap_or_default();
            let ok = closes.iter().all(|&(x, y, z)| {
                let t = self.transform();
                t.witness(x, y, z, self.m[&(x, y)], self.m[&(y, z)], self.m[&(x, z)]) == self.d2.witness(x, y, z)
            });
            if ok && self.edge(i + 1)? {
                return Ok(true);
            }
            self.m.remove(&(a, b));
        }
        Ok(false)
    }
}
