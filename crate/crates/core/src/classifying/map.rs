use std::collections::BTreeMap;

use super::bar::{bar_face, BarComplex};
use super::ClassifyingError;
use crate::cocycle::Cocycle1;
use crate::group::{Elem, FiniteGroup};
use crate::simplicial::{Simplex, SimplicialComplex, SparseMatrix, VertexId};

/// Map from a nerve to the bar construction: the simplex `a_0 < ... < a_k`
/// goes to `(g_{a_0 a_1}, ..., g_{a_{k-1} a_k})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyingMap {
    nerve: SimplicialComplex,
    group: FiniteGroup,
    images: BTreeMap<Simplex, Vec<Elem>>,
}

impl ClassifyingMap {
    /// From raw edge values keyed by increasing nerve vertex pairs. The
    /// values need not satisfy the cocycle law; [`Self::is_simplicial`]
    /// reports whether they do.
    pub fn from_edge_values(
        nerve: &SimplicialComplex,
        group: &FiniteGroup,
        values: &BTreeMap<(VertexId, VertexId), Elem>,
        dimension: usize,
    ) -> Result<Self, ClassifyingError> {
        if let Some(d) = nerve.dimension().filter(|&d| d > dimension) {
            return Err(ClassifyingError::Truncation { nerve: d, bar: dimension });
        }
        let mut images = BTreeMap::new();
        for s in nerve.all_simplices() {
            let tuple = s
                .windows(2)
                .map(|w| {
                    let g = *values
                        .get(&(w[0], w[1]))
                        .ok_or_else(|| ClassifyingError::MissingEdge(nerve.simplex_labels(w)))?;
                    if g >= group.order() {
                        return Err(ClassifyingError::OutOfRange(g));
                    }
                    Ok(g)
                })
                .collect::<Result<Vec<_>, _>>()?;
            images.insert(s.clone(), tuple);
        }
        Ok(ClassifyingMap { nerve: nerve.clone(), group: group.clone(), images })
    }

    pub fn nerve(&self) -> &SimplicialComplex {
        &self.nerve
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The bar tuple of a nerve simplex.
    pub fn image(&self, s: &[VertexId]) -> &[Elem] {
        &self.images[s]
    }

    /// The least simplex and face index at which the faces of the image
    /// differ from the image of the face.
    pub fn first_face_violation(&self) -> Option<(Simplex, usize)> {
        for (s, tuple) in &self.images {
            if s.len() < 2 {
                continue;
            }
            for index in 0..s.len() {
                let mut face = s.clone();
                face.remove(index);
                if bar_face(&self.group, tuple, index) != self.images[&face] {
                    return Some((s.clone(), index));
                }
            }
        }
        None
    }

    pub fn is_simplicial(&self) -> bool {
        self.first_face_violation().is_none()
    }

    /// Degree-`k` chain map from the nerve's simplicial chains to normalized
    /// bar chains; simplices with an identity entry go to zero.
    pub fn chain_map(&self, bar: &BarComplex, k: usize) -> SparseMatrix {
        let columns = self
            .nerve
            .simplices(k)
            .iter()
            .map(|s| bar.index(&self.images[s]).map(|r| vec![(r, 1)]).unwrap_or_default())
            .collect();
        SparseMatrix::from_columns(bar.rank(k), columns)
    }

    /// Image in normalized bar 1-chains of an edge loop in the nerve.
    pub fn loop_image(&self, bar: &BarComplex, path: &[VertexId]) -> Vec<i128> {
        let mut chain = vec![0i128; bar.rank(1)];
        for w in path.windows(2) {
            let (edge, sign) = if w[0] < w[1] { ([w[0], w[1]], 1) } else { ([w[1], w[0]], -1) };
            if let Some(r) = bar.index(&self.images[&edge[..]]) {
                chain[r] += sign;
            }
        }
        chain
    }
}

pub fn classifying_map(c: &Cocycle1, dimension: usize) -> Result<ClassifyingMap, ClassifyingError> {
    let map = ClassifyingMap::from_edge_values(c.nerve(), c.group(), c.nerve_values(), dimension)?;
    debug_assert!(map.is_simplicial(), "validated cocycles give simplicial maps");
    Ok(map)
}

/// Whether two classifying maps on the same nerve agree on degree-1
/// homology, tested on the generator loops of the nerve's edge-path group.
pub fn same_degree1_action(a: &ClassifyingMap, b: &ClassifyingMap, bar: &BarComplex) -> Result<bool, ClassifyingError> {
    if a.nerve != b.nerve || a.group != b.group || &a.group != bar.group() {
        return Err(ClassifyingError::Mismatch);
    }
    let Some(root) = (0..a.nerve.vertex_count()).next() else {
        return Ok(true);
    };
    let p = crate::simplicial::pi1_presentation(&a.nerve, root)?;
    for i in 0..p.generator_count() {
        let path = p.generator_loop(i);
        let diff: Vec<i128> =
            a.loop_image(bar, &path).iter().zip(b.loop_image(bar, &path)).map(|(x, y)| x - y).collect();
        if !bar.chain_complex().is_boundary(1, &diff)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifying::bar_construction;
    use crate::cover::star_cover;
    use crate::label::Label;
    use std::sync::Arc;

    fn circle_cocycle(ac: Elem) -> Cocycle1 {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let mut v = BTreeMap::new();
        v.insert((Label::name("a"), Label::name("b")), 0);
        v.insert((Label::name("b"), Label::name("c")), 0);
        v.insert((Label::name("a"), Label::name("c")), ac);
        Cocycle1::new(Arc::new(star_cover(&x)), FiniteGroup::cyclic(2), &v).unwrap()
    }

    #[test]
    fn trivial_cocycle_is_constant() {
        let m = classifying_map(&circle_cocycle(0), 4).unwrap();
        let bar = bar_construction(m.group(), 4);
        for k in 1..=2 {
            assert!(m.chain_map(&bar, k).is_zero());
        }
    }

    #[test]
    fn loop_goes_to_the_generator() {
        let m = classifying_map(&circle_cocycle(1), 4).unwrap();
        let bar = bar_construction(m.group(), 4);
        // Fundamental cycle a -> b -> c -> a.
        let z = m.loop_image(&bar, &[0, 1, 2, 0]);
        assert_eq!(z, vec![-1]);
        assert!(!bar.chain_complex().is_boundary(1, &z).unwrap());
        let doubled: Vec<i128> = z.iter().map(|x| 2 * x).collect();
        assert!(bar.chain_complex().is_boundary(1, &doubled).unwrap());
    }

    #[test]
    fn broken_values_fail_the_face_check() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        let g = FiniteGroup::cyclic(3);
        let mut values = BTreeMap::new();
        values.insert((0, 1), 1);
        values.insert((1, 2), 1);
        values.insert((0, 2), 2);
        assert!(ClassifyingMap::from_edge_values(&x, &g, &values, 4).unwrap().is_simplicial());
        values.insert((0, 2), 1);
        let m = ClassifyingMap::from_edge_values(&x, &g, &values, 4).unwrap();
        assert_eq!(m.first_face_violation(), Some((vec![0, 1, 2], 1)));
    }

    #[test]
    fn truncation_is_enforced() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        let values = [((0, 1), 0), ((1, 2), 0), ((0, 2), 0)].into_iter().collect();
        let err = ClassifyingMap::from_edge_values(&x, &FiniteGroup::cyclic(2), &values, 1).unwrap_err();
        assert_eq!(err, ClassifyingError::Truncation { nerve: 2, bar: 1 });
    }

    #[test]
    fn gauge_change_keeps_the_degree_one_action() {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"], ["a", "c"]]).unwrap();
        let cover = Arc::new(star_cover(&x));
        let g = FiniteGroup::symmetric(3);
        let c = Cocycle1::from_homomorphism(cover, g.clone(), &[1, 3]).unwrap();
        let moved = c.coboundary_transform(&crate::cocycle::Cochain0::new(vec![2, 5, 0, 4])).unwrap();
        let bar = bar_construction(&g, 2);
        let (m1, m2) = (classifying_map(&c, 4).unwrap(), classifying_map(&moved, 4).unwrap());
        assert!(same_degree1_action(&m1, &m2, &bar).unwrap());
        let other = Cocycle1::from_homomorphism(c.cover().clone(), g.clone(), &[3, 3]).unwrap();
        assert!(!same_degree1_action(&m1, &classifying_map(&other, 4).unwrap(), &bar).unwrap());
    }
}
