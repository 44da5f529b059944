use std::collections::HashMap;

use super::complex::{Simplex, SimplicialComplex, SimplicialMap, VertexId};
use crate::label::Label;

/// First barycentric subdivision together with the carrier of each new vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// `carrier[v]` is the simplex of the original complex that vertex `v`
    /// of the subdivision stands for.
    pub carrier: Vec<Simplex>,
}

impl Subdivision {
    /// Simplicial map to the original complex sending each barycenter to the
    /// largest vertex of its carrier. It is a homotopy equivalence.
    pub fn last_vertex_map(&self, original: &SimplicialComplex) -> SimplicialMap {
        let vm = self.carrier.iter().map(|s| *s.last().expect("nonempty carrier")).collect();
        SimplicialMap::new(self.complex.clone(), original.clone(), vm)
            .expect("chains of faces map onto faces of the top simplex")
    }
}

/// Vertices are the simplices of `x`; simplices are chains under inclusion.
/// Each new vertex is labeled by the tuple of its carrier's labels.
pub fn barycentric_subdivision(x: &SimplicialComplex) -> Subdivision {
    let mut flags: Vec<Vec<Label>> = Vec::new();
    for top in x.maximal() {
        for order in permutations(top) {
            let flag = (1..=order.len())
                .map(|n| {
                    let mut face: Simplex = order[..n].to_vec();
                    face.sort_unstable();
                    Label::Tuple(x.simplex_labels(&face))
                })
                .collect();
            flags.push(flag);
        }
    }
    let complex = SimplicialComplex::from_labeled(flags);
    let by_label: HashMap<Label, Simplex> =
        x.all_simplices().map(|s| (Label::Tuple(x.simplex_labels(s)), s.clone())).collect();
    let carrier = complex.labels().iter().map(|l| by_label[l].clone()).collect();
    Subdivision { complex, carrier }
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_becomes_path() {
        let x = SimplicialComplex::build([["a", "b"]]).unwrap();
        let sd = barycentric_subdivision(&x);
        assert_eq!(sd.complex.f_vector(), vec![3, 2]);
    }

    #[test]
    fn hollow_triangle_becomes_hexagon() {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let sd = barycentric_subdivision(&x);
        assert_eq!(sd.complex.f_vector(), vec![6, 6]);
        assert_eq!(sd.complex.homology(1).unwrap().betti(), vec![1, 1]);
    }

    #[test]
    fn point_is_fixed() {
        let sd = barycentric_subdivision(&SimplicialComplex::point("p"));
        assert_eq!(sd.complex.f_vector(), vec![1]);
        assert_eq!(sd.carrier, vec![vec![0]]);
    }

    #[test]
    fn triangle_flags() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        let sd = barycentric_subdivision(&x);
        assert_eq!(sd.complex.f_vector(), vec![7, 12, 6]);
        assert!(sd.last_vertex_map(&x).induces_homology_isomorphism().unwrap());
    }
}
