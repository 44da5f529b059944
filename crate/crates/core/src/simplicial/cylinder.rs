use super::complex::{SimplicialComplex, SimplicialMap, VertexId};
use crate::label::Label;

/// Simplicial mapping cylinder of a map `f: X -> Y`.
///
/// Vertex `(0, x)` is the copy of `x` at end 0 and `(1, y)` the copy of `y`
/// at end 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingCylinder {
    pub complex: SimplicialComplex,
    pub source_end: SimplicialMap,
    pub target_end: SimplicialMap,
}

/// Prism triangulation of `X x [0,1]` using the label order on `X`, with the
/// end-1 copy collapsed onto `Y` along `f`.
pub fn mapping_cylinder(f: &SimplicialMap) -> MappingCylinder {
    let rank: Vec<usize> = (0..f.source().vertex_count()).collect();
    mapping_cylinder_ordered(f, &rank)
}

/// As [`mapping_cylinder`], with the prism built from the vertex order given
/// by `rank` (vertex `v` is the `rank[v]`-th vertex). `rank` must be a
/// permutation of `0..n`.
pub fn mapping_cylinder_ordered(f: &SimplicialMap, rank: &[usize]) -> MappingCylinder {
    let source = f.source();
    let target = f.target();
    assert_eq!(rank.len(), source.vertex_count(), "rank must order every source vertex");
    let bottom = |v: VertexId| Label::tagged(0, source.label(v).clone());
    let top = |w: VertexId| Label::tagged(1, target.label(w).clone());

    let mut declared: Vec<Vec<Label>> = Vec::new();
    for s in source.maximal() {
        let mut ordered = s.clone();
        ordered.sort_by_key(|&v| rank[v]);
        for i in 0..ordered.len() {
            let mut prism: Vec<Label> = ordered[..=i].iter().map(|&v| bottom(v)).collect();
            let mut images: Vec<VertexId> = ordered[i..].iter().map(|&v| f.apply(v)).collect();
            images.sort_unstable();
            images.dedup();
            prism.extend(images.into_iter().map(top));
            declared.push(prism);
        }
    }
    declared.extend(target.maximal().iter().map(|s| s.iter().map(|&w| top(w)).collect()));
    let complex = SimplicialComplex::from_labeled(declared);

    let source_end = SimplicialMap::new(
        source.clone(),
        complex.clone(),
        (0..source.vertex_count()).map(|v| complex.vertex(&bottom(v)).unwrap()).collect(),
    )
    .expect("end 0 embeds");
    let target_end = SimplicialMap::new(
        target.clone(),
        complex.clone(),
        (0..target.vertex_count()).map(|w| complex.vertex(&top(w)).unwrap()).collect(),
    )
    .expect("end 1 embeds");
    MappingCylinder { complex, source_end, target_end }
}

/// Order-based prism triangulation of `X x [0,1]`.
pub fn prism(x: &SimplicialComplex) -> MappingCylinder {
    mapping_cylinder(&SimplicialMap::identity(x))
}
