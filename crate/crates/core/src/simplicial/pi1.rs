use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::complex::{SimplicialComplex, VertexId};
use crate::group::{Elem, FiniteGroup, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pi1Error {
    #[error("complex is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("basepoint {0} is not a vertex")]
    UnknownBasepoint(VertexId),
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }
}

/// Edge-path presentation of the fundamental group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Presentation {
    pub basepoint: VertexId,
    /// Edge `[u, v]` (with `u < v`) read by each generator.
    pub generators: Vec<[VertexId; 2]>,
    pub relations: Vec<Vec<Letter>>,
    /// Parent of each vertex in the spanning tree; `None` at the basepoint.
    pub tree_parent: Vec<Option<VertexId>>,
}

impl Pi1Presentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Generator reading edge `[u, v]`, if it is not a tree edge.
    pub fn generator_of(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let key = [u.min(v), u.max(v)];
        self.generators.iter().position(|&e| e == key)
    }

    /// Tree path from the basepoint to `v`, both ends included.
    pub fn tree_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut at = v;
        while let Some(p) = self.tree_parent[at] {
            path.push(p);
            at = p;
        }
        path.reverse();
        path
    }

    /// Closed edge path at the basepoint representing generator `i`: out
    /// along the tree, across the edge, and back.
    pub fn generator_loop(&self, i: usize) -> Vec<VertexId> {
        let [u, v] = self.generators[i];
        let mut path = self.tree_path(u);
        let mut back = self.tree_path(v);
        back.reverse();
        path.extend(back);
        path
    }

    /// Evaluate a word under the given generator images.
    pub fn evaluate(&self, word: &[Letter], images: &[Elem], group: &FiniteGroup) -> Elem {
        word.iter().fold(group.identity(), |acc, l| {
            let x = images[l.generator];
            group.mul(acc, if l.inverse { group.inv(x) } else { x })
        })
    }

    /// Word read along an edge path, tree edges dropped.
    pub fn read_path(&self, path: &[VertexId]) -> Vec<Letter> {
        path.windows(2)
            .filter(|w| w[0] != w[1])
            .filter_map(|w| {
                let g = self.generator_of(w[0], w[1])?;
                Some(if w[0] < w[1] { Letter::new(g) } else { Letter::new(g).inv() })
            })
            .collect()
    }
}

/// Spanning tree by breadth-first search from `basepoint`, visiting
/// neighbors in increasing order. Generators are the remaining edges in
/// lexicographic order; each 2-simplex `[a, b, c]` contributes the word
/// `ab . bc . (ac)^-1`.
pub fn pi1_presentation(x: &SimplicialComplex, basepoint: VertexId) -> Result<Pi1Presentation, Pi1Error> {
    if basepoint >= x.vertex_count() {
        return Err(Pi1Error::UnknownBasepoint(basepoint));
    }
    let components = x.components().len();
    if components != 1 {
        return Err(Pi1Error::Disconnected(components));
    }
    let adj = x.neighbors();
    let mut tree_parent = vec![None; x.vertex_count()];
    let mut seen = vec![false; x.vertex_count()];
    seen[basepoint] = true;
    let mut queue = VecDeque::from([basepoint]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                tree_parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    let is_tree = |u: VertexId, v: VertexId| tree_parent[u] == Some(v) || tree_parent[v] == Some(u);
    let generators: Vec<[VertexId; 2]> =
        x.simplices(1).iter().filter(|e| !is_tree(e[0], e[1])).map(|e| [e[0], e[1]]).collect();
    let index: BTreeMap<[VertexId; 2], usize> = generators.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let letter = |u: VertexId, v: VertexId| index.get(&[u, v]).map(|&g| Letter::new(g));

    let relations = x
        .simplices(2)
        .iter()
        .map(|t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            [letter(a, b), letter(b, c), letter(a, c).map(Letter::inv)].into_iter().flatten().collect()
        })
        .collect();
    Ok(Pi1Presentation { basepoint, generators, relations, tree_parent })
}

/// All generator-image tuples satisfying every relation, in lexicographic
/// order.
pub fn enumerate_homs(p: &Pi1Presentation, group: &FiniteGroup) -> Vec<GroupHom> {
    let n = p.generator_count();
    // Relations are checked as soon as their largest generator is assigned.
    let mut due: Vec<Vec<&[Letter]>> = vec![Vec::new(); n.max(1)];
    for r in &p.relations {
        if let Some(g) = r.iter().map(|l| l.generator).max() {
            due[g].push(r);
        }
    }
    let mut out = Vec::new();
    let mut images = vec![0; n];
    fn go(
        i: usize,
        images: &mut Vec<Elem>,
        p: &Pi1Presentation,
        group: &FiniteGroup,
        due: &[Vec<&[Letter]>],
        out: &mut Vec<GroupHom>,
    ) {
        if i == images.len() {
            out.push(images.clone());
            return;
        }
        for x in group.elements() {
            images[i] = x;
            if due[i].iter().all(|r| p.evaluate(r, images, group) == group.identity()) {
                go(i + 1, images, p, group, due, out);
            }
        }
    }
    go(0, &mut images, p, group, &due, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn presentation(gens: usize, relations: Vec<Vec<Letter>>) -> Pi1Presentation {
        Pi1Presentation {
            basepoint: 0,
            generators: (0..gens).map(|i| [i, i + 1]).collect(),
            relations,
            tree_parent: vec![None],
        }
    }

    #[test]
    fn full_triangle_kills_its_generator() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        let p = pi1_presentation(&x, 0).unwrap();
        assert_eq!(p.generator_count(), 1);
        assert_eq!(p.relations, vec![vec![Letter::new(0)]]);
        assert_eq!(enumerate_homs(&p, &FiniteGroup::symmetric(3)), vec![vec![0]]);
    }

    #[test]
    fn hollow_triangle_is_free_on_one() {
        let x = SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let p = pi1_presentation(&x, 0).unwrap();
        assert_eq!(p.generator_count(), 1);
        assert!(p.relations.is_empty());
        assert_eq!(p.generators, vec![[1, 2]]);
        assert_eq!(p.generator_loop(0), vec![0, 1, 2, 0]);
        assert_eq!(p.read_path(&p.generator_loop(0)), vec![Letter::new(0)]);
    }

    #[test]
    fn point_has_no_generators() {
        let p = pi1_presentation(&SimplicialComplex::point("p"), 0).unwrap();
        assert_eq!(p.generator_count(), 0);
        assert_eq!(enumerate_homs(&p, &FiniteGroup::cyclic(3)), vec![Vec::<Elem>::new()]);
    }

    #[test]
    fn disconnected_rejected() {
        let x = SimplicialComplex::build([["a"], ["b"]]).unwrap();
        assert_eq!(pi1_presentation(&x, 0), Err(Pi1Error::Disconnected(2)));
    }

    #[test]
    fn free_group_hom_counts() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(enumerate_homs(&presentation(1, vec![]), &z2).len(), 2);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(enumerate_homs(&presentation(2, vec![]), &s3).len(), 36);
    }

    #[test]
    fn commuting_pairs_in_s3() {
        let (a, b) = (Letter::new(0), Letter::new(1));
        let commutator = vec![a, b, a.inv(), b.inv()];
        let s3 = FiniteGroup::symmetric(3);
        let homs = enumerate_homs(&presentation(2, vec![commutator]), &s3);
        assert_eq!(homs.len(), 18);
        // Oracle: direct count of commuting pairs.
        let commuting = s3
            .elements()
            .flat_map(|x| s3.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| s3.mul(x, y) == s3.mul(y, x))
            .count();
        assert_eq!(homs.len(), commuting);
    }

    #[test]
    fn projective_plane_has_order_two_fundamental_group() {
        let x = SimplicialComplex::build(
            [
                [1, 2, 3],
                [1, 3, 4],
                [1, 4, 5],
                [1, 5, 6],
                [1, 6, 2],
                [2, 3, 5],
                [3, 4, 6],
                [4, 5, 2],
                [5, 6, 3],
                [6, 2, 4],
            ]
            .map(|s| s.map(|v: i64| v)),
        )
        .unwrap();
        let p = pi1_presentation(&x, 0).unwrap();
        // Hom(Z/2, G) counts involutions plus the identity.
        assert_eq!(enumerate_homs(&p, &FiniteGroup::cyclic(2)).len(), 2);
        assert_eq!(enumerate_homs(&p, &FiniteGroup::cyclic(3)).len(), 1);
        assert_eq!(enumerate_homs(&p, &FiniteGroup::symmetric(3)).len(), 4);
    }
}
