use crate::group::{Elem, FiniteGroup};
use crate::simplicial::{ChainComplex, HomologyResult, Overflow, SparseMatrix};

pub const DEFAULT_BAR_DIMENSION: usize = 4;

/// Normalized bar chains of a finite group, truncated at a dimension. A
/// `k`-chain generator is a tuple of `k` non-identity elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarComplex {
    group: FiniteGroup,
    dimension: usize,
    complex: ChainComplex,
}

/// Face `i` of a bar tuple, before normalization: the outer faces drop an
/// end, inner faces multiply neighbors.
pub fn bar_face(group: &FiniteGroup, tuple: &[Elem], i: usize) -> Vec<Elem> {
    let k = tuple.len();
    assert!(k > 0 && i <= k, "face {i} of a {k}-tuple");
    if i == 0 {
        tuple[1..].to_vec()
    } else if i == k {
        tuple[..k - 1].to_vec()
    } else {
        let mut out = tuple[..i - 1].to_vec();
        out.push(group.mul(tuple[i - 1], tuple[i]));
        out.extend_from_slice(&tuple[i + 1..]);
        out
    }
}

impl BarComplex {
    pub fn new(group: &FiniteGroup, dimension: usize) -> Self {
        let m = group.order() - 1;
        let ranks: Vec<usize> = (0..=dimension).map(|k| m.pow(k as u32)).collect();
        let boundaries = (1..=dimension)
            .map(|k| {
                let columns = (0..ranks[k])
                    .map(|j| {
                        let tuple = Self::tuple_at(group, k, j);
                        let mut col: Vec<(usize, i64)> = Vec::new();
                        for i in 0..=k {
                            if let Some(r) = Self::index_in(group, &bar_face(group, &tuple, i)) {
                                col.push((r, if i % 2 == 0 { 1 } else { -1 }));
                            }
                        }
                        col
                    })
                    .collect();
                SparseMatrix::from_columns(ranks[k - 1], columns)
            })
            .collect();
        let complex = ChainComplex::new(ranks, boundaries).expect("bar boundaries compose to zero");
        BarComplex { group: group.clone(), dimension, complex }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn rank(&self, k: usize) -> usize {
        self.complex.rank(k)
    }

    /// The `j`-th normalized `k`-tuple in lexicographic order.
    pub fn tuple(&self, k: usize, j: usize) -> Vec<Elem> {
        Self::tuple_at(&self.group, k, j)
    }

    /// Position of a tuple among the normalized generators, `None` when an
    /// entry is the identity.
    pub fn index(&self, tuple: &[Elem]) -> Option<usize> {
        Self::index_in(&self.group, tuple)
    }

    fn tuple_at(group: &FiniteGroup, k: usize, mut j: usize) -> Vec<Elem> {
        let m = group.order() - 1;
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = non_identity(group, j % m);
            j /= m;
        }
        out
    }

    fn index_in(group: &FiniteGroup, tuple: &[Elem]) -> Option<usize> {
        let m = group.order() - 1;
        let e = group.identity();
        tuple.iter().try_fold(
            0usize,
            |acc, &g| {
                if g == e {
                    None
                } else {
                    Some(acc * m + if g < e { g } else { g - 1 })
                }
            },
        )
    }

    /// Homology in the degrees below the truncation dimension, and always in
    /// degree 0.
    pub fn homology(&self) -> Result<HomologyResult, Overflow> {
        self.complex.homology(self.dimension.saturating_sub(1))
    }
}

fn non_identity(group: &FiniteGroup, i: usize) -> Elem {
    let e = group.identity();
    if i < e {
        i
    } else {
        i + 1
    }
}

pub fn bar_construction(group: &FiniteGroup, dimension: usize) -> BarComplex {
    BarComplex::new(group, dimension)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_is_a_point() {
        let b = bar_construction(&FiniteGroup::trivial(), 4);
        assert_eq!(b.chain_complex().ranks(), &[1, 0, 0, 0, 0]);
        assert!(b.homology().unwrap().is_point_like());
    }

    #[test]
    fn order_two_is_periodic() {
        let h = bar_construction(&FiniteGroup::cyclic(2), 4).homology().unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0, 0]);
        assert_eq!(h.torsion(1), &[2]);
        assert!(h.torsion(2).is_empty());
        assert_eq!(h.torsion(3), &[2]);
    }

    #[test]
    fn cyclic_order_three() {
        let h = bar_construction(&FiniteGroup::cyclic(3), 4).homology().unwrap();
        assert_eq!(h.torsion(1), &[3]);
        assert!(h.torsion(2).is_empty());
        assert_eq!(h.torsion(3), &[3]);
    }

    #[test]
    fn symmetric_group_abelianizes_to_order_two() {
        let h = bar_construction(&FiniteGroup::symmetric(3), 3).homology().unwrap();
        assert_eq!(h.betti()[1], 0);
        assert_eq!(h.torsion(1), &[2]);
        assert!(h.torsion(2).is_empty());
    }

    #[test]
    fn klein_four_group() {
        // H_1 = (Z/2)^2, H_2 = Z/2.
        let v4 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let h = bar_construction(&v4, 3).homology().unwrap();
        assert_eq!(h.torsion(1), &[2, 2]);
        assert_eq!(h.torsion(2), &[2]);
    }

    #[test]
    fn tuples_round_trip() {
        let g = FiniteGroup::symmetric(3);
        let b = bar_construction(&g, 2);
        for j in 0..b.rank(2) {
            let t = b.tuple(2, j);
            assert!(t.iter().all(|&x| x != g.identity()));
            assert_eq!(b.index(&t), Some(j));
        }
        assert_eq!(b.index(&[g.identity(), 1]), None);
    }

    #[test]
    fn degree_one_boundary_vanishes() {
        let b = bar_construction(&FiniteGroup::cyclic(5), 2);
        assert!(b.chain_complex().boundary(1).unwrap().is_zero());
    }
}
