//! Chain complexes of free abelian groups and their integral homology.

use serde::Serialize;
use thiserror::Error;

use super::matrix::{Overflow, SparseMatrix};
use super::smith::{invariant_factors, smith_left};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("boundary of degree {degree} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { degree: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("boundary of degree {0} composed with boundary of degree {1} is nonzero")]
    NotAComplex(usize, usize),
    #[error("chain of length {got} does not match rank {expected} in degree {degree}")]
    ChainLength { degree: usize, got: usize, expected: usize },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// `C_0 <- C_1 <- ... <- C_top`, with `boundary(k): C_k -> C_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `boundaries[k - 1]` is the boundary out of degree `k`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, ChainError> {
        assert_eq!(boundaries.len() + 1, ranks.len().max(1), "need one boundary per positive degree");
        for (i, d) in boundaries.iter().enumerate() {
            let k = i + 1;
            if d.rows() != ranks[k - 1] || d.cols() != ranks[k] {
                return Err(ChainError::Shape {
                    degree: k,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: ranks[k - 1],
                    expected_cols: ranks[k],
                });
            }
        }
        for (i, pair) in boundaries.windows(2).enumerate() {
            if !pair[0].compose(&pair[1]).is_zero() {
                return Err(ChainError::NotAComplex(i + 1, i + 2));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Boundary out of degree `k`, `None` for `k == 0` or above the top.
    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    /// Homology in degrees `0..=max_degree`; degrees above the top are zero.
    pub fn homology(&self, max_degree: usize) -> Result<HomologyResult, Overflow> {
        let factors: Vec<Vec<i128>> = (0..=max_degree + 1)
            .map(|k| match self.boundary(k) {
                Some(d) => invariant_factors(d),
                None => Ok(Vec::new()),
            })
            .collect::<Result<_, _>>()?;
        let groups = (0..=max_degree)
            .map(|k| {
                let rank_out = factors[k].len();
                let into = &factors[k + 1];
                HomologyGroup {
                    betti: self.rank(k) - rank_out - into.len(),
                    torsion: into.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect(),
                }
            })
            .collect();
        Ok(HomologyResult { groups })
    }

    /// Whether `chain` in degree `k` lies in the image of the boundary from
    /// degree `k + 1`.
    pub fn is_boundary(&self, k: usize, chain: &[i128]) -> Result<bool, ChainError> {
        if chain.len() != self.rank(k) {
            return Err(ChainError::ChainLength { degree: k, got: chain.len(), expected: self.rank(k) });
        }
        let Some(d) = self.boundary(k + 1) else {
            return Ok(chain.iter().all(|&x| x == 0));
        };
        // U d V = D, so d x = y is solvable iff D z = U y is.
        let (diag, u) = smith_left(&d.to_dense())?;
        let uy = u.mul_vec(chain)?;
        Ok(uy.iter().enumerate().all(|(i, &y)| match diag.get(i) {
            Some(&p) if p != 0 => y % p == 0,
            _ => y == 0,
        }))
    }

    /// Mapping cone of a chain map `f: source -> target`, with `f[k]` the
    /// degree-`k` component. The cone is acyclic exactly when `f` induces
    /// isomorphisms on all homology groups up to `top`.
    pub fn mapping_cone(
        source: &ChainComplex,
        target: &ChainComplex,
        f: &[SparseMatrix],
        top: usize,
    ) -> Result<ChainComplex, ChainError> {
        // Cone_n = C_{n-1}(source) + C_n(target); d(x, y) = (-dx, f x + dy).
        let src_rank = |k: isize| if k < 0 { 0 } else { source.rank(k as usize) };
        let ranks: Vec<usize> = (0..=top + 1).map(|n| src_rank(n as isize - 1) + target.rank(n)).collect();
        let mut boundaries = Vec::new();
        for n in 1..=top + 1 {
            let s_off = src_rank(n as isize - 2);
            let mut cols: Vec<Vec<(usize, i64)>> = Vec::with_capacity(ranks[n]);
            // Columns from C_{n-1}(source).
            for j in 0..src_rank(n as isize - 1) {
                let mut col = Vec::new();
                if n >= 2 {
                    if let Some(d) = source.boundary(n - 1) {
                        col.extend(d.column(j).iter().map(|&(i, v)| (i, -v)));
                    }
                }
                if let Some(fm) = f.get(n - 1) {
                    col.extend(fm.column(j).iter().map(|&(i, v)| (s_off + i, v)));
                }
                cols.push(col);
            }
            // Columns from C_n(target).
            for j in 0..target.rank(n) {
                let col = target
                    .boundary(n)
                    .map(|d| d.column(j).iter().map(|&(i, v)| (s_off + i, v)).collect())
                    .unwrap_or_default();
                cols.push(col);
            }
            boundaries.push(SparseMatrix::from_columns(ranks[n - 1], cols));
        }
        ChainComplex::new(ranks, boundaries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Torsion coefficients, each greater than one and dividing the next.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn torsion(&self, k: usize) -> &[u64] {
        self.groups.get(k).map_or(&[], |g| &g.torsion)
    }

    /// Homology of a point: `Z` in degree 0, nothing above.
    pub fn is_point_like(&self) -> bool {
        self.groups.first().is_some_and(|g| g.betti == 1 && g.torsion.is_empty())
            && self.groups.iter().skip(1).all(HomologyGroup::is_zero)
    }

    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(order: i64, top: usize) -> ChainComplex {
        // Z <-0- Z <-n- Z <-0- Z <-n- ...
        let ranks = vec![1; top + 1];
        let boundaries = (1..=top)
            .map(|k| {
                let v = if k % 2 == 0 { order } else { 0 };
                SparseMatrix::from_columns(1, vec![vec![(0, v)]])
            })
            .collect();
        ChainComplex::new(ranks, boundaries).unwrap()
    }

    #[test]
    fn periodic_complex_has_alternating_torsion() {
        let h = periodic(3, 4).homology(3).unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0, 0]);
        assert_eq!(h.torsion(1), &[3]);
        assert!(h.torsion(2).is_empty());
        assert_eq!(h.torsion(3), &[3]);
    }

    #[test]
    fn rejects_non_complex() {
        let d1 = SparseMatrix::from_columns(1, vec![vec![(0, 1)]]);
        let d2 = SparseMatrix::from_columns(1, vec![vec![(0, 1)]]);
        assert_eq!(ChainComplex::new(vec![1, 1, 1], vec![d1, d2]), Err(ChainError::NotAComplex(1, 2)));
    }

    #[test]
    fn boundary_membership() {
        let c = periodic(2, 3);
        assert!(!c.is_boundary(1, &[1]).unwrap());
        assert!(c.is_boundary(1, &[2]).unwrap());
        assert!(c.is_boundary(1, &[-4]).unwrap());
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let c = periodic(2, 3);
        let id: Vec<SparseMatrix> = (0..=3).map(|_| SparseMatrix::from_columns(1, vec![vec![(0, 1)]])).collect();
        let cone = ChainComplex::mapping_cone(&c, &c, &id, 2).unwrap();
        assert!(cone.homology(2).unwrap().is_acyclic());
        let doubling: Vec<SparseMatrix> = (0..=3).map(|_| SparseMatrix::from_columns(1, vec![vec![(0, 2)]])).collect();
        let cone = ChainComplex::mapping_cone(&c, &c, &doubling, 2).unwrap();
        assert!(!cone.homology(2).unwrap().is_acyclic());
    }
}
