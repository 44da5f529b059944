//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] returns the diagonal together with unimodular
//! transforms `U`, `V` such that `U * M * V = D`. [`invariant_factors`] skips
//! the transforms and first strips unit pivots from a sparse matrix, which is
//! what the homology code uses on large boundary operators.

use std::collections::BTreeSet;

use super::matrix::{mul, sub, IntMatrix, Overflow, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` diagonal entries, nonnegative, each dividing the next
    /// (zeros last).
    pub diagonal: Vec<i128>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.left.rows(), self.right.cols(), &self.diagonal)
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, Overflow> {
    let (diagonal, left, right) = reduce_dense(m.clone(), true, true)?;
    Ok(SmithForm {
        diagonal,
        left: left.expect("left transform requested"),
        right: right.expect("right transform requested"),
    })
}

/// Smith reduction keeping only the left transform.
pub(crate) fn smith_left(m: &IntMatrix) -> Result<(Vec<i128>, IntMatrix), Overflow> {
    let (d, u, _) = reduce_dense(m.clone(), true, false)?;
    Ok((d, u.expect("left transform requested")))
}

/// Diagonal with the optional left and right transforms.
type Reduction = (Vec<i128>, Option<IntMatrix>, Option<IntMatrix>);

#[allow(clippy::needless_range_loop)]
fn reduce_dense(mut a: IntMatrix, want_left: bool, want_right: bool) -> Result<Reduction, Overflow> {
    let (r, c) = (a.rows(), a.cols());
    let mut u = want_left.then(|| IntMatrix::identity(r));
    let mut v = want_right.then(|| IntMatrix::identity(c));
    let n = r.min(c);
    let mut diagonal = vec![0i128; n];

    'outer: for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j).abs();
                    if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                        best = Some((i, j, x));
                        if x == 1 {
                            break;
                        }
                    }
                }
                if matches!(best, Some((_, _, 1))) {
                    break;
                }
            }
            let Some((pi, pj, _)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            a.swap_cols(t, pj);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }

            let p = a.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let x = a.get(i, t);
                if x != 0 {
                    let q = x / p;
                    a.row_axpy(i, t, q)?;
                    if let Some(u) = u.as_mut() {
                        u.row_axpy(i, t, q)?;
                    }
                    clean &= a.get(i, t) == 0;
                }
            }
            for j in t + 1..c {
                let x = a.get(t, j);
                if x != 0 {
                    let q = x / p;
                    a.col_axpy(j, t, q)?;
                    if let Some(v) = v.as_mut() {
                        v.col_axpy(j, t, q)?;
                    }
                    clean &= a.get(t, j) == 0;
                }
            }
            if !clean {
                continue;
            }

            // Divisibility: fold an offending row into the pivot row and retry.
            let offending = (t + 1..r).find(|&i| (t + 1..c).any(|j| a.get(i, j) % p != 0));
            if let Some(i) = offending {
                a.row_axpy(t, i, -1)?;
                if let Some(u) = u.as_mut() {
                    u.row_axpy(t, i, -1)?;
                }
                continue;
            }
            if p < 0 {
                a.negate_row(t);
                if let Some(u) = u.as_mut() {
                    u.negate_row(t);
                }
            }
            diagonal[t] = a.get(t, t);
            break;
        }
    }
    Ok((diagonal, u, v))
}

/// Nonzero invariant factors of `m`, in divisibility order.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<i128>, Overflow> {
    let mut units = 0usize;
    let mut rows: Vec<Vec<(usize, i128)>> = vec![Vec::new(); m.rows()];
    for j in 0..m.cols() {
        for &(i, x) in m.column(j) {
            rows[i].push((j, x as i128));
        }
    }
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (i, row) in rows.iter().enumerate() {
        for &(j, _) in row {
            col_rows[j].insert(i);
        }
    }
    let mut alive: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();

    loop {
        // Markowitz-style choice among unit entries.
        let mut pivot: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for &(j, x) in row {
                if x.abs() == 1 {
                    let cost = (row.len() - 1) * (col_rows[j].len() - 1);
                    if pivot.is_none_or(|(_, _, c)| cost < c) {
                        pivot = Some((i, j, cost));
                    }
                }
            }
            if matches!(pivot, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        let prow = std::mem::take(&mut rows[pi]);
        let pval = prow.iter().find(|&&(j, _)| j == pj).map(|&(_, x)| x).unwrap();
        let targets: Vec<usize> = col_rows[pj].iter().copied().filter(|&i| i != pi).collect();
        for i in targets {
            let x = rows[i].iter().find(|&&(j, _)| j == pj).map(|&(_, x)| x).unwrap();
            let q = mul(x, pval)?; // pval is a unit, so x / pval == x * pval
            let old = std::mem::take(&mut rows[i]);
            let merged = sparse_axpy(&old, &prow, q)?;
            for &(j, _) in &old {
                col_rows[j].remove(&i);
            }
            for &(j, _) in &merged {
                col_rows[j].insert(i);
            }
            alive[i] = !merged.is_empty();
            rows[i] = merged;
        }
        for &(j, _) in &prow {
            col_rows[j].remove(&pi);
        }
        alive[pi] = false;
        units += 1;
    }

    // Whatever is left has no unit entries; finish densely.
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| alive[i]).collect();
    let mut live_cols: Vec<usize> =
        live_rows.iter().flat_map(|&i| rows[i].iter().map(|&(j, _)| j)).collect::<BTreeSet<_>>().into_iter().collect();
    live_cols.sort_unstable();
    let mut factors = vec![1i128; units];
    if !live_rows.is_empty() {
        let mut dense = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (ri, &i) in live_rows.iter().enumerate() {
            for &(j, x) in &rows[i] {
                let cj = live_cols.binary_search(&j).unwrap();
                dense.set(ri, cj, x);
            }
        }
        let (diag, _, _) = reduce_dense(dense, false, false)?;
        factors.extend(diag.into_iter().filter(|&d| d != 0));
    }
    Ok(factors)
}

/// `a - q * b` on sorted sparse rows.
fn sparse_axpy(a: &[(usize, i128)], b: &[(usize, i128)], q: i128) -> Result<Vec<(usize, i128)>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let take_a = k >= b.len() || (i < a.len() && a[i].0 < b[k].0);
        let take_b = i >= a.len() || (k < b.len() && b[k].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = sub(0, mul(q, b[k].1)?)?;
            out.push((b[k].0, v));
            k += 1;
        } else {
            let v = sub(a[i].1, mul(q, b[k].1)?)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_form(m: &IntMatrix, s: &SmithForm) {
        let prod = s.left.checked_mul(m).unwrap().checked_mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal_matrix());
        assert_eq!(s.left.determinant().unwrap().abs(), 1);
        assert_eq!(s.right.determinant().unwrap().abs(), 1);
        let nz: Vec<i128> = s.diagonal.iter().copied().filter(|&d| d != 0).collect();
        assert!(s.diagonal[nz.len()..].iter().all(|&d| d == 0), "zeros must trail");
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {:?}", s.diagonal);
        }
        assert!(nz.iter().all(|&d| d > 0));
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![1, 1, 1]);
        check_form(&m, &s);
    }

    #[test]
    fn zero_stays_zero() {
        let m = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![0, 0]);
        check_form(&m, &s);
    }

    #[test]
    fn diag_two_three_becomes_one_six() {
        let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![1, 6]);
        check_form(&m, &s);
    }

    #[test]
    fn empty_matrices() {
        let m = IntMatrix::zeros(0, 4);
        let s = smith_normal_form(&m).unwrap();
        assert!(s.diagonal.is_empty());
        assert_eq!(invariant_factors(&SparseMatrix::zeros(0, 4)).unwrap(), Vec::<i128>::new());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6)
            .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r))
    }

    proptest! {
        #[test]
        fn transforms_are_unimodular_and_diagonalize(rows in small_matrix()) {
            let m = IntMatrix::from_rows(&rows);
            let s = smith_normal_form(&m).unwrap();
            check_form(&m, &s);
        }

        #[test]
        fn sparse_factors_match_dense(rows in small_matrix()) {
            let m = IntMatrix::from_rows(&rows);
            let dense: Vec<i128> = smith_normal_form(&m).unwrap()
                .diagonal.into_iter().filter(|&d| d != 0).collect();
            let cols = (0..m.cols())
                .map(|j| (0..m.rows()).map(|i| (i, m.get(i, j) as i64)).collect())
                .collect();
            let sparse = SparseMatrix::from_columns(m.rows(), cols);
            prop_assert_eq!(invariant_factors(&sparse).unwrap(), dense);
        }
    }
}
