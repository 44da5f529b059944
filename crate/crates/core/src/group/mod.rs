//! Finite groups in multiplication-table form, their actions on finite sets,
//! and crossed modules.

mod action;
mod crossed;

pub use action::{ActionError, GroupAction};
pub use crossed::{CrossedModule, CrossedModuleError};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// Element label `0..order`, with `0` the identity.
pub type Elem = usize;

/// Generator images of a homomorphism out of a presented group.
pub type GroupHom = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not a two-sided identity: 0*{0} or {0}*0 differs from {0}")]
    Identity(Elem),
    #[error("element {0} has no two-sided inverse")]
    Inverse(Elem),
    #[error("associativity fails for ({0}, {1}, {2})")]
    Associativity(Elem, Elem, Elem),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

impl FiniteGroup {
    /// Checks every group axiom exhaustively.
    pub fn from_table(rows: Vec<Vec<Elem>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare { row, len: r.len(), order });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        let table: Vec<Elem> = rows.into_iter().flatten().collect();
        let m = |a: Elem, b: Elem| table[a * order + b];
        if let Some(a) = (0..order).find(|&a| m(0, a) != a || m(a, 0) != a) {
            return Err(GroupError::Identity(a));
        }
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| m(a, b) == 0 && m(b, a) == 0).ok_or(GroupError::Inverse(a)))
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab = m(a, b);
                for c in 0..order {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(GroupError::Associativity(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(rows).expect("cyclic table is a group")
    }

    /// Symmetric group on `n` letters. Elements are the permutations in
    /// lexicographic order (identity first); `a * b` is `a` after `b`.
    pub fn symmetric(n: usize) -> Self {
        let perms = all_permutations(n);
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let rows = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(rows).expect("permutation composition is a group")
    }

    /// Dihedral group of order `2n`: element `k` is the rotation `r^k` for
    /// `k < n` and the reflection `s r^(k-n)` otherwise.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let enc = |refl: bool, rot: usize| if refl { n + rot } else { rot };
        let dec = |k: usize| (k >= n, k % n);
        let rows = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (sa, ra) = dec(a);
                        let (sb, rb) = dec(b);
                        // s^sa r^ra s^sb r^rb, using r s = s r^-1
                        let rot = if sb { (rb + n - ra) % n } else { (ra + rb) % n };
                        enc(sa ^ sb, rot)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(rows).expect("dihedral table is a group")
    }

    /// `G x H` with `(g, h)` encoded as `g * |H| + h`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order;
        let n = self.order * m;
        let rows =
            (0..n).map(|a| (0..n).map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m)).collect()).collect();
        Self::from_table(rows).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn product_of(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    /// `g a g^-1`.
    pub fn conjugate(&self, g: Elem, a: Elem) -> Elem {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table_rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order).map(<[Elem]>::to_vec).collect()
    }

    /// Orbits of the conjugation action, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in self.elements() {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<Elem> = self.elements().map(|g| self.conjugate(g, a)).collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut members = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members.into_iter().collect()
    }

    pub fn is_homomorphism_to(&self, target: &FiniteGroup, images: &[Elem]) -> bool {
        images.len() == self.order
            && images.iter().all(|&x| x < target.order)
            && self
                .elements()
                .all(|a| self.elements().all(|b| images[self.mul(a, b)] == target.mul(images[a], images[b])))
    }
}

/// Partition homomorphisms (as generator-image tuples) into classes under
/// simultaneous conjugation of all images. Each class is sorted and classes
/// are ordered by their least member.
pub fn hom_conjugacy_classes(homs: &[GroupHom], group: &FiniteGroup) -> Vec<Vec<GroupHom>> {
    let mut classes: BTreeMap<GroupHom, BTreeSet<GroupHom>> = BTreeMap::new();
    for h in homs {
        let canonical = group
            .elements()
            .map(|g| h.iter().map(|&x| group.conjugate(g, x)).collect::<GroupHom>())
            .min()
            .unwrap_or_default();
        classes.entry(canonical).or_default().insert(h.clone());
    }
    let mut out: Vec<Vec<GroupHom>> = classes.into_values().map(|c| c.into_iter().collect()).collect();
    out.sort();
    out
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
